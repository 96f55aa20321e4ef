#pragma once

// Continuous-variable Bell-CHSH evaluation: the reduced closed form, the
// four-term coefficient expression and an operator-level evaluation with
// parity pseudospins on a truncated Fock space.

#include "optocirc/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace optocirc {

struct MeasurementVector {
    double theta = 0.0;  // polar, [0, π]
    double phi = 0.0;    // azimuthal, [0, 2π)
};

// Throws DomainError for theta outside [0, π]; wraps phi.
MeasurementVector measurement(double theta, double phi = 0.0);

// 2 (cos θ + sin θ α2 sqrt(1 - α2^2))^2. Throws DomainError unless α2 in [0, 1].
double chsh_closed_form(double theta, double alpha2);

// 2 [cosθa cosθb + cosθa sinθb (e^{iφb} α1*α2 + c.c.)
//    + sinθa cosθb (e^{iφa} β1*β2 + c.c.)
//    + 2 sinθa sinθb (e^{i(φb-φa)} α1*α2 β1 β2* + c.c.)].
// α are the a2 coefficients on {|0>, |1>}, β those of b1.
double chsh_general(double theta_a, double theta_b, double phi_a, double phi_b, Complex alpha1, Complex alpha2,
                    Complex beta1, Complex beta2);

struct PseudospinSet {
    int n_trunc = 0;
    Eigen::MatrixXcd s_z;
    Eigen::MatrixXcd s_plus;
    Eigen::MatrixXcd s_minus;

    // s_z cos θ + sin θ (e^{iφ} s_- + e^{-iφ} s_+)
    Eigen::MatrixXcd along(const MeasurementVector& v) const;
};

// s_z = diag(-1, +1, -1, ...), s_- = Σ |2n><2n+1|. Throws DomainError unless
// n_trunc is even and >= 4.
PseudospinSet build_pseudospin(int n_trunc);

// psi(i, j) is the amplitude of |i>_1 |j>_2. Mode 1 is measured along a, a';
// mode 2 along b, b'. Returns <ab + ab' + a'b - a'b'>.
// Throws DomainError for an unnormalized state, TruncationError when psi has
// weight beyond n_trunc levels.
double chsh_operator_oracle(const Eigen::MatrixXcd& psi, const MeasurementVector& a, const MeasurementVector& a2,
                            const MeasurementVector& b, const MeasurementVector& b2, int n_trunc = 20);

// Product state (m1|0> + m2|1> + m3|2>) ⊗ (same) with m normalized.
Eigen::MatrixXcd product_state(const Eigen::Vector3cd& m1, const Eigen::Vector3cd& m2);

struct BellScan {
    std::vector<double> theta_grid;
    std::vector<double> alpha2_grid;
    std::vector<double> values;          // row-major: theta outer, alpha2 inner
    std::vector<unsigned char> violation;  // values > 2

    double value(std::size_t it, std::size_t ia) const { return values[it * alpha2_grid.size() + ia]; }
    std::size_t violation_count() const;
};

// |closed form| on the grid. Throws DomainError for an empty grid or α2
// outside [0, 1].
BellScan violation_scan(const std::vector<double>& theta_grid, const std::vector<double>& alpha2_grid);

struct BellPeak {
    double theta = 0.0;
    double alpha2 = 0.0;
    double value = 0.0;
};

// Best grid point of the scan, refined by alternating golden-section searches
// in θ and α2 within one grid cell.
BellPeak refine_peak(const BellScan& scan);

} // namespace optocirc
