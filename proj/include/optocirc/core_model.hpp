#pragma once

// Microscopic two-cavity / two-oscillator model: parameters, mean-field
// steady state and the linearized four-mode description.
//
// All frequencies and rates are dimensionless, in units of a reference
// frequency (by convention the first mechanical frequency); hbar = 1.

#include "optocirc/types.hpp"

#include <cstddef>

namespace optocirc {

struct PhysicalParams {
    double omega_c1 = 0.0;
    double omega_c2 = 0.0;
    double omega_m1 = 0.0;
    double omega_m2 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double V = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    Complex eps1{0.0, 0.0};
    Complex eps2{0.0, 0.0};
    double omega_d1 = 0.0;
    double omega_d2 = 0.0;
    double phi = pi / 2.0;  // fiber phase delay [rad]

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

// Throws DomainError unless frequencies and rates are strictly positive and
// every field is finite. Returns a copy with phi wrapped into [0, 2π).
PhysicalParams validated(const PhysicalParams& p);

struct Detunings {
    double delta_c1;
    double delta_c2;
};

Detunings derive_detunings(const PhysicalParams& p);

// Complex fiber-mediated coupling sqrt(kappa1 kappa2) exp(-i phi). The
// Langevin drift on a1 from a2 (and on a2 from a1) is exactly cJ times the
// other amplitude; at phi = π/2 this is the familiar -iJ with J = sqrt(k1 k2).
Complex fiber_coupling(double kappa1, double kappa2, double phi);

struct MeanField {
    Complex alpha1{};
    Complex alpha2{};
    Complex beta1{};
    Complex beta2{};
    double delta_c1_prime = 0.0;
    double residual = 0.0;
    int iterations = 0;
    // Number of distinct real fixed points of the self-consistency equation.
    // More than one means the drive sits in an optomechanically multistable
    // window; the fields above hold the branch the iteration converged to.
    int fixed_point_count = 1;

    bool multistable() const { return fixed_point_count > 1; }
};

struct MeanFieldOptions {
    double tol = 1e-12;
    int max_iter = 10000;
    double damping = 0.5;
    int newton_after = 50;
};

MeanField solve_mean_field(const PhysicalParams& p, const MeanFieldOptions& opts = {});

// Max-norm of the four classical steady-state equations evaluated at mf.
double mean_field_residual(const PhysicalParams& p, const MeanField& mf);

struct LinearizedModel {
    double delta_c1_prime = 0.0;
    double delta_c2 = 0.0;
    double omega_m1 = 0.0;
    double omega_m2 = 0.0;
    Complex G1{};
    Complex G2{};
    Complex cJ{};
    double V = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;

    friend bool operator==(const LinearizedModel&, const LinearizedModel&) = default;
};

LinearizedModel linearize(const PhysicalParams& p, const MeanField& mf);

// Fiber coupling in the conventional "-iJ" form: returns J such that
// cJ = -i J. Real and equal to |cJ| at phi = π/2.
inline Complex effective_J(const LinearizedModel& lm) { return Complex{0.0, 1.0} * lm.cJ; }

} // namespace optocirc
