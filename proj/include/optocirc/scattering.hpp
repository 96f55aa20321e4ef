#pragma once

// Three-mode input-output scattering over ports [a2, b1, b2]: coefficient
// matrix, Γ(ω), transmission spectra, extremum searches, parameter sweeps and
// the circulator operating-point search.

#include "optocirc/elimination.hpp"
#include "optocirc/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace optocirc {

struct PhenomenologicalCouplings {
    double G10 = 0.0;
    double G20 = 0.0;
    double V0 = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta3 = 0.0;

    friend bool operator==(const PhenomenologicalCouplings&, const PhenomenologicalCouplings&) = default;
};

// Gauge-invariant phase accumulated around the a2 -> b1 -> b2 loop, in [0, 2π).
double loop_phase(const PhenomenologicalCouplings& pc);

struct EffectiveRates {
    double delta_eff = 0.0;
    double omega_eff1 = 0.0;
    double omega_eff2 = 0.0;
    double kappa_eff = 0.0;
    double gamma_eff1 = 0.0;
    double gamma_eff2 = 0.0;

    friend bool operator==(const EffectiveRates&, const EffectiveRates&) = default;
};

// G'_j = G_j0 e^{-iθ_j}, G''_j = G'_j*, V1 = V0 e^{-iθ3}, V2 = V1*.
// Throws DomainError for negative magnitudes or nonpositive rates.
EffectiveModel phenomenological_model(const PhenomenologicalCouplings& pc, const EffectiveRates& rates);

EffectiveRates rates_of(const EffectiveModel& em);

struct CoefficientMatrix {
    Eigen::Matrix3cd M;
    Eigen::Vector3d L;
};

// Throws DomainError for a nonpositive effective rate.
CoefficientMatrix build_M(const EffectiveModel& em);

// Throws SingularError when M - iω is singular.
Eigen::Matrix3cd gamma_at(const CoefficientMatrix& cm, double omega);

struct TransmissionSpectrum {
    std::vector<double> omegas;
    std::vector<Eigen::Matrix3cd> gamma;
    std::vector<Eigen::Matrix3d> T;  // T[out][in] = |Γ[out][in]|^2
};

struct FrequencyGrid {
    double omega_min = 0.0;
    double omega_max = 0.0;
    std::size_t n = 0;

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

// Evenly spaced points; n = 1 requires omega_min = omega_max. Throws
// DomainError for an empty or non-increasing grid.
std::vector<double> grid_points(const FrequencyGrid& g);

// Centered on the mean of (Δ_eff, ω_eff1, ω_eff2); the half-width covers the
// mode spread plus five of the largest linewidth plus twice the largest
// coupling, so every normal-mode resonance lies inside.
FrequencyGrid default_grid(const EffectiveModel& em, std::size_t n = 2001);

// Throws DomainError unless omegas is nonempty and strictly increasing.
TransmissionSpectrum spectrum(const CoefficientMatrix& cm, const std::vector<double>& omegas);
TransmissionSpectrum spectrum(const EffectiveModel& em, const std::vector<double>& omegas);

double transmission(const CoefficientMatrix& cm, PortPair pair, double omega);

enum class Extremum { max, min };

struct ExtremumResult {
    double omega = 0.0;
    double value = 0.0;
};

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

// Coarse scan followed by golden-section refinement around the best coarse
// point to |Δω| <= 1e-10. The result is never worse than the coarse best.
ExtremumResult extremum_scan(const CoefficientMatrix& cm, PortPair pair, Window window, Extremum kind,
                             std::size_t coarse_points = 2001);
ExtremumResult extremum_scan(const EffectiveModel& em, PortPair pair, Window window, Extremum kind,
                             std::size_t coarse_points = 2001);

// Same search for an arbitrary scalar function of Γ.
template <class F>
ExtremumResult extremum_of(const CoefficientMatrix& cm, F&& f, Window window, Extremum kind,
                           std::size_t coarse_points = 2001);

struct StabilityReport {
    std::vector<Complex> eigenvalues;
    double margin = 0.0;  // min Re λ
    bool stable = false;
};

StabilityReport stability_check(const Eigen::MatrixXcd& M);
StabilityReport stability_check(const CoefficientMatrix& cm);

// Sweeps. A template is either a phenomenological model or a linearized
// microscopic model pushed through elimination.
struct PhenomenologicalTemplate {
    PhenomenologicalCouplings couplings;
    EffectiveRates rates;
};

using SweepTemplate = std::variant<PhenomenologicalTemplate, LinearizedModel>;

struct SweepAxis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 1;

    friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct SweepResult {
    std::vector<SweepAxis> axes;
    std::vector<std::vector<double>> axis_values;
    std::string metric;
    std::vector<double> values;  // row-major in axis declaration order
};

std::vector<std::string> sweep_parameters(const SweepTemplate& t);
std::vector<std::string> sweep_metrics();

// Metrics: delta_eff, omega_eff1, omega_eff2, kappa_eff, gamma_eff1,
// gamma_eff2, and max_T_<out><in> / min_T_<out><in> over the default window
// of each point. Throws ConfigError on unknown names.
SweepResult sweep(const SweepTemplate& t, const std::vector<SweepAxis>& axes, const std::string& metric,
                  unsigned threads = 0);

// Evaluates one metric on one model.
double evaluate_metric(const EffectiveModel& em, const std::string& metric);

struct CirculatorOptimum {
    double magnitude = 0.0;
    double loop_phase = 0.0;
    double omega = 0.0;
    double forward = 0.0;   // transmission in the favoured direction
    double backward = 0.0;  // transmission in the opposite direction
    double isolation_db = 0.0;
};

struct CirculatorSearch {
    // b1 -> a2 favoured: T[a2][b1] high, T[b1][a2] low.
    std::vector<CirculatorOptimum> forward_optima;
    // a2 -> b1 favoured.
    std::vector<CirculatorOptimum> reverse_optima;
};

struct CirculatorSearchOptions {
    std::size_t phase_points = 360;
    std::size_t omega_points = 2001;
    double phase_tol = 1e-9;
    // Local maxima of the contrast below this fraction of the global maximum
    // are discarded.
    double keep_fraction = 0.9;
};

// Common magnitude G10 = G20 = V0 = magnitude; loop phase carried by θ1 with
// θ2 = θ3 = 0. Maximizes the contrast T_fwd - T_bwd at a common ω for each
// direction and reports every well-separated optimum.
CirculatorSearch find_circulator_point(const EffectiveRates& rates, double magnitude,
                                       const CirculatorSearchOptions& opts = {});

// Isolation and transmissions at the best common ω for a given loop phase.
CirculatorOptimum circulator_at(const EffectiveRates& rates, double magnitude, double loop_phase,
                                bool forward_direction, std::size_t omega_points = 2001);

double isolation_db(double forward, double backward);

} // namespace optocirc

#include "optocirc/detail/extremum.ipp"
