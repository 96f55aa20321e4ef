#pragma once

// Four-mode linearized dynamics over [a1, a2, b1, b2] before elimination.
// Serves as the reference against which the three-mode model is checked, in
// the frequency domain and by direct time integration.

#include "optocirc/core_model.hpp"
#include "optocirc/elimination.hpp"
#include "optocirc/scattering.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace optocirc {

struct FullModel {
    Eigen::Matrix4cd M4;    // drift: dQ/dt = -M4 Q + N4 Q_in
    Eigen::Matrix4cd N4;    // input coupling from [a_in1, a_in2, b_in1, b_in2]
    Eigen::Vector4d Lout;   // out_k = Lout_k Q_k - in_k
};

// The fiber mixes only the two cavity inputs: the a1 row receives
// sqrt(κ1)(a_in1 - (cJ/|cJ|) a_in2) and symmetrically for a2.
FullModel build_full(const LinearizedModel& lm);

// Generic linear input-output network: dq/dt = -M q + Bin in,
// out = Cout q - in. Square Bin and Cout.
struct LinearNetwork {
    Eigen::MatrixXcd M;
    Eigen::MatrixXcd Bin;
    Eigen::MatrixXcd Cout;
};

LinearNetwork network_of(const FullModel& fm);
LinearNetwork network_of(const CoefficientMatrix& cm);

// Cout (M - iω)^-1 Bin - I. Throws SingularError at a singular point.
Eigen::MatrixXcd network_scattering(const LinearNetwork& net, double omega);

// Physical-port scattering restricted to [a2, b1, b2]; a1 acts as an
// internal loss channel.
TransmissionSpectrum full_spectrum(const FullModel& fm, const std::vector<double>& omegas);

// The slow block of (M4 - iω)^-1 dressed with the effective couplings
// sqrt(κ_eff), sqrt(γ_eff,j). This differs from the three-mode Γ only by the
// Markov approximation made during elimination.
TransmissionSpectrum full_spectrum_effective_ports(const FullModel& fm, const EffectiveModel& em,
                                                   const std::vector<double>& omegas);

struct TimeDomainOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double drift_tol = 1e-9;
    double min_horizon_factor = 20.0;  // horizon >= factor / margin
    double horizon = 0.0;              // extra lower bound on the horizon
    std::size_t max_settle_periods = 100000;
};

struct TimeDomainResult {
    std::vector<Complex> outputs;  // steady output amplitude per port
    std::vector<double> power_ratio;
    double t_end = 0.0;
    StabilityReport stability;
};

// Integrates the network in the frame rotating at the drive frequency with a
// constant coherent input on one port until the outputs settle. Throws
// DomainError for an unstable drift matrix and IterationError if the outputs
// fail to settle.
TimeDomainResult time_domain_response(const LinearNetwork& net, std::size_t input_port, Complex amplitude,
                                      double omega, const TimeDomainOptions& opts = {});

struct PairDeviation {
    PortPair pair;
    double max_abs = 0.0;
    double max_rel = 0.0;
    double peak_effective = 0.0;
    double peak_full = 0.0;
    double peak_rel = 0.0;  // |peak_full - peak_effective| / peak_effective
};

struct AgreementReport {
    std::vector<PairDeviation> pairs;  // all nine (out, in) combinations
    double max_abs = 0.0;
    double max_peak_rel = 0.0;         // over off-diagonal pairs
    ValidityReport validity;

    const PairDeviation& at(PortPair p) const;
};

// Effective three-mode T against the four-mode effective-port T on the same
// grid. Peaks are refined around the best grid point.
AgreementReport compare_models(const LinearizedModel& lm, const std::vector<double>& omegas);

} // namespace optocirc
