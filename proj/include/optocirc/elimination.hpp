#pragma once

// Adiabatic elimination of the fast cavity mode a1. Produces the three-mode
// model over [a2, b1, b2] together with its correction factors.

#include "optocirc/core_model.hpp"
#include "optocirc/types.hpp"

#include <string>
#include <vector>

namespace optocirc {

struct XiFactors {
    double xi_c = 0.0;   // |J|^2 / den_c
    double xi_m1 = 0.0;  // |G1|^2 / den_m1
    double xi_m2 = 0.0;
    Complex xi_1{};      // ((Δ'-ω_m1) + i(κ1-γ1)/2) / den_m1
    Complex xi_2{};
    Complex xi{};        // ((Δ'-Δ_c2) + i(κ1-κ2)/2) / den_c
};

// Throws SingularError when Δ'_c1 = Δ_c2 with κ1 = κ2, or Δ'_c1 = ω_mj with
// κ1 = γ_j.
XiFactors xi_factors(const LinearizedModel& lm);

enum class ModelSource { microscopic, phenomenological };

struct EffectiveModel {
    double delta_eff = 0.0;
    double omega_eff1 = 0.0;
    double omega_eff2 = 0.0;
    double kappa_eff = 0.0;
    double gamma_eff1 = 0.0;
    double gamma_eff2 = 0.0;
    Complex Gp1{};
    Complex Gp2{};
    Complex Gpp1{};
    Complex Gpp2{};
    Complex V1{};
    Complex V2{};
    ModelSource source = ModelSource::phenomenological;
    XiFactors xi{};  // populated only for microscopic models

    friend bool operator==(const EffectiveModel& a, const EffectiveModel& b) {
        return a.delta_eff == b.delta_eff && a.omega_eff1 == b.omega_eff1 && a.omega_eff2 == b.omega_eff2
               && a.kappa_eff == b.kappa_eff && a.gamma_eff1 == b.gamma_eff1 && a.gamma_eff2 == b.gamma_eff2
               && a.Gp1 == b.Gp1 && a.Gp2 == b.Gp2 && a.Gpp1 == b.Gpp1 && a.Gpp2 == b.Gpp2 && a.V1 == b.V1
               && a.V2 == b.V2 && a.source == b.source;
    }
};

// The fiber enters through J = i·cJ, so the two directions of the a1-a2 link
// carry the same complex J. The a2 self-energy J^2 ξ shifts Δ_eff by -Re and
// κ_eff by +2 Im; for real J this is Δ_c2 - ξ_c(Δ'-Δ_c2) and κ2 + ξ_c(κ1-κ2).
EffectiveModel eliminate(const LinearizedModel& lm);

struct ValidityRatio {
    std::string name;
    double value = 0.0;
    bool warn = false;
};

struct ValidityReport {
    double threshold = 0.2;
    std::vector<ValidityRatio> ratios;  // J/Δ_c2, |G_j|/ω_mj, |V|/ω_mj, γ_j/κ1, κ2/κ1

    bool all_pass() const;
};

ValidityReport validity_report(const LinearizedModel& lm, double threshold = 0.2);

struct HermiticityDefects {
    double G1 = 0.0;  // |G'_1* - G''_1|
    double G2 = 0.0;
    double V = 0.0;   // |V1* - V2|

    double max() const;
};

HermiticityDefects effective_hamiltonian_couplings(const EffectiveModel& em);

} // namespace optocirc
