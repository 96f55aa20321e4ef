#include "optocirc/elimination.hpp"

#include "optocirc/error.hpp"

#include <algorithm>
#include <cmath>

namespace optocirc {

namespace {

struct Lorentz {
    double den;
    Complex factor;
};

Lorentz lorentz(double detuning, double rate_difference, const char* pair) {
    const double half = rate_difference / 2.0;
    const double den = detuning * detuning + half * half;
    if (den == 0.0)
        throw SingularError(std::string("elimination denominator vanishes for degenerate pair ") + pair);
    return {den, Complex{detuning, half} / den};
}

} // namespace

XiFactors xi_factors(const LinearizedModel& lm) {
    const Lorentz c = lorentz(lm.delta_c1_prime - lm.delta_c2, lm.kappa1 - lm.kappa2, "(a1, a2)");
    const Lorentz m1 = lorentz(lm.delta_c1_prime - lm.omega_m1, lm.kappa1 - lm.gamma1, "(a1, b1)");
    const Lorentz m2 = lorentz(lm.delta_c1_prime - lm.omega_m2, lm.kappa1 - lm.gamma2, "(a1, b2)");
    XiFactors x;
    x.xi_c = std::norm(lm.cJ) / c.den;
    x.xi_m1 = std::norm(lm.G1) / m1.den;
    x.xi_m2 = std::norm(lm.G2) / m2.den;
    x.xi_1 = m1.factor;
    x.xi_2 = m2.factor;
    x.xi = c.factor;
    return x;
}

EffectiveModel eliminate(const LinearizedModel& lm) {
    const XiFactors x = xi_factors(lm);
    const Complex J = effective_J(lm);
    const Complex self = J * J * x.xi;

    EffectiveModel em;
    em.source = ModelSource::microscopic;
    em.xi = x;
    if (J.imag() == 0.0) {
        em.delta_eff = lm.delta_c2 - x.xi_c * (lm.delta_c1_prime - lm.delta_c2);
        em.kappa_eff = lm.kappa2 + x.xi_c * (lm.kappa1 - lm.kappa2);
    } else {
        em.delta_eff = lm.delta_c2 - self.real();
        em.kappa_eff = lm.kappa2 + 2.0 * self.imag();
    }
    em.omega_eff1 = lm.omega_m1 - x.xi_m1 * (lm.delta_c1_prime - lm.omega_m1);
    em.omega_eff2 = lm.omega_m2 - x.xi_m2 * (lm.delta_c1_prime - lm.omega_m2);
    em.gamma_eff1 = lm.gamma1 + x.xi_m1 * (lm.kappa1 - lm.gamma1);
    em.gamma_eff2 = lm.gamma2 + x.xi_m2 * (lm.kappa1 - lm.gamma2);
    em.Gp1 = J * lm.G1 * x.xi_1;
    em.Gp2 = J * lm.G2 * x.xi_2;
    em.Gpp1 = J * std::conj(lm.G1) * x.xi;
    em.Gpp2 = J * std::conj(lm.G2) * x.xi;
    em.V1 = std::conj(lm.G1) * lm.G2 * x.xi_2 - lm.V;
    em.V2 = std::conj(lm.G2) * lm.G1 * x.xi_1 - lm.V;
    return em;
}

bool ValidityReport::all_pass() const {
    return std::none_of(ratios.begin(), ratios.end(), [](const ValidityRatio& r) { return r.warn; });
}

ValidityReport validity_report(const LinearizedModel& lm, double threshold) {
    ValidityReport rep;
    rep.threshold = threshold;
    auto add = [&](const char* name, double num, double den) {
        const double v = (den != 0.0) ? std::abs(num / den) : HUGE_VAL;
        rep.ratios.push_back({name, v, !(v <= threshold)});
    };
    add("J/delta_c2", std::abs(lm.cJ), lm.delta_c2);
    add("G1/omega_m1", std::abs(lm.G1), lm.omega_m1);
    add("G2/omega_m2", std::abs(lm.G2), lm.omega_m2);
    add("V/omega_m1", lm.V, lm.omega_m1);
    add("V/omega_m2", lm.V, lm.omega_m2);
    add("gamma1/kappa1", lm.gamma1, lm.kappa1);
    add("gamma2/kappa1", lm.gamma2, lm.kappa1);
    add("kappa2/kappa1", lm.kappa2, lm.kappa1);
    return rep;
}

double HermiticityDefects::max() const { return std::max({G1, G2, V}); }

HermiticityDefects effective_hamiltonian_couplings(const EffectiveModel& em) {
    return {std::abs(std::conj(em.Gp1) - em.Gpp1), std::abs(std::conj(em.Gp2) - em.Gpp2),
            std::abs(std::conj(em.V1) - em.V2)};
}

} // namespace optocirc
