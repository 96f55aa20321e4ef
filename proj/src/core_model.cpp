#include "optocirc/core_model.hpp"

#include "optocirc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optocirc {

double normalize_angle(double angle) {
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;  // fmod of a tiny negative can round up to 2π
    return r;
}

namespace {

constexpr Complex I{0.0, 1.0};

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be finite and > 0 (got " + std::to_string(v) + ")");
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw DomainError(std::string(name) + " must be finite");
}

// The steady-state problem reduces to a scalar fixed point in the effective
// detuning x = Δ'_c1: for fixed x the cavity amplitudes solve a 2x2 linear
// system, the mechanical amplitudes are linear in n = |α1|^2, and
// Δ'_c1 = Δ_c1 + s·n(x). n(x) is a Lorentzian A / (R^2 + (x + c)^2).
struct ScalarFixedPoint {
    double delta_c1;
    Complex z2;     // iΔ_c2 + κ2/2
    Complex cJ;
    Complex num;    // α1 = num / det(x)
    Complex w;      // det(x) = z2 (i x + w)
    Complex eps2;
    Complex beta_per_n1;
    Complex beta_per_n2;
    double s;

    ScalarFixedPoint(const PhysicalParams& p, const Detunings& d) {
        delta_c1 = d.delta_c1;
        z2 = Complex{p.kappa2 / 2.0, d.delta_c2};
        cJ = fiber_coupling(p.kappa1, p.kappa2, p.phi);
        eps2 = p.eps2;
        num = -I * p.eps1 * z2 - I * cJ * p.eps2;
        w = p.kappa1 / 2.0 - cJ * cJ / z2;

        const Complex w1{p.gamma1 / 2.0, p.omega_m1};
        const Complex w2{p.gamma2 / 2.0, p.omega_m2};
        const Complex det_b = w1 * w2 + p.V * p.V;
        beta_per_n1 = (-I * p.g1 * w2 - p.V * p.g2) / det_b;
        beta_per_n2 = (-I * p.g2 * w1 - p.V * p.g1) / det_b;
        s = 2.0 * (p.g1 * beta_per_n1.real() + p.g2 * beta_per_n2.real());
    }

    Complex det(double x) const { return z2 * (I * x + w); }
    Complex alpha1(double x) const { return num / det(x); }
    Complex alpha2(const Complex& a1) const { return (-I * eps2 + cJ * a1) / z2; }
    double photons(double x) const { return std::norm(alpha1(x)); }
    double map(double x) const { return delta_c1 + s * photons(x); }

    double dphotons(double x) const {
        const double lor = std::norm(w.real()) + (x + w.imag()) * (x + w.imag());
        const double amp = std::norm(num) / std::norm(z2);
        return -amp * 2.0 * (x + w.imag()) / (lor * lor);
    }

    // Real roots of x = Δ_c1 + s A / (R^2 + (x + c)^2), counted through the
    // discriminant of the equivalent cubic in y = x + c.
    int count_fixed_points() const {
        const double amp = std::norm(num) / std::norm(z2);
        if (s == 0.0 || amp == 0.0) return 1;
        const double r2 = w.real() * w.real();
        const double dd = delta_c1 + w.imag();
        // y^3 + a y^2 + b y + c0 = 0
        const double a = -dd;
        const double b = r2;
        const double c0 = -(dd * r2 + s * amp);
        const double disc = 18.0 * a * b * c0 - 4.0 * a * a * a * c0 + a * a * b * b
                            - 4.0 * b * b * b - 27.0 * c0 * c0;
        return disc > 0.0 ? 3 : 1;
    }
};

MeanField assemble(const ScalarFixedPoint& fp, const PhysicalParams& p, double x) {
    MeanField mf;
    mf.alpha1 = fp.alpha1(x);
    mf.alpha2 = fp.alpha2(mf.alpha1);
    const double n = std::norm(mf.alpha1);
    mf.beta1 = fp.beta_per_n1 * n;
    mf.beta2 = fp.beta_per_n2 * n;
    mf.delta_c1_prime = fp.delta_c1 + 2.0 * (p.g1 * mf.beta1.real() + p.g2 * mf.beta2.real());
    mf.residual = mean_field_residual(p, mf);
    return mf;
}

} // namespace

PhysicalParams validated(const PhysicalParams& p) {
    require_positive(p.omega_c1, "omega_c1");
    require_positive(p.omega_c2, "omega_c2");
    require_positive(p.omega_m1, "omega_m1");
    require_positive(p.omega_m2, "omega_m2");
    require_positive(p.kappa1, "kappa1");
    require_positive(p.kappa2, "kappa2");
    require_positive(p.gamma1, "gamma1");
    require_positive(p.gamma2, "gamma2");
    require_positive(p.omega_d1, "omega_d1");
    require_positive(p.omega_d2, "omega_d2");
    require_finite(p.g1, "g1");
    require_finite(p.g2, "g2");
    require_finite(p.V, "V");
    require_finite(p.eps1.real(), "eps1");
    require_finite(p.eps1.imag(), "eps1");
    require_finite(p.eps2.real(), "eps2");
    require_finite(p.eps2.imag(), "eps2");
    require_finite(p.phi, "phi");
    PhysicalParams out = p;
    out.phi = normalize_angle(p.phi);
    return out;
}

Detunings derive_detunings(const PhysicalParams& p) {
    return {p.omega_c1 - p.omega_d1, p.omega_c2 - p.omega_d2};
}

Complex fiber_coupling(double kappa1, double kappa2, double phi) {
    require_positive(kappa1, "kappa1");
    require_positive(kappa2, "kappa2");
    const double mag = std::sqrt(kappa1 * kappa2);
    // Quarter turns are exact so that φ = π/2 gives a purely imaginary cJ.
    const double a = normalize_angle(phi);
    if (a == 0.0) return {mag, 0.0};
    if (a == pi / 2.0) return {0.0, -mag};
    if (a == pi) return {-mag, 0.0};
    if (a == 3.0 * pi / 2.0) return {0.0, mag};
    return std::polar(mag, -a);
}

double mean_field_residual(const PhysicalParams& p, const MeanField& mf) {
    const Detunings d = derive_detunings(p);
    const Complex cJ = fiber_coupling(p.kappa1, p.kappa2, p.phi);
    const double n = std::norm(mf.alpha1);
    const Complex r1 = -Complex{p.kappa1 / 2.0, mf.delta_c1_prime} * mf.alpha1 - I * p.eps1 + cJ * mf.alpha2;
    const Complex r2 = -Complex{p.kappa2 / 2.0, d.delta_c2} * mf.alpha2 - I * p.eps2 + cJ * mf.alpha1;
    const Complex r3 = -Complex{p.gamma1 / 2.0, p.omega_m1} * mf.beta1 - I * (p.g1 * n) - I * p.V * mf.beta2;
    const Complex r4 = -Complex{p.gamma2 / 2.0, p.omega_m2} * mf.beta2 - I * (p.g2 * n) - I * p.V * mf.beta1;
    return std::max({std::abs(r1), std::abs(r2), std::abs(r3), std::abs(r4)});
}

MeanField solve_mean_field(const PhysicalParams& params, const MeanFieldOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("mean-field tolerance must be > 0");
    const PhysicalParams p = validated(params);
    const Detunings d = derive_detunings(p);

    if (p.eps1 == Complex{} && p.eps2 == Complex{}) {
        MeanField mf;
        mf.delta_c1_prime = d.delta_c1;
        return mf;
    }

    const ScalarFixedPoint fp(p, d);
    double x = d.delta_c1;
    MeanField mf = assemble(fp, p, x);
    double last_residual = mf.residual;

    for (int it = 1; it <= opts.max_iter; ++it) {
        if (mf.residual <= opts.tol) {
            mf.iterations = it - 1;
            mf.fixed_point_count = fp.count_fixed_points();
            return mf;
        }
        const double fx = fp.map(x);
        if (it <= opts.newton_after) {
            x = (1.0 - opts.damping) * x + opts.damping * fx;
        } else {
            const double h = fx - x;
            const double dh = fp.s * fp.dphotons(x) - 1.0;
            double step = (dh != 0.0) ? -h / dh : h;
            // Newton on a Lorentzian can overshoot past the peak; cap the step
            // at the Lorentzian half-width scale.
            const double cap = std::max(std::abs(fp.w.real()), std::abs(h));
            step = std::clamp(step, -cap, cap);
            x += step;
        }
        mf = assemble(fp, p, x);
        last_residual = mf.residual;
    }
    throw IterationError("mean-field iteration did not converge in " + std::to_string(opts.max_iter)
                             + " iterations (residual " + std::to_string(last_residual) + ")",
                         last_residual);
}

LinearizedModel linearize(const PhysicalParams& params, const MeanField& mf) {
    const PhysicalParams p = validated(params);
    const Detunings d = derive_detunings(p);
    LinearizedModel lm;
    lm.delta_c1_prime = mf.delta_c1_prime;
    lm.delta_c2 = d.delta_c2;
    lm.omega_m1 = p.omega_m1;
    lm.omega_m2 = p.omega_m2;
    lm.G1 = p.g1 * mf.alpha1;
    lm.G2 = p.g2 * mf.alpha1;
    lm.cJ = fiber_coupling(p.kappa1, p.kappa2, p.phi);
    lm.V = p.V;
    lm.kappa1 = p.kappa1;
    lm.kappa2 = p.kappa2;
    lm.gamma1 = p.gamma1;
    lm.gamma2 = p.gamma2;
    return lm;
}

} // namespace optocirc
