#include "optocirc/bell.hpp"

#include "optocirc/error.hpp"
#include "optocirc/kernels/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optocirc {

namespace {

constexpr Complex I{0.0, 1.0};

void require_alpha2(double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("alpha2 must lie in [0, 1] (got " + std::to_string(a) + ")");
}

template <class F>
double golden_max(F&& f, double a, double b, double& x_best) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    x_best = f1 >= f2 ? x1 : x2;
    return std::max(f1, f2);
}

} // namespace

MeasurementVector measurement(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= pi)) throw DomainError("measurement polar angle must lie in [0, pi]");
    if (!std::isfinite(phi)) throw DomainError("measurement azimuth must be finite");
    return {theta, normalize_angle(phi)};
}

double chsh_closed_form(double theta, double alpha2) {
    require_alpha2(alpha2);
    double out = 0.0;
    kernels::detail::chsh_row_scalar(theta, &alpha2, 1, &out);
    return out;
}

double chsh_general(double theta_a, double theta_b, double phi_a, double phi_b, Complex alpha1, Complex alpha2,
                    Complex beta1, Complex beta2) {
    const double ca = std::cos(theta_a);
    const double sa = std::sin(theta_a);
    const double cb = std::cos(theta_b);
    const double sb = std::sin(theta_b);
    const Complex ta = std::exp(I * phi_b) * std::conj(alpha1) * alpha2;
    const Complex tb = std::exp(I * phi_a) * std::conj(beta1) * beta2;
    const Complex tab = std::exp(I * (phi_b - phi_a)) * std::conj(alpha1) * alpha2 * beta1 * std::conj(beta2);
    return 2.0 * (ca * cb + ca * sb * 2.0 * ta.real() + sa * cb * 2.0 * tb.real() + 2.0 * sa * sb * 2.0 * tab.real());
}

Eigen::MatrixXcd PseudospinSet::along(const MeasurementVector& v) const {
    return s_z * std::cos(v.theta)
           + std::sin(v.theta) * (std::exp(I * v.phi) * s_minus + std::exp(-I * v.phi) * s_plus);
}

PseudospinSet build_pseudospin(int n_trunc) {
    if (n_trunc < 4 || n_trunc % 2 != 0)
        throw DomainError("pseudospin truncation must be even and >= 4 (got " + std::to_string(n_trunc) + ")");
    PseudospinSet s;
    s.n_trunc = n_trunc;
    s.s_z = Eigen::MatrixXcd::Zero(n_trunc, n_trunc);
    s.s_minus = Eigen::MatrixXcd::Zero(n_trunc, n_trunc);
    for (int k = 0; k < n_trunc; ++k) s.s_z(k, k) = (k % 2 == 0) ? -1.0 : 1.0;
    for (int k = 0; k + 1 < n_trunc; k += 2) s.s_minus(k, k + 1) = 1.0;
    s.s_plus = s.s_minus.adjoint();
    return s;
}

double chsh_operator_oracle(const Eigen::MatrixXcd& psi, const MeasurementVector& a, const MeasurementVector& a2,
                            const MeasurementVector& b, const MeasurementVector& b2, int n_trunc) {
    const PseudospinSet s = build_pseudospin(n_trunc);
    const double norm = psi.squaredNorm();
    if (!(std::abs(norm - 1.0) <= 1e-12))
        throw DomainError("state must be normalized to 1 within 1e-12 (norm^2 = " + std::to_string(norm) + ")");
    for (Eigen::Index i = 0; i < psi.rows(); ++i)
        for (Eigen::Index j = 0; j < psi.cols(); ++j)
            if ((i >= n_trunc || j >= n_trunc) && psi(i, j) != Complex{})
                throw TruncationError("state has support beyond the Fock truncation " + std::to_string(n_trunc));

    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n_trunc, n_trunc);
    const Eigen::Index r = std::min<Eigen::Index>(psi.rows(), n_trunc);
    const Eigen::Index c = std::min<Eigen::Index>(psi.cols(), n_trunc);
    P.topLeftCorner(r, c) = psi.topLeftCorner(r, c);

    // <X ⊗ Y> = tr(P^† X P Y^T)
    auto corr = [&](const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
        return (P.adjoint() * X * P * Y.transpose()).trace();
    };
    const Eigen::MatrixXcd A = s.along(a), A2 = s.along(a2), B = s.along(b), B2 = s.along(b2);
    const Complex v = corr(A, B) + corr(A, B2) + corr(A2, B) - corr(A2, B2);
    if (!(std::abs(v.imag()) <= 1e-12)) throw DomainError("CHSH expectation has a non-negligible imaginary part");
    return v.real();
}

Eigen::MatrixXcd product_state(const Eigen::Vector3cd& m1, const Eigen::Vector3cd& m2) {
    return m1 * m2.transpose();
}

std::size_t BellScan::violation_count() const {
    return static_cast<std::size_t>(std::count(violation.begin(), violation.end(), 1));
}

BellScan violation_scan(const std::vector<double>& theta_grid, const std::vector<double>& alpha2_grid) {
    if (theta_grid.empty() || alpha2_grid.empty()) throw DomainError("Bell scan grids must be nonempty");
    for (double a : alpha2_grid) require_alpha2(a);
    BellScan scan;
    scan.theta_grid = theta_grid;
    scan.alpha2_grid = alpha2_grid;
    const std::size_t na = alpha2_grid.size();
    scan.values.resize(theta_grid.size() * na);
    for (std::size_t it = 0; it < theta_grid.size(); ++it)
        kernels::chsh_row(theta_grid[it], alpha2_grid.data(), na, scan.values.data() + it * na);
    scan.violation.resize(scan.values.size());
    for (std::size_t k = 0; k < scan.values.size(); ++k) {
        scan.values[k] = std::abs(scan.values[k]);
        scan.violation[k] = scan.values[k] > 2.0 ? 1 : 0;
    }
    return scan;
}

BellPeak refine_peak(const BellScan& scan) {
    const auto best = std::max_element(scan.values.begin(), scan.values.end());
    const std::size_t k = static_cast<std::size_t>(best - scan.values.begin());
    const std::size_t na = scan.alpha2_grid.size();
    const std::size_t it = k / na;
    const std::size_t ia = k % na;
    BellPeak p{scan.theta_grid[it], scan.alpha2_grid[ia], *best};

    auto bracket = [](const std::vector<double>& g, std::size_t i) {
        return std::pair{g[i == 0 ? 0 : i - 1], g[std::min(i + 1, g.size() - 1)]};
    };
    auto [t_lo, t_hi] = bracket(scan.theta_grid, it);
    auto [a_lo, a_hi] = bracket(scan.alpha2_grid, ia);
    a_lo = std::max(a_lo, 0.0);
    a_hi = std::min(a_hi, 1.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        const double before = p.value;
        if (t_hi > t_lo) {
            double x = p.theta;
            const double v = golden_max([&](double t) { return std::abs(chsh_closed_form(t, p.alpha2)); }, t_lo, t_hi, x);
            if (v > p.value) p = {x, p.alpha2, v};
        }
        if (a_hi > a_lo) {
            double x = p.alpha2;
            const double v = golden_max([&](double a) { return std::abs(chsh_closed_form(p.theta, a)); }, a_lo, a_hi, x);
            if (v > p.value) p = {p.theta, x, v};
        }
        if (p.value == before) break;
    }
    return p;
}

} // namespace optocirc
