#pragma once

#include "optocirc/error.hpp"
#include "optocirc/kernels/dispatch.hpp"

#include <cmath>
#include <utility>

namespace optocirc {

namespace detail {

std::vector<double> window_points(Window window, std::size_t n);

// Fills gamma (9 entries per ω, row-major) for the given frequencies.
void gamma_batch(const CoefficientMatrix& cm, const std::vector<double>& omegas, std::vector<Complex>& gamma);

inline Eigen::Matrix3cd unpack(const Complex* g) {
    Eigen::Matrix3cd m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = g[i * 3 + j];
    return m;
}

} // namespace detail

template <class F>
ExtremumResult extremum_of(const CoefficientMatrix& cm, F&& f, Window window, Extremum kind,
                           std::size_t coarse_points) {
    if (!(window.lo <= window.hi) || !std::isfinite(window.lo) || !std::isfinite(window.hi))
        throw DomainError("extremum window must satisfy lo <= hi");
    const double sign = (kind == Extremum::max) ? 1.0 : -1.0;
    const std::vector<double> omegas = detail::window_points(window, coarse_points);
    std::vector<Complex> gamma;
    detail::gamma_batch(cm, omegas, gamma);

    std::size_t best = 0;
    double best_val = -HUGE_VAL;
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        const double v = sign * f(detail::unpack(gamma.data() + k * 9));
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    ExtremumResult res{omegas[best], sign * best_val};
    if (omegas.size() < 2) return res;

    auto g = [&](double w) { return sign * f(gamma_at(cm, w)); };
    double a = omegas[best == 0 ? 0 : best - 1];
    double b = omegas[best + 1 == omegas.size() ? best : best + 1];
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = g(x1);
    double f2 = g(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = g(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = g(xm);
    const std::pair<double, double> candidates[] = {{xm, fm}, {x1, f1}, {x2, f2}};
    for (const auto& [x, v] : candidates) {
        if (v > best_val) {
            best_val = v;
            res = {x, sign * v};
        }
    }
    return res;
}

} // namespace optocirc
