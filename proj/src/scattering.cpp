#include "optocirc/scattering.hpp"

#include "optocirc/error.hpp"
#include "optocirc/kernels/dispatch.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

namespace optocirc {

namespace {

constexpr Complex I{0.0, 1.0};

void require_rate(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be finite and > 0 (got " + std::to_string(v) + ")");
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be finite and >= 0");
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

namespace detail {

std::vector<double> window_points(Window window, std::size_t n) {
    if (window.lo == window.hi || n < 2) return {window.lo};
    std::vector<double> out(n);
    const double span = window.hi - window.lo;
    for (std::size_t k = 0; k < n; ++k)
        out[k] = window.lo + span * (static_cast<double>(k) / static_cast<double>(n - 1));
    out.back() = window.hi;
    return out;
}

void gamma_batch(const CoefficientMatrix& cm, const std::vector<double>& omegas, std::vector<Complex>& gamma) {
    std::array<Complex, 9> m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i * 3 + j] = cm.M(i, j);
    const std::array<double, 3> l{cm.L(0), cm.L(1), cm.L(2)};
    gamma.resize(omegas.size() * 9);
    kernels::scattering_batch(m.data(), l.data(), omegas.data(), omegas.size(), gamma.data());
}

} // namespace detail

double loop_phase(const PhenomenologicalCouplings& pc) {
    return normalize_angle(pc.theta1 - pc.theta2 + pc.theta3);
}

EffectiveModel phenomenological_model(const PhenomenologicalCouplings& pc, const EffectiveRates& r) {
    require_nonnegative(pc.G10, "G10");
    require_nonnegative(pc.G20, "G20");
    require_nonnegative(pc.V0, "V0");
    require_rate(r.kappa_eff, "kappa_eff");
    require_rate(r.gamma_eff1, "gamma_eff1");
    require_rate(r.gamma_eff2, "gamma_eff2");
    if (!std::isfinite(r.delta_eff) || !std::isfinite(r.omega_eff1) || !std::isfinite(r.omega_eff2))
        throw DomainError("effective frequencies must be finite");

    EffectiveModel em;
    em.source = ModelSource::phenomenological;
    em.delta_eff = r.delta_eff;
    em.omega_eff1 = r.omega_eff1;
    em.omega_eff2 = r.omega_eff2;
    em.kappa_eff = r.kappa_eff;
    em.gamma_eff1 = r.gamma_eff1;
    em.gamma_eff2 = r.gamma_eff2;
    em.Gp1 = std::polar(pc.G10, -normalize_angle(pc.theta1));
    em.Gp2 = std::polar(pc.G20, -normalize_angle(pc.theta2));
    em.Gpp1 = std::conj(em.Gp1);
    em.Gpp2 = std::conj(em.Gp2);
    em.V1 = std::polar(pc.V0, -normalize_angle(pc.theta3));
    em.V2 = std::conj(em.V1);
    return em;
}

EffectiveRates rates_of(const EffectiveModel& em) {
    return {em.delta_eff, em.omega_eff1, em.omega_eff2, em.kappa_eff, em.gamma_eff1, em.gamma_eff2};
}

CoefficientMatrix build_M(const EffectiveModel& em) {
    require_rate(em.kappa_eff, "kappa_eff");
    require_rate(em.gamma_eff1, "gamma_eff1");
    require_rate(em.gamma_eff2, "gamma_eff2");
    CoefficientMatrix cm;
    cm.M(0, 0) = Complex{em.kappa_eff / 2.0, em.delta_eff};
    cm.M(0, 1) = -I * em.Gp1;
    cm.M(0, 2) = -I * em.Gp2;
    cm.M(1, 0) = -I * em.Gpp1;
    cm.M(1, 1) = Complex{em.gamma_eff1 / 2.0, em.omega_eff1};
    cm.M(1, 2) = -I * em.V1;
    cm.M(2, 0) = -I * em.Gpp2;
    cm.M(2, 1) = -I * em.V2;
    cm.M(2, 2) = Complex{em.gamma_eff2 / 2.0, em.omega_eff2};
    cm.L = Eigen::Vector3d(std::sqrt(em.kappa_eff), std::sqrt(em.gamma_eff1), std::sqrt(em.gamma_eff2));
    return cm;
}

Eigen::Matrix3cd gamma_at(const CoefficientMatrix& cm, double omega) {
    std::vector<Complex> g;
    detail::gamma_batch(cm, {omega}, g);
    for (const Complex& z : g)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw SingularError("M - i*omega is singular at omega = " + fmt_double(omega));
    return detail::unpack(g.data());
}

std::vector<double> grid_points(const FrequencyGrid& g) {
    if (g.n == 0) throw DomainError("frequency grid needs at least one point");
    if (!std::isfinite(g.omega_min) || !std::isfinite(g.omega_max))
        throw DomainError("frequency grid bounds must be finite");
    if (g.n == 1) {
        if (g.omega_min != g.omega_max) throw DomainError("single-point grid needs omega_min = omega_max");
        return {g.omega_min};
    }
    if (!(g.omega_max > g.omega_min)) throw DomainError("frequency grid needs omega_max > omega_min");
    std::vector<double> pts = detail::window_points({g.omega_min, g.omega_max}, g.n);
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (!(pts[k] > pts[k - 1])) throw DomainError("frequency grid too fine for double precision");
    return pts;
}

FrequencyGrid default_grid(const EffectiveModel& em, std::size_t n) {
    const std::array<double, 3> f{em.delta_eff, em.omega_eff1, em.omega_eff2};
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    const double center = (f[0] + f[1] + f[2]) / 3.0;
    const double linewidth = std::max({std::abs(em.kappa_eff), std::abs(em.gamma_eff1), std::abs(em.gamma_eff2)});
    const double coupling = std::max({std::abs(em.Gp1), std::abs(em.Gp2), std::abs(em.Gpp1), std::abs(em.Gpp2),
                                      std::abs(em.V1), std::abs(em.V2)});
    double half = (*hi - *lo) / 2.0 + 5.0 * linewidth + 2.0 * coupling;
    if (!(half > 0.0)) half = 1.0;
    return {center - half, center + half, n};
}

TransmissionSpectrum spectrum(const CoefficientMatrix& cm, const std::vector<double>& omegas) {
    if (omegas.empty()) throw DomainError("spectrum grid is empty");
    for (std::size_t k = 1; k < omegas.size(); ++k)
        if (!(omegas[k] > omegas[k - 1])) throw DomainError("spectrum grid must be strictly increasing");

    std::vector<Complex> g;
    detail::gamma_batch(cm, omegas, g);
    TransmissionSpectrum sp;
    sp.omegas = omegas;
    sp.gamma.resize(omegas.size());
    sp.T.resize(omegas.size());
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        for (int e = 0; e < 9; ++e) {
            const Complex z = g[k * 9 + e];
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw SingularError("M - i*omega is singular at grid index " + std::to_string(k)
                                    + " (omega = " + fmt_double(omegas[k]) + ")");
        }
        sp.gamma[k] = detail::unpack(g.data() + k * 9);
        sp.T[k] = sp.gamma[k].cwiseAbs2();
    }
    return sp;
}

TransmissionSpectrum spectrum(const EffectiveModel& em, const std::vector<double>& omegas) {
    return spectrum(build_M(em), omegas);
}

double transmission(const CoefficientMatrix& cm, PortPair pair, double omega) {
    return std::norm(gamma_at(cm, omega)(index(pair.out), index(pair.in)));
}

ExtremumResult extremum_scan(const CoefficientMatrix& cm, PortPair pair, Window window, Extremum kind,
                             std::size_t coarse_points) {
    const int o = index(pair.out);
    const int i = index(pair.in);
    return extremum_of(
        cm, [o, i](const Eigen::Matrix3cd& g) { return std::norm(g(o, i)); }, window, kind, coarse_points);
}

ExtremumResult extremum_scan(const EffectiveModel& em, PortPair pair, Window window, Extremum kind,
                             std::size_t coarse_points) {
    return extremum_scan(build_M(em), pair, window, kind, coarse_points);
}

StabilityReport stability_check(const Eigen::MatrixXcd& M) {
    StabilityReport rep;
    if (M.size() == 0) {
        rep.stable = true;
        return rep;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, false);
    if (solver.info() != Eigen::Success) throw SingularError("eigenvalue computation did not converge");
    const auto& ev = solver.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    rep.margin = rep.eigenvalues.front().real();
    rep.stable = rep.margin > 0.0;
    return rep;
}

StabilityReport stability_check(const CoefficientMatrix& cm) { return stability_check(Eigen::MatrixXcd(cm.M)); }

// ---------------------------------------------------------------------------
// Sweeps

namespace {

using PhenSetter = std::function<void(PhenomenologicalTemplate&, double)>;

const std::vector<std::pair<std::string, PhenSetter>>& phen_setters() {
    static const std::vector<std::pair<std::string, PhenSetter>> s{
        {"G10", [](PhenomenologicalTemplate& t, double v) { t.couplings.G10 = v; }},
        {"G20", [](PhenomenologicalTemplate& t, double v) { t.couplings.G20 = v; }},
        {"V0", [](PhenomenologicalTemplate& t, double v) { t.couplings.V0 = v; }},
        {"theta1", [](PhenomenologicalTemplate& t, double v) { t.couplings.theta1 = v; }},
        {"theta2", [](PhenomenologicalTemplate& t, double v) { t.couplings.theta2 = v; }},
        {"theta3", [](PhenomenologicalTemplate& t, double v) { t.couplings.theta3 = v; }},
        {"delta_eff", [](PhenomenologicalTemplate& t, double v) { t.rates.delta_eff = v; }},
        {"omega_eff1", [](PhenomenologicalTemplate& t, double v) { t.rates.omega_eff1 = v; }},
        {"omega_eff2", [](PhenomenologicalTemplate& t, double v) { t.rates.omega_eff2 = v; }},
        {"kappa_eff", [](PhenomenologicalTemplate& t, double v) { t.rates.kappa_eff = v; }},
        {"gamma_eff1", [](PhenomenologicalTemplate& t, double v) { t.rates.gamma_eff1 = v; }},
        {"gamma_eff2", [](PhenomenologicalTemplate& t, double v) { t.rates.gamma_eff2 = v; }},
    };
    return s;
}

// The fiber link is swept through its magnitude J and phase φ, held apart
// from cJ so that either can be set independently.
struct LinearizedPoint {
    LinearizedModel lm;
    double J;
    double phi;
};

using LinSetter = std::function<void(LinearizedPoint&, double)>;

const std::vector<std::pair<std::string, LinSetter>>& lin_setters() {
    static const std::vector<std::pair<std::string, LinSetter>> s{
        {"delta_c1_prime", [](LinearizedPoint& p, double v) { p.lm.delta_c1_prime = v; }},
        {"delta_c2", [](LinearizedPoint& p, double v) { p.lm.delta_c2 = v; }},
        {"omega_m1", [](LinearizedPoint& p, double v) { p.lm.omega_m1 = v; }},
        {"omega_m2", [](LinearizedPoint& p, double v) { p.lm.omega_m2 = v; }},
        {"G1", [](LinearizedPoint& p, double v) { p.lm.G1 = v; }},
        {"G2", [](LinearizedPoint& p, double v) { p.lm.G2 = v; }},
        {"J", [](LinearizedPoint& p, double v) { p.J = v; }},
        {"phi", [](LinearizedPoint& p, double v) { p.phi = v; }},
        {"V", [](LinearizedPoint& p, double v) { p.lm.V = v; }},
        {"kappa1", [](LinearizedPoint& p, double v) { p.lm.kappa1 = v; }},
        {"kappa2", [](LinearizedPoint& p, double v) { p.lm.kappa2 = v; }},
        {"gamma1", [](LinearizedPoint& p, double v) { p.lm.gamma1 = v; }},
        {"gamma2", [](LinearizedPoint& p, double v) { p.lm.gamma2 = v; }},
    };
    return s;
}

Complex link(double J, double phi) {
    const double a = normalize_angle(phi);
    if (a == pi / 2.0) return {0.0, -J};
    return std::polar(J, -a);
}

template <class Setters>
std::vector<std::string> names_of(const Setters& s) {
    std::vector<std::string> out;
    for (const auto& [name, fn] : s) out.push_back(name);
    return out;
}

template <class Setters>
const typename Setters::value_type::second_type& find_setter(const Setters& s, const std::string& name) {
    for (const auto& entry : s)
        if (entry.first == name) return entry.second;
    std::string valid;
    for (const auto& entry : s) valid += (valid.empty() ? "" : ", ") + entry.first;
    throw ConfigError("unknown sweep parameter '" + name + "'; valid: " + valid);
}

bool parse_port(const std::string& s, Port& p) {
    for (int k = 0; k < 3; ++k) {
        if (s == port_names[k]) {
            p = static_cast<Port>(k);
            return true;
        }
    }
    return false;
}

bool parse_pair(const std::string& s, PortPair& pair) {
    return s.size() == 4 && parse_port(s.substr(0, 2), pair.out) && parse_port(s.substr(2, 2), pair.in);
}

[[noreturn]] void unknown_metric(const std::string& metric) {
    std::string valid;
    for (const auto& m : sweep_metrics()) valid += (valid.empty() ? "" : ", ") + m;
    throw ConfigError("unknown sweep metric '" + metric + "'; valid: " + valid);
}

} // namespace

std::vector<std::string> sweep_parameters(const SweepTemplate& t) {
    return std::holds_alternative<PhenomenologicalTemplate>(t) ? names_of(phen_setters()) : names_of(lin_setters());
}

std::vector<std::string> sweep_metrics() {
    std::vector<std::string> out{"delta_eff", "omega_eff1", "omega_eff2", "kappa_eff", "gamma_eff1", "gamma_eff2"};
    for (const char* kind : {"max_T_", "min_T_", "max_contrast_"})
        for (int o = 0; o < 3; ++o)
            for (int i = 0; i < 3; ++i)
                if (std::string(kind) != "max_contrast_" || o != i)
                    out.push_back(std::string(kind) + port_names[o] + port_names[i]);
    return out;
}

double evaluate_metric(const EffectiveModel& em, const std::string& metric) {
    if (metric == "delta_eff") return em.delta_eff;
    if (metric == "omega_eff1") return em.omega_eff1;
    if (metric == "omega_eff2") return em.omega_eff2;
    if (metric == "kappa_eff") return em.kappa_eff;
    if (metric == "gamma_eff1") return em.gamma_eff1;
    if (metric == "gamma_eff2") return em.gamma_eff2;

    PortPair pair{};
    const FrequencyGrid g = default_grid(em);
    const Window w{g.omega_min, g.omega_max};
    if (metric.rfind("max_T_", 0) == 0 && parse_pair(metric.substr(6), pair))
        return extremum_scan(em, pair, w, Extremum::max, g.n).value;
    if (metric.rfind("min_T_", 0) == 0 && parse_pair(metric.substr(6), pair))
        return extremum_scan(em, pair, w, Extremum::min, g.n).value;
    if (metric.rfind("max_contrast_", 0) == 0 && parse_pair(metric.substr(13), pair) && pair.out != pair.in) {
        const int o = index(pair.out);
        const int i = index(pair.in);
        auto f = [o, i](const Eigen::Matrix3cd& gm) { return std::norm(gm(o, i)) - std::norm(gm(i, o)); };
        return extremum_of(build_M(em), f, w, Extremum::max, g.n).value;
    }
    unknown_metric(metric);
}

SweepResult sweep(const SweepTemplate& t, const std::vector<SweepAxis>& axes, const std::string& metric,
                  unsigned threads) {
    if (axes.empty() || axes.size() > 2) throw ConfigError("sweep needs one or two axes");
    const auto metrics = sweep_metrics();
    if (std::find(metrics.begin(), metrics.end(), metric) == metrics.end()) unknown_metric(metric);

    SweepResult res;
    res.axes = axes;
    res.metric = metric;
    std::size_t total = 1;
    for (const SweepAxis& ax : axes) {
        if (!std::isfinite(ax.lo) || !std::isfinite(ax.hi)) throw ConfigError("sweep axis '" + ax.name + "' range must be finite");
        if (ax.n == 0) throw ConfigError("sweep axis '" + ax.name + "' needs at least one point");
        if (ax.n == 1 && ax.lo != ax.hi) throw ConfigError("single-point sweep axis '" + ax.name + "' needs lo = hi");
        res.axis_values.push_back(detail::window_points({ax.lo, ax.hi}, ax.n));
        total *= ax.n;
    }

    // Resolve setters up front so unknown names fail before any evaluation.
    std::function<EffectiveModel(std::size_t)> model_at;
    const std::size_t n_inner = axes.size() == 2 ? axes[1].n : 1;
    auto coord = [&](std::size_t flat, std::size_t a) {
        return a == 0 ? res.axis_values[0][flat / n_inner] : res.axis_values[1][flat % n_inner];
    };
    if (const auto* phen = std::get_if<PhenomenologicalTemplate>(&t)) {
        std::vector<PhenSetter> set;
        for (const SweepAxis& ax : axes) set.push_back(find_setter(phen_setters(), ax.name));
        model_at = [phen, set, &coord](std::size_t flat) {
            PhenomenologicalTemplate p = *phen;
            for (std::size_t a = 0; a < set.size(); ++a) set[a](p, coord(flat, a));
            return phenomenological_model(p.couplings, p.rates);
        };
    } else {
        const LinearizedModel& base = std::get<LinearizedModel>(t);
        std::vector<LinSetter> set;
        for (const SweepAxis& ax : axes) set.push_back(find_setter(lin_setters(), ax.name));
        const double J0 = std::abs(base.cJ);
        const double phi0 = J0 > 0.0 ? normalize_angle(-std::arg(base.cJ)) : pi / 2.0;
        model_at = [&base, set, J0, phi0, &coord](std::size_t flat) {
            LinearizedPoint p{base, J0, phi0};
            for (std::size_t a = 0; a < set.size(); ++a) set[a](p, coord(flat, a));
            p.lm.cJ = link(p.J, p.phi);
            return eliminate(p.lm);
        };
    }

    res.values.assign(total, 0.0);
    std::vector<std::exception_ptr> errors(total);
    unsigned nthreads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, total));
    auto work = [&](unsigned tid) {
        for (std::size_t k = tid; k < total; k += nthreads) {
            try {
                res.values[k] = evaluate_metric(model_at(k), metric);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (nthreads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned tid = 0; tid < nthreads; ++tid) pool.emplace_back(work, tid);
        for (auto& th : pool) th.join();
    }
    for (std::size_t k = 0; k < total; ++k) {
        if (!errors[k]) continue;
        try {
            std::rethrow_exception(errors[k]);
        } catch (const Error& e) {
            std::string where = "sweep point " + std::to_string(k) + " (";
            for (std::size_t a = 0; a < axes.size(); ++a)
                where += (a ? ", " : "") + axes[a].name + " = " + fmt_double(coord(k, a));
            where += "): ";
            switch (e.kind()) {
            case ErrorKind::singular: throw SingularError(where + e.what());
            case ErrorKind::configuration: throw ConfigError(where + e.what());
            default: throw DomainError(where + e.what());
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Circulator search

double isolation_db(double forward, double backward) {
    if (forward == backward) return 0.0;
    return 10.0 * std::log10(std::max(forward, DBL_MIN) / std::max(backward, DBL_MIN));
}

CirculatorOptimum circulator_at(const EffectiveRates& rates, double magnitude, double phase, bool forward_direction,
                                std::size_t omega_points) {
    const PhenomenologicalCouplings pc{magnitude, magnitude, magnitude, phase, 0.0, 0.0};
    const EffectiveModel em = phenomenological_model(pc, rates);
    const CoefficientMatrix cm = build_M(em);
    const FrequencyGrid g = default_grid(em, omega_points);
    const int fwd_out = forward_direction ? index(Port::a2) : index(Port::b1);
    const int fwd_in = forward_direction ? index(Port::b1) : index(Port::a2);
    auto contrast = [&](const Eigen::Matrix3cd& gm) {
        return std::norm(gm(fwd_out, fwd_in)) - std::norm(gm(fwd_in, fwd_out));
    };
    const ExtremumResult best = extremum_of(cm, contrast, {g.omega_min, g.omega_max}, Extremum::max, g.n);
    const Eigen::Matrix3cd gm = gamma_at(cm, best.omega);
    CirculatorOptimum out;
    out.magnitude = magnitude;
    out.loop_phase = normalize_angle(phase);
    out.omega = best.omega;
    out.forward = std::norm(gm(fwd_out, fwd_in));
    out.backward = std::norm(gm(fwd_in, fwd_out));
    out.isolation_db = isolation_db(out.forward, out.backward);
    return out;
}

namespace {

std::vector<CirculatorOptimum> direction_optima(const EffectiveRates& rates, double magnitude, bool forward,
                                                const CirculatorSearchOptions& opts) {
    const std::size_t P = opts.phase_points;
    const double step = two_pi / static_cast<double>(P);
    auto score = [&](double phase) {
        const CirculatorOptimum c = circulator_at(rates, magnitude, phase, forward, opts.omega_points);
        return c.forward - c.backward;
    };
    std::vector<double> s(P);
    for (std::size_t k = 0; k < P; ++k) s[k] = score(step * static_cast<double>(k));
    const double top = *std::max_element(s.begin(), s.end());
    std::vector<CirculatorOptimum> out;
    if (!(top > 0.0)) return out;

    for (std::size_t k = 0; k < P; ++k) {
        const double prev = s[(k + P - 1) % P];
        const double next = s[(k + 1) % P];
        if (!(s[k] > prev && s[k] >= next && s[k] >= opts.keep_fraction * top)) continue;

        double a = step * (static_cast<double>(k) - 1.0);
        double b = step * (static_cast<double>(k) + 1.0);
        constexpr double inv_phi = 0.6180339887498949;
        double x1 = b - inv_phi * (b - a);
        double x2 = a + inv_phi * (b - a);
        double f1 = score(x1);
        double f2 = score(x2);
        for (int it = 0; it < 200 && (b - a) > opts.phase_tol; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = score(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = score(x1);
            }
        }
        double best_phase = step * static_cast<double>(k);
        if (std::max(f1, f2) > s[k]) best_phase = f1 >= f2 ? x1 : x2;
        out.push_back(circulator_at(rates, magnitude, best_phase, forward, opts.omega_points));
    }
    std::sort(out.begin(), out.end(),
              [](const CirculatorOptimum& x, const CirculatorOptimum& y) { return x.loop_phase < y.loop_phase; });
    return out;
}

} // namespace

CirculatorSearch find_circulator_point(const EffectiveRates& rates, double magnitude,
                                       const CirculatorSearchOptions& opts) {
    if (opts.phase_points < 3) throw DomainError("circulator search needs at least 3 phase points");
    require_nonnegative(magnitude, "magnitude");
    CirculatorSearch res;
    res.forward_optima = direction_optima(rates, magnitude, true, opts);
    res.reverse_optima = direction_optima(rates, magnitude, false, opts);
    return res;
}

} // namespace optocirc
