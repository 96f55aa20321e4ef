#include "optocirc/full_model.hpp"

#include "optocirc/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optocirc {

namespace {

constexpr Complex I{0.0, 1.0};

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class Mat>
Eigen::MatrixXcd solve_checked(const Mat& A, const Eigen::MatrixXcd& rhs, double omega) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    if (!lu.isInvertible())
        throw SingularError("M - i*omega is singular at omega = " + fmt_double(omega));
    Eigen::MatrixXcd x = lu.solve(rhs);
    if (!x.allFinite()) throw SingularError("M - i*omega is singular at omega = " + fmt_double(omega));
    return x;
}

Eigen::MatrixXcd resolvent(const Eigen::MatrixXcd& M, double omega) {
    const Eigen::Index n = M.rows();
    Eigen::MatrixXcd A = M;
    A.diagonal().array() -= I * omega;
    return solve_checked(A, Eigen::MatrixXcd::Identity(n, n), omega);
}

Eigen::Matrix3cd effective_port_gamma(const FullModel& fm, const Eigen::Vector3d& L, double omega) {
    const Eigen::MatrixXcd R = resolvent(fm.M4, omega);
    Eigen::Matrix3cd g = L.asDiagonal() * R.block<3, 3>(1, 1) * L.asDiagonal();
    g -= Eigen::Matrix3cd::Identity();
    return g;
}

Eigen::Matrix3cd physical_gamma(const LinearNetwork& net, double omega) {
    return network_scattering(net, omega).block<3, 3>(1, 1);
}

template <class F>
TransmissionSpectrum tabulate(const std::vector<double>& omegas, F&& gamma_of) {
    if (omegas.empty()) throw DomainError("spectrum grid is empty");
    for (std::size_t k = 1; k < omegas.size(); ++k)
        if (!(omegas[k] > omegas[k - 1])) throw DomainError("spectrum grid must be strictly increasing");
    TransmissionSpectrum sp;
    sp.omegas = omegas;
    sp.gamma.reserve(omegas.size());
    sp.T.reserve(omegas.size());
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        try {
            sp.gamma.push_back(gamma_of(omegas[k]));
        } catch (const SingularError& e) {
            throw SingularError("grid index " + std::to_string(k) + ": " + e.what());
        }
        sp.T.push_back(sp.gamma.back().cwiseAbs2());
    }
    return sp;
}

// Golden-section maximum of f on [a, b]; returns the best of the bracket
// evaluations and the provided starting value.
template <class F>
double refine_max(F&& f, double a, double b, double start_value) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
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
    return std::max({start_value, f1, f2});
}

template <class F>
double peak(const TransmissionSpectrum& sp, int o, int i, F&& t_of) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < sp.T.size(); ++k)
        if (sp.T[k](o, i) > sp.T[best](o, i)) best = k;
    const double v = sp.T[best](o, i);
    if (sp.omegas.size() < 3) return v;
    const double a = sp.omegas[best == 0 ? 0 : best - 1];
    const double b = sp.omegas[std::min(best + 1, sp.omegas.size() - 1)];
    return refine_max(t_of, a, b, v);
}

} // namespace

FullModel build_full(const LinearizedModel& lm) {
    FullModel fm;
    const Complex cJ = lm.cJ;
    fm.M4 << Complex{lm.kappa1 / 2.0, lm.delta_c1_prime}, -cJ, I * lm.G1, I * lm.G2,
        -cJ, Complex{lm.kappa2 / 2.0, lm.delta_c2}, 0.0, 0.0,
        I * std::conj(lm.G1), 0.0, Complex{lm.gamma1 / 2.0, lm.omega_m1}, I * lm.V,
        I * std::conj(lm.G2), 0.0, I * lm.V, Complex{lm.gamma2 / 2.0, lm.omega_m2};

    const double s1 = std::sqrt(lm.kappa1);
    const double s2 = std::sqrt(lm.kappa2);
    const double mag = std::abs(cJ);
    const Complex unit = mag > 0.0 ? cJ / mag : Complex{};
    fm.N4.setZero();
    fm.N4(0, 0) = s1;
    fm.N4(0, 1) = -s1 * unit;
    fm.N4(1, 0) = -s2 * unit;
    fm.N4(1, 1) = s2;
    fm.N4(2, 2) = std::sqrt(lm.gamma1);
    fm.N4(3, 3) = std::sqrt(lm.gamma2);
    fm.Lout << s1, s2, std::sqrt(lm.gamma1), std::sqrt(lm.gamma2);
    return fm;
}

LinearNetwork network_of(const FullModel& fm) {
    LinearNetwork net;
    net.M = fm.M4;
    net.Bin = fm.N4;
    net.Cout = Eigen::MatrixXcd(fm.Lout.cast<Complex>().asDiagonal());
    return net;
}

LinearNetwork network_of(const CoefficientMatrix& cm) {
    LinearNetwork net;
    net.M = cm.M;
    net.Bin = Eigen::MatrixXcd(cm.L.cast<Complex>().asDiagonal());
    net.Cout = net.Bin;
    return net;
}

Eigen::MatrixXcd network_scattering(const LinearNetwork& net, double omega) {
    Eigen::MatrixXcd A = net.M;
    A.diagonal().array() -= I * omega;
    Eigen::MatrixXcd S = net.Cout * solve_checked(A, net.Bin, omega);
    S -= Eigen::MatrixXcd::Identity(S.rows(), S.cols());
    return S;
}

TransmissionSpectrum full_spectrum(const FullModel& fm, const std::vector<double>& omegas) {
    const LinearNetwork net = network_of(fm);
    return tabulate(omegas, [&](double w) { return physical_gamma(net, w); });
}

TransmissionSpectrum full_spectrum_effective_ports(const FullModel& fm, const EffectiveModel& em,
                                                   const std::vector<double>& omegas) {
    const Eigen::Vector3d L = build_M(em).L;
    return tabulate(omegas, [&](double w) { return effective_port_gamma(fm, L, w); });
}

TimeDomainResult time_domain_response(const LinearNetwork& net, std::size_t input_port, Complex amplitude,
                                      double omega, const TimeDomainOptions& opts) {
    namespace odeint = boost::numeric::odeint;
    const Eigen::Index n = net.M.rows();
    if (net.M.cols() != n || net.Bin.rows() != n || net.Cout.cols() != n || net.Bin.cols() != net.Cout.rows())
        throw DomainError("network matrices have inconsistent shapes");
    if (input_port >= static_cast<std::size_t>(net.Bin.cols())) throw DomainError("input port out of range");

    TimeDomainResult res;
    res.stability = stability_check(net.M);
    if (!res.stability.stable) {
        std::ostringstream os;
        os.precision(6);
        os << "drift matrix is not stable (min Re eigenvalue " << res.stability.margin << "); eigenvalues:";
        for (const Complex& e : res.stability.eigenvalues) os << " (" << e.real() << "," << e.imag() << ")";
        throw DomainError(os.str());
    }

    Eigen::MatrixXcd A = -net.M;
    A.diagonal().array() += I * omega;
    const Eigen::VectorXcd drive = net.Bin.col(static_cast<Eigen::Index>(input_port)) * amplitude;
    const Eigen::Index p = net.Cout.rows();

    using State = std::vector<double>;
    auto rhs = [&](const State& x, State& dx, double) {
        const Eigen::Map<const Eigen::VectorXcd> q(reinterpret_cast<const Complex*>(x.data()), n);
        Eigen::Map<Eigen::VectorXcd> dq(reinterpret_cast<Complex*>(dx.data()), n);
        dq.noalias() = A * q;
        dq += drive;
    };
    auto outputs = [&](const State& x) {
        const Eigen::Map<const Eigen::VectorXcd> q(reinterpret_cast<const Complex*>(x.data()), n);
        Eigen::VectorXcd out = net.Cout * q;
        out(static_cast<Eigen::Index>(input_port)) -= amplitude;
        return out;
    };

    State x(static_cast<std::size_t>(2 * n), 0.0);
    auto stepper = odeint::make_controlled(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State>());
    const double horizon = std::max(opts.horizon, opts.min_horizon_factor / res.stability.margin);
    const double period = omega != 0.0 ? two_pi / std::abs(omega) : 1.0 / res.stability.margin;
    double t = 0.0;
    const double dt0 = std::min(period, horizon) / 100.0;
    odeint::integrate_adaptive(stepper, rhs, x, t, horizon, dt0);
    t = horizon;

    Eigen::VectorXcd prev = outputs(x);
    bool settled = false;
    for (std::size_t k = 0; k < opts.max_settle_periods; ++k) {
        odeint::integrate_adaptive(stepper, rhs, x, t, t + period, dt0);
        t += period;
        const Eigen::VectorXcd cur = outputs(x);
        const double drift = (cur - prev).cwiseAbs().maxCoeff();
        prev = cur;
        if (drift < opts.drift_tol) {
            settled = true;
            break;
        }
    }
    if (!settled) throw IterationError("time-domain outputs did not settle", (prev - outputs(x)).norm());

    res.t_end = t;
    res.outputs.assign(prev.data(), prev.data() + p);
    const double in_power = std::norm(amplitude);
    for (const Complex& o : res.outputs) res.power_ratio.push_back(in_power > 0.0 ? std::norm(o) / in_power : 0.0);
    return res;
}

const PairDeviation& AgreementReport::at(PortPair p) const {
    for (const PairDeviation& d : pairs)
        if (d.pair == p) return d;
    throw DomainError("port pair missing from agreement report");
}

AgreementReport compare_models(const LinearizedModel& lm, const std::vector<double>& omegas) {
    const EffectiveModel em = eliminate(lm);
    const CoefficientMatrix cm = build_M(em);
    const FullModel fm = build_full(lm);
    const TransmissionSpectrum eff = spectrum(cm, omegas);
    const TransmissionSpectrum full = full_spectrum_effective_ports(fm, em, omegas);

    AgreementReport rep;
    rep.validity = validity_report(lm);
    for (int o = 0; o < 3; ++o) {
        for (int i = 0; i < 3; ++i) {
            PairDeviation d;
            d.pair = {static_cast<Port>(o), static_cast<Port>(i)};
            for (std::size_t k = 0; k < omegas.size(); ++k) {
                const double te = eff.T[k](o, i);
                const double tf = full.T[k](o, i);
                const double diff = std::abs(tf - te);
                d.max_abs = std::max(d.max_abs, diff);
                if (te > 0.0) d.max_rel = std::max(d.max_rel, diff / te);
                else if (diff > 0.0) d.max_rel = HUGE_VAL;
            }
            d.peak_effective = peak(eff, o, i, [&](double w) { return std::norm(gamma_at(cm, w)(o, i)); });
            d.peak_full = peak(full, o, i, [&](double w) { return std::norm(effective_port_gamma(fm, cm.L, w)(o, i)); });
            if (d.peak_effective > 0.0) d.peak_rel = std::abs(d.peak_full - d.peak_effective) / d.peak_effective;
            else d.peak_rel = d.peak_full > 0.0 ? HUGE_VAL : 0.0;
            rep.max_abs = std::max(rep.max_abs, d.max_abs);
            if (o != i) rep.max_peak_rel = std::max(rep.max_peak_rel, d.peak_rel);
            rep.pairs.push_back(d);
        }
    }
    return rep;
}

} // namespace optocirc
