#include "optocirc/error.hpp"
#include "optocirc/scattering.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace optocirc;

namespace {

EffectiveRates matched_rates() { return {1.0, 1.0, 1.0, 1e-3, 1e-3, 1e-3}; }

EffectiveRates random_rates(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {0.9 + 0.2 * u(rng), 0.9 + 0.2 * u(rng), 0.9 + 0.2 * u(rng),
            1e-3 + 0.02 * u(rng), 1e-3 + 0.02 * u(rng), 1e-3 + 0.02 * u(rng)};
}

PhenomenologicalCouplings random_couplings(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {0.02 * u(rng), 0.02 * u(rng), 0.02 * u(rng), two_pi * u(rng), two_pi * u(rng), two_pi * u(rng)};
}

double max_abs(const Eigen::Matrix3d& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("coefficient matrix assembly") {
    const PhenomenologicalCouplings pc{5e-4, 5e-4, 5e-4, 0.3, 1.1, 4.2};
    const EffectiveModel em = phenomenological_model(pc, matched_rates());
    const CoefficientMatrix cm = build_M(em);
    const Complex i{0.0, 1.0};
    CHECK(cm.M(0, 0) == Complex{5e-4, 1.0});
    CHECK(cm.M(1, 1) == Complex{5e-4, 1.0});
    CHECK(cm.M(0, 1) == -i * std::polar(5e-4, -0.3));
    CHECK(cm.M(0, 2) == -i * std::polar(5e-4, -1.1));
    CHECK(cm.M(1, 0) == -i * std::conj(std::polar(5e-4, -0.3)));
    CHECK(cm.M(1, 2) == -i * std::polar(5e-4, -4.2));
    CHECK(cm.M(2, 1) == -i * std::conj(std::polar(5e-4, -4.2)));
    CHECK(cm.L(0) == std::sqrt(1e-3));

    // Hermitian closure: M + M^† is the diagonal of rates.
    const Eigen::Matrix3cd S = cm.M + cm.M.adjoint();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (r != c) CHECK(S(r, c) == Complex{});
    CHECK(S(0, 0) == Complex{1e-3, 0.0});
}

TEST_CASE("phase parameterization") {
    const double s = 2e-3;
    const EffectiveModel em =
        phenomenological_model({s, s, s, 7.0 * pi / 6.0, 0.0, 0.0}, matched_rates());
    CHECK(em.Gp1.real() == doctest::Approx(s * std::cos(7.0 * pi / 6.0)).epsilon(1e-14));
    CHECK(em.Gp1.imag() == doctest::Approx(-s * std::sin(7.0 * pi / 6.0)).epsilon(1e-14));

    const EffectiveModel zero = phenomenological_model({s, s, s, 0.0, 0.0, 0.0}, matched_rates());
    CHECK(zero.Gp1.imag() == 0.0);
    CHECK(zero.V1.imag() == 0.0);
    const CoefficientMatrix cm = build_M(zero);
    CHECK(cm.M == cm.M.transpose());

    CHECK(loop_phase({s, s, s, 1.0, 0.5, 0.25}) == doctest::Approx(0.75));
    CHECK_THROWS_AS(phenomenological_model({-1.0, 0, 0, 0, 0, 0}, matched_rates()), DomainError);
    EffectiveRates bad = matched_rates();
    bad.gamma_eff2 = 0.0;
    CHECK_THROWS_AS(phenomenological_model({}, bad), DomainError);
}

TEST_CASE("uncoupled modes scatter diagonally") {
    const EffectiveModel em = phenomenological_model({}, matched_rates());
    const CoefficientMatrix cm = build_M(em);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (r != c) CHECK(cm.M(r, c) == Complex{});
    const TransmissionSpectrum sp = spectrum(em, grid_points({0.99, 1.01, 201}));
    for (const auto& T : sp.T) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                if (r != c) CHECK(T(r, c) == 0.0);
    }
    // A lossless single port is all-pass: Γ = -1 far away, +1 on resonance.
    CHECK(sp.gamma[100](0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto& T : sp.T)
        for (int r = 0; r < 3; ++r) CHECK(T(r, r) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("beam-splitter limit leaves the third mode reflecting") {
    const EffectiveModel em = phenomenological_model({1e-3, 0.0, 0.0, 0.4, 0.0, 0.0}, matched_rates());
    const TransmissionSpectrum sp = spectrum(em, grid_points({0.99, 1.01, 101}));
    for (const auto& T : sp.T) {
        CHECK(T(2, 0) == 0.0);
        CHECK(T(2, 1) == 0.0);
        CHECK(T(0, 2) == 0.0);
    }
}

TEST_CASE("zero phases are reciprocal") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        PhenomenologicalCouplings pc = random_couplings(rng);
        pc.theta1 = pc.theta2 = pc.theta3 = 0.0;
        const EffectiveModel em = phenomenological_model(pc, random_rates(rng));
        const FrequencyGrid g = default_grid(em, 401);
        const TransmissionSpectrum sp = spectrum(em, grid_points(g));
        double worst = 0.0;
        for (const auto& T : sp.T) worst = std::max(worst, max_abs(T - T.transpose()));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("only the loop phase is physical") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, two_pi);
    for (int trial = 0; trial < 20; ++trial) {
        const PhenomenologicalCouplings pc = random_couplings(rng);
        const EffectiveRates rates = random_rates(rng);
        const EffectiveModel ref = phenomenological_model(pc, rates);
        const std::vector<double> w = grid_points(default_grid(ref, 101));
        const TransmissionSpectrum a = spectrum(ref, w);
        PhenomenologicalCouplings q = pc;
        const double chi = u(rng);
        q.theta1 += chi;
        q.theta3 -= chi;
        const TransmissionSpectrum b = spectrum(phenomenological_model(q, rates), w);
        for (std::size_t k = 0; k < w.size(); ++k) CHECK(max_abs(a.T[k] - b.T[k]) <= 1e-12);
    }
}

TEST_CASE("reversing the loop phase transposes transmission") {
    const PhenomenologicalCouplings pc{1e-3, 1e-3, 1e-3, 1.2, 0.0, 0.0};
    PhenomenologicalCouplings rev = pc;
    rev.theta1 = -pc.theta1;
    const std::vector<double> w = grid_points({0.995, 1.005, 101});
    const TransmissionSpectrum a = spectrum(phenomenological_model(pc, matched_rates()), w);
    const TransmissionSpectrum b = spectrum(phenomenological_model(rev, matched_rates()), w);
    for (std::size_t k = 0; k < w.size(); ++k) CHECK(max_abs(a.T[k] - b.T[k].transpose()) <= 1e-12);
}

TEST_CASE("hermitian couplings conserve energy") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const EffectiveModel em = phenomenological_model(random_couplings(rng), random_rates(rng));
        const CoefficientMatrix cm = build_M(em);
        for (double w : grid_points(default_grid(em, 11))) {
            const Eigen::Matrix3cd g = gamma_at(cm, w);
            CHECK((g.adjoint() * g - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff() <= 1e-10);
            const Eigen::Matrix3d T = g.cwiseAbs2();
            for (int r = 0; r < 3; ++r) CHECK(std::abs(T.row(r).sum() - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("far off resonance every port reflects") {
    std::mt19937_64 rng(53);
    const EffectiveRates rates = random_rates(rng);
    const EffectiveModel em = phenomenological_model(random_couplings(rng), rates);
    const double lw = std::max({rates.kappa_eff, rates.gamma_eff1, rates.gamma_eff2});
    const double center = (rates.delta_eff + rates.omega_eff1 + rates.omega_eff2) / 3.0;
    const CoefficientMatrix cm = build_M(em);
    for (double sgn : {-1.0, 1.0}) {
        const Eigen::Matrix3d T = gamma_at(cm, center + sgn * 1e4 * lw).cwiseAbs2();
        CHECK(max_abs(T - Eigen::Matrix3d::Identity()) <= 1e-4);
    }
}

TEST_CASE("undamped resonance is singular") {
    CoefficientMatrix cm;
    cm.M = Eigen::Matrix3cd::Zero();
    cm.M(0, 0) = {0.0, 1.0};
    cm.M(1, 1) = {1.0, 0.0};
    cm.M(2, 2) = {1.0, 0.0};
    cm.L = Eigen::Vector3d::Ones();
    CHECK_THROWS_AS(gamma_at(cm, 1.0), SingularError);
    CHECK_NOTHROW(gamma_at(cm, 1.5));
}

TEST_CASE("grids") {
    CHECK(grid_points({0.0, 1.0, 5}) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(grid_points({2.0, 2.0, 1}) == std::vector<double>{2.0});
    CHECK_THROWS_AS(grid_points({0.0, 1.0, 0}), DomainError);
    CHECK_THROWS_AS(grid_points({1.0, 0.0, 5}), DomainError);
    CHECK_THROWS_AS(spectrum(build_M(phenomenological_model({}, matched_rates())), {1.0, 1.0}), DomainError);

    const EffectiveModel em = phenomenological_model({1e-2, 1e-2, 1e-2, 1.0, 0, 0}, matched_rates());
    const FrequencyGrid g = default_grid(em);
    CHECK(g.n == 2001);
    CHECK(g.omega_min < 1.0 - 2e-2);
    CHECK(g.omega_max > 1.0 + 2e-2);
}

TEST_CASE("refined extremum is never worse than the coarse grid") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const EffectiveModel em = phenomenological_model(random_couplings(rng), random_rates(rng));
        const CoefficientMatrix cm = build_M(em);
        const FrequencyGrid g = default_grid(em, 201);
        const Window w{g.omega_min, g.omega_max};
        const PortPair pair{Port::a2, Port::b1};
        double coarse_max = -1.0, coarse_min = 2.0;
        for (double x : grid_points(g)) {
            const double t = transmission(cm, pair, x);
            coarse_max = std::max(coarse_max, t);
            coarse_min = std::min(coarse_min, t);
        }
        const ExtremumResult mx = extremum_scan(cm, pair, w, Extremum::max, 201);
        const ExtremumResult mn = extremum_scan(cm, pair, w, Extremum::min, 201);
        CHECK(mx.value >= coarse_max);
        CHECK(mn.value <= coarse_min);
        CHECK(transmission(cm, pair, mx.omega) == mx.value);
    }
}

TEST_CASE("stability") {
    CoefficientMatrix cm = build_M(phenomenological_model({}, {1.0, 1.0, 1.0, 0.4, 0.2, 0.3}));
    StabilityReport r = stability_check(cm);
    CHECK(r.stable);
    CHECK(r.margin == doctest::Approx(0.1).epsilon(1e-14));

    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        PhenomenologicalCouplings pc = random_couplings(rng);
        pc.G10 *= 100.0;
        pc.V0 *= 100.0;
        CHECK(stability_check(build_M(phenomenological_model(pc, random_rates(rng)))).stable);
    }

    cm.M(0, 0) = Complex{-0.2, 1.0};
    r = stability_check(cm);
    CHECK_FALSE(r.stable);
    CHECK(r.margin < 0.0);
}

TEST_CASE("matched circulator near seven sixths pi") {
    const double s = 1e-3;
    const CirculatorOptimum c = circulator_at(matched_rates(), s, 7.0 * pi / 6.0, true);
    CHECK(c.forward >= 0.99);
    CHECK(c.backward <= 0.01);
    CHECK(c.isolation_db > 20.0);
    const CirculatorOptimum z = circulator_at(matched_rates(), s, 0.0, true);
    CHECK(z.isolation_db == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(isolation_db(0.5, 0.5) == 0.0);
}

TEST_CASE("circulator search reports both phase branches for each direction") {
    CirculatorSearchOptions o;
    o.phase_points = 72;
    o.omega_points = 401;
    const CirculatorSearch res = find_circulator_point(matched_rates(), 1e-3, o);
    REQUIRE(res.forward_optima.size() == 2);
    REQUIRE(res.reverse_optima.size() == 2);
    CHECK(res.forward_optima[0].loop_phase == doctest::Approx(7.0 * pi / 6.0).epsilon(1e-6));
    CHECK(res.forward_optima[1].loop_phase == doctest::Approx(11.0 * pi / 6.0).epsilon(1e-6));
    CHECK(res.reverse_optima[0].loop_phase == doctest::Approx(pi / 6.0).epsilon(1e-6));
    CHECK(res.reverse_optima[1].loop_phase == doctest::Approx(5.0 * pi / 6.0).epsilon(1e-6));
    for (const auto& c : res.forward_optima) {
        CHECK(c.forward >= 0.99);
        CHECK(c.backward <= 0.01);
    }
}

TEST_CASE("sweeps are deterministic and independent of thread count") {
    PhenomenologicalTemplate t{{1e-3, 1e-3, 1e-3, 0.0, 0.0, 0.0}, matched_rates()};
    const std::vector<SweepAxis> axes{{"theta1", 0.0, two_pi, 13}, {"G10", 5e-4, 2e-3, 4}};
    const SweepResult a = sweep(t, axes, "max_contrast_a2b1", 1);
    const SweepResult b = sweep(t, axes, "max_contrast_a2b1", 4);
    CHECK(a.values == b.values);
    CHECK(a.values.size() == 52);
    CHECK(a.axis_values[0].front() == 0.0);
    CHECK(a.axis_values[0].back() == two_pi);

    // Point (θ1 = 7π/6, G10 = 1e-3) matches a direct evaluation.
    PhenomenologicalCouplings pc = t.couplings;
    pc.theta1 = a.axis_values[0][7];
    pc.G10 = a.axis_values[1][1];
    CHECK(a.values[7 * 4 + 1] == evaluate_metric(phenomenological_model(pc, t.rates), "max_contrast_a2b1"));

    CHECK_THROWS_AS(sweep(t, {{"nonsense", 0, 1, 2}}, "delta_eff"), ConfigError);
    CHECK_THROWS_AS(sweep(t, axes, "max_T_zz"), ConfigError);
}

TEST_CASE("linearized sweeps go through elimination") {
    LinearizedModel lm;
    lm.delta_c1_prime = 1.0;
    lm.delta_c2 = 1.0;
    lm.omega_m1 = lm.omega_m2 = 1.0;
    lm.G1 = lm.G2 = {0.01, 0.0};
    lm.cJ = {0.0, -0.01};
    lm.V = 1e-3;
    lm.kappa1 = 0.1;
    lm.kappa2 = 0.01;
    lm.gamma1 = lm.gamma2 = 1e-3;
    const SweepResult r = sweep(SweepTemplate{lm}, {{"J", 0.0, 1.0, 3}}, "delta_eff", 2);
    CHECK(r.values[0] == 1.0);
    LinearizedModel half = lm;
    half.cJ = {0.0, -0.5};
    CHECK(r.values[1] == eliminate(half).delta_eff);
}
