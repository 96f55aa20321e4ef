#include "optocirc/bell.hpp"
#include "optocirc/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace optocirc;

namespace {

Eigen::MatrixXcd random_state(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd psi(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) psi(i, j) = {n(rng), n(rng)};
    return psi / psi.norm();
}

MeasurementVector random_vector(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return measurement(std::acos(1.0 - 2.0 * u(rng)), two_pi * u(rng));
}

Eigen::MatrixXcd bell_pair(double sign) {
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(2, 2);
    if (sign > 0) {
        psi(0, 0) = psi(1, 1) = 1.0 / std::sqrt(2.0);
    } else {
        psi(0, 1) = 1.0 / std::sqrt(2.0);
        psi(1, 0) = -1.0 / std::sqrt(2.0);
    }
    return psi;
}

} // namespace

TEST_CASE("closed form reference values") {
    for (double a : {0.0, 0.3, 0.8, 1.0}) CHECK(chsh_closed_form(0.0, a) == 2.0);
    CHECK(chsh_closed_form(std::atan(0.5), 1.0 / std::sqrt(2.0)) == doctest::Approx(2.5).epsilon(1e-15));
    for (double t = 0.0; t <= pi; t += 0.01) {
        CHECK(chsh_closed_form(t, 1.0) <= 2.0 + 1e-15);
        CHECK(chsh_closed_form(t, 0.0) == doctest::Approx(2.0 * std::cos(t) * std::cos(t)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(chsh_closed_form(0.1, 1.1), DomainError);
    CHECK_THROWS_AS(chsh_closed_form(0.1, -0.1), DomainError);
}

TEST_CASE("closed form is pi periodic in theta") {
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double t = 2.0 * pi * u(rng), a = u(rng);
        CHECK(chsh_closed_form(t + pi, a) == doctest::Approx(chsh_closed_form(t, a)).epsilon(1e-12));
    }
}

TEST_CASE("general expression limits") {
    const Complex a1{0.6, 0.1}, a2{0.3, -0.7}, b1{0.2, 0.5}, b2{-0.4, 0.1};
    CHECK(chsh_general(0.0, 0.0, 0.3, 1.1, a1, a2, b1, b2) == doctest::Approx(2.0));
    CHECK(chsh_general(0.7, 1.3, 0.3, 1.1, 0.0, a2, 0.0, b2) == doctest::Approx(2.0 * std::cos(0.7) * std::cos(1.3)));
}

TEST_CASE("general expression reduces to the closed form under the half-amplitude mapping") {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double t = pi * u(rng), x = u(rng);
        const double a1 = std::sqrt(1.0 - x * x) / 2.0;
        const double g = chsh_general(t, t, 0.0, 0.0, a1, x, a1, x);
        CHECK(g == doctest::Approx(chsh_closed_form(t, x)).epsilon(1e-12));
        // With α = β real and θa = θb the expression is a perfect square.
        const double y = 0.3 + 0.4 * u(rng);
        const double e = std::cos(t) + 2.0 * std::sin(t) * y * x;
        CHECK(chsh_general(t, t, 0.0, 0.0, y, x, y, x) == doctest::Approx(2.0 * e * e).epsilon(1e-12));
    }
}

TEST_CASE("pseudospin algebra") {
    CHECK_THROWS_AS(build_pseudospin(5), DomainError);
    CHECK_THROWS_AS(build_pseudospin(2), DomainError);
    const PseudospinSet s = build_pseudospin(10);
    CHECK(s.s_plus == s.s_minus.adjoint());
    for (int k = 0; k < 10; k += 2) {
        Eigen::VectorXcd odd = Eigen::VectorXcd::Zero(10), even = Eigen::VectorXcd::Zero(10);
        odd(k + 1) = 1.0;
        even(k) = 1.0;
        CHECK((s.s_minus * odd - even).norm() == 0.0);
        CHECK((s.s_minus * even).norm() == 0.0);
    }
    std::mt19937_64 rng(85);
    for (int i = 0; i < 50; ++i) {
        const Eigen::MatrixXcd A = s.along(random_vector(rng));
        CHECK((A * A - Eigen::MatrixXcd::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-14);
    }
    CHECK_THROWS_AS(measurement(-0.1), DomainError);
    CHECK(measurement(1.0, -pi / 2.0).phi == doctest::Approx(3.0 * pi / 2.0));
}

TEST_CASE("vacuum product state") {
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(1, 1);
    psi(0, 0) = 1.0;
    std::mt19937_64 rng(87);
    for (int i = 0; i < 20; ++i) {
        const MeasurementVector a = random_vector(rng), b = random_vector(rng);
        CHECK(chsh_operator_oracle(psi, a, a, b, b) ==
              doctest::Approx(2.0 * std::cos(a.theta) * std::cos(b.theta)).epsilon(1e-13));
    }
}

TEST_CASE("maximally entangled pair reaches the Tsirelson bound") {
    const MeasurementVector a = measurement(0.0), a2 = measurement(pi / 2.0);
    const MeasurementVector b = measurement(pi / 4.0), b2 = measurement(pi / 4.0, pi);
    CHECK(chsh_operator_oracle(bell_pair(+1), a, a2, b, b2) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(chsh_operator_oracle(bell_pair(-1), a, a2, b, b2) == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("operator bounds over random states") {
    std::mt19937_64 rng(89);
    for (int i = 0; i < 300; ++i) {
        const Eigen::MatrixXcd psi = random_state(rng, 3);
        const MeasurementVector a = random_vector(rng), a2 = random_vector(rng);
        const MeasurementVector b = random_vector(rng), b2 = random_vector(rng);
        CHECK(std::abs(chsh_operator_oracle(psi, a, a, b, b)) <= 2.0 + 1e-10);
        CHECK(std::abs(chsh_operator_oracle(psi, a, a2, b, b2)) <= 2.0 * std::sqrt(2.0) + 1e-10);
    }
}

TEST_CASE("oracle is insensitive to the truncation for low-lying states") {
    std::mt19937_64 rng(91);
    for (int i = 0; i < 50; ++i) {
        const Eigen::MatrixXcd psi = random_state(rng, 3);
        const MeasurementVector a = random_vector(rng), a2 = random_vector(rng);
        const MeasurementVector b = random_vector(rng), b2 = random_vector(rng);
        const double v10 = chsh_operator_oracle(psi, a, a2, b, b2, 10);
        const double v20 = chsh_operator_oracle(psi, a, a2, b, b2, 20);
        CHECK(std::abs(v10 - v20) <= 1e-12);
    }
}

TEST_CASE("oracle input validation") {
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(2, 2);
    psi(0, 0) = 0.5;
    const MeasurementVector z = measurement(0.0);
    CHECK_THROWS_AS(chsh_operator_oracle(psi, z, z, z, z), DomainError);
    Eigen::MatrixXcd wide = Eigen::MatrixXcd::Zero(6, 6);
    wide(5, 0) = 1.0;
    CHECK_THROWS_AS(chsh_operator_oracle(wide, z, z, z, z, 4), TruncationError);
    CHECK_NOTHROW(chsh_operator_oracle(wide, z, z, z, z, 6));
}

TEST_CASE("product states never violate") {
    std::mt19937_64 rng(93);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        Eigen::Vector3cd m1, m2;
        for (int k = 0; k < 3; ++k) {
            m1(k) = {n(rng), n(rng)};
            m2(k) = {n(rng), n(rng)};
        }
        const Eigen::MatrixXcd psi = product_state(m1.normalized(), m2.normalized());
        CHECK(std::abs(chsh_operator_oracle(psi, random_vector(rng), random_vector(rng), random_vector(rng),
                                            random_vector(rng)))
              <= 2.0 + 1e-10);
    }
}

TEST_CASE("violation scan") {
    std::vector<double> th, al;
    for (int k = 0; k <= 180; ++k) th.push_back(pi * k / 180.0);
    for (int k = 0; k <= 100; ++k) al.push_back(k / 100.0);
    const BellScan scan = violation_scan(th, al);
    CHECK(scan.violation_count() > 0);
    for (std::size_t it = 0; it < th.size(); ++it) {
        CHECK(scan.value(it, 0) <= 2.0);
        CHECK(scan.value(it, 100) <= 2.0 + 1e-15);
        CHECK(scan.violation[it * al.size()] == 0);
    }
    CHECK(scan.value(0, 0) == 2.0);
    const BellPeak p = refine_peak(scan);
    CHECK(p.value == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(std::abs(p.theta - std::atan(0.5)) <= 1e-6);
    CHECK(std::abs(p.alpha2 - 1.0 / std::sqrt(2.0)) <= 1e-6);

    CHECK_THROWS_AS(violation_scan({}, al), DomainError);
    CHECK_THROWS_AS(violation_scan(th, {1.5}), DomainError);
}
