#include "optocirc/error.hpp"
#include "optocirc/kernels/dispatch.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

using namespace optocirc;
using namespace optocirc::kernels;

namespace {

bool bitwise_equal(const void* a, const void* b, std::size_t bytes) { return std::memcmp(a, b, bytes) == 0; }

struct Problem {
    std::vector<Complex> M;
    std::vector<double> L;
    std::vector<double> omegas;
};

Problem random_problem(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Problem p;
    p.M.resize(9);
    for (auto& z : p.M) z = {0.01 * u(rng), 0.01 * u(rng)};
    for (int k = 0; k < 3; ++k) p.M[k * 4] = {0.01 + 0.01 * std::abs(u(rng)), 1.0 + 0.01 * u(rng)};
    p.L = {std::sqrt(2.0 * p.M[0].real()), std::sqrt(2.0 * p.M[4].real()), std::sqrt(2.0 * p.M[8].real())};
    for (std::size_t k = 0; k < n; ++k) p.omegas.push_back(1.0 + 0.05 * u(rng));
    return p;
}

} // namespace

TEST_CASE("scalar is always available and dispatch can be pinned") {
    CHECK(isa_available(Isa::scalar));
    CHECK(available_isas().front() == Isa::scalar);
    force_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    force_isa(std::nullopt);
    CHECK(isa_available(active_isa()));
    CHECK(std::string(isa_name(Isa::avx2)) == "avx2");
}

TEST_CASE("scalar resolvent kernel matches a dense solve") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const Problem p = random_problem(rng, 7);
        std::vector<Complex> g(9 * p.omegas.size());
        scattering_batch(p.M.data(), p.L.data(), p.omegas.data(), p.omegas.size(), g.data(), Isa::scalar);
        Eigen::Matrix3cd M;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M(i, j) = p.M[i * 3 + j];
        const Eigen::Vector3d L(p.L[0], p.L[1], p.L[2]);
        for (std::size_t k = 0; k < p.omegas.size(); ++k) {
            Eigen::Matrix3cd A = M;
            A.diagonal().array() -= Complex{0.0, p.omegas[k]};
            const Eigen::Matrix3cd ref =
                L.asDiagonal() * A.fullPivLu().inverse() * L.asDiagonal() - Eigen::Matrix3cd::Identity();
            for (int e = 0; e < 9; ++e) CHECK(std::abs(g[k * 9 + e] - ref(e / 3, e % 3)) <= 1e-11);
        }
    }
}

TEST_CASE("every available ISA is bitwise identical to the scalar reference") {
    std::mt19937_64 rng(103);
    for (Isa isa : available_isas()) {
        CAPTURE(isa_name(isa));
        for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 33u, 1001u}) {
            const Problem p = random_problem(rng, n);
            std::vector<Complex> ref(9 * n), got(9 * n);
            scattering_batch(p.M.data(), p.L.data(), p.omegas.data(), n, ref.data(), Isa::scalar);
            scattering_batch(p.M.data(), p.L.data(), p.omegas.data(), n, got.data(), isa);
            CHECK(bitwise_equal(ref.data(), got.data(), ref.size() * sizeof(Complex)));

            std::vector<double> al(n), r1(n), r2(n);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (auto& a : al) a = u(rng);
            const double theta = 3.0 * u(rng);
            chsh_row(theta, al.data(), n, r1.data(), Isa::scalar);
            chsh_row(theta, al.data(), n, r2.data(), isa);
            CHECK(bitwise_equal(r1.data(), r2.data(), n * sizeof(double)));
        }
    }
}

TEST_CASE("singular frequencies give non-finite entries on every ISA") {
    std::vector<Complex> M(9, Complex{});
    M[0] = {0.0, 1.0};
    M[4] = {1.0, 0.0};
    M[8] = {1.0, 0.0};
    const std::vector<double> L{1.0, 1.0, 1.0};
    const std::vector<double> w{0.5, 1.0, 1.5, 2.0, 1.0};
    for (Isa isa : available_isas()) {
        std::vector<Complex> g(9 * w.size());
        scattering_batch(M.data(), L.data(), w.data(), w.size(), g.data(), isa);
        CHECK_FALSE(std::isfinite(std::abs(g[1 * 9])));
        CHECK_FALSE(std::isfinite(std::abs(g[4 * 9])));
        CHECK(std::isfinite(std::abs(g[0])));
        CHECK(std::isfinite(std::abs(g[3 * 9])));
    }
}

TEST_CASE("closed-form row kernel") {
    const std::vector<double> al{0.0, 0.5, 1.0 / std::sqrt(2.0), 1.0};
    std::vector<double> out(al.size());
    chsh_row(std::atan(0.5), al.data(), al.size(), out.data());
    CHECK(out[2] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(out[0] == doctest::Approx(2.0 * 0.8).epsilon(1e-15));
}
