#pragma once

// Batched numeric kernels with a portable scalar reference and vectorized
// variants chosen at runtime. Every variant performs the same IEEE operations
// in the same order, so results are bitwise identical across ISAs.

#include "optocirc/types.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace optocirc::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
std::vector<Isa> available_isas();

// Best available ISA, unless overridden with force_isa.
Isa active_isa();

// Pins dispatch to a given ISA (must be available); nullopt restores
// autodetection. Throws DomainError for an unavailable ISA.
void force_isa(std::optional<Isa> isa);

// Γ(ω) = L (M - iω)^-1 L - I for each ω. M is 3x3 row-major, L the diagonal
// coupling vector; gamma receives 9 row-major entries per ω. A singular
// M - iω yields non-finite entries for that ω.
void scattering_batch(const Complex* M, const double* L, const double* omegas, std::size_t n,
                      Complex* gamma, Isa isa);
void scattering_batch(const Complex* M, const double* L, const double* omegas, std::size_t n,
                      Complex* gamma);

// out[k] = 2 (cos θ + sin θ · a_k sqrt(1 - a_k^2))^2. Inputs assumed in [0, 1].
void chsh_row(double theta, const double* alpha2, std::size_t n, double* out, Isa isa);
void chsh_row(double theta, const double* alpha2, std::size_t n, double* out);

namespace detail {
void scattering_scalar(const Complex* M, const double* L, const double* omegas, std::size_t n, Complex* gamma);
void chsh_row_scalar(double theta, const double* alpha2, std::size_t n, double* out);
#if defined(OPTOCIRC_HAVE_AVX2)
void scattering_avx2(const Complex* M, const double* L, const double* omegas, std::size_t n, Complex* gamma);
void chsh_row_avx2(double theta, const double* alpha2, std::size_t n, double* out);
#endif
} // namespace detail

} // namespace optocirc::kernels
