#include "optocirc/kernels/dispatch.hpp"

#include "optocirc/error.hpp"

#include <atomic>

namespace optocirc::kernels {

namespace {

// -1 means autodetect; otherwise the forced Isa value.
std::atomic<int> forced{-1};

bool cpu_has_avx2() {
#if defined(OPTOCIRC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool has = __builtin_cpu_supports("avx2");
    return has;
#else
    return false;
#endif
}

} // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
    }
    return false;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::scalar};
    if (isa_available(Isa::avx2)) out.push_back(Isa::avx2);
    return out;
}

Isa active_isa() {
    const int f = forced.load(std::memory_order_relaxed);
    if (f >= 0) return static_cast<Isa>(f);
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

void force_isa(std::optional<Isa> isa) {
    if (isa && !isa_available(*isa))
        throw DomainError(std::string("kernel ISA not available on this machine: ") + isa_name(*isa));
    forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void scattering_batch(const Complex* M, const double* L, const double* omegas, std::size_t n, Complex* gamma,
                      Isa isa) {
    switch (isa) {
#if defined(OPTOCIRC_HAVE_AVX2)
    case Isa::avx2: detail::scattering_avx2(M, L, omegas, n, gamma); return;
#endif
    default: detail::scattering_scalar(M, L, omegas, n, gamma); return;
    }
}

void scattering_batch(const Complex* M, const double* L, const double* omegas, std::size_t n, Complex* gamma) {
    scattering_batch(M, L, omegas, n, gamma, active_isa());
}

void chsh_row(double theta, const double* alpha2, std::size_t n, double* out, Isa isa) {
    switch (isa) {
#if defined(OPTOCIRC_HAVE_AVX2)
    case Isa::avx2: detail::chsh_row_avx2(theta, alpha2, n, out); return;
#endif
    default: detail::chsh_row_scalar(theta, alpha2, n, out); return;
    }
}

void chsh_row(double theta, const double* alpha2, std::size_t n, double* out) {
    chsh_row(theta, alpha2, n, out, active_isa());
}

} // namespace optocirc::kernels
