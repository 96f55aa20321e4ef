#include "optocirc/kernels/dispatch.hpp"

#include <immintrin.h>

#include <cmath>

namespace optocirc::kernels::detail {

namespace {

struct V {
    __m256d re;
    __m256d im;
};

inline V mul(V a, V b) {
    return {_mm256_sub_pd(_mm256_mul_pd(a.re, b.re), _mm256_mul_pd(a.im, b.im)),
            _mm256_add_pd(_mm256_mul_pd(a.re, b.im), _mm256_mul_pd(a.im, b.re))};
}
inline V sub(V a, V b) { return {_mm256_sub_pd(a.re, b.re), _mm256_sub_pd(a.im, b.im)}; }
inline V add(V a, V b) { return {_mm256_add_pd(a.re, b.re), _mm256_add_pd(a.im, b.im)}; }

} // namespace

// Four frequencies per register, structure-of-arrays over real and imaginary
// parts. The tail falls through to the scalar kernel.
void scattering_avx2(const Complex* M, const double* L, const double* omegas, std::size_t n, Complex* gamma) {
    V m[9];
    for (int k = 0; k < 9; ++k) m[k] = {_mm256_set1_pd(M[k].real()), _mm256_set1_pd(M[k].imag())};
    __m256d ll[9];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ll[i * 3 + j] = _mm256_set1_pd(L[i] * L[j]);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();

    std::size_t p = 0;
    for (; p + 4 <= n; p += 4) {
        const __m256d w = _mm256_loadu_pd(omegas + p);
        V a[9];
        for (int k = 0; k < 9; ++k) a[k] = m[k];
        a[0].im = _mm256_sub_pd(m[0].im, w);
        a[4].im = _mm256_sub_pd(m[4].im, w);
        a[8].im = _mm256_sub_pd(m[8].im, w);

        V c[9];
        c[0] = sub(mul(a[4], a[8]), mul(a[5], a[7]));
        c[1] = sub(mul(a[5], a[6]), mul(a[3], a[8]));
        c[2] = sub(mul(a[3], a[7]), mul(a[4], a[6]));
        c[3] = sub(mul(a[2], a[7]), mul(a[1], a[8]));
        c[4] = sub(mul(a[0], a[8]), mul(a[2], a[6]));
        c[5] = sub(mul(a[1], a[6]), mul(a[0], a[7]));
        c[6] = sub(mul(a[1], a[5]), mul(a[2], a[4]));
        c[7] = sub(mul(a[2], a[3]), mul(a[0], a[5]));
        c[8] = sub(mul(a[0], a[4]), mul(a[1], a[3]));

        const V det = add(add(mul(a[0], c[0]), mul(a[1], c[1])), mul(a[2], c[2]));
        const __m256d r = _mm256_div_pd(
            one, _mm256_add_pd(_mm256_mul_pd(det.re, det.re), _mm256_mul_pd(det.im, det.im)));
        const V inv_det{_mm256_mul_pd(det.re, r), _mm256_mul_pd(_mm256_sub_pd(zero, det.im), r)};

        alignas(32) double re[9][4];
        alignas(32) double im[9][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const V v = mul(c[j * 3 + i], inv_det);
                __m256d vr = _mm256_mul_pd(ll[i * 3 + j], v.re);
                const __m256d vi = _mm256_mul_pd(ll[i * 3 + j], v.im);
                if (i == j) vr = _mm256_sub_pd(vr, one);
                _mm256_store_pd(re[i * 3 + j], vr);
                _mm256_store_pd(im[i * 3 + j], vi);
            }
        }
        for (int lane = 0; lane < 4; ++lane) {
            Complex* g = gamma + (p + lane) * 9;
            for (int k = 0; k < 9; ++k) g[k] = Complex{re[k][lane], im[k][lane]};
        }
    }
    if (p < n) scattering_scalar(M, L, omegas + p, n - p, gamma + p * 9);
}

void chsh_row_avx2(double theta, const double* alpha2, std::size_t n, double* out) {
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    const __m256d c = _mm256_set1_pd(cs);
    const __m256d s = _mm256_set1_pd(sn);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d a = _mm256_loadu_pd(alpha2 + k);
        const __m256d root = _mm256_sqrt_pd(_mm256_sub_pd(one, _mm256_mul_pd(a, a)));
        const __m256d t = _mm256_add_pd(c, _mm256_mul_pd(s, _mm256_mul_pd(a, root)));
        _mm256_storeu_pd(out + k, _mm256_mul_pd(two, _mm256_mul_pd(t, t)));
    }
    if (k < n) chsh_row_scalar(theta, alpha2 + k, n - k, out + k);
}

} // namespace optocirc::kernels::detail
