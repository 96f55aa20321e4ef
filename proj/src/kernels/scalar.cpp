#include "optocirc/kernels/dispatch.hpp"

#include <cmath>

namespace optocirc::kernels::detail {

namespace {

struct C {
    double re;
    double im;
};

inline C mul(C a, C b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline C sub(C a, C b) { return {a.re - b.re, a.im - b.im}; }
inline C add(C a, C b) { return {a.re + b.re, a.im + b.im}; }

} // namespace

// Adjugate inverse of A = M - iω. Operation order is mirrored exactly by the
// vector kernels.
void scattering_scalar(const Complex* M, const double* L, const double* omegas, std::size_t n, Complex* gamma) {
    C m[9];
    for (int k = 0; k < 9; ++k) m[k] = {M[k].real(), M[k].imag()};
    double ll[9];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ll[i * 3 + j] = L[i] * L[j];

    for (std::size_t p = 0; p < n; ++p) {
        const double w = omegas[p];
        C a[9];
        for (int k = 0; k < 9; ++k) a[k] = m[k];
        a[0].im = m[0].im - w;
        a[4].im = m[4].im - w;
        a[8].im = m[8].im - w;

        C c[9];
        c[0] = sub(mul(a[4], a[8]), mul(a[5], a[7]));
        c[1] = sub(mul(a[5], a[6]), mul(a[3], a[8]));
        c[2] = sub(mul(a[3], a[7]), mul(a[4], a[6]));
        c[3] = sub(mul(a[2], a[7]), mul(a[1], a[8]));
        c[4] = sub(mul(a[0], a[8]), mul(a[2], a[6]));
        c[5] = sub(mul(a[1], a[6]), mul(a[0], a[7]));
        c[6] = sub(mul(a[1], a[5]), mul(a[2], a[4]));
        c[7] = sub(mul(a[2], a[3]), mul(a[0], a[5]));
        c[8] = sub(mul(a[0], a[4]), mul(a[1], a[3]));

        const C det = add(add(mul(a[0], c[0]), mul(a[1], c[1])), mul(a[2], c[2]));
        const double r = 1.0 / (det.re * det.re + det.im * det.im);
        const C inv_det{det.re * r, (0.0 - det.im) * r};

        Complex* g = gamma + p * 9;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const C v = mul(c[j * 3 + i], inv_det);
                double re = ll[i * 3 + j] * v.re;
                const double im = ll[i * 3 + j] * v.im;
                if (i == j) re = re - 1.0;
                g[i * 3 + j] = Complex{re, im};
            }
        }
    }
}

void chsh_row_scalar(double theta, const double* alpha2, std::size_t n, double* out) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = alpha2[k];
        const double root = std::sqrt(1.0 - a * a);
        const double t = c + s * (a * root);
        out[k] = 2.0 * (t * t);
    }
}

} // namespace optocirc::kernels::detail
