// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only called after a
// runtime CPU check.

#include <immintrin.h>

#include "nfs/simd/kernels.hpp"

namespace nfs::simd {

namespace {

// Two complex numbers per __m256d: [re0, im0, re1, im1].
inline __m256d load2(const cplx *p) { return _mm256_loadu_pd(reinterpret_cast<const double *>(p)); }
inline void store2(cplx *p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double *>(p), v); }

// (ar + i ai) * x, lane-wise over the two packed complex values
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
    const __m256d swapped = _mm256_permute_pd(x, 0b0101);
    return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, swapped));
}

void axpy_avx2(cplx a, const cplx *x, cplx *y, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul(ar, ai, load2(x + i))));
    for (; i < n; ++i) y[i] += a * x[i];
}

void combine2_avx2(cplx a, const cplx *x, cplx b, const cplx *y, cplx *out, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    const __m256d br = _mm256_set1_pd(b.real());
    const __m256d bi = _mm256_set1_pd(b.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        store2(out + i, _mm256_add_pd(cmul(ar, ai, load2(x + i)), cmul(br, bi, load2(y + i))));
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void fir_avx2(const cplx *in, const cplx *w, std::size_t taps, cplx *out, std::size_t n) {
    constexpr std::size_t kMaxTaps = 16;
    __m256d wr[kMaxTaps], wi[kMaxTaps];
    if (taps > kMaxTaps) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < taps; ++k) acc += w[k] * in[i + k];
            out[i] = acc;
        }
        return;
    }
    for (std::size_t k = 0; k < taps; ++k) {
        wr[k] = _mm256_set1_pd(w[k].real());
        wi[k] = _mm256_set1_pd(w[k].imag());
    }
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t k = 0; k < taps; ++k) acc = _mm256_add_pd(acc, cmul(wr[k], wi[k], load2(in + i + k)));
        store2(out + i, acc);
    }
    for (; i < n; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < taps; ++k) acc += w[k] * in[i + k];
        out[i] = acc;
    }
}

void intensity2_avx2(const cplx *s, const cplx *p, double *out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s0 = load2(s + i), s1 = load2(s + i + 2);
        const __m256d p0 = load2(p + i), p1 = load2(p + i + 2);
        const __m256d q0 = _mm256_fmadd_pd(p0, p0, _mm256_mul_pd(s0, s0));
        const __m256d q1 = _mm256_fmadd_pd(p1, p1, _mm256_mul_pd(s1, s1));
        // [I0, I2, I1, I3] -> [I0, I1, I2, I3]
        const __m256d h = _mm256_hadd_pd(q0, q1);
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0b11011000));
    }
    for (; i < n; ++i) out[i] = std::norm(s[i]) + std::norm(p[i]);
}

double norm_sq_avx2(const cplx *x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = load2(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) total += std::norm(x[i]);
    return total;
}

}  // namespace

const KernelTable &avx2_table() {
    static const KernelTable table{"avx2",   axpy_avx2,       combine2_avx2,
                                   fir_avx2, intensity2_avx2, norm_sq_avx2};
    return table;
}

}  // namespace nfs::simd
