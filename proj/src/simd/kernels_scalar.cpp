#include "nfs/simd/kernels.hpp"

namespace nfs::simd {

namespace {

void axpy_scalar(cplx a, const cplx *x, cplx *y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void combine2_scalar(cplx a, const cplx *x, cplx b, const cplx *y, cplx *out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void fir_scalar(const cplx *in, const cplx *w, std::size_t taps, cplx *out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < taps; ++k) acc += w[k] * in[i + k];
        out[i] = acc;
    }
}

void intensity2_scalar(const cplx *s, const cplx *p, double *out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(s[i]) + std::norm(p[i]);
}

double norm_sq_scalar(const cplx *x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::norm(x[i]);
    return acc;
}

}  // namespace

const KernelTable &scalar_kernels() {
    static const KernelTable table{"scalar",        axpy_scalar,       combine2_scalar,
                                   fir_scalar,      intensity2_scalar, norm_sq_scalar};
    return table;
}

}  // namespace nfs::simd
