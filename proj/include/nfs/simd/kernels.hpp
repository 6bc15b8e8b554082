#pragma once

// Data-parallel inner loops over complex sample arrays.
//
// Every kernel has a scalar reference implementation. Vectorized variants
// (currently AVX2+FMA on x86-64) are selected once at runtime and must agree
// with the reference to rounding. NFS_SIMD=scalar in the environment forces
// the reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace nfs::simd {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;

    /// y[i] += a * x[i]
    void (*axpy)(cplx a, const cplx *x, cplx *y, std::size_t n);
    /// out[i] = a * x[i] + b * y[i]
    void (*combine2)(cplx a, const cplx *x, cplx b, const cplx *y, cplx *out, std::size_t n);
    /// out[i] = sum_k w[k] * in[i + k]
    void (*fir)(const cplx *in, const cplx *w, std::size_t taps, cplx *out, std::size_t n);
    /// out[i] = |s[i]|^2 + |p[i]|^2
    void (*intensity2)(const cplx *s, const cplx *p, double *out, std::size_t n);
    /// sum_i |x[i]|^2
    double (*norm_sq)(const cplx *x, std::size_t n);
};

const KernelTable &scalar_kernels();
/// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable *avx2_kernels();

/// Table chosen for this process (best supported unless NFS_SIMD overrides).
const KernelTable &active();

}  // namespace nfs::simd
