#include <cstdlib>
#include <string_view>

#include "nfs/simd/kernels.hpp"

namespace nfs::simd {

#if defined(NFS_HAVE_AVX2)
const KernelTable &avx2_table();
#endif

const KernelTable *avx2_kernels() {
#if defined(NFS_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable &active() {
    static const KernelTable &chosen = [&]() -> const KernelTable & {
        const char *env = std::getenv("NFS_SIMD");
        const std::string_view request = env ? env : "";
        if (request == "scalar") return scalar_kernels();
        if (const KernelTable *t = avx2_kernels()) return *t;
        return scalar_kernels();
    }();
    return chosen;
}

}  // namespace nfs::simd
