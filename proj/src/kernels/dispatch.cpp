#include "dgcc/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace dgcc::kernels {

#if DGCC_WITH_AVX2
extern const KernelTable avx2_kernel_table;
#endif

const KernelTable* avx2_table() noexcept {
#if DGCC_WITH_AVX2
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return supported ? &avx2_kernel_table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable* chosen = [] {
        const char* env = std::getenv("DGCC_KERNELS");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_table();
        if (const KernelTable* t = avx2_table()) return t;
        return &scalar_table();
    }();
    return *chosen;
}

} // namespace dgcc::kernels
