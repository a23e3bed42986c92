#include "dgcc/kernels.hpp"

#include <immintrin.h>

namespace dgcc::kernels {

namespace {

// Tail elements fall back to the same scalar expressions as the reference.

void compare_avx2(const double* probe, SoaView e, std::uint8_t* out) {
    const __m256d a0 = _mm256_set1_pd(probe[0]);
    const __m256d a1 = _mm256_set1_pd(probe[1]);
    const __m256d a2 = _mm256_set1_pd(probe[2]);
    std::size_t j = 0;
    for (; j + 4 <= e.n; j += 4) {
        const __m256d b0 = _mm256_loadu_pd(e.f0 + j);
        const __m256d b1 = _mm256_loadu_pd(e.f1 + j);
        const __m256d b2 = _mm256_loadu_pd(e.f2 + j);
        const __m256d a_le = _mm256_and_pd(_mm256_and_pd(_mm256_cmp_pd(a0, b0, _CMP_LE_OQ), _mm256_cmp_pd(a1, b1, _CMP_LE_OQ)),
                                           _mm256_cmp_pd(a2, b2, _CMP_LE_OQ));
        const __m256d b_le = _mm256_and_pd(_mm256_and_pd(_mm256_cmp_pd(b0, a0, _CMP_LE_OQ), _mm256_cmp_pd(b1, a1, _CMP_LE_OQ)),
                                           _mm256_cmp_pd(b2, a2, _CMP_LE_OQ));
        const int ma = _mm256_movemask_pd(a_le);
        const int mb = _mm256_movemask_pd(b_le);
        for (int k = 0; k < 4; ++k) {
            out[j + k] = static_cast<std::uint8_t>(((ma >> k) & 1) | (((mb >> k) & 1) << 1));
        }
    }
    for (; j < e.n; ++j) {
        const double b0 = e.f0[j], b1 = e.f1[j], b2 = e.f2[j];
        const bool a_le = probe[0] <= b0 && probe[1] <= b1 && probe[2] <= b2;
        const bool b_le = b0 <= probe[0] && b1 <= probe[1] && b2 <= probe[2];
        out[j] = static_cast<std::uint8_t>((a_le ? 1 : 0) | (b_le ? 2 : 0));
    }
}

void box_volume_avx2(const double* ref, SoaView e, double* out) {
    const __m256d r0 = _mm256_set1_pd(ref[0]);
    const __m256d r1 = _mm256_set1_pd(ref[1]);
    const __m256d r2 = _mm256_set1_pd(ref[2]);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= e.n; j += 4) {
        const __m256d d0 = _mm256_sub_pd(r0, _mm256_loadu_pd(e.f0 + j));
        const __m256d d1 = _mm256_sub_pd(r1, _mm256_loadu_pd(e.f1 + j));
        const __m256d d2 = _mm256_sub_pd(r2, _mm256_loadu_pd(e.f2 + j));
        const __m256d inside = _mm256_and_pd(_mm256_and_pd(_mm256_cmp_pd(d0, zero, _CMP_GE_OQ), _mm256_cmp_pd(d1, zero, _CMP_GE_OQ)),
                                             _mm256_cmp_pd(d2, zero, _CMP_GE_OQ));
        const __m256d vol = _mm256_mul_pd(_mm256_mul_pd(d0, d1), d2);
        _mm256_storeu_pd(out + j, _mm256_and_pd(vol, inside));
    }
    for (; j < e.n; ++j) {
        const double d0 = ref[0] - e.f0[j];
        const double d1 = ref[1] - e.f1[j];
        const double d2 = ref[2] - e.f2[j];
        out[j] = (d0 >= 0.0 && d1 >= 0.0 && d2 >= 0.0) ? (d0 * d1) * d2 : 0.0;
    }
}

std::size_t count_covering_avx2(const double* probe, SoaView e) {
    const __m256d a0 = _mm256_set1_pd(probe[0]);
    const __m256d a1 = _mm256_set1_pd(probe[1]);
    const __m256d a2 = _mm256_set1_pd(probe[2]);
    std::size_t count = 0;
    std::size_t j = 0;
    for (; j + 4 <= e.n; j += 4) {
        const __m256d le = _mm256_and_pd(
            _mm256_and_pd(_mm256_cmp_pd(_mm256_loadu_pd(e.f0 + j), a0, _CMP_LE_OQ),
                          _mm256_cmp_pd(_mm256_loadu_pd(e.f1 + j), a1, _CMP_LE_OQ)),
            _mm256_cmp_pd(_mm256_loadu_pd(e.f2 + j), a2, _CMP_LE_OQ));
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(le))));
    }
    for (; j < e.n; ++j) {
        if (e.f0[j] <= probe[0] && e.f1[j] <= probe[1] && e.f2[j] <= probe[2]) ++count;
    }
    return count;
}

} // namespace

extern const KernelTable avx2_kernel_table;
const KernelTable avx2_kernel_table{"avx2", compare_avx2, box_volume_avx2, count_covering_avx2};

} // namespace dgcc::kernels
