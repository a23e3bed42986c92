#include "dgcc/kernels.hpp"

namespace dgcc::kernels {

namespace {

void compare_scalar(const double* probe, SoaView e, std::uint8_t* out) {
    const double a0 = probe[0], a1 = probe[1], a2 = probe[2];
    for (std::size_t j = 0; j < e.n; ++j) {
        const double b0 = e.f0[j], b1 = e.f1[j], b2 = e.f2[j];
        const bool a_le = a0 <= b0 && a1 <= b1 && a2 <= b2;
        const bool b_le = b0 <= a0 && b1 <= a1 && b2 <= a2;
        out[j] = static_cast<std::uint8_t>((a_le ? 1 : 0) | (b_le ? 2 : 0));
    }
}

void box_volume_scalar(const double* ref, SoaView e, double* out) {
    for (std::size_t j = 0; j < e.n; ++j) {
        const double d0 = ref[0] - e.f0[j];
        const double d1 = ref[1] - e.f1[j];
        const double d2 = ref[2] - e.f2[j];
        out[j] = (d0 >= 0.0 && d1 >= 0.0 && d2 >= 0.0) ? (d0 * d1) * d2 : 0.0;
    }
}

std::size_t count_covering_scalar(const double* probe, SoaView e) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < e.n; ++j) {
        if (e.f0[j] <= probe[0] && e.f1[j] <= probe[1] && e.f2[j] <= probe[2]) ++count;
    }
    return count;
}

constexpr KernelTable table{"scalar", compare_scalar, box_volume_scalar, count_covering_scalar};

} // namespace

const KernelTable& scalar_table() noexcept { return table; }

} // namespace dgcc::kernels
