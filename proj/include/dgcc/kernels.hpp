#pragma once

// Data-parallel inner loops of the Pareto machinery. Each kernel has a scalar
// reference implementation and, where the build and the CPU allow, an AVX2
// variant. The active table is chosen once at first use; DGCC_KERNELS=scalar
// in the environment forces the reference path. All variants produce
// bit-identical output.

#include <cstddef>
#include <cstdint>

namespace dgcc::kernels {

// Objective vectors in structure-of-arrays form.
struct SoaView {
    const double* f0;
    const double* f1;
    const double* f2;
    std::size_t n;
};

enum Relation : std::uint8_t {
    incomparable = 0,
    a_dominates = 1,   // the probe dominates entry j
    b_dominates = 2,   // entry j dominates the probe
    equal = 3,
};

// out[j] = relation between `probe` and entry j (minimization).
using CompareFn = void (*)(const double* probe, SoaView entries, std::uint8_t* out);

// out[j] = prod_k (ref_k - f_k[j]) if entry j is inside the box (f <= ref),
// else 0.
using BoxVolumeFn = void (*)(const double* ref, SoaView entries, double* out);

// Number of entries that dominate or equal `probe`.
using CountCoveringFn = std::size_t (*)(const double* probe, SoaView entries);

struct KernelTable {
    const char* name;
    CompareFn compare;
    BoxVolumeFn box_volume;
    CountCoveringFn count_covering;
};

const KernelTable& scalar_table() noexcept;
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;
const KernelTable& active() noexcept;

} // namespace dgcc::kernels
