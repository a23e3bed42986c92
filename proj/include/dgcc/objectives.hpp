#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "dgcc/encoding.hpp"
#include "dgcc/instance.hpp"

namespace dgcc {

// (F_t, F_c, F_e); every component is minimized.
struct ObjectiveVector {
    double f_t = 0.0;
    double f_c = 0.0;
    double f_e = 0.0;

    static constexpr std::size_t size() noexcept { return 3; }
    double operator[](std::size_t j) const noexcept { return j == 0 ? f_t : (j == 1 ? f_c : f_e); }
    double& operator[](std::size_t j) noexcept { return j == 0 ? f_t : (j == 1 ? f_c : f_e); }
    std::array<double, 3> to_array() const noexcept { return {f_t, f_c, f_e}; }

    bool operator==(const ObjectiveVector&) const = default;
};

enum class EvalMode { context, isolated };

struct EvalConfig {
    double alpha_ctrl = 0.8;  // control parameter of the balancing factor
    double theta = 10000.0;   // scale of F_e
    EvalMode mode = EvalMode::context;
    bool count_interday_edges = true;

    void validate() const;
};

// 1 - k / (D*M + alpha_ctrl).
double omega(std::size_t k, int total_days, int slots_per_day, double alpha_ctrl);

// Objectives of a raw slot range spanning `days` day blocks of M slots. The
// balancing factor uses the visited count of this range and `days`.
ObjectiveVector evaluate_slots(std::span<const int> slots, int days, int slots_per_day, const ClusteredInstance& instance,
                               const EvalConfig& cfg);

ObjectiveVector evaluate_full(const Genome& genome, const DecompositionPlan& plan, const ClusteredInstance& instance,
                              const EvalConfig& cfg);

// Segment `position` on its own: neighbour boundary edges excluded, local
// balancing factor 1 - k_i / (d_i*M + alpha_ctrl).
ObjectiveVector evaluate_segment(const Genome& genome, const DecompositionPlan& plan, const ClusteredInstance& instance,
                                 const EvalConfig& cfg, std::size_t position);

// Component-wise division by the segment's day count.
ObjectiveVector normalized_fitness(const ObjectiveVector& v, int days);

// Unweighted edge sums of one channel (no balancing factor), exposed for the
// segment/boundary identity checks.
double raw_edge_sum(std::span<const int> slots, int slots_per_day, const ClusteredInstance& instance, Channel channel,
                    bool count_interday_edges);

} // namespace dgcc
