#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dgcc/instance.hpp"

namespace dgcc {

// Assignment of travel days to components. Position p in `order` is the p-th
// visited city; `days[p]` is its day count.
struct DecompositionPlan {
    std::vector<int> order;  // cluster indices, a permutation of 0..m-1
    std::vector<int> days;   // d_p >= 1, sum == total_days
    int total_days = 0;      // D
    int slots_per_day = 0;   // M

    std::size_t component_count() const noexcept { return order.size(); }
    std::size_t genome_length() const noexcept {
        return static_cast<std::size_t>(total_days) * static_cast<std::size_t>(slots_per_day);
    }
    std::size_t segment_offset(std::size_t position) const;
    std::size_t segment_length(std::size_t position) const;

    // Throws Error if any invariant fails.
    void validate() const;

    bool operator==(const DecompositionPlan&) const = default;
};

// Even split of D days over the components in `order`; the first D mod m
// components get one extra day.
DecompositionPlan initial_decomposition(std::size_t m, int total_days, int slots_per_day, std::vector<int> order = {});

struct Genome {
    std::vector<int> slots;  // 0 = empty slot, otherwise a POI id

    bool operator==(const Genome&) const = default;
};

// Mutable window onto one component's slots.
class SegmentView {
public:
    SegmentView(std::size_t component, std::span<int> slots, int slots_per_day)
        : component_(component), slots_(slots), per_day_(static_cast<std::size_t>(slots_per_day)) {}

    std::size_t component_index() const noexcept { return component_; }
    std::span<int> slots() const noexcept { return slots_; }
    std::size_t day_count() const noexcept { return slots_.size() / per_day_; }
    std::span<int> day_block(std::size_t d) const { return slots_.subspan(d * per_day_, per_day_); }
    std::vector<std::span<int>> day_blocks() const;

private:
    std::size_t component_;
    std::span<int> slots_;
    std::size_t per_day_;
};

SegmentView segment_of(Genome& genome, const DecompositionPlan& plan, std::size_t position);
std::span<const int> segment_slots(const Genome& genome, const DecompositionPlan& plan, std::size_t position);

// Ordered non-zero ids per day, in layout order.
std::vector<std::vector<int>> decode(const Genome& genome, const DecompositionPlan& plan);
// Concatenation of all days.
std::vector<int> visited_sequence(std::span<const int> slots);

enum class ViolationKind { length_mismatch, unknown_id, duplicate_id, wrong_cluster, empty_segment };

struct Violation {
    ViolationKind kind;
    int id = 0;               // offending POI id where applicable
    std::size_t segment = 0;  // offending segment position where applicable
    std::string message;
};

std::vector<Violation> validate(const Genome& genome, const DecompositionPlan& plan, const ClusteredInstance& instance);
// Checks one segment in isolation against the cluster it is assigned to.
std::vector<Violation> validate_segment(std::span<const int> segment, int cluster, int slots_per_day,
                                        const ClusteredInstance& instance);

// "1,0,2,0|3,4,0,0||5,0,0,0": '|' separates days, '||' separates segments.
std::string genome_to_text(std::span<const int> slots, std::span<const int> days, int slots_per_day);
std::string genome_to_text(const Genome& genome, const DecompositionPlan& plan);
// Inverse of genome_to_text; returns slots and per-segment day counts.
struct ParsedGenome {
    Genome genome;
    std::vector<int> days;
    int slots_per_day = 0;
};
ParsedGenome genome_from_text(const std::string& text);

} // namespace dgcc
