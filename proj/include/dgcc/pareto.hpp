#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgcc/encoding.hpp"
#include "dgcc/objectives.hpp"

namespace dgcc {

// True iff a <= b component-wise and a != b.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept;

// Fronts of index lists; front 0 is the non-dominated set. Indices inside a
// front are ascending.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjectiveVector> points);

// Rank of every point (0 = first front).
std::vector<std::size_t> pareto_ranks(std::span<const ObjectiveVector> points);

// NSGA-II crowding distance of the points of one front.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

enum class ReferencePolicy { fixed, adaptive };

struct ReferencePoint {
    std::array<double, 3> coords{0.0, 0.0, 0.0};
    ReferencePolicy policy = ReferencePolicy::adaptive;
    double margin = 1.1;
    bool frozen = false;
};

// fixed: returns `coords` unchanged. adaptive: component-wise max of the
// samples times `margin`, frozen.
ReferencePoint choose_reference_point(std::span<const ObjectiveVector> samples, ReferencePolicy policy,
                                      std::array<double, 3> fixed_coords = {0.0, 0.0, 0.0}, double margin = 1.1);

// Exact hypervolume by dimension sweep. Points that fail to weakly dominate the
// reference point are skipped; their number is written to `clipped`.
double hypervolume_2d(std::span<const std::array<double, 2>> points, std::array<double, 2> ref,
                      std::size_t* clipped = nullptr);
double hypervolume_3d(std::span<const std::array<double, 3>> points, std::array<double, 3> ref,
                      std::size_t* clipped = nullptr);
double hypervolume(std::span<const ObjectiveVector> points, const ReferencePoint& ref, std::size_t* clipped = nullptr);

// Volume of the box spanned by v and ref; 0 if v is outside the box.
double hv_contribution(const ObjectiveVector& v, const ReferencePoint& ref);
void hv_contributions(std::span<const ObjectiveVector> points, const ReferencePoint& ref, std::span<double> out);

struct ArchiveEntry {
    Genome genome;
    std::shared_ptr<const DecompositionPlan> plan;  // layout the genome was produced under
    ObjectiveVector objectives;
};

// Mutually non-dominated set of evaluated solutions. Equal objective vectors
// keep the incumbent.
class ParetoArchive {
public:
    explicit ParetoArchive(std::optional<std::size_t> capacity = std::nullopt) : capacity_(capacity) {}

    // Returns true if the candidate was inserted.
    bool insert(const Genome& genome, std::shared_ptr<const DecompositionPlan> plan, const ObjectiveVector& objectives);
    // True if some archived entry dominates or equals `v`.
    bool covers(const ObjectiveVector& v) const;

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<ArchiveEntry>& entries() const noexcept { return entries_; }
    std::vector<ObjectiveVector> objectives() const;
    std::optional<std::size_t> capacity() const noexcept { return capacity_; }

    // CSV with header f_t,f_c,f_e,genome; the genome column is quoted because
    // its text form contains commas. Doubles use 17 significant digits.
    std::string to_csv() const;

private:
    void truncate_to_capacity();

    std::optional<std::size_t> capacity_;
    std::vector<ArchiveEntry> entries_;
    std::vector<double> f0_, f1_, f2_;
};

std::string format_double(double v);

} // namespace dgcc
