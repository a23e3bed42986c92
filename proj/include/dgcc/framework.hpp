#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgcc/encoding.hpp"
#include "dgcc/evolution.hpp"
#include "dgcc/instance.hpp"
#include "dgcc/objectives.hpp"
#include "dgcc/pareto.hpp"
#include "dgcc/resources.hpp"

namespace dgcc {

struct Ablations {
    bool no_structure_adjustment = false;
    bool no_resource_allocation = false;
    bool no_population_inheritance = false;

    bool operator==(const Ablations&) const = default;
};

struct RunConfig {
    std::size_t n = 100;          // subpopulation size
    double p_m = 0.3;
    double p_z = 0.3;
    double alpha_ctrl = 0.8;
    double theta = 10000.0;
    int slots_per_day = 5;        // M
    int total_days = 0;           // D, required
    int adjust_period = 8;        // L, in rounds
    long basic_fes = -1;          // I_bas; -1 = 10n
    long additional_fes = -1;     // I_add; -1 = 10n
    long max_fes = 0;             // 0 = 30000m + 5000D
    std::uint64_t seed = 1;
    Ablations ablations;
    EvalMode eval_mode = EvalMode::context;
    bool count_interday_edges = true;
    ReferencePolicy ref_policy = ReferencePolicy::adaptive;
    std::array<double, 3> ref_coords{0.0, 0.0, 0.0};  // used by the fixed policy
    double ref_margin = 1.1;
    double delta_const = 1e-12;
    bool preserve_intermediate_days = false;
    std::vector<int> order;  // component visiting order; empty = instance cluster order
    std::optional<std::size_t> archive_capacity;

    // Copy with automatic values filled in for an instance with m clusters.
    RunConfig resolved(std::size_t m) const;
    void validate(std::size_t m) const;
    EvalConfig eval_config() const;
};

long default_max_fes(std::size_t m, int total_days);

// Per-round audit record.
struct RoundSnapshot {
    std::size_t round = 0;              // 0 is the warm-up round
    std::vector<int> days;              // plan used during the round
    std::vector<long> allocated;        // I_avl handed out at the start of the round
    std::vector<long> used;             // FEs actually consumed
    std::size_t active = 0;             // |U| behind the allocation
    std::vector<double> hv;             // C_i at the end of the round
    std::vector<double> delta;
    std::vector<double> potential;
    std::vector<bool> stagnant;
    double balance = 0.0;
    long fes = 0;                       // cumulative
    double context_hv_contrib = 0.0;
    bool adjusted = false;              // a structure adjustment ran after this round
    bool complete = true;               // false if the budget ran out mid-round
};

struct RunResult {
    ParetoArchive archive;
    std::vector<RoundSnapshot> history;
    long fes_total = 0;
    long max_fes = 0;
    ReferencePoint ref;
    DecompositionPlan plan;  // final plan
    ContextSolution context;
    std::vector<DecomposabilityReport> decomposability;
    std::vector<std::string> warnings;
};

// Cooperative coevolution with dynamic decomposition and contribution-based
// resource allocation.
RunResult run_dgcc(const ClusteredInstance& instance, const RunConfig& cfg);

// Single-population NSGA-II over full genomes on the fixed initial plan.
RunResult run_global_nsga2(const ClusteredInstance& instance, const RunConfig& cfg);

double component_hv(const Subpopulation& subpop, const ReferencePoint& ref);

// HV_i of each component's normalized isolated fitness f/d_i against a shared
// reference (component-wise max of all normalized vectors times 1.1).
std::vector<double> normalized_component_hv(const std::vector<Subpopulation>& subpops, const DecompositionPlan& plan,
                                            const ClusteredInstance& instance, const EvalConfig& eval);

struct AdjustmentDecision {
    std::size_t i_max = 0;  // receives a day
    std::size_t i_min = 0;  // gives a day
};

// argmax HV (lowest index on ties) and argmin HV over components with more
// than one day. Empty when no transfer applies.
std::optional<AdjustmentDecision> decide_adjustment(std::span<const double> hv, std::span<const int> days);

struct AdjustOptions {
    double p_z = 0.3;
    bool preserve_intermediate_days = false;
};

// Moves one day block from i_min to i_max through the components in between,
// rewriting every affected individual and the context genome. New day blocks
// are random for individuals and empty for the context. Affected
// subpopulations lose their cached objectives.
void apply_adjustment(const AdjustmentDecision& decision, DecompositionPlan& plan, std::vector<Subpopulation>& subpops,
                      Genome& context, const ClusteredInstance& instance, const AdjustOptions& options,
                      RandomStream& rng);

struct AdjustOutcome {
    std::vector<double> hv;
    std::optional<AdjustmentDecision> decision;
};

AdjustOutcome dynamic_adjust(DecompositionPlan& plan, std::vector<Subpopulation>& subpops, Genome& context,
                             const ClusteredInstance& instance, const EvalConfig& eval, const AdjustOptions& options,
                             RandomStream& rng);

} // namespace dgcc
