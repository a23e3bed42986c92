#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dgcc/encoding.hpp"
#include "dgcc/objectives.hpp"
#include "dgcc/pareto.hpp"
#include "dgcc/rng.hpp"

namespace dgcc {

using Segment = std::vector<int>;

struct OperatorConfig {
    double p_m = 0.3;  // per-individual mutation probability
    double p_z = 0.3;  // per-slot zeroing probability at initialization
};

// One random individual for `cluster`: min(length, |V_i|) distinct POIs,
// shuffled over the slots, each slot zeroed with probability p_z. If all slots
// end up empty one of the sampled POIs is restored.
Segment random_segment(int cluster, std::size_t length, double p_z, const ClusteredInstance& instance,
                       RandomStream& rng);

// Places a random cluster POI into a random slot if the segment is empty.
void repair_empty(std::span<int> segment, int cluster, const ClusteredInstance& instance, RandomStream& rng);

// With probability p_m, one uniformly chosen slot takes a value drawn from
// {0} ∪ (cluster POIs not in the segment).
void mutate(std::span<int> segment, int cluster, double p_m, const ClusteredInstance& instance, RandomStream& rng);

// Two-point crossover; duplicates created in the exchanged region are
// re-drawn from {0} ∪ unused cluster POIs, then empty segments are repaired.
std::pair<Segment, Segment> crossover(std::span<const int> parent_a, std::span<const int> parent_b, int cluster,
                                      const ClusteredInstance& instance, RandomStream& rng);

// Context genome with segment `position` replaced.
Genome assemble(const Genome& context, const DecompositionPlan& plan, std::size_t position,
                std::span<const int> segment);

struct Subpopulation {
    std::size_t component = 0;  // position in the plan
    std::vector<Segment> individuals;
    std::vector<ObjectiveVector> objectives;  // parallel to individuals once evaluated
    std::uint64_t generations = 0;            // generations executed so far, keys the random streams
};

Subpopulation init_subpopulation(std::size_t position, const DecompositionPlan& plan, const ClusteredInstance& instance,
                                 std::size_t n, double p_z, RandomStream& rng);

struct ContextSolution {
    Genome genome;
    ObjectiveVector objectives;
    double hv_contrib = 0.0;
};

struct Candidate {
    Genome genome;
    ObjectiveVector objectives;
};

// Everything a component step reads besides the population itself.
struct StepEnv {
    const DecompositionPlan& plan;
    const ClusteredInstance& instance;
    const EvalConfig& eval;
    OperatorConfig ops;
    std::uint64_t seed;
};

// Evaluates one segment of component `position`: returns the objectives used
// for selection and fills `full` with the assembled full-genome candidate.
ObjectiveVector evaluate_member(std::span<const int> segment, std::size_t position, const Genome& context,
                                const StepEnv& env, Candidate& full);

// Evaluates every individual (n FEs) and returns the assembled candidates.
std::vector<Candidate> evaluate_subpopulation(Subpopulation& subpop, const Genome& context, const StepEnv& env);

struct StepResult {
    std::size_t fes_used = 0;
    std::size_t generations = 0;
    std::vector<Candidate> candidates;  // every evaluated full assembly, in evaluation order
};

// Runs NSGA-II generations on one component while another full generation of
// n evaluations fits in `budget`.
StepResult nsga2_step(Subpopulation& subpop, std::size_t budget, const Genome& context, const StepEnv& env);

// Generic NSGA-II generation shared by the component optimizer and the global
// baseline. `vary` produces two children for pair `k`; `evaluate` scores one
// child (one FE).
struct GenerationOps {
    std::function<std::pair<Segment, Segment>(const Segment&, const Segment&, std::size_t pair)> vary;
    std::function<ObjectiveVector(const Segment&)> evaluate;
};

void nsga2_generation(std::vector<Segment>& population, std::vector<ObjectiveVector>& objectives,
                      RandomStream& selection, const GenerationOps& ops);

// Indices of the `keep` survivors of `points` (fronts, then crowding).
std::vector<std::size_t> environmental_selection(std::span<const ObjectiveVector> points, std::size_t keep);

} // namespace dgcc
