#include "dgcc/evolution.hpp"

#include <algorithm>
#include <numeric>

namespace dgcc {

namespace {

template <typename T>
void shuffle(std::vector<T>& v, RandomStream& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

// Marks POI ids currently in a segment; cleared on destruction.
class IdMarks {
public:
    IdMarks(std::span<const int> ids, const ClusteredInstance& instance) : ids_(ids.begin(), ids.end()) {
        auto& m = marks();
        if (m.size() <= static_cast<std::size_t>(instance.max_id())) m.resize(static_cast<std::size_t>(instance.max_id()) + 1, 0);
        for (int id : ids_) {
            if (id != 0) ++m[static_cast<std::size_t>(id)];
        }
    }
    ~IdMarks() {
        auto& m = marks();
        for (int id : ids_) {
            if (id != 0) --m[static_cast<std::size_t>(id)];
        }
    }
    IdMarks(const IdMarks&) = delete;
    IdMarks& operator=(const IdMarks&) = delete;

    int count(int id) const { return marks()[static_cast<std::size_t>(id)]; }
    void replace(int old_id, int new_id) {
        auto& m = marks();
        if (old_id != 0) --m[static_cast<std::size_t>(old_id)];
        if (new_id != 0) ++m[static_cast<std::size_t>(new_id)];
        auto it = std::find(ids_.begin(), ids_.end(), old_id);
        *it = new_id;
    }

private:
    static std::vector<int>& marks() {
        thread_local std::vector<int> m;
        return m;
    }
    std::vector<int> ids_;
};

// Uniform draw from {0} ∪ (cluster POIs not marked).
int draw_replacement(int cluster, const IdMarks& marks, const ClusteredInstance& instance, RandomStream& rng) {
    thread_local std::vector<int> pool;
    pool.clear();
    pool.push_back(0);
    for (int id : instance.clusters()[static_cast<std::size_t>(cluster)]) {
        if (marks.count(id) == 0) pool.push_back(id);
    }
    return pool[rng.index(pool.size())];
}

bool all_zero(std::span<const int> segment) {
    return std::all_of(segment.begin(), segment.end(), [](int id) { return id == 0; });
}

} // namespace

Segment random_segment(int cluster, std::size_t length, double p_z, const ClusteredInstance& instance,
                       RandomStream& rng) {
    const auto& members = instance.clusters().at(static_cast<std::size_t>(cluster));
    const std::size_t k = std::min(length, members.size());
    std::vector<int> pool(members.begin(), members.end());
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
    Segment segment(length, 0);
    std::copy_n(pool.begin(), k, segment.begin());
    shuffle(segment, rng);
    const Segment sampled = segment;
    for (int& slot : segment) {
        if (rng.bernoulli(p_z)) slot = 0;
    }
    if (all_zero(segment) && k > 0) {
        std::vector<std::size_t> filled;
        for (std::size_t i = 0; i < length; ++i) {
            if (sampled[i] != 0) filled.push_back(i);
        }
        const std::size_t pick = filled[rng.index(filled.size())];
        segment[pick] = sampled[pick];
    }
    return segment;
}

void repair_empty(std::span<int> segment, int cluster, const ClusteredInstance& instance, RandomStream& rng) {
    if (segment.empty() || !all_zero(segment)) return;
    const auto& members = instance.clusters().at(static_cast<std::size_t>(cluster));
    segment[rng.index(segment.size())] = members[rng.index(members.size())];
}

void mutate(std::span<int> segment, int cluster, double p_m, const ClusteredInstance& instance, RandomStream& rng) {
    if (segment.empty() || !rng.bernoulli(p_m)) return;
    const std::size_t slot = rng.index(segment.size());
    {
        IdMarks marks(segment, instance);
        segment[slot] = draw_replacement(cluster, marks, instance, rng);
    }
    repair_empty(segment, cluster, instance, rng);
}

std::pair<Segment, Segment> crossover(std::span<const int> parent_a, std::span<const int> parent_b, int cluster,
                                      const ClusteredInstance& instance, RandomStream& rng) {
    if (parent_a.size() != parent_b.size()) throw Error("crossover: parents differ in length");
    const std::size_t len = parent_a.size();
    std::size_t c1 = rng.index(len + 1);
    std::size_t c2 = rng.index(len + 1);
    if (c1 > c2) std::swap(c1, c2);

    Segment a(parent_a.begin(), parent_a.end());
    Segment b(parent_b.begin(), parent_b.end());
    for (std::size_t i = c1; i < c2; ++i) std::swap(a[i], b[i]);

    for (Segment* child : {&a, &b}) {
        IdMarks marks(*child, instance);
        for (std::size_t i = c1; i < c2; ++i) {
            const int id = (*child)[i];
            if (id == 0 || marks.count(id) < 2) continue;
            const int replacement = draw_replacement(cluster, marks, instance, rng);
            marks.replace(id, replacement);
            (*child)[i] = replacement;
        }
    }
    repair_empty(a, cluster, instance, rng);
    repair_empty(b, cluster, instance, rng);
    return {std::move(a), std::move(b)};
}

Genome assemble(const Genome& context, const DecompositionPlan& plan, std::size_t position,
                std::span<const int> segment) {
    if (segment.size() != plan.segment_length(position)) {
        throw Error("assemble: segment length " + std::to_string(segment.size()) + " does not match component " +
                    std::to_string(position));
    }
    if (context.slots.size() != plan.genome_length()) throw Error("assemble: context length does not match plan");
    Genome out = context;
    std::copy(segment.begin(), segment.end(), out.slots.begin() + static_cast<std::ptrdiff_t>(plan.segment_offset(position)));
    return out;
}

Subpopulation init_subpopulation(std::size_t position, const DecompositionPlan& plan, const ClusteredInstance& instance,
                                 std::size_t n, double p_z, RandomStream& rng) {
    if (n < 2) throw Error("init_subpopulation: population size must be >= 2");
    Subpopulation sp;
    sp.component = position;
    const int cluster = plan.order.at(position);
    const std::size_t length = plan.segment_length(position);
    sp.individuals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) sp.individuals.push_back(random_segment(cluster, length, p_z, instance, rng));
    return sp;
}

ObjectiveVector evaluate_member(std::span<const int> segment, std::size_t position, const Genome& context,
                                const StepEnv& env, Candidate& full) {
    full.genome = assemble(context, env.plan, position, segment);
    full.objectives = evaluate_full(full.genome, env.plan, env.instance, env.eval);
    if (env.eval.mode == EvalMode::isolated) {
        return evaluate_slots(segment, env.plan.days[position], env.plan.slots_per_day, env.instance, env.eval);
    }
    return full.objectives;
}

std::vector<Candidate> evaluate_subpopulation(Subpopulation& subpop, const Genome& context, const StepEnv& env) {
    std::vector<Candidate> out(subpop.individuals.size());
    subpop.objectives.resize(subpop.individuals.size());
    for (std::size_t i = 0; i < subpop.individuals.size(); ++i) {
        subpop.objectives[i] = evaluate_member(subpop.individuals[i], subpop.component, context, env, out[i]);
    }
    return out;
}

std::vector<std::size_t> environmental_selection(std::span<const ObjectiveVector> points, std::size_t keep) {
    std::vector<std::size_t> chosen;
    chosen.reserve(keep);
    for (const auto& front : non_dominated_sort(points)) {
        if (chosen.size() + front.size() <= keep) {
            chosen.insert(chosen.end(), front.begin(), front.end());
            if (chosen.size() == keep) break;
            continue;
        }
        std::vector<ObjectiveVector> members;
        members.reserve(front.size());
        for (std::size_t i : front) members.push_back(points[i]);
        const auto dist = crowding_distance(members);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
        for (std::size_t r = 0; chosen.size() < keep; ++r) chosen.push_back(front[order[r]]);
        break;
    }
    return chosen;
}

void nsga2_generation(std::vector<Segment>& population, std::vector<ObjectiveVector>& objectives,
                      RandomStream& selection, const GenerationOps& ops) {
    const std::size_t n = population.size();
    std::vector<std::size_t> rank(n, 0);
    std::vector<double> crowd(n, 0.0);
    const auto fronts = non_dominated_sort(objectives);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        std::vector<ObjectiveVector> members;
        members.reserve(fronts[r].size());
        for (std::size_t i : fronts[r]) members.push_back(objectives[i]);
        const auto dist = crowding_distance(members);
        for (std::size_t k = 0; k < fronts[r].size(); ++k) {
            rank[fronts[r][k]] = r;
            crowd[fronts[r][k]] = dist[k];
        }
    }
    auto tournament = [&] {
        const std::size_t a = selection.index(n);
        const std::size_t b = selection.index(n);
        if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
        return crowd[b] > crowd[a] ? b : a;
    };

    std::vector<Segment> offspring;
    offspring.reserve(n);
    for (std::size_t pair = 0; offspring.size() < n; ++pair) {
        const std::size_t p1 = tournament();
        const std::size_t p2 = tournament();
        auto children = ops.vary(population[p1], population[p2], pair);
        offspring.push_back(std::move(children.first));
        if (offspring.size() < n) offspring.push_back(std::move(children.second));
    }

    std::vector<ObjectiveVector> merged = objectives;
    merged.reserve(2 * n);
    for (const Segment& child : offspring) merged.push_back(ops.evaluate(child));

    const auto survivors = environmental_selection(merged, n);
    std::vector<Segment> next_pop;
    std::vector<ObjectiveVector> next_obj;
    next_pop.reserve(n);
    next_obj.reserve(n);
    for (std::size_t i : survivors) {
        next_pop.push_back(i < n ? std::move(population[i]) : std::move(offspring[i - n]));
        next_obj.push_back(merged[i]);
    }
    population = std::move(next_pop);
    objectives = std::move(next_obj);
}

StepResult nsga2_step(Subpopulation& subpop, std::size_t budget, const Genome& context, const StepEnv& env) {
    StepResult result;
    const std::size_t n = subpop.individuals.size();
    if (n < 2) throw Error("nsga2_step: population size must be >= 2");
    if (subpop.objectives.size() != n) throw Error("nsga2_step: subpopulation has not been evaluated");
    const std::size_t pos = subpop.component;
    const int cluster = env.plan.order.at(pos);

    while (result.fes_used + n <= budget) {
        const std::uint64_t g = subpop.generations;
        RandomStream selection(env.seed, StreamTag::select, {pos, g});
        GenerationOps ops;
        ops.vary = [&](const Segment& a, const Segment& b, std::size_t pair) {
            RandomStream xr(env.seed, StreamTag::crossover, {pos, g, pair});
            auto children = crossover(a, b, cluster, env.instance, xr);
            RandomStream m1(env.seed, StreamTag::mutate, {pos, g, 2 * pair});
            mutate(children.first, cluster, env.ops.p_m, env.instance, m1);
            RandomStream m2(env.seed, StreamTag::mutate, {pos, g, 2 * pair + 1});
            mutate(children.second, cluster, env.ops.p_m, env.instance, m2);
            return children;
        };
        ops.evaluate = [&](const Segment& child) {
            Candidate c;
            const ObjectiveVector sel = evaluate_member(child, pos, context, env, c);
            result.candidates.push_back(std::move(c));
            return sel;
        };
        nsga2_generation(subpop.individuals, subpop.objectives, selection, ops);
        ++subpop.generations;
        ++result.generations;
        result.fes_used += n;
    }
    return result;
}

} // namespace dgcc
