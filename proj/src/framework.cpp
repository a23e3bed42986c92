#include "dgcc/framework.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "dgcc/error.hpp"

namespace dgcc {

long default_max_fes(std::size_t m, int total_days) {
    return 30000L * static_cast<long>(m) + 5000L * total_days;
}

RunConfig RunConfig::resolved(std::size_t m) const {
    RunConfig out = *this;
    const long ten_n = 10L * static_cast<long>(n);
    if (out.basic_fes < 0) out.basic_fes = ten_n;
    if (out.additional_fes < 0) out.additional_fes = ten_n;
    if (out.max_fes <= 0) out.max_fes = default_max_fes(m, total_days);
    return out;
}

void RunConfig::validate(std::size_t m) const {
    if (n < 2) throw Error("config: n must be >= 2");
    if (!(p_m >= 0.0 && p_m <= 1.0)) throw Error("config: p_m must lie in [0, 1]");
    if (!(p_z >= 0.0 && p_z <= 1.0)) throw Error("config: p_z must lie in [0, 1]");
    if (slots_per_day < 1) throw Error("config: M must be >= 1");
    if (total_days < static_cast<int>(m)) {
        throw Error("config: D = " + std::to_string(total_days) + " is less than m = " + std::to_string(m));
    }
    if (adjust_period < 1) throw Error("config: L must be >= 1");
    if (basic_fes < static_cast<long>(n)) throw Error("config: I_bas must be at least n");
    if (additional_fes < 0) throw Error("config: I_add must be non-negative");
    if (max_fes < static_cast<long>(m * n)) throw Error("config: MaxFEs cannot cover the initial population");
    if (!(ref_margin >= 1.0)) throw Error("config: reference margin must be >= 1");
    if (!(delta_const > 0.0)) throw Error("config: delta must be positive");
    if (!order.empty()) {
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted.size() != m || sorted[i] != static_cast<int>(i)) {
                throw Error("config: order must be a permutation of 0.." + std::to_string(m - 1));
            }
        }
    }
    eval_config().validate();
}

EvalConfig RunConfig::eval_config() const {
    EvalConfig ev;
    ev.alpha_ctrl = alpha_ctrl;
    ev.theta = theta;
    ev.mode = eval_mode;
    ev.count_interday_edges = count_interday_edges;
    return ev;
}

double component_hv(const Subpopulation& subpop, const ReferencePoint& ref) {
    return hypervolume(subpop.objectives, ref);
}

std::vector<double> normalized_component_hv(const std::vector<Subpopulation>& subpops, const DecompositionPlan& plan,
                                            const ClusteredInstance& instance, const EvalConfig& eval) {
    std::vector<std::vector<ObjectiveVector>> norm(subpops.size());
    std::array<double, 3> hi{0.0, 0.0, 0.0};
    for (std::size_t p = 0; p < subpops.size(); ++p) {
        const int d = plan.days.at(p);
        for (const Segment& s : subpops[p].individuals) {
            const auto v = normalized_fitness(evaluate_slots(s, d, plan.slots_per_day, instance, eval), d);
            for (std::size_t j = 0; j < 3; ++j) hi[j] = std::max(hi[j], v[j]);
            norm[p].push_back(v);
        }
    }
    ReferencePoint ref;
    ref.policy = ReferencePolicy::fixed;
    ref.frozen = true;
    for (std::size_t j = 0; j < 3; ++j) ref.coords[j] = hi[j] * 1.1;
    std::vector<double> out(subpops.size());
    for (std::size_t p = 0; p < subpops.size(); ++p) out[p] = hypervolume(norm[p], ref);
    return out;
}

std::optional<AdjustmentDecision> decide_adjustment(std::span<const double> hv, std::span<const int> days) {
    if (hv.size() != days.size()) throw Error("decide_adjustment: size mismatch");
    if (hv.empty()) return std::nullopt;
    std::size_t i_max = 0;
    for (std::size_t i = 1; i < hv.size(); ++i) {
        if (hv[i] > hv[i_max]) i_max = i;
    }
    std::optional<std::size_t> i_min;
    for (std::size_t i = 0; i < hv.size(); ++i) {
        if (days[i] > 1 && (!i_min || hv[i] < hv[*i_min])) i_min = i;
    }
    // Equal HV gives no evidence for moving a day.
    if (!i_min || *i_min == i_max || !(hv[i_max] > hv[*i_min])) return std::nullopt;
    return AdjustmentDecision{i_max, *i_min};
}

namespace {

// M slots filled from cluster POIs absent from `taken`, each zeroed with p_z.
Segment random_block(int cluster, int slots, std::span<const int> taken, double p_z, const ClusteredInstance& instance,
                     RandomStream& rng) {
    std::vector<int> pool;
    for (int id : instance.clusters()[static_cast<std::size_t>(cluster)]) {
        if (std::find(taken.begin(), taken.end(), id) == taken.end()) pool.push_back(id);
    }
    const std::size_t len = static_cast<std::size_t>(slots);
    const std::size_t k = std::min(len, pool.size());
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
    Segment block(len, 0);
    std::copy_n(pool.begin(), k, block.begin());
    for (std::size_t i = len; i > 1; --i) std::swap(block[i - 1], block[rng.index(i)]);
    for (int& slot : block) {
        if (rng.bernoulli(p_z)) slot = 0;
    }
    return block;
}

struct BlockEdit {
    bool drop_front = false;
    bool drop_back = false;
    bool add_front = false;
    bool add_back = false;
};

// Applies `edit` to one segment; `fresh` is null for an empty new block.
Segment edit_segment(const Segment& s, const BlockEdit& edit, int cluster, int slots, const AdjustOptions& options,
                     bool fresh, const ClusteredInstance& instance, RandomStream& rng) {
    const auto M = static_cast<std::ptrdiff_t>(slots);
    auto first = s.begin();
    auto last = s.end();
    if (edit.drop_front) first += M;
    if (edit.drop_back) last -= M;
    Segment kept(first, last);
    Segment block = fresh ? random_block(cluster, slots, kept, options.p_z, instance, rng) : Segment(slots, 0);
    if (edit.add_front) kept.insert(kept.begin(), block.begin(), block.end());
    if (edit.add_back) kept.insert(kept.end(), block.begin(), block.end());
    repair_empty(kept, cluster, instance, rng);
    return kept;
}

} // namespace

void apply_adjustment(const AdjustmentDecision& decision, DecompositionPlan& plan, std::vector<Subpopulation>& subpops,
                      Genome& context, const ClusteredInstance& instance, const AdjustOptions& options,
                      RandomStream& rng) {
    const std::size_t i_max = decision.i_max;
    const std::size_t i_min = decision.i_min;
    if (i_max == i_min || i_max >= plan.component_count() || i_min >= plan.component_count() ||
        plan.days[i_min] < 2) {
        throw Error("apply_adjustment: invalid decision");
    }
    const bool rightward = i_min > i_max;  // i_min lies after i_max
    const std::size_t lo = std::min(i_max, i_min);
    const std::size_t hi = std::max(i_max, i_min);

    std::vector<BlockEdit> edits(plan.component_count());
    for (std::size_t p = lo; p <= hi; ++p) {
        BlockEdit& e = edits[p];
        const bool gives = p != i_max;
        const bool takes = p != i_min;
        if (p != i_max && p != i_min && options.preserve_intermediate_days) continue;
        if (gives) (rightward ? e.drop_front : e.drop_back) = true;
        if (takes) (rightward ? e.add_back : e.add_front) = true;
    }

    DecompositionPlan next = plan;
    next.days[i_max] += 1;
    next.days[i_min] -= 1;

    Genome next_context;
    next_context.slots.reserve(context.slots.size());
    for (std::size_t p = 0; p < plan.component_count(); ++p) {
        const auto seg = segment_slots(context, plan, p);
        const BlockEdit& e = edits[p];
        Segment out(seg.begin(), seg.end());
        if (e.drop_front || e.drop_back || e.add_front || e.add_back) {
            out = edit_segment(out, e, plan.order[p], plan.slots_per_day, options, false, instance, rng);
        }
        next_context.slots.insert(next_context.slots.end(), out.begin(), out.end());
    }

    for (Subpopulation& sp : subpops) {
        const BlockEdit& e = edits.at(sp.component);
        if (!(e.drop_front || e.drop_back || e.add_front || e.add_back)) continue;
        const int cluster = plan.order[sp.component];
        for (Segment& ind : sp.individuals) {
            ind = edit_segment(ind, e, cluster, plan.slots_per_day, options, true, instance, rng);
        }
        sp.objectives.clear();
    }
    plan = std::move(next);
    context = std::move(next_context);
    plan.validate();
}

AdjustOutcome dynamic_adjust(DecompositionPlan& plan, std::vector<Subpopulation>& subpops, Genome& context,
                             const ClusteredInstance& instance, const EvalConfig& eval, const AdjustOptions& options,
                             RandomStream& rng) {
    AdjustOutcome out;
    out.hv = normalized_component_hv(subpops, plan, instance, eval);
    out.decision = decide_adjustment(out.hv, plan.days);
    if (out.decision) apply_adjustment(*out.decision, plan, subpops, context, instance, options, rng);
    return out;
}

namespace {

void note_decomposability(const ClusteredInstance& instance, RunResult& result) {
    for (Channel ch : {Channel::time, Channel::cost}) {
        auto report = check_weak_decomposability(instance, ch);
        if (!report.satisfied) {
            result.warnings.push_back(std::string("weak decomposability does not hold on the ") + to_string(ch) +
                                      " channel (" + format_double(report.lhs) + " > " + format_double(report.rhs) +
                                      ")");
        }
        result.decomposability.push_back(std::move(report));
    }
}

ReferencePoint reference_from_max(const std::array<double, 3>& hi, double margin) {
    ReferencePoint ref;
    ref.policy = ReferencePolicy::adaptive;
    ref.margin = margin;
    ref.frozen = true;
    for (std::size_t j = 0; j < 3; ++j) ref.coords[j] = hi[j] * margin;
    return ref;
}

void track_max(std::array<double, 3>& hi, const ObjectiveVector& v) {
    for (std::size_t j = 0; j < 3; ++j) hi[j] = std::max(hi[j], v[j]);
}

// True if `a` and `b` agree everywhere outside segment `pos`.
bool same_outside(const Genome& a, const Genome& b, const DecompositionPlan& plan, std::size_t pos) {
    if (a.slots.size() != b.slots.size()) return false;
    const std::size_t off = plan.segment_offset(pos);
    const std::size_t len = plan.segment_length(pos);
    return std::equal(a.slots.begin(), a.slots.begin() + static_cast<std::ptrdiff_t>(off), b.slots.begin()) &&
           std::equal(a.slots.begin() + static_cast<std::ptrdiff_t>(off + len), a.slots.end(),
                      b.slots.begin() + static_cast<std::ptrdiff_t>(off + len));
}

double hv_of(std::span<const ObjectiveVector> pts, const ReferencePoint& ref) { return hypervolume(pts, ref); }

} // namespace

RunResult run_dgcc(const ClusteredInstance& instance, const RunConfig& input) {
    const std::size_t m = instance.cluster_count();
    const RunConfig cfg = input.resolved(m);
    cfg.validate(m);
    const EvalConfig ev = cfg.eval_config();
    const std::size_t n = cfg.n;
    const long ln = static_cast<long>(n);

    RunResult result{ParetoArchive(cfg.archive_capacity), {}, 0, cfg.max_fes, {}, {}, {}, {}, {}};
    note_decomposability(instance, result);

    DecompositionPlan plan = initial_decomposition(m, cfg.total_days, cfg.slots_per_day, cfg.order);
    auto plan_ptr = std::make_shared<const DecompositionPlan>(plan);
    const StepEnv env{plan, instance, ev, OperatorConfig{cfg.p_m, cfg.p_z}, cfg.seed};

    std::vector<Subpopulation> subpops;
    subpops.reserve(m);
    for (std::size_t p = 0; p < m; ++p) {
        RandomStream rng(cfg.seed, StreamTag::init, {p});
        subpops.push_back(init_subpopulation(p, plan, instance, n, cfg.p_z, rng));
    }

    ContextSolution& context = result.context;
    for (std::size_t p = 0; p < m; ++p) {
        const auto& first = subpops[p].individuals.front();
        context.genome.slots.insert(context.genome.slots.end(), first.begin(), first.end());
    }

    long fes = 0;
    std::array<double, 3> warm_max{0.0, 0.0, 0.0};
    const bool adaptive = cfg.ref_policy == ReferencePolicy::adaptive;
    ReferencePoint ref;
    if (!adaptive) ref = choose_reference_point({}, ReferencePolicy::fixed, cfg.ref_coords, cfg.ref_margin);

    auto absorb = [&](const std::vector<Candidate>& cands) {
        for (const Candidate& c : cands) {
            result.archive.insert(c.genome, plan_ptr, c.objectives);
            if (!ref.frozen) track_max(warm_max, c.objectives);
            const double contrib = hv_contribution(c.objectives, ref);
            if (contrib > context.hv_contrib) {
                context.genome = c.genome;
                context.objectives = c.objectives;
                context.hv_contrib = contrib;
            }
        }
    };

    // Initial evaluation, all against the assembly of every first individual.
    std::vector<Genome> seen(m, context.genome);
    std::vector<std::vector<Candidate>> initial(m);
    for (std::size_t p = 0; p < m; ++p) {
        initial[p] = evaluate_subpopulation(subpops[p], context.genome, env);
        fes += ln;
        for (const Candidate& c : initial[p]) track_max(warm_max, c.objectives);
    }
    if (adaptive) {
        ref = reference_from_max(warm_max, cfg.ref_margin);
        ref.frozen = false;  // provisional until the warm-up round ends
    }
    context.objectives = initial[0][0].objectives;
    context.hv_contrib = hv_contribution(context.objectives, ref);
    for (const auto& cands : initial) absorb(cands);
    std::vector<std::vector<ObjectiveVector>> initial_objs(m);
    for (std::size_t p = 0; p < m; ++p) initial_objs[p] = subpops[p].objectives;
    initial.clear();

    ResourceLedger ledger;
    ledger.basic = cfg.basic_fes;
    ledger.additional = cfg.additional_fes;
    ledger.delta_const = cfg.delta_const;
    for (std::size_t p = 0; p < m; ++p) {
        ComponentLedger c;
        c.poi_count = instance.clusters()[static_cast<std::size_t>(plan.order[p])].size();
        c.budget = cfg.basic_fes + cfg.additional_fes;
        ledger.components.push_back(c);
    }

    std::vector<double> prev_hv(m, 0.0), cur_hv(m, 0.0);
    std::uint64_t adjust_calls = 0;
    const bool resources = !cfg.ablations.no_resource_allocation;

    for (std::size_t round = 0; cfg.max_fes - fes >= ln; ++round) {
        RoundSnapshot snap;
        snap.round = round;
        snap.days = plan.days;
        if (round == 0 || !resources) {
            snap.allocated.assign(m, cfg.basic_fes + cfg.additional_fes);
            snap.active = m;
        } else {
            for (const auto& c : ledger.components) snap.allocated.push_back(c.budget);
            snap.active = ledger.active_count();
        }
        snap.used.assign(m, 0);

        bool exhausted = false;
        for (std::size_t p = 0; p < m; ++p) {
            const long remaining = cfg.max_fes - fes;
            if (remaining < ln) {
                exhausted = true;
                break;
            }
            long step = std::min(snap.allocated[p], remaining);
            Subpopulation& sp = subpops[p];
            const bool stale = sp.objectives.size() != n ||
                               (ev.mode == EvalMode::context && !same_outside(seen[p], context.genome, plan, p));
            if (stale) {
                absorb(evaluate_subpopulation(sp, context.genome, env));
                fes += ln;
                snap.used[p] += ln;
                step -= ln;
            }
            seen[p] = context.genome;
            if (step >= ln) {
                StepResult res = nsga2_step(sp, static_cast<std::size_t>(step), context.genome, env);
                fes += static_cast<long>(res.fes_used);
                snap.used[p] += static_cast<long>(res.fes_used);
                absorb(res.candidates);
            }
        }

        if (!ref.frozen) {
            ref = reference_from_max(warm_max, cfg.ref_margin);
            context.hv_contrib = hv_contribution(context.objectives, ref);
            for (std::size_t p = 0; p < m; ++p) prev_hv[p] = hv_of(initial_objs[p], ref);
            initial_objs.clear();
        }
        for (std::size_t p = 0; p < m; ++p) cur_hv[p] = component_hv(subpops[p], ref);
        update_ledger(ledger, prev_hv, cur_hv, round == 0);
        prev_hv = cur_hv;

        snap.hv = cur_hv;
        for (const auto& c : ledger.components) {
            snap.delta.push_back(c.delta);
            snap.potential.push_back(c.potential);
            snap.stagnant.push_back(c.stagnant);
        }
        snap.balance = ledger.balance;
        snap.complete = !exhausted;

        const bool due = (round + 1) % static_cast<std::size_t>(cfg.adjust_period) == 0;
        if (!exhausted && due && !cfg.ablations.no_structure_adjustment && cfg.max_fes - fes >= 1) {
            RandomStream arng(cfg.seed, StreamTag::adjust, {adjust_calls});
            const AdjustOutcome out = dynamic_adjust(plan, subpops, context.genome, instance, ev,
                                                     AdjustOptions{cfg.p_z, cfg.preserve_intermediate_days}, arng);
            if (out.decision) {
                plan_ptr = std::make_shared<const DecompositionPlan>(plan);
                context.objectives = evaluate_full(context.genome, plan, instance, ev);
                context.hv_contrib = hv_contribution(context.objectives, ref);
                fes += 1;
                result.archive.insert(context.genome, plan_ptr, context.objectives);
                if (ev.mode == EvalMode::context) {
                    for (auto& sp : subpops) sp.objectives.clear();
                }
            }
            snap.adjusted = out.decision.has_value();
            ++adjust_calls;
        }
        if (cfg.ablations.no_population_inheritance && !exhausted) {
            // Every round starts from fresh random subpopulations.
            for (std::size_t p = 0; p < m; ++p) {
                RandomStream rng(cfg.seed, StreamTag::reinit, {round, p});
                const std::uint64_t gens = subpops[p].generations;
                subpops[p] = init_subpopulation(p, plan, instance, n, cfg.p_z, rng);
                subpops[p].generations = gens;
            }
        }
        snap.fes = fes;
        snap.context_hv_contrib = context.hv_contrib;
        result.history.push_back(std::move(snap));
        if (exhausted) break;
    }

    result.fes_total = fes;
    result.ref = ref;
    result.ref.frozen = true;
    result.plan = plan;
    return result;
}

RunResult run_global_nsga2(const ClusteredInstance& instance, const RunConfig& input) {
    const std::size_t m = instance.cluster_count();
    const RunConfig cfg = input.resolved(m);
    cfg.validate(m);
    const EvalConfig ev = cfg.eval_config();
    const std::size_t n = cfg.n;
    const long ln = static_cast<long>(n);

    RunResult result{ParetoArchive(cfg.archive_capacity), {}, 0, cfg.max_fes, {}, {}, {}, {}, {}};
    note_decomposability(instance, result);

    const DecompositionPlan plan = initial_decomposition(m, cfg.total_days, cfg.slots_per_day, cfg.order);
    const auto plan_ptr = std::make_shared<const DecompositionPlan>(plan);

    std::vector<Segment> population(n);
    for (std::size_t p = 0; p < m; ++p) {
        RandomStream rng(cfg.seed, StreamTag::init, {p});
        const Subpopulation sp = init_subpopulation(p, plan, instance, n, cfg.p_z, rng);
        for (std::size_t i = 0; i < n; ++i) {
            population[i].insert(population[i].end(), sp.individuals[i].begin(), sp.individuals[i].end());
        }
    }

    long fes = 0;
    const long warmup_fes = static_cast<long>(m) * (ln + cfg.basic_fes + cfg.additional_fes);
    std::array<double, 3> warm_max{0.0, 0.0, 0.0};
    Genome scratch;
    auto evaluate = [&](const Segment& g) {
        scratch.slots = g;
        const ObjectiveVector v = evaluate_full(scratch, plan, instance, ev);
        result.archive.insert(scratch, plan_ptr, v);
        if (fes < warmup_fes) track_max(warm_max, v);
        ++fes;
        return v;
    };

    std::vector<ObjectiveVector> objectives;
    objectives.reserve(n);
    for (const Segment& g : population) objectives.push_back(evaluate(g));

    for (std::uint64_t g = 0; fes + ln <= cfg.max_fes; ++g) {
        RandomStream selection(cfg.seed, StreamTag::select, {0, g});
        GenerationOps ops;
        ops.vary = [&](const Segment& a, const Segment& b, std::size_t pair) {
            std::pair<Segment, Segment> kids{Segment{}, Segment{}};
            kids.first.reserve(a.size());
            kids.second.reserve(a.size());
            for (std::size_t p = 0; p < m; ++p) {
                const std::size_t off = plan.segment_offset(p);
                const std::size_t len = plan.segment_length(p);
                const int cluster = plan.order[p];
                std::span<const int> sa(a.data() + off, len), sb(b.data() + off, len);
                RandomStream xr(cfg.seed, StreamTag::crossover, {p, g, pair});
                auto seg = crossover(sa, sb, cluster, instance, xr);
                RandomStream m1(cfg.seed, StreamTag::mutate, {p, g, 2 * pair});
                mutate(seg.first, cluster, cfg.p_m, instance, m1);
                RandomStream m2(cfg.seed, StreamTag::mutate, {p, g, 2 * pair + 1});
                mutate(seg.second, cluster, cfg.p_m, instance, m2);
                kids.first.insert(kids.first.end(), seg.first.begin(), seg.first.end());
                kids.second.insert(kids.second.end(), seg.second.begin(), seg.second.end());
            }
            return kids;
        };
        ops.evaluate = evaluate;
        nsga2_generation(population, objectives, selection, ops);
    }

    result.fes_total = fes;
    if (cfg.ref_policy == ReferencePolicy::adaptive) {
        result.ref = reference_from_max(warm_max, cfg.ref_margin);
    } else {
        result.ref = choose_reference_point({}, ReferencePolicy::fixed, cfg.ref_coords, cfg.ref_margin);
    }
    result.plan = plan;
    result.context.genome.slots = population.front();
    result.context.objectives = objectives.front();
    result.context.hv_contrib = hv_contribution(result.context.objectives, result.ref);
    return result;
}

} // namespace dgcc
