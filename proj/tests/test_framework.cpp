#include <doctest.h>

#include <numeric>
#include <random>

#include "dgcc/error.hpp"
#include "dgcc/framework.hpp"
#include "dgcc/run_io.hpp"
#include "support.hpp"

using namespace dgcc;

namespace {

RunConfig small_config(int days, std::uint64_t seed) {
    RunConfig cfg;
    cfg.n = 10;
    cfg.total_days = days;
    cfg.slots_per_day = 3;
    cfg.basic_fes = 20;
    cfg.additional_fes = 30;
    cfg.max_fes = 3000;
    cfg.adjust_period = 2;
    cfg.seed = seed;
    return cfg;
}

bool genome_valid(const ArchiveEntry& e, const ClusteredInstance& inst) {
    return validate(e.genome, *e.plan, inst).empty();
}

long sum(const std::vector<long>& v) { return std::accumulate(v.begin(), v.end(), 0L); }

} // namespace

TEST_CASE("adjustment decisions") {
    const std::vector<double> hv{9, 5, 1};
    const std::vector<int> d{2, 2, 2};
    const auto a = decide_adjustment(hv, d);
    REQUIRE(a);
    CHECK(a->i_max == 0);
    CHECK(a->i_min == 2);

    const std::vector<double> hv2{1, 9};
    const std::vector<int> d2{2, 1};
    const auto b = decide_adjustment(hv2, d2);
    REQUIRE(b);
    CHECK(b->i_max == 1);
    CHECK(b->i_min == 0);

    const std::vector<double> hv3{9, 5, 1};
    const std::vector<int> d3{3, 1, 1};
    CHECK_FALSE(decide_adjustment(hv3, d3));

    const std::vector<double> flat{2, 2};
    const std::vector<int> d4{2, 2};
    CHECK_FALSE(decide_adjustment(flat, d4));
}

TEST_CASE("adjustment trace on three components") {
    const auto inst = testing::generated({10, 10, 10}, 3);
    DecompositionPlan plan = initial_decomposition(3, 6, 2);
    Genome ctx{{1, 2, 3, 4, 11, 12, 13, 14, 21, 22, 23, 24}};
    std::vector<Subpopulation> subs;
    for (std::size_t p = 0; p < 3; ++p) {
        RandomStream r(1, StreamTag::init, {p});
        subs.push_back(init_subpopulation(p, plan, inst, 6, 0.3, r));
    }
    RandomStream rng(4);
    apply_adjustment({0, 2}, plan, subs, ctx, inst, {}, rng);
    CHECK(plan.days == std::vector<int>{3, 2, 1});
    // Receiver gains an empty day next to the giver side, the middle shifts by
    // one day, the giver loses the day nearest the receiver.
    CHECK(ctx.slots == std::vector<int>{1, 2, 3, 4, 0, 0, 13, 14, 0, 0, 23, 24});
    for (std::size_t p = 0; p < 3; ++p) {
        CHECK(subs[p].objectives.empty());
        for (const auto& ind : subs[p].individuals) {
            CHECK(ind.size() == plan.segment_length(p));
            CHECK(validate_segment(ind, plan.order[p], 2, inst).empty());
        }
    }
    // The middle component's surviving day is its old second day.
    RandomStream r1(1, StreamTag::init, {1});
    const auto original = init_subpopulation(1, initial_decomposition(3, 6, 2), inst, 6, 0.3, r1);
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& now = subs[1].individuals[i];
        const auto& old = original.individuals[i];
        const bool kept = std::equal(now.begin(), now.begin() + 2, old.begin() + 2);
        const bool repaired = std::count(old.begin() + 2, old.end(), 0) == 2;
        CHECK((kept || repaired));
    }

    DecompositionPlan p2 = initial_decomposition(3, 6, 2);
    Genome c2{{1, 2, 3, 4, 11, 12, 13, 14, 21, 22, 23, 24}};
    auto s2 = subs;
    for (std::size_t p = 0; p < 3; ++p) {
        RandomStream r(1, StreamTag::init, {p});
        s2[p] = init_subpopulation(p, p2, inst, 6, 0.3, r);
    }
    apply_adjustment({0, 2}, p2, s2, c2, inst, {0.3, true}, rng);
    CHECK(c2.slots == std::vector<int>{1, 2, 3, 4, 0, 0, 11, 12, 13, 14, 23, 24});

    CHECK_THROWS_AS(apply_adjustment({0, 0}, p2, s2, c2, inst, {}, rng), Error);
}

TEST_CASE("plan and genome invariants survive random adjustments") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 2 + gen() % 4;
        std::vector<int> sizes(m);
        for (auto& s : sizes) s = 1 + static_cast<int>(gen() % 12);
        const auto inst = testing::generated(sizes, gen());
        const int D = static_cast<int>(m) + static_cast<int>(gen() % 6);
        DecompositionPlan plan = initial_decomposition(m, D, 3);
        std::vector<Subpopulation> subs;
        Genome ctx;
        for (std::size_t p = 0; p < m; ++p) {
            RandomStream r(gen());
            subs.push_back(init_subpopulation(p, plan, inst, 4, 0.5, r));
            ctx.slots.insert(ctx.slots.end(), subs[p].individuals[0].begin(), subs[p].individuals[0].end());
        }
        RandomStream rng(gen());
        for (int step = 0; step < 25; ++step) {
            std::vector<double> hv(m);
            for (auto& h : hv) h = u(gen);
            const auto dec = decide_adjustment(hv, plan.days);
            if (dec) apply_adjustment(*dec, plan, subs, ctx, inst, {0.3, gen() % 2 == 0}, rng);
            REQUIRE_NOTHROW(plan.validate());
            REQUIRE(std::accumulate(plan.days.begin(), plan.days.end(), 0) == D);
            REQUIRE(validate(ctx, plan, inst).empty());
            for (std::size_t p = 0; p < m; ++p)
                for (const auto& ind : subs[p].individuals)
                    REQUIRE(validate_segment(ind, plan.order[p], 3, inst).empty());
        }
    }
}

TEST_CASE("normalized component hypervolume") {
    const auto inst = testing::generated({6, 6}, 1);
    const auto plan = initial_decomposition(2, 4, 3);
    std::vector<Subpopulation> subs;
    for (std::size_t p = 0; p < 2; ++p) {
        RandomStream r(p);
        subs.push_back(init_subpopulation(p, plan, inst, 8, 0.3, r));
    }
    const auto hv = normalized_component_hv(subs, plan, inst, EvalConfig{});
    CHECK(hv.size() == 2);
    CHECK(hv[0] > 0.0);
    CHECK(hv[1] > 0.0);

    Subpopulation empty;
    ReferencePoint ref;
    ref.coords = {1, 1, 1};
    CHECK(component_hv(empty, ref) == 0.0);
    Subpopulation at_ref;
    at_ref.objectives = {{1, 1, 1}};
    CHECK(component_hv(at_ref, ref) == 0.0);
    Subpopulation sub;
    sub.objectives = {{0.5, 0.5, 0.5}};
    Subpopulation super = sub;
    super.objectives.push_back({0.2, 0.8, 0.1});
    CHECK(component_hv(super, ref) >= component_hv(sub, ref));
}

TEST_CASE("run budget ledger audit") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t m = 1 + gen() % 4;
        std::vector<int> sizes(m);
        for (auto& s : sizes) s = 3 + static_cast<int>(gen() % 10);
        const auto inst = testing::generated(sizes, gen(), 1.3);
        RunConfig cfg = small_config(static_cast<int>(m) + static_cast<int>(gen() % 4), gen());
        cfg.basic_fes = 10 + static_cast<long>(gen() % 25);
        cfg.additional_fes = static_cast<long>(gen() % 40);
        cfg.max_fes = 1000 + static_cast<long>(gen() % 3000);
        cfg.eval_mode = gen() % 2 ? EvalMode::context : EvalMode::isolated;
        const auto r = run_dgcc(inst, cfg);
        const auto rc = cfg.resolved(m);
        REQUIRE(r.fes_total <= rc.max_fes);
        long used = 0, adjustments = 0;
        for (const auto& s : r.history) {
            CHECK(sum(s.allocated) == static_cast<long>(m) * rc.basic_fes + static_cast<long>(s.active) * rc.additional_fes);
            for (std::size_t p = 0; p < m; ++p) CHECK(s.used[p] <= s.allocated[p]);
            CHECK(std::accumulate(s.days.begin(), s.days.end(), 0) == cfg.total_days);
            used += sum(s.used);
            adjustments += s.adjusted ? 1 : 0;
        }
        CHECK(r.history.back().fes == r.fes_total);
        CHECK(r.fes_total == static_cast<long>(m * cfg.n) + used + adjustments);
        CHECK(rc.max_fes - r.fes_total < static_cast<long>(cfg.n));
        for (const auto& e : r.archive.entries()) CHECK(genome_valid(e, inst));
        CHECK(validate(r.context.genome, r.plan, inst).empty());
    }
}

TEST_CASE("context contribution only rises between adjustments") {
    const auto inst = testing::generated({8, 8, 8}, 6, 1.2);
    const auto r = run_dgcc(inst, small_config(6, 3));
    for (std::size_t k = 1; k < r.history.size(); ++k) {
        if (!r.history[k].adjusted) CHECK(r.history[k].context_hv_contrib >= r.history[k - 1].context_hv_contrib);
    }
}

TEST_CASE("runs are deterministic") {
    const auto inst = testing::generated({8, 8, 8}, 6, 1.2);
    auto cfg = small_config(6, 17);
    const auto a = run_dgcc(inst, cfg);
    const auto b = run_dgcc(inst, cfg);
    CHECK(a.archive.to_csv() == b.archive.to_csv());
    CHECK(history_to_jsonl(a.history) == history_to_jsonl(b.history));
    CHECK(a.fes_total == b.fes_total);
    cfg.seed = 18;
    CHECK(run_dgcc(inst, cfg).archive.to_csv() != a.archive.to_csv());

    const auto g1 = run_global_nsga2(inst, cfg);
    const auto g2 = run_global_nsga2(inst, cfg);
    CHECK(g1.archive.to_csv() == g2.archive.to_csv());
    CHECK(g1.fes_total <= cfg.max_fes);
}

TEST_CASE("one component reduces to the global optimizer") {
    const auto inst = testing::generated({14}, 8);
    auto cfg = small_config(3, 5);
    cfg.ablations.no_structure_adjustment = true;
    const auto a = run_dgcc(inst, cfg);
    const auto b = run_global_nsga2(inst, cfg);
    CHECK(a.archive.to_csv() == b.archive.to_csv());
    CHECK(a.fes_total == b.fes_total);

    cfg.ablations.no_resource_allocation = true;
    CHECK(run_dgcc(inst, cfg).archive.to_csv() == run_global_nsga2(inst, cfg).archive.to_csv());
}

TEST_CASE("ablations change the run but keep the budget") {
    const auto inst = testing::generated({8, 8, 8}, 6, 1.2);
    const auto base = run_dgcc(inst, small_config(6, 1));
    for (int k = 0; k < 3; ++k) {
        auto cfg = small_config(6, 1);
        if (k == 0) cfg.ablations.no_structure_adjustment = true;
        if (k == 1) cfg.ablations.no_resource_allocation = true;
        if (k == 2) cfg.ablations.no_population_inheritance = true;
        const auto r = run_dgcc(inst, cfg);
        CHECK(r.fes_total <= cfg.max_fes);
        if (k == 0) {
            for (const auto& s : r.history) CHECK_FALSE(s.adjusted);
            CHECK(r.plan.days == initial_decomposition(3, 6, 3).days);
        }
        if (k == 1) {
            for (const auto& s : r.history) CHECK(s.allocated == std::vector<long>(3, 50));
        }
        CHECK(r.archive.to_csv() != base.archive.to_csv());
    }
}

TEST_CASE("configuration validation") {
    const auto inst = testing::generated({5, 5}, 1);
    auto cfg = small_config(1, 1);
    CHECK_THROWS_AS(run_dgcc(inst, cfg), Error);
    cfg = small_config(2, 1);
    cfg.basic_fes = 5;
    CHECK_THROWS_AS(run_dgcc(inst, cfg), Error);
    cfg = small_config(2, 1);
    cfg.adjust_period = 0;
    CHECK_THROWS_AS(run_dgcc(inst, cfg), Error);
    cfg = small_config(2, 1);
    cfg.order = {1, 1};
    CHECK_THROWS_AS(run_dgcc(inst, cfg), Error);
    CHECK(default_max_fes(4, 8) == 160000);
    RunConfig d;
    d.total_days = 8;
    const auto r = d.resolved(4);
    CHECK(r.basic_fes == 1000);
    CHECK(r.additional_fes == 1000);
    CHECK(r.max_fes == 160000);
}

TEST_CASE("weak decomposability violations surface as warnings") {
    const auto inst = testing::make_instance({2, 2}, [](std::size_t i, std::size_t j) {
        return (i < 2) == (j < 2) ? 5.0 : 1.0;
    });
    const auto r = run_dgcc(inst, small_config(2, 1));
    CHECK_FALSE(r.warnings.empty());
    CHECK(r.decomposability.size() == 2);
}
