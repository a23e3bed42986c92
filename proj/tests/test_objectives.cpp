#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dgcc/error.hpp"
#include "dgcc/objectives.hpp"
#include "support.hpp"

using namespace dgcc;

namespace {

ClusteredInstance two_poi_instance() {
    Poi a, b;
    a.id = 1;
    a.visit_cost = 2;
    a.score = 4;
    b.id = 2;
    b.visit_cost = 3;
    b.score = 5;
    Matrix t(2), c(2);
    t(0, 1) = t(1, 0) = 10;
    c(0, 1) = c(1, 0) = 5;
    return ClusteredInstance("hand", {a, b}, {{1, 2}}, t, c);
}

} // namespace

TEST_CASE("balancing factor") {
    CHECK(omega(4, 2, 4, 0.8) == doctest::Approx(1.0 - 4.0 / 8.8).epsilon(1e-12));
    CHECK(std::abs(omega(4, 2, 4, 0.8) - 0.545455) < 1e-6);
    CHECK(omega(0, 3, 5, 0.8) == 1.0);
    CHECK(std::abs(omega(5, 1, 5, 0.8) - 0.137931) < 1e-6);
    CHECK_THROWS_AS(omega(6, 1, 5, 0.8), Error);
}

TEST_CASE("objectives of a two-POI day") {
    const auto inst = two_poi_instance();
    EvalConfig cfg;
    cfg.theta = 100;
    const std::vector<int> slots{1, 2};
    const auto v = evaluate_slots(slots, 1, 2, inst, cfg);
    // 1 - 2/2.8 = 2/7; edge time 10, edge cost 5 plus visit costs 2 and 3.
    const double w = 2.0 / 7.0;
    CHECK(v.f_t == doctest::Approx(w * 10.0).epsilon(1e-12));
    CHECK(v.f_t == doctest::Approx(2.857143).epsilon(1e-6));
    CHECK(v.f_c == doctest::Approx(w * (5.0 + 2.0 + 3.0)).epsilon(1e-12));
    CHECK(v.f_e == doctest::Approx(45.0));

    cfg.theta = 200;
    const auto doubled = evaluate_slots(slots, 1, 2, inst, cfg);
    CHECK(doubled.f_e == 2.0 * v.f_e);
    CHECK(doubled.f_t == v.f_t);
    CHECK(doubled.f_c == v.f_c);
}

TEST_CASE("single visited POI has no edge term") {
    const auto inst = two_poi_instance();
    EvalConfig cfg;
    const std::vector<int> slots{0, 2, 0};
    const auto v = evaluate_slots(slots, 1, 3, inst, cfg);
    const double w = omega(1, 1, 3, cfg.alpha_ctrl);
    CHECK(v.f_t == 0.0);
    CHECK(v.f_c == doctest::Approx(w * 3.0));
    CHECK(v.f_e == doctest::Approx(cfg.theta / 5.0));
}

TEST_CASE("interday edges can be excluded") {
    const auto inst = two_poi_instance();
    EvalConfig cfg;
    const std::vector<int> slots{1, 0, 2, 0};
    CHECK(evaluate_slots(slots, 2, 2, inst, cfg).f_t > 0.0);
    cfg.count_interday_edges = false;
    CHECK(evaluate_slots(slots, 2, 2, inst, cfg).f_t == 0.0);
}

TEST_CASE("segment evaluation") {
    const auto inst = testing::generated({6, 6, 6}, 5, 1.2);
    EvalConfig cfg;
    SUBCASE("one component equals the full evaluation") {
        const auto single = testing::generated({8}, 2);
        DecompositionPlan plan{{0}, {2}, 2, 4};
        const Genome g{{1, 0, 3, 2, 0, 5, 0, 8}};
        CHECK(evaluate_segment(g, plan, single, cfg, 0) == evaluate_full(g, plan, single, cfg));
    }
    SUBCASE("segment with one POI has zero time") {
        DecompositionPlan plan{{0, 1, 2}, {1, 1, 1}, 3, 3};
        const Genome g{{1, 0, 0, 7, 8, 0, 13, 14, 15}};
        CHECK(evaluate_segment(g, plan, inst, cfg, 0).f_t == 0.0);
    }
    SUBCASE("segment edges plus boundary edges make up the full edge sum") {
        std::mt19937_64 gen(9);
        DecompositionPlan plan{{0, 1, 2}, {2, 1, 2}, 5, 3};
        for (int trial = 0; trial < 200; ++trial) {
            Genome g{std::vector<int>(15, 0)};
            std::size_t off = 0;
            for (std::size_t p = 0; p < 3; ++p) {
                std::vector<int> ids = inst.clusters()[p];
                std::shuffle(ids.begin(), ids.end(), gen);
                const std::size_t len = plan.segment_length(p);
                for (std::size_t k = 0; k < len && k < ids.size(); ++k)
                    if (gen() % 3 != 0) g.slots[off + k] = ids[k];
                if (std::all_of(g.slots.begin() + off, g.slots.begin() + off + len, [](int x) { return x == 0; }))
                    g.slots[off] = ids[0];
                off += len;
            }
            double parts = 0.0;
            std::vector<int> firsts, lasts;
            for (std::size_t p = 0; p < 3; ++p) {
                const auto s = segment_slots(g, plan, p);
                parts += raw_edge_sum(s, 3, inst, Channel::time, true);
                std::vector<int> seq;
                for (int id : s)
                    if (id) seq.push_back(id);
                firsts.push_back(seq.front());
                lasts.push_back(seq.back());
            }
            double boundary = 0.0;
            for (std::size_t p = 0; p + 1 < 3; ++p) boundary += inst.edge(Channel::time, lasts[p], firsts[p + 1]);
            const double full = raw_edge_sum(g.slots, 3, inst, Channel::time, true);
            CHECK(parts + boundary == doctest::Approx(full).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalized fitness") {
    const ObjectiveVector v{10, 20, 30};
    CHECK(normalized_fitness(v, 2) == ObjectiveVector{5, 10, 15});
    CHECK(normalized_fitness(v, 1) == v);
    CHECK(normalized_fitness(normalized_fitness(v, 2), 1) == normalized_fitness(v, 2));
    CHECK_THROWS_AS(normalized_fitness(v, 0), Error);
}

TEST_CASE("objectives are finite and non-negative on valid genomes") {
    const auto inst = testing::generated({10, 10}, 4, 1.5);
    EvalConfig cfg;
    std::mt19937_64 gen(1);
    DecompositionPlan plan{{0, 1}, {2, 1}, 3, 4};
    for (int t = 0; t < 500; ++t) {
        Genome g{std::vector<int>(12, 0)};
        std::size_t off = 0;
        for (std::size_t p = 0; p < 2; ++p) {
            std::vector<int> ids = inst.clusters()[p];
            std::shuffle(ids.begin(), ids.end(), gen);
            const std::size_t len = plan.segment_length(p);
            for (std::size_t k = 0; k < len; ++k) g.slots[off + k] = gen() % 2 ? ids[k] : 0;
            g.slots[off] = ids[0];
            off += len;
        }
        const auto v = evaluate_full(g, plan, inst, cfg);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::isfinite(v[j]));
            CHECK(v[j] >= 0.0);
        }
    }
}

TEST_CASE("balancing factor is positive and strictly decreasing") {
    for (int D = 1; D <= 6; ++D) {
        for (int M = 1; M <= 6; ++M) {
            const std::size_t cap = static_cast<std::size_t>(D * M);
            for (std::size_t k = 0; k <= cap; ++k) {
                CHECK(omega(k, D, M, 0.8) > 0.0);
                if (k > 0) CHECK(omega(k, D, M, 0.8) < omega(k - 1, D, M, 0.8));
            }
        }
    }
}

TEST_CASE("experience term grows with every visited POI") {
    const auto inst = testing::generated({12}, 8);
    EvalConfig cfg;
    std::vector<int> slots(12, 0);
    double last = 0.0;
    for (std::size_t k = 0; k < 12; ++k) {
        slots[k] = inst.clusters()[0][k];
        const double fe = evaluate_slots(slots, 3, 4, inst, cfg).f_e;
        CHECK(fe > last);
        last = fe;
    }
}

TEST_CASE("reversing the whole path leaves every objective unchanged on symmetric matrices") {
    const auto inst = testing::generated({6, 6, 6}, 12, 1.1);
    EvalConfig cfg;
    std::mt19937_64 gen(6);
    for (int t = 0; t < 300; ++t) {
        std::vector<int> ids;
        for (const auto& c : inst.clusters()) ids.insert(ids.end(), c.begin(), c.end());
        std::shuffle(ids.begin(), ids.end(), gen);
        std::vector<int> slots(15, 0);
        const std::size_t k = 1 + gen() % 15;
        for (std::size_t i = 0; i < k; ++i) slots[i] = ids[i];
        std::shuffle(slots.begin(), slots.end(), gen);
        std::vector<int> rev(slots.rbegin(), slots.rend());
        const auto a = evaluate_slots(slots, 3, 5, inst, cfg);
        const auto b = evaluate_slots(rev, 3, 5, inst, cfg);
        CHECK(a.f_t == doctest::Approx(b.f_t).epsilon(1e-12));
        CHECK(a.f_c == doctest::Approx(b.f_c).epsilon(1e-12));
        CHECK(a.f_e == doctest::Approx(b.f_e).epsilon(1e-12));
    }
}
