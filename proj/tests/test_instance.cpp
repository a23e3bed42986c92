#include <doctest.h>

#include <cmath>
#include <limits>

#include "dgcc/error.hpp"
#include "dgcc/instance.hpp"
#include "support.hpp"

using namespace dgcc;

TEST_CASE("smallest valid instance file parses") {
    const auto inst = parse_instance(R"({"name":"tiny","clusters":[[1,2]],
        "pois":[{"id":1,"score":2,"visit_cost":1},{"id":2,"score":3,"visit_cost":0}],
        "time_matrix":[[0,4],[4,0]],"cost_matrix":[[0,1],[1,0]]})");
    CHECK(inst.poi_count() == 2);
    CHECK(inst.cluster_count() == 1);
    CHECK(inst.edge(Channel::time, 1, 2) == 4.0);
    CHECK(inst.cluster_of(2) == 0);
}

TEST_CASE("asymmetric matrix is rejected with the offending cell") {
    try {
        parse_instance(R"({"clusters":[[1,2]],
            "pois":[{"id":1,"score":2,"visit_cost":1},{"id":2,"score":3,"visit_cost":0}],
            "time_matrix":[[0,4],[5,0]],"cost_matrix":[[0,1],[1,0]]})");
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("time_matrix") != std::string::npos);
        CHECK(msg.find("[0][1]") != std::string::npos);
    }
}

TEST_CASE("malformed instances are rejected") {
    CHECK_THROWS_AS(parse_instance("{"), Error);
    CHECK_THROWS_AS(parse_instance(R"({"clusters":[[1],[]],"pois":[{"id":1,"score":1,"visit_cost":0}],
        "time_matrix":[[0]],"cost_matrix":[[0]]})"),
                    Error);
    CHECK_THROWS_AS(parse_instance(R"({"clusters":[[1]],"pois":[{"id":1,"score":0,"visit_cost":0}],
        "time_matrix":[[0]],"cost_matrix":[[0]]})"),
                    Error);
}

TEST_CASE("generated instance round-trips through JSON") {
    GeneratorSpec spec;
    spec.cluster_sizes = {60, 60, 60, 60};
    spec.margin = 1.5;
    const auto inst = generate_instance(spec, 3);
    CHECK(inst.poi_count() == 240);
    CHECK(parse_instance(instance_to_json(inst)) == inst);
}

TEST_CASE("generator output satisfies weak decomposability at margin 1") {
    const auto inst = testing::generated({3, 3}, 7, 1.0);
    CHECK(check_weak_decomposability(inst, Channel::time).satisfied);
    CHECK(check_weak_decomposability(inst, Channel::cost).satisfied);
}

TEST_CASE("generator is deterministic per seed") {
    GeneratorSpec spec;
    spec.cluster_sizes = {5, 7};
    CHECK(instance_to_json(generate_instance(spec, 11)) == instance_to_json(generate_instance(spec, 11)));
    CHECK(instance_to_json(generate_instance(spec, 11)) != instance_to_json(generate_instance(spec, 12)));
}

TEST_CASE("single cluster is trivially decomposable") {
    const auto inst = testing::generated({4}, 1);
    const auto r = check_weak_decomposability(inst, Channel::time);
    CHECK(r.satisfied);
    CHECK(std::isinf(r.rhs));
    CHECK(report_to_json(r).find("\"inf\"") != std::string::npos);
}

TEST_CASE("decomposability inequality evaluated by hand") {
    // Cluster A = {1,2} with w = 1, cluster B = {3,4} with w = 2.
    auto build = [](double inter) {
        return testing::make_instance({2, 2}, [inter](std::size_t i, std::size_t j) {
            const bool same = (i < 2) == (j < 2);
            if (!same) return inter + static_cast<double>(i + j);  // min over pairs is inter + 2
            return i < 2 ? 1.0 : 2.0;
        });
    };
    const auto ok = check_weak_decomposability(build(1.0), Channel::time);
    CHECK(ok.lhs == 3.0);
    CHECK(ok.rhs == 3.0);
    CHECK(ok.satisfied);
    const auto bad = check_weak_decomposability(build(0.5), Channel::time);
    CHECK(bad.rhs == 2.5);
    CHECK_FALSE(bad.satisfied);
}

TEST_CASE("visit counts") {
    // A = {1,2}, B = {3}
    const auto inst = testing::make_instance({2, 1}, [](std::size_t, std::size_t) { return 1.0; });
    const std::vector<int> aba{1, 3, 2};
    CHECK(visit_count(aba, 0, inst) == 2);
    CHECK(visit_count(aba, 1, inst) == 1);
    const std::vector<int> inside{1, 2};
    CHECK(visit_count(inside, 0, inst) == 1);
    CHECK(visit_count(inside, 1, inst) == 0);

    const auto inst2 = testing::make_instance({2, 2}, [](std::size_t, std::size_t) { return 1.0; });
    const std::vector<int> alt{1, 3, 2, 4};
    CHECK(visit_count(alt, 0, inst2) == 2);
    CHECK(visit_count(alt, 1, inst2) == 2);
}

TEST_CASE("brute force with vertex term only picks the cheapest vertex per cluster") {
    std::vector<Poi> pois;
    const double minutes[] = {5, 2, 7, 3, 1, 4};
    for (int i = 0; i < 6; ++i) {
        Poi p;
        p.id = i + 1;
        p.visit_minutes = minutes[i];
        pois.push_back(p);
    }
    Matrix w(6, 0.0);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j) w(i, j) = 1.0 + static_cast<double>(i + j);
    const ClusteredInstance inst("v", pois, {{1, 2, 3}, {4, 5, 6}}, w, w);
    const auto best = brute_force_optimal_path(inst, {1.0, 0.0, Channel::time}, true);
    CHECK(best.path == std::vector<int>{2, 5});
    CHECK(best.value == doctest::Approx(3.0));
}

TEST_CASE("brute force on a decomposable instance visits each cluster once") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = testing::generated({3, 3}, seed, 1.0);
        const auto best = brute_force_optimal_path(inst, {0.0, 1.0, Channel::time}, true);
        CHECK(visit_count(best.path, 0, inst) == 1);
        CHECK(visit_count(best.path, 1, inst) == 1);
    }
}

TEST_CASE("two singleton clusters give the unique two-vertex path") {
    const auto inst = testing::make_instance({1, 1}, [](std::size_t, std::size_t) { return 3.0; });
    const auto best = brute_force_optimal_path(inst, {1.0, 1.0, Channel::time}, true);
    CHECK(best.path == std::vector<int>{1, 2});
    CHECK(best.value == doctest::Approx(3.0));
}
