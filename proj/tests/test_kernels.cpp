#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "dgcc/kernels.hpp"

using namespace dgcc::kernels;

namespace {

struct Soa {
    std::vector<double> f0, f1, f2;
    SoaView view() const { return {f0.data(), f1.data(), f2.data(), f0.size()}; }
};

Soa random_soa(std::mt19937_64& gen, std::size_t n, int grid) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Soa s;
    for (std::size_t i = 0; i < n; ++i) {
        auto draw = [&] { return grid ? std::floor(u(gen) * grid) : u(gen); };
        s.f0.push_back(draw());
        s.f1.push_back(draw());
        s.f2.push_back(draw());
    }
    return s;
}

} // namespace

TEST_CASE("scalar kernels against direct formulas") {
    const auto& k = scalar_table();
    const Soa s{{1, 2, 1, 0}, {1, 2, 1, 3}, {1, 2, 2, 0}};
    const double probe[3] = {1, 1, 1};
    std::uint8_t rel[4];
    k.compare(probe, s.view(), rel);
    CHECK(rel[0] == equal);
    CHECK(rel[1] == a_dominates);
    CHECK(rel[2] == a_dominates);
    CHECK(rel[3] == incomparable);

    const double ref[3] = {2, 2, 2};
    double vol[4];
    k.box_volume(ref, s.view(), vol);
    CHECK(vol[0] == 1.0);
    CHECK(vol[1] == 0.0);
    CHECK(vol[2] == 0.0);
    CHECK(vol[3] == 0.0);

    const double probe2[3] = {2, 2, 2};
    CHECK(k.count_covering(probe2, s.view()) == 3);
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
    const KernelTable* avx = avx2_table();
    if (!avx) {
        MESSAGE("AVX2 unavailable on this build or CPU; equivalence not exercised");
        return;
    }
    const auto& ref_k = scalar_table();
    std::mt19937_64 gen(5);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t n = gen() % 67;
        const int grid = t % 2 ? 4 : 0;
        const Soa s = random_soa(gen, n, grid);
        const Soa p = random_soa(gen, 1, grid);
        const double probe[3] = {p.f0[0], p.f1[0], p.f2[0]};
        const double box[3] = {probe[0] + 0.5, probe[1] + 0.5, probe[2] + 0.5};

        std::vector<std::uint8_t> r1(n), r2(n);
        ref_k.compare(probe, s.view(), r1.data());
        avx->compare(probe, s.view(), r2.data());
        REQUIRE(r1 == r2);

        std::vector<double> v1(n), v2(n);
        ref_k.box_volume(box, s.view(), v1.data());
        avx->box_volume(box, s.view(), v2.data());
        REQUIRE(std::memcmp(v1.data(), v2.data(), n * sizeof(double)) == 0);

        REQUIRE(ref_k.count_covering(probe, s.view()) == avx->count_covering(probe, s.view()));
    }
}

TEST_CASE("active table is one of the known tables") {
    const auto& a = active();
    CHECK((&a == &scalar_table() || &a == avx2_table()));
}
