#pragma once

// Slow, obviously-correct reference computations used to check the fast code.

#include <algorithm>
#include <array>
#include <cstddef>
#include <random>
#include <vector>

#include "dgcc/objectives.hpp"

namespace oracle {

inline bool pareto_dominates(const dgcc::ObjectiveVector& a, const dgcc::ObjectiveVector& b) {
    bool strict = false;
    for (std::size_t j = 0; j < 3; ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) strict = true;
    }
    return strict;
}

// Peel fronts by repeated O(N^2) scans.
inline std::vector<std::vector<std::size_t>> fronts(const std::vector<dgcc::ObjectiveVector>& pts) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> removed(pts.size(), false);
    std::size_t left = pts.size();
    while (left > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (removed[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
                dominated = !removed[j] && pareto_dominates(pts[j], pts[i]);
            if (!dominated) front.push_back(i);
        }
        for (auto i : front) removed[i] = true;
        left -= front.size();
        out.push_back(std::move(front));
    }
    return out;
}

// Inclusion-exclusion over all subsets; exact for small sets.
inline double hv_inclusion_exclusion(const std::vector<std::array<double, 3>>& pts, std::array<double, 3> ref) {
    std::vector<std::array<double, 3>> in;
    for (const auto& p : pts)
        if (p[0] <= ref[0] && p[1] <= ref[1] && p[2] <= ref[2]) in.push_back(p);
    const std::size_t n = in.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::array<double, 3> hi{-1e300, -1e300, -1e300};
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            ++bits;
            for (std::size_t j = 0; j < 3; ++j) hi[j] = std::max(hi[j], in[i][j]);
        }
        const double vol = (ref[0] - hi[0]) * (ref[1] - hi[1]) * (ref[2] - hi[2]);
        total += bits % 2 ? vol : -vol;
    }
    return total;
}

// Monte Carlo estimate over the box [lo, ref].
inline double hv_monte_carlo(const std::vector<std::array<double, 3>>& pts, std::array<double, 3> lo,
                             std::array<double, 3> ref, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t hit = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::array<double, 3> x{lo[0] + u(gen) * (ref[0] - lo[0]), lo[1] + u(gen) * (ref[1] - lo[1]),
                                      lo[2] + u(gen) * (ref[2] - lo[2])};
        for (const auto& p : pts) {
            if (p[0] <= x[0] && p[1] <= x[1] && p[2] <= x[2]) {
                ++hit;
                break;
            }
        }
    }
    const double box = (ref[0] - lo[0]) * (ref[1] - lo[1]) * (ref[2] - lo[2]);
    return box * static_cast<double>(hit) / static_cast<double>(samples);
}

// Random 3-objective points; `grid` > 0 snaps coordinates to force ties.
inline std::vector<dgcc::ObjectiveVector> random_points(std::mt19937_64& gen, std::size_t n, int grid = 0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<dgcc::ObjectiveVector> out(n);
    for (auto& p : out) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double x = u(gen);
            p[j] = grid > 0 ? std::floor(x * grid) : x;
        }
    }
    return out;
}

} // namespace oracle
