#pragma once

#include <functional>
#include <vector>

#include "dgcc/instance.hpp"
#include "dgcc/rng.hpp"

namespace testing {

// Instance with POI ids 1..N assigned to clusters by `sizes`; both channels use
// `weight(i, j)` on 0-based row indices.
inline dgcc::ClusteredInstance make_instance(const std::vector<int>& sizes,
                                             const std::function<double(std::size_t, std::size_t)>& weight,
                                             double score = 1.0, double visit_cost = 0.0) {
    std::vector<dgcc::Poi> pois;
    std::vector<std::vector<int>> clusters(sizes.size());
    int id = 1;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        for (int k = 0; k < sizes[c]; ++k) {
            dgcc::Poi p;
            p.id = id;
            p.score = score;
            p.visit_cost = visit_cost;
            clusters[c].push_back(id++);
            pois.push_back(p);
        }
    }
    const std::size_t n = pois.size();
    dgcc::Matrix w(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i) = weight(i, j);
    return dgcc::ClusteredInstance("test", std::move(pois), std::move(clusters), w, w);
}

inline dgcc::ClusteredInstance generated(std::vector<int> sizes, std::uint64_t seed, double margin = 1.0) {
    dgcc::GeneratorSpec spec;
    spec.cluster_sizes = std::move(sizes);
    spec.margin = margin;
    return dgcc::generate_instance(spec, seed);
}

} // namespace testing
