#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgcc/error.hpp"

namespace dgcc {

struct Poi {
    int id = 0;
    int cluster = 0;          // index into ClusteredInstance::clusters()
    double score = 1.0;       // popularity-derived, > 0
    double visit_cost = 0.0;  // entrance fee etc.
    std::optional<double> visit_minutes;
    std::string label;
};

enum class Channel { time, cost };

const char* to_string(Channel channel) noexcept;
Channel channel_from_string(const std::string& text);

// Dense row-major square matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    const double* row(std::size_t i) const noexcept { return data_.data() + i * n_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

// Points of interest partitioned into city clusters over a complete graph with
// a travel-time and a travel-cost channel. Immutable after construction; the
// constructor validates every invariant.
class ClusteredInstance {
public:
    ClusteredInstance() = default;

    // `clusters` lists POI ids per cluster; `pois` fixes the matrix row order.
    // Poi::cluster is recomputed from `clusters`.
    ClusteredInstance(std::string name, std::vector<Poi> pois, std::vector<std::vector<int>> clusters,
                      Matrix time_matrix, Matrix cost_matrix);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Poi>& pois() const noexcept { return pois_; }
    const std::vector<std::vector<int>>& clusters() const noexcept { return clusters_; }
    std::size_t cluster_count() const noexcept { return clusters_.size(); }
    std::size_t poi_count() const noexcept { return pois_.size(); }
    const Matrix& time_matrix() const noexcept { return time_; }
    const Matrix& cost_matrix() const noexcept { return cost_; }
    const Matrix& matrix(Channel channel) const noexcept { return channel == Channel::time ? time_ : cost_; }

    bool contains(int id) const noexcept {
        return id > 0 && static_cast<std::size_t>(id) < index_of_.size() && index_of_[id] >= 0;
    }
    // Row index of POI `id`; id must be valid.
    std::size_t index_of(int id) const noexcept { return static_cast<std::size_t>(index_of_[id]); }
    const Poi& poi(int id) const noexcept { return pois_[index_of(id)]; }
    int cluster_of(int id) const noexcept { return pois_[index_of(id)].cluster; }
    int max_id() const noexcept { return static_cast<int>(index_of_.size()) - 1; }

    double edge(Channel channel, int a, int b) const noexcept {
        return matrix(channel)(index_of(a), index_of(b));
    }

    bool operator==(const ClusteredInstance& other) const;

private:
    std::string name_;
    std::vector<Poi> pois_;
    std::vector<std::vector<int>> clusters_;
    Matrix time_;
    Matrix cost_;
    std::vector<int> index_of_;
};

ClusteredInstance load_instance(const std::filesystem::path& path);
ClusteredInstance parse_instance(const std::string& json_text);
std::string instance_to_json(const ClusteredInstance& instance);
void save_instance(const ClusteredInstance& instance, const std::filesystem::path& path);

struct GeneratorSpec {
    std::vector<int> cluster_sizes;               // one entry per cluster, m = size()
    double intra_lo = 1.0, intra_hi = 10.0;       // intracluster edge weights, both channels
    double margin = 1.0;                          // >= 1
    double score_lo = 1.0, score_hi = 10.0;
    double cost_lo = 0.0, cost_hi = 10.0;         // POI visit cost
    // Optional per-cluster multiplier on drawn scores (models uneven tourism
    // resources between cities). Empty means all 1.
    std::vector<double> cluster_score_scale;
    std::string name = "generated";
};

GeneratorSpec parse_generator_spec(const std::string& json_text);
ClusteredInstance generate_instance(const GeneratorSpec& spec, std::uint64_t seed);

struct DecomposabilityReport {
    Channel channel = Channel::time;
    double lhs = 0.0;  // sum of per-cluster max intracluster weights
    double rhs = 0.0;  // min intercluster weight, +inf when m = 1
    bool satisfied = false;
    std::vector<double> per_cluster_wmax;
};

DecomposabilityReport check_weak_decomposability(const ClusteredInstance& instance, Channel channel);
std::string report_to_json(const DecomposabilityReport& report);

// Largest intracluster edge weight of cluster `c` (0 for singletons).
double cluster_wmax(const ClusteredInstance& instance, std::size_t c, Channel channel);

// Number of entries into cluster `cluster_index` along `path`, counting the start.
std::size_t visit_count(std::span<const int> path, std::size_t cluster_index, const ClusteredInstance& instance);

// f(x) = alpha * sum vertex weight + beta * sum edge weight on one channel.
// The vertex weight is visit_minutes (0 if absent) for the time channel and
// visit_cost for the cost channel.
struct GenericObjectiveForm {
    double alpha = 1.0;
    double beta = 1.0;
    Channel channel = Channel::time;
};

double vertex_weight(const Poi& poi, Channel channel) noexcept;
double path_value(std::span<const int> path, const GenericObjectiveForm& form, const ClusteredInstance& instance);

struct OptimalPath {
    std::vector<int> path;
    double value = 0.0;
};

inline constexpr std::size_t brute_force_limit = 10;

// Exhaustive search over every ordered simple sequence. Ties (within 1e-12
// relative) resolve to the lexicographically smallest path.
OptimalPath brute_force_optimal_path(const ClusteredInstance& instance, const GenericObjectiveForm& form,
                                     bool require_all_clusters);

} // namespace dgcc
