#include "dgcc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dgcc/rng.hpp"

namespace dgcc {

using json = nlohmann::json;

namespace {

constexpr int max_supported_id = 1 << 24;

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

void validate_matrix(const Matrix& m, std::size_t n, const char* field) {
    if (m.size() != n) {
        std::ostringstream os;
        os << field << ": expected " << n << "x" << n << " matrix, got " << m.size() << "x" << m.size();
        throw Error(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double w = m(i, j);
            if (!std::isfinite(w) || w < 0.0) {
                std::ostringstream os;
                os << field << "[" << i << "][" << j << "] must be finite and non-negative, got " << w;
                throw Error(os.str());
            }
            if (i == j && w != 0.0) {
                std::ostringstream os;
                os << field << "[" << i << "][" << i << "] must be zero, got " << w;
                throw Error(os.str());
            }
            if (j > i && !nearly_equal(w, m(j, i))) {
                std::ostringstream os;
                os << field << " is not symmetric at [" << i << "][" << j << "]: " << w << " vs " << m(j, i);
                throw Error(os.str());
            }
        }
    }
}

} // namespace

const char* to_string(Channel channel) noexcept { return channel == Channel::time ? "time" : "cost"; }

Channel channel_from_string(const std::string& text) {
    if (text == "time") return Channel::time;
    if (text == "cost") return Channel::cost;
    throw Error("unknown channel '" + text + "' (expected time|cost)");
}

ClusteredInstance::ClusteredInstance(std::string name, std::vector<Poi> pois, std::vector<std::vector<int>> clusters,
                                     Matrix time_matrix, Matrix cost_matrix)
    : name_(std::move(name)), pois_(std::move(pois)), clusters_(std::move(clusters)), time_(std::move(time_matrix)),
      cost_(std::move(cost_matrix)) {
    if (pois_.empty()) throw Error("pois: instance has no POIs");
    if (clusters_.empty()) throw Error("clusters: at least one cluster is required");

    int max_id = 0;
    for (std::size_t i = 0; i < pois_.size(); ++i) {
        const Poi& p = pois_[i];
        if (p.id <= 0 || p.id > max_supported_id) {
            throw Error("pois[" + std::to_string(i) + "].id must be in [1, " + std::to_string(max_supported_id) +
                        "], got " + std::to_string(p.id));
        }
        if (!(p.score > 0.0) || !std::isfinite(p.score)) {
            throw Error("pois[" + std::to_string(i) + "].score must be positive (id " + std::to_string(p.id) + ")");
        }
        if (!(p.visit_cost >= 0.0) || !std::isfinite(p.visit_cost)) {
            throw Error("pois[" + std::to_string(i) + "].visit_cost must be non-negative (id " +
                        std::to_string(p.id) + ")");
        }
        if (p.visit_minutes && !(*p.visit_minutes >= 0.0)) {
            throw Error("pois[" + std::to_string(i) + "].visit_minutes must be non-negative (id " +
                        std::to_string(p.id) + ")");
        }
        max_id = std::max(max_id, p.id);
    }
    index_of_.assign(static_cast<std::size_t>(max_id) + 1, -1);
    for (std::size_t i = 0; i < pois_.size(); ++i) {
        auto& slot = index_of_[pois_[i].id];
        if (slot >= 0) throw Error("pois: duplicate id " + std::to_string(pois_[i].id));
        slot = static_cast<int>(i);
        pois_[i].cluster = -1;
    }
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
        if (clusters_[c].empty()) throw Error("clusters[" + std::to_string(c) + "] is empty");
        for (int id : clusters_[c]) {
            if (!contains(id)) {
                throw Error("clusters[" + std::to_string(c) + "] references unknown POI id " + std::to_string(id));
            }
            Poi& p = pois_[index_of(id)];
            if (p.cluster >= 0) {
                throw Error("clusters: POI id " + std::to_string(id) + " appears in clusters " +
                            std::to_string(p.cluster) + " and " + std::to_string(c));
            }
            p.cluster = static_cast<int>(c);
        }
    }
    for (const Poi& p : pois_) {
        if (p.cluster < 0) throw Error("clusters: POI id " + std::to_string(p.id) + " is not in any cluster");
    }
    validate_matrix(time_, pois_.size(), "time_matrix");
    validate_matrix(cost_, pois_.size(), "cost_matrix");
}

bool ClusteredInstance::operator==(const ClusteredInstance& other) const {
    if (name_ != other.name_ || clusters_ != other.clusters_ || time_ != other.time_ || cost_ != other.cost_) {
        return false;
    }
    if (pois_.size() != other.pois_.size()) return false;
    for (std::size_t i = 0; i < pois_.size(); ++i) {
        const Poi& a = pois_[i];
        const Poi& b = other.pois_[i];
        if (a.id != b.id || a.cluster != b.cluster || a.score != b.score || a.visit_cost != b.visit_cost ||
            a.visit_minutes != b.visit_minutes || a.label != b.label) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// File I/O

namespace {

Matrix matrix_from_json(const json& j, const char* field) {
    if (!j.is_array()) throw Error(std::string(field) + ": expected an array of rows");
    const std::size_t n = j.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.size() != n) {
            throw Error(std::string(field) + "[" + std::to_string(i) + "]: expected a row of " + std::to_string(n) +
                        " numbers");
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (!row[k].is_number()) {
                throw Error(std::string(field) + "[" + std::to_string(i) + "][" + std::to_string(k) +
                            "]: expected a number");
            }
            m(i, k) = row[k].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

ClusteredInstance parse_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("instance parse error: ") + e.what());
    }
    try {
        std::string name = j.value("name", std::string{});
        if (!j.contains("clusters")) throw Error("clusters: missing field");
        if (!j.contains("pois")) throw Error("pois: missing field");
        auto clusters = j.at("clusters").get<std::vector<std::vector<int>>>();
        std::vector<Poi> pois;
        for (const json& jp : j.at("pois")) {
            Poi p;
            p.id = jp.at("id").get<int>();
            p.score = jp.at("score").get<double>();
            p.visit_cost = jp.at("visit_cost").get<double>();
            if (jp.contains("visit_minutes") && !jp.at("visit_minutes").is_null()) {
                p.visit_minutes = jp.at("visit_minutes").get<double>();
            }
            if (jp.contains("label") && !jp.at("label").is_null()) p.label = jp.at("label").get<std::string>();
            pois.push_back(std::move(p));
        }
        if (!j.contains("time_matrix")) throw Error("time_matrix: missing field");
        if (!j.contains("cost_matrix")) throw Error("cost_matrix: missing field");
        return ClusteredInstance(std::move(name), std::move(pois), std::move(clusters),
                                 matrix_from_json(j.at("time_matrix"), "time_matrix"),
                                 matrix_from_json(j.at("cost_matrix"), "cost_matrix"));
    } catch (const json::exception& e) {
        throw Error(std::string("instance schema error: ") + e.what());
    }
}

ClusteredInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open instance file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string instance_to_json(const ClusteredInstance& instance) {
    json j;
    j["name"] = instance.name();
    j["clusters"] = instance.clusters();
    json pois = json::array();
    for (const Poi& p : instance.pois()) {
        json jp;
        jp["id"] = p.id;
        jp["score"] = p.score;
        jp["visit_cost"] = p.visit_cost;
        if (p.visit_minutes) jp["visit_minutes"] = *p.visit_minutes;
        if (!p.label.empty()) jp["label"] = p.label;
        pois.push_back(std::move(jp));
    }
    j["pois"] = std::move(pois);
    j["time_matrix"] = matrix_to_json(instance.time_matrix());
    j["cost_matrix"] = matrix_to_json(instance.cost_matrix());
    return j.dump();
}

void save_instance(const ClusteredInstance& instance, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write instance file " + path.string());
    out << instance_to_json(instance) << '\n';
}

// ---------------------------------------------------------------------------
// Generation

GeneratorSpec parse_generator_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("generator spec parse error: ") + e.what());
    }
    try {
        GeneratorSpec spec;
        if (j.contains("cluster_sizes")) {
            spec.cluster_sizes = j.at("cluster_sizes").get<std::vector<int>>();
        }
        if (j.contains("m")) {
            const int m = j.at("m").get<int>();
            if (spec.cluster_sizes.empty()) {
                const int size = j.value("cluster_size", 0);
                if (size <= 0) throw Error("generator spec: 'm' given without cluster_sizes or cluster_size");
                spec.cluster_sizes.assign(static_cast<std::size_t>(std::max(m, 0)), size);
            } else if (static_cast<int>(spec.cluster_sizes.size()) != m) {
                throw Error("generator spec: m disagrees with cluster_sizes length");
            }
        }
        auto range = [&](const char* key, double& lo, double& hi) {
            if (!j.contains(key)) return;
            auto r = j.at(key).get<std::vector<double>>();
            if (r.size() != 2) throw Error(std::string("generator spec: ") + key + " must be [lo, hi]");
            lo = r[0];
            hi = r[1];
        };
        range("intra_weight_range", spec.intra_lo, spec.intra_hi);
        range("score_range", spec.score_lo, spec.score_hi);
        range("cost_range", spec.cost_lo, spec.cost_hi);
        spec.margin = j.value("margin", spec.margin);
        if (j.contains("cluster_score_scale")) {
            spec.cluster_score_scale = j.at("cluster_score_scale").get<std::vector<double>>();
        }
        spec.name = j.value("name", spec.name);
        return spec;
    } catch (const json::exception& e) {
        throw Error(std::string("generator spec schema error: ") + e.what());
    }
}

ClusteredInstance generate_instance(const GeneratorSpec& spec, std::uint64_t seed) {
    const std::size_t m = spec.cluster_sizes.size();
    if (m == 0) throw Error("generator spec: m must be >= 1");
    for (int s : spec.cluster_sizes) {
        if (s < 1) throw Error("generator spec: every cluster size must be >= 1");
    }
    auto check_range = [](double lo, double hi, const char* what, bool positive) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi || lo < 0.0 || (positive && lo <= 0.0)) {
            throw Error(std::string("generator spec: invalid ") + what);
        }
    };
    check_range(spec.intra_lo, spec.intra_hi, "intra_weight_range", false);
    check_range(spec.score_lo, spec.score_hi, "score_range", true);
    check_range(spec.cost_lo, spec.cost_hi, "cost_range", false);
    if (!(spec.margin >= 1.0) || !std::isfinite(spec.margin)) throw Error("generator spec: margin must be >= 1");
    if (!spec.cluster_score_scale.empty()) {
        if (spec.cluster_score_scale.size() != m) {
            throw Error("generator spec: cluster_score_scale must have one entry per cluster");
        }
        for (double s : spec.cluster_score_scale) {
            if (!(s > 0.0)) throw Error("generator spec: cluster_score_scale entries must be positive");
        }
    }

    RandomStream rng(seed, StreamTag::generator, {});
    std::vector<Poi> pois;
    std::vector<std::vector<int>> clusters(m);
    int next_id = 1;
    for (std::size_t c = 0; c < m; ++c) {
        const double scale = spec.cluster_score_scale.empty() ? 1.0 : spec.cluster_score_scale[c];
        for (int k = 0; k < spec.cluster_sizes[c]; ++k) {
            Poi p;
            p.id = next_id++;
            p.cluster = static_cast<int>(c);
            p.score = scale * (spec.score_lo == spec.score_hi ? spec.score_lo : rng.uniform(spec.score_lo, spec.score_hi));
            p.visit_cost = spec.cost_lo == spec.cost_hi ? spec.cost_lo : rng.uniform(spec.cost_lo, spec.cost_hi);
            clusters[c].push_back(p.id);
            pois.push_back(std::move(p));
        }
    }

    const std::size_t n = pois.size();
    auto draw = [&](double lo, double hi) { return lo == hi ? lo : rng.uniform(lo, hi); };
    Matrix matrices[2] = {Matrix(n), Matrix(n)};
    for (Matrix& w : matrices) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (pois[i].cluster == pois[j].cluster) w(i, j) = w(j, i) = draw(spec.intra_lo, spec.intra_hi);
            }
        }
        double bound = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            double wmax = 0.0;
            for (int a : clusters[c]) {
                for (int b : clusters[c]) wmax = std::max(wmax, w(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1)));
            }
            bound += wmax;
        }
        const double lo = spec.margin * bound;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (pois[i].cluster != pois[j].cluster) w(i, j) = w(j, i) = draw(lo, 2.0 * lo);
            }
        }
    }
    return ClusteredInstance(spec.name, std::move(pois), std::move(clusters), std::move(matrices[0]),
                             std::move(matrices[1]));
}

// ---------------------------------------------------------------------------
// Decomposability

double cluster_wmax(const ClusteredInstance& instance, std::size_t c, Channel channel) {
    const Matrix& w = instance.matrix(channel);
    const auto& members = instance.clusters().at(c);
    double wmax = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
        const std::size_t ia = instance.index_of(members[a]);
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            wmax = std::max(wmax, w(ia, instance.index_of(members[b])));
        }
    }
    return wmax;
}

DecomposabilityReport check_weak_decomposability(const ClusteredInstance& instance, Channel channel) {
    DecomposabilityReport report;
    report.channel = channel;
    const std::size_t m = instance.cluster_count();
    for (std::size_t c = 0; c < m; ++c) {
        report.per_cluster_wmax.push_back(cluster_wmax(instance, c, channel));
        report.lhs += report.per_cluster_wmax.back();
    }
    report.rhs = std::numeric_limits<double>::infinity();
    const Matrix& w = instance.matrix(channel);
    const auto& pois = instance.pois();
    for (std::size_t i = 0; i < pois.size(); ++i) {
        for (std::size_t j = i + 1; j < pois.size(); ++j) {
            if (pois[i].cluster != pois[j].cluster) report.rhs = std::min(report.rhs, w(i, j));
        }
    }
    report.satisfied = report.lhs <= report.rhs;
    return report;
}

std::string report_to_json(const DecomposabilityReport& report) {
    json j;
    j["channel"] = to_string(report.channel);
    j["lhs"] = report.lhs;
    if (std::isinf(report.rhs)) {
        j["rhs"] = "inf";
    } else {
        j["rhs"] = report.rhs;
    }
    j["satisfied"] = report.satisfied;
    j["per_cluster_wmax"] = report.per_cluster_wmax;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Paths

std::size_t visit_count(std::span<const int> path, std::size_t cluster_index, const ClusteredInstance& instance) {
    if (path.empty()) throw Error("visit_count: empty path");
    if (cluster_index >= instance.cluster_count()) throw Error("visit_count: cluster index out of range");
    for (int id : path) {
        if (!instance.contains(id)) throw Error("visit_count: unknown POI id " + std::to_string(id));
    }
    const int target = static_cast<int>(cluster_index);
    std::size_t count = instance.cluster_of(path[0]) == target ? 1 : 0;
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        if (instance.cluster_of(path[j + 1]) == target && instance.cluster_of(path[j]) != target) ++count;
    }
    return count;
}

double vertex_weight(const Poi& poi, Channel channel) noexcept {
    return channel == Channel::time ? poi.visit_minutes.value_or(0.0) : poi.visit_cost;
}

double path_value(std::span<const int> path, const GenericObjectiveForm& form, const ClusteredInstance& instance) {
    double vertices = 0.0;
    double edges = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        vertices += vertex_weight(instance.poi(path[i]), form.channel);
        if (i + 1 < path.size()) edges += instance.edge(form.channel, path[i], path[i + 1]);
    }
    return form.alpha * vertices + form.beta * edges;
}

namespace {

struct PathSearch {
    const ClusteredInstance& instance;
    const GenericObjectiveForm& form;
    bool require_all;
    std::vector<int> ids;          // sorted ascending
    std::vector<char> used;
    std::vector<int> cluster_hits;
    std::size_t clusters_covered = 0;
    std::vector<int> path;
    OptimalPath best;
    bool found = false;

    // Paths are visited in lexicographic order (prefix first, children in
    // ascending id), so keeping the first strict improvement gives the
    // lexicographically smallest optimum.
    void extend(double value) {
        if (!path.empty() && (!require_all || clusters_covered == instance.cluster_count())) {
            const double tol = 1e-12 * std::max(1.0, std::abs(best.value));
            if (!found || value < best.value - tol) {
                best.path = path;
                best.value = value;
                found = true;
            }
        }
        for (std::size_t k = 0; k < ids.size(); ++k) {
            if (used[k]) continue;
            const int id = ids[k];
            const Poi& p = instance.poi(id);
            double next = value + form.alpha * vertex_weight(p, form.channel);
            if (!path.empty()) next += form.beta * instance.edge(form.channel, path.back(), id);
            used[k] = 1;
            if (cluster_hits[p.cluster]++ == 0) ++clusters_covered;
            path.push_back(id);
            extend(next);
            path.pop_back();
            if (--cluster_hits[p.cluster] == 0) --clusters_covered;
            used[k] = 0;
        }
    }
};

} // namespace

OptimalPath brute_force_optimal_path(const ClusteredInstance& instance, const GenericObjectiveForm& form,
                                     bool require_all_clusters) {
    if (instance.poi_count() > brute_force_limit) {
        throw Error("brute_force_optimal_path: instance has " + std::to_string(instance.poi_count()) +
                    " POIs, limit is " + std::to_string(brute_force_limit));
    }
    PathSearch search{instance, form, require_all_clusters, {}, {}, {}, 0, {}, {}, false};
    for (const Poi& p : instance.pois()) search.ids.push_back(p.id);
    std::sort(search.ids.begin(), search.ids.end());
    search.used.assign(search.ids.size(), 0);
    search.cluster_hits.assign(instance.cluster_count(), 0);
    search.extend(0.0);
    return search.best;
}

} // namespace dgcc
