#include "dgcc/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "dgcc/kernels.hpp"

namespace dgcc {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept {
    bool strict = false;
    for (std::size_t j = 0; j < 3; ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) strict = true;
    }
    return strict;
}

namespace {

struct Soa {
    std::vector<double> f0, f1, f2;

    explicit Soa(std::span<const ObjectiveVector> points) {
        f0.reserve(points.size());
        f1.reserve(points.size());
        f2.reserve(points.size());
        for (const auto& p : points) {
            f0.push_back(p.f_t);
            f1.push_back(p.f_c);
            f2.push_back(p.f_e);
        }
    }

    kernels::SoaView tail(std::size_t from) const {
        return {f0.data() + from, f1.data() + from, f2.data() + from, f0.size() - from};
    }
};

} // namespace

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjectiveVector> points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0) return fronts;

    const Soa soa(points);
    const auto& k = kernels::active();
    std::vector<std::size_t> dominated_count(n, 0);
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::uint8_t> rel(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double probe[3] = {points[i].f_t, points[i].f_c, points[i].f_e};
        const auto view = soa.tail(i + 1);
        k.compare(probe, view, rel.data());
        for (std::size_t t = 0; t < view.n; ++t) {
            const std::size_t j = i + 1 + t;
            if (rel[t] == kernels::a_dominates) {
                dominated_by_me[i].push_back(j);
                ++dominated_count[j];
            } else if (rel[t] == kernels::b_dominates) {
                dominated_by_me[j].push_back(i);
                ++dominated_count[i];
            }
        }
    }

    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (dominated_count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : current) {
            for (std::size_t q : dominated_by_me[p]) {
                if (--dominated_count[q] == 0) next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<std::size_t> pareto_ranks(std::span<const ObjectiveVector> points) {
    std::vector<std::size_t> ranks(points.size(), 0);
    const auto fronts = non_dominated_sort(points);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        for (std::size_t i : fronts[r]) ranks[i] = r;
    }
    return ranks;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < 3; ++j) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return front[a][j] < front[b][j]; });
        distance[idx.front()] = inf;
        distance[idx.back()] = inf;
        const double range = front[idx.back()][j] - front[idx.front()][j];
        if (!(range > 0.0)) continue;
        for (std::size_t r = 1; r + 1 < n; ++r) {
            distance[idx[r]] += (front[idx[r + 1]][j] - front[idx[r - 1]][j]) / range;
        }
    }
    return distance;
}

ReferencePoint choose_reference_point(std::span<const ObjectiveVector> samples, ReferencePolicy policy,
                                      std::array<double, 3> fixed_coords, double margin) {
    ReferencePoint ref;
    ref.policy = policy;
    ref.margin = margin;
    ref.frozen = true;
    if (policy == ReferencePolicy::fixed) {
        ref.coords = fixed_coords;
        return ref;
    }
    if (samples.empty()) throw Error("choose_reference_point: adaptive policy needs at least one sample");
    if (!(margin >= 1.0)) throw Error("choose_reference_point: margin must be >= 1");
    std::array<double, 3> hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity()};
    for (const auto& s : samples) {
        for (std::size_t j = 0; j < 3; ++j) hi[j] = std::max(hi[j], s[j]);
    }
    for (std::size_t j = 0; j < 3; ++j) ref.coords[j] = hi[j] * margin;
    return ref;
}

double hv_contribution(const ObjectiveVector& v, const ReferencePoint& ref) {
    double volume = 1.0;
    for (std::size_t j = 0; j < 3; ++j) {
        const double d = ref.coords[j] - v[j];
        if (!(d >= 0.0)) return 0.0;
        volume *= d;
    }
    return volume;
}

void hv_contributions(std::span<const ObjectiveVector> points, const ReferencePoint& ref, std::span<double> out) {
    if (out.size() < points.size()) throw Error("hv_contributions: output span too small");
    const Soa soa(points);
    kernels::active().box_volume(ref.coords.data(), soa.tail(0), out.data());
}

// ---------------------------------------------------------------------------

bool ParetoArchive::covers(const ObjectiveVector& v) const {
    const double probe[3] = {v.f_t, v.f_c, v.f_e};
    return kernels::active().count_covering(probe, {f0_.data(), f1_.data(), f2_.data(), f0_.size()}) > 0;
}

bool ParetoArchive::insert(const Genome& genome, std::shared_ptr<const DecompositionPlan> plan,
                           const ObjectiveVector& objectives) {
    if (covers(objectives)) return false;
    const double probe[3] = {objectives.f_t, objectives.f_c, objectives.f_e};
    thread_local std::vector<std::uint8_t> rel;
    rel.resize(entries_.size());
    kernels::active().compare(probe, {f0_.data(), f1_.data(), f2_.data(), f0_.size()}, rel.data());
    std::size_t keep = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (rel[i] == kernels::a_dominates) continue;
        if (keep != i) {
            entries_[keep] = std::move(entries_[i]);
            f0_[keep] = f0_[i];
            f1_[keep] = f1_[i];
            f2_[keep] = f2_[i];
        }
        ++keep;
    }
    entries_.resize(keep);
    f0_.resize(keep);
    f1_.resize(keep);
    f2_.resize(keep);
    entries_.push_back({genome, std::move(plan), objectives});
    f0_.push_back(objectives.f_t);
    f1_.push_back(objectives.f_c);
    f2_.push_back(objectives.f_e);
    if (capacity_ && entries_.size() > *capacity_) truncate_to_capacity();
    return true;
}

void ParetoArchive::truncate_to_capacity() {
    while (entries_.size() > *capacity_) {
        const auto objs = objectives();
        const auto dist = crowding_distance(objs);
        std::size_t worst = 0;
        for (std::size_t i = 1; i < dist.size(); ++i) {
            if (dist[i] <= dist[worst]) worst = i;
        }
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(worst));
        f0_.erase(f0_.begin() + static_cast<std::ptrdiff_t>(worst));
        f1_.erase(f1_.begin() + static_cast<std::ptrdiff_t>(worst));
        f2_.erase(f2_.begin() + static_cast<std::ptrdiff_t>(worst));
    }
}

std::vector<ObjectiveVector> ParetoArchive::objectives() const {
    std::vector<ObjectiveVector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.objectives);
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ParetoArchive::to_csv() const {
    std::string out = "f_t,f_c,f_e,genome\n";
    for (const auto& e : entries_) {
        out += format_double(e.objectives.f_t);
        out += ',';
        out += format_double(e.objectives.f_c);
        out += ',';
        out += format_double(e.objectives.f_e);
        out += ",\"";
        if (e.plan) {
            out += genome_to_text(e.genome.slots, e.plan->days, e.plan->slots_per_day);
        } else {
            for (std::size_t i = 0; i < e.genome.slots.size(); ++i) {
                if (i > 0) out += ',';
                out += std::to_string(e.genome.slots[i]);
            }
        }
        out += "\"\n";
    }
    return out;
}

} // namespace dgcc
