#include "dgcc/encoding.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace dgcc {

std::size_t DecompositionPlan::segment_offset(std::size_t position) const {
    if (position >= days.size()) throw Error("segment position out of range");
    std::size_t days_before = 0;
    for (std::size_t p = 0; p < position; ++p) days_before += static_cast<std::size_t>(days[p]);
    return days_before * static_cast<std::size_t>(slots_per_day);
}

std::size_t DecompositionPlan::segment_length(std::size_t position) const {
    if (position >= days.size()) throw Error("segment position out of range");
    return static_cast<std::size_t>(days[position]) * static_cast<std::size_t>(slots_per_day);
}

void DecompositionPlan::validate() const {
    const std::size_t m = order.size();
    if (m == 0) throw Error("plan: no components");
    if (days.size() != m) throw Error("plan: days and order differ in length");
    if (slots_per_day < 1) throw Error("plan: M must be >= 1");
    std::vector<char> seen(m, 0);
    for (int c : order) {
        if (c < 0 || static_cast<std::size_t>(c) >= m || seen[static_cast<std::size_t>(c)]) {
            throw Error("plan: order is not a permutation of 0..m-1");
        }
        seen[static_cast<std::size_t>(c)] = 1;
    }
    long sum = 0;
    for (int d : days) {
        if (d < 1) throw Error("plan: every component needs at least one day");
        sum += d;
    }
    if (sum != total_days) throw Error("plan: day counts sum to " + std::to_string(sum) + ", expected " +
                                       std::to_string(total_days));
}

DecompositionPlan initial_decomposition(std::size_t m, int total_days, int slots_per_day, std::vector<int> order) {
    if (m == 0) throw Error("initial_decomposition: m must be >= 1");
    if (total_days < static_cast<int>(m)) {
        throw Error("initial_decomposition: D = " + std::to_string(total_days) + " is less than m = " +
                    std::to_string(m) + "; every cluster needs a day");
    }
    if (slots_per_day < 1) throw Error("initial_decomposition: M must be >= 1");
    DecompositionPlan plan;
    if (order.empty()) {
        order.resize(m);
        std::iota(order.begin(), order.end(), 0);
    }
    plan.order = std::move(order);
    plan.total_days = total_days;
    plan.slots_per_day = slots_per_day;
    const int base = total_days / static_cast<int>(m);
    const int extra = total_days % static_cast<int>(m);
    for (std::size_t p = 0; p < m; ++p) plan.days.push_back(base + (static_cast<int>(p) < extra ? 1 : 0));
    plan.validate();
    return plan;
}

std::vector<std::span<int>> SegmentView::day_blocks() const {
    std::vector<std::span<int>> blocks;
    for (std::size_t d = 0; d < day_count(); ++d) blocks.push_back(day_block(d));
    return blocks;
}

SegmentView segment_of(Genome& genome, const DecompositionPlan& plan, std::size_t position) {
    if (position >= plan.component_count()) {
        throw Error("segment_of: component " + std::to_string(position) + " out of range (m = " +
                    std::to_string(plan.component_count()) + ")");
    }
    if (genome.slots.size() != plan.genome_length()) throw Error("segment_of: genome length does not match plan");
    return SegmentView(position,
                       std::span<int>(genome.slots).subspan(plan.segment_offset(position), plan.segment_length(position)),
                       plan.slots_per_day);
}

std::span<const int> segment_slots(const Genome& genome, const DecompositionPlan& plan, std::size_t position) {
    if (position >= plan.component_count()) throw Error("segment_slots: component out of range");
    if (genome.slots.size() != plan.genome_length()) throw Error("segment_slots: genome length does not match plan");
    return std::span<const int>(genome.slots).subspan(plan.segment_offset(position), plan.segment_length(position));
}

std::vector<std::vector<int>> decode(const Genome& genome, const DecompositionPlan& plan) {
    if (genome.slots.size() != plan.genome_length()) {
        throw Error("decode: genome has " + std::to_string(genome.slots.size()) + " slots, plan expects " +
                    std::to_string(plan.genome_length()));
    }
    std::vector<std::vector<int>> routes(static_cast<std::size_t>(plan.total_days));
    const std::size_t per_day = static_cast<std::size_t>(plan.slots_per_day);
    for (std::size_t i = 0; i < genome.slots.size(); ++i) {
        if (genome.slots[i] != 0) routes[i / per_day].push_back(genome.slots[i]);
    }
    return routes;
}

std::vector<int> visited_sequence(std::span<const int> slots) {
    std::vector<int> seq;
    seq.reserve(slots.size());
    for (int id : slots) {
        if (id != 0) seq.push_back(id);
    }
    return seq;
}

namespace {

void check_segment(std::span<const int> segment, std::size_t position, int cluster, const ClusteredInstance& instance,
                   std::vector<char>& seen, std::vector<Violation>& out) {
    bool any = false;
    for (int id : segment) {
        if (id == 0) continue;
        any = true;
        if (!instance.contains(id)) {
            out.push_back({ViolationKind::unknown_id, id, position, "unknown POI id " + std::to_string(id)});
            continue;
        }
        auto& flag = seen[static_cast<std::size_t>(id)];
        if (flag == 1) {
            out.push_back({ViolationKind::duplicate_id, id, position, "POI id " + std::to_string(id) + " appears more than once"});
        }
        flag = flag == 0 ? 1 : 2;
        if (instance.cluster_of(id) != cluster) {
            out.push_back({ViolationKind::wrong_cluster, id, position,
                           "POI id " + std::to_string(id) + " belongs to cluster " +
                               std::to_string(instance.cluster_of(id)) + ", not " + std::to_string(cluster)});
        }
    }
    if (!any) {
        out.push_back({ViolationKind::empty_segment, 0, position, "segment " + std::to_string(position) + " is empty"});
    }
}

} // namespace

std::vector<Violation> validate(const Genome& genome, const DecompositionPlan& plan, const ClusteredInstance& instance) {
    std::vector<Violation> out;
    if (genome.slots.size() != plan.genome_length()) {
        out.push_back({ViolationKind::length_mismatch, 0, 0,
                       "genome has " + std::to_string(genome.slots.size()) + " slots, plan expects " +
                           std::to_string(plan.genome_length())});
        return out;
    }
    std::vector<char> seen(static_cast<std::size_t>(instance.max_id()) + 1, 0);
    for (std::size_t p = 0; p < plan.component_count(); ++p) {
        check_segment(segment_slots(genome, plan, p), p, plan.order[p], instance, seen, out);
    }
    return out;
}

std::vector<Violation> validate_segment(std::span<const int> segment, int cluster, int slots_per_day,
                                        const ClusteredInstance& instance) {
    std::vector<Violation> out;
    if (slots_per_day < 1 || segment.size() % static_cast<std::size_t>(slots_per_day) != 0) {
        out.push_back({ViolationKind::length_mismatch, 0, 0, "segment length is not a whole number of days"});
        return out;
    }
    std::vector<char> seen(static_cast<std::size_t>(instance.max_id()) + 1, 0);
    check_segment(segment, 0, cluster, instance, seen, out);
    return out;
}

std::string genome_to_text(std::span<const int> slots, std::span<const int> days, int slots_per_day) {
    std::string out;
    std::size_t i = 0;
    for (std::size_t s = 0; s < days.size(); ++s) {
        if (s > 0) out += "||";
        for (int d = 0; d < days[s]; ++d) {
            if (d > 0) out += '|';
            for (int k = 0; k < slots_per_day; ++k, ++i) {
                if (k > 0) out += ',';
                out += std::to_string(i < slots.size() ? slots[i] : 0);
            }
        }
    }
    return out;
}

std::string genome_to_text(const Genome& genome, const DecompositionPlan& plan) {
    if (genome.slots.size() != plan.genome_length()) throw Error("genome_to_text: genome length does not match plan");
    return genome_to_text(genome.slots, plan.days, plan.slots_per_day);
}

ParsedGenome genome_from_text(const std::string& text) {
    ParsedGenome parsed;
    auto split = [](const std::string& s, const std::string& sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const std::size_t at = s.find(sep, start);
            parts.push_back(s.substr(start, at == std::string::npos ? std::string::npos : at - start));
            if (at == std::string::npos) break;
            start = at + sep.size();
        }
        return parts;
    };
    for (const std::string& segment : split(text, "||")) {
        int day_count = 0;
        for (const std::string& day : split(segment, "|")) {
            int width = 0;
            for (const std::string& value : split(day, ",")) {
                try {
                    std::size_t used = 0;
                    const int id = std::stoi(value, &used);
                    if (used != value.size() || id < 0) throw Error("");
                    parsed.genome.slots.push_back(id);
                } catch (const std::exception&) {
                    throw Error("genome text: bad slot value '" + value + "'");
                }
                ++width;
            }
            if (parsed.slots_per_day == 0) parsed.slots_per_day = width;
            if (width != parsed.slots_per_day) throw Error("genome text: day blocks differ in width");
            ++day_count;
        }
        parsed.days.push_back(day_count);
    }
    return parsed;
}

} // namespace dgcc
