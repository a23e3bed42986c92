#include "dgcc/objectives.hpp"

#include <cmath>

namespace dgcc {

void EvalConfig::validate() const {
    if (!(alpha_ctrl > 0.0)) throw Error("eval config: alpha_ctrl must be > 0");
    if (!(theta > 0.0)) throw Error("eval config: theta must be > 0");
}

double omega(std::size_t k, int total_days, int slots_per_day, double alpha_ctrl) {
    const std::size_t capacity = static_cast<std::size_t>(total_days) * static_cast<std::size_t>(slots_per_day);
    if (k > capacity) {
        throw Error("omega: k = " + std::to_string(k) + " exceeds D*M = " + std::to_string(capacity));
    }
    return 1.0 - static_cast<double>(k) / (static_cast<double>(capacity) + alpha_ctrl);
}

double raw_edge_sum(std::span<const int> slots, int slots_per_day, const ClusteredInstance& instance, Channel channel,
                    bool count_interday_edges) {
    const Matrix& w = instance.matrix(channel);
    const std::size_t per_day = static_cast<std::size_t>(slots_per_day);
    double sum = 0.0;
    std::size_t prev = 0;
    std::size_t prev_day = 0;
    bool have_prev = false;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const int id = slots[i];
        if (id == 0) continue;
        const std::size_t idx = instance.index_of(id);
        const std::size_t day = i / per_day;
        if (have_prev && (count_interday_edges || day == prev_day)) sum += w(prev, idx);
        prev = idx;
        prev_day = day;
        have_prev = true;
    }
    return sum;
}

ObjectiveVector evaluate_slots(std::span<const int> slots, int days, int slots_per_day, const ClusteredInstance& instance,
                               const EvalConfig& cfg) {
    const Matrix& wt = instance.time_matrix();
    const Matrix& wc = instance.cost_matrix();
    const auto& pois = instance.pois();
    const std::size_t per_day = static_cast<std::size_t>(slots_per_day);

    double time = 0.0;
    double cost = 0.0;
    double reciprocal = 0.0;
    std::size_t k = 0;
    std::size_t prev = 0;
    std::size_t prev_day = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const int id = slots[i];
        if (id == 0) continue;
        const std::size_t idx = instance.index_of(id);
        const std::size_t day = i / per_day;
        if (k > 0 && (cfg.count_interday_edges || day == prev_day)) {
            time += wt(prev, idx);
            cost += wc(prev, idx);
        }
        cost += pois[idx].visit_cost;
        reciprocal += 1.0 / pois[idx].score;
        prev = idx;
        prev_day = day;
        ++k;
    }
    const double w = omega(k, days, slots_per_day, cfg.alpha_ctrl);
    return {w * time, w * cost, cfg.theta * reciprocal};
}

ObjectiveVector evaluate_full(const Genome& genome, const DecompositionPlan& plan, const ClusteredInstance& instance,
                              const EvalConfig& cfg) {
    if (genome.slots.size() != plan.genome_length()) throw Error("evaluate_full: genome length does not match plan");
    return evaluate_slots(genome.slots, plan.total_days, plan.slots_per_day, instance, cfg);
}

ObjectiveVector evaluate_segment(const Genome& genome, const DecompositionPlan& plan, const ClusteredInstance& instance,
                                 const EvalConfig& cfg, std::size_t position) {
    return evaluate_slots(segment_slots(genome, plan, position), plan.days.at(position), plan.slots_per_day, instance,
                          cfg);
}

ObjectiveVector normalized_fitness(const ObjectiveVector& v, int days) {
    if (days < 1) throw Error("normalized_fitness: day count must be >= 1");
    const double d = static_cast<double>(days);
    return {v.f_t / d, v.f_c / d, v.f_e / d};
}

} // namespace dgcc
