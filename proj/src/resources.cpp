#include "dgcc/resources.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dgcc/error.hpp"

namespace dgcc {

double balancing_coefficient(std::span<const double> deltas, double delta_const) {
    if (deltas.empty()) throw Error("balancing_coefficient: no components");
    if (!(delta_const > 0.0)) throw Error("balancing_coefficient: delta must be positive");
    double sum = 0.0;
    for (double d : deltas) sum += d;
    return sum / static_cast<double>(deltas.size()) + delta_const;
}

double optimization_potential(double delta, double balance, std::size_t poi_count) {
    if (poi_count < 1) throw Error("optimization_potential: component has no POIs");
    return (delta + balance) * static_cast<double>(poi_count);
}

bool detect_stagnation(double delta, double previous_hv) {
    if (!(previous_hv > 0.0)) return false;
    return delta / previous_hv < stagnation_threshold;
}

std::size_t ResourceLedger::active_count() const {
    return static_cast<std::size_t>(
        std::count_if(components.begin(), components.end(), [](const ComponentLedger& c) { return !c.stagnant; }));
}

std::vector<long> allocate_resources(const ResourceLedger& ledger) {
    const std::size_t m = ledger.components.size();
    std::vector<long> budget(m, ledger.basic);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < m; ++i) {
        if (!ledger.components[i].stagnant) active.push_back(i);
    }
    if (active.empty()) return budget;

    const long pool = static_cast<long>(active.size()) * ledger.additional;
    std::vector<double> weight(m, 0.0);
    double total = 0.0;
    for (std::size_t i : active) {
        weight[i] = std::max(0.0, ledger.components[i].potential);
        if (!std::isfinite(weight[i])) weight[i] = 0.0;
        total += weight[i];
    }
    if (!(total > 0.0)) {
        for (std::size_t i : active) weight[i] = 1.0;
        total = static_cast<double>(active.size());
    }

    long handed = 0;
    for (std::size_t i : active) {
        const long share = static_cast<long>(std::floor(static_cast<double>(pool) * weight[i] / total));
        budget[i] += share;
        handed += share;
    }

    std::vector<std::size_t> by_potential = active;
    std::stable_sort(by_potential.begin(), by_potential.end(),
                     [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
    long remainder = pool - handed;
    for (std::size_t r = 0; remainder > 0; r = (r + 1) % by_potential.size(), --remainder) {
        ++budget[by_potential[r]];
    }
    // Floating-point rounding can overshoot by a unit; take it back from the
    // weakest components.
    for (std::size_t r = by_potential.size(); remainder < 0;) {
        r = r == 0 ? by_potential.size() - 1 : r - 1;
        if (budget[by_potential[r]] > ledger.basic) {
            --budget[by_potential[r]];
            ++remainder;
        }
    }
    return budget;
}

void update_ledger(ResourceLedger& ledger, std::span<const double> previous_hv, std::span<const double> current_hv,
                   bool first_update) {
    const std::size_t m = ledger.components.size();
    if (previous_hv.size() != m || current_hv.size() != m) throw Error("update_ledger: size mismatch");
    std::vector<double> deltas(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto& c = ledger.components[i];
        c.hv = current_hv[i];
        c.delta = current_hv[i] - previous_hv[i];
        deltas[i] = c.delta;
        c.stagnant = first_update ? false : detect_stagnation(c.delta, previous_hv[i]);
    }
    ledger.balance = balancing_coefficient(deltas, ledger.delta_const);
    for (auto& c : ledger.components) c.potential = optimization_potential(c.delta, ledger.balance, c.poi_count);
    const auto budgets = allocate_resources(ledger);
    for (std::size_t i = 0; i < m; ++i) ledger.components[i].budget = budgets[i];
}

} // namespace dgcc
