#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dgcc {

// B = mean(deltas) + delta_const.
double balancing_coefficient(std::span<const double> deltas, double delta_const);

// P_i = (delta_i + B) * N_i.
double optimization_potential(double delta, double balance, std::size_t poi_count);

// Relative hypervolume gain below 5e-5 of the previous value. Never stagnant
// while the previous value is not positive.
inline constexpr double stagnation_threshold = 5e-5;
bool detect_stagnation(double delta, double previous_hv);

struct ComponentLedger {
    double hv = 0.0;         // C_i at the current round
    double delta = 0.0;      // C_i^k - C_i^{k-1}
    double potential = 1.0;  // P_i
    std::size_t poi_count = 0;
    bool stagnant = false;
    long budget = 0;         // I_avl for the next round
};

struct ResourceLedger {
    std::vector<ComponentLedger> components;
    long basic = 0;       // I_bas
    long additional = 0;  // I_add
    double delta_const = 1e-12;
    double balance = 0.0;  // B

    std::size_t active_count() const;  // |U|
};

// Integer budgets: stagnant components get I_bas; the pool |U|*I_add is split
// over non-stagnant components in proportion to P_i, floored, with the
// remainder handed out one FE at a time by descending P_i (ties: lower
// index). Non-positive potentials are treated as zero; if every potential in U
// is zero the pool is split evenly. The result always sums to
// m*I_bas + |U|*I_add.
std::vector<long> allocate_resources(const ResourceLedger& ledger);

// Recomputes delta, B, P, stagnation and budgets from new hypervolumes.
// `first_update` forces every component into U.
void update_ledger(ResourceLedger& ledger, std::span<const double> previous_hv, std::span<const double> current_hv,
                   bool first_update);

} // namespace dgcc
