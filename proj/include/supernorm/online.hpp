#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "supernorm/norm.hpp"

namespace supernorm {

// Replayable record of one online run. `time` is the algorithm's own clock
// (continuous time for covering, step index otherwise), never wall-clock, so
// exports are byte-identical across replays.
struct RunTrace {
    struct Row {
        long step = 0;
        std::string decision;
        double objective = 0.0;
        bool feasible = true;
        double time = 0.0;
    };
    std::vector<Row> rows;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0; // in-memory diagnostic only, not exported
    nlohmann::json summary;

    // CSV per the interchange schema: a version line, config header comment
    // lines, then (step, decision, objective_value, feasible,
    // cumulative_time) with 17-significant-digit numerics.
    std::string to_csv(const nlohmann::json& config) const;
};

std::string format_double17(double v);

// ----- online load balancing ------------------------------------------------

struct LoadBalanceInstance {
    long T = 0;                // jobs
    int n = 0;                 // machines
    std::vector<Vec> sizes;    // T rows of n entries, p_{ti} >= 0
    Norm objective;            // over the n machine loads

    void validate() const;
};

// Greedy: assign each job to the machine with the smallest norm increase,
// ties broken by lowest machine index. O(p)-competitive for p-supermodular
// objectives; the final cost obeys |load| <= |opt| / (2^{1/p} - 1).
RunTrace greedy_loadbalance(const LoadBalanceInstance& inst);

// Exact hindsight optimum by enumerating all n^T assignments (<= 1e7).
double brute_opt_loadbalance(const LoadBalanceInstance& inst);

// ----- online covering --------------------------------------------------------

struct CoveringInstance {
    std::vector<Vec> rows;                 // constraint rows, entries in [0,1]
    Norm outer;                            // over k inner values
    std::vector<Norm> inners;              // k norms, inners[l] over |S_l| coords
    std::vector<std::vector<int>> partitions; // S_1..S_k, must partition [n]
    double delta = 0.0;                    // 0 = set from the first row
    double step = 1e-3;

    int n_vars() const { return rows.empty() ? total_partition_size() : int(rows[0].size()); }
    int total_partition_size() const;
    void validate() const;
};

// App. D.3 reduction: duplicates variables shared by several restriction
// sets and enumerates copy-selector constraints on each row's support, so
// overlapping sets become a partition.
CoveringInstance reduce_to_partition(const CoveringInstance& overlapping);

// Continuous-time covering with explicit Euler steps:
//   dx_i/dtau = A_ri (x_i + 1/d) / (grad_i Psi(x) + delta),
// Psi(y) = (1/p') |F(y)|^{p'}, raising x until each arriving row is
// satisfied. Monotone in every coordinate; Psi(x_final) <= 2 tau_final up to
// discretization.
RunTrace solve_cover(const CoveringInstance& inst);

// offline optimum; exhaustive grid for n <= 6 (the oracle of record),
// projected subgradient beyond
double offline_opt_cover(const CoveringInstance& inst, long budget);
double offline_opt_cover_subgradient(const CoveringInstance& inst, long budget);

// objective value |F(y)| of a covering solution
double covering_cost(const CoveringInstance& inst, const Vec& y);

// ----- online packing ---------------------------------------------------------

struct PackingInstance {
    long T = 0;                 // items
    int n = 0;                  // size dimensions
    Vec values;                 // c_t > 0
    std::vector<Vec> sizes;     // T columns a_{.,t}, each of n entries >= 0
    Norm p_norm;                // gauge of the downward-closed feasible set
    std::optional<std::pair<double, double>> opt_estimate; // (value, beta)
    std::optional<Norm> approx_norm; // p-supermodular alpha-approximation
    double alpha = 1.0;
    std::optional<double> rho_bound; // width upper bound; computed if absent

    void validate() const;
    double width() const; // max/min of a_{i,t} |e_i|_P / c_t over nonzeros
};

// Lagrangian online packing: random guess I among powers of delta, potential
// Psi(z) = (I * OPT~ / beta) |z|^p, greedy per-item bisection of the
// marginal profit, and a safety stop that zeroes all further play once the
// gauge constraint would be crossed. The returned play is always feasible.
RunTrace solve_pack(const PackingInstance& inst, std::uint64_t seed);

// coordinate ascent with per-coordinate bisection to the gauge boundary,
// restarted from `budget` random starts
double offline_opt_pack(const PackingInstance& inst, long budget);

// ----- online linear optimization (shifted FTPL) -----------------------------

// Plays x_t = grad |s_{t-1} + (p/eps) 1|_dual of the running gain sum.
// Requires |e_i|_dual = 1 (rescaled at load otherwise) and an analytic
// gradient. Total gain >= e^{-eps} (OPT - p (|1|_dual - 1)/eps).
RunTrace olo_ftpl(const Norm& dual_norm, const std::vector<Vec>& gains, double p, double eps);

} // namespace supernorm
