#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "supernorm/certify.hpp"
#include "supernorm/norm.hpp"

namespace supernorm {

// Stochastic probing instance: items with finite discrete value
// distributions, a downward-closed feasible family of probe sets (explicit
// bitmask list or a cardinality bound), and a monotone norm objective on the
// revealed value vector.
struct ProbingInstance {
    int n = 0;
    std::vector<std::vector<std::pair<double, double>>> dists; // per item (value, prob)
    std::optional<int> card;            // feasible = all sets of size <= card
    std::vector<std::uint32_t> sets;    // or an explicit family of bitmasks
    Norm objective;

    void validate() const; // probabilities sum to 1, family downward-closed
    bool extension_feasible(std::uint32_t mask) const;
    // decision-tree state count bound (product of support+1), for the budget
    double state_bound() const;
};

// Exact optimal adaptive policy by backward induction over
// (probed set, observed outcome profile). The DP may stop at any state and
// never probes an item outside every feasible extension.
struct AdaptivePolicy {
    int n = 0;
    double value = 0.0;
    std::vector<int> radices; // support_i + 1 per item, for state encoding
    // state key -> next item to probe, or -1 to stop
    std::unordered_map<std::uint64_t, int> decisions;

    std::uint64_t root() const { return 0; }
    std::uint64_t child(std::uint64_t key, int item, int outcome) const;
    // run the policy on a full outcome profile; returns the probed set mask
    std::uint32_t drive(const std::vector<int>& outcomes) const;
};

AdaptivePolicy adaptive_opt(const ProbingInstance& inst);

// Best fixed probe set: enumerates the family and computes each set's exact
// expectation (Monte Carlo with reported stderr beyond the exact budget).
struct NonAdaptiveResult {
    std::uint32_t set = 0;
    double value = 0.0;
    double stderr_ = 0.0; // 0 for exact evaluation
};
NonAdaptiveResult nonadaptive_opt(const ProbingInstance& inst, long mc = 100000,
                                  std::uint64_t seed = 17);

// Value of the hallucination strategy: drive the adaptive policy with
// resampled values, collect the true ones. Exact enumeration over paired
// outcome profiles when affordable, otherwise Monte Carlo with a single
// interleaved (X, Xbar) stream per item. Returns (mean, stderr).
std::pair<double, double> hallucination_value(const ProbingInstance& inst,
                                              const AdaptivePolicy& policy, long mc,
                                              std::uint64_t seed);

// Tangent-sequence generators for the decoupling check.
struct TangentSpec {
    enum class Kind { Iid, AdversarialMax, Probing };
    Kind kind = Kind::Iid;
    int dim = 1;
    int horizon = 1;
    std::optional<ProbingInstance> instance; // for Kind::Probing
};

// Monte Carlo check of E|V_1+...+V_T| <= envelope * p * E|Vbar_1+...+Vbar_T|
// for tangent sequences (conditionally identically distributed pairs).
CertReport decoupling_check(const TangentSpec& gen, const Norm& norm, double p, long mc,
                            std::uint64_t seed, double envelope = 10.0);

} // namespace supernorm
