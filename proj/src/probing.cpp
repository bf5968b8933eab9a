#include "supernorm/probing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "supernorm/rng.hpp"

namespace supernorm {

namespace {

int popcount(std::uint32_t m) { return __builtin_popcount(m); }

// cumulative-probability draw of an outcome index
int draw_outcome(const std::vector<std::pair<double, double>>& dist, Rng& rng) {
    double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t o = 0; o < dist.size(); ++o) {
        acc += dist[o].second;
        if (u < acc) return static_cast<int>(o);
    }
    return static_cast<int>(dist.size()) - 1;
}

} // namespace

void ProbingInstance::validate() const {
    if (n < 1 || n > 30) throw std::invalid_argument("item count out of range");
    if (static_cast<int>(dists.size()) != n) throw std::invalid_argument("dists/n mismatch");
    if (objective.dim() != n) throw std::invalid_argument("objective dimension != item count");
    for (const auto& d : dists) {
        if (d.empty()) throw std::invalid_argument("empty distribution");
        double s = 0.0;
        for (auto [v, p] : d) {
            if (v < 0.0 || p < 0.0) throw std::invalid_argument("negative value or probability");
            s += p;
        }
        if (std::abs(s - 1.0) > 1e-12)
            throw std::invalid_argument("item probabilities must sum to 1");
    }
    if (!card && sets.empty()) throw std::invalid_argument("no feasible family given");
    if (!sets.empty()) {
        std::set<std::uint32_t> fam(sets.begin(), sets.end());
        fam.insert(0u);
        for (std::uint32_t s : fam)
            for (int i = 0; i < n; ++i)
                if ((s >> i) & 1u)
                    if (!fam.count(s & ~(1u << i)))
                        throw std::invalid_argument("explicit family is not downward-closed");
    }
}

bool ProbingInstance::extension_feasible(std::uint32_t mask) const {
    if (card) return popcount(mask) <= *card;
    for (std::uint32_t s : sets)
        if ((mask & ~s) == 0u) return true;
    return mask == 0u;
}

double ProbingInstance::state_bound() const {
    double b = 1.0;
    for (const auto& d : dists) b *= double(d.size() + 1);
    return b;
}

std::uint64_t AdaptivePolicy::child(std::uint64_t key, int item, int outcome) const {
    std::uint64_t stride = 1;
    for (int i = 0; i < item; ++i) stride *= static_cast<std::uint64_t>(radices[static_cast<std::size_t>(i)]);
    return key + stride * static_cast<std::uint64_t>(1 + outcome);
}

std::uint32_t AdaptivePolicy::drive(const std::vector<int>& outcomes) const {
    std::uint64_t key = root();
    std::uint32_t mask = 0;
    for (;;) {
        auto it = decisions.find(key);
        if (it == decisions.end() || it->second < 0) return mask;
        int item = it->second;
        mask |= 1u << item;
        key = child(key, item, outcomes[static_cast<std::size_t>(item)]);
    }
}

namespace {

struct Dp {
    const ProbingInstance& inst;
    AdaptivePolicy& policy;
    std::unordered_map<std::uint64_t, double> memo;

    double run(std::uint64_t key, std::uint32_t mask, std::vector<int>& outcomes) {
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        // stop value: the objective on the revealed vector
        double stop = 0.0;
        if (mask != 0u) {
            Vec x(static_cast<std::size_t>(inst.n), 0.0);
            for (int i = 0; i < inst.n; ++i)
                if ((mask >> i) & 1u)
                    x[static_cast<std::size_t>(i)] =
                        inst.dists[static_cast<std::size_t>(i)][static_cast<std::size_t>(outcomes[static_cast<std::size_t>(i)])].first;
            stop = inst.objective.value(x);
        }
        double best = stop;
        int action = -1;
        for (int i = 0; i < inst.n; ++i) {
            if ((mask >> i) & 1u) continue;
            std::uint32_t next_mask = mask | (1u << i);
            if (!inst.extension_feasible(next_mask)) continue;
            double ev = 0.0;
            const auto& dist = inst.dists[static_cast<std::size_t>(i)];
            for (std::size_t o = 0; o < dist.size(); ++o) {
                outcomes[static_cast<std::size_t>(i)] = static_cast<int>(o);
                ev += dist[o].second *
                      run(policy.child(key, i, static_cast<int>(o)), next_mask, outcomes);
            }
            outcomes[static_cast<std::size_t>(i)] = -1;
            if (ev > best * (1.0 + 1e-12) + 1e-15) {
                best = ev;
                action = i;
            }
        }
        memo.emplace(key, best);
        policy.decisions.emplace(key, action);
        return best;
    }
};

} // namespace

AdaptivePolicy adaptive_opt(const ProbingInstance& inst) {
    inst.validate();
    if (inst.state_bound() > 1e6)
        throw std::invalid_argument("decision-tree state budget exceeded");
    AdaptivePolicy policy;
    policy.n = inst.n;
    for (const auto& d : inst.dists)
        policy.radices.push_back(static_cast<int>(d.size()) + 1);
    Dp dp{inst, policy, {}};
    std::vector<int> outcomes(static_cast<std::size_t>(inst.n), -1);
    policy.value = dp.run(policy.root(), 0u, outcomes);
    return policy;
}

namespace {

// exact expectation of |X_S| over the product distribution on S
double exact_set_value(const ProbingInstance& inst, std::uint32_t set) {
    std::vector<int> items;
    for (int i = 0; i < inst.n; ++i)
        if ((set >> i) & 1u) items.push_back(i);
    if (items.empty()) return 0.0;
    std::vector<std::size_t> idx(items.size(), 0);
    double total = 0.0;
    for (;;) {
        double prob = 1.0;
        Vec x(static_cast<std::size_t>(inst.n), 0.0);
        for (std::size_t s = 0; s < items.size(); ++s) {
            const auto& d = inst.dists[static_cast<std::size_t>(items[s])];
            prob *= d[idx[s]].second;
            x[static_cast<std::size_t>(items[s])] = d[idx[s]].first;
        }
        total += prob * inst.objective.value(x);
        std::size_t pos = 0;
        while (pos < items.size()) {
            if (++idx[pos] < inst.dists[static_cast<std::size_t>(items[pos])].size()) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == items.size()) break;
    }
    return total;
}

double support_product(const ProbingInstance& inst, std::uint32_t set) {
    double p = 1.0;
    for (int i = 0; i < inst.n; ++i)
        if ((set >> i) & 1u) p *= double(inst.dists[static_cast<std::size_t>(i)].size());
    return p;
}

std::vector<std::uint32_t> family_members(const ProbingInstance& inst) {
    std::vector<std::uint32_t> fam;
    if (inst.card) {
        if (inst.n > 20)
            throw std::invalid_argument("cardinality family too large to enumerate");
        for (std::uint32_t m = 0; m < (1u << inst.n); ++m)
            if (popcount(m) <= *inst.card) fam.push_back(m);
    } else {
        std::set<std::uint32_t> closed(inst.sets.begin(), inst.sets.end());
        closed.insert(0u);
        fam.assign(closed.begin(), closed.end());
    }
    return fam;
}

} // namespace

NonAdaptiveResult nonadaptive_opt(const ProbingInstance& inst, long mc, std::uint64_t seed) {
    inst.validate();
    NonAdaptiveResult best;
    for (std::uint32_t set : family_members(inst)) {
        double v, se = 0.0;
        if (support_product(inst, set) <= 1e6) {
            v = exact_set_value(inst, set);
        } else {
            double sum = 0.0, sum2 = 0.0;
            for (long s = 0; s < mc; ++s) {
                Rng rng(mix_seed(seed ^ set, static_cast<std::uint64_t>(s)));
                Vec x(static_cast<std::size_t>(inst.n), 0.0);
                for (int i = 0; i < inst.n; ++i)
                    if ((set >> i) & 1u) {
                        int o = draw_outcome(inst.dists[static_cast<std::size_t>(i)], rng);
                        x[static_cast<std::size_t>(i)] =
                            inst.dists[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)].first;
                    }
                double val = inst.objective.value(x);
                sum += val;
                sum2 += val * val;
            }
            v = sum / double(mc);
            se = std::sqrt(std::max(0.0, sum2 / double(mc) - v * v) / double(mc));
        }
        if (v > best.value) {
            best.set = set;
            best.value = v;
            best.stderr_ = se;
        }
    }
    return best;
}

std::pair<double, double> hallucination_value(const ProbingInstance& inst,
                                              const AdaptivePolicy& policy, long mc,
                                              std::uint64_t seed) {
    inst.validate();
    double full = support_product(inst, (1u << inst.n) - 1u);
    if (full * full <= 1e6) {
        // exact expectation over paired profiles: enumerate the hallucinated
        // profile driving the policy, then score each probed set exactly
        std::unordered_map<std::uint32_t, double> set_value;
        std::vector<std::size_t> idx(static_cast<std::size_t>(inst.n), 0);
        double mean = 0.0;
        for (;;) {
            double prob = 1.0;
            std::vector<int> outcomes(static_cast<std::size_t>(inst.n));
            for (int i = 0; i < inst.n; ++i) {
                prob *= inst.dists[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]].second;
                outcomes[static_cast<std::size_t>(i)] = static_cast<int>(idx[static_cast<std::size_t>(i)]);
            }
            std::uint32_t probed = policy.drive(outcomes);
            auto it = set_value.find(probed);
            if (it == set_value.end())
                it = set_value.emplace(probed, exact_set_value(inst, probed)).first;
            mean += prob * it->second;
            std::size_t pos = 0;
            while (pos < static_cast<std::size_t>(inst.n)) {
                if (++idx[pos] < inst.dists[pos].size()) break;
                idx[pos] = 0;
                ++pos;
            }
            if (pos == static_cast<std::size_t>(inst.n)) break;
        }
        return {mean, 0.0};
    }

    // Monte Carlo with one interleaved (X, Xbar) stream per item
    double sum = 0.0, sum2 = 0.0;
    for (long s = 0; s < mc; ++s) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
        std::vector<int> real(static_cast<std::size_t>(inst.n)), hall(static_cast<std::size_t>(inst.n));
        for (int i = 0; i < inst.n; ++i) {
            real[static_cast<std::size_t>(i)] = draw_outcome(inst.dists[static_cast<std::size_t>(i)], rng);
            hall[static_cast<std::size_t>(i)] = draw_outcome(inst.dists[static_cast<std::size_t>(i)], rng);
        }
        std::uint32_t probed = policy.drive(hall);
        Vec x(static_cast<std::size_t>(inst.n), 0.0);
        for (int i = 0; i < inst.n; ++i)
            if ((probed >> i) & 1u)
                x[static_cast<std::size_t>(i)] =
                    inst.dists[static_cast<std::size_t>(i)][static_cast<std::size_t>(real[static_cast<std::size_t>(i)])].first;
        double val = inst.objective.value(x);
        sum += val;
        sum2 += val * val;
    }
    double mean = sum / double(mc);
    double se = std::sqrt(std::max(0.0, sum2 / double(mc) - mean * mean) / double(mc));
    return {mean, se};
}

CertReport decoupling_check(const TangentSpec& gen, const Norm& norm, double p, long mc,
                            std::uint64_t seed, double envelope) {
    if (mc < 1) throw std::invalid_argument("need at least one path");
    const int d = norm.dim();
    std::optional<AdaptivePolicy> policy;
    if (gen.kind == TangentSpec::Kind::Probing) {
        if (!gen.instance) throw std::invalid_argument("probing generator needs an instance");
        if (gen.instance->objective.dim() != d)
            throw std::invalid_argument("norm/instance dimension mismatch");
        policy = adaptive_opt(*gen.instance);
    } else if (gen.dim != d) {
        throw std::invalid_argument("norm/generator dimension mismatch");
    }

    double real_sum = 0.0, dec_sum = 0.0;
    for (long s = 0; s < mc; ++s) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
        Vec u(static_cast<std::size_t>(d), 0.0), ub(static_cast<std::size_t>(d), 0.0);
        switch (gen.kind) {
        case TangentSpec::Kind::Iid:
            for (int t = 0; t < gen.horizon; ++t) {
                int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
                u[static_cast<std::size_t>(i)] += rng.uniform();
                int ib = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
                ub[static_cast<std::size_t>(ib)] += rng.uniform();
            }
            break;
        case TangentSpec::Kind::AdversarialMax:
            for (int t = 0; t < gen.horizon; ++t) {
                // the adversary concentrates on the coordinate where the real
                // running sum is largest; the decoupled copy cannot follow
                int imax = 0;
                for (int i = 1; i < d; ++i)
                    if (u[static_cast<std::size_t>(i)] > u[static_cast<std::size_t>(imax)]) imax = i;
                double v = rng.uniform() < 0.5 ? 1.0 : 0.0;
                double vb = rng.uniform() < 0.5 ? 1.0 : 0.0;
                u[static_cast<std::size_t>(imax)] += v;
                ub[static_cast<std::size_t>(imax)] += vb;
            }
            break;
        case TangentSpec::Kind::Probing: {
            const ProbingInstance& pi = *gen.instance;
            std::vector<int> real(static_cast<std::size_t>(pi.n)), hall(static_cast<std::size_t>(pi.n));
            for (int i = 0; i < pi.n; ++i) {
                real[static_cast<std::size_t>(i)] = draw_outcome(pi.dists[static_cast<std::size_t>(i)], rng);
                hall[static_cast<std::size_t>(i)] = draw_outcome(pi.dists[static_cast<std::size_t>(i)], rng);
            }
            std::uint32_t probed = policy->drive(real);
            for (int i = 0; i < pi.n; ++i)
                if ((probed >> i) & 1u) {
                    u[static_cast<std::size_t>(i)] +=
                        pi.dists[static_cast<std::size_t>(i)][static_cast<std::size_t>(real[static_cast<std::size_t>(i)])].first;
                    ub[static_cast<std::size_t>(i)] +=
                        pi.dists[static_cast<std::size_t>(i)][static_cast<std::size_t>(hall[static_cast<std::size_t>(i)])].first;
                }
            break;
        }
        }
        real_sum += norm.value(u);
        dec_sum += norm.value(ub);
    }
    double real_mean = real_sum / double(mc), dec_mean = dec_sum / double(mc);

    CertReport rep;
    rep.property = CertProperty::Decoupling;
    rep.samples = mc;
    rep.seed = seed;
    rep.tolerance = 0.0;
    double implied = dec_mean > 0.0 ? real_mean / (p * dec_mean)
                                    : (real_mean > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.worst_violation = implied - envelope;
    rep.passed = rep.worst_violation <= 0.0;
    rep.params = {{"p", p},
                  {"envelope", envelope},
                  {"real_mean", real_mean},
                  {"decoupled_mean", dec_mean},
                  {"implied_constant", implied}};
    if (!rep.passed) rep.witness = rep.params;
    return rep;
}

} // namespace supernorm
