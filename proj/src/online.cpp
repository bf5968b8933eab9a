#include "supernorm/online.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "supernorm/rng.hpp"

namespace supernorm {

std::string format_double17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string RunTrace::to_csv(const nlohmann::json& config) const {
    std::ostringstream os;
    os << "# supernorm-csv v1\n";
    os << "# config " << config.dump() << "\n";
    os << "# seed " << seed << "\n";
    os << "step,decision,objective_value,feasible,cumulative_time\n";
    for (const auto& r : rows)
        os << r.step << "," << r.decision << "," << format_double17(r.objective) << ","
           << (r.feasible ? 1 : 0) << "," << format_double17(r.time) << "\n";
    return os.str();
}

// ----- load balancing --------------------------------------------------------

void LoadBalanceInstance::validate() const {
    if (T != static_cast<long>(sizes.size())) throw std::invalid_argument("T/sizes mismatch");
    if (objective.dim() != n) throw std::invalid_argument("objective dimension != machine count");
    for (const auto& row : sizes) {
        require_dim(row, n);
        require_nonneg(row);
    }
}

RunTrace greedy_loadbalance(const LoadBalanceInstance& inst) {
    inst.validate();
    auto t0 = std::chrono::steady_clock::now();
    RunTrace trace;
    Vec load(static_cast<std::size_t>(inst.n), 0.0);
    double cur = 0.0;
    for (long t = 0; t < inst.T; ++t) {
        int best = 0;
        double best_val = 0.0;
        for (int i = 0; i < inst.n; ++i) {
            Vec cand(load);
            cand[static_cast<std::size_t>(i)] += inst.sizes[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
            double v = inst.objective.value(cand);
            if (i == 0 || v < best_val) {
                best = i;
                best_val = v;
            }
        }
        load[static_cast<std::size_t>(best)] +=
            inst.sizes[static_cast<std::size_t>(t)][static_cast<std::size_t>(best)];
        cur = best_val;
        trace.rows.push_back({t, "machine=" + std::to_string(best), cur, true, double(t + 1)});
    }
    trace.summary = {{"final_cost", cur}, {"loads", load}};
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return trace;
}

double brute_opt_loadbalance(const LoadBalanceInstance& inst) {
    inst.validate();
    double combos = std::pow(double(inst.n), double(inst.T));
    if (combos > 1e7) throw std::invalid_argument("enumeration budget exceeded (n^T > 1e7)");
    const long total = static_cast<long>(combos + 0.5);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> assign(static_cast<std::size_t>(inst.T), 0);
    Vec load(static_cast<std::size_t>(inst.n));
    for (long code = 0; code < total; ++code) {
        long c = code;
        std::fill(load.begin(), load.end(), 0.0);
        for (long t = 0; t < inst.T; ++t) {
            int i = static_cast<int>(c % inst.n);
            c /= inst.n;
            load[static_cast<std::size_t>(i)] +=
                inst.sizes[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
        }
        best = std::min(best, inst.objective.value(load));
    }
    return best;
}

// ----- covering ----------------------------------------------------------------

int CoveringInstance::total_partition_size() const {
    int s = 0;
    for (const auto& part : partitions) s += static_cast<int>(part.size());
    return s;
}

void CoveringInstance::validate() const {
    if (partitions.size() != inners.size())
        throw std::invalid_argument("one restriction set per inner norm required");
    if (outer.dim() != static_cast<int>(inners.size()))
        throw std::invalid_argument("outer norm dimension != number of inner norms");
    const int n = n_vars();
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (std::size_t l = 0; l < partitions.size(); ++l) {
        if (static_cast<int>(partitions[l].size()) != inners[l].dim())
            throw std::invalid_argument("inner norm dimension != restriction set size");
        for (int i : partitions[l]) {
            if (i < 0 || i >= n) throw std::invalid_argument("restriction index out of range");
            ++seen[static_cast<std::size_t>(i)];
        }
    }
    for (int c : seen)
        if (c != 1)
            throw std::invalid_argument(
                "restriction sets must partition the variables (apply reduce_to_partition)");
    for (const auto& row : rows) {
        require_dim(row, n);
        for (double v : row)
            if (v < 0.0 || v > 1.0) throw std::invalid_argument("row entries must lie in [0,1]");
    }
    if (step <= 0.0) throw std::invalid_argument("step must be positive");
}

CoveringInstance reduce_to_partition(const CoveringInstance& inst) {
    const int n = inst.n_vars();
    // memberships of each original variable
    std::vector<std::vector<int>> member(static_cast<std::size_t>(n));
    for (std::size_t l = 0; l < inst.partitions.size(); ++l)
        for (int i : inst.partitions[l]) member[static_cast<std::size_t>(i)].push_back(int(l));
    for (int i = 0; i < n; ++i)
        if (member[static_cast<std::size_t>(i)].empty())
            throw std::invalid_argument("variable outside every restriction set has no cost");

    // duplicated variable (i, l) for each membership; the copy list of each
    // original variable must follow the same order as member[i]
    std::vector<std::vector<int>> new_index(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> new_partitions(inst.partitions.size());
    int nn = 0;
    for (int i = 0; i < n; ++i)
        for (int l : member[static_cast<std::size_t>(i)]) {
            new_index[static_cast<std::size_t>(i)].push_back(nn);
            new_partitions[static_cast<std::size_t>(l)].push_back(nn);
            ++nn;
        }

    CoveringInstance out;
    out.outer = inst.outer;
    out.inners = inst.inners;
    out.partitions = std::move(new_partitions);
    out.delta = inst.delta;
    out.step = inst.step;

    // copy-selector constraints, enumerated over the row's support only
    for (const auto& row : inst.rows) {
        std::vector<int> supp;
        for (int i = 0; i < n; ++i)
            if (row[static_cast<std::size_t>(i)] > 0.0) supp.push_back(i);
        std::vector<std::size_t> selector(supp.size(), 0);
        for (;;) {
            Vec nr(static_cast<std::size_t>(nn), 0.0);
            for (std::size_t s = 0; s < supp.size(); ++s) {
                int i = supp[s];
                int copy = new_index[static_cast<std::size_t>(i)][selector[s]];
                nr[static_cast<std::size_t>(copy)] = row[static_cast<std::size_t>(i)];
            }
            out.rows.push_back(std::move(nr));
            // odometer over selector choices
            std::size_t pos = 0;
            while (pos < supp.size()) {
                if (++selector[pos] < member[static_cast<std::size_t>(supp[pos])].size()) break;
                selector[pos] = 0;
                ++pos;
            }
            if (pos == supp.size()) break;
        }
    }
    return out;
}

namespace {

// composed objective Psi(y) = (1/p') |F(y)|^{p'} with F(y) = (f_l(y|S_l))_l
struct ComposedPsi {
    const CoveringInstance& inst;
    double p_prime;

    explicit ComposedPsi(const CoveringInstance& ci) : inst(ci) {
        // the analysis assumes p' >= 2; smaller certified exponents are
        // valid at 2 as well (supermodularity is monotone in p)
        p_prime = 2.0;
        if (inst.outer.supermod_p()) p_prime = std::max(2.0, *inst.outer.supermod_p());
    }

    Vec inner_values(const Vec& y) const {
        Vec f(inst.inners.size());
        for (std::size_t l = 0; l < inst.inners.size(); ++l) {
            Vec sub(inst.partitions[l].size());
            for (std::size_t t = 0; t < sub.size(); ++t)
                sub[t] = y[static_cast<std::size_t>(inst.partitions[l][t])];
            f[l] = inst.inners[l].value(sub);
        }
        return f;
    }

    double outer_value(const Vec& y) const { return inst.outer.value(inner_values(y)); }

    double psi(const Vec& y) const {
        double v = outer_value(y);
        return std::pow(v, p_prime) / p_prime;
    }

    // grad_i Psi = |F|^{p'-1} * grad_l |.|(F) * grad_i f_l,  i in S_l
    Vec psi_grad(const Vec& y) const {
        Vec g(y.size(), 0.0);
        Vec f = inner_values(y);
        if (is_zero(f)) return g;
        double outer_val = inst.outer.value(f);
        Vec outer_grad = inst.outer.gradient(f);
        double c = std::pow(outer_val, p_prime - 1.0);
        for (std::size_t l = 0; l < inst.inners.size(); ++l) {
            if (outer_grad[l] == 0.0) continue;
            Vec sub(inst.partitions[l].size());
            bool zero = true;
            for (std::size_t t = 0; t < sub.size(); ++t) {
                sub[t] = y[static_cast<std::size_t>(inst.partitions[l][t])];
                zero = zero && sub[t] == 0.0;
            }
            if (zero) continue; // f_l contributes nothing yet; +delta covers the start
            Vec gi = inst.inners[l].gradient(sub);
            for (std::size_t t = 0; t < sub.size(); ++t)
                g[static_cast<std::size_t>(inst.partitions[l][t])] = c * outer_grad[l] * gi[t];
        }
        return g;
    }
};

} // namespace

double covering_cost(const CoveringInstance& inst, const Vec& y) {
    return ComposedPsi(inst).outer_value(y);
}

RunTrace solve_cover(const CoveringInstance& inst) {
    inst.validate();
    auto t0 = std::chrono::steady_clock::now();
    const int n = inst.n_vars();
    int d = 0;
    for (const auto& part : inst.partitions) d = std::max(d, static_cast<int>(part.size()));
    for (const auto& row : inst.rows) {
        int supp = 0;
        for (double v : row) supp += v > 0.0;
        d = std::max(d, supp);
    }
    ComposedPsi psi(inst);

    // delta from the cheapest single-coordinate satisfaction of row 1
    double delta = inst.delta;
    if (delta <= 0.0 && !inst.rows.empty()) {
        double cheapest = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double a = inst.rows[0][static_cast<std::size_t>(i)];
            if (a <= 0.0) continue;
            cheapest = std::min(cheapest, psi.psi(unit(n, i, 1.0 / a)));
        }
        delta = std::isfinite(cheapest) && cheapest > 0.0 ? 1e-3 * cheapest : 1e-6;
    }

    RunTrace trace;
    Vec x(static_cast<std::size_t>(n), 0.0);
    Vec dual_integral(static_cast<std::size_t>(n), 0.0); // diagnostic: int A(tau) dtau
    std::vector<Vec> snapshots; // x at the end of each round
    double tau = 0.0;
    bool overshoot_flag = false;
    for (std::size_t r = 0; r < inst.rows.size(); ++r) {
        const Vec& row = inst.rows[r];
        long guard = 0;
        while (dot(row, x) < 1.0) {
            if (++guard > 100000000L) throw std::runtime_error("covering failed to converge");
            Vec g = psi.psi_grad(x);
            Vec rate(static_cast<std::size_t>(n), 0.0);
            double slack_rate = 0.0;
            for (int i = 0; i < n; ++i) {
                double a = row[static_cast<std::size_t>(i)];
                if (a <= 0.0) continue;
                rate[static_cast<std::size_t>(i)] =
                    a * (x[static_cast<std::size_t>(i)] + 1.0 / d) /
                    (g[static_cast<std::size_t>(i)] + delta);
                slack_rate += a * rate[static_cast<std::size_t>(i)];
            }
            // cap relative coordinate moves at one step's worth, so the
            // discrete path tracks the continuous dynamics; the cost-time
            // rate bound is first-order and large jumps from x = 0 would
            // break it through curvature
            double h = inst.step;
            for (int i = 0; i < n; ++i) {
                double ri = rate[static_cast<std::size_t>(i)];
                if (ri > 0.0)
                    h = std::min(h, inst.step * (x[static_cast<std::size_t>(i)] + 1.0 / d) / ri);
            }
            // halve further while the step would jump past the constraint by
            // more than one step's worth; take the exact clip when tiny
            double cur = dot(row, x);
            while (h > inst.step * 1e-9 && cur + h * slack_rate > 1.0 + h) h *= 0.5;
            if (cur + h * slack_rate > 1.0 + h) h = (1.0 - cur) / slack_rate + 1e-15;
            add_in_place(x, rate, h);
            add_in_place(dual_integral, row, h);
            tau += h;
        }
        if (dot(row, x) > 1.0 + 10.0 * inst.step) overshoot_flag = true;
        trace.rows.push_back({static_cast<long>(r), "row", psi.outer_value(x), true, tau});
        snapshots.push_back(x);
    }
    bool feasible = true;
    for (const auto& row : inst.rows) feasible = feasible && dot(row, x) >= 1.0 - 10.0 * inst.step;
    trace.summary = {{"x", x},
                     {"x_rows", snapshots},
                     {"psi_final", psi.psi(x)},
                     {"tau_final", tau},
                     {"cost", psi.outer_value(x)},
                     {"delta", delta},
                     {"d", d},
                     {"p_prime", psi.p_prime},
                     {"feasible", feasible},
                     {"overshoot_flagged", overshoot_flag},
                     {"dual_integral", dual_integral}};
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return trace;
}

double offline_opt_cover(const CoveringInstance& inst, long budget) {
    inst.validate();
    const int n = inst.n_vars();
    if (n > 6) return offline_opt_cover_subgradient(inst, budget);
    ComposedPsi psi(inst);
    double rho = 1.0;
    for (const auto& row : inst.rows)
        for (double v : row)
            if (v > 0.0) rho = std::max(rho, 1.0 / v);
    const long levels = static_cast<long>(std::ceil(rho * double(budget))) + 1;
    if (std::pow(double(levels), double(n)) > 2e8)
        throw std::invalid_argument("grid budget too large; use the subgradient mode");
    Vec x(static_cast<std::size_t>(n), 0.0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<long> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] = double(idx[static_cast<std::size_t>(i)]) / double(budget);
        bool ok = true;
        for (const auto& row : inst.rows) ok = ok && dot(row, x) >= 1.0;
        if (ok) best = std::min(best, psi.outer_value(x));
        int pos = 0;
        while (pos < n) {
            if (++idx[static_cast<std::size_t>(pos)] < levels) break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    if (!std::isfinite(best)) throw std::runtime_error("no feasible grid point (infeasible instance)");
    return best;
}

double offline_opt_cover_subgradient(const CoveringInstance& inst, long budget) {
    inst.validate();
    const int n = inst.n_vars();
    ComposedPsi psi(inst);
    double rho = 1.0;
    for (const auto& row : inst.rows)
        for (double v : row)
            if (v > 0.0) rho = std::max(rho, 1.0 / v);
    Vec x(static_cast<std::size_t>(n), rho); // feasible start
    auto project = [&](Vec& y) {
        for (auto& v : y) v = std::max(v, 0.0);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& row : inst.rows) worst = std::min(worst, dot(row, y));
        if (worst < 1.0) {
            if (worst <= 0.0) {
                y.assign(y.size(), rho);
                return;
            }
            for (auto& v : y) v /= worst; // per-constraint scaling
        }
    };
    project(x);
    double best = psi.outer_value(x);
    Vec xb = x;
    Rng rng(1234);
    for (long it = 1; it <= 10 * budget; ++it) {
        Vec g;
        try {
            Vec jittered(x);
            for (auto& v : jittered) v += 1e-9 * rng.uniform();
            g = [&] {
                // subgradient of |F(y)|
                ComposedPsi local(inst);
                Vec f = local.inner_values(jittered);
                Vec og = inst.outer.gradient(f);
                Vec out(jittered.size(), 0.0);
                for (std::size_t l = 0; l < inst.inners.size(); ++l) {
                    Vec sub(inst.partitions[l].size());
                    for (std::size_t t = 0; t < sub.size(); ++t)
                        sub[t] = jittered[static_cast<std::size_t>(inst.partitions[l][t])];
                    if (is_zero(sub)) continue;
                    Vec gi = inst.inners[l].gradient(sub);
                    for (std::size_t t = 0; t < sub.size(); ++t)
                        out[static_cast<std::size_t>(inst.partitions[l][t])] = og[l] * gi[t];
                }
                return out;
            }();
        } catch (const std::exception&) {
            break;
        }
        double eta = rho / std::sqrt(double(it));
        add_in_place(x, g, -eta);
        project(x);
        double v = psi.outer_value(x);
        if (v < best) {
            best = v;
            xb = x;
        }
    }
    return best;
}

// ----- packing -----------------------------------------------------------------

void PackingInstance::validate() const {
    if (T != static_cast<long>(sizes.size())) throw std::invalid_argument("T/sizes mismatch");
    if (static_cast<long>(values.size()) != T) throw std::invalid_argument("values/T mismatch");
    if (p_norm.dim() != n) throw std::invalid_argument("gauge norm dimension != n");
    for (double c : values)
        if (c <= 0.0) throw std::invalid_argument("item values must be positive");
    for (const auto& col : sizes) {
        require_dim(col, n);
        require_nonneg(col);
        if (is_zero(col))
            throw std::invalid_argument("item with all-zero sizes makes the problem unbounded");
    }
    if (approx_norm && approx_norm->dim() != n)
        throw std::invalid_argument("approximant dimension mismatch");
}

double PackingInstance::width() const {
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (long t = 0; t < T; ++t)
        for (int i = 0; i < n; ++i) {
            double a = sizes[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
            if (a <= 0.0) continue;
            double e = p_norm.value(unit(n, i));
            if (e <= 0.0) continue;
            double r = a * e / values[static_cast<std::size_t>(t)];
            hi = std::max(hi, alpha * r);
            lo = std::min(lo, r);
        }
    if (!(lo > 0.0) || hi <= 0.0) throw std::invalid_argument("degenerate width");
    return hi / lo;
}

RunTrace solve_pack(const PackingInstance& inst, std::uint64_t seed) {
    inst.validate();
    auto t0 = std::chrono::steady_clock::now();
    const Norm& work = inst.approx_norm ? *inst.approx_norm : inst.p_norm;
    if (!work.supermod_p())
        throw std::invalid_argument("packing needs a supermodularity parameter on the norm");
    const double p = std::max(2.0, *work.supermod_p());

    double rho = 1.0, opt_est, beta;
    if (inst.opt_estimate) {
        opt_est = inst.opt_estimate->first;
        beta = std::max(1.0, inst.opt_estimate->second);
    } else {
        rho = inst.rho_bound ? *inst.rho_bound : inst.width();
        // first-item estimate: OPT~ = c_1 / (n rho a_{1,k} |e_k|_P)
        int k = -1;
        for (int i = 0; i < inst.n; ++i)
            if (inst.sizes[0][static_cast<std::size_t>(i)] > 0.0) {
                k = i;
                break;
            }
        double ek = inst.p_norm.value(unit(inst.n, k));
        opt_est = inst.values[0] /
                  (double(inst.n) * rho * inst.sizes[0][static_cast<std::size_t>(k)] * ek);
        beta = std::pow(double(inst.n) * rho, 2.0);
    }

    const double delta = (p - 1.0 <= std::log(beta)) ? std::exp(p - 1.0) : beta;
    const long guesses = std::max<long>(1, static_cast<long>(std::ceil(std::log(beta) / std::log(delta))));
    Rng rng(seed);
    const long pick = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(guesses)));
    const double I = std::pow(delta, double(pick));
    const double lambda = I * opt_est / beta;

    RunTrace trace;
    trace.seed = seed;
    Vec S(static_cast<std::size_t>(inst.n), 0.0); // accumulated sizes sum_t a_t x_t
    bool stopped = false;
    double total_value = 0.0;
    for (long t = 0; t < inst.T; ++t) {
        const Vec& a = inst.sizes[static_cast<std::size_t>(t)];
        const double c = inst.values[static_cast<std::size_t>(t)];
        Vec ahat = scale(a, 1.0 / c); // unit-value normalization
        double play = 0.0;
        if (!stopped) {
            // maximize xi - [Psi(S + xi ahat) - Psi(S)] (concave in xi) by
            // bisection on the derivative
            auto dphi = [&](double xi) {
                Vec z = add(S, scale(ahat, xi));
                double nv = work.value(z);
                if (nv <= 0.0) return 1.0;
                Vec g = work.gradient(z);
                return 1.0 - lambda * p * std::pow(nv, p - 1.0) * dot(g, ahat);
            };
            if (dphi(1e-12) > 0.0) {
                double hi = 1.0;
                int guard = 0;
                while (dphi(hi) > 0.0 && guard++ < 200) hi *= 2.0;
                double lo = 0.0;
                for (int it = 0; it < 100; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (dphi(mid) > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                play = 0.5 * (lo + hi);
            }
            if (play > 0.0) {
                Vec cand = add(S, scale(ahat, play));
                if (inst.p_norm.value(cand) > 1.0) {
                    // safety stop: from the first violating step on, play 0
                    play = 0.0;
                    stopped = true;
                } else {
                    S = cand;
                    total_value += play; // unit values: profit equals play
                }
            }
        }
        trace.rows.push_back({t, "x=" + format_double17(play / c), total_value,
                              inst.p_norm.value(S) <= 1.0 + 1e-12, double(t + 1)});
    }
    trace.summary = {{"value", total_value},
                     {"gauge", inst.p_norm.value(S)},
                     {"stopped", stopped},
                     {"I", I},
                     {"delta", delta},
                     {"beta", beta},
                     {"opt_estimate", opt_est},
                     {"lambda", lambda},
                     {"rho", rho},
                     {"p", p}};
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return trace;
}

double offline_opt_pack(const PackingInstance& inst, long budget) {
    inst.validate();
    auto gauge = [&](const Vec& x) {
        Vec Ax(static_cast<std::size_t>(inst.n), 0.0);
        for (long t = 0; t < inst.T; ++t)
            add_in_place(Ax, inst.sizes[static_cast<std::size_t>(t)], x[static_cast<std::size_t>(t)]);
        return inst.p_norm.value(Ax);
    };
    // largest feasible value of coordinate t with the others fixed
    auto push_to_boundary = [&](Vec& x, long t) {
        double lo = 0.0, hi = 1.0;
        Vec y(x);
        auto ok = [&](double xv) {
            y[static_cast<std::size_t>(t)] = xv;
            return gauge(y) <= 1.0;
        };
        if (!ok(0.0)) return; // infeasible regardless of t
        int guard = 0;
        while (ok(hi) && guard++ < 100) hi *= 2.0;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (ok(mid))
                lo = mid;
            else
                hi = mid;
        }
        x[static_cast<std::size_t>(t)] = lo;
    };
    double best = 0.0;
    Rng rng(987);
    for (long start = 0; start < std::max<long>(budget, 1); ++start) {
        Vec x(static_cast<std::size_t>(inst.T));
        for (auto& v : x) v = start == 0 ? 1.0 : rng.uniform(0.01, 1.0);
        double nv = gauge(x);
        if (nv <= 0.0) continue;
        for (auto& v : x) v /= nv;
        for (int round = 0; round < 40; ++round) {
            bool moved = false;
            for (long t = 0; t < inst.T; ++t) {
                double before = x[static_cast<std::size_t>(t)];
                push_to_boundary(x, t);
                moved = moved || x[static_cast<std::size_t>(t)] > before + 1e-12;
            }
            // pairwise exchanges: the value after fixing x_t and re-pushing
            // x_u to the boundary is concave in x_t, so ternary search works
            for (long t = 0; t < inst.T; ++t)
                for (long u = 0; u < inst.T; ++u) {
                    if (t == u) continue;
                    auto value_at = [&](double xt) {
                        Vec y(x);
                        y[static_cast<std::size_t>(t)] = xt;
                        y[static_cast<std::size_t>(u)] = 0.0;
                        push_to_boundary(y, u);
                        return std::make_pair(dot(y, inst.values), y);
                    };
                    double lo = 0.0, hi = x[static_cast<std::size_t>(t)];
                    for (int it = 0; it < 50 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
                        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                        if (value_at(m1).first < value_at(m2).first)
                            lo = m1;
                        else
                            hi = m2;
                    }
                    auto [val, y] = value_at(0.5 * (lo + hi));
                    if (val > dot(x, inst.values) + 1e-10) {
                        x = y;
                        moved = true;
                    }
                }
            if (!moved) break;
        }
        best = std::max(best, dot(x, inst.values));
    }
    return best;
}

// ----- OLO ----------------------------------------------------------------------

RunTrace olo_ftpl(const Norm& dual_norm, const std::vector<Vec>& gains, double p, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("olo needs eps > 0");
    if (!dual_norm.has_analytic_gradient())
        throw std::invalid_argument("olo needs an analytic dual-norm gradient");
    const int d = dual_norm.dim();
    for (const auto& g : gains) {
        require_dim(g, d);
        for (double v : g)
            if (v < 0.0 || v > 1.0) throw std::invalid_argument("gains must lie in [0,1]^d");
    }
    // normalize |e_i|_dual = 1, rescaling coordinates if needed
    Norm h = dual_norm;
    bool rescaled = false;
    {
        std::vector<Vec> diag(static_cast<std::size_t>(d), Vec(static_cast<std::size_t>(d), 0.0));
        bool need = false;
        for (int i = 0; i < d; ++i) {
            double e = dual_norm.value(unit(d, i));
            if (e <= 0.0) throw std::invalid_argument("dual norm vanishes on a coordinate");
            if (std::abs(e - 1.0) > 1e-9) need = true;
            diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0 / e;
        }
        if (need) {
            h = Norm::linear_compose(dual_norm, diag);
            rescaled = true;
        }
    }

    auto t0 = std::chrono::steady_clock::now();
    RunTrace trace;
    Vec s(static_cast<std::size_t>(d), 0.0);
    const Vec shift = ones(d, p / eps);
    double total = 0.0;
    for (std::size_t t = 0; t < gains.size(); ++t) {
        Vec x = h.gradient(add(s, shift));
        double gain = dot(gains[t], x);
        total += gain;
        add_in_place(s, gains[t]);
        trace.rows.push_back({static_cast<long>(t), "play", total, true, double(t + 1)});
    }
    double opt = gains.empty() ? 0.0 : h.value(s);
    double bound = std::exp(-eps) * (opt - p * (h.value(ones(d)) - 1.0) / eps);
    trace.summary = {{"total_gain", total},
                     {"opt", opt},
                     {"bound", bound},
                     {"satisfied", total >= bound - 1e-9},
                     {"rescaled", rescaled},
                     {"p", p},
                     {"eps", eps}};
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return trace;
}

} // namespace supernorm
