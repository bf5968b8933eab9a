#include "supernorm/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "supernorm/rng.hpp"

namespace supernorm {

namespace {

constexpr int kBatches = 16;

struct BatchWorst {
    double violation = -std::numeric_limits<double>::infinity();
    long index = -1; // global sample index, for deterministic tie-breaks
    nlohmann::json witness;
    long skipped = 0;
};

// Runs `body(batch, first, last)` over fixed batches, possibly in parallel.
// The batch layout is independent of the thread count, so results are
// byte-identical for any SUPERNORM_THREADS.
template <typename Body>
std::vector<BatchWorst> run_batches(long samples, int threads, Body body) {
    std::vector<BatchWorst> out(kBatches);
    auto work = [&](int b) {
        long first = samples * b / kBatches;
        long last = samples * (b + 1) / kBatches;
        out[static_cast<std::size_t>(b)] = body(b, first, last);
    };
    if (threads <= 1) {
        for (int b = 0; b < kBatches; ++b) work(b);
    } else {
        std::vector<std::future<void>> fs;
        std::atomic<int> next{0};
        for (int t = 0; t < std::min(threads, kBatches); ++t)
            fs.push_back(std::async(std::launch::async, [&]() {
                for (int b = next.fetch_add(1); b < kBatches; b = next.fetch_add(1)) work(b);
            }));
        for (auto& f : fs) f.get();
    }
    return out;
}

void merge_batches(CertReport& rep, const std::vector<BatchWorst>& parts) {
    const BatchWorst* best = nullptr;
    for (const auto& b : parts) {
        rep.skipped += b.skipped;
        if (b.index < 0) continue;
        if (!best || b.violation > best->violation ||
            (b.violation == best->violation && b.index < best->index))
            best = &b;
    }
    if (best) {
        rep.worst_violation = best->violation;
        if (rep.worst_violation > rep.tolerance) rep.witness = best->witness;
    }
    rep.passed = rep.worst_violation <= rep.tolerance;
}

double safe_pow_ratio(double v, double m, double p) { return std::pow(v / m, p); }

} // namespace

std::string cert_property_name(CertProperty p) {
    switch (p) {
    case CertProperty::FourPoint: return "four_point";
    case CertProperty::GradientMonotone: return "gradient_monotone";
    case CertProperty::Hessian: return "hessian";
    case CertProperty::GradientStability: return "gradient_stability";
    case CertProperty::ApproxRatio: return "approx_ratio";
    case CertProperty::ChainCounterexample: return "chain_counterexample";
    case CertProperty::Decoupling: return "decoupling";
    }
    return "?";
}

nlohmann::json CertReport::to_json() const {
    nlohmann::json j{{"property", cert_property_name(property)},
                     {"samples", samples},
                     {"skipped", skipped},
                     {"worst_violation", worst_violation},
                     {"tolerance", tolerance},
                     {"params", params},
                     {"seed", seed},
                     {"passed", passed},
                     {"label", label}};
    if (witness) j["witness"] = *witness;
    return j;
}

std::string CertReport::one_line() const {
    std::ostringstream os;
    os << (passed ? "PASS" : "FAIL") << " " << cert_property_name(property)
       << " worst_violation=" << worst_violation << " tol=" << tolerance << " samples=" << samples;
    if (witness) os << " witness=" << witness->dump();
    return os.str();
}

int cert_threads() {
    if (const char* env = std::getenv("SUPERNORM_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return std::min(t, kBatches);
    }
    return 1;
}

CertReport check_four_point(const Norm& norm, double p, long samples, std::uint64_t seed,
                            double tol) {
    if (p < 1.0) throw std::invalid_argument("four-point check needs p >= 1");
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    CertReport rep;
    rep.property = CertProperty::FourPoint;
    rep.samples = samples;
    rep.seed = seed;
    rep.tolerance = tol;
    rep.params = {{"p", p}, {"dim", norm.dim()}, {"norm", norm.kind_name()}};

    auto parts = run_batches(samples, cert_threads(), [&](int, long first, long last) {
        BatchWorst w;
        for (long s = first; s < last; ++s) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
            Vec u = mixed_sample(rng, norm.dim(), int(s) % 3);
            Vec v = mixed_sample(rng, norm.dim(), int(s / 3) % 3);
            Vec wv = mixed_sample(rng, norm.dim(), int(s / 9) % 3);
            Vec uv = add(u, v), uw = add(u, wv), uvw = add(uv, wv);
            double m = norm.value(uvw);
            if (m <= 0.0) {
                ++w.skipped;
                continue;
            }
            // normalized slack of |u+v|^p + |u+w|^p - |u|^p - |u+v+w|^p <= 0
            double viol = safe_pow_ratio(norm.value(uv), m, p) +
                          safe_pow_ratio(norm.value(uw), m, p) -
                          safe_pow_ratio(norm.value(u), m, p) - 1.0;
            if (viol > w.violation) {
                w.violation = viol;
                w.index = s;
                w.witness = {{"u", u}, {"v", v}, {"w", wv}};
            }
        }
        return w;
    });
    merge_batches(rep, parts);
    return rep;
}

CertReport check_gradient_monotone(const Norm& norm, double p, long samples, std::uint64_t seed,
                                   double tol) {
    if (p < 1.0) throw std::invalid_argument("gradient check needs p >= 1");
    CertReport rep;
    rep.property = CertProperty::GradientMonotone;
    rep.samples = samples;
    rep.seed = seed;
    rep.tolerance = tol;
    rep.params = {{"p", p}, {"dim", norm.dim()}, {"norm", norm.kind_name()}};

    auto parts = run_batches(samples, cert_threads(), [&](int, long first, long last) {
        BatchWorst w;
        for (long s = first; s < last; ++s) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
            for (int attempt = 0; attempt < 64; ++attempt) {
                Vec u = mixed_sample(rng, norm.dim(), int(s + attempt) % 3);
                Vec v = mixed_sample(rng, norm.dim(), int(s / 3 + attempt) % 3);
                // jitter off the measure-zero tie sets
                for (auto& c : u) c += 1e-7 * rng.uniform();
                try {
                    double nu = norm.value(u), nuv = norm.value(add(u, v));
                    Vec gu = norm.gradient(u);
                    Vec guv = norm.gradient(add(u, v));
                    double cu = p * std::pow(nu, p - 1.0);
                    double cuv = p * std::pow(nuv, p - 1.0);
                    for (std::size_t i = 0; i < u.size(); ++i) {
                        double a = cu * gu[i], b = cuv * guv[i];
                        double denom = std::max({std::abs(a), std::abs(b), 1e-300});
                        double viol = (a - b) / denom;
                        if (viol > w.violation) {
                            w.violation = viol;
                            w.index = s;
                            w.witness = {{"u", u}, {"v", v}, {"i", i}};
                        }
                    }
                    break;
                } catch (const std::exception&) {
                    ++w.skipped; // gradient-undefined sample: resample
                }
            }
        }
        return w;
    });
    merge_batches(rep, parts);
    return rep;
}

double hessian_pair_slack(const Norm& norm, const Vec& x, int i, int j, double p,
                          double fd_step) {
    const auto ii = static_cast<std::size_t>(i);
    const auto jj = static_cast<std::size_t>(j);
    if (x[ii] <= 0.0 || x[jj] <= 0.0)
        throw std::invalid_argument("hessian check needs an interior point");
    // keep the central stencil inside the orthant
    const double h = std::min({fd_step * std::max(linf(x), 1e-8), x[ii], x[jj]});
    Vec y(x);
    double hess;
    if (i == j) {
        double f0 = norm.value(y);
        y[ii] = x[ii] + h;
        double fp = norm.value(y);
        y[ii] = x[ii] - h;
        double fm = norm.value(y);
        y[ii] = x[ii];
        hess = (fp - 2.0 * f0 + fm) / (h * h);
    } else {
        y[ii] = x[ii] + h;
        y[jj] = x[jj] + h;
        double fpp = norm.value(y);
        y[jj] = x[jj] - h;
        double fpm = norm.value(y);
        y[ii] = x[ii] - h;
        double fmm = norm.value(y);
        y[jj] = x[jj] + h;
        double fmp = norm.value(y);
        hess = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
    Vec g = norm.gradient(x);
    double bound = -(p - 1.0) * g[ii] * g[jj] / norm.value(x);
    double denom = std::max({std::abs(hess), std::abs(bound), 1.0});
    return (bound - hess) / denom; // positive = inequality violated
}

CertReport check_hessian(const Norm& norm, double p, long samples, double fd_step,
                         std::uint64_t seed, double tol) {
    CertReport rep;
    rep.property = CertProperty::Hessian;
    rep.samples = samples;
    rep.seed = seed;
    rep.tolerance = tol;
    rep.params = {{"p", p}, {"dim", norm.dim()}, {"norm", norm.kind_name()}, {"fd_step", fd_step}};

    auto parts = run_batches(samples, cert_threads(), [&](int, long first, long last) {
        BatchWorst w;
        for (long s = first; s < last; ++s) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
            Vec x = mixed_sample(rng, norm.dim(), int(s) % 3);
            double m = linf(x);
            if (m <= 0.0) {
                ++w.skipped;
                continue;
            }
            // the inequality is scale-invariant; normalizing to unit sup-norm
            // keeps the second differences well conditioned
            for (auto& c : x) c /= m;
            // clamp into the interior so the central stencil stays legal
            const double floor = 2.0 * fd_step;
            for (auto& c : x) c = std::max(c, floor) + 1e-7 * rng.uniform();
            for (int i = 0; i < norm.dim(); ++i)
                for (int j = i; j < norm.dim(); ++j) {
                    double viol = hessian_pair_slack(norm, x, i, j, p, fd_step);
                    if (viol > w.violation) {
                        w.violation = viol;
                        w.index = s;
                        w.witness = {{"x", x}, {"i", i}, {"j", j}};
                    }
                }
        }
        return w;
    });
    merge_batches(rep, parts);
    return rep;
}

CertReport check_gradient_stability(const Norm& norm, double p, double eps, long samples,
                                    std::uint64_t seed, double tol) {
    if (eps <= 0.0) throw std::invalid_argument("gradient stability needs eps > 0");
    if (!norm.supermod_p() || *norm.supermod_p() > p)
        throw std::invalid_argument("norm must carry supermod_p <= p");
    CertReport rep;
    rep.property = CertProperty::GradientStability;
    rep.samples = samples;
    rep.seed = seed;
    rep.tolerance = tol;
    rep.params = {{"p", p}, {"eps", eps}, {"dim", norm.dim()}, {"norm", norm.kind_name()}};

    const double thresh = (p - 1.0) / eps;
    auto psi_grad = [&](const Vec& x) -> Vec {
        if (norm.value(x) <= thresh) return Vec(x.size(), 0.0);
        return norm.gradient(x);
    };
    auto parts = run_batches(samples, cert_threads(), [&](int, long first, long last) {
        BatchWorst w;
        for (long s = first; s < last; ++s) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
            Vec x = mixed_sample(rng, norm.dim(), int(s) % 3);
            Vec y = mixed_sample(rng, norm.dim(), int(s / 3) % 3);
            double nx = norm.value(x);
            if (nx <= 0.0) {
                ++w.skipped;
                continue;
            }
            // scale so samples straddle the flat region boundary (p-1)/eps
            double target = thresh * rng.uniform(0.0, 2.5);
            Vec xs = scale(x, target / nx);
            double ny = norm.value(y);
            if (ny > 0.0) y = scale(y, thresh * rng.uniform(0.0, 1.0) / ny);

            // sandwich |x| <= Psi(x) <= |x| + (p-1)/eps is an arithmetic
            // identity of the max; re-checked here to catch regressions
            double nxs = norm.value(xs);
            double psi = std::max(thresh, nxs);
            if (psi < nxs - 1e-12 || psi > nxs + thresh + 1e-12) {
                w.violation = 1.0;
                w.index = s;
                w.witness = {{"x", xs}, {"sandwich", true}};
                continue;
            }
            Vec gx = psi_grad(xs);
            if (is_zero(gx)) continue; // flat region: inequality trivially holds
            Vec gxy = psi_grad(add(xs, y));
            double decay = std::exp(-eps * norm.value(y));
            for (std::size_t i = 0; i < gx.size(); ++i) {
                double lhs = gxy[i], rhs = decay * gx[i];
                double viol = (rhs - lhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
                if (viol > w.violation) {
                    w.violation = viol;
                    w.index = s;
                    w.witness = {{"x", xs}, {"y", y}, {"i", i}};
                }
            }
        }
        return w;
    });
    merge_batches(rep, parts);
    return rep;
}

ApproxRatio estimate_approx_ratio(const Norm& a, const Norm& b, long samples,
                                  std::uint64_t seed) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    ApproxRatio r;
    r.samples = samples;
    r.lo = std::numeric_limits<double>::infinity();
    for (long s = 0; s < samples; ++s) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
        Vec x = mixed_sample4(rng, a.dim(), int(s) % 4);
        double av = a.value(x);
        if (av <= 0.0) {
            ++r.skipped;
            continue;
        }
        double ratio = b.value(x) / av;
        r.lo = std::min(r.lo, ratio);
        r.hi = std::max(r.hi, ratio);
    }
    return r;
}

CertReport chain_counterexample(int m, const Norm& candidate, double p, double alpha) {
    if (candidate.dim() != m * m)
        throw std::invalid_argument("candidate must live on m^2 coordinates");
    // cell (row i, column k) -> coordinate k*m + i (columns are the blocks)
    auto cell = [m](int i, int k) { return static_cast<std::size_t>(k * m + i); };

    // greedy column ordering: column of step i minimizes f(D_{i-1} + {(i,k)})
    std::vector<int> order;
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    Vec diag(static_cast<std::size_t>(m * m), 0.0);
    Vec fD{0.0}; // f(D_0), f(D_1), ...
    fD.reserve(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i < m; ++i) {
        int best = -1;
        double best_val = 0.0;
        for (int k = 0; k < m; ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            Vec probe(diag);
            probe[cell(i, k)] = 1.0;
            double v = candidate.value(probe);
            if (best < 0 || v < best_val) {
                best = k;
                best_val = v;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        order.push_back(best);
        diag[cell(i, best)] = 1.0;
        fD.push_back(candidate.value(diag));
    }
    const int last_col = order.back();
    Vec col(static_cast<std::size_t>(m * m), 0.0);
    for (int i = 0; i < m; ++i) col[cell(i, last_col)] = 1.0;
    const double f_Dm = fD.back();
    const double f_Sm = candidate.value(col);

    // telescoped chain conclusion for a genuinely p-supermodular candidate
    const bool chain_holds = f_Dm <= (p / std::log(2.0)) * f_Sm * (1.0 + 1e-9);

    CertReport rep;
    rep.property = CertProperty::ChainCounterexample;
    rep.samples = m;
    rep.label = "exact";
    rep.tolerance = 0.0;
    // positive means the necessary condition alpha p >= ln(2) m fails: refuted
    rep.worst_violation = std::log(2.0) * m - alpha * p;
    rep.passed = rep.worst_violation <= 0.0;
    rep.params = {{"m", m},
                  {"p", p},
                  {"alpha", alpha},
                  {"f_diagonal", f_Dm},
                  {"f_column", f_Sm},
                  {"chain_bound_holds", chain_holds},
                  {"column_order", order}};
    if (!rep.passed)
        rep.witness = {{"reason", "alpha*p < ln(2)*m"},
                       {"alpha_p", alpha * p},
                       {"ln2_m", std::log(2.0) * m}};
    return rep;
}

} // namespace supernorm
