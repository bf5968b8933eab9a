#include "supernorm/symmetric.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "supernorm/orlicz.hpp"
#include "supernorm/rng.hpp"

namespace supernorm {

namespace {

int next_power_of_two(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

} // namespace

bool is_symmetric(const Norm& norm, int permutations, double tol, std::uint64_t seed) {
    Rng rng(seed);
    const int d = norm.dim();
    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int t = 0; t < permutations; ++t) {
        Vec x(static_cast<std::size_t>(d));
        for (auto& v : x) v = rng.uniform();
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = d - 1; i > 0; --i)
            std::swap(perm[static_cast<std::size_t>(i)],
                      perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
        Vec y(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        double a = norm.value(x), b = norm.value(y);
        if (std::abs(a - b) > tol * (1.0 + std::abs(a))) return false;
    }
    return true;
}

double TopkDecomposition::value(const Vec& x) const {
    require_dim(x, n);
    double best = 0.0;
    for (std::size_t j = 0; j < scalars.size(); ++j)
        best = std::max(best, scalars[j] * topk_sum(x, 1 << j));
    return calibration * best;
}

Norm TopkDecomposition::as_norm() const {
    std::vector<Norm> tops;
    Vec w;
    for (std::size_t j = 0; j < scalars.size(); ++j) {
        tops.push_back(Norm::topk(1 << j, n));
        w.push_back(calibration * scalars[j]);
    }
    return Norm::max_combine(std::move(tops), std::move(w));
}

nlohmann::json TopkDecomposition::to_json() const {
    return {{"n", n}, {"scalars", scalars}, {"calibration", calibration}};
}

TopkDecomposition topk_decompose(const Norm& norm, int n) {
    if (norm.dim() != n) throw std::invalid_argument("norm dimension does not match n");
    if (!is_symmetric(norm))
        throw std::invalid_argument("norm failed the sampled symmetry test");
    const int N = next_power_of_two(n);
    TopkDecomposition dec{N, {}, 1.0, N == n ? norm : norm.padded(N)};
    const int logn = static_cast<int>(std::round(std::log2(double(N))));
    for (int j = 0; j <= logn; ++j) {
        const int k = 1 << j;
        Vec flat(static_cast<std::size_t>(N), 0.0);
        std::fill(flat.begin(), flat.begin() + k, 1.0);
        dec.scalars.push_back(dec.source.value(flat) / double(k));
    }
    dec.calibration = double(logn) + 1.0;
    return dec;
}

Norm psupermodular_approx_symmetric(const Norm& norm, int n) {
    TopkDecomposition dec = topk_decompose(norm, n);
    const int N = dec.n;
    const double p = orlicz_pipeline_exponent(N);
    const double s = 2.0 * p - 1.0;
    std::vector<Norm> pieces;
    Vec weights;
    for (std::size_t j = 0; j < dec.scalars.size(); ++j) {
        pieces.push_back(approximate_orlicz_norm(topk_orlicz(1 << j), N));
        // factor 2 lifts the Orlicz surrogate above the Top-k norm pointwise
        weights.push_back(2.0 * dec.calibration * dec.scalars[j]);
    }
    Norm combined = Norm::lp_combine(std::move(pieces), std::move(weights), s);
    if (N != n) {
        // restrict back to the original coordinates via the 0/1 inclusion map
        std::vector<Vec> incl(static_cast<std::size_t>(N), Vec(static_cast<std::size_t>(n), 0.0));
        for (int i = 0; i < n; ++i)
            incl[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
        combined = Norm::linear_compose(combined, incl);
    }

    // measured distortion against the source, recorded as metadata
    Rng rng(20240);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int t = 0; t < 200; ++t) {
        Vec x = mixed_sample4(rng, n, t);
        double src = norm.value(x);
        if (src <= 0.0) continue;
        double r = combined.value(x) / src;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    nlohmann::json meta{{"decomposition", dec.to_json()},
                        {"p", p},
                        {"supermod_p", s},
                        {"source_kind", norm.kind_name()},
                        {"distortion", {{"lo", lo}, {"hi", hi}}}};
    return Norm::symmetric_approx(std::move(combined), std::move(meta));
}

} // namespace supernorm
