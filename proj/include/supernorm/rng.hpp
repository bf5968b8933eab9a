#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace supernorm {

// Deterministic splitmix64 stream. Used everywhere instead of <random> so
// results are reproducible across platforms and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

// Stable derivation of sub-seeds, so per-sample / per-batch streams do not
// depend on how much randomness earlier samples consumed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    return r.next_u64();
}

// Sample from the C^inf bump density on [0,1], pdf proportional to
// exp(-1/(t(1-t))), by rejection from the uniform.
inline double bump_sample(Rng& rng) {
    for (;;) {
        double t = rng.uniform();
        if (t <= 0.0 || t >= 1.0) continue;
        double u = rng.uniform();
        // envelope: pdf peaks at t = 1/2 with value exp(-4)
        if (u <= std::exp(4.0 - 1.0 / (t * (1.0 - t)))) return t;
    }
}

enum class SampleShape { Uniform, Sparse, Spiky, Flat };

// Mixed sampling distribution used by the certification checks: a third
// uniform on [0,1]^n, a third sparse (each coordinate zero w.p. 3/4), and a
// third spiky (one coordinate inflated by n). Counterexamples to norm
// inequalities live at the sparse/spiky extremes.
inline std::vector<double> mixed_sample(Rng& rng, int dim, int which3) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    switch (which3 % 3) {
    case 0:
        for (auto& v : x) v = rng.uniform();
        break;
    case 1:
        for (auto& v : x) v = (rng.uniform() < 0.75) ? 0.0 : rng.uniform();
        break;
    default: {
        for (auto& v : x) v = rng.uniform();
        x[rng.below(static_cast<std::uint64_t>(dim))] *= double(dim);
        break;
    }
    }
    return x;
}

// Four-way variant (adds flat vectors) for approximation-ratio sampling.
inline std::vector<double> mixed_sample4(Rng& rng, int dim, int which4) {
    if (which4 % 4 == 3) {
        double c = rng.uniform(0.05, 1.0);
        return std::vector<double>(static_cast<std::size_t>(dim), c);
    }
    return mixed_sample(rng, dim, which4 % 3);
}

} // namespace supernorm
