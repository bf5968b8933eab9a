#pragma once

#include "supernorm/norm.hpp"

namespace supernorm {

// Decomposition of a monotone symmetric norm into weighted Top-2^j norms:
//   |||x||| = calibration * max_j c_j * top_{2^j}(x),  c_j = |1_{2^j}| / 2^j.
// With the calibration factor log2(n) + 1 the sandwich
//   |x| <= |||x||| <= 2 log2(n) |x|
// holds for every monotone symmetric norm (dyadic block argument).
struct TopkDecomposition {
    int n = 0;           // dimension after padding to a power of 2
    Vec scalars;         // c_j for j = 0..log2(n)
    double calibration = 1.0;
    Norm source;         // the (padded) source norm

    double value(const Vec& x) const;
    Norm as_norm() const; // max_combine of top-2^j norms with calibrated weights
    nlohmann::json to_json() const;
};

// Verifies symmetry by sampling (20 random coordinate permutations at
// tolerance 1e-9), pads n to a power of 2, and reads the scalars off the
// norm's values on flat vectors. The sandwich is measured by tests, not
// assumed.
TopkDecomposition topk_decompose(const Norm& norm, int n);

// sampled symmetry test used by topk_decompose
bool is_symmetric(const Norm& norm, int permutations = 20, double tol = 1e-9,
                  std::uint64_t seed = 7);

// The O(log n)-supermodular approximation of a symmetric norm: replaces each
// Top-2^j norm of the decomposition with twice its Orlicz pipeline
// approximation and combines with the l_s norm, s = 2p - 1 and
// p = ceil(2 ln n) + 1. The result carries supermod_p = 2p - 1 and records
// its measured distortion against the source in the descriptor metadata.
Norm psupermodular_approx_symmetric(const Norm& norm, int n);

} // namespace supernorm
