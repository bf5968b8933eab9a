#pragma once

#include "supernorm/norm.hpp"

namespace supernorm {

// Luxemburg value of the Orlicz norm: the alpha > 0 with
// sum_i G(x_i / alpha) = 1, solved by bisection to relative tolerance tol.
// Returns 0 for x = 0. The bracket [|x|_inf / s_hi, |x|_1 / s_lo], where
// G(s_hi) = 1 and G(s_lo) = 1/n, always contains the root.
double orlicz_eval(const OrliczFunction& G, const Vec& x, double tol = 1e-10);

// Gradient of the Orlicz norm at x != 0:
//   grad_i = G'(xt_i) / gamma(x),  xt = x / |x|_G,
//   gamma(x) = sum_l xt_l G'(xt_l).
// gamma(x) = 0 (all coordinates in G's flat region) is reported as an error.
Vec orlicz_grad(const OrliczFunction& G, const Vec& x, double tol = 1e-10);

// Sampled certificate for the growth condition G''(t) t <= (p-1) G'(t),
// which makes the Orlicz norm (2p-1)-supermodular. A grid check, not a
// proof; the label records that.
struct GrowthCertificate {
    double p = 0.0;
    std::vector<double> grid;
    double max_ratio = 0.0; // sup over grid of G''(t) t / G'(t) + 1
    bool passed = false;
    std::string label = "sampled";
    nlohmann::json to_json() const;
};

GrowthCertificate growth_check(const OrliczFunction& G, double p, double t_lo, double t_hi,
                               int grid_size);

// Piecewise-linear approximation of G by a sum of n hinges: picks
// t_0 = 0 < t_1 < ... < t_n with G(t_i) = i/n and slopes so that the hinge
// sum interpolates G at every t_i. The resulting norm satisfies
// |x|_G <= |x|_Gt <= 2 |x|_G.
OrliczFunction piecewise_approx(const OrliczFunction& G, int n);

// Smooth each hinge into its class-H/class-L surrogate. Requires
// p >= 2 ln(#hinges) + 1; the smoothed norm is within factor 12 of the hinge
// norm and the smoothed function satisfies the growth condition at p.
OrliczFunction smooth_hinges(const OrliczFunction& hinge_sum, double p);

// The single hinge G(t) = max{0, t - 1/k}, whose Orlicz norm 2-approximates
// the Top-k norm: |x|_topk / 2 <= |x|_G <= |x|_topk.
OrliczFunction topk_orlicz(int k);

// default exponent of the pipeline: ceil(2 ln n) + 1
double orlicz_pipeline_exponent(int n);

// Full three-stage pipeline: piecewise hinges, then hinge smoothing at
// p = ceil(2 ln n) + 1. The result is an Orlicz norm descriptor carrying
// supermod_p = 2p - 1 and pointwise within factor 24 of |.|_G.
Norm approximate_orlicz_norm(const OrliczFunction& G, int n);

} // namespace supernorm
