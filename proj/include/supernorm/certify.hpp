#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "supernorm/norm.hpp"

namespace supernorm {

enum class CertProperty {
    FourPoint,
    GradientMonotone,
    Hessian,
    GradientStability,
    ApproxRatio,
    ChainCounterexample,
    Decoupling,
};

std::string cert_property_name(CertProperty p);

// Outcome of a numeric certification run. A check passes iff
// worst_violation <= tolerance; a witness is present exactly when it fails.
// Grid/sample certificates are labeled "sampled", never "proved"; closed-form
// cases are labeled "exact". Reports are a pure function of (inputs, seed).
struct CertReport {
    CertProperty property = CertProperty::FourPoint;
    long samples = 0;
    long skipped = 0; // degenerate draws that were resampled
    double worst_violation = -std::numeric_limits<double>::infinity();
    double tolerance = 0.0;
    std::optional<nlohmann::json> witness;
    nlohmann::json params;
    std::uint64_t seed = 0;
    bool passed = false;
    std::string label = "sampled";

    nlohmann::json to_json() const;
    std::string one_line() const;
};

// Worker threads for the sample batches; derived from SUPERNORM_THREADS.
// Batch seeds are fixed, so the thread count never changes the report.
int cert_threads();

// Four-point inequality of p-supermodularity on sampled triples (u, v, w):
//   |u+v+w|^p - |u+v|^p >= |u+w|^p - |u|^p,
// slack normalized by |u+v+w|^p.
CertReport check_four_point(const Norm& norm, double p, long samples, std::uint64_t seed,
                            double tol = 1e-7);

// Gradient monotonicity of |.|^p on sampled pairs (u, u+v), coordinatewise,
// using the chain rule p |.|^(p-1) grad |.|.
CertReport check_gradient_monotone(const Norm& norm, double p, long samples, std::uint64_t seed,
                                   double tol = 1e-7);

// Hessian lower bound
//   hess_ij |u| >= -(p-1) grad_i |u| grad_j |u| / |u|
// with central second differences; pair-wise over all (i, j).
CertReport check_hessian(const Norm& norm, double p, long samples, double fd_step,
                         std::uint64_t seed, double tol = 1e-4);

// slack of the Hessian inequality at one point and coordinate pair
// (positive = violated); the exact oracle behind the l1+l2 refutation
double hessian_pair_slack(const Norm& norm, const Vec& x, int i, int j, double p,
                          double fd_step = 1e-4);

// Gradient stability of Psi_eps(x) = max{(p-1)/eps, |x|}:
//   grad Psi(x+y) >= exp(-eps |y|) grad Psi(x)  coordinatewise,
// plus the sandwich |x| <= Psi_eps(x) <= |x| + (p-1)/eps.
CertReport check_gradient_stability(const Norm& norm, double p, double eps, long samples,
                                    std::uint64_t seed, double tol = 1e-6);

// min and max of eval(b, x) / eval(a, x) over mixed sparse/dense/flat/spiky
// samples; zero denominators (seminorms) are skipped and counted.
struct ApproxRatio {
    double lo = 0.0;
    double hi = 0.0;
    long samples = 0;
    long skipped = 0;
};
ApproxRatio estimate_approx_ratio(const Norm& a, const Norm& b, long samples, std::uint64_t seed);

// Column-reordering chain argument on the m x m grid of the
// sum-of-linf-blocks norm: a candidate claiming p-supermodularity and an
// alpha-approximation is refuted whenever alpha * p < ln(2) * m. The report
// also records the chain quantities evaluated on the candidate.
CertReport chain_counterexample(int m, const Norm& candidate, double p, double alpha);

} // namespace supernorm
