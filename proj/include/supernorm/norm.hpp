#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "supernorm/orlicz_function.hpp"
#include "supernorm/vec.hpp"

namespace supernorm {

// A monotone norm on the nonnegative orthant, immutable after construction.
// Every operation is pure, so instances can be shared freely across threads.
//
// eval(0) = 0 for every kind; the gradient at 0 is an error. Kinds without an
// analytic gradient (top-k, per-block max, max combinations, budget) fall
// back to central finite differences, which return a subgradient-like vector
// at tie points.
class Norm {
  public:
    enum class Kind {
        Lp,
        Topk,
        WeightedLinear,
        SumLinfBlocks,
        L1PlusL2,
        Orlicz,
        LinearCompose,
        LpCombine,
        MaxCombine,
        Smoothed,
        SymmetricApprox,
        Budget,
    };

    static constexpr double kDefaultFdStep = 1e-5; // relative to |x|_inf

    // an empty handle; every operation on it throws. Exists so instance
    // structs can be default-constructed before their norms are filled in.
    Norm() = default;

    static Norm lp(double p, int dim);
    static Norm topk(int k, int dim);
    static Norm linf(int dim) { return topk(1, dim); }
    static Norm weighted_linear(Vec weights);
    static Norm sum_linf_blocks(int block_size, int dim);
    static Norm l1_plus_l2(int dim);
    static Norm orlicz(OrliczFunction G, int dim, double tol = 1e-10);
    // x -> inner(Ax); A has inner.dim() rows and `new dim` columns, all >= 0.
    // All-zero columns are permitted but flag the result as a seminorm.
    static Norm linear_compose(const Norm& inner, const std::vector<Vec>& A);
    // x -> (sum_i (w_i f_i(x))^p)^(1/p); carries supermod_p = p when every
    // inner is p-supermodular (nonnegative sums preserve gradient
    // monotonicity of the p-th power)
    static Norm lp_combine(std::vector<Norm> inners, Vec weights, double p);
    static Norm max_combine(std::vector<Norm> inners, Vec weights);
    // x -> average over mc_samples of inner(R .* x), R_i = 1 + eps*B_i with
    // B_i drawn from a fixed C^inf bump density; deterministic given seed
    static Norm smoothed(const Norm& inner, double eps, std::uint64_t seed, int mc_samples);
    // the symmetric norm of App. D.2 whose unit ball is the budget
    // constraints sum of top 2^j coordinates <= c^j, j = 0..log2(dim)
    static Norm budget(double c, int dim);
    static Norm symmetric_approx(Norm combined, nlohmann::json meta);

    double value(const Vec& x) const;
    Vec gradient(const Vec& x, double fd_step = kDefaultFdStep) const;
    bool has_analytic_gradient() const;
    // closed-form dual norm value; only lp, weighted_linear and topk kinds
    double dual_value(const Vec& z) const;

    Kind kind() const;
    std::string kind_name() const;
    int dim() const;
    std::optional<double> supermod_p() const;
    Norm with_supermod_p(double p) const;
    bool seminorm_flagged() const;
    // re-dimensioned copy for symmetric kinds (used to pad to a power of 2)
    Norm padded(int new_dim) const;

    const std::vector<Norm>& inners() const;
    const OrliczFunction& orlicz_function() const;
    const nlohmann::json& meta() const;

    nlohmann::json to_json() const;
    static Norm from_json(const nlohmann::json& j);

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit Norm(std::shared_ptr<Impl> impl);
    const Impl& impl() const; // throws on an empty handle
};

// central finite-difference gradient with step h = fd_step * |x|_inf,
// one-sided near the boundary of the orthant
Vec fd_gradient(const Norm& norm, const Vec& x, double fd_step = Norm::kDefaultFdStep);

} // namespace supernorm
