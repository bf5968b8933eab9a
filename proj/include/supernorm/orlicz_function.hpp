#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace supernorm {

// One-dimensional Orlicz function G: convex, nondecreasing, G(0) = 0 and
// G(t) -> infinity. Three representations are supported:
//
//   closed_form   value/first/second derivative as callables (e.g. t^p)
//   hinge_sum     t -> sum_i max{0, a_i t - b_i}
//   smoothed_sum  per-hinge smooth surrogates; a hinge with b >= 1 becomes
//                 the power term 2 (2a/(b+1))^p t^p (class H), a hinge with
//                 b < 1 becomes (b^p + (a t)^p)^(1/p) - b (class L)
class OrliczFunction {
  public:
    enum class Repr { ClosedForm, HingeSum, SmoothedSum };

    struct Hinge {
        double a = 0.0;
        double b = 0.0;
    };

    struct SmoothTerm {
        bool high = false; // class H (b >= 1) vs class L (b < 1)
        double a = 0.0;
        double b = 0.0;
    };

    static OrliczFunction power(double p);
    static OrliczFunction linear() { return power(1.0); }
    static OrliczFunction custom(std::string name, std::function<double(double)> value,
                                 std::function<double(double)> d1,
                                 std::function<double(double)> d2);
    static OrliczFunction hinge_sum(std::vector<Hinge> hinges);
    static OrliczFunction smoothed_sum(std::vector<SmoothTerm> terms, double p);

    double value(double t) const;
    // first derivative; hinge sums return the right derivative at kinks
    double d1(double t) const;
    // second derivative; throws for hinge sums (not twice differentiable)
    double d2(double t) const;

    Repr repr() const;
    bool twice_differentiable() const;
    // exponent of the smoothed representation (0 otherwise)
    double smoothing_exponent() const;
    const std::vector<Hinge>& hinges() const;
    const std::vector<SmoothTerm>& terms() const;
    const std::string& name() const;

    nlohmann::json to_json() const;
    static OrliczFunction from_json(const nlohmann::json& j);

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit OrliczFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
};

} // namespace supernorm
