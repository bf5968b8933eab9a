#include "supernorm/orlicz.hpp"

#include <cmath>
#include <stdexcept>

namespace supernorm {

namespace {

// smallest t with G(t) >= target; G continuous nondecreasing with G(0) = 0.
// Doubles an upper end until G covers the target, then bisects onto the
// leftmost crossing (smallest-root convention for flat segments).
double inverse_at(const OrliczFunction& G, double target) {
    double hi = 1.0;
    int guard = 0;
    while (G.value(hi) < target) {
        hi *= 2.0;
        if (++guard > 1100)
            throw std::invalid_argument("not an Orlicz function: G never reaches its target");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (G.value(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double sum_G(const OrliczFunction& G, const Vec& x, double alpha) {
    double s = 0.0;
    for (double v : x)
        if (v > 0.0) s += G.value(v / alpha);
    return s;
}

} // namespace

double orlicz_eval(const OrliczFunction& G, const Vec& x, double tol) {
    require_nonneg(x);
    if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
    if (is_zero(x)) return 0.0;
    const double n = double(x.size());
    const double s_hi = inverse_at(G, 1.0);
    const double s_lo = inverse_at(G, 1.0 / n);
    double lo = linf(x) / s_hi; // sum >= 1 here
    double hi = l1(x) / s_lo;   // sum <= 1/n here, by convexity
    if (s_lo <= 0.0 || hi <= lo) return lo; // e.g. a single nonzero coordinate
    for (int it = 0; it < 200 && (hi - lo) > tol * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sum_G(G, x, mid) >= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Vec orlicz_grad(const OrliczFunction& G, const Vec& x, double tol) {
    if (is_zero(x)) throw std::invalid_argument("gradient undefined at the origin");
    const double nrm = orlicz_eval(G, x, tol);
    Vec g(x.size());
    double gamma = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double xt = x[i] / nrm;
        g[i] = G.d1(xt);
        gamma += xt * g[i];
    }
    if (gamma <= 0.0)
        throw std::domain_error("flat-region degenerate gradient: gamma(x) = 0");
    for (auto& v : g) v /= gamma;
    return g;
}

nlohmann::json GrowthCertificate::to_json() const {
    return {{"p", p},    {"grid", grid},   {"max_ratio", max_ratio},
            {"passed", passed}, {"label", label}};
}

GrowthCertificate growth_check(const OrliczFunction& G, double p, double t_lo, double t_hi,
                               int grid_size) {
    if (!G.twice_differentiable())
        throw std::invalid_argument("growth_check needs a twice differentiable representation");
    if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
    if (!(t_lo > 0.0 && t_hi > t_lo)) throw std::invalid_argument("need 0 < t_lo < t_hi");
    GrowthCertificate cert;
    cert.p = p;
    cert.grid.reserve(static_cast<std::size_t>(grid_size));
    const double lr = std::log(t_lo), step = (std::log(t_hi) - lr) / (grid_size - 1);
    double worst = 1.0;
    for (int i = 0; i < grid_size; ++i) {
        double t = std::exp(lr + i * step);
        cert.grid.push_back(t);
        double d1 = G.d1(t), d2 = G.d2(t);
        if (d1 <= 0.0) continue; // flat region: both sides of the condition vanish
        worst = std::max(worst, d2 * t / d1 + 1.0);
    }
    cert.max_ratio = worst;
    cert.passed = worst <= p + 1e-8;
    return cert;
}

OrliczFunction piecewise_approx(const OrliczFunction& G, int n) {
    if (n < 1) throw std::invalid_argument("piecewise_approx needs n >= 1");
    std::vector<double> t(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 1; i <= n; ++i)
        t[static_cast<std::size_t>(i)] = inverse_at(G, double(i) / double(n));
    std::vector<OrliczFunction::Hinge> hinges;
    hinges.reserve(static_cast<std::size_t>(n));
    double slope_so_far = 0.0;
    for (int i = 1; i <= n; ++i) {
        double dt = t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i - 1)];
        if (dt <= 0.0) throw std::invalid_argument("G is not strictly increasing past its flat region");
        // total slope of the interpolant on [t_{i-1}, t_i] is (1/n)/dt; the
        // new hinge contributes the increment and activates at t_{i-1}
        double a = 1.0 / (double(n) * dt) - slope_so_far;
        a = std::max(a, 0.0); // convexity makes slopes nondecreasing; clamp roundoff
        slope_so_far += a;
        hinges.push_back({a, a * t[static_cast<std::size_t>(i - 1)]});
    }
    return OrliczFunction::hinge_sum(std::move(hinges));
}

OrliczFunction smooth_hinges(const OrliczFunction& Gt, double p) {
    const auto& hinges = Gt.hinges();
    const double n = double(hinges.size());
    const double p_min = 2.0 * std::log(n) + 1.0;
    if (p < p_min)
        throw std::invalid_argument("smooth_hinges needs p >= 2 ln(#hinges) + 1 = " +
                                    std::to_string(p_min));
    std::vector<OrliczFunction::SmoothTerm> terms;
    terms.reserve(hinges.size());
    for (const auto& h : hinges) terms.push_back({h.b >= 1.0, h.a, h.b});
    return OrliczFunction::smoothed_sum(std::move(terms), p);
}

OrliczFunction topk_orlicz(int k) {
    if (k < 1) throw std::invalid_argument("topk_orlicz needs k >= 1");
    return OrliczFunction::hinge_sum({{1.0, 1.0 / double(k)}});
}

double orlicz_pipeline_exponent(int n) { return std::ceil(2.0 * std::log(double(n))) + 1.0; }

Norm approximate_orlicz_norm(const OrliczFunction& G, int n) {
    if (n < 2) throw std::invalid_argument("approximate_orlicz_norm needs n >= 2");
    const double p = orlicz_pipeline_exponent(n);
    OrliczFunction F = smooth_hinges(piecewise_approx(G, n), p);
    return Norm::orlicz(std::move(F), n).with_supermod_p(2.0 * p - 1.0);
}

} // namespace supernorm
