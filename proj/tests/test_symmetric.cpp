#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "supernorm/certify.hpp"
#include "supernorm/orlicz.hpp"
#include "supernorm/rng.hpp"
#include "supernorm/symmetric.hpp"

using namespace supernorm;

namespace {

std::vector<Norm> symmetric_sources(int n) {
    return {
        Norm::lp(1.0, n),
        Norm::lp(2.0, n),
        Norm::linf(n),
        Norm::topk(std::max(2, n / 2), n),
        Norm::l1_plus_l2(n),
        Norm::max_combine({Norm::linf(n), Norm::lp(1.0, n)}, {1.0, 1.0 / 3.0}),
    };
}

} // namespace

TEST_CASE("symmetry test accepts symmetric norms and rejects others") {
    CHECK(is_symmetric(Norm::lp(2, 5)));
    CHECK(is_symmetric(Norm::topk(2, 5)));
    CHECK_FALSE(is_symmetric(Norm::weighted_linear({1, 2, 3, 4})));
    CHECK_THROWS_AS(topk_decompose(Norm::weighted_linear({1, 2, 3, 4}), 4),
                    std::invalid_argument);
}

TEST_CASE("topk_decompose scalars") {
    // l1: every scalar is 1 and the raw max of top-2^j norms is exact
    auto dec = topk_decompose(Norm::lp(1.0, 4), 4);
    REQUIRE(dec.scalars.size() == 3); // j = 0, 1, 2
    for (double c : dec.scalars) CHECK(c == doctest::Approx(1.0));
    Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        Vec x(4);
        for (auto& v : x) v = rng.uniform();
        double raw = 0.0;
        for (std::size_t j = 0; j < dec.scalars.size(); ++j)
            raw = std::max(raw, dec.scalars[j] * topk_sum(x, 1 << j));
        CHECK(raw == doctest::Approx(Norm::lp(1.0, 4).value(x)));
    }

    // linf: c_j = 2^{-j}; on a single spike the top-1 term is exact
    auto dinf = topk_decompose(Norm::linf(4), 4);
    for (std::size_t j = 0; j < dinf.scalars.size(); ++j)
        CHECK(dinf.scalars[j] == doctest::Approx(std::pow(0.5, double(j))));
    double raw = 0.0;
    for (std::size_t j = 0; j < dinf.scalars.size(); ++j)
        raw = std::max(raw, dinf.scalars[j] * topk_sum({1, 0, 0, 0}, 1 << j));
    CHECK(raw == doctest::Approx(1.0));

    // l2 on the flat vector: c_1 = sqrt(2)/2, c_2 = 1/2, raw value 2
    auto d2 = topk_decompose(Norm::lp(2.0, 4), 4);
    CHECK(d2.scalars[1] == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(d2.scalars[2] == doctest::Approx(0.5));
    double raw2 = 0.0;
    for (std::size_t j = 0; j < d2.scalars.size(); ++j)
        raw2 = std::max(raw2, d2.scalars[j] * topk_sum({1, 1, 1, 1}, 1 << j));
    CHECK(raw2 == doctest::Approx(2.0));
}

TEST_CASE("decomposition sandwich over the built-in symmetric norms") {
    for (int n : {4, 8}) {
        const double upper = 2.0 * std::log2(double(n));
        Rng rng(321);
        for (const auto& norm : symmetric_sources(n)) {
            auto dec = topk_decompose(norm, n);
            Norm as_norm = dec.as_norm();
            for (int t = 0; t < 200; ++t) {
                Vec x = mixed_sample(rng, n, t);
                if (is_zero(x)) continue;
                double v = norm.value(x);
                double w = dec.value(x);
                CHECK(w >= v * (1.0 - 1e-9));
                CHECK(w <= upper * v * (1.0 + 1e-9));
                CHECK(as_norm.value(x) == doctest::Approx(w).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("padding to a power of two") {
    auto dec = topk_decompose(Norm::lp(2.0, 3).padded(3), 3);
    CHECK(dec.n == 4);
    Rng rng(88);
    for (int t = 0; t < 50; ++t) {
        Vec x(3);
        for (auto& v : x) v = rng.uniform();
        Vec padded(x);
        padded.push_back(0.0);
        CHECK(dec.source.value(padded) == doctest::Approx(Norm::lp(2.0, 3).value(x)));
    }
}

TEST_CASE("symmetric approximation: sandwich and supermodularity") {
    const int n = 8;
    const double p = orlicz_pipeline_exponent(n);
    const double s = 2.0 * p - 1.0;
    Rng rng(777);
    std::vector<Norm> sources{
        Norm::lp(1.0, n),
        Norm::linf(n),
        Norm::max_combine({Norm::linf(n), Norm::lp(1.0, n)}, {1.0, 1.0 / 3.0}),
    };
    for (const auto& src : sources) {
        Norm approx = psupermodular_approx_symmetric(src, n);
        CHECK(approx.supermod_p() == s);
        CHECK(approx.kind() == Norm::Kind::SymmetricApprox);

        double lo = 1e300, hi = 0.0;
        for (int t = 0; t < 100; ++t) {
            Vec x = mixed_sample(rng, n, t);
            if (is_zero(x)) continue;
            double r = approx.value(x) / src.value(x);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(lo >= 1.0 - 1e-9);              // never below the source
        CHECK(hi <= 50.0 * std::log2(double(n))); // generous distortion envelope
        CHECK(approx.meta().contains("distortion"));

        auto rep = check_gradient_monotone(approx, s, 200, 31337);
        CHECK(rep.passed);

        // the output is itself a norm: homogeneity and triangle inequality
        for (int t = 0; t < 50; ++t) {
            Vec x = mixed_sample(rng, n, t), y = mixed_sample(rng, n, t + 1);
            double alpha = rng.uniform(0.0, 10.0) + 1e-3;
            double va = approx.value(scale(x, alpha));
            CHECK(std::abs(va - alpha * approx.value(x)) <= 1e-9 * std::max(va, 1e-30));
            CHECK(approx.value(add(x, y)) <= approx.value(x) + approx.value(y) + 1e-9);
        }
    }
    // the max-combination source also passes the four-point check at 2p-1
    Norm mx = psupermodular_approx_symmetric(
        Norm::max_combine({Norm::linf(n), Norm::lp(1.0, n)}, {1.0, 1.0 / 3.0}), n);
    CHECK(check_four_point(mx, s, 200, 6060).passed);
}

TEST_CASE("outer lp with large exponent is within factor 2 of the max combination") {
    // the combine step replaces a max by an l_s norm with s >= log2(count)
    const int n = 8;
    auto dec = topk_decompose(Norm::linf(n), n);
    Norm approx = psupermodular_approx_symmetric(Norm::linf(n), n);
    const Norm& combined = approx.inners()[0];
    const auto& pieces = combined.inners();
    nlohmann::json meta = approx.meta();
    const double s = meta.at("supermod_p").get<double>();
    CHECK(s >= std::log2(double(pieces.size())));

    Rng rng(2718);
    for (int t = 0; t < 50; ++t) {
        Vec x = mixed_sample(rng, n, t);
        if (is_zero(x)) continue;
        // weights live inside the combine descriptor; recover the max of the
        // weighted pieces through the budget of the lp-combine identity
        double comb = combined.value(x);
        double mx = 0.0;
        auto weights = combined.to_json().at("params").at("weights").get<Vec>();
        for (std::size_t j = 0; j < pieces.size(); ++j)
            mx = std::max(mx, weights[j] * pieces[j].value(x));
        CHECK(comb >= mx * (1.0 - 1e-9));
        CHECK(comb <= 2.0 * mx * (1.0 + 1e-9));
    }
}

TEST_CASE("budget norm evaluator equals the brute-force gauge") {
    const int n = 4;
    for (double c : {1.3, 1.5, 2.0}) {
        Norm b = Norm::budget(c, n);
        auto feasible = [&](const Vec& y) {
            for (int j = 0; (1 << j) <= n; ++j)
                if (topk_sum(y, 1 << j) > std::pow(c, double(j))) return false;
            return true;
        };
        Rng rng(static_cast<std::uint64_t>(c * 1000.0));
        for (int t = 0; t < 100; ++t) {
            Vec x = mixed_sample(rng, n, t);
            if (is_zero(x)) continue;
            // gauge by bisection on feasibility of x/alpha
            double lo = 0.0, hi = 1.0;
            while (!feasible(scale(x, 1.0 / hi))) hi *= 2.0;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if (mid > 0.0 && feasible(scale(x, 1.0 / mid)))
                    hi = mid;
                else
                    lo = mid;
            }
            CHECK(b.value(x) == doctest::Approx(hi).epsilon(1e-6));
        }
    }
}
