#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "supernorm/instance_io.hpp"
#include "supernorm/orlicz.hpp"
#include "supernorm/rng.hpp"
#include "supernorm/symmetric.hpp"

using namespace supernorm;

namespace {

std::vector<Norm> serializable_norms() {
    return {
        Norm::lp(2.0, 4),
        Norm::lp(1.0, 4),
        Norm::topk(2, 4),
        Norm::weighted_linear({0.25, 1.0, 2.0, 0.125}),
        Norm::sum_linf_blocks(2, 4),
        Norm::l1_plus_l2(4),
        Norm::orlicz(topk_orlicz(3), 4),
        Norm::orlicz(OrliczFunction::power(2.5), 4),
        Norm::linear_compose(Norm::lp(2.0, 2), {{1.0, 0.5, 0.0, 0.0}, {0.0, 0.0, 2.0, 1.0}}),
        Norm::lp_combine({Norm::lp(1.0, 4), Norm::lp(2.0, 4)}, {1.0, 0.5}, 2.0),
        Norm::max_combine({Norm::linf(4), Norm::lp(1.0, 4)}, {1.0, 1.0 / 3.0}),
        Norm::smoothed(Norm::lp(2.0, 4), 0.25, 7, 8),
        Norm::budget(1.5, 4),
        approximate_orlicz_norm(topk_orlicz(2), 4),
        psupermodular_approx_symmetric(Norm::linf(4), 4),
    };
}

} // namespace

TEST_CASE("norm JSON round trips preserve structure and values") {
    Rng rng(1);
    for (const auto& norm : serializable_norms()) {
        auto j = norm.to_json();
        Norm back = Norm::from_json(j);
        // the serialized form is a fixed point
        CHECK(back.to_json().dump() == j.dump());
        CHECK(back.dim() == norm.dim());
        CHECK(back.supermod_p() == norm.supermod_p());
        for (int t = 0; t < 25; ++t) {
            Vec x = mixed_sample(rng, norm.dim(), t);
            CHECK(back.value(x) == norm.value(x)); // bit-faithful round trip
        }
    }
    CHECK_THROWS_AS(Norm::from_json(nlohmann::json{{"kind", "nope"}, {"dim", 2}}),
                    std::invalid_argument);
}

TEST_CASE("orlicz function JSON") {
    auto j = topk_orlicz(4).to_json();
    auto back = OrliczFunction::from_json(j);
    CHECK(back.to_json().dump() == j.dump());
    for (double t : {0.1, 0.3, 2.0}) CHECK(back.value(t) == topk_orlicz(4).value(t));

    auto custom = OrliczFunction::custom(
        "huber", [](double t) { return t * t; }, [](double t) { return 2 * t; },
        [](double) { return 2.0; });
    CHECK_THROWS_AS(custom.to_json(), std::invalid_argument);
}

TEST_CASE("17-significant-digit formatting round trips doubles") {
    Rng rng(2);
    for (int t = 0; t < 1000; ++t) {
        double v = (rng.uniform() - 0.25) * std::pow(10.0, double(rng.below(20)) - 10.0);
        CHECK(std::stod(format_double17(v)) == v);
    }
}

TEST_CASE("instance round trips") {
    auto lb = generate_instance("loadbalance", {{"T", 4}, {"n", 2}}, 0);
    auto lb2 = generate_instance("loadbalance", {{"T", 4}, {"n", 2}}, 0);
    CHECK(lb.dump() == lb2.dump()); // byte-identical generation
    auto inst = load_loadbalance(lb);
    CHECK(loadbalance_to_json(inst).dump() == lb.dump());

    auto cov = generate_instance("cover", {{"n", 3}, {"m", 3}}, 1);
    auto cinst = load_cover(cov);
    cinst.validate();

    auto pk = generate_instance("pack", {{"T", 3}, {"n", 2}}, 2);
    auto pinst = load_pack(pk);
    CHECK(pack_to_json(pinst).dump() == pk.dump());

    auto pr = generate_instance("probe", {{"n", 3}, {"card", 2}}, 3);
    auto prinst = load_probing(pr);
    CHECK(probing_to_json(prinst).dump() == pr.dump());
    // the bare schema loads too
    nlohmann::json bare{{"items", pr.at("data").at("items")},
                        {"feasible", pr.at("data").at("feasible")},
                        {"objective", pr.at("objective")}};
    load_probing(bare).validate();

    auto ol = generate_instance("olo-experts", {{"d", 4}, {"T", 16}}, 4);
    auto oinst = load_olo(ol);
    CHECK(oinst.gains.size() == 16);

    CHECK_THROWS_AS(generate_instance("nope", {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance("probe", {{"n", 99}}, 0), std::invalid_argument);
}

TEST_CASE("facility location generator matches the composed-norm shape") {
    auto j = generate_instance("facility-location-cover", {{"m", 3}, {"q", 2}}, 5);
    // objective: l1 outer over m scaled-linf column norms + q*m linear singletons
    const auto& obj = j.at("objective");
    CHECK(obj.at("outer").at("kind").get<std::string>() == "lp");
    CHECK(obj.at("outer").at("params").at("p").get<double>() == 1.0);
    const auto& inners = obj.at("inners");
    REQUIRE(inners.size() == 3 + 2 * 3);
    for (int jf = 0; jf < 3; ++jf)
        CHECK(inners.at(jf).at("kind").get<std::string>() == "linear_compose");
    for (std::size_t l = 3; l < inners.size(); ++l)
        CHECK(inners.at(l).at("kind").get<std::string>() == "weighted_linear");

    // overlapping sets (columns and singletons) reduce at load and solve
    auto inst = load_cover(j);
    inst.validate();
    auto trace = solve_cover(inst);
    CHECK(trace.summary.at("feasible").get<bool>());
}
