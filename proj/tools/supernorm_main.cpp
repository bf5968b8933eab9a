// supernorm: construction, approximation and certification of p-supermodular
// norms, plus the norm-driven online algorithms and their desk-scale oracles.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "supernorm/certify.hpp"
#include "supernorm/rng.hpp"
#include "supernorm/instance_io.hpp"
#include "supernorm/online.hpp"
#include "supernorm/orlicz.hpp"
#include "supernorm/probing.hpp"
#include "supernorm/symmetric.hpp"

using namespace supernorm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInputError = 2;

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return nlohmann::json::parse(in); // parse errors carry line/column info
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    out << content;
}

struct CommonOpts {
    std::string norm_path, instance_path, out_path;
    std::string format = "json";
    double p = 2.0;
    double eps = 0.5;
    std::uint64_t seed = 0;
    long samples = 10000;
    double step = 0.0;
    double tol = 1e-7;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--norm", o.norm_path, "norm descriptor JSON file");
    cmd->add_option("--instance", o.instance_path, "instance JSON file");
    cmd->add_option("--p", o.p, "supermodularity exponent");
    cmd->add_option("--eps", o.eps, "epsilon parameter");
    cmd->add_option("--seed", o.seed, "random seed (default 0)");
    cmd->add_option("--samples", o.samples, "sample count");
    cmd->add_option("--step", o.step, "discretization step override");
    cmd->add_option("--tol", o.tol, "tolerance");
    cmd->add_option("--out", o.out_path, "output file (stdout when omitted)");
    cmd->add_option("--format", o.format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

nlohmann::json config_stamp(const std::string& command, const CommonOpts& o) {
    return {{"command", command}, {"seed", o.seed},   {"samples", o.samples},
            {"p", o.p},           {"eps", o.eps},     {"tol", o.tol},
            {"norm", o.norm_path}, {"instance", o.instance_path}};
}

std::string render_report(const nlohmann::json& report, const CommonOpts& o,
                          const std::string& command) {
    if (o.format == "json") {
        nlohmann::json out{{"config", config_stamp(command, o)}, {"report", report}};
        return out.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "# supernorm-csv v1\n# config " << config_stamp(command, o).dump() << "\n";
    os << "key,value\n";
    for (const auto& [k, v] : report.items())
        os << k << "," << (v.is_number() ? format_double17(v.get<double>()) : v.dump()) << "\n";
    return os.str();
}

int run_certify(const CommonOpts& o, const std::vector<std::string>& properties) {
    Norm norm = Norm::from_json(read_json_file(o.norm_path));
    std::vector<CertReport> reports;
    for (const auto& prop : properties) {
        if (prop == "four_point")
            reports.push_back(check_four_point(norm, o.p, o.samples, o.seed, o.tol));
        else if (prop == "gradient_monotone")
            reports.push_back(check_gradient_monotone(norm, o.p, o.samples, o.seed, o.tol));
        else if (prop == "hessian")
            reports.push_back(check_hessian(norm, o.p, std::max(50L, o.samples / 20), 1e-4, o.seed));
        else if (prop == "stability")
            reports.push_back(check_gradient_stability(norm, o.p, o.eps, o.samples, o.seed));
        else
            throw std::invalid_argument("unknown property: " + prop);
    }
    bool all_pass = true;
    auto arr = nlohmann::json::array();
    for (const auto& r : reports) {
        std::cout << r.one_line() << "\n";
        all_pass = all_pass && r.passed;
        arr.push_back(r.to_json());
    }
    write_output(o.out_path, render_report({{"checks", arr}, {"passed", all_pass}}, o, "certify"));
    return all_pass ? kExitOk : kExitPropertyFailure;
}

int run_approx(const CommonOpts& o) {
    Norm norm = Norm::from_json(read_json_file(o.norm_path));
    nlohmann::json report;
    const long samples = std::min<long>(o.samples, 2000);
    if (norm.kind() == Norm::Kind::Topk) {
        int k = norm.to_json().at("params").at("k").get<int>();
        Norm surrogate = Norm::orlicz(topk_orlicz(k), norm.dim());
        auto stage = estimate_approx_ratio(norm, surrogate, samples, o.seed);
        Norm pipeline = approximate_orlicz_norm(topk_orlicz(k), norm.dim());
        auto full = estimate_approx_ratio(norm, pipeline, samples, o.seed);
        report = {{"orlicz_stage", {{"lo", stage.lo}, {"hi", stage.hi}}},
                  {"pipeline", {{"lo", full.lo}, {"hi", full.hi}}},
                  {"norm", pipeline.to_json()}};
    } else if (norm.kind() == Norm::Kind::Orlicz) {
        Norm pipeline = approximate_orlicz_norm(norm.orlicz_function(), norm.dim());
        auto full = estimate_approx_ratio(norm, pipeline, samples, o.seed);
        report = {{"pipeline", {{"lo", full.lo}, {"hi", full.hi}}},
                  {"norm", pipeline.to_json()}};
    } else {
        Norm approx = psupermodular_approx_symmetric(norm, norm.dim());
        auto full = estimate_approx_ratio(norm, approx, samples, o.seed);
        report = {{"symmetric", {{"lo", full.lo}, {"hi", full.hi}}},
                  {"meta", approx.meta()},
                  {"norm", approx.to_json()}};
    }
    write_output(o.out_path, render_report(report, o, "approx"));
    return kExitOk;
}

int run_loadbalance(const CommonOpts& o, bool brute) {
    auto inst = load_loadbalance(read_json_file(o.instance_path));
    auto trace = greedy_loadbalance(inst);
    if (brute) {
        double opt = brute_opt_loadbalance(inst);
        trace.summary["brute_opt"] = opt;
        trace.summary["ratio"] = trace.summary.at("final_cost").get<double>() / opt;
    }
    std::cout << "loadbalance cost=" << trace.summary.at("final_cost").get<double>() << "\n";
    write_output(o.out_path, o.format == "csv"
                                 ? trace.to_csv(config_stamp("loadbalance", o))
                                 : render_report(trace.summary, o, "loadbalance"));
    return kExitOk;
}

int run_cover(const CommonOpts& o, long opt_budget) {
    auto inst = load_cover(read_json_file(o.instance_path));
    if (o.step > 0.0) inst.step = o.step;
    auto trace = solve_cover(inst);
    if (opt_budget > 0) {
        double opt = offline_opt_cover(inst, opt_budget);
        trace.summary["offline_opt"] = opt;
        trace.summary["ratio"] = trace.summary.at("cost").get<double>() / opt;
    }
    bool ok = trace.summary.at("feasible").get<bool>();
    std::cout << "cover cost=" << trace.summary.at("cost").get<double>()
              << " feasible=" << ok << "\n";
    write_output(o.out_path, o.format == "csv" ? trace.to_csv(config_stamp("cover", o))
                                               : render_report(trace.summary, o, "cover"));
    return ok ? kExitOk : kExitPropertyFailure;
}

int run_pack(const CommonOpts& o) {
    auto inst = load_pack(read_json_file(o.instance_path));
    auto trace = solve_pack(inst, o.seed);
    bool ok = trace.summary.at("gauge").get<double>() <= 1.0 + 1e-12;
    std::cout << "pack value=" << trace.summary.at("value").get<double>()
              << " gauge=" << trace.summary.at("gauge").get<double>() << "\n";
    write_output(o.out_path, o.format == "csv" ? trace.to_csv(config_stamp("pack", o))
                                               : render_report(trace.summary, o, "pack"));
    return ok ? kExitOk : kExitPropertyFailure;
}

int run_probe(const CommonOpts& o) {
    auto inst = load_probing(read_json_file(o.instance_path));
    auto policy = adaptive_opt(inst);
    auto nonad = nonadaptive_opt(inst, o.samples, o.seed);
    auto [hmean, hse] = hallucination_value(inst, policy, o.samples, o.seed);
    // diagnostic: largest single-item contribution against the truncation
    // scale Adapt / (4 c p); purely informational
    double max_single = 0.0;
    for (int i = 0; i < inst.n; ++i)
        for (auto [v, prob] : inst.dists[static_cast<std::size_t>(i)])
            if (prob > 0.0)
                max_single = std::max(max_single, inst.objective.value(unit(inst.n, i, v)));
    const double c_trunc = 3.0 / std::pow(2.0 - std::exp(0.5), 1.0 / o.p);
    nlohmann::json report{{"adapt", policy.value},
                          {"nonadapt", nonad.value},
                          {"nonadapt_set", nonad.set},
                          {"hallucination_mean", hmean},
                          {"hallucination_stderr", hse},
                          {"gap_adapt_over_hallucination", policy.value / std::max(hmean, 1e-300)},
                          {"max_single_item", max_single},
                          {"truncation_scale", policy.value / (4.0 * c_trunc * o.p)}};
    std::cout << "probe adapt=" << policy.value << " nonadapt=" << nonad.value
              << " hallucination=" << hmean << "\n";
    write_output(o.out_path, render_report(report, o, "probe"));
    return kExitOk;
}

int run_olo(const CommonOpts& o, bool p_set, bool eps_set) {
    auto inst = load_olo(read_json_file(o.instance_path));
    if (p_set) inst.p = o.p;
    if (eps_set) inst.eps = o.eps;
    auto trace = olo_ftpl(inst.dual, inst.gains, inst.p, inst.eps);
    bool ok = trace.summary.at("satisfied").get<bool>();
    std::cout << "olo gain=" << trace.summary.at("total_gain").get<double>()
              << " bound=" << trace.summary.at("bound").get<double>() << "\n";
    write_output(o.out_path, o.format == "csv" ? trace.to_csv(config_stamp("olo", o))
                                               : render_report(trace.summary, o, "olo"));
    return ok ? kExitOk : kExitPropertyFailure;
}

int run_demo(const CommonOpts& o, int m, double alpha) {
    // chain counterexample: no alpha-approximating p-supermodular candidate
    // exists once alpha p < ln(2) m
    Norm base = Norm::sum_linf_blocks(m, m * m);
    auto chain = chain_counterexample(m, base, o.p, alpha);
    std::cout << (chain.passed ? "NOT REFUTED" : "REFUTED")
              << " claim (alpha=" << alpha << ", p=" << o.p << ") at m=" << m
              << ": alpha*p=" << alpha * o.p << " vs ln(2)*m=" << std::log(2.0) * m << "\n";

    // budget-norm evaluator vs its brute-force gauge at n = 4
    const int n = 4;
    const double c = 1.5;
    Norm b = Norm::budget(c, n);
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        Vec x = mixed_sample(rng, n, t);
        if (is_zero(x)) continue;
        double lo = 0.0, hi = 1.0;
        auto feasible = [&](double a) {
            for (int j = 0; (1 << j) <= n; ++j)
                if (topk_sum(scale(x, 1.0 / a), 1 << j) > std::pow(c, double(j))) return false;
            return true;
        };
        while (!feasible(hi)) hi *= 2.0;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid > 0.0 && feasible(mid))
                hi = mid;
            else
                lo = mid;
        }
        worst = std::max(worst, std::abs(b.value(x) - hi));
    }
    std::cout << "budget-norm evaluator vs brute gauge: max deviation " << worst << "\n";
    nlohmann::json report{{"chain", chain.to_json()}, {"budget_gauge_deviation", worst}};
    write_output(o.out_path, render_report(report, o, "demo-counterexamples"));
    return kExitOk;
}

int run_generate(const CommonOpts& o, const std::string& kind, const nlohmann::json& params) {
    auto j = generate_instance(kind, params, o.seed);
    write_output(o.out_path, j.dump(2) + "\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-supermodular norms: approximation, certification and online algorithms"};
    app.require_subcommand(1);
    // precedence: flags > config file > defaults
    app.set_config("--config")->configurable(false);

    CommonOpts o;
    std::vector<std::string> properties{"four_point", "gradient_monotone", "hessian"};
    bool brute = false;
    long opt_budget = 0;
    int demo_m = 9;
    double demo_alpha = 2.0;
    std::string gen_kind;
    long gT = 4, gn = 3, gm = 3, gcard = 2, gd = 4, gq = 2;

    auto* certify = app.add_subcommand("certify", "run supermodularity checks on a norm");
    add_common(certify, o);
    certify->add_option("--property", properties, "four_point|gradient_monotone|hessian|stability");

    auto* approx = app.add_subcommand("approx", "build the supermodular approximation of a norm");
    add_common(approx, o);

    auto* lb = app.add_subcommand("loadbalance", "greedy online load balancing");
    add_common(lb, o);
    lb->add_flag("--brute", brute, "also compute the exact hindsight optimum");

    auto* cover = app.add_subcommand("cover", "continuous online covering");
    add_common(cover, o);
    cover->add_option("--opt-budget", opt_budget, "grid budget for the offline optimum");

    auto* pack = app.add_subcommand("pack", "Lagrangian online packing");
    add_common(pack, o);

    auto* probe = app.add_subcommand("probe", "stochastic probing simulator");
    add_common(probe, o);

    auto* olo = app.add_subcommand("olo", "online linear optimization via shifted FTPL");
    add_common(olo, o);

    auto* demo = app.add_subcommand("demo-counterexamples", "run the counterexample demos");
    add_common(demo, o);
    demo->add_option("--m", demo_m, "grid side of the chain counterexample");
    demo->add_option("--alpha", demo_alpha, "claimed approximation factor");

    auto* gen = app.add_subcommand("generate", "write a reproducible random instance");
    add_common(gen, o);
    gen->add_option("--kind", gen_kind,
                    "loadbalance|cover|facility-location-cover|pack|probe|olo-experts")
        ->required();
    gen->add_option("--T", gT, "steps/items");
    gen->add_option("--n", gn, "dimension/machines/items");
    gen->add_option("--m", gm, "rows/facilities");
    gen->add_option("--card", gcard, "probe cardinality bound");
    gen->add_option("--d", gd, "olo dimension");
    gen->add_option("--q", gq, "facility-location demands");

    CLI11_PARSE(app, argc, argv);

    try {
        if (certify->parsed()) return run_certify(o, properties);
        if (approx->parsed()) return run_approx(o);
        if (lb->parsed()) return run_loadbalance(o, brute);
        if (cover->parsed()) return run_cover(o, opt_budget);
        if (pack->parsed()) return run_pack(o);
        if (probe->parsed()) return run_probe(o);
        if (olo->parsed()) return run_olo(o, olo->count("--p") > 0, olo->count("--eps") > 0);
        if (demo->parsed()) return run_demo(o, demo_m, demo_alpha);
        if (gen->parsed()) {
            nlohmann::json params{{"T", gT},       {"n", gn}, {"m", gm}, {"card", gcard},
                                  {"d", gd},       {"q", gq}, {"p", o.p}, {"eps", o.eps}};
            if (o.step > 0.0) params["step"] = o.step;
            return run_generate(o, gen_kind, params);
        }
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
