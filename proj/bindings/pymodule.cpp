#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "supernorm/certify.hpp"
#include "supernorm/instance_io.hpp"
#include "supernorm/online.hpp"
#include "supernorm/orlicz.hpp"
#include "supernorm/probing.hpp"
#include "supernorm/symmetric.hpp"

namespace py = pybind11;
using namespace supernorm;

namespace {

nlohmann::json json_from_str(const std::string& s) { return nlohmann::json::parse(s); }

py::dict trace_to_dict(const RunTrace& trace) {
    py::dict d;
    d["seed"] = trace.seed;
    d["summary"] = py::module_::import("json").attr("loads")(trace.summary.dump());
    py::list rows;
    for (const auto& r : trace.rows) {
        py::dict row;
        row["step"] = r.step;
        row["decision"] = r.decision;
        row["objective"] = r.objective;
        row["feasible"] = r.feasible;
        row["time"] = r.time;
        rows.append(row);
    }
    d["rows"] = rows;
    return d;
}

py::object report_to_obj(const CertReport& rep) {
    return py::module_::import("json").attr("loads")(rep.to_json().dump());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "p-supermodular norms: approximation, certification and online algorithms";

    py::class_<OrliczFunction>(m, "OrliczFunction")
        .def_static("power", &OrliczFunction::power, py::arg("p"))
        .def_static("linear", &OrliczFunction::linear)
        .def_static("hinge_sum",
                    [](const std::vector<std::pair<double, double>>& hinges) {
                        std::vector<OrliczFunction::Hinge> hs;
                        for (auto [a, b] : hinges) hs.push_back({a, b});
                        return OrliczFunction::hinge_sum(std::move(hs));
                    },
                    py::arg("hinges"))
        .def("value", &OrliczFunction::value)
        .def("d1", &OrliczFunction::d1)
        .def("d2", &OrliczFunction::d2)
        .def("to_json", [](const OrliczFunction& g) { return g.to_json().dump(); })
        .def_static("from_json",
                    [](const std::string& s) { return OrliczFunction::from_json(json_from_str(s)); });

    py::class_<Norm>(m, "Norm")
        .def_static("lp", &Norm::lp, py::arg("p"), py::arg("dim"))
        .def_static("topk", &Norm::topk, py::arg("k"), py::arg("dim"))
        .def_static("linf", &Norm::linf, py::arg("dim"))
        .def_static("weighted_linear", &Norm::weighted_linear, py::arg("weights"))
        .def_static("sum_linf_blocks", &Norm::sum_linf_blocks, py::arg("block_size"),
                    py::arg("dim"))
        .def_static("l1_plus_l2", &Norm::l1_plus_l2, py::arg("dim"))
        .def_static("orlicz", &Norm::orlicz, py::arg("G"), py::arg("dim"),
                    py::arg("tol") = 1e-10)
        .def_static("linear_compose", &Norm::linear_compose, py::arg("inner"), py::arg("matrix"))
        .def_static("lp_combine", &Norm::lp_combine, py::arg("inners"), py::arg("weights"),
                    py::arg("p"))
        .def_static("max_combine", &Norm::max_combine, py::arg("inners"), py::arg("weights"))
        .def_static("smoothed", &Norm::smoothed, py::arg("inner"), py::arg("eps"),
                    py::arg("seed"), py::arg("mc_samples"))
        .def_static("budget", &Norm::budget, py::arg("c"), py::arg("dim"))
        .def("value", &Norm::value, py::arg("x"))
        .def("gradient", &Norm::gradient, py::arg("x"), py::arg("fd_step") = Norm::kDefaultFdStep)
        .def("dual_value", &Norm::dual_value, py::arg("z"))
        .def_property_readonly("dim", &Norm::dim)
        .def_property_readonly("kind", &Norm::kind_name)
        .def_property_readonly("supermod_p",
                               [](const Norm& n) -> py::object {
                                   if (n.supermod_p()) return py::float_(*n.supermod_p());
                                   return py::none();
                               })
        .def("with_supermod_p", &Norm::with_supermod_p, py::arg("p"))
        .def("to_json", [](const Norm& n) { return n.to_json().dump(); })
        .def_static("from_json", [](const std::string& s) { return Norm::from_json(json_from_str(s)); })
        .def("__repr__", [](const Norm& n) {
            return "<Norm " + n.kind_name() + " dim=" + std::to_string(n.dim()) + ">";
        });

    m.def("orlicz_eval", &orlicz_eval, py::arg("G"), py::arg("x"), py::arg("tol") = 1e-10);
    m.def("orlicz_grad", &orlicz_grad, py::arg("G"), py::arg("x"), py::arg("tol") = 1e-10);
    m.def("growth_check",
          [](const OrliczFunction& G, double p, double lo, double hi, int grid) {
              auto cert = growth_check(G, p, lo, hi, grid);
              py::dict d;
              d["p"] = cert.p;
              d["max_ratio"] = cert.max_ratio;
              d["passed"] = cert.passed;
              d["label"] = cert.label;
              return d;
          },
          py::arg("G"), py::arg("p"), py::arg("t_lo") = 1e-3, py::arg("t_hi") = 1e3,
          py::arg("grid_size") = 128);
    m.def("piecewise_approx", &piecewise_approx, py::arg("G"), py::arg("n"));
    m.def("smooth_hinges", &smooth_hinges, py::arg("hinge_sum"), py::arg("p"));
    m.def("topk_orlicz", &topk_orlicz, py::arg("k"));
    m.def("approximate_orlicz_norm", &approximate_orlicz_norm, py::arg("G"), py::arg("n"));
    m.def("psupermodular_approx_symmetric", &psupermodular_approx_symmetric, py::arg("norm"),
          py::arg("n"));

    m.def("check_four_point",
          [](const Norm& n, double p, long samples, std::uint64_t seed, double tol) {
              return report_to_obj(check_four_point(n, p, samples, seed, tol));
          },
          py::arg("norm"), py::arg("p"), py::arg("samples") = 10000, py::arg("seed") = 0,
          py::arg("tol") = 1e-7);
    m.def("check_gradient_monotone",
          [](const Norm& n, double p, long samples, std::uint64_t seed, double tol) {
              return report_to_obj(check_gradient_monotone(n, p, samples, seed, tol));
          },
          py::arg("norm"), py::arg("p"), py::arg("samples") = 10000, py::arg("seed") = 0,
          py::arg("tol") = 1e-7);
    m.def("check_hessian",
          [](const Norm& n, double p, long samples, double fd_step, std::uint64_t seed) {
              return report_to_obj(check_hessian(n, p, samples, fd_step, seed));
          },
          py::arg("norm"), py::arg("p"), py::arg("samples") = 200, py::arg("fd_step") = 1e-4,
          py::arg("seed") = 0);
    m.def("check_gradient_stability",
          [](const Norm& n, double p, double eps, long samples, std::uint64_t seed) {
              return report_to_obj(check_gradient_stability(n, p, eps, samples, seed));
          },
          py::arg("norm"), py::arg("p"), py::arg("eps"), py::arg("samples") = 10000,
          py::arg("seed") = 0);
    m.def("estimate_approx_ratio",
          [](const Norm& a, const Norm& b, long samples, std::uint64_t seed) {
              auto r = estimate_approx_ratio(a, b, samples, seed);
              return py::make_tuple(r.lo, r.hi);
          },
          py::arg("a"), py::arg("b"), py::arg("samples") = 1000, py::arg("seed") = 0);

    m.def("greedy_loadbalance",
          [](const std::string& inst) {
              return trace_to_dict(greedy_loadbalance(load_loadbalance(json_from_str(inst))));
          },
          py::arg("instance_json"));
    m.def("brute_opt_loadbalance",
          [](const std::string& inst) {
              return brute_opt_loadbalance(load_loadbalance(json_from_str(inst)));
          },
          py::arg("instance_json"));
    m.def("solve_cover",
          [](const std::string& inst) {
              return trace_to_dict(solve_cover(load_cover(json_from_str(inst))));
          },
          py::arg("instance_json"));
    m.def("offline_opt_cover",
          [](const std::string& inst, long budget) {
              return offline_opt_cover(load_cover(json_from_str(inst)), budget);
          },
          py::arg("instance_json"), py::arg("budget") = 40);
    m.def("solve_pack",
          [](const std::string& inst, std::uint64_t seed) {
              return trace_to_dict(solve_pack(load_pack(json_from_str(inst)), seed));
          },
          py::arg("instance_json"), py::arg("seed") = 0);
    m.def("offline_opt_pack",
          [](const std::string& inst, long budget) {
              return offline_opt_pack(load_pack(json_from_str(inst)), budget);
          },
          py::arg("instance_json"), py::arg("budget") = 20);
    m.def("olo_ftpl",
          [](const Norm& dual, const std::vector<Vec>& gains, double p, double eps) {
              return trace_to_dict(olo_ftpl(dual, gains, p, eps));
          },
          py::arg("dual_norm"), py::arg("gains"), py::arg("p"), py::arg("eps"));

    m.def("probe_report",
          [](const std::string& inst_json, long mc, std::uint64_t seed) {
              auto inst = load_probing(json_from_str(inst_json));
              auto policy = adaptive_opt(inst);
              auto nonad = nonadaptive_opt(inst, mc, seed);
              auto [hmean, hse] = hallucination_value(inst, policy, mc, seed);
              py::dict d;
              d["adapt"] = policy.value;
              d["nonadapt"] = nonad.value;
              d["hallucination_mean"] = hmean;
              d["hallucination_stderr"] = hse;
              return d;
          },
          py::arg("instance_json"), py::arg("mc") = 100000, py::arg("seed") = 0);

    m.def("generate_instance",
          [](const std::string& kind, const std::string& params, std::uint64_t seed) {
              return generate_instance(kind, json_from_str(params), seed).dump();
          },
          py::arg("kind"), py::arg("params") = std::string("{}"), py::arg("seed") = 0);
}
