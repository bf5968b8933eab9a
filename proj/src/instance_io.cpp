#include "supernorm/instance_io.hpp"

#include <cmath>
#include <stdexcept>

#include "supernorm/rng.hpp"

namespace supernorm {

namespace {

const nlohmann::json& data_of(const nlohmann::json& j, const char* type) {
    if (j.contains("type") && j.at("type").get<std::string>() != type)
        throw std::invalid_argument(std::string("instance type is not ") + type);
    return j.at("data");
}

} // namespace

LoadBalanceInstance load_loadbalance(const nlohmann::json& j) {
    const auto& d = data_of(j, "loadbalance");
    LoadBalanceInstance inst{d.at("T").get<long>(), d.at("n").get<int>(),
                             d.at("sizes").get<std::vector<Vec>>(),
                             Norm::from_json(j.at("objective"))};
    inst.validate();
    return inst;
}

nlohmann::json loadbalance_to_json(const LoadBalanceInstance& inst) {
    return {{"type", "loadbalance"},
            {"objective", inst.objective.to_json()},
            {"data", {{"T", inst.T}, {"n", inst.n}, {"sizes", inst.sizes}}}};
}

CoveringInstance load_cover(const nlohmann::json& j) {
    const auto& d = data_of(j, "cover");
    const auto& obj = j.at("objective");
    CoveringInstance inst;
    inst.outer = Norm::from_json(obj.at("outer"));
    for (const auto& e : obj.at("inners")) inst.inners.push_back(Norm::from_json(e));
    inst.partitions = obj.at("partitions").get<std::vector<std::vector<int>>>();
    inst.rows = d.at("rows").get<std::vector<Vec>>();
    inst.delta = d.value("delta", 0.0);
    inst.step = d.value("step", 1e-3);

    // overlapping or non-covering restriction sets go through the
    // duplication reduction
    const int n = inst.n_vars();
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const auto& part : inst.partitions)
        for (int i : part) {
            if (i < 0 || i >= n) throw std::invalid_argument("restriction index out of range");
            ++seen[static_cast<std::size_t>(i)];
        }
    bool clean = true;
    for (int c : seen) clean = clean && c == 1;
    if (!clean) return reduce_to_partition(inst);
    inst.validate();
    return inst;
}

nlohmann::json cover_to_json(const CoveringInstance& inst) {
    auto inners = nlohmann::json::array();
    for (const auto& f : inst.inners) inners.push_back(f.to_json());
    return {{"type", "cover"},
            {"objective",
             {{"outer", inst.outer.to_json()}, {"inners", inners}, {"partitions", inst.partitions}}},
            {"data", {{"rows", inst.rows}, {"delta", inst.delta}, {"step", inst.step}}}};
}

PackingInstance load_pack(const nlohmann::json& j) {
    const auto& d = data_of(j, "pack");
    PackingInstance inst;
    inst.values = d.at("values").get<Vec>();
    inst.sizes = d.at("sizes").get<std::vector<Vec>>();
    inst.T = static_cast<long>(inst.values.size());
    inst.p_norm = Norm::from_json(j.at("objective"));
    inst.n = inst.p_norm.dim();
    if (d.contains("opt_estimate"))
        inst.opt_estimate = {d.at("opt_estimate").at(0).get<double>(),
                             d.at("opt_estimate").at(1).get<double>()};
    if (d.contains("rho_bound")) inst.rho_bound = d.at("rho_bound").get<double>();
    if (d.contains("approx")) {
        inst.approx_norm = Norm::from_json(d.at("approx").at("norm"));
        inst.alpha = d.at("approx").value("alpha", 1.0);
    }
    inst.validate();
    return inst;
}

nlohmann::json pack_to_json(const PackingInstance& inst) {
    nlohmann::json d{{"values", inst.values}, {"sizes", inst.sizes}};
    if (inst.opt_estimate)
        d["opt_estimate"] = {inst.opt_estimate->first, inst.opt_estimate->second};
    if (inst.rho_bound) d["rho_bound"] = *inst.rho_bound;
    if (inst.approx_norm)
        d["approx"] = {{"norm", inst.approx_norm->to_json()}, {"alpha", inst.alpha}};
    return {{"type", "pack"}, {"objective", inst.p_norm.to_json()}, {"data", d}};
}

ProbingInstance load_probing(const nlohmann::json& j) {
    const nlohmann::json& d = j.contains("items") ? j : data_of(j, "probe");
    const nlohmann::json& obj = j.contains("objective") ? j.at("objective")
                                                        : d.at("objective");
    ProbingInstance inst;
    inst.objective = Norm::from_json(obj);
    for (const auto& item : d.at("items")) {
        std::vector<std::pair<double, double>> dist;
        for (const auto& vp : item)
            dist.emplace_back(vp.at(0).get<double>(), vp.at(1).get<double>());
        inst.dists.push_back(std::move(dist));
    }
    inst.n = static_cast<int>(inst.dists.size());
    const auto& feas = d.at("feasible");
    if (feas.contains("card"))
        inst.card = feas.at("card").get<int>();
    else
        inst.sets = feas.at("sets").get<std::vector<std::uint32_t>>();
    inst.validate();
    return inst;
}

nlohmann::json probing_to_json(const ProbingInstance& inst) {
    auto items = nlohmann::json::array();
    for (const auto& dist : inst.dists) {
        auto item = nlohmann::json::array();
        for (auto [v, p] : dist) item.push_back({v, p});
        items.push_back(item);
    }
    nlohmann::json feas = inst.card ? nlohmann::json{{"card", *inst.card}}
                                    : nlohmann::json{{"sets", inst.sets}};
    return {{"type", "probe"},
            {"objective", inst.objective.to_json()},
            {"data", {{"items", items}, {"feasible", feas}}}};
}

OloInstance load_olo(const nlohmann::json& j) {
    const auto& d = data_of(j, "olo");
    OloInstance inst{Norm::from_json(j.at("objective")), d.at("gains").get<std::vector<Vec>>(),
                     d.value("p", 2.0), d.value("eps", 0.5)};
    return inst;
}

nlohmann::json olo_to_json(const OloInstance& inst) {
    return {{"type", "olo"},
            {"objective", inst.dual.to_json()},
            {"data", {{"gains", inst.gains}, {"p", inst.p}, {"eps", inst.eps}}}};
}

nlohmann::json generate_instance(const std::string& kind, const nlohmann::json& params,
                                 std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0xfeedULL));
    if (kind == "loadbalance") {
        long T = params.value("T", 4L);
        int n = params.value("n", 2);
        double p = params.value("p", 2.0);
        if (T < 1 || T > 1000 || n < 1 || n > 64) throw std::invalid_argument("loadbalance params out of range");
        LoadBalanceInstance inst{T, n, {}, Norm::lp(p, n)};
        for (long t = 0; t < T; ++t) {
            Vec row(static_cast<std::size_t>(n));
            for (auto& v : row) v = rng.uniform(0.05, 1.0);
            inst.sizes.push_back(std::move(row));
        }
        return loadbalance_to_json(inst);
    }
    if (kind == "cover") {
        int n = params.value("n", 3);
        int m = params.value("m", 3);
        if (n < 2 || n > 16 || m < 1 || m > 64) throw std::invalid_argument("cover params out of range");
        CoveringInstance inst;
        // random two-part partition with lp inners and an lp outer
        int split = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        std::vector<int> s1, s2;
        for (int i = 0; i < n; ++i) (i < split ? s1 : s2).push_back(i);
        inst.partitions = {s1, s2};
        inst.inners = {Norm::lp(rng.uniform() < 0.5 ? 1.0 : 2.0, split),
                       Norm::lp(rng.uniform() < 0.5 ? 1.0 : 2.0, n - split)};
        inst.outer = Norm::lp(2.0 + double(rng.below(2)), 2);
        for (int r = 0; r < m; ++r) {
            Vec row(static_cast<std::size_t>(n), 0.0);
            bool nonzero = false;
            for (auto& v : row)
                if (rng.uniform() < 0.6) {
                    v = rng.uniform(0.2, 1.0);
                    nonzero = true;
                }
            if (!nonzero) row[rng.below(static_cast<std::uint64_t>(n))] = rng.uniform(0.2, 1.0);
            inst.rows.push_back(std::move(row));
        }
        inst.step = params.value("step", 1e-3);
        return cover_to_json(inst);
    }
    if (kind == "facility-location-cover") {
        int m = params.value("m", 3); // facilities
        int q = params.value("q", 2); // demands
        if (m < 1 || m > 5 || q < 1 || q > 6)
            throw std::invalid_argument("facility-location params out of range");
        const int n = q * m; // y_{ij} at index i*m + j
        CoveringInstance inst;
        inst.step = params.value("step", 1e-3);
        std::vector<Norm> inners;
        std::vector<std::vector<int>> parts;
        // opening costs: c_j * max_i y_ij over the column of facility j
        for (int jf = 0; jf < m; ++jf) {
            double cj = rng.uniform(0.5, 2.0);
            std::vector<int> col;
            for (int i = 0; i < q; ++i) col.push_back(i * m + jf);
            std::vector<Vec> diag(static_cast<std::size_t>(q), Vec(static_cast<std::size_t>(q), 0.0));
            for (int i = 0; i < q; ++i)
                diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = cj;
            inners.push_back(Norm::linear_compose(Norm::topk(1, q), diag));
            parts.push_back(col);
        }
        // connection costs: d_ij * y_ij as singleton linear terms
        for (int i = 0; i < q; ++i)
            for (int jf = 0; jf < m; ++jf) {
                inners.push_back(Norm::weighted_linear({rng.uniform(0.1, 1.5)}));
                parts.push_back({i * m + jf});
            }
        inst.inners = std::move(inners);
        inst.partitions = std::move(parts);
        inst.outer = Norm::lp(1.0, static_cast<int>(inst.inners.size()));
        for (int i = 0; i < q; ++i) {
            Vec row(static_cast<std::size_t>(n), 0.0);
            for (int jf = 0; jf < m; ++jf) row[static_cast<std::size_t>(i * m + jf)] = 1.0;
            inst.rows.push_back(std::move(row));
        }
        // overlapping sets (columns vs singletons) are reduced at load time
        return cover_to_json(inst);
    }
    if (kind == "pack") {
        int T = params.value("T", 3);
        int n = params.value("n", 2);
        if (T < 1 || T > 64 || n < 1 || n > 16) throw std::invalid_argument("pack params out of range");
        PackingInstance inst;
        inst.T = T;
        inst.n = n;
        inst.p_norm = Norm::lp(2.0, n);
        for (int t = 0; t < T; ++t) {
            inst.values.push_back(rng.uniform(0.5, 1.5));
            Vec col(static_cast<std::size_t>(n), 0.0);
            bool nonzero = false;
            for (auto& v : col)
                if (rng.uniform() < 0.7) {
                    v = rng.uniform(0.1, 1.0);
                    nonzero = true;
                }
            if (!nonzero) col[rng.below(static_cast<std::uint64_t>(n))] = rng.uniform(0.1, 1.0);
            inst.sizes.push_back(std::move(col));
        }
        return pack_to_json(inst);
    }
    if (kind == "probe") {
        int n = params.value("n", 3);
        int card = params.value("card", 2);
        if (n < 1 || n > 8 || card < 1 || card > n)
            throw std::invalid_argument("probe params out of range");
        ProbingInstance inst;
        inst.n = n;
        inst.card = card;
        inst.objective = Norm::lp(2.0, n);
        for (int i = 0; i < n; ++i) {
            int support = 2 + static_cast<int>(rng.below(2));
            std::vector<std::pair<double, double>> dist;
            double rem = 1.0;
            for (int o = 0; o < support; ++o) {
                double p = (o == support - 1) ? rem : rem * rng.uniform(0.2, 0.8);
                rem -= p;
                dist.emplace_back(std::floor(rng.uniform(0.0, 10.0) * 100.0) / 100.0, p);
            }
            inst.dists.push_back(std::move(dist));
        }
        return probing_to_json(inst);
    }
    if (kind == "olo-experts") {
        int d = params.value("d", 4);
        int T = params.value("T", 200);
        double eps = params.value("eps", 0.5);
        if (d < 2 || d > 64 || T < 0 || T > 100000)
            throw std::invalid_argument("olo params out of range");
        OloInstance inst;
        double p = params.value("p", 2.0);
        inst.dual = Norm::lp(p, d);
        inst.p = p;
        inst.eps = eps;
        // adversarial flavor: long alternating runs concentrated on one
        // coordinate, occasionally spread
        int hot = 0;
        for (int t = 0; t < T; ++t) {
            if (t % 17 == 0) hot = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
            Vec g(static_cast<std::size_t>(d), 0.0);
            if (rng.uniform() < 0.25)
                for (auto& v : g) v = rng.uniform();
            else
                g[static_cast<std::size_t>(hot)] = 1.0;
            inst.gains.push_back(std::move(g));
        }
        return olo_to_json(inst);
    }
    throw std::invalid_argument("unknown instance kind: " + kind);
}

} // namespace supernorm
