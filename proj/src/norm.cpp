#include "supernorm/norm.hpp"

#include <cmath>
#include <stdexcept>

#include "supernorm/orlicz.hpp"
#include "supernorm/rng.hpp"

namespace supernorm {

struct Norm::Impl {
    Kind kind = Kind::Lp;
    int dim = 0;
    std::optional<double> supermod_p;
    bool seminorm = false;

    double p = 0.0;                    // Lp / LpCombine exponent
    int k = 0;                         // Topk
    Vec weights;                       // WeightedLinear / combines
    int block = 0;                     // SumLinfBlocks
    std::optional<OrliczFunction> G;   // Orlicz
    double orlicz_tol = 1e-10;         // Orlicz
    std::vector<Vec> matrix;           // LinearCompose rows (inner.dim x dim)
    std::vector<Norm> inners;          // children
    double eps = 0.0;                  // Smoothed
    std::uint64_t seed = 0;            // Smoothed
    int mc_samples = 0;                // Smoothed
    std::vector<Vec> scalings;         // Smoothed, mc_samples x dim
    double budget_c = 0.0;             // Budget
    nlohmann::json meta;               // SymmetricApprox
};

Norm::Norm(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

const Norm::Impl& Norm::impl() const {
    if (!impl_) throw std::logic_error("operation on an empty norm handle");
    return *impl_;
}

namespace {

int checked_dim(int dim) {
    if (dim <= 0 || dim > (1 << 14)) throw std::invalid_argument("dimension out of range");
    return dim;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

Norm Norm::lp(double p, int dim) {
    if (p < 1.0) throw std::invalid_argument("lp norm needs p >= 1");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::Lp;
    im->dim = checked_dim(dim);
    im->p = p;
    im->supermod_p = p;
    return Norm(im);
}

Norm Norm::topk(int k, int dim) {
    checked_dim(dim);
    if (k < 1 || k > dim) throw std::invalid_argument("topk needs 1 <= k <= dim");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::Topk;
    im->dim = dim;
    im->k = k;
    return Norm(im);
}

Norm Norm::weighted_linear(Vec weights) {
    require_nonneg(weights);
    auto im = std::make_shared<Impl>();
    im->kind = Kind::WeightedLinear;
    im->dim = checked_dim(static_cast<int>(weights.size()));
    im->seminorm = std::any_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; });
    im->weights = std::move(weights);
    im->supermod_p = 1.0;
    return Norm(im);
}

Norm Norm::sum_linf_blocks(int block_size, int dim) {
    checked_dim(dim);
    if (block_size < 1 || dim % block_size != 0)
        throw std::invalid_argument("block_size must divide dim");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::SumLinfBlocks;
    im->dim = dim;
    im->block = block_size;
    if (block_size == 1) im->supermod_p = 1.0; // degenerates to l1
    return Norm(im);
}

Norm Norm::l1_plus_l2(int dim) {
    auto im = std::make_shared<Impl>();
    im->kind = Kind::L1PlusL2;
    im->dim = checked_dim(dim);
    return Norm(im);
}

Norm Norm::orlicz(OrliczFunction G, int dim, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("orlicz tolerance must be positive");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::Orlicz;
    im->dim = checked_dim(dim);
    im->G = std::move(G);
    im->orlicz_tol = tol;
    return Norm(im);
}

Norm Norm::linear_compose(const Norm& inner, const std::vector<Vec>& A) {
    if (static_cast<int>(A.size()) != inner.dim())
        throw std::invalid_argument("matrix row count must equal inner dimension");
    if (A.empty() || A[0].empty()) throw std::invalid_argument("empty matrix");
    const int cols = static_cast<int>(A[0].size());
    bool zero_col = false;
    for (int c = 0; c < cols; ++c) {
        double colsum = 0.0;
        for (const auto& row : A) {
            if (static_cast<int>(row.size()) != cols)
                throw std::invalid_argument("ragged matrix");
            if (row[static_cast<std::size_t>(c)] < 0.0)
                throw std::invalid_argument("negative entry in composition matrix");
            colsum += row[static_cast<std::size_t>(c)];
        }
        if (colsum == 0.0) zero_col = true;
    }
    auto im = std::make_shared<Impl>();
    im->kind = Kind::LinearCompose;
    im->dim = checked_dim(cols);
    im->matrix = A;
    im->inners = {inner};
    im->supermod_p = inner.supermod_p();
    im->seminorm = zero_col || inner.seminorm_flagged();
    return Norm(im);
}

Norm Norm::lp_combine(std::vector<Norm> inners, Vec weights, double p) {
    if (inners.empty()) throw std::invalid_argument("lp_combine needs at least one inner norm");
    if (p < 1.0) throw std::invalid_argument("lp_combine needs p >= 1");
    if (weights.size() != inners.size()) throw std::invalid_argument("weights/inners mismatch");
    require_nonneg(weights);
    const int dim = inners[0].dim();
    bool all_super = true;
    for (const auto& f : inners) {
        if (f.dim() != dim) throw std::invalid_argument("lp_combine inner dimensions differ");
        all_super = all_super && f.supermod_p() && *f.supermod_p() <= p;
    }
    auto im = std::make_shared<Impl>();
    im->kind = Kind::LpCombine;
    im->dim = dim;
    im->p = p;
    im->weights = std::move(weights);
    im->inners = std::move(inners);
    if (all_super) im->supermod_p = p;
    return Norm(im);
}

Norm Norm::max_combine(std::vector<Norm> inners, Vec weights) {
    if (inners.empty()) throw std::invalid_argument("max_combine needs at least one inner norm");
    if (weights.size() != inners.size()) throw std::invalid_argument("weights/inners mismatch");
    require_nonneg(weights);
    const int dim = inners[0].dim();
    for (const auto& f : inners)
        if (f.dim() != dim) throw std::invalid_argument("max_combine inner dimensions differ");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::MaxCombine;
    im->dim = dim;
    im->weights = std::move(weights);
    im->inners = std::move(inners);
    return Norm(im);
}

Norm Norm::smoothed(const Norm& inner, double eps, std::uint64_t seed, int mc_samples) {
    if (eps <= 0.0) throw std::invalid_argument("smoothing needs eps > 0");
    if (mc_samples < 1) throw std::invalid_argument("smoothing needs mc_samples >= 1");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::Smoothed;
    im->dim = inner.dim();
    im->inners = {inner};
    im->eps = eps;
    im->seed = seed;
    im->mc_samples = mc_samples;
    im->supermod_p = inner.supermod_p();
    im->seminorm = inner.seminorm_flagged();
    im->scalings.reserve(static_cast<std::size_t>(mc_samples));
    for (int s = 0; s < mc_samples; ++s) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
        Vec row(static_cast<std::size_t>(inner.dim()));
        for (auto& r : row) r = 1.0 + eps * bump_sample(rng);
        im->scalings.push_back(std::move(row));
    }
    return Norm(im);
}

Norm Norm::budget(double c, int dim) {
    checked_dim(dim);
    if (!power_of_two(dim)) throw std::invalid_argument("budget norm needs a power-of-2 dim");
    if (c <= 1.0) throw std::invalid_argument("budget norm needs c > 1");
    auto im = std::make_shared<Impl>();
    im->kind = Kind::Budget;
    im->dim = dim;
    im->budget_c = c;
    return Norm(im);
}

Norm Norm::symmetric_approx(Norm combined, nlohmann::json meta) {
    auto im = std::make_shared<Impl>();
    im->kind = Kind::SymmetricApprox;
    im->dim = combined.dim();
    im->supermod_p = combined.supermod_p();
    im->inners = {std::move(combined)};
    im->meta = std::move(meta);
    return Norm(im);
}

double Norm::value(const Vec& x) const {
    const Impl& im = impl();
    require_dim(x, im.dim);
    require_nonneg(x);
    if (is_zero(x)) return 0.0;
    switch (im.kind) {
    case Kind::Lp: {
        if (im.p == 1.0) return l1(x);
        // scale out the max to avoid overflow at large p
        double m = supernorm::linf(x);
        double s = 0.0;
        for (double v : x) s += std::pow(v / m, im.p);
        return m * std::pow(s, 1.0 / im.p);
    }
    case Kind::Topk:
        return topk_sum(x, im.k);
    case Kind::WeightedLinear:
        return dot(x, im.weights);
    case Kind::SumLinfBlocks: {
        double s = 0.0;
        for (int b = 0; b < im.dim; b += im.block) {
            double m = 0.0;
            for (int i = b; i < b + im.block; ++i) m = std::max(m, x[static_cast<std::size_t>(i)]);
            s += m;
        }
        return s;
    }
    case Kind::L1PlusL2: {
        double s1 = 0.0, s2 = 0.0;
        for (double v : x) {
            s1 += v;
            s2 += v * v;
        }
        return s1 + std::sqrt(s2);
    }
    case Kind::Orlicz:
        return orlicz_eval(*im.G, x, im.orlicz_tol);
    case Kind::LinearCompose: {
        Vec y(im.matrix.size(), 0.0);
        for (std::size_t r = 0; r < im.matrix.size(); ++r) y[r] = dot(im.matrix[r], x);
        return im.inners[0].value(y);
    }
    case Kind::LpCombine: {
        double m = 0.0;
        std::vector<double> vals(im.inners.size());
        for (std::size_t i = 0; i < im.inners.size(); ++i) {
            vals[i] = im.weights[i] * im.inners[i].value(x);
            m = std::max(m, vals[i]);
        }
        if (m == 0.0) return 0.0;
        double s = 0.0;
        for (double v : vals) s += std::pow(v / m, im.p);
        return m * std::pow(s, 1.0 / im.p);
    }
    case Kind::MaxCombine: {
        double m = 0.0;
        for (std::size_t i = 0; i < im.inners.size(); ++i)
            m = std::max(m, im.weights[i] * im.inners[i].value(x));
        return m;
    }
    case Kind::Smoothed: {
        double s = 0.0;
        Vec y(x.size());
        for (const auto& row : im.scalings) {
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = row[i] * x[i];
            s += im.inners[0].value(y);
        }
        return s / double(im.mc_samples);
    }
    case Kind::SymmetricApprox:
        return im.inners[0].value(x);
    case Kind::Budget: {
        Vec s(x);
        std::sort(s.begin(), s.end(), std::greater<double>());
        double best = 0.0, prefix = 0.0, cj = 1.0;
        int next = 1;
        for (int i = 0; i < im.dim; ++i) {
            prefix += s[static_cast<std::size_t>(i)];
            if (i + 1 == next) {
                best = std::max(best, prefix / cj);
                cj *= im.budget_c;
                next *= 2;
            }
        }
        return best;
    }
    }
    return 0.0;
}

bool Norm::has_analytic_gradient() const {
    const Impl& im = impl();
    switch (im.kind) {
    case Kind::Lp:
    case Kind::WeightedLinear:
    case Kind::L1PlusL2:
    case Kind::Orlicz:
        return true;
    case Kind::LinearCompose:
    case Kind::Smoothed:
    case Kind::SymmetricApprox:
        return im.inners[0].has_analytic_gradient();
    case Kind::LpCombine:
        return std::all_of(im.inners.begin(), im.inners.end(),
                           [](const Norm& f) { return f.has_analytic_gradient(); });
    default:
        return false;
    }
}

Vec fd_gradient(const Norm& norm, const Vec& x, double fd_step) {
    double h = fd_step * linf(x);
    if (h <= 0.0) throw std::invalid_argument("gradient undefined at the origin");
    Vec g(x.size());
    Vec y(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double xi = x[i];
        y[i] = xi + h;
        double up = norm.value(y);
        if (xi >= h) {
            y[i] = xi - h;
            g[i] = (up - norm.value(y)) / (2.0 * h);
        } else {
            // one-sided at the boundary of the orthant
            y[i] = xi;
            g[i] = (up - norm.value(y)) / h;
        }
        y[i] = xi;
    }
    return g;
}

Vec Norm::gradient(const Vec& x, double fd_step) const {
    const Impl& im = impl();
    require_dim(x, im.dim);
    require_nonneg(x);
    if (is_zero(x)) throw std::invalid_argument("gradient undefined at the origin");
    switch (im.kind) {
    case Kind::Lp: {
        if (im.p == 1.0) return ones(im.dim);
        double nrm = value(x);
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::pow(x[i] / nrm, im.p - 1.0);
        return g;
    }
    case Kind::WeightedLinear:
        return im.weights;
    case Kind::L1PlusL2: {
        double s2 = 0.0;
        for (double v : x) s2 += v * v;
        double n2 = std::sqrt(s2);
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 1.0 + x[i] / n2;
        return g;
    }
    case Kind::Orlicz:
        return orlicz_grad(*im.G, x, im.orlicz_tol);
    case Kind::LinearCompose: {
        Vec y(im.matrix.size(), 0.0);
        for (std::size_t r = 0; r < im.matrix.size(); ++r) y[r] = dot(im.matrix[r], x);
        Vec gy = im.inners[0].gradient(y, fd_step);
        Vec g(x.size(), 0.0);
        for (std::size_t r = 0; r < im.matrix.size(); ++r)
            for (std::size_t c = 0; c < x.size(); ++c) g[c] += im.matrix[r][c] * gy[r];
        return g;
    }
    case Kind::LpCombine: {
        double v = value(x);
        if (v == 0.0) throw std::invalid_argument("gradient undefined where the norm vanishes");
        Vec g(x.size(), 0.0);
        for (std::size_t i = 0; i < im.inners.size(); ++i) {
            if (im.weights[i] == 0.0) continue;
            double fi = im.inners[i].value(x);
            if (fi == 0.0) continue; // term contributes 0 for p > 1
            double coef = std::pow(im.weights[i] * fi / v, im.p - 1.0) * im.weights[i];
            Vec gi = im.inners[i].gradient(x, fd_step);
            add_in_place(g, gi, coef);
        }
        return g;
    }
    case Kind::Smoothed: {
        Vec g(x.size(), 0.0);
        Vec y(x.size());
        for (const auto& row : im.scalings) {
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = row[i] * x[i];
            Vec gi = im.inners[0].gradient(y, fd_step);
            for (std::size_t i = 0; i < x.size(); ++i) g[i] += row[i] * gi[i];
        }
        for (auto& v : g) v /= double(im.mc_samples);
        return g;
    }
    case Kind::SymmetricApprox:
        return im.inners[0].gradient(x, fd_step);
    default:
        return fd_gradient(*this, x, fd_step);
    }
}

double Norm::dual_value(const Vec& z) const {
    const Impl& im = impl();
    require_dim(z, im.dim);
    require_nonneg(z);
    switch (im.kind) {
    case Kind::Lp: {
        if (im.p == 1.0) return supernorm::linf(z);
        double q = im.p / (im.p - 1.0);
        if (is_zero(z)) return 0.0;
        double m = supernorm::linf(z);
        double s = 0.0;
        for (double v : z) s += std::pow(v / m, q);
        return m * std::pow(s, 1.0 / q);
    }
    case Kind::WeightedLinear: {
        double m = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (im.weights[i] == 0.0) {
                if (z[i] > 0.0)
                    throw std::invalid_argument("dual of a seminorm is infinite on this input");
                continue;
            }
            m = std::max(m, z[i] / im.weights[i]);
        }
        return m;
    }
    case Kind::Topk:
        return std::max(supernorm::linf(z), l1(z) / double(im.k));
    default:
        throw std::invalid_argument("no closed-form dual for kind " + kind_name());
    }
}

Norm::Kind Norm::kind() const { return impl().kind; }

std::string Norm::kind_name() const {
    switch (impl().kind) {
    case Kind::Lp: return "lp";
    case Kind::Topk: return "topk";
    case Kind::WeightedLinear: return "weighted_linear";
    case Kind::SumLinfBlocks: return "sum_linf_blocks";
    case Kind::L1PlusL2: return "l1_plus_l2";
    case Kind::Orlicz: return "orlicz";
    case Kind::LinearCompose: return "linear_compose";
    case Kind::LpCombine: return "lp_combine";
    case Kind::MaxCombine: return "max_combine";
    case Kind::Smoothed: return "smoothed";
    case Kind::SymmetricApprox: return "symmetric_approx";
    case Kind::Budget: return "budget";
    }
    return "?";
}

int Norm::dim() const { return impl().dim; }

std::optional<double> Norm::supermod_p() const { return impl().supermod_p; }

Norm Norm::with_supermod_p(double p) const {
    auto im = std::make_shared<Impl>(impl());
    im->supermod_p = p;
    return Norm(im);
}

bool Norm::seminorm_flagged() const { return impl().seminorm; }

Norm Norm::padded(int new_dim) const {
    const Impl& im = impl();
    if (new_dim < im.dim) throw std::invalid_argument("padding cannot shrink the dimension");
    if (new_dim == im.dim) return *this;
    switch (im.kind) {
    case Kind::Lp:
        return lp(im.p, new_dim);
    case Kind::Topk:
        return topk(im.k, new_dim);
    case Kind::SumLinfBlocks:
        if (im.block == 1) return sum_linf_blocks(1, new_dim);
        break;
    case Kind::L1PlusL2:
        return l1_plus_l2(new_dim);
    case Kind::Orlicz:
        return orlicz(*im.G, new_dim, im.orlicz_tol);
    case Kind::LpCombine: {
        std::vector<Norm> padded_inners;
        for (const auto& f : im.inners) padded_inners.push_back(f.padded(new_dim));
        return lp_combine(std::move(padded_inners), im.weights, im.p);
    }
    case Kind::MaxCombine: {
        std::vector<Norm> padded_inners;
        for (const auto& f : im.inners) padded_inners.push_back(f.padded(new_dim));
        return max_combine(std::move(padded_inners), im.weights);
    }
    default:
        break;
    }
    throw std::invalid_argument("kind " + kind_name() + " cannot be re-dimensioned");
}

const std::vector<Norm>& Norm::inners() const { return impl().inners; }

const OrliczFunction& Norm::orlicz_function() const {
    if (!impl().G) throw std::invalid_argument("not an Orlicz norm");
    return *impl().G;
}

const nlohmann::json& Norm::meta() const { return impl().meta; }

nlohmann::json Norm::to_json() const {
    const Impl& im = impl();
    nlohmann::json params;
    switch (im.kind) {
    case Kind::Lp:
        params["p"] = im.p;
        break;
    case Kind::Topk:
        params["k"] = im.k;
        break;
    case Kind::WeightedLinear:
        params["weights"] = im.weights;
        break;
    case Kind::SumLinfBlocks:
        params["block_size"] = im.block;
        break;
    case Kind::L1PlusL2:
        break;
    case Kind::Orlicz:
        params["G"] = im.G->to_json();
        params["tol"] = im.orlicz_tol;
        break;
    case Kind::LinearCompose:
        params["matrix"] = im.matrix;
        params["inner"] = im.inners[0].to_json();
        break;
    case Kind::LpCombine: {
        params["p"] = im.p;
        params["weights"] = im.weights;
        auto arr = nlohmann::json::array();
        for (const auto& f : im.inners) arr.push_back(f.to_json());
        params["inners"] = arr;
        break;
    }
    case Kind::MaxCombine: {
        params["weights"] = im.weights;
        auto arr = nlohmann::json::array();
        for (const auto& f : im.inners) arr.push_back(f.to_json());
        params["inners"] = arr;
        break;
    }
    case Kind::Smoothed:
        params["inner"] = im.inners[0].to_json();
        params["eps"] = im.eps;
        params["seed"] = im.seed;
        params["mc_samples"] = im.mc_samples;
        break;
    case Kind::SymmetricApprox:
        params["combined"] = im.inners[0].to_json();
        params["meta"] = im.meta;
        break;
    case Kind::Budget:
        params["c"] = im.budget_c;
        break;
    }
    nlohmann::json j{{"kind", kind_name()}, {"dim", im.dim}, {"params", params}};
    if (im.supermod_p) j["supermod_p"] = *im.supermod_p;
    return j;
}

Norm Norm::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int dim = j.at("dim").get<int>();
    const nlohmann::json& params = j.contains("params") ? j.at("params") : nlohmann::json::object();
    Norm n = [&]() -> Norm {
        if (kind == "lp") return lp(params.at("p").get<double>(), dim);
        if (kind == "topk") return topk(params.at("k").get<int>(), dim);
        if (kind == "weighted_linear")
            return weighted_linear(params.at("weights").get<Vec>());
        if (kind == "sum_linf_blocks")
            return sum_linf_blocks(params.at("block_size").get<int>(), dim);
        if (kind == "l1_plus_l2") return l1_plus_l2(dim);
        if (kind == "orlicz")
            return orlicz(OrliczFunction::from_json(params.at("G")), dim,
                          params.value("tol", 1e-10));
        if (kind == "linear_compose")
            return linear_compose(from_json(params.at("inner")),
                                  params.at("matrix").get<std::vector<Vec>>());
        if (kind == "lp_combine" || kind == "max_combine") {
            std::vector<Norm> inners;
            for (const auto& e : params.at("inners")) inners.push_back(from_json(e));
            Vec w = params.at("weights").get<Vec>();
            if (kind == "lp_combine")
                return lp_combine(std::move(inners), std::move(w), params.at("p").get<double>());
            return max_combine(std::move(inners), std::move(w));
        }
        if (kind == "smoothed")
            return smoothed(from_json(params.at("inner")), params.at("eps").get<double>(),
                            params.at("seed").get<std::uint64_t>(),
                            params.at("mc_samples").get<int>());
        if (kind == "symmetric_approx")
            return symmetric_approx(from_json(params.at("combined")),
                                    params.value("meta", nlohmann::json::object()));
        if (kind == "budget") return budget(params.at("c").get<double>(), dim);
        throw std::invalid_argument("unknown norm kind: " + kind);
    }();
    if (j.contains("supermod_p")) n = n.with_supermod_p(j.at("supermod_p").get<double>());
    return n;
}

} // namespace supernorm
