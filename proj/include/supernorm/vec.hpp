#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace supernorm {

using Vec = std::vector<double>;

inline void require_nonneg(const Vec& x) {
    for (double v : x)
        if (v < 0.0) throw std::invalid_argument("negative coordinate in nonnegative vector");
}

inline void require_dim(const Vec& x, int dim) {
    if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("dimension mismatch");
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec scale(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline void add_in_place(Vec& a, const Vec& b, double c = 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

inline double linf(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double l1(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

inline bool is_zero(const Vec& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

inline Vec unit(int dim, int i, double c = 1.0) {
    Vec e(static_cast<std::size_t>(dim), 0.0);
    e[static_cast<std::size_t>(i)] = c;
    return e;
}

inline Vec ones(int dim, double c = 1.0) { return Vec(static_cast<std::size_t>(dim), c); }

// sum of the k largest entries
inline double topk_sum(const Vec& x, int k) {
    Vec s(x);
    std::partial_sort(s.begin(), s.begin() + k, s.end(), std::greater<double>());
    return std::accumulate(s.begin(), s.begin() + k, 0.0);
}

} // namespace supernorm
