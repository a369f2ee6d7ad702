#pragma once

// Hand-rolled instance generators shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "fairkit/core.hpp"

namespace fktest {

using namespace fairkit;

struct Gen {
    std::mt19937_64 eng;
    explicit Gen(std::uint64_t seed) : eng(seed * 0x9E3779B97F4A7C15ULL + 17) {}

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng() % n); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double real(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(eng() >> 11) * 0x1.0p-53;
    }
    bool coin(double p = 0.5) { return real(0, 1) < p; }
    std::vector<std::size_t> distinct(std::size_t n, std::size_t r) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        for (std::size_t i = 0; i < r; ++i) std::swap(all[i], all[i + index(n - i)]);
        all.resize(r);
        return all;
    }
};

/// Integer grid coordinates, no duplicates.
inline std::vector<double> grid_points(Gen& g, std::size_t n, std::size_t dim, std::int64_t span) {
    std::vector<std::vector<double>> seen;
    std::vector<double> out;
    while (seen.size() < n) {
        std::vector<double> p(dim);
        for (auto& x : p) x = static_cast<double>(g.integer(0, span));
        if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
        seen.push_back(p);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

/// Group sets producing exactly `gamma` classes over two groups ({0},{1},{0,1}).
/// gamma = 1 uses a single group.
inline std::vector<std::vector<std::size_t>> class_universe(std::size_t gamma) {
    if (gamma == 1) return {{0}};
    std::vector<std::vector<std::size_t>> u{{0}, {1}, {0, 1}};
    u.resize(gamma);
    return u;
}

/// Every class of the universe appears at least once when n >= gamma.
inline std::vector<std::vector<std::size_t>> random_groups(Gen& g, std::size_t n, std::size_t gamma) {
    const auto u = class_universe(gamma);
    std::vector<std::vector<std::size_t>> out(n);
    for (std::size_t p = 0; p < n; ++p) out[p] = p < gamma ? u[p] : u[g.index(gamma)];
    for (std::size_t i = n; i > 1; --i) std::swap(out[i - 1], out[g.index(i)]);
    return out;
}

inline Dataset random_dataset(Gen& g, std::size_t n, std::size_t gamma, std::size_t dim = 2,
                              std::int64_t span = 12) {
    return Dataset(MetricSpace::euclidean(dim, grid_points(g, n, dim, span)), random_groups(g, n, gamma));
}

/// Shortest-path closure of random edge weights: always a metric.
inline MetricSpace random_metric(Gen& g, std::size_t n) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = static_cast<double>(g.integer(1, 20));
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + m] + d[m * n + j]);
    return MetricSpace::explicit_matrix(n, d);
}

inline FairnessSpec random_spec(Gen& g, std::size_t ell) {
    static const double alphas[] = {1.0, 1.0, 0.75, 2.0 / 3.0, 0.6, 0.5};
    static const double betas[] = {0.0, 0.0, 0.0, 0.2, 0.25, 1.0 / 3.0};
    FairnessSpec s;
    for (std::size_t i = 0; i < ell; ++i) {
        s.alpha.push_back(alphas[g.index(6)]);
        s.beta.push_back(betas[g.index(6)]);
    }
    return s;
}

inline std::vector<Center> centers_at(const std::vector<std::size_t>& ids) {
    std::vector<Center> out;
    for (auto i : ids) out.push_back(Center::at(i));
    return out;
}

inline bool rel_close(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace fktest
