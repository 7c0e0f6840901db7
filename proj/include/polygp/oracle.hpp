#ifndef POLYGP_ORACLE_HPP
#define POLYGP_ORACLE_HPP

// Brute-force upper estimate of inf f: a symmetric grid plus multistart
// gradient descent. Every returned value is an evaluation of f.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polygp/polynomial.hpp"

namespace polygp {

struct SearchBudget {
    int starts = 64;
    int iters_per_start = 500;
    double box_radius = 5.0;
    int grid_points_per_axis = 21;  ///< used only for n <= 3

    void validate() const
    {
        if (starts <= 0 || iters_per_start <= 0 || !(box_radius > 0.0) || grid_points_per_axis <= 0)
            throw std::invalid_argument("search budget entries must be positive");
    }
};

struct OracleEstimate {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> point;
    std::uint64_t seed = 0;

    bool operator==(const OracleEstimate&) const = default;
};

/// Exact partial derivatives, term by term.
inline std::vector<double> gradient(const SparsePolynomial& f, std::span<const double> point)
{
    const std::size_t n = f.variable_count();
    if (point.size() != n)
        throw std::invalid_argument("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                                    std::to_string(n) + " variables");
    std::vector<double> g(n, 0.0);
    for (const auto& [alpha, c] : f.terms()) {
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] == 0)
                continue;
            double v = c * alpha[i] * detail::ipow(point[i], alpha[i] - 1);
            for (std::size_t j = 0; j < n && v != 0.0; ++j)
                if (j != i)
                    v *= detail::ipow(point[j], alpha[j]);
            g[i] += v;
        }
    }
    return g;
}

inline std::vector<double> gradient(const SparsePolynomial& f, std::initializer_list<double> point)
{
    return gradient(f, std::span<const double>(point.begin(), point.size()));
}

namespace detail {

/// Gradient descent with Armijo backtracking; x is overwritten by the end point.
inline double descend(const SparsePolynomial& f, std::vector<double>& x, int iterations)
{
    double fx = evaluate(f, x);
    double step = 1.0;
    std::vector<double> trial(x.size());
    for (int it = 0; it < iterations && std::isfinite(fx); ++it) {
        const std::vector<double> g = gradient(f, x);
        double gg = 0.0;
        for (double v : g)
            gg += v * v;
        if (!(gg > 0.0) || !std::isfinite(gg))
            break;
        step = std::min(step * 4.0, 1e6);
        bool moved = false;
        while (step > 1e-300) {
            for (std::size_t i = 0; i < x.size(); ++i)
                trial[i] = x[i] - step * g[i];
            const double ft = evaluate(f, trial);
            if (std::isfinite(ft) && ft <= fx - 1e-4 * step * gg && ft < fx) {
                x.swap(trial);
                fx = ft;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            break;
    }
    return fx;
}

inline void consider(OracleEstimate& best, double v, const std::vector<double>& x)
{
    if (v < best.value) {
        best.value = v;
        best.point = x;
    }
}

} // namespace detail

/// Best value found by the grid (n <= 3) and by descent from the best grid
/// points and from `starts` uniform random points in the box. Deterministic
/// for a fixed seed.
inline OracleEstimate estimate_global_min(const SparsePolynomial& f, const SearchBudget& budget = {},
                                          std::uint64_t seed = 1)
{
    budget.validate();
    const std::size_t n = f.variable_count();
    OracleEstimate best;
    best.seed = seed;
    if (n == 0) {
        best.value = evaluate(f, std::vector<double>{});
        return best;
    }
    const double radius = budget.box_radius;

    std::vector<std::pair<double, std::vector<double>>> seeds;
    if (n <= 3) {
        const int m = budget.grid_points_per_axis;
        std::vector<double> axis(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k)
            axis[static_cast<std::size_t>(k)] = m == 1 ? 0.0 : -radius + 2.0 * radius * k / (m - 1);
        std::vector<int> idx(n, 0);
        std::vector<double> x(n);
        while (true) {
            for (std::size_t i = 0; i < n; ++i)
                x[i] = axis[static_cast<std::size_t>(idx[i])];
            const double v = evaluate(f, x);
            detail::consider(best, v, x);
            seeds.emplace_back(v, x);
            std::size_t i = 0;
            while (i < n && ++idx[i] == m)
                idx[i++] = 0;
            if (i == n)
                break;
        }
        const std::size_t keep = std::min<std::size_t>(seeds.size(), 8);
        std::partial_sort(seeds.begin(), seeds.begin() + static_cast<std::ptrdiff_t>(keep), seeds.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
        seeds.resize(keep);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-radius, radius);
    for (int s = 0; s < budget.starts; ++s) {
        std::vector<double> x(n);
        for (auto& v : x)
            v = unif(rng);
        seeds.emplace_back(evaluate(f, x), std::move(x));
    }

    for (auto& [v0, x] : seeds) {
        const double v = detail::descend(f, x, budget.iters_per_start);
        detail::consider(best, v, x);
    }
    // Polish the winner.
    std::vector<double> x = best.point;
    const double v = detail::descend(f, x, 20 * budget.iters_per_start);
    detail::consider(best, v, x);
    return best;
}

} // namespace polygp

#endif // POLYGP_ORACLE_HPP
