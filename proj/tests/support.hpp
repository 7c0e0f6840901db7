#ifndef POLYGP_TESTS_SUPPORT_HPP
#define POLYGP_TESTS_SUPPORT_HPP

// Shared generators and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <random>
#include <vector>

#include "polygp/bench.hpp"
#include "polygp/gp_solver.hpp"
#include "polygp/polynomial.hpp"

namespace polygp::support {

inline double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

/// Random exponent vector with the given total degree.
template <class Rng>
ExponentVector random_exponent(std::size_t n, int degree, Rng& rng)
{
    ExponentVector e(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int k = 0; k < degree; ++k) {
        const std::size_t i = pick(rng);
        e.set(i, e[i] + 1);
    }
    return e;
}

/// Coercive instance sum X_i^{2d} + g, deg g < 2d, a few terms.
template <class Rng>
SparsePolynomial random_coercive(std::size_t n, int two_d, Rng& rng, double density = 0.5, double c = 3.0)
{
    return random_bench_polynomial(RandomPolynomialSpec{n, two_d, density, c}, rng);
}

/// Minimum of a form over a sign-symmetric grid on the unit sphere's
/// bounding cube surface; nonnegativity on it is PSD-ness for a form.
inline double form_grid_min(const SparsePolynomial& f, int points_per_axis)
{
    const std::size_t n = f.variable_count();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    const int m = points_per_axis;
    while (true) {
        bool on_surface = false;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = -1.0 + 2.0 * idx[i] / (m - 1);
            on_surface = on_surface || idx[i] == 0 || idx[i] == m - 1;
        }
        if (on_surface)
            best = std::min(best, evaluate(f, x));
        std::size_t i = 0;
        while (i < n && ++idx[i] == m)
            idx[i++] = 0;
        if (i == n)
            break;
    }
    return best;
}

/// Plain grid minimum of a polynomial on [-r, r]^n.
inline double box_grid_min(const SparsePolynomial& f, double radius, int points_per_axis)
{
    const std::size_t n = f.variable_count();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    const int m = points_per_axis;
    while (true) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = -radius + 2.0 * radius * idx[i] / (m - 1);
        best = std::min(best, evaluate(f, x));
        std::size_t i = 0;
        while (i < n && ++idx[i] == m)
            idx[i++] = 0;
        if (i == n)
            break;
    }
    return best;
}

/// Independent GP oracle: zooming grid search in y = log x over [-10, 10]^m.
/// A single equality is eliminated by solving it for its variable with the
/// largest exponent; the grid then runs over the remaining coordinates.
inline double gp_grid_oracle(const GeometricProgram& gp)
{
    const std::size_t m = gp.variable_count();
    if (gp.equalities.size() > 1)
        throw std::invalid_argument("oracle handles at most one equality");
    std::optional<std::size_t> solved;
    if (!gp.equalities.empty()) {
        const auto& eq = gp.equalities.front();
        double biggest = 0.0;
        for (const auto& e : eq.exponents)
            if (std::fabs(e.power) > biggest) {
                biggest = std::fabs(e.power);
                solved = e.variable;
            }
    }
    std::vector<std::size_t> free_vars;
    for (std::size_t v = 0; v < m; ++v)
        if (!solved || v != *solved)
            free_vars.push_back(v);

    auto value_at = [&](const std::vector<double>& yfree) {
        std::vector<double> y(m, 0.0);
        for (std::size_t k = 0; k < free_vars.size(); ++k)
            y[free_vars[k]] = yfree[k];
        if (solved) {
            const auto& eq = gp.equalities.front();
            double rest = eq.log_c, own = 0.0;
            for (const auto& e : eq.exponents) {
                if (e.variable == *solved)
                    own += e.power;
                else
                    rest += e.power * y[e.variable];
            }
            y[*solved] = -rest / own;
            if (std::fabs(y[*solved]) > 10.0)
                return std::numeric_limits<double>::infinity();
        }
        std::vector<double> x(m);
        for (std::size_t i = 0; i < m; ++i)
            x[i] = std::exp(y[i]);
        for (const auto& p : gp.inequalities)
            if (evaluate_posynomial(p, x) > 1.0)
                return std::numeric_limits<double>::infinity();
        return evaluate_posynomial(gp.objective, x);
    };

    const std::size_t r = free_vars.size();
    if (r == 0)
        return value_at({});
    const int pts = r == 1 ? 401 : r == 2 ? 61 : 25;
    std::vector<double> center(r, 0.0);
    double half = 10.0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_y = center;
    for (int level = 0; level < 40; ++level) {
        std::vector<int> idx(r, 0);
        std::vector<double> y(r);
        while (true) {
            for (std::size_t i = 0; i < r; ++i)
                y[i] = std::clamp(center[i] - half + 2.0 * half * idx[i] / (pts - 1), -10.0, 10.0);
            const double v = value_at(y);
            if (v < best) {
                best = v;
                best_y = y;
            }
            std::size_t i = 0;
            while (i < r && ++idx[i] == pts)
                idx[i++] = 0;
            if (i == r)
                break;
        }
        center = best_y;
        half *= 0.5;
    }
    return best;
}

/// Bounded, feasible program in at most 3 variables: random objective, the
/// box |log x_i| <= 3, one random constraint through an interior point y0
/// and sometimes one monomial equality through y0.
template <class Rng>
GeometricProgram random_tiny_program(Rng& rng)
{
    std::uniform_int_distribution<int> count(1, 3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), power(-2.0, 2.0);
    const auto m = static_cast<std::size_t>(count(rng));
    GeometricProgram gp;
    for (std::size_t i = 0; i < m; ++i)
        gp.variables.push_back("x" + std::to_string(i));
    std::vector<double> y0(m);
    for (auto& v : y0)
        v = unit(rng);

    auto random_term = [&](double log_c) {
        LogMonomialTerm t{log_c, {}};
        for (std::size_t i = 0; i < m; ++i)
            t.exponents.push_back({i, power(rng)});
        return t;
    };
    auto term_log_at_y0 = [&](const LogMonomialTerm& t) {
        double s = t.log_c;
        for (const auto& e : t.exponents)
            s += e.power * y0[e.variable];
        return s;
    };

    const int k0 = count(rng);
    for (int k = 0; k < k0; ++k)
        gp.objective.push_back(random_term(unit(rng)));
    for (std::size_t i = 0; i < m; ++i) {
        gp.inequalities.push_back({LogMonomialTerm{-3.0, {{i, 1.0}}}});
        gp.inequalities.push_back({LogMonomialTerm{-3.0, {{i, -1.0}}}});
    }
    Posynomial c;
    const int k1 = count(rng);
    for (int k = 0; k < k1; ++k) {
        LogMonomialTerm t = random_term(0.0);
        t.log_c = std::log(0.5 / k1) - term_log_at_y0(t);
        c.push_back(std::move(t));
    }
    gp.inequalities.push_back(std::move(c));
    if (m >= 2 && unit(rng) > 0.0) {
        LogMonomialTerm eq = random_term(0.0);
        eq.log_c = -term_log_at_y0(eq);
        gp.equalities.push_back(std::move(eq));
    }
    return gp;
}

} // namespace polygp::support

#endif // POLYGP_TESTS_SUPPORT_HPP
