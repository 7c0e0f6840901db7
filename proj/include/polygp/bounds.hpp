#ifndef POLYGP_BOUNDS_HPP
#define POLYGP_BOUNDS_HPP

/*
 * Lower bounds for a polynomial f of even degree 2d.
 *
 * f_gp is the largest r for which the homogenization of f - r passes the
 * witness test of certificates.hpp with the constant column solved out.
 * With all f_{2d,i} > 0 it equals f_0 - m*, where m* is the optimum of
 *
 *   minimize   sum_{a in Delta, |a|<2d} (2d-|a|) [ (|f_a|/2d)^{2d} a^a x_a^{-a} ]^{1/(2d-|a|)}
 *   subject to sum_{a in Delta} x_{a,i} / f_{2d,i} <= 1                 (each i)
 *              (2d)^{2d} x_a^a / (|f_a|^{2d} a^a) = 1                   (|a| = 2d)
 *
 * over the variables x_{a,i}, a in Delta, a_i != 0.
 *
 * r_L, r_FK and r_dmt are the objective of that program evaluated at
 * explicit feasible points; they need |a| < 2d on Delta and f_{2d,i} > 0.
 */

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "polygp/certificates.hpp"
#include "polygp/gp_solver.hpp"
#include "polygp/polynomial.hpp"

namespace polygp {

enum class BoundMethod { gp, rl, rfk, rdmt };

inline const char* to_string(BoundMethod m) noexcept
{
    switch (m) {
    case BoundMethod::gp: return "gp";
    case BoundMethod::rl: return "rl";
    case BoundMethod::rfk: return "rfk";
    case BoundMethod::rdmt: return "rdmt";
    }
    return "unknown";
}

struct BoundResult {
    BoundMethod method = BoundMethod::gp;
    double value = -std::numeric_limits<double>::infinity();
    std::optional<AWitness> witness;
    std::optional<double> k_used;
    std::string status_detail;
    int solver_iterations = 0;
    std::optional<double> kkt_residual;

    bool is_minus_infinity() const noexcept { return std::isinf(value) && value < 0; }
    bool operator==(const BoundResult&) const = default;
};

/// Thrown when the input violates a method's hypotheses.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when the geometric program solver fails numerically.
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MinusInfinityVerdict {
    std::string reason;
};

/// One program variable x_{alpha,column}.
struct FgpVariable {
    ExponentVector alpha;
    std::size_t column;
};

struct FgpProgram {
    GeometricProgram program;
    std::vector<FgpVariable> variables;
    DecompositionView view;
    std::vector<std::size_t> dropped_columns;  ///< i with f_{2d,i} = 0
};

namespace detail {

inline std::string exponent_label(const ExponentVector& alpha)
{
    std::string s = "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(alpha[i]);
    }
    return s + ")";
}

inline double log_abs(double v) { return std::log(std::fabs(v)); }

inline DecompositionView checked_decompose(const SparsePolynomial& f)
{
    try {
        return decompose(f);
    } catch (const std::invalid_argument& e) {
        throw precondition_error(e.what());
    }
}

} // namespace detail

/// Builds the f_gp program, or decides f_gp = -inf first:
/// a negative diagonal coefficient, or f_{2d,i} = 0 while some alpha in
/// Delta has alpha_i != 0. Remaining zero-diagonal columns are dropped.
inline std::variant<FgpProgram, MinusInfinityVerdict> fgp_program(const SparsePolynomial& f)
{
    const DecompositionView v = detail::checked_decompose(f);
    for (std::size_t i = 0; i < v.n; ++i)
        if (v.diag[i] < 0.0)
            return MinusInfinityVerdict{"negative diagonal coefficient f_{2d," + std::to_string(i + 1) + "}"};
    FgpProgram out;
    for (std::size_t i = 0; i < v.n; ++i) {
        if (v.diag[i] != 0.0)
            continue;
        for (const auto& [alpha, c] : v.delta)
            if (alpha[i] != 0)
                return MinusInfinityVerdict{"f_{2d," + std::to_string(i + 1) +
                                            "} = 0 while a non-square term involves variable " +
                                            std::to_string(i + 1)};
        out.dropped_columns.push_back(i);
    }

    const double two_d = v.two_d;
    GeometricProgram& gp = out.program;
    std::vector<Posynomial> rows(v.n);
    for (const auto& [alpha, c] : v.delta) {
        const double deficit = two_d - alpha.total_degree();
        const double log_aa = detail::log_alpha_power(alpha);
        LogMonomialTerm objective_term;
        LogMonomialTerm equality_term;
        if (deficit > 0) {
            objective_term.log_c =
                std::log(deficit) + (two_d * (detail::log_abs(c) - std::log(two_d)) + log_aa) / deficit;
        } else {
            equality_term.log_c = two_d * std::log(two_d) - two_d * detail::log_abs(c) - log_aa;
        }
        for (std::size_t i = 0; i < v.n; ++i) {
            if (alpha[i] == 0)
                continue;
            const std::size_t id = gp.variables.size();
            gp.variables.push_back("a[" + detail::exponent_label(alpha) + "," + std::to_string(i + 1) + "]");
            out.variables.push_back({alpha, i});
            if (deficit > 0)
                objective_term.exponents.push_back({id, -alpha[i] / deficit});
            else
                equality_term.exponents.push_back({id, static_cast<double>(alpha[i])});
            rows[i].push_back({-std::log(v.diag[i]), {{id, 1.0}}});
        }
        if (deficit > 0)
            gp.objective.push_back(std::move(objective_term));
        else
            gp.equalities.push_back(std::move(equality_term));
    }
    for (auto& r : rows)
        if (!r.empty())
            gp.inequalities.push_back(std::move(r));
    out.view = v;
    return out;
}

/// Maps a witness onto the program's variable vector.
inline std::vector<double> witness_to_point(const FgpProgram& prog, const AWitness& a)
{
    std::vector<double> x;
    x.reserve(prog.variables.size());
    for (const auto& var : prog.variables)
        x.push_back(a.row(var.alpha).at(var.column));
    return x;
}

/// Inverse of witness_to_point; unused entries are zero.
inline AWitness point_to_witness(const FgpProgram& prog, std::span<const double> x)
{
    if (x.size() != prog.variables.size())
        throw std::invalid_argument("point length does not match program");
    std::map<ExponentVector, std::vector<double>> rows;
    for (const auto& [alpha, c] : prog.view.delta)
        rows.emplace(alpha, std::vector<double>(prog.view.n, 0.0));
    for (std::size_t k = 0; k < x.size(); ++k)
        rows.at(prog.variables[k].alpha).at(prog.variables[k].column) = x[k];
    AWitness a;
    for (auto& [alpha, row] : rows)
        a.set_row(alpha, std::move(row));
    return a;
}

/// GP objective  sum (2d-|a|)[...]^{1/(2d-|a|)}  at a witness (f_0 - r form).
inline double fgp_objective(const SparsePolynomial& f, const AWitness& a)
{
    const DecompositionView v = decompose(f);
    double s = 0.0;
    for (const auto& [alpha, c] : v.delta_lt) {
        const int deficit = v.two_d - alpha.total_degree();
        const double gap = detail::equality_log_gap(alpha, c, a.row(alpha), v.two_d);
        s += deficit * std::exp(-gap / deficit);
    }
    return s;
}

/// The f_gp value computed through the geometric program only.
inline BoundResult solve_fgp_program(const SparsePolynomial& f, const SolverOptions& opts = {})
{
    BoundResult r;
    r.method = BoundMethod::gp;
    auto built = fgp_program(f);
    if (auto* verdict = std::get_if<MinusInfinityVerdict>(&built)) {
        r.value = -std::numeric_limits<double>::infinity();
        r.status_detail = "f_gp = -inf: " + verdict->reason;
        return r;
    }
    const FgpProgram& prog = std::get<FgpProgram>(built);
    if (prog.view.delta.empty()) {
        r.value = prog.view.f0;
        r.witness = AWitness{};
        r.status_detail = "Delta is empty; f_gp = f_0";
        return r;
    }
    const GpSolution sol = solve(prog.program, opts);
    r.solver_iterations = sol.iterations;
    if (std::isfinite(sol.kkt_residual))
        r.kkt_residual = sol.kkt_residual;
    switch (sol.status) {
    case GpStatus::Optimal:
    case GpStatus::ConstantObjective:
        r.value = prog.view.f0 - sol.optimum;
        r.witness = point_to_witness(prog, sol.point);
        r.status_detail = std::string("geometric program ") + to_string(sol.status);
        break;
    case GpStatus::Infeasible:
        r.value = -std::numeric_limits<double>::infinity();
        r.status_detail = "f_gp = -inf: geometric program infeasible (" + sol.message + ")";
        break;
    case GpStatus::Unbounded:
    case GpStatus::NumericalFailure:
        throw solver_error(std::string("geometric program ") + to_string(sol.status) + ": " + sol.message);
    }
    if (!prog.dropped_columns.empty())
        r.status_detail += "; dropped zero-diagonal columns";
    return r;
}

/// Closed form when Omega has a single element; nullopt otherwise.
inline std::optional<BoundResult> single_term_fgp(const SparsePolynomial& f)
{
    const DecompositionView v = detail::checked_decompose(f);
    if (v.omega.size() != 1)
        return std::nullopt;
    BoundResult r;
    r.method = BoundMethod::gp;
    for (std::size_t i = 0; i < v.n; ++i)
        if (v.diag[i] < 0.0) {
            r.status_detail = "single term: negative diagonal coefficient";
            return r;
        }
    if (v.delta.empty()) {
        r.value = v.f0;
        r.witness = AWitness{};
        r.status_detail = "single square term: f_gp = f_0";
        return r;
    }
    const auto& [alpha, c] = *v.delta.begin();
    double log_diag = 0.0;  // log prod f_{2d,i}^{alpha_i}
    for (std::size_t i = 0; i < v.n; ++i) {
        if (alpha[i] == 0)
            continue;
        if (v.diag[i] <= 0.0) {
            r.status_detail = "single term: zero diagonal coefficient on the support";
            return r;
        }
        log_diag += alpha[i] * std::log(v.diag[i]);
    }
    const double two_d = v.two_d;
    // log of |f_a|^{2d} a^a / ((2d)^{2d} prod f_{2d,i}^{a_i})
    const double lg = two_d * detail::log_abs(c) + detail::log_alpha_power(alpha) - two_d * std::log(two_d) - log_diag;
    const int deg = alpha.total_degree();
    std::vector<double> row(v.n, 0.0);
    if (deg < v.two_d) {
        const double deficit = two_d - deg;
        for (std::size_t i = 0; i < v.n; ++i)
            if (alpha[i] != 0)
                row[i] = v.diag[i];
        r.value = v.f0 - deficit * std::exp(lg / deficit);
    } else {
        if (lg > 1e-12) {
            r.status_detail = "single term of degree 2d is not dominated by the diagonal";
            return r;
        }
        const double s = std::exp(lg / deg);
        for (std::size_t i = 0; i < v.n; ++i)
            if (alpha[i] != 0)
                row[i] = s * v.diag[i];
        r.value = v.f0;
    }
    AWitness a;
    a.set_row(alpha, std::move(row));
    r.witness = std::move(a);
    r.status_detail = "single-term closed form";
    return r;
}

/// f_gp. For |Omega| = 1 the closed form is also evaluated and the larger
/// of the two values is returned; a disagreement is noted in status_detail.
inline BoundResult compute_fgp(const SparsePolynomial& f, const SolverOptions& opts = {})
{
    BoundResult r = solve_fgp_program(f, opts);
    if (auto closed = single_term_fgp(f)) {
        const double a = closed->value, b = r.value;
        const bool agree = (std::isinf(a) && std::isinf(b)) ||
                           std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(a));
        if (!agree)
            r.status_detail += "; closed form disagrees (" + detail::format_double(a) + ")";
        if (a > b) {
            closed->solver_iterations = r.solver_iterations;
            closed->kkt_residual = r.kkt_residual;
            closed->status_detail += agree ? "" : "; geometric program gave " + detail::format_double(b);
            return *closed;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Explicit bounds
// ---------------------------------------------------------------------------

/// The unique positive root of t^n - sum_{i<n} a_i t^i, a_i >= 0 not all zero.
inline double positive_root(std::span<const double> a, int n)
{
    if (n < 1)
        throw std::invalid_argument("degree must be at least 1");
    if (a.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("expected coefficients a_0..a_{n-1}");
    double amax = 0.0;
    for (double v : a) {
        if (!(v >= 0.0))
            throw std::invalid_argument("coefficients must be nonnegative");
        amax = std::max(amax, v);
    }
    if (amax == 0.0)
        throw std::invalid_argument("all coefficients are zero: no positive root");

    auto p = [&](double t, double* dp) {
        double v = 1.0, d = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            d = d * t + v;
            v = v * t - a[static_cast<std::size_t>(i)];
        }
        if (dp)
            *dp = d;
        return v;
    };
    // p < 0 on (0, root) and p > 0 beyond; the Cauchy bound brackets the root.
    double lo = 0.0, hi = 1.0 + amax;
    double t = hi;
    for (int it = 0; it < 500; ++it) {
        double dp = 0.0;
        const double v = p(t, &dp);
        if (v == 0.0)
            return t;
        if (v < 0.0)
            lo = t;
        else
            hi = t;
        if (hi - lo <= 1e-12 * (1.0 + hi) * 0.5)
            break;
        double next = dp > 0.0 ? t - v / dp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        t = next;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

inline DecompositionView explicit_bound_view(const SparsePolynomial& f)
{
    const DecompositionView v = checked_decompose(f);
    for (const auto& [alpha, c] : v.delta)
        if (alpha.total_degree() >= v.two_d)
            throw precondition_error("explicit bounds need |alpha| < 2d for every non-square term");
    for (std::size_t i = 0; i < v.n; ++i)
        if (!(v.diag[i] > 0.0))
            throw precondition_error("explicit bounds need every f_{2d,i} > 0");
    return v;
}

/// log(f_{2d}^{-alpha}) = -sum alpha_i log f_{2d,i}
inline double log_diag_power(const DecompositionView& v, const ExponentVector& alpha)
{
    double s = 0.0;
    for (std::size_t i = 0; i < v.n; ++i)
        s -= alpha[i] * std::log(v.diag[i]);
    return s;
}

inline AWitness rows_from(const DecompositionView& v, const std::function<double(const ExponentVector&, double, std::size_t)>& entry)
{
    AWitness a;
    for (const auto& [alpha, c] : v.delta) {
        std::vector<double> row(v.n, 0.0);
        for (std::size_t i = 0; i < v.n; ++i)
            if (alpha[i] != 0)
                row[i] = entry(alpha, c, i);
        a.set_row(alpha, std::move(row));
    }
    return a;
}

/// k = max_i C(t^{2d} - (1/2d) sum alpha_i |f_a| f_{2d,i}^{-|a|/2d} t^{|a|})
inline double rl_k(const DecompositionView& v)
{
    double k = 0.0;
    for (std::size_t i = 0; i < v.n; ++i) {
        std::vector<double> coeffs(static_cast<std::size_t>(v.two_d), 0.0);
        bool any = false;
        for (const auto& [alpha, c] : v.delta) {
            if (alpha[i] == 0)
                continue;
            const double deg = alpha.total_degree();
            coeffs[static_cast<std::size_t>(alpha.total_degree())] +=
                alpha[i] * std::fabs(c) * std::exp(-deg / v.two_d * std::log(v.diag[i])) / v.two_d;
            any = true;
        }
        if (any)
            k = std::max(k, positive_root(coeffs, v.two_d));
    }
    return k;
}

/// k = C(t^{2d} - sum_j b_j t^j)
inline double rfk_k(const DecompositionView& v)
{
    std::vector<double> b(static_cast<std::size_t>(v.two_d), 0.0);
    for (const auto& [alpha, c] : v.delta) {
        const int j = alpha.total_degree();
        const double rest = v.two_d - j;
        const double lg = rest / v.two_d * std::log(rest) + std::log(std::fabs(c)) +
                          (log_alpha_power(alpha) + log_diag_power(v, alpha)) / v.two_d;
        b[static_cast<std::size_t>(j)] += std::exp(lg) / v.two_d;
    }
    return positive_root(b, v.two_d);
}

} // namespace detail

/// a_{alpha,i} = alpha_i |f_a| f_{2d,i}^{1-|a|/2d} / (2d k^{2d-|a|})
inline AWitness rl_feasible_point(const SparsePolynomial& f, double k)
{
    const DecompositionView v = detail::explicit_bound_view(f);
    const double two_d = v.two_d;
    return detail::rows_from(v, [&](const ExponentVector& alpha, double c, std::size_t i) {
        const double deg = alpha.total_degree();
        return alpha[i] * std::fabs(c) * std::exp((1.0 - deg / two_d) * std::log(v.diag[i]) -
                                                  (two_d - deg) * std::log(k)) / two_d;
    });
}

/// a_{alpha,i} = (2d-|a|)^{(2d-|a|)/2d} (|f_a|/2d) (a^a f_{2d}^{-a})^{1/2d} f_{2d,i} k^{|a|-2d}
inline AWitness rfk_feasible_point(const SparsePolynomial& f, double k)
{
    const DecompositionView v = detail::explicit_bound_view(f);
    const double two_d = v.two_d;
    return detail::rows_from(v, [&](const ExponentVector& alpha, double c, std::size_t i) {
        const double deg = alpha.total_degree();
        const double rest = two_d - deg;
        const double lg = rest / two_d * std::log(rest) + std::log(std::fabs(c) / two_d) +
                          (detail::log_alpha_power(alpha) + detail::log_diag_power(v, alpha)) / two_d +
                          std::log(v.diag[i]) + (deg - two_d) * std::log(k);
        return std::exp(lg);
    });
}

/// a_{alpha,i} = f_{2d,i} / |Delta|
inline AWitness rdmt_feasible_point(const SparsePolynomial& f)
{
    const DecompositionView v = detail::explicit_bound_view(f);
    const double t = static_cast<double>(v.delta.size());
    return detail::rows_from(v, [&](const ExponentVector&, double, std::size_t i) { return v.diag[i] / t; });
}

/// r_L = f_0 - (1/2d) sum (2d-|a|) |f_a| k^{|a|} (f_{2d}^{-a})^{1/2d}
inline BoundResult bound_rl(const SparsePolynomial& f)
{
    const DecompositionView v = detail::explicit_bound_view(f);
    BoundResult r;
    r.method = BoundMethod::rl;
    if (v.delta.empty()) {
        r.value = v.f0;
        r.status_detail = "Delta is empty";
        return r;
    }
    const double k = detail::rl_k(v);
    double s = 0.0;
    for (const auto& [alpha, c] : v.delta) {
        const double deg = alpha.total_degree();
        s += (v.two_d - deg) * std::fabs(c) *
             std::exp(deg * std::log(k) + detail::log_diag_power(v, alpha) / v.two_d);
    }
    r.value = v.f0 - s / v.two_d;
    r.k_used = k;
    r.witness = rl_feasible_point(f, k);
    r.status_detail = "k = max positive root";
    return r;
}

/// r_FK = f_0 - k^{2d}
inline BoundResult bound_rfk(const SparsePolynomial& f)
{
    const DecompositionView v = detail::explicit_bound_view(f);
    BoundResult r;
    r.method = BoundMethod::rfk;
    if (v.delta.empty()) {
        r.value = v.f0;
        r.status_detail = "Delta is empty";
        return r;
    }
    const double k = detail::rfk_k(v);
    r.value = v.f0 - std::pow(k, v.two_d);
    r.k_used = k;
    r.witness = rfk_feasible_point(f, k);
    r.status_detail = "k = positive root";
    return r;
}

/// r_dmt = f_0 - sum (2d-|a|) [ (|f_a|/2d)^{2d} t^{|a|} a^a f_{2d}^{-a} ]^{1/(2d-|a|)},  t = |Delta|
inline BoundResult bound_rdmt(const SparsePolynomial& f)
{
    const DecompositionView v = detail::explicit_bound_view(f);
    BoundResult r;
    r.method = BoundMethod::rdmt;
    if (v.delta.empty()) {
        r.value = v.f0;
        r.status_detail = "Delta is empty";
        return r;
    }
    const double t = static_cast<double>(v.delta.size());
    double s = 0.0;
    for (const auto& [alpha, c] : v.delta) {
        const double deg = alpha.total_degree();
        const double rest = v.two_d - deg;
        const double lg = v.two_d * std::log(std::fabs(c) / v.two_d) + deg * std::log(t) +
                          detail::log_alpha_power(alpha) + detail::log_diag_power(v, alpha);
        s += rest * std::exp(lg / rest);
    }
    r.value = v.f0 - s;
    r.witness = rdmt_feasible_point(f);
    r.status_detail = "t = |Delta| = " + std::to_string(v.delta.size());
    return r;
}

/// Replaces the top-degree form of f by epsilon * sum X_i^{2d}. Valid as a
/// lower-bound device only if f_{2d} - epsilon * sum X_i^{2d} is SOS, which
/// the caller asserts.
inline SparsePolynomial apply_diagonal_shift(const SparsePolynomial& f, double epsilon)
{
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    const int deg = f.degree();
    if (deg == 0 || deg % 2 != 0)
        throw std::invalid_argument("need a non-constant polynomial of even degree");
    SparsePolynomial g(f.variable_count());
    for (const auto& [alpha, c] : f.terms())
        if (alpha.total_degree() < deg)
            g.add_term(alpha, c);
    for (std::size_t i = 0; i < f.variable_count(); ++i)
        g.add_term(ExponentVector::unit(f.variable_count(), i, deg), epsilon);
    return g;
}

} // namespace polygp

#endif // POLYGP_BOUNDS_HPP
