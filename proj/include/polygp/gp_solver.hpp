#ifndef POLYGP_GP_SOLVER_HPP
#define POLYGP_GP_SOLVER_HPP

/*
 * Geometric programs
 *
 *   minimize    phi_0(x)
 *   subject to  phi_i(x) <= 1,   psi_j(x) = 1,     x > 0,
 *
 * with posynomials phi_i and monomials psi_j, solved in the variables
 * y = log x. There every posynomial becomes a log-sum-exp of affine forms
 * (convex) and every monomial equality an affine equality C y = g.
 *
 * The equalities are eliminated once, y = y0 + N z with N an orthonormal
 * basis of ker C. A phase-I barrier run on  min s  s.t. F_i(z) <= s
 * locates a strictly feasible point; phase II follows the central path of
 *
 *   t F_0(z) - sum_i log(-F_i(z))
 *
 * until the duality gap m/t (measured on log phi_0, hence relative on
 * phi_0) drops below the requested tolerance.
 *
 * Coefficients are carried as log c. Callers assembling coefficients such
 * as |f_a|^{2d} alpha^alpha / (2d)^{2d} at 2d = 40 never form them.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace polygp {

struct MonomialExponent {
    std::size_t variable;
    double power;
};

/// c x_1^{a_1} ... x_n^{a_n} stored as log c and the nonzero a_i.
struct LogMonomialTerm {
    double log_c = 0.0;
    std::vector<MonomialExponent> exponents;
};

using Posynomial = std::vector<LogMonomialTerm>;

struct GeometricProgram {
    std::vector<std::string> variables;
    Posynomial objective;
    std::vector<Posynomial> inequalities;      ///< each posynomial <= 1
    std::vector<LogMonomialTerm> equalities;   ///< each monomial == 1

    std::size_t variable_count() const noexcept { return variables.size(); }

    void validate() const
    {
        auto check_term = [&](const LogMonomialTerm& t) {
            if (!std::isfinite(t.log_c))
                throw std::invalid_argument("non-finite log coefficient");
            for (const auto& e : t.exponents) {
                if (e.variable >= variables.size())
                    throw std::invalid_argument("term references undeclared variable");
                if (!std::isfinite(e.power))
                    throw std::invalid_argument("non-finite exponent");
            }
        };
        for (const auto& t : objective)
            check_term(t);
        for (const auto& p : inequalities)
            for (const auto& t : p)
                check_term(t);
        for (const auto& t : equalities)
            check_term(t);
    }
};

enum class GpStatus { Optimal, Infeasible, Unbounded, ConstantObjective, NumericalFailure };

inline const char* to_string(GpStatus s) noexcept
{
    switch (s) {
    case GpStatus::Optimal: return "optimal";
    case GpStatus::Infeasible: return "infeasible";
    case GpStatus::Unbounded: return "unbounded";
    case GpStatus::ConstantObjective: return "constant-objective";
    case GpStatus::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

struct GpSolution {
    GpStatus status = GpStatus::NumericalFailure;
    double optimum = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> point;  ///< indexed like GeometricProgram::variables
    int iterations = 0;
    double kkt_residual = std::numeric_limits<double>::quiet_NaN();
    std::string message;
};

struct SolverOptions {
    double gap_tolerance = 1e-8;          ///< relative duality gap on the objective
    double feasibility_tolerance = 1e-8;  ///< relative, on constraints
    int max_iterations = 200;             ///< Newton steps per centering run
    double barrier_growth = 10.0;
};

/// sum_k exp(log_c_k + sum_i a_ik log x_i), accumulated as a log-sum-exp.
inline double evaluate_posynomial(const Posynomial& p, const std::vector<double>& x)
{
    if (p.empty())
        return 0.0;
    std::vector<double> s;
    s.reserve(p.size());
    for (const auto& t : p) {
        double v = t.log_c;
        for (const auto& e : t.exponents) {
            if (e.variable >= x.size())
                throw std::invalid_argument("point does not cover all variables");
            if (!(x[e.variable] > 0.0))
                throw std::invalid_argument("posynomial evaluated at a nonpositive coordinate");
            v += e.power * std::log(x[e.variable]);
        }
        s.push_back(v);
    }
    const double mx = *std::max_element(s.begin(), s.end());
    if (!std::isfinite(mx))
        return std::exp(mx);
    double acc = 0.0;
    for (double v : s)
        acc += std::exp(v - mx);
    return std::exp(mx) * acc;
}

inline double evaluate_monomial(const LogMonomialTerm& t, const std::vector<double>& x)
{
    return evaluate_posynomial(Posynomial{t}, x);
}

/// Inequalities within 1 + tol, equalities within relative tol of 1.
inline bool check_feasible(const GeometricProgram& gp, const std::vector<double>& x, double tol = 1e-8)
{
    if (x.size() != gp.variable_count())
        return false;
    for (double v : x)
        if (!(v > 0.0))
            return false;
    for (const auto& p : gp.inequalities)
        if (evaluate_posynomial(p, x) > 1.0 + tol)
            return false;
    for (const auto& t : gp.equalities)
        if (std::fabs(evaluate_monomial(t, x) - 1.0) > tol)
            return false;
    return true;
}

namespace detail {

/// F(z) = log sum_k exp(A_k z + b_k)
struct AffineLse {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    bool empty() const { return b.size() == 0; }

    double value(const Eigen::VectorXd& z) const
    {
        const Eigen::VectorXd s = A * z + b;
        const double mx = s.maxCoeff();
        return mx + std::log((s.array() - mx).exp().sum());
    }

    double eval(const Eigen::VectorXd& z, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) const
    {
        const Eigen::VectorXd s = A * z + b;
        const double mx = s.maxCoeff();
        Eigen::ArrayXd w = (s.array() - mx).exp();
        const double total = w.sum();
        const double v = mx + std::log(total);
        if (grad || hess) {
            const Eigen::VectorXd p = (w / total).matrix();
            const Eigen::VectorXd g = A.transpose() * p;
            if (grad)
                *grad = g;
            if (hess)
                *hess = A.transpose() * p.asDiagonal() * A - g * g.transpose();
        }
        return v;
    }
};

struct NewtonOutcome {
    int iterations = 0;
    bool converged = false;
    bool nonfinite = false;
    bool stopped_early = false;
};

// Damped Newton with backtracking. `eval(x, grad, hess)` returns +inf
// outside the domain. `stop(x)` allows early exit after each step.
template <class Eval, class Stop>
NewtonOutcome newton_minimize(Eigen::VectorXd& x, Eval&& eval, Stop&& stop, int max_iters, double tol,
                              double max_step = std::numeric_limits<double>::infinity())
{
    NewtonOutcome out;
    const Eigen::Index n = x.size();
    Eigen::VectorXd g(n), dx(n);
    Eigen::MatrixXd H(n, n);
    for (int it = 0; it < max_iters; ++it) {
        const double f = eval(x, &g, &H);
        if (!std::isfinite(f) || !g.allFinite() || !H.allFinite()) {
            out.nonfinite = true;
            return out;
        }
        double shift = 0.0;
        const double scale = 1.0 + H.cwiseAbs().maxCoeff();
        for (int attempt = 0; attempt < 40; ++attempt) {
            Eigen::MatrixXd Hs = H;
            Hs.diagonal().array() += shift;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(Hs);
            if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
                dx = ldlt.solve(-g);
                if (dx.allFinite() && g.dot(dx) < 0.0)
                    break;
            }
            shift = shift == 0.0 ? 1e-12 * scale : shift * 10.0;
            dx = -g;
        }
        double decrement = -g.dot(dx);
        if (!(decrement > 0.0)) {
            out.converged = true;
            out.iterations = it;
            return out;
        }
        if (decrement / 2.0 <= std::max(tol, 1e-14 * std::fabs(f))) {
            out.converged = true;
            out.iterations = it;
            return out;
        }
        const double longest = dx.cwiseAbs().maxCoeff();
        double step = longest > max_step ? max_step / longest : 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 80; ++ls) {
            const Eigen::VectorXd trial = x + step * dx;
            const double ft = eval(trial, nullptr, nullptr);
            if (std::isfinite(ft) && ft < f && ft <= f - 0.01 * step * decrement) {
                x = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        out.iterations = it + 1;
        if (!accepted) {
            // No representable decrease left: x is centred to working precision.
            out.converged = true;
            return out;
        }
        if (stop(x)) {
            out.stopped_early = true;
            out.converged = true;
            return out;
        }
    }
    return out;
}

inline AffineLse build_lse(const Posynomial& p, std::size_t m, const Eigen::VectorXd& y0, const Eigen::MatrixXd& N)
{
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(m));
    Eigen::VectorXd b(static_cast<Eigen::Index>(p.size()));
    for (std::size_t k = 0; k < p.size(); ++k) {
        b(static_cast<Eigen::Index>(k)) = p[k].log_c;
        for (const auto& e : p[k].exponents)
            A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(e.variable)) += e.power;
    }
    AffineLse f;
    f.b = b + A * y0;
    f.A = A * N;
    return f;
}

class BarrierSolver {
public:
    BarrierSolver(const GeometricProgram& gp, const SolverOptions& opts) : gp_(gp), opts_(opts) {}

    GpSolution run()
    {
        gp_.validate();
        GpSolution sol;
        const std::size_t m = gp_.variable_count();
        if (!eliminate_equalities(sol))
            return sol;

        objective_ = build_lse(gp_.objective, m, y0_, N_);
        for (const auto& p : gp_.inequalities)
            if (!p.empty())
                constraints_.push_back(build_lse(p, m, y0_, N_));

        Eigen::VectorXd z = Eigen::VectorXd::Zero(N_.cols());
        double shift = 0.0;
        if (!find_feasible(z, shift, sol))
            return sol;

        if (objective_.empty()) {
            sol.status = GpStatus::ConstantObjective;
            sol.optimum = 0.0;
            sol.kkt_residual = 0.0;
            sol.point = to_point(z);
            sol.message = "empty objective; feasible";
            return sol;
        }
        return minimize(z, shift, sol);
    }

private:
    bool eliminate_equalities(GpSolution& sol)
    {
        const std::size_t m = gp_.variable_count();
        const auto p = static_cast<Eigen::Index>(gp_.equalities.size());
        const auto mi = static_cast<Eigen::Index>(m);
        y0_ = Eigen::VectorXd::Zero(mi);
        if (p == 0) {
            N_ = Eigen::MatrixXd::Identity(mi, mi);
            return true;
        }
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(p, mi);
        Eigen::VectorXd g(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            const auto& t = gp_.equalities[static_cast<std::size_t>(j)];
            g(j) = -t.log_c;
            for (const auto& e : t.exponents)
                C(j, static_cast<Eigen::Index>(e.variable)) += e.power;
        }
        Eigen::Index rank = 0;
        if (mi > 0) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
            svd.setThreshold(1e-10);
            rank = svd.rank();
            y0_ = svd.solve(g);
            N_ = svd.matrixV().rightCols(mi - rank);
        } else {
            N_ = Eigen::MatrixXd::Zero(0, 0);
        }
        const double residual = (C * y0_ - g).norm();
        if (!(residual <= 1e-9 * (1.0 + g.norm()))) {
            sol.status = GpStatus::Infeasible;
            sol.message = "monomial equalities are inconsistent";
            return false;
        }
        return true;
    }

    std::vector<double> to_point(const Eigen::VectorXd& z) const
    {
        const Eigen::VectorXd y = y0_ + N_ * z;
        std::vector<double> x(static_cast<std::size_t>(y.size()));
        for (Eigen::Index i = 0; i < y.size(); ++i)
            x[static_cast<std::size_t>(i)] = std::exp(y(i));
        return x;
    }

    double max_constraint(const Eigen::VectorXd& z) const
    {
        double mx = -std::numeric_limits<double>::infinity();
        for (const auto& c : constraints_)
            mx = std::max(mx, c.value(z));
        return mx;
    }

    // Phase I. On success z is strictly feasible for F_i(z) - shift < 0;
    // shift > 0 only when the feasible set has no interior, and then it is
    // below the feasibility tolerance.
    bool find_feasible(Eigen::VectorXd& z, double& shift, GpSolution& sol)
    {
        shift = 0.0;
        if (constraints_.empty())
            return true;
        const double tau = opts_.feasibility_tolerance;
        const double start_max = max_constraint(z);
        if (start_max < 0.0)
            return true;
        const Eigen::Index r = z.size();
        if (r == 0) {
            if (start_max > tau) {
                sol.status = GpStatus::Infeasible;
                sol.message = "constraints violated at the unique point fixed by the equalities";
                return false;
            }
            shift = start_max + 1e-12;
            return true;
        }

        const double margin = -1e-3;
        Eigen::VectorXd w(r + 1);
        w.head(r) = z;
        w(r) = start_max + 1.0;
        const double mcount = static_cast<double>(constraints_.size());
        double t = 1.0;
        auto eval = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) -> double {
            const Eigen::VectorXd zz = x.head(r);
            const double s = x(r);
            double val = t * s;
            if (grad) {
                grad->setZero(r + 1);
                (*grad)(r) = t;
            }
            if (hess)
                hess->setZero(r + 1, r + 1);
            Eigen::VectorXd gi;
            Eigen::MatrixXd hi;
            for (const auto& c : constraints_) {
                const double fi = c.eval(zz, grad || hess ? &gi : nullptr, hess ? &hi : nullptr);
                const double slack = s - fi;
                if (!(slack > 0.0))
                    return std::numeric_limits<double>::infinity();
                val -= std::log(slack);
                if (grad) {
                    grad->head(r) += gi / slack;
                    (*grad)(r) -= 1.0 / slack;
                }
                if (hess) {
                    Eigen::VectorXd u(r + 1);
                    u.head(r) = gi;
                    u(r) = -1.0;
                    hess->topLeftCorner(r, r) += hi / slack;
                    hess->noalias() += u * u.transpose() / (slack * slack);
                }
            }
            return val;
        };
        auto feasible_enough = [&](const Eigen::VectorXd& x) { return max_constraint(x.head(r)) <= margin; };

        while (true) {
            const NewtonOutcome o = newton_minimize(w, eval, feasible_enough, opts_.max_iterations, 1e-10, 2.0);
            sol.iterations += o.iterations;
            if (o.nonfinite || !o.converged) {
                sol.status = GpStatus::NumericalFailure;
                sol.message = o.nonfinite ? "non-finite values in phase I" : "phase I iteration limit";
                return false;
            }
            if (o.stopped_early || max_constraint(w.head(r)) <= margin)
                break;
            if (mcount / t < 1e-2 * tau)
                break;
            t *= opts_.barrier_growth;
        }
        z = w.head(r);
        const double best = max_constraint(z);
        if (best < 0.0)
            return true;
        if (best > tau) {
            sol.status = GpStatus::Infeasible;
            sol.message = "phase I optimum " + std::to_string(best) + " exceeds feasibility tolerance";
            return false;
        }
        shift = best + 1e-12;
        return true;
    }

    GpSolution minimize(Eigen::VectorXd& z, double shift, GpSolution& sol)
    {
        const Eigen::Index r = z.size();
        const double mcount = static_cast<double>(constraints_.size());
        const double unbounded_level = -1.0 / opts_.gap_tolerance;
        double t = 1.0;
        bool unbounded = false;

        auto eval = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) -> double {
            Eigen::VectorXd gi;
            Eigen::MatrixXd hi;
            double val = t * objective_.eval(x, grad, hess);
            if (grad)
                *grad *= t;
            if (hess)
                *hess *= t;
            for (const auto& c : constraints_) {
                const double fi = c.eval(x, grad || hess ? &gi : nullptr, hess ? &hi : nullptr) - shift;
                if (!(fi < 0.0))
                    return std::numeric_limits<double>::infinity();
                val -= std::log(-fi);
                if (grad)
                    *grad -= gi / fi;
                if (hess)
                    hess->noalias() += hi / (-fi) + gi * gi.transpose() / (fi * fi);
            }
            return val;
        };
        auto runaway = [&](const Eigen::VectorXd& x) {
            if (objective_.value(x) < unbounded_level) {
                unbounded = true;
                return true;
            }
            return false;
        };

        if (r > 0) {
            while (true) {
                const NewtonOutcome o = newton_minimize(z, eval, runaway, opts_.max_iterations, 1e-10);
                sol.iterations += o.iterations;
                if (unbounded) {
                    sol.status = GpStatus::Unbounded;
                    sol.optimum = 0.0;
                    sol.point = to_point(z);
                    sol.message = "objective decreases without bound (log value below -1/gap_tolerance)";
                    return sol;
                }
                if (o.nonfinite || !o.converged) {
                    sol.status = GpStatus::NumericalFailure;
                    sol.message = o.nonfinite ? "non-finite values in phase II" : "centering iteration limit";
                    return sol;
                }
                if (mcount / t < opts_.gap_tolerance)
                    break;
                t *= opts_.barrier_growth;
            }
        }

        sol.point = to_point(z);
        sol.optimum = evaluate_posynomial(gp_.objective, sol.point);
        if (!std::isfinite(sol.optimum)) {
            sol.status = GpStatus::NumericalFailure;
            sol.message = "non-finite objective at the final point";
            return sol;
        }

        Eigen::VectorXd g0, residual;
        objective_.eval(z, &g0, nullptr);
        residual = g0;
        for (const auto& c : constraints_) {
            Eigen::VectorXd gi;
            const double fi = c.eval(z, &gi, nullptr) - shift;
            residual += gi / (t * -fi);
        }
        sol.kkt_residual = residual.size() ? residual.norm() : 0.0;
        sol.status = GpStatus::Optimal;
        sol.message = shift > 0.0 ? "optimal; feasible set has empty interior, constraints relaxed by "
                                        + std::to_string(shift)
                                  : "optimal";
        return sol;
    }

    const GeometricProgram& gp_;
    SolverOptions opts_;
    Eigen::VectorXd y0_;
    Eigen::MatrixXd N_;
    AffineLse objective_;
    std::vector<AffineLse> constraints_;
};

} // namespace detail

/// Solves a geometric program. Infeasibility, unboundedness and numerical
/// trouble are reported through GpSolution::status, never thrown.
inline GpSolution solve(const GeometricProgram& gp, const SolverOptions& opts = {})
{
    return detail::BarrierSolver(gp, opts).run();
}

} // namespace polygp

#endif // POLYGP_GP_SOLVER_HPP
