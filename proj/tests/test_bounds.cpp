#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <variant>

#include "polygp/bounds.hpp"
#include "polygp/oracle.hpp"
#include "support.hpp"

using namespace polygp;

namespace {

const char* const kExampleA = "X^6+Y^6+7*X*Y-2*X^2+7";
const char* const kExampleB = "X^6+Y^6+4*X*Y+10*Y+13";
const char* const kExampleC = "X^4+Y^4+X*Y-X^2-Y^2+1";

SparsePolynomial P(const char* text) { return parse_polynomial_with_names(text).polynomial; }

// f_0 - (objective at the point) and feasibility of the point.
std::pair<double, bool> value_at(const SparsePolynomial& f, const AWitness& a)
{
    const FgpProgram prog = std::get<FgpProgram>(fgp_program(f));
    const std::vector<double> x = witness_to_point(prog, a);
    return {prog.view.f0 - evaluate_posynomial(prog.program.objective, x), check_feasible(prog.program, x, 1e-9)};
}

} // namespace

TEST(FgpProgram, QuarticShape)
{
    const FgpProgram prog = std::get<FgpProgram>(fgp_program(P("X^4+Y^4-X^2*Y^2+X+Y")));
    EXPECT_EQ(prog.program.variable_count(), 4u);
    EXPECT_EQ(prog.program.inequalities.size(), 2u);
    ASSERT_EQ(prog.program.equalities.size(), 1u);
    EXPECT_EQ(prog.program.objective.size(), 2u);
    // (2d)^{2d} a31^2 a32^2 / (|f|^{2d} 2^2 2^2) = 1  <=>  a31 a32 = 1/4
    const auto& eq = prog.program.equalities.front();
    EXPECT_NEAR(std::exp(eq.log_c / 2.0), 4.0, 1e-12);
    EXPECT_TRUE(prog.dropped_columns.empty());
}

TEST(FgpProgram, NegativeDiagonal)
{
    auto r = fgp_program(P("-X1^2+X2^2+X1"));
    ASSERT_TRUE(std::holds_alternative<MinusInfinityVerdict>(r));
    EXPECT_TRUE(compute_fgp(P("-X1^2+X2^2+X1")).is_minus_infinity());
}

TEST(FgpProgram, ZeroDiagonalTriage)
{
    const std::vector<std::string> names{"X1", "X2", "X3"};
    const SparsePolynomial with = parse_polynomial("X1^4+X2^4+X1*X2+X1*X3", names);
    EXPECT_TRUE(std::holds_alternative<MinusInfinityVerdict>(fgp_program(with)));
    EXPECT_TRUE(compute_fgp(with).is_minus_infinity());

    const SparsePolynomial without = parse_polynomial("X1^4+X2^4+X1*X2+X3^2", names);
    const auto built = fgp_program(without);
    ASSERT_TRUE(std::holds_alternative<FgpProgram>(built));
    EXPECT_EQ(std::get<FgpProgram>(built).dropped_columns, (std::vector<std::size_t>{2}));
    const BoundResult r = compute_fgp(without);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_NE(r.status_detail.find("dropped"), std::string::npos);
}

TEST(FgpProgram, Errors)
{
    EXPECT_THROW(fgp_program(P("X^3+X")), precondition_error);
    EXPECT_THROW(compute_fgp(P("5")), precondition_error);
}

TEST(ComputeFgp, Examples)
{
    EXPECT_NEAR(compute_fgp(P("X^6+Y^6+Z^6-5*X-4*Y-Z+8")).value, 0.3265, 5e-5);
    EXPECT_NEAR(compute_fgp(P("X^4+Y^4-X^2*Y^2+X+Y")).value, -3.0 / std::pow(2.0, 4.0 / 3.0), 1e-6);
    EXPECT_NEAR(compute_fgp(P("X^40+Y^40+Z^40-X*Y*Z")).value, -0.686, 5e-4);
}

TEST(ComputeFgp, EmptyDelta)
{
    const BoundResult r = compute_fgp(P("X^4+Y^4+X^2*Y^2+3"));
    EXPECT_EQ(r.value, 3.0);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_TRUE(r.witness->empty());
}

TEST(ComputeFgp, InfeasibleEqualities)
{
    // 3 X^2 Y^2 exceeds what X^4 + Y^4 can dominate.
    EXPECT_TRUE(compute_fgp(P("X^4+Y^4-3*X^2*Y^2+X")).is_minus_infinity());
}

TEST(ComputeFgp, WitnessCertifiesShiftedForm)
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const SparsePolynomial f = support::random_coercive(2 + trial % 2, 4 + 2 * (trial % 2), rng, 0.6, 3.0);
        const BoundResult r = compute_fgp(f);
        ASSERT_TRUE(r.witness.has_value());
        const SparsePolynomial form = homogenize(f.plus_constant(-(r.value - 1e-6)));
        const AWitness a = homogenized_witness(f, *r.witness);
        const SuffCndTolerances tol{1e-9, 1e-9};
        ASSERT_TRUE(check_suffcnd(form, a, tol)) << to_string(f);
        const SparsePolynomial diff = expand_certificate(suffcnd_certificate(form, a, tol)) - form;
        for (const auto& [alpha, c] : diff.terms())
            EXPECT_LE(std::fabs(c), 1e-8 * (1.0 + std::fabs(r.value)));
    }
}

TEST(PositiveRoot, Examples)
{
    EXPECT_NEAR(positive_root(std::vector<double>{1.0, 0.0}, 2), 1.0, 1e-12);
    EXPECT_NEAR(positive_root(std::vector<double>{2.0, 1.0}, 2), 2.0, 1e-12);
    EXPECT_NEAR(positive_root(std::vector<double>{6.0, 1.0, 0.0}, 3), 2.0, 1e-12);
    EXPECT_THROW(positive_root(std::vector<double>{0.0, 0.0}, 2), std::invalid_argument);
    EXPECT_THROW(positive_root(std::vector<double>{-1.0, 0.0}, 2), std::invalid_argument);
}

TEST(PositiveRoot, ResidualOnRandomPolynomials)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 12;
        std::vector<double> a(static_cast<std::size_t>(n));
        for (auto& v : a)
            v = trial % 3 == 0 ? u(rng) * 1e-6 : u(rng);
        const double t = positive_root(a, n);
        ASSERT_GT(t, 0.0);
        // p(t -+ tol) brackets the root.
        auto p = [&](double s) {
            double v = std::pow(s, n);
            for (int i = 0; i < n; ++i)
                v -= a[static_cast<std::size_t>(i)] * std::pow(s, i);
            return v;
        };
        const double tol = 1e-10 * (1.0 + t);
        EXPECT_LE(p(t - tol), 0.0);
        EXPECT_GE(p(t + tol), 0.0);
    }
}

TEST(ExplicitBounds, Examples)
{
    EXPECT_NEAR(bound_rl(P(kExampleA)).value, -1.124, 5e-4);
    EXPECT_NEAR(bound_rl(P(kExampleB)).value, -0.81, 5e-3);
    EXPECT_NEAR(bound_rl(P(kExampleC)).value, -0.125, 1e-9);
    EXPECT_NEAR(bound_rfk(P(kExampleA)).value, -0.99, 5e-3);
    EXPECT_NEAR(bound_rfk(P(kExampleB)).value, -0.93, 5e-3);
    EXPECT_NEAR(bound_rfk(P(kExampleC)).value, -0.832, 5e-4);
    EXPECT_NEAR(bound_rdmt(P(kExampleA)).value, -1.67, 5e-3);
    EXPECT_NEAR(bound_rdmt(P(kExampleC)).value, -0.875, 1e-9);
    EXPECT_NEAR(compute_fgp(P(kExampleC)).value, -0.125, 1e-6);
}

TEST(ExplicitBounds, Preconditions)
{
    EXPECT_THROW(bound_rl(P("X^4+Y^4-X^2*Y^2+X")), precondition_error);
    EXPECT_THROW(bound_rfk(P("X^4+X*Y+Y^2")), precondition_error);
    EXPECT_THROW(bound_rdmt(P("X^3+X")), precondition_error);
    const BoundResult r = bound_rl(P("X^4+Y^4+X^2+2"));
    EXPECT_EQ(r.value, 2.0);
    EXPECT_FALSE(r.k_used.has_value());
}

TEST(ExplicitBounds, FeasiblePointsReproduceBounds)
{
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        const SparsePolynomial f = support::random_coercive(1 + trial % 4, 2 * (2 + trial % 3), rng, 0.8, 4.0);
        if (decompose(f).delta.empty())
            continue;
        const BoundResult rl = bound_rl(f), rfk = bound_rfk(f), rdmt = bound_rdmt(f);
        for (const BoundResult* r : {&rl, &rfk, &rdmt}) {
            ASSERT_TRUE(r->witness.has_value());
            const auto [v, feasible] = value_at(f, *r->witness);
            EXPECT_TRUE(feasible) << to_string(r->method) << " " << to_string(f);
            EXPECT_LE(support::rel_diff(v, r->value), 1e-9) << to_string(r->method) << " " << to_string(f);
        }
    }
}

TEST(ExplicitBounds, ChainBelowFgpAndOracle)
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 15; ++trial) {
        const SparsePolynomial f = support::random_coercive(1 + trial % 3, 2 * (2 + trial % 3), rng, 0.8, 4.0);
        const double gp = compute_fgp(f).value;
        for (double b : {bound_rl(f).value, bound_rfk(f).value, bound_rdmt(f).value})
            EXPECT_LE(b, gp + 1e-6 * (1.0 + std::fabs(gp))) << to_string(f);
        EXPECT_LE(gp, estimate_global_min(f).value + 1e-5) << to_string(f);
    }
}

TEST(ExplicitBounds, MonotoneInConstant)
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const SparsePolynomial f = support::random_coercive(2, 6, rng, 0.8, 4.0);
        const SparsePolynomial g = f.plus_constant(2.5);
        EXPECT_NEAR(bound_rl(g).value - bound_rl(f).value, 2.5, 1e-9);
        EXPECT_NEAR(bound_rfk(g).value - bound_rfk(f).value, 2.5, 1e-9);
        EXPECT_NEAR(bound_rdmt(g).value - bound_rdmt(f).value, 2.5, 1e-9);
        EXPECT_NEAR(compute_fgp(g).value - compute_fgp(f).value, 2.5, 1e-6);
    }
}

TEST(SingleTerm, AgreesWithProgram)
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> coeff(-4.0, 4.0), diag(0.3, 3.0);
    int compared = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const int two_d = 2 * (2 + trial % 2);
        SparsePolynomial f(n);
        for (std::size_t i = 0; i < n; ++i)
            f.add_term(ExponentVector::unit(n, i, two_d), diag(rng));
        f.add_term(support::random_exponent(n, 1 + trial % (two_d - 1), rng), coeff(rng));
        f.add_term(ExponentVector(n), coeff(rng));
        const auto closed = single_term_fgp(f);
        if (!closed || decompose(f).omega.size() != 1)
            continue;
        const BoundResult program = solve_fgp_program(f);
        EXPECT_LE(support::rel_diff(program.value, closed->value), 1e-6) << to_string(f);
        ++compared;
    }
    EXPECT_GT(compared, 15);
}

TEST(DiagonalShift, Examples)
{
    const SparsePolynomial f = P("X^4+Y^4+X*Y-X^2+3");
    EXPECT_EQ(apply_diagonal_shift(f, 1.0), f);
    EXPECT_EQ(apply_diagonal_shift(P("2*X^4+2*Y^4+X+1"), 1.0), P("X^4+Y^4+X+1"));
    EXPECT_THROW(apply_diagonal_shift(f, 0.0), std::invalid_argument);

    const SparsePolynomial g = P("X^4+2*X^2*Y^2+Y^4+X+Y");
    const SparsePolynomial shifted = apply_diagonal_shift(g, 1.0);
    EXPECT_EQ(shifted, P("X^4+Y^4+X+Y"));
    const double fstar = estimate_global_min(g).value;
    const double gp = compute_fgp(shifted).value;
    EXPECT_LE(gp, fstar + 1e-6);
    for (double b : {bound_rl(shifted).value, bound_rfk(shifted).value, bound_rdmt(shifted).value})
        EXPECT_LE(b, gp + 1e-6);
}
