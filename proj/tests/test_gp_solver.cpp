#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <variant>

#include "polygp/bounds.hpp"
#include "polygp/gp_solver.hpp"
#include "support.hpp"

using namespace polygp;

namespace {

GeometricProgram one_variable(std::vector<std::string> names = {"x"})
{
    GeometricProgram gp;
    gp.variables = std::move(names);
    return gp;
}

FgpProgram quartic_program()
{
    return std::get<FgpProgram>(fgp_program(parse_polynomial("X1^4+X2^4-X1^2*X2^2+X1+X2")));
}

std::vector<double> quartic_point(const FgpProgram& prog, double a32)
{
    std::vector<double> x;
    for (const auto& v : prog.variables)
        x.push_back(v.alpha == ExponentVector{2, 2} && v.column == 1 ? a32 : 0.5);
    return x;
}

double lse(const Posynomial& p, const std::vector<double>& y)
{
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> s;
    for (const auto& t : p) {
        double v = t.log_c;
        for (const auto& e : t.exponents)
            v += e.power * y[e.variable];
        s.push_back(v);
        mx = std::max(mx, v);
    }
    double acc = 0.0;
    for (double v : s)
        acc += std::exp(v - mx);
    return mx + std::log(acc);
}

} // namespace

TEST(Solve, ReciprocalConstraint)
{
    GeometricProgram gp = one_variable();
    gp.objective = {{0.0, {{0, 1.0}}}};
    gp.inequalities = {{{0.0, {{0, -1.0}}}}};
    const GpSolution s = solve(gp);
    ASSERT_EQ(s.status, GpStatus::Optimal) << s.message;
    EXPECT_NEAR(s.optimum, 1.0, 1e-6);
    EXPECT_NEAR(s.point[0], 1.0, 1e-6);
}

TEST(Solve, AmGmEquality)
{
    GeometricProgram gp = one_variable({"x", "y"});
    gp.objective = {{0.0, {{0, 1.0}}}, {0.0, {{1, 1.0}}}};
    gp.equalities = {{0.0, {{0, -1.0}, {1, -1.0}}}};
    const GpSolution s = solve(gp);
    ASSERT_EQ(s.status, GpStatus::Optimal) << s.message;
    EXPECT_NEAR(s.optimum, 2.0, 1e-6);
    EXPECT_NEAR(s.point[0], 1.0, 1e-4);
    EXPECT_NEAR(s.point[1], 1.0, 1e-4);
}

TEST(Solve, QuarticProgram)
{
    const FgpProgram prog = quartic_program();
    const GpSolution s = solve(prog.program);
    ASSERT_EQ(s.status, GpStatus::Optimal) << s.message;
    EXPECT_NEAR(s.optimum, 3.0 / std::pow(2.0, 4.0 / 3.0), 1e-6);
    EXPECT_TRUE(check_feasible(prog.program, s.point, 1e-8));
    EXPECT_NEAR(evaluate_posynomial(prog.program.objective, s.point), s.optimum, 1e-9);
}

TEST(Solve, Infeasible)
{
    GeometricProgram gp = one_variable();
    gp.objective = {{0.0, {{0, 1.0}}}};
    gp.inequalities = {{{0.0, {{0, 1.0}}}}, {{std::log(2.0), {{0, -1.0}}}}};
    EXPECT_EQ(solve(gp).status, GpStatus::Infeasible);
}

TEST(Solve, ConstantObjective)
{
    GeometricProgram gp = one_variable();
    gp.inequalities = {{{0.0, {{0, 1.0}}}}};
    const GpSolution s = solve(gp);
    EXPECT_EQ(s.status, GpStatus::ConstantObjective);
    EXPECT_EQ(s.optimum, 0.0);
}

TEST(Solve, Unbounded)
{
    GeometricProgram gp = one_variable();
    gp.objective = {{0.0, {{0, 1.0}}}};
    EXPECT_EQ(solve(gp).status, GpStatus::Unbounded);
}

TEST(Solve, RejectsMalformedProgram)
{
    GeometricProgram gp = one_variable();
    gp.objective = {{0.0, {{3, 1.0}}}};
    EXPECT_THROW(solve(gp), std::invalid_argument);
}

TEST(Evaluate, Examples)
{
    EXPECT_EQ(evaluate_posynomial({{0.0, {}}}, {3.0}), 1.0);
    const Posynomial p = {{std::log(2.0), {{0, 2.0}, {1, -1.0}}}};
    EXPECT_NEAR(evaluate_posynomial(p, {2.0, 4.0}), 2.0, 1e-15);
    EXPECT_THROW(evaluate_posynomial(p, {0.0, 1.0}), std::invalid_argument);
    const FgpProgram prog = quartic_program();
    EXPECT_NEAR(evaluate_posynomial(prog.program.objective, quartic_point(prog, 0.5)),
                3.0 / std::pow(2.0, 4.0 / 3.0), 1e-12);
}

TEST(Evaluate, HugeExponentsStayFinite)
{
    const Posynomial p = {{800.0, {{0, 1.0}}}, {799.0, {}}};
    EXPECT_TRUE(std::isinf(evaluate_posynomial(p, {1.0})));
    const Posynomial q = {{-700.0, {}}, {-701.0, {}}};
    EXPECT_NEAR(evaluate_posynomial(q, {1.0}) / std::exp(-700.0), 1.0 + std::exp(-1.0), 1e-12);
}

TEST(CheckFeasible, Examples)
{
    GeometricProgram gp = one_variable({"x", "y"});
    EXPECT_TRUE(check_feasible(gp, {0.3, 7.0}));
    const FgpProgram prog = quartic_program();
    EXPECT_EQ(prog.program.variable_count(), 4u);
    EXPECT_TRUE(check_feasible(prog.program, quartic_point(prog, 0.5)));
    EXPECT_FALSE(check_feasible(prog.program, quartic_point(prog, 1.0)));
}

TEST(Properties, RandomProgramsMatchGridOracle)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const GeometricProgram gp = support::random_tiny_program(rng);
        const GpSolution s = solve(gp);
        ASSERT_EQ(s.status, GpStatus::Optimal) << s.message;
        EXPECT_LE(support::rel_diff(s.optimum, support::gp_grid_oracle(gp)), 1e-3) << trial;
        EXPECT_TRUE(check_feasible(gp, s.point, 1e-7));
    }
}

TEST(Properties, WeakDuality)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const GeometricProgram gp = support::random_tiny_program(rng);
        if (!gp.equalities.empty())
            continue;
        const GpSolution s = solve(gp);
        ASSERT_EQ(s.status, GpStatus::Optimal);
        for (int k = 0; k < 2000; ++k) {
            std::vector<double> x(gp.variable_count());
            for (auto& v : x)
                v = std::exp(u(rng));
            if (!check_feasible(gp, x, 0.0))
                continue;
            EXPECT_GE(evaluate_posynomial(gp.objective, x), s.optimum - 1e-8 * (1.0 + std::fabs(s.optimum)));
        }
    }
}

TEST(Properties, ScaleInvariance)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 15; ++trial) {
        const GeometricProgram gp = support::random_tiny_program(rng);
        GeometricProgram scaled = gp;
        const double c = 7.5;
        for (auto& t : scaled.objective)
            t.log_c += std::log(c);
        const GpSolution a = solve(gp), b = solve(scaled);
        ASSERT_EQ(a.status, GpStatus::Optimal);
        ASSERT_EQ(b.status, GpStatus::Optimal);
        EXPECT_LE(support::rel_diff(b.optimum, c * a.optimum), 1e-6);
        // Objective values agree; minimizers may differ on flat faces.
        EXPECT_LE(support::rel_diff(evaluate_posynomial(gp.objective, b.point), a.optimum), 1e-6);
    }
}

TEST(Properties, LogSumExpIdentity)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const GeometricProgram gp = support::random_tiny_program(rng);
        std::vector<double> y(gp.variable_count()), x(gp.variable_count());
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = u(rng);
            x[i] = std::exp(y[i]);
        }
        const double direct = std::log(evaluate_posynomial(gp.objective, x));
        EXPECT_LE(support::rel_diff(lse(gp.objective, y), direct), 1e-12);
    }
}
