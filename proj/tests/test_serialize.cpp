#include <gtest/gtest.h>

#include <cmath>

#include "polygp/bounds.hpp"
#include "polygp/serialize.hpp"

using namespace polygp;

TEST(Json, CertificateRoundTrip)
{
    SobsCertificate c;
    c.variable_count = 2;
    c.binomials.push_back({1.5, ExponentVector{2, 0}, ExponentVector{0, 2}, 1.0});
    c.binomials.push_back({0.5, ExponentVector{1, 1}, ExponentVector{0, 2}, 0.25});
    c.squares.push_back({3.0, ExponentVector{0, 1}});
    const json j = certificate_to_json(c);
    EXPECT_FALSE(j["binomials"][0].contains("c"));
    EXPECT_EQ(j["binomials"][1]["c"], 0.25);
    const SobsCertificate back = certificate_from_json(j, 2);
    EXPECT_EQ(expand_certificate(back), expand_certificate(c));
}

TEST(Json, ExactWeightsAsFractions)
{
    const ExactSobsCertificate c = hurwitz_reznick_certificate(ExponentVector{1, 3});
    const json j = certificate_to_json(c);
    bool fraction = false;
    for (const auto& b : j["binomials"])
        fraction = fraction || b["w"].get<std::string>().find('/') != std::string::npos;
    EXPECT_TRUE(fraction);
}

TEST(Json, BoundResultRoundTrip)
{
    const SparsePolynomial f = parse_polynomial("X1^6+X2^6+7*X1*X2-2*X1^2+7");
    for (BoundResult r : {compute_fgp(f), bound_rl(f), bound_rfk(f), bound_rdmt(f)}) {
        // Solver diagnostics travel in the report entry, not in the result.
        r.solver_iterations = 0;
        r.kkt_residual.reset();
        const json j = json::parse(bound_result_to_json(r).dump());
        EXPECT_EQ(bound_result_from_json(j), r);
    }
}

TEST(Json, MinusInfinity)
{
    const BoundResult r = compute_fgp(parse_polynomial("-X1^2+X1"));
    const json j = bound_result_to_json(r);
    EXPECT_EQ(j["value"], "-inf");
    EXPECT_TRUE(j["witness"].is_null());
    EXPECT_TRUE(bound_result_from_json(j).is_minus_infinity());
}

TEST(Json, ProgramDump)
{
    const auto prog = std::get<FgpProgram>(fgp_program(parse_polynomial("X1^4+X2^4-X1^2*X2^2+X1+X2")));
    const json j = program_to_json(prog.program);
    EXPECT_EQ(j["variables"].size(), 4u);
    EXPECT_EQ(j["objective"]["A"].size(), 2u);
    EXPECT_EQ(j["objective"]["A"][0].size(), 4u);
    EXPECT_EQ(j["equalities"]["b"].size(), 1u);
    EXPECT_EQ(j["inequalities"].size(), 2u);
}
