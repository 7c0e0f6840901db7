#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cli.hpp"

using namespace polygp;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args)
{
    args.insert(args.begin(), "polygp");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return std::string(POLYGP_SAMPLES_DIR) + "/" + name; }

const json* entry(const json& report, const std::string& method)
{
    for (const auto& e : report["methods"])
        if (e["method"] == method)
            return &e;
    return nullptr;
}

} // namespace

TEST(Bound, AllMethodsOnLinearPerturbation)
{
    const CliRun r = run({"bound", "--method", "all", "--format", "json", sample("deg6.poly")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(entry(j, "gp")->at("result")["value"].get<double>(), 0.3265, 5e-5);
    for (const char* m : {"rl", "rfk", "rdmt"}) {
        const double v = entry(j, m)->at("result")["value"].get<double>();
        EXPECT_LE(v, 0.3265) << m;
    }
    EXPECT_NEAR(j["oracle_estimate"].get<double>(), 0.3265, 5e-5);
    EXPECT_EQ(j["methods"].size(), all_method_names().size());
    EXPECT_TRUE(j["timings_ms"].contains("gp"));
}

TEST(Bound, TextReport)
{
    const CliRun r = run({"bound", "--method", "gp,rl", sample("deg6.poly")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("gp"), std::string::npos);
    EXPECT_NE(r.out.find("0.326"), std::string::npos);
}

TEST(Bound, GpJsonOnQuartic)
{
    const CliRun r = run({"bound", "--method", "gp", "--format", "json", sample("quartic.poly")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(entry(j, "gp")->at("result")["value"].get<double>(), -3.0 / std::pow(2.0, 4.0 / 3.0), 1e-6);
}

TEST(Bound, ConstantInputIsInputError)
{
    const CliRun r = run({"bound", "--method", "rl", sample("constant.poly")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("constant input"), std::string::npos);
}

TEST(Bound, InputErrors)
{
    EXPECT_EQ(run({"bound", sample("missing.poly")}).code, 1);
    EXPECT_EQ(run({"bound", "--expr", "X1^-1"}).code, 1);
    EXPECT_EQ(run({"bound", "--method", "nope", "--expr", "X1^2"}).code, 1);
    EXPECT_EQ(run({"nonsense"}).code, 1);
}

TEST(Bound, AllDoesNotAbortOnPreconditionFailure)
{
    // |alpha| = 2d term: explicit bounds refuse, gp and oracle still run.
    const CliRun r = run({"bound", "--method", "all", "--format", "json", "--expr", "X^4+Y^4-X^2*Y^2+X+Y"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(entry(j, "gp")->at("error").is_null());
    EXPECT_FALSE(entry(j, "rl")->at("error").is_null());
    EXPECT_EQ(j["methods"].size(), all_method_names().size());
}

TEST(Bound, NamedVariablesAndOutFile)
{
    const std::string path = ::testing::TempDir() + "polygp_report.json";
    const CliRun r = run({"bound", "--format", "json", "-o", path, sample("named.poly")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(path);
    const json j = json::parse(in);
    EXPECT_EQ(j["variables"], (std::vector<std::string>{"x", "y"}));
}

TEST(Report, JsonRoundTrip)
{
    const ParsedPolynomial p = read_polynomial_file(sample("deg6.poly"));
    const Report rep = build_report(p.polynomial, p.variable_names, expand_methods({"all"}));
    const Report back = report_from_json(json::parse(report_to_json(rep).dump()));
    EXPECT_EQ(back, rep);
}

TEST(Bench, EmptyCount)
{
    const CliRun r = run({"bench", "-n", "3", "-d", "4", "--count", "0"});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Bench, FgpBelowOracle)
{
    const CliRun r = run({"bench", "-n", "3", "-d", "4", "--count", "5", "--seed", "1", "--oracle", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    ASSERT_EQ(j["cells"].size(), 1u);
    const auto& cell = j["cells"][0];
    EXPECT_EQ(cell["fgp"].size(), 5u);
    EXPECT_EQ(cell["above_oracle"], 0);
    for (std::size_t k = 0; k < 5; ++k)
        EXPECT_LE(cell["fgp"][k].get<double>(), cell["oracle"][k].get<double>() + 1e-4);
}

TEST(Bench, InvalidGrid)
{
    EXPECT_EQ(run({"bench", "-n", "3", "-d", "5"}).code, 1);
    EXPECT_EQ(run({"bench", "-n", "3", "--n-max", "2"}).code, 1);
}

TEST(Certify, CertificateExpandsToShiftedForm)
{
    const CliRun r = run({"certify", sample("deg6.poly")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_LE(j["max_expansion_error"].get<double>(), 1e-9);
    EXPECT_NEAR(j["fgp"].get<double>(), 0.3265, 5e-5);
    const std::vector<std::string> names = j["variables"];
    const SparsePolynomial form = parse_polynomial(j["form"].get<std::string>(), names);
    const SobsCertificate cert = certificate_from_json(j, names.size());
    const SparsePolynomial diff = expand_certificate(cert) - form;
    for (const auto& [alpha, c] : diff.terms())
        EXPECT_LE(std::fabs(c), 1e-8);
}

TEST(Certify, MinusInfinityIsInputError)
{
    const CliRun r = run({"certify", "--expr", "-X1^2+X1"});
    EXPECT_NE(r.code, 0);
}
