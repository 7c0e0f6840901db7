#ifndef POLYGP_TOOLS_CLI_HPP
#define POLYGP_TOOLS_CLI_HPP

// The polygp command line: bound, bench and certify.
// Exit codes: 0 success, 1 input error, 2 solver failure.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "polygp/bench.hpp"
#include "polygp/bounds.hpp"
#include "polygp/certificates.hpp"
#include "polygp/polynomial.hpp"
#include "polygp/report.hpp"
#include "polygp/serialize.hpp"

namespace polygp::cli {

enum ExitCode : int { ok = 0, input_error = 1, solver_failure = 2 };

struct InputOptions {
    std::string file;
    std::string expr;
    std::string vars;
};

inline std::optional<std::vector<std::string>> split_names(const std::string& vars)
{
    if (vars.empty())
        return std::nullopt;
    std::vector<std::string> names;
    std::stringstream ss(vars);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            names.push_back(item);
    return names;
}

inline ParsedPolynomial load_input(const InputOptions& in)
{
    const auto names = split_names(in.vars);
    if (!in.expr.empty() && !in.file.empty())
        throw std::invalid_argument("give either a file or --expr, not both");
    if (!in.expr.empty())
        return parse_polynomial_with_names(in.expr, names);
    if (in.file.empty())
        throw std::invalid_argument("no input: give a .poly file or --expr");
    return read_polynomial_file(in.file, names);
}

/// Writes to --out when given, else to `out`.
inline void emit(const std::string& text, const std::string& out_path, std::ostream& out)
{
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f)
        throw std::runtime_error("cannot write " + out_path);
    f << text;
}

inline void add_input_options(CLI::App* cmd, InputOptions& in)
{
    cmd->add_option("file", in.file, "polynomial file (.poly)");
    cmd->add_option("-e,--expr", in.expr, "polynomial given inline");
    cmd->add_option("--vars", in.vars, "comma-separated variable names");
}

struct BoundArgs {
    InputOptions input;
    std::vector<std::string> methods{"gp"};
    std::string format = "text";
    std::uint64_t seed = 1;
    double tolerance = 1e-8;
    int budget = 64;
    std::string out;
    std::string dump_gp;
};

inline int run_bound(const BoundArgs& a, std::ostream& out, std::ostream& err)
{
    ParsedPolynomial parsed;
    std::vector<std::string> methods;
    try {
        parsed = load_input(a.input);
        methods = expand_methods(a.methods);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    RunOptions opts;
    opts.solver.gap_tolerance = a.tolerance;
    opts.budget.starts = a.budget;
    opts.seed = a.seed;

    if (!a.dump_gp.empty()) {
        try {
            auto built = fgp_program(parsed.polynomial);
            json dump = std::holds_alternative<FgpProgram>(built)
                            ? program_to_json(std::get<FgpProgram>(built).program)
                            : json{{"verdict", std::get<MinusInfinityVerdict>(built).reason}};
            emit(dump.dump(2) + "\n", a.dump_gp, out);
        } catch (const std::exception& e) {
            err << "warning: no program dump: " << e.what() << "\n";
        }
    }

    const Report report = build_report(parsed.polynomial, parsed.variable_names, methods, opts);
    const std::string text = a.format == "json" ? report_to_json(report).dump(2) + "\n" : report_to_text(report);
    try {
        emit(text, a.out, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    for (const auto& e : report.entries)
        if (e.error)
            err << e.method << ": " << *e.error << "\n";
    if (report.any_solver_failure())
        return solver_failure;
    if (report.all_failed())
        return input_error;
    return ok;
}

struct BenchArgs {
    std::size_t n = 3;
    std::size_t n_max = 0;
    int degree = 4;
    int degree_max = 0;
    int count = 10;
    double density = 1.0;
    double coeff_range = 10.0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool oracle = false;
    std::string format = "text";
    std::string out;
};

inline std::string bench_to_text(const std::vector<BenchCell>& cells, bool with_oracle)
{
    std::ostringstream os;
    os << std::left << std::setw(5) << "n" << std::setw(5) << "2d" << std::setw(8) << "count" << std::setw(12)
       << "mean_ms" << std::setw(12) << "median_ms" << std::setw(10) << "failures";
    if (with_oracle)
        os << "above_oracle";
    os << "\n";
    for (const auto& c : cells) {
        if (c.instances.empty())
            continue;
        os << std::left << std::setw(5) << c.n << std::setw(5) << c.two_d << std::setw(8) << c.instances.size()
           << std::setw(12) << detail::fixed(c.mean_ms(), 3) << std::setw(12) << detail::fixed(c.median_ms(), 3)
           << std::setw(10) << c.failures();
        if (with_oracle)
            os << c.oracle_violations();
        os << "\n";
    }
    return os.str();
}

inline json bench_to_json(const BenchConfig& cfg, const std::vector<BenchCell>& cells)
{
    json jc = json::array();
    for (const auto& c : cells) {
        if (c.instances.empty())
            continue;
        json values = json::array(), times = json::array(), oracle = json::array(), errors = json::array();
        for (const auto& i : c.instances) {
            values.push_back(i.error ? json(nullptr) : detail::real_json(i.fgp));
            times.push_back(i.time_ms);
            if (i.oracle)
                oracle.push_back(*i.oracle);
            if (i.error)
                errors.push_back(*i.error);
        }
        json e = {{"n", c.n},           {"two_d", c.two_d},          {"count", c.instances.size()},
                  {"mean_ms", c.mean_ms()}, {"median_ms", c.median_ms()}, {"fgp", values},
                  {"time_ms", times},   {"errors", errors}};
        if (cfg.with_oracle) {
            e["oracle"] = oracle;
            e["above_oracle"] = c.oracle_violations();
        }
        jc.push_back(std::move(e));
    }
    return {{"config",
             {{"seed", cfg.seed},
              {"density", cfg.density},
              {"coefficient_range", cfg.coefficient_range},
              {"threads", resolve_thread_count(cfg.threads)}}},
            {"cells", jc}};
}

inline int run_bench_command(const BenchArgs& a, std::ostream& out, std::ostream& err)
{
    BenchConfig cfg;
    cfg.n_min = a.n;
    cfg.n_max = a.n_max ? a.n_max : a.n;
    cfg.two_d_min = a.degree;
    cfg.two_d_max = a.degree_max ? a.degree_max : a.degree;
    cfg.count = a.count;
    cfg.density = a.density;
    cfg.coefficient_range = a.coeff_range;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.with_oracle = a.oracle;
    std::vector<BenchCell> cells;
    try {
        cells = run_bench(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    const std::string text =
        a.format == "json" ? bench_to_json(cfg, cells).dump(2) + "\n" : bench_to_text(cells, cfg.with_oracle);
    try {
        emit(text, a.out, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    for (const auto& c : cells)
        if (c.failures() > 0)
            return solver_failure;
    return ok;
}

struct CertifyArgs {
    InputOptions input;
    std::string method = "gp";
    double margin = 1e-6;
    double tolerance = 1e-8;
    std::string format = "json";
    std::string out;
};

inline std::string homogenizing_name(const std::vector<std::string>& names)
{
    if (names == default_variable_names(names.size()))
        return "X" + std::to_string(names.size() + 1);
    std::string y = "Y";
    while (std::find(names.begin(), names.end(), y) != names.end())
        y += "_";
    return y;
}

inline int run_certify(const CertifyArgs& a, std::ostream& out, std::ostream& err)
{
    ParsedPolynomial parsed;
    try {
        parsed = load_input(a.input);
        if (a.method != "gp")
            throw std::invalid_argument("certify supports only --method gp");
        if (!(a.margin > 0.0))
            throw std::invalid_argument("--margin must be positive");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    const SparsePolynomial& f = parsed.polynomial;
    BoundResult fgp;
    try {
        SolverOptions so;
        so.gap_tolerance = a.tolerance;
        fgp = compute_fgp(f, so);
    } catch (const solver_error& e) {
        err << "error: " << e.what() << "\n";
        return solver_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    if (fgp.is_minus_infinity() || !fgp.witness) {
        err << "error: no certificate: " << fgp.status_detail << "\n";
        return input_error;
    }

    const double r = fgp.value - a.margin;
    const SparsePolynomial shifted = f.plus_constant(-r);
    const SparsePolynomial form = homogenize(shifted);
    std::vector<std::string> names = parsed.variable_names;
    names.push_back(homogenizing_name(parsed.variable_names));
    SobsCertificate cert;
    try {
        const AWitness wit = homogenized_witness(shifted, *fgp.witness);
        cert = suffcnd_certificate(form, wit, SuffCndTolerances{1e-9, 1e-9});
    } catch (const std::exception& e) {
        err << "error: certificate construction failed: " << e.what() << "\n";
        return solver_failure;
    }
    double max_err = 0.0;
    const SparsePolynomial diff = expand_certificate(cert) - form;
    for (const auto& [alpha, c] : diff.terms())
        max_err = std::max(max_err, std::fabs(c));

    std::string text;
    if (a.format == "json") {
        json j = certificate_to_json(cert);
        j["form"] = to_string(form, names);
        j["variables"] = names;
        j["lower_bound"] = r;
        j["fgp"] = fgp.value;
        j["max_expansion_error"] = max_err;
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "form: " << to_string(form, names) << "\n"
           << "lower bound r = " << detail::format_double(r) << " (f_gp " << detail::format_double(fgp.value)
           << ")\n"
           << cert.binomials.size() << " binomial squares, " << cert.squares.size()
           << " monomial squares, max expansion error " << detail::format_double(max_err) << "\n";
        auto mono = [&](const ExponentVector& e) {
            SparsePolynomial m(e.size());
            m.add_term(e, 1.0);
            return to_string(m, names);
        };
        for (const auto& b : cert.binomials)
            os << "  " << detail::format_double(b.weight) << " * (" << mono(b.beta) << " - "
               << detail::format_double(b.coefficient) << " * " << mono(b.gamma) << ")^2\n";
        for (const auto& s : cert.squares)
            os << "  " << detail::format_double(s.coefficient) << " * " << mono(s.half.scaled(2)) << "\n";
        text = os.str();
    }
    try {
        emit(text, a.out, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    return ok;
}

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Lower bounds for polynomials via geometric programming"};
    app.require_subcommand(1);

    BoundArgs bound;
    CLI::App* b = app.add_subcommand("bound", "compute lower bounds for one polynomial");
    add_input_options(b, bound.input);
    b->add_option("-m,--method", bound.methods, "gp, rl, rfk, rdmt, criteria, oracle or all (repeatable, comma lists)")
        ->allow_extra_args(false)
        ->capture_default_str();
    b->add_option("--format", bound.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    b->add_option("--seed", bound.seed, "oracle seed")->capture_default_str();
    b->add_option("--tolerance", bound.tolerance, "solver duality-gap tolerance")->capture_default_str();
    b->add_option("--budget", bound.budget, "oracle multistart count")->check(CLI::PositiveNumber)->capture_default_str();
    b->add_option("-o,--out", bound.out, "write the report to FILE");
    b->add_option("--dump-gp", bound.dump_gp, "write the convexified program as JSON to FILE");

    BenchArgs bench;
    CLI::App* be = app.add_subcommand("bench", "time f_gp on random instances");
    be->add_option("-n,--n", bench.n, "number of variables (first of range)")->check(CLI::PositiveNumber)->capture_default_str();
    be->add_option("--n-max", bench.n_max, "last number of variables");
    be->add_option("-d,--degree", bench.degree, "degree 2d (first of range)")->capture_default_str();
    be->add_option("--degree-max", bench.degree_max, "last degree");
    be->add_option("-c,--count", bench.count, "instances per cell")->capture_default_str();
    be->add_option("--density", bench.density, "term count = density * n * 2d")->capture_default_str();
    be->add_option("--coeff-range", bench.coeff_range, "coefficients uniform on [-c, c]")->capture_default_str();
    be->add_option("--seed", bench.seed, "generator seed")->capture_default_str();
    be->add_option("--threads", bench.threads, "worker count (POLYGP_THREADS overrides)");
    be->add_flag("--oracle", bench.oracle, "compare every f_gp with an oracle estimate");
    be->add_option("--format", bench.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    be->add_option("-o,--out", bench.out, "write the table to FILE");

    CertifyArgs cert;
    CLI::App* c = app.add_subcommand("certify", "emit a binomial-squares certificate for f - (f_gp - margin)");
    add_input_options(c, cert.input);
    c->add_option("-m,--method", cert.method, "witness source (gp)")->capture_default_str();
    c->add_option("--margin", cert.margin, "certify f - (f_gp - margin)")->capture_default_str();
    c->add_option("--tolerance", cert.tolerance, "solver duality-gap tolerance")->capture_default_str();
    c->add_option("--format", cert.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    c->add_option("-o,--out", cert.out, "write the certificate to FILE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }
    if (b->parsed())
        return run_bound(bound, out, err);
    if (be->parsed())
        return run_bench_command(bench, out, err);
    return run_certify(cert, out, err);
}

} // namespace polygp::cli

#endif // POLYGP_TOOLS_CLI_HPP
