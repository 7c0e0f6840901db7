#ifndef POLYGP_REPORT_HPP
#define POLYGP_REPORT_HPP

// Running a set of methods on one polynomial and reporting the outcome.

#include <algorithm>
#include <chrono>
#include <functional>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "polygp/bounds.hpp"
#include "polygp/certificates.hpp"
#include "polygp/oracle.hpp"
#include "polygp/polynomial.hpp"
#include "polygp/serialize.hpp"

namespace polygp {

/// Outcome of one requested method. Exactly one of bound, criteria,
/// oracle or error is populated.
struct MethodEntry {
    std::string method;
    std::optional<BoundResult> bound;
    std::map<std::string, bool> criteria;
    std::map<std::string, std::string> criteria_errors;
    std::optional<OracleEstimate> oracle;
    std::optional<std::string> error;
    bool solver_failure = false;
    double time_ms = 0.0;

    bool operator==(const MethodEntry&) const = default;
};

struct Report {
    std::string input_echo;
    std::vector<std::string> variables;
    std::uint64_t seed = 1;
    std::vector<MethodEntry> entries;

    std::optional<double> oracle_estimate() const
    {
        for (const auto& e : entries)
            if (e.oracle)
                return e.oracle->value;
        return std::nullopt;
    }

    std::map<std::string, double> timings_ms() const
    {
        std::map<std::string, double> t;
        for (const auto& e : entries)
            t[e.method] = e.time_ms;
        return t;
    }

    bool any_solver_failure() const
    {
        for (const auto& e : entries)
            if (e.solver_failure)
                return true;
        return false;
    }

    bool all_failed() const
    {
        for (const auto& e : entries)
            if (!e.error)
                return false;
        return !entries.empty();
    }

    bool operator==(const Report&) const = default;
};

inline const std::vector<std::string>& all_method_names()
{
    static const std::vector<std::string> names = {"gp", "rl", "rfk", "rdmt", "criteria", "oracle"};
    return names;
}

/// Splits "gp,rl" style lists and expands "all"; rejects unknown names.
inline std::vector<std::string> expand_methods(const std::vector<std::string>& requested)
{
    std::vector<std::string> out;
    auto add = [&](const std::string& m) {
        if (std::find(out.begin(), out.end(), m) == out.end())
            out.push_back(m);
    };
    for (const auto& item : requested) {
        std::stringstream ss(item);
        std::string m;
        while (std::getline(ss, m, ',')) {
            if (m.empty())
                continue;
            if (m == "all") {
                for (const auto& n : all_method_names())
                    add(n);
            } else if (std::find(all_method_names().begin(), all_method_names().end(), m) != all_method_names().end()) {
                add(m);
            } else {
                throw std::invalid_argument("unknown method \"" + m + "\"");
            }
        }
    }
    if (out.empty())
        throw std::invalid_argument("no method requested");
    return out;
}

struct RunOptions {
    SolverOptions solver;
    SearchBudget budget;
    std::uint64_t seed = 1;
};

namespace detail {

inline void run_criterion(MethodEntry& e, const std::string& name, const std::function<bool()>& check)
{
    try {
        e.criteria[name] = check();
    } catch (const std::exception& ex) {
        e.criteria_errors[name] = ex.what();
    }
}

} // namespace detail

/// Runs one method. Failures are recorded in the entry, never thrown.
inline MethodEntry run_method(const SparsePolynomial& f, const std::string& method, const RunOptions& opts = {})
{
    MethodEntry e;
    e.method = method;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (method == "gp") {
            e.bound = compute_fgp(f, opts.solver);
        } else if (method == "rl") {
            e.bound = bound_rl(f);
        } else if (method == "rfk") {
            e.bound = bound_rfk(f);
        } else if (method == "rdmt") {
            e.bound = bound_rdmt(f);
        } else if (method == "criteria") {
            // Lasserre's test reads f itself; the form tests read its homogenization.
            decompose(f);
            const SparsePolynomial form = homogenize(f);
            detail::run_criterion(e, "lasserre", [&] { return check_lasserre(f); });
            detail::run_criterion(e, "fk", [&] { return check_fk(form); });
            detail::run_criterion(e, "fk_improved", [&] { return check_fk_improved(form); });
            detail::run_criterion(e, "newcrt", [&] { return check_newcrt(form); });
        } else if (method == "oracle") {
            e.oracle = estimate_global_min(f, opts.budget, opts.seed);
        } else {
            throw std::invalid_argument("unknown method \"" + method + "\"");
        }
    } catch (const solver_error& ex) {
        e.error = ex.what();
        e.solver_failure = true;
    } catch (const std::exception& ex) {
        e.error = ex.what();
    }
    e.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return e;
}

inline Report build_report(const SparsePolynomial& f, const std::vector<std::string>& variable_names,
                           const std::vector<std::string>& methods, const RunOptions& opts = {})
{
    Report r;
    r.input_echo = to_string(f, variable_names);
    r.variables = variable_names;
    r.seed = opts.seed;
    for (const auto& m : methods)
        r.entries.push_back(run_method(f, m, opts));
    return r;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline json method_entry_to_json(const MethodEntry& e)
{
    json j = {{"method", e.method}, {"time_ms", e.time_ms}};
    j["error"] = e.error ? json(*e.error) : json(nullptr);
    j["solver_failure"] = e.solver_failure;
    if (e.bound) {
        j["result"] = bound_result_to_json(*e.bound);
        json diag = {{"iterations", e.bound->solver_iterations}};
        diag["kkt_residual"] = e.bound->kkt_residual ? json(*e.bound->kkt_residual) : json(nullptr);
        j["diagnostics"] = std::move(diag);
    }
    if (e.method == "criteria" && !e.error) {
        j["criteria"] = e.criteria;
        j["criteria_errors"] = e.criteria_errors;
    }
    if (e.oracle)
        j["oracle"] = {{"value", detail::real_json(e.oracle->value)},
                       {"point", e.oracle->point},
                       {"seed", e.oracle->seed}};
    return j;
}

inline MethodEntry method_entry_from_json(const json& j)
{
    MethodEntry e;
    e.method = j.at("method").get<std::string>();
    e.time_ms = j.at("time_ms").get<double>();
    if (!j.at("error").is_null())
        e.error = j.at("error").get<std::string>();
    e.solver_failure = j.at("solver_failure").get<bool>();
    if (j.contains("result")) {
        BoundResult b = bound_result_from_json(j.at("result"));
        const json& diag = j.at("diagnostics");
        b.solver_iterations = diag.at("iterations").get<int>();
        if (!diag.at("kkt_residual").is_null())
            b.kkt_residual = diag.at("kkt_residual").get<double>();
        e.bound = std::move(b);
    }
    if (j.contains("criteria")) {
        e.criteria = j.at("criteria").get<std::map<std::string, bool>>();
        e.criteria_errors = j.at("criteria_errors").get<std::map<std::string, std::string>>();
    }
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        e.oracle = OracleEstimate{detail::real_from_json(o.at("value")), o.at("point").get<std::vector<double>>(),
                                  o.at("seed").get<std::uint64_t>()};
    }
    return e;
}

inline json report_to_json(const Report& r)
{
    json methods = json::array();
    for (const auto& e : r.entries)
        methods.push_back(method_entry_to_json(e));
    const auto oracle = r.oracle_estimate();
    return {{"input", r.input_echo},
            {"variables", r.variables},
            {"seed", r.seed},
            {"methods", std::move(methods)},
            {"oracle_estimate", oracle ? detail::real_json(*oracle) : json(nullptr)},
            {"timings_ms", r.timings_ms()}};
}

inline Report report_from_json(const json& j)
{
    Report r;
    r.input_echo = j.at("input").get<std::string>();
    r.variables = j.at("variables").get<std::vector<std::string>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& m : j.at("methods"))
        r.entries.push_back(method_entry_from_json(m));
    return r;
}

// ---------------------------------------------------------------------------
// Text
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fixed(double v, int digits = 6)
{
    if (std::isinf(v))
        return v < 0 ? "-inf" : "inf";
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

} // namespace detail

inline std::string report_to_text(const Report& r)
{
    std::ostringstream os;
    os << "input: " << r.input_echo << "\n";
    os << std::left << std::setw(10) << "method" << std::setw(16) << "value" << std::setw(12) << "k"
       << std::setw(11) << "time_ms"
       << "detail\n";
    for (const auto& e : r.entries) {
        os << std::left << std::setw(10) << e.method;
        std::string value = "-", k = "-", detail_text;
        if (e.error) {
            value = "error";
            detail_text = *e.error;
        } else if (e.bound) {
            value = detail::fixed(e.bound->value);
            if (e.bound->k_used)
                k = detail::fixed(*e.bound->k_used);
            detail_text = e.bound->status_detail;
            if (e.bound->solver_iterations > 0)
                detail_text += " [" + std::to_string(e.bound->solver_iterations) + " newton steps]";
        } else if (e.oracle) {
            value = detail::fixed(e.oracle->value);
            detail_text = "at (";
            for (std::size_t i = 0; i < e.oracle->point.size(); ++i)
                detail_text += (i ? ", " : "") + detail::fixed(e.oracle->point[i], 4);
            detail_text += "), seed " + std::to_string(e.oracle->seed);
        } else if (e.method == "criteria") {
            for (const auto& [name, ok] : e.criteria)
                detail_text += name + "=" + (ok ? "true" : "false") + " ";
            for (const auto& [name, why] : e.criteria_errors)
                detail_text += name + "=n/a(" + why + ") ";
            if (!detail_text.empty())
                detail_text.pop_back();
        }
        std::ostringstream t;
        t << std::fixed << std::setprecision(2) << e.time_ms;
        os << std::setw(16) << value << std::setw(12) << k << std::setw(11) << t.str() << detail_text << "\n";
    }
    return os.str();
}

} // namespace polygp

#endif // POLYGP_REPORT_HPP
