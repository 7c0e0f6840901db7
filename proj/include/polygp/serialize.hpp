#ifndef POLYGP_SERIALIZE_HPP
#define POLYGP_SERIALIZE_HPP

// JSON encodings of certificates, witnesses, bound results and programs.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "polygp/bounds.hpp"
#include "polygp/certificates.hpp"
#include "polygp/gp_solver.hpp"

namespace polygp {

using json = nlohmann::json;

namespace detail {

inline json weight_json(double w) { return w; }

inline json weight_json(const Rational& w)
{
    return boost::multiprecision::numerator(w).str() + "/" + boost::multiprecision::denominator(w).str();
}

inline std::vector<int> ints(const ExponentVector& e) { return {e.entries().begin(), e.entries().end()}; }

inline bool is_one(double w) { return w == 1.0; }
inline bool is_one(const Rational& w) { return w == 1; }

/// Finite doubles stay numbers; infinities become "inf" / "-inf".
inline json real_json(double v)
{
    if (std::isinf(v))
        return v < 0 ? "-inf" : "inf";
    if (std::isnan(v))
        return "nan";
    return v;
}

inline double real_from_json(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        throw std::invalid_argument("expected a number, got \"" + s + "\"");
    }
    return j.get<double>();
}

} // namespace detail

/// {"binomials":[{"w","beta","gamma"[,"c"]}], "squares":[{"c","beta"}]};
/// "c" on a binomial appears only when its inner coefficient is not 1.
template <class Weight>
json certificate_to_json(const BasicSobsCertificate<Weight>& cert)
{
    json bins = json::array();
    for (const auto& b : cert.binomials) {
        json e = {{"w", detail::weight_json(b.weight)}, {"beta", detail::ints(b.beta)}, {"gamma", detail::ints(b.gamma)}};
        if (!detail::is_one(b.coefficient))
            e["c"] = detail::weight_json(b.coefficient);
        bins.push_back(std::move(e));
    }
    json squares = json::array();
    for (const auto& s : cert.squares)
        squares.push_back({{"c", detail::weight_json(s.coefficient)}, {"beta", detail::ints(s.half)}});
    return {{"binomials", std::move(bins)}, {"squares", std::move(squares)}};
}

inline SobsCertificate certificate_from_json(const json& j, std::size_t variable_count)
{
    SobsCertificate c;
    c.variable_count = variable_count;
    for (const auto& b : j.at("binomials"))
        c.binomials.push_back({b.at("w").get<double>(), ExponentVector(b.at("beta").get<std::vector<int>>()),
                               ExponentVector(b.at("gamma").get<std::vector<int>>()),
                               b.contains("c") ? b.at("c").get<double>() : 1.0});
    for (const auto& s : j.at("squares"))
        c.squares.push_back({s.at("c").get<double>(), ExponentVector(s.at("beta").get<std::vector<int>>())});
    return c;
}

/// [{"alpha":[...], "a":[...]}], one dense row per alpha in Delta.
inline json witness_to_json(const AWitness& a)
{
    json rows = json::array();
    for (const auto& [alpha, row] : a.rows())
        rows.push_back({{"alpha", detail::ints(alpha)}, {"a", row}});
    return rows;
}

inline AWitness witness_from_json(const json& j)
{
    AWitness a;
    for (const auto& r : j)
        a.set_row(ExponentVector(r.at("alpha").get<std::vector<int>>()), r.at("a").get<std::vector<double>>());
    return a;
}

inline BoundMethod bound_method_from_string(const std::string& s)
{
    for (BoundMethod m : {BoundMethod::gp, BoundMethod::rl, BoundMethod::rfk, BoundMethod::rdmt})
        if (s == to_string(m))
            return m;
    throw std::invalid_argument("unknown bound method \"" + s + "\"");
}

inline json bound_result_to_json(const BoundResult& r)
{
    return {{"method", to_string(r.method)},
            {"value", detail::real_json(r.value)},
            {"witness", r.witness ? witness_to_json(*r.witness) : json(nullptr)},
            {"k", r.k_used ? json(*r.k_used) : json(nullptr)},
            {"detail", r.status_detail}};
}

inline BoundResult bound_result_from_json(const json& j)
{
    BoundResult r;
    r.method = bound_method_from_string(j.at("method").get<std::string>());
    r.value = detail::real_from_json(j.at("value"));
    if (!j.at("witness").is_null())
        r.witness = witness_from_json(j.at("witness"));
    if (!j.at("k").is_null())
        r.k_used = j.at("k").get<double>();
    r.status_detail = j.at("detail").get<std::string>();
    return r;
}

namespace detail {

inline json posynomial_json(const Posynomial& p, std::size_t m)
{
    json A = json::array();
    json b = json::array();
    for (const auto& t : p) {
        std::vector<double> row(m, 0.0);
        for (const auto& e : t.exponents)
            row[e.variable] += e.power;
        A.push_back(std::move(row));
        b.push_back(t.log_c);
    }
    return {{"A", std::move(A)}, {"b", std::move(b)}};
}

} // namespace detail

/// The convexified program: with y = log x, each posynomial becomes
/// log sum exp(A y + b). Equalities are A y + b = 0.
inline json program_to_json(const GeometricProgram& gp)
{
    const std::size_t m = gp.variable_count();
    json ineq = json::array();
    for (const auto& p : gp.inequalities)
        ineq.push_back(detail::posynomial_json(p, m));
    return {{"variables", gp.variables},
            {"objective", detail::posynomial_json(gp.objective, m)},
            {"inequalities", std::move(ineq)},
            {"equalities", detail::posynomial_json(gp.equalities, m)}};
}

} // namespace polygp

#endif // POLYGP_SERIALIZE_HPP
