#ifndef POLYGP_CERTIFICATES_HPP
#define POLYGP_CERTIFICATES_HPP

/*
 * Coefficient tests for sums of squares and sum-of-binomial-squares (SOBS)
 * certificates.
 *
 * The basic object is the agiform  p = sum_i beta_i X_i^{2d} - mu X^alpha,
 * |alpha| = 2d. It is PSD iff
 *
 *     |mu|^{2d} prod alpha_i^{alpha_i} <= (2d)^{2d} prod beta_i^{alpha_i},
 *
 * and in that case it is an explicit sum of binomial squares. A form f is
 * SOBS whenever its diagonal coefficients can be split among the nonsquare
 * terms (a witness a_{alpha,i}) so that every piece is such an agiform.
 *
 * Products of large powers are compared in the log domain throughout; at
 * 2d = 40 the raw quantities overflow doubles.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polygp/polynomial.hpp"

namespace polygp {

using Rational = boost::multiprecision::cpp_rational;

/// weight * (X^beta - coefficient * X^gamma)^2
template <class Weight>
struct Binomial {
    Weight weight;
    ExponentVector beta;
    ExponentVector gamma;
    Weight coefficient{1};
};

/// coefficient * X^{2 half}
template <class Weight>
struct MonomialSquare {
    Weight coefficient;
    ExponentVector half;
};

template <class Weight>
struct BasicSobsCertificate {
    std::size_t variable_count = 0;
    std::vector<Binomial<Weight>> binomials;
    std::vector<MonomialSquare<Weight>> squares;

    bool empty() const noexcept { return binomials.empty() && squares.empty(); }

    void append(const BasicSobsCertificate& other)
    {
        binomials.insert(binomials.end(), other.binomials.begin(), other.binomials.end());
        squares.insert(squares.end(), other.squares.begin(), other.squares.end());
    }
};

using SobsCertificate = BasicSobsCertificate<double>;
using ExactSobsCertificate = BasicSobsCertificate<Rational>;

/// Fully expands and collects a certificate.
template <class Weight>
BasicPolynomial<Weight> expand_certificate(const BasicSobsCertificate<Weight>& cert)
{
    BasicPolynomial<Weight> p(cert.variable_count);
    for (const auto& b : cert.binomials) {
        p.add_term(b.beta.scaled(2), b.weight);
        p.add_term(b.beta + b.gamma, Weight(-2) * b.weight * b.coefficient);
        p.add_term(b.gamma.scaled(2), b.weight * b.coefficient * b.coefficient);
    }
    for (const auto& s : cert.squares)
        p.add_term(s.half.scaled(2), s.coefficient);
    return p;
}

inline SobsCertificate to_floating(const ExactSobsCertificate& exact)
{
    SobsCertificate c;
    c.variable_count = exact.variable_count;
    for (const auto& b : exact.binomials)
        c.binomials.push_back({b.weight.convert_to<double>(), b.beta, b.gamma, b.coefficient.convert_to<double>()});
    for (const auto& s : exact.squares)
        c.squares.push_back({s.coefficient.convert_to<double>(), s.half});
    return c;
}

inline SparsePolynomial to_floating(const BasicPolynomial<Rational>& p)
{
    SparsePolynomial r(p.variable_count());
    for (const auto& [alpha, c] : p.terms())
        r.add_term(alpha, c.convert_to<double>());
    return r;
}

// ---------------------------------------------------------------------------
// Witness arrays
// ---------------------------------------------------------------------------

/// The array a_{alpha,i}: one dense row of length n per alpha in Delta.
/// A normalized witness has a_{alpha,i} > 0 exactly where alpha_i != 0.
class AWitness {
public:
    using row_map = std::map<ExponentVector, std::vector<double>>;

    AWitness() = default;

    void set_row(const ExponentVector& alpha, std::vector<double> row)
    {
        if (row.size() != alpha.size())
            throw std::invalid_argument("witness row length does not match exponent length");
        for (double v : row)
            if (!(v >= 0.0))
                throw std::invalid_argument("witness entries must be nonnegative");
        rows_[alpha] = std::move(row);
    }

    bool contains(const ExponentVector& alpha) const { return rows_.count(alpha) != 0; }
    const std::vector<double>& row(const ExponentVector& alpha) const { return rows_.at(alpha); }
    const row_map& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }

    double column_sum(std::size_t i) const
    {
        double s = 0.0;
        for (const auto& [alpha, row] : rows_)
            s += row.at(i);
        return s;
    }

    /// a*: entries with alpha_i = 0 set to zero.
    AWitness normalized() const
    {
        AWitness r;
        for (const auto& [alpha, row] : rows_) {
            std::vector<double> v = row;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (alpha[i] == 0)
                    v[i] = 0.0;
            r.rows_.emplace(alpha, std::move(v));
        }
        return r;
    }

    bool operator==(const AWitness&) const = default;

private:
    row_map rows_;
};

namespace detail {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// log(alpha^alpha) with 0^0 = 1.
inline double log_alpha_power(const ExponentVector& alpha)
{
    double s = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        s += xlogx(static_cast<double>(alpha[i]));
    return s;
}

inline void require_even_form(const SparsePolynomial& f)
{
    if (f.is_constant())
        throw std::invalid_argument("constant input");
    if (!f.is_form())
        throw std::invalid_argument("input is not a form");
    if (f.degree() % 2 != 0)
        throw std::invalid_argument("odd degree " + std::to_string(f.degree()));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Agiform PSD test
// ---------------------------------------------------------------------------

/// PSD test for sum_i beta_i X_i^{2d} - mu X^alpha with 2d = |alpha|.
/// Equivalent to SOBS and to SOS. A negative mu with all alpha_i even makes
/// every term a square and the answer is true.
inline bool fk_equivalence_check(std::span<const double> beta, double mu, const ExponentVector& alpha)
{
    if (beta.size() != alpha.size())
        throw std::invalid_argument("beta and alpha differ in length");
    const int two_d = alpha.total_degree();
    if (two_d <= 0 || two_d % 2 != 0)
        throw std::invalid_argument("|alpha| must be even and positive");
    for (double b : beta)
        if (!(b >= 0.0))
            throw std::invalid_argument("negative beta entry");
    if (mu == 0.0)
        return true;
    if (mu < 0.0 && alpha.all_even())
        return true;
    const double lhs = two_d * std::log(std::fabs(mu)) + detail::log_alpha_power(alpha);
    double rhs = two_d * std::log(static_cast<double>(two_d));
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0)
            continue;
        if (beta[i] == 0.0)
            return false;
        rhs += alpha[i] * std::log(beta[i]);
    }
    return lhs <= rhs + 1e-12 * (1.0 + std::fabs(rhs));
}

// ---------------------------------------------------------------------------
// Coefficient criteria
// ---------------------------------------------------------------------------

/// (L1) f_0 >= sum |f_a| (2d-|a|)/2d and (L2) f_{2d,i} >= sum |f_a| a_i/2d.
inline bool check_lasserre(const SparsePolynomial& f)
{
    const DecompositionView v = decompose(f);
    const double two_d = v.two_d;
    double l1 = 0.0;
    std::vector<double> l2(v.n, 0.0);
    for (const auto& [alpha, c] : v.delta) {
        l1 += std::fabs(c) * (two_d - alpha.total_degree()) / two_d;
        for (std::size_t i = 0; i < v.n; ++i)
            l2[i] += std::fabs(c) * alpha[i] / two_d;
    }
    if (v.f0 < l1)
        return false;
    for (std::size_t i = 0; i < v.n; ++i)
        if (v.diag[i] < l2[i])
            return false;
    return true;
}

/// min_i f_{2d,i} >= (1/2d) sum |f_a| (a^a)^{1/2d}, for a form f.
inline bool check_fk(const SparsePolynomial& f)
{
    detail::require_even_form(f);
    const DecompositionView v = decompose(f);
    double rhs = 0.0;
    for (const auto& [alpha, c] : v.delta)
        rhs += std::exp(std::log(std::fabs(c)) + detail::log_alpha_power(alpha) / v.two_d);
    rhs /= v.two_d;
    double lo = std::numeric_limits<double>::infinity();
    for (double d : v.diag)
        lo = std::min(lo, d);
    return lo >= rhs;
}

/// sum |f_a| a^{a/2d} / (2d prod f_{2d,i}^{a_i/2d}) <= 1. Needs f_{2d,i} > 0.
inline bool check_fk_improved(const SparsePolynomial& f)
{
    detail::require_even_form(f);
    const DecompositionView v = decompose(f);
    for (double d : v.diag)
        if (!(d > 0.0))
            throw std::invalid_argument("diagonal coefficient is not positive");
    double sum = 0.0;
    for (const auto& [alpha, c] : v.delta) {
        double lg = std::log(std::fabs(c)) + detail::log_alpha_power(alpha) / v.two_d - std::log(v.two_d);
        for (std::size_t i = 0; i < v.n; ++i)
            lg -= alpha[i] * std::log(v.diag[i]) / v.two_d;
        sum += std::exp(lg);
    }
    return sum <= 1.0;
}

/// f_{2d,i} >= sum_{a in Delta, a_i != 0} a_i (|f_a|/2d)^{2d/(a_i n_a)} for every i.
inline bool check_newcrt(const SparsePolynomial& f)
{
    detail::require_even_form(f);
    const DecompositionView v = decompose(f);
    for (std::size_t i = 0; i < v.n; ++i) {
        double rhs = 0.0;
        for (const auto& [alpha, c] : v.delta) {
            if (alpha[i] == 0)
                continue;
            const double expo = static_cast<double>(v.two_d) / (alpha[i] * static_cast<double>(alpha.support_size()));
            rhs += alpha[i] * std::exp(expo * std::log(std::fabs(c) / v.two_d));
        }
        if (v.diag[i] < rhs)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Witness conditions
// ---------------------------------------------------------------------------

struct SuffCndTolerances {
    double equality = 1e-9;   ///< relative, on (2d)^{2d} a^alpha = |f_a|^{2d} alpha^alpha
    double inequality = 0.0;  ///< absolute slack on f_{2d,i} >= sum_a a_{a,i}
};

namespace detail {

/// log((2d)^{2d} a^alpha) - log(|f_a|^{2d} alpha^alpha); +-inf when some
/// a_{alpha,i} vanishes with alpha_i != 0.
inline double equality_log_gap(const ExponentVector& alpha, double coeff, std::span<const double> row, int two_d)
{
    double lhs = two_d * std::log(static_cast<double>(two_d));
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0)
            continue;
        if (!(row[i] > 0.0))
            return -std::numeric_limits<double>::infinity();
        lhs += alpha[i] * std::log(row[i]);
    }
    const double rhs = two_d * std::log(std::fabs(coeff)) + log_alpha_power(alpha);
    return lhs - rhs;
}

inline void require_matching_witness(const DecompositionView& v, const AWitness& a)
{
    if (a.size() != v.delta.size())
        throw std::invalid_argument("witness index mismatch with Delta");
    for (const auto& [alpha, c] : v.delta) {
        if (!a.contains(alpha))
            throw std::invalid_argument("witness index mismatch with Delta");
        if (a.row(alpha).size() != v.n)
            throw std::invalid_argument("witness row has wrong length");
    }
}

} // namespace detail

/// Witness test for a form f: for every alpha in Delta
///   (1) (2d)^{2d} a_alpha^alpha = |f_alpha|^{2d} alpha^alpha,
/// and for every i
///   (2) f_{2d,i} >= sum_alpha a_{alpha,i}.
/// True implies f is SOBS.
inline bool check_suffcnd(const SparsePolynomial& f, const AWitness& a, SuffCndTolerances tol = {})
{
    detail::require_even_form(f);
    const DecompositionView v = decompose(f);
    detail::require_matching_witness(v, a);
    for (const auto& [alpha, c] : v.delta) {
        const double gap = detail::equality_log_gap(alpha, c, a.row(alpha), v.two_d);
        if (!std::isfinite(gap) || std::fabs(std::expm1(gap)) > tol.equality)
            return false;
    }
    for (std::size_t i = 0; i < v.n; ++i)
        if (v.diag[i] + tol.inequality < a.column_sum(i))
            return false;
    return true;
}

/// Solves condition (1) for the single entry a_{alpha,index}, keeping the
/// rest of the row fixed.
inline double solve_witness_entry(double coeff, const ExponentVector& alpha, std::span<const double> row,
                                  std::size_t index)
{
    if (row.size() != alpha.size() || index >= alpha.size())
        throw std::invalid_argument("witness row has wrong length");
    if (alpha[index] == 0)
        throw std::invalid_argument("alpha_i = 0: entry is not constrained");
    if (coeff == 0.0)
        throw std::invalid_argument("zero coefficient");
    const int two_d = alpha.total_degree();
    double lg = two_d * std::log(std::fabs(coeff)) + detail::log_alpha_power(alpha) -
                two_d * std::log(static_cast<double>(two_d));
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i == index || alpha[i] == 0)
            continue;
        if (!(row[i] > 0.0))
            throw std::invalid_argument("other entries of the row must be positive");
        lg -= alpha[i] * std::log(row[i]);
    }
    return std::exp(lg / alpha[index]);
}

/// Lifts a witness for f (non-homogeneous, even degree 2d) to the
/// homogenization of f - r by appending the column
///   a_{alpha,Y} = (2d-|alpha|) [ |f_a|^{2d} alpha^alpha / ((2d)^{2d} a_alpha^alpha) ]^{1/(2d-|alpha|)}
/// (zero when |alpha| = 2d). The column does not depend on r.
inline AWitness homogenized_witness(const SparsePolynomial& f, const AWitness& a)
{
    const DecompositionView v = decompose(f);
    detail::require_matching_witness(v, a);
    AWitness out;
    for (const auto& [alpha, c] : v.delta) {
        std::vector<double> row = a.row(alpha);
        const int deficit = v.two_d - alpha.total_degree();
        double ay = 0.0;
        if (deficit > 0) {
            const double gap = detail::equality_log_gap(alpha, c, row, v.two_d);
            ay = deficit * std::exp(-gap / deficit);
        }
        row.push_back(ay);
        out.set_row(alpha.appended(deficit), std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constructive certificates
// ---------------------------------------------------------------------------

namespace detail {

// p = sum_k alpha_k X_k^{2d} - 2d X^alpha with support {i, j}. The step
// p_k = p_{k+1}/2 + d B_k sends the exponent e of X_i to 2e mod 2d, so the
// chain either terminates (e in {0, d, 2d}) or revisits an exponent.
inline void hr_two_variable(const ExponentVector& alpha, std::size_t i, std::size_t j, int d, const Rational& scale,
                            ExactSobsCertificate& out)
{
    const std::size_t n = alpha.size();
    const int two_d = 2 * d;
    std::vector<int> visited;
    std::vector<Binomial<Rational>> steps;
    int e = alpha[i];
    std::ptrdiff_t repeat_at = -1;
    bool tail_square = false;
    while (true) {
        if (e == 0 || e == two_d)
            break;
        if (e == d) {
            tail_square = true;
            break;
        }
        for (std::size_t k = 0; k < visited.size(); ++k)
            if (visited[k] == e)
                repeat_at = static_cast<std::ptrdiff_t>(k);
        if (repeat_at >= 0)
            break;
        visited.push_back(e);
        ExponentVector beta(n), gamma(n);
        if (e > d) {
            beta.set(i, d);
            gamma.set(i, e - d);
            gamma.set(j, two_d - e);
            e = 2 * (e - d);
        } else {
            beta.set(j, d);
            gamma.set(i, e);
            gamma.set(j, d - e);
            e = 2 * e;
        }
        steps.push_back({Rational(d), beta, gamma, Rational(1)});
    }

    const std::size_t m = steps.size();
    Rational cycle_factor(1);
    if (repeat_at >= 0) {
        // p_r = sum_{k=r}^{m-1} 2^{r-k} d B_k + 2^{r-m} p_r
        const Rational tail = Rational(1) / Rational(boost::multiprecision::cpp_int(1) << (m - repeat_at));
        cycle_factor = Rational(1) / (Rational(1) - tail);
    }
    Rational half_power(1);
    for (std::size_t k = 0; k < m; ++k) {
        Rational w = scale * half_power * steps[k].weight;
        if (repeat_at >= 0 && static_cast<std::ptrdiff_t>(k) >= repeat_at)
            w *= cycle_factor;
        out.binomials.push_back({w, steps[k].beta, steps[k].gamma, Rational(1)});
        half_power /= 2;
    }
    if (tail_square) {
        out.binomials.push_back(
            {scale * half_power * Rational(d), ExponentVector::unit(n, i, d), ExponentVector::unit(n, j, d), Rational(1)});
    }
}

inline void hr_recurse(const ExponentVector& alpha, int d, const Rational& scale, ExactSobsCertificate& out)
{
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < alpha.size(); ++k)
        if (alpha[k] > 0)
            support.push_back(k);
    if (support.size() <= 1)
        return;
    if (support.size() == 2) {
        hr_two_variable(alpha, support[0], support[1], d, scale, out);
        return;
    }
    // At most one exponent exceeds d, so two small ones exist.
    std::size_t i1 = alpha.size(), i2 = alpha.size();
    for (std::size_t k : support) {
        if (alpha[k] > d)
            continue;
        if (i1 == alpha.size())
            i1 = k;
        else if (i2 == alpha.size())
            i2 = k;
    }
    const std::size_t n = alpha.size();
    ExponentVector beta(n), gamma(n);
    beta.set(i2, alpha[i2]);
    gamma.set(i1, alpha[i1]);
    int need = d - alpha[i2];
    for (std::size_t k : support) {
        if (k == i1 || k == i2)
            continue;
        const int take = std::min(alpha[k], need);
        beta.set(k, take);
        gamma.set(k, alpha[k] - take);
        need -= take;
    }
    out.binomials.push_back({scale * d, beta, gamma, Rational(1)});
    const Rational half = scale / 2;
    hr_recurse(beta.scaled(2), d, half, out);
    hr_recurse(gamma.scaled(2), d, half, out);
}

} // namespace detail

/// Exact SOBS certificate of  sum_i alpha_i X_i^{2d} - 2d X^alpha,  |alpha| = 2d.
inline ExactSobsCertificate hurwitz_reznick_certificate(const ExponentVector& alpha)
{
    const int two_d = alpha.total_degree();
    if (two_d <= 0 || two_d % 2 != 0)
        throw std::invalid_argument("|alpha| must be even and positive");
    ExactSobsCertificate cert;
    cert.variable_count = alpha.size();
    detail::hr_recurse(alpha, two_d / 2, Rational(1), cert);
    return cert;
}

namespace detail {

// Certificate for sum beta_i X_i^{2d} - mu X^alpha. `slack` admits a
// relative excess of the scaled coefficient mu_1 over 2d, absorbed by
// dropping the (tiny, negative) diagonal remainder.
inline SobsCertificate agiform(std::span<const double> beta, double mu, const ExponentVector& alpha, double slack)
{
    const std::size_t n = alpha.size();
    const int two_d = alpha.total_degree();
    SobsCertificate cert;
    cert.variable_count = n;
    auto diagonal_square = [&](std::size_t i, double c) {
        if (c > 0.0)
            cert.squares.push_back({c, ExponentVector::unit(n, i, two_d / 2)});
    };

    if (mu == 0.0 || (mu < 0.0 && alpha.all_even())) {
        for (std::size_t i = 0; i < n; ++i)
            diagonal_square(i, beta[i]);
        if (mu != 0.0)
            cert.squares.push_back({-mu, alpha.halved()});
        return cert;
    }

    // mu < 0 with an odd exponent: substitute Y_flip = -X_flip.
    std::size_t flip = n;
    if (mu < 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            if (alpha[i] % 2 != 0) {
                flip = i;
                break;
            }
    }
    const double m = std::fabs(mu);

    std::vector<double> log_c(n, 0.0);  // Y_i = c_i X_i,  c_i = (beta_i/alpha_i)^{1/2d}
    double log_mu1 = std::log(m);
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0) {
            diagonal_square(i, beta[i]);
            continue;
        }
        if (!(beta[i] > 0.0))
            throw std::invalid_argument("agiform is not PSD");
        log_c[i] = (std::log(beta[i]) - std::log(static_cast<double>(alpha[i]))) / two_d;
        log_mu1 -= alpha[i] * log_c[i];
    }
    const double ratio = std::exp(log_mu1 - std::log(static_cast<double>(two_d)));  // mu_1 / 2d
    double remainder = 1.0 - ratio;
    if (remainder < 0.0) {
        if (remainder < -slack)
            throw std::invalid_argument("agiform is not PSD");
        remainder = 0.0;
    }

    const ExactSobsCertificate hr = hurwitz_reznick_certificate(alpha);
    for (const auto& b : hr.binomials) {
        double log_cb = 0.0, log_cg = 0.0;
        int parity = 0;
        for (std::size_t i = 0; i < n; ++i) {
            log_cb += b.beta[i] * log_c[i];
            log_cg += b.gamma[i] * log_c[i];
        }
        if (flip < n)
            parity = (b.beta[flip] + b.gamma[flip]) % 2;
        const double w = b.weight.convert_to<double>() * ratio * std::exp(2.0 * log_cb);
        const double coeff = std::exp(log_cg - log_cb) * (parity ? -1.0 : 1.0);
        cert.binomials.push_back({w, b.beta, b.gamma, coeff});
    }
    for (std::size_t i = 0; i < n; ++i)
        if (alpha[i] != 0)
            diagonal_square(i, remainder * beta[i]);
    return cert;
}

} // namespace detail

/// Certificate for the PSD agiform sum beta_i X_i^{2d} - mu X^alpha, obtained
/// by rescaling X_i = (alpha_i/beta_i)^{1/2d} Y_i in the Hurwitz-Reznick
/// certificate and putting the slack (1 - mu_1/2d) beta_i X_i^{2d} on the
/// diagonal. Weights are floating point.
inline SobsCertificate agiform_certificate(std::span<const double> beta, double mu, const ExponentVector& alpha)
{
    if (!fk_equivalence_check(beta, mu, alpha))
        throw std::invalid_argument("agiform is not PSD; no certificate exists");
    return detail::agiform(beta, mu, alpha, 1e-12);
}

/// Certificate for a form f and a witness passing check_suffcnd: one agiform
/// certificate per alpha in Delta, then the unused diagonal and the square
/// terms of Omega \ Delta as monomial squares.
inline SobsCertificate suffcnd_certificate(const SparsePolynomial& f, const AWitness& a, SuffCndTolerances tol = {})
{
    if (!check_suffcnd(f, a, tol))
        throw std::invalid_argument("witness does not satisfy the SOBS conditions");
    const DecompositionView v = decompose(f);
    SobsCertificate cert;
    cert.variable_count = v.n;
    for (const auto& [alpha, c] : v.delta)
        cert.append(detail::agiform(a.row(alpha), -c, alpha, 2.0 * tol.equality));
    for (std::size_t i = 0; i < v.n; ++i) {
        const double surplus = v.diag[i] - a.column_sum(i);
        if (surplus > 0.0)
            cert.squares.push_back({surplus, ExponentVector::unit(v.n, i, v.half_degree())});
    }
    for (const auto& [alpha, c] : v.omega)
        if (!v.delta.count(alpha))
            cert.squares.push_back({c, alpha.halved()});
    return cert;
}

} // namespace polygp

#endif // POLYGP_CERTIFICATES_HPP
