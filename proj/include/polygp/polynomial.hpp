#ifndef POLYGP_POLYNOMIAL_HPP
#define POLYGP_POLYNOMIAL_HPP

/*
 * Sparse multivariate polynomials with real coefficients.
 *
 * A polynomial in n variables is stored as an ordered map from exponent
 * vectors to nonzero coefficients. For an even degree 2d the polynomial is
 * viewed as
 *
 *   f = f_0 + sum_{alpha in Omega} f_alpha X^alpha + sum_i f_{2d,i} X_i^{2d}
 *
 * and DecompositionView exposes f_0, the diagonal coefficients f_{2d,i}, the
 * index set Omega and its subset Delta of terms that are not squares.
 */

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polygp {

/// Multi-index alpha in N^n.
class ExponentVector {
public:
    ExponentVector() = default;
    explicit ExponentVector(std::size_t n) : e_(n, 0) {}
    ExponentVector(std::initializer_list<int> e) : e_(e) { validate(); }
    explicit ExponentVector(std::vector<int> e) : e_(std::move(e)) { validate(); }

    static ExponentVector unit(std::size_t n, std::size_t i, int power = 1)
    {
        ExponentVector v(n);
        v.set(i, power);
        return v;
    }

    std::size_t size() const noexcept { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    std::span<const int> entries() const noexcept { return e_; }

    void set(std::size_t i, int value)
    {
        if (value < 0)
            throw std::invalid_argument("negative exponent");
        e_.at(i) = value;
    }

    /// |alpha|
    int total_degree() const noexcept
    {
        int s = 0;
        for (int v : e_)
            s += v;
        return s;
    }

    /// n_alpha = |{i : alpha_i != 0}|
    std::size_t support_size() const noexcept
    {
        return static_cast<std::size_t>(std::count_if(e_.begin(), e_.end(), [](int v) { return v != 0; }));
    }

    bool all_even() const noexcept
    {
        return std::all_of(e_.begin(), e_.end(), [](int v) { return v % 2 == 0; });
    }

    bool is_zero() const noexcept
    {
        return std::all_of(e_.begin(), e_.end(), [](int v) { return v == 0; });
    }

    ExponentVector operator+(const ExponentVector& other) const
    {
        if (other.size() != size())
            throw std::invalid_argument("exponent vectors of different length");
        ExponentVector r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i)
            r.e_[i] += other.e_[i];
        return r;
    }

    ExponentVector scaled(int k) const
    {
        ExponentVector r = *this;
        for (int& v : r.e_)
            v *= k;
        return r;
    }

    /// Exact halving; throws if some entry is odd.
    ExponentVector halved() const
    {
        if (!all_even())
            throw std::invalid_argument("cannot halve an exponent vector with odd entries");
        ExponentVector r = *this;
        for (int& v : r.e_)
            v /= 2;
        return r;
    }

    ExponentVector appended(int value) const
    {
        ExponentVector r = *this;
        r.e_.push_back(value);
        r.validate();
        return r;
    }

    ExponentVector dropped_last() const
    {
        ExponentVector r = *this;
        if (!r.e_.empty())
            r.e_.pop_back();
        return r;
    }

    auto operator<=>(const ExponentVector&) const = default;
    bool operator==(const ExponentVector&) const = default;

private:
    void validate() const
    {
        for (int v : e_)
            if (v < 0)
                throw std::invalid_argument("negative exponent");
    }

    std::vector<int> e_;
};

/// Graded lexicographic order, largest first: higher total degree wins,
/// ties broken lexicographically.
struct GradedLexGreater {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const
    {
        const int da = a.total_degree();
        const int db = b.total_degree();
        if (da != db)
            return da > db;
        return a > b;
    }
};

/// Sparse polynomial over an arbitrary coefficient ring. Zero coefficients
/// are never stored.
template <class Coeff>
class BasicPolynomial {
public:
    using coefficient_type = Coeff;
    using term_map = std::map<ExponentVector, Coeff>;

    explicit BasicPolynomial(std::size_t n = 0) : n_(n) {}

    std::size_t variable_count() const noexcept { return n_; }
    const term_map& terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Coeff coefficient(const ExponentVector& alpha) const
    {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    /// Adds c X^alpha, merging with an existing term.
    void add_term(const ExponentVector& alpha, const Coeff& c)
    {
        if (alpha.size() != n_)
            throw std::invalid_argument("exponent vector length does not match variable count");
        if (c == Coeff(0))
            return;
        auto [it, inserted] = terms_.try_emplace(alpha, c);
        if (!inserted) {
            it->second += c;
            if (it->second == Coeff(0))
                terms_.erase(it);
        }
    }

    void set_term(const ExponentVector& alpha, const Coeff& c)
    {
        if (alpha.size() != n_)
            throw std::invalid_argument("exponent vector length does not match variable count");
        if (c == Coeff(0))
            terms_.erase(alpha);
        else
            terms_[alpha] = c;
    }

    /// Max |alpha| over stored terms; 0 for the zero polynomial.
    int degree() const noexcept
    {
        int d = 0;
        for (const auto& [alpha, c] : terms_)
            d = std::max(d, alpha.total_degree());
        return d;
    }

    bool is_constant() const noexcept { return degree() == 0; }

    /// Every term has the same total degree (the zero polynomial counts).
    bool is_form() const noexcept
    {
        if (terms_.empty())
            return true;
        const int d = terms_.begin()->first.total_degree();
        return std::all_of(terms_.begin(), terms_.end(),
                           [d](const auto& t) { return t.first.total_degree() == d; });
    }

    BasicPolynomial& operator+=(const BasicPolynomial& other)
    {
        check_same_space(other);
        for (const auto& [alpha, c] : other.terms_)
            add_term(alpha, c);
        return *this;
    }

    BasicPolynomial& operator-=(const BasicPolynomial& other)
    {
        check_same_space(other);
        for (const auto& [alpha, c] : other.terms_)
            add_term(alpha, -c);
        return *this;
    }

    friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
    friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }

    BasicPolynomial scaled(const Coeff& s) const
    {
        BasicPolynomial r(n_);
        for (const auto& [alpha, c] : terms_)
            r.add_term(alpha, c * s);
        return r;
    }

    BasicPolynomial plus_constant(const Coeff& c) const
    {
        BasicPolynomial r = *this;
        r.add_term(ExponentVector(n_), c);
        return r;
    }

    bool operator==(const BasicPolynomial& other) const
    {
        return n_ == other.n_ && terms_ == other.terms_;
    }

private:
    void check_same_space(const BasicPolynomial& other) const
    {
        if (other.n_ != n_)
            throw std::invalid_argument("polynomials live in different variable counts");
    }

    std::size_t n_ = 0;
    term_map terms_;
};

using SparsePolynomial = BasicPolynomial<double>;

/// Thrown on malformed polynomial text. position() is a byte offset.
class parse_error : public std::invalid_argument {
public:
    parse_error(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position)
    {
    }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

namespace detail {

inline double ipow(double x, int k)
{
    double r = 1.0;
    double b = x;
    unsigned e = static_cast<unsigned>(k);
    while (e) {
        if (e & 1u)
            r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

inline double monomial_value(const ExponentVector& alpha, std::span<const double> x)
{
    double v = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] != 0)
            v *= ipow(x[i], alpha[i]);
    return v;
}

inline std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace detail

/// Evaluates f at a point with the convention 0^0 = 1.
inline double evaluate(const SparsePolynomial& f, std::span<const double> point)
{
    if (point.size() != f.variable_count())
        throw std::invalid_argument("point dimension " + std::to_string(point.size()) +
                                    " does not match variable count " + std::to_string(f.variable_count()));
    double s = 0.0;
    for (const auto& [alpha, c] : f.terms())
        s += c * detail::monomial_value(alpha, point);
    return s;
}

inline double evaluate(const SparsePolynomial& f, std::initializer_list<double> point)
{
    return evaluate(f, std::span<const double>(point.begin(), point.size()));
}

// ---------------------------------------------------------------------------
// Parsing and rendering
// ---------------------------------------------------------------------------

/// Default variable names X1..Xn.
inline std::vector<std::string> default_variable_names(std::size_t n)
{
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("X" + std::to_string(i + 1));
    return names;
}

struct ParsedPolynomial {
    SparsePolynomial polynomial;
    std::vector<std::string> variable_names;
};

namespace detail {

class PolynomialParser {
public:
    PolynomialParser(std::string_view text, const std::optional<std::vector<std::string>>& names)
        : text_(text), names_(names)
    {
        if (names_) {
            for (const auto& name : *names_)
                if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front())))
                    throw std::invalid_argument("invalid variable name '" + name + "'");
        }
    }

    ParsedPolynomial parse()
    {
        skip_ws();
        if (pos_ >= text_.size())
            throw parse_error("empty polynomial", pos_);
        bool first = true;
        while (true) {
            skip_ws();
            if (pos_ >= text_.size())
                break;
            double sign = 1.0;
            if (text_[pos_] == '+' || text_[pos_] == '-') {
                sign = text_[pos_] == '-' ? -1.0 : 1.0;
                ++pos_;
                skip_ws();
            } else if (!first) {
                throw parse_error(std::string("expected '+' or '-' but found '") + text_[pos_] + "'", pos_);
            }
            parse_term(sign);
            first = false;
        }
        return assemble();
    }

private:
    struct RawTerm {
        double coefficient;
        std::vector<std::pair<std::string, int>> factors;
    };

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool at_digit() const
    {
        return pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
    }

    bool at_letter() const
    {
        return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
    }

    // digits[.digits][(e|E)[+-]digits]
    double parse_decimal()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t k = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++k;
            }
            return k;
        };
        std::size_t nd = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            nd += digits();
        }
        if (nd == 0)
            throw parse_error("malformed number", start);
        if (pos_ + 1 < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
                ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_)
            throw parse_error("malformed number", start);
        return value;
    }

    std::string parse_identifier()
    {
        const std::size_t start = pos_;
        if (names_) {
            std::size_t best = 0;
            for (const auto& name : *names_)
                if (name.size() > best && text_.substr(pos_, name.size()) == name)
                    best = name.size();
            if (best == 0) {
                std::size_t end = pos_;
                while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end])))
                    ++end;
                throw parse_error("unknown variable '" + std::string(text_.substr(start, end - start)) + "'",
                                  start);
            }
            pos_ += best;
        } else {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    int parse_exponent()
    {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-')
            throw parse_error("negative exponent", start);
        if (pos_ < text_.size() && text_[pos_] == '+')
            ++pos_;
        std::size_t digits_start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == digits_start)
            throw parse_error("expected integer exponent", start);
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/'))
            throw parse_error("fractional exponent", start);
        int value = 0;
        auto res = std::from_chars(text_.data() + digits_start, text_.data() + pos_, value);
        if (res.ec != std::errc())
            throw parse_error("exponent out of range", start);
        return value;
    }

    void parse_term(double sign)
    {
        RawTerm term{sign, {}};
        const std::size_t term_start = pos_;
        bool have_coefficient = false;
        if (at_digit()) {
            double c = parse_decimal();
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                skip_ws();
                if (!at_digit())
                    throw parse_error("expected denominator", pos_);
                const std::size_t den_pos = pos_;
                double q = parse_decimal();
                if (q == 0.0)
                    throw parse_error("division by zero", den_pos);
                c /= q;
            }
            term.coefficient *= c;
            have_coefficient = true;
        }
        bool need_factor = false;
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '*') {
                if (need_factor)
                    throw parse_error("unexpected '*'", pos_);
                ++pos_;
                skip_ws();
                need_factor = true;
                if (!at_letter())
                    throw parse_error("expected variable after '*'", pos_);
            }
            if (!at_letter()) {
                if (need_factor)
                    throw parse_error("expected variable", pos_);
                break;
            }
            const std::size_t var_pos = pos_;
            std::string name = parse_identifier();
            int power = 1;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '^') {
                ++pos_;
                power = parse_exponent();
            }
            positions_.emplace(name, var_pos);
            term.factors.emplace_back(std::move(name), power);
            need_factor = false;
        }
        if (!have_coefficient && term.factors.empty()) {
            if (pos_ < text_.size())
                throw parse_error(std::string("unexpected character '") + text_[pos_] + "'", pos_);
            throw parse_error("expected term", term_start);
        }
        terms_.push_back(std::move(term));
    }

    static std::optional<std::size_t> numbered_index(const std::string& name)
    {
        if (name.size() < 2 || name.front() != 'X' || name[1] == '0')
            return std::nullopt;
        std::size_t idx = 0;
        for (std::size_t k = 1; k < name.size(); ++k) {
            if (!std::isdigit(static_cast<unsigned char>(name[k])))
                return std::nullopt;
            idx = idx * 10 + static_cast<std::size_t>(name[k] - '0');
            if (idx > 4096)
                return std::nullopt;
        }
        return idx;
    }

    ParsedPolynomial assemble()
    {
        std::vector<std::string> names;
        if (names_) {
            names = *names_;
        } else {
            std::set<std::string> seen;
            for (const auto& t : terms_)
                for (const auto& f : t.factors)
                    seen.insert(f.first);
            bool numbered = !seen.empty();
            std::size_t max_index = 0;
            for (const auto& s : seen) {
                auto idx = numbered_index(s);
                if (!idx) {
                    numbered = false;
                    break;
                }
                max_index = std::max(max_index, *idx);
            }
            names = numbered ? default_variable_names(max_index)
                             : std::vector<std::string>(seen.begin(), seen.end());
        }
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (!index.emplace(names[i], i).second)
                throw std::invalid_argument("duplicate variable name '" + names[i] + "'");

        SparsePolynomial f(names.size());
        for (const auto& t : terms_) {
            ExponentVector alpha(names.size());
            for (const auto& [name, power] : t.factors) {
                auto it = index.find(name);
                if (it == index.end())
                    throw parse_error("unknown variable '" + name + "'", positions_.find(name)->second);
                alpha.set(it->second, alpha[it->second] + power);
            }
            f.add_term(alpha, t.coefficient);
        }
        return {std::move(f), std::move(names)};
    }

    std::string_view text_;
    const std::optional<std::vector<std::string>>& names_;
    std::size_t pos_ = 0;
    std::vector<RawTerm> terms_;
    std::map<std::string, std::size_t> positions_;
};

} // namespace detail

/// Parses polynomial text. Without explicit names, identifiers are a letter
/// followed by optional digits; if all of them read X1, X2, ... the variable
/// count is the largest index, otherwise the distinct names sorted.
inline ParsedPolynomial parse_polynomial_with_names(std::string_view text,
                                                    const std::optional<std::vector<std::string>>& var_names = {})
{
    return detail::PolynomialParser(text, var_names).parse();
}

inline SparsePolynomial parse_polynomial(std::string_view text,
                                         const std::optional<std::vector<std::string>>& var_names = {})
{
    return parse_polynomial_with_names(text, var_names).polynomial;
}

/// Reads one polynomial from a file; '#' starts a comment running to end of line.
inline ParsedPolynomial read_polynomial_file(const std::string& path,
                                             const std::optional<std::vector<std::string>>& var_names = {})
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read '" + path + "'");
    std::string text, line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        text += line;
        text += ' ';
    }
    return parse_polynomial_with_names(text, var_names);
}

/// Canonical text in graded lexicographic order. Coefficients use the
/// shortest representation that round-trips, so parsing the output with the
/// same names reproduces f exactly.
inline std::string to_string(const SparsePolynomial& f, const std::vector<std::string>& names)
{
    if (names.size() != f.variable_count())
        throw std::invalid_argument("variable name count does not match polynomial");
    if (f.is_zero())
        return "0";
    std::vector<std::pair<ExponentVector, double>> sorted(f.terms().begin(), f.terms().end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return GradedLexGreater{}(a.first, b.first); });
    std::string out;
    bool first = true;
    for (const auto& [alpha, c] : sorted) {
        const double mag = std::fabs(c);
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        const bool constant = alpha.is_zero();
        bool need_star = false;
        if (constant || mag != 1.0) {
            out += detail::format_double(mag);
            need_star = true;
        }
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] == 0)
                continue;
            if (need_star)
                out += '*';
            out += names[i];
            if (alpha[i] != 1)
                out += '^' + std::to_string(alpha[i]);
            need_star = true;
        }
    }
    return out;
}

inline std::string to_string(const SparsePolynomial& f)
{
    return to_string(f, default_variable_names(f.variable_count()));
}

// ---------------------------------------------------------------------------
// Structure
// ---------------------------------------------------------------------------

/// f_0, f_{2d,i}, Omega, Delta and Delta^{<2d} of an even-degree polynomial.
/// The maps carry the coefficient f_alpha of each index.
struct DecompositionView {
    std::size_t n = 0;
    int two_d = 0;
    double f0 = 0.0;
    std::vector<double> diag;
    std::map<ExponentVector, double> omega;
    std::map<ExponentVector, double> delta;
    std::map<ExponentVector, double> delta_lt;

    int half_degree() const noexcept { return two_d / 2; }
};

/// True iff c X^alpha is not a square, i.e. c < 0 or some alpha_i is odd.
inline bool is_nonsquare_term(const ExponentVector& alpha, double c) noexcept
{
    return c < 0.0 || !alpha.all_even();
}

inline DecompositionView decompose(const SparsePolynomial& f)
{
    const int deg = f.degree();
    if (deg == 0)
        throw std::invalid_argument("constant input");
    if (deg % 2 != 0)
        throw std::invalid_argument("odd degree " + std::to_string(deg));
    DecompositionView v;
    v.n = f.variable_count();
    v.two_d = deg;
    v.diag.assign(v.n, 0.0);
    for (const auto& [alpha, c] : f.terms()) {
        if (alpha.is_zero()) {
            v.f0 = c;
            continue;
        }
        if (alpha.support_size() == 1 && alpha.total_degree() == deg) {
            for (std::size_t i = 0; i < v.n; ++i)
                if (alpha[i] != 0)
                    v.diag[i] = c;
            continue;
        }
        v.omega.emplace(alpha, c);
        if (is_nonsquare_term(alpha, c)) {
            v.delta.emplace(alpha, c);
            if (alpha.total_degree() < deg)
                v.delta_lt.emplace(alpha, c);
        }
    }
    return v;
}

/// Y^{deg f} f(X/Y): a form in n+1 variables, the new variable last.
inline SparsePolynomial homogenize(const SparsePolynomial& f)
{
    const int deg = f.degree();
    if (deg == 0)
        throw std::invalid_argument("constant input");
    SparsePolynomial g(f.variable_count() + 1);
    for (const auto& [alpha, c] : f.terms())
        g.add_term(alpha.appended(deg - alpha.total_degree()), c);
    return g;
}

/// Substitutes 1 for the last variable.
inline SparsePolynomial dehomogenize(const SparsePolynomial& g)
{
    if (g.variable_count() == 0)
        throw std::invalid_argument("no variable to eliminate");
    SparsePolynomial f(g.variable_count() - 1);
    for (const auto& [alpha, c] : g.terms())
        f.add_term(alpha.dropped_last(), c);
    return f;
}

} // namespace polygp

#endif // POLYGP_POLYNOMIAL_HPP
