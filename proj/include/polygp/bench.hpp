#ifndef POLYGP_BENCH_HPP
#define POLYGP_BENCH_HPP

// Random instances X_1^{2d} + ... + X_n^{2d} + g(X), deg g <= 2d-1, and
// timing of compute_fgp over a grid of (n, 2d) cells.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "polygp/bounds.hpp"
#include "polygp/oracle.hpp"
#include "polygp/polynomial.hpp"

namespace polygp {

struct RandomPolynomialSpec {
    std::size_t n = 3;
    int two_d = 4;
    double density = 1.0;            ///< term count = min(pool, density * n * 2d)
    double coefficient_range = 10.0; ///< coefficients uniform on [-c, c]
};

/// All exponent vectors in n variables with total degree at most `max_degree`.
inline std::vector<ExponentVector> exponents_up_to(std::size_t n, int max_degree)
{
    std::vector<ExponentVector> out;
    ExponentVector cur(n);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur.set(i, k);
            rec(i + 1, left - k);
        }
        cur.set(i, 0);
    };
    if (n > 0)
        rec(0, max_degree);
    return out;
}

template <class Rng>
SparsePolynomial random_bench_polynomial(const RandomPolynomialSpec& spec, Rng& rng)
{
    if (spec.n == 0 || spec.two_d < 2 || spec.two_d % 2 != 0)
        throw std::invalid_argument("need n >= 1 and an even degree 2d >= 2");
    if (!(spec.density > 0.0) || !(spec.coefficient_range > 0.0))
        throw std::invalid_argument("density and coefficient range must be positive");
    std::vector<ExponentVector> pool = exponents_up_to(spec.n, spec.two_d - 1);
    const auto wanted = static_cast<std::size_t>(std::llround(spec.density * static_cast<double>(spec.n * spec.two_d)));
    const std::size_t count = std::min(pool.size(), std::max<std::size_t>(wanted, 1));
    // Partial Fisher-Yates: the first `count` entries are a uniform sample.
    for (std::size_t k = 0; k < count; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
        std::swap(pool[k], pool[pick(rng)]);
    }
    std::uniform_real_distribution<double> coeff(-spec.coefficient_range, spec.coefficient_range);
    SparsePolynomial f(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
        f.add_term(ExponentVector::unit(spec.n, i, spec.two_d), 1.0);
    for (std::size_t k = 0; k < count; ++k)
        f.add_term(pool[k], coeff(rng));
    return f;
}

struct BenchConfig {
    std::size_t n_min = 3, n_max = 3;
    int two_d_min = 4, two_d_max = 4;
    int count = 10;
    double density = 1.0;
    double coefficient_range = 10.0;
    std::uint64_t seed = 1;
    unsigned threads = 0;        ///< 0: hardware concurrency
    bool with_oracle = false;    ///< also estimate f_* and count f_gp > estimate
    SolverOptions solver;
    SearchBudget budget;

    void validate() const
    {
        if (n_min < 1 || n_max < n_min)
            throw std::invalid_argument("invalid range of n");
        if (two_d_min < 2 || two_d_max < two_d_min || two_d_min % 2 != 0)
            throw std::invalid_argument("invalid range of 2d (even, at least 2)");
        if (count < 0)
            throw std::invalid_argument("count must be nonnegative");
    }
};

struct BenchInstance {
    SparsePolynomial polynomial;
    double fgp = 0.0;
    double time_ms = 0.0;
    std::optional<double> oracle;
    std::optional<std::string> error;
};

struct BenchCell {
    std::size_t n = 0;
    int two_d = 0;
    std::vector<BenchInstance> instances;

    double mean_ms() const
    {
        if (instances.empty())
            return 0.0;
        double s = 0.0;
        for (const auto& i : instances)
            s += i.time_ms;
        return s / static_cast<double>(instances.size());
    }

    double median_ms() const
    {
        if (instances.empty())
            return 0.0;
        std::vector<double> t;
        for (const auto& i : instances)
            t.push_back(i.time_ms);
        std::sort(t.begin(), t.end());
        const std::size_t m = t.size() / 2;
        return t.size() % 2 ? t[m] : 0.5 * (t[m - 1] + t[m]);
    }

    int failures() const
    {
        int k = 0;
        for (const auto& i : instances)
            k += i.error.has_value();
        return k;
    }

    /// Instances with f_gp above the oracle estimate by more than tol.
    int oracle_violations(double tol = 1e-4) const
    {
        int k = 0;
        for (const auto& i : instances)
            if (i.oracle && !i.error && i.fgp > *i.oracle + tol)
                ++k;
        return k;
    }
};

/// Worker count: POLYGP_THREADS if set, else the requested count, else the
/// number of hardware threads.
inline unsigned resolve_thread_count(unsigned requested)
{
    if (const char* env = std::getenv("POLYGP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Instances are drawn up front from one seeded generator, so results do
/// not depend on the worker count.
inline std::vector<BenchCell> run_bench(const BenchConfig& cfg)
{
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::vector<BenchCell> cells;
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        for (int td = cfg.two_d_min; td <= cfg.two_d_max; td += 2) {
            BenchCell cell;
            cell.n = n;
            cell.two_d = td;
            const RandomPolynomialSpec spec{n, td, cfg.density, cfg.coefficient_range};
            for (int k = 0; k < cfg.count; ++k)
                cell.instances.push_back({random_bench_polynomial(spec, rng), 0.0, 0.0, std::nullopt, std::nullopt});
            cells.push_back(std::move(cell));
        }
    }

    std::vector<BenchInstance*> jobs;
    for (auto& c : cells)
        for (auto& i : c.instances)
            jobs.push_back(&i);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            BenchInstance& inst = *jobs[j];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                inst.fgp = compute_fgp(inst.polynomial, cfg.solver).value;
            } catch (const std::exception& e) {
                inst.error = e.what();
            }
            inst.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            if (cfg.with_oracle)
                inst.oracle = estimate_global_min(inst.polynomial, cfg.budget, cfg.seed + j).value;
        }
    };
    const unsigned threads = std::min<std::size_t>(resolve_thread_count(cfg.threads), std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return cells;
}

} // namespace polygp

#endif // POLYGP_BENCH_HPP
