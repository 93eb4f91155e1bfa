#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library; they use different algorithms or extended precision.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

/// Strict Zipf support: the largest m with (1/m)/H_m >= 1/k, probabilities
/// (1/i)/H_m, in long double.
inline std::vector<long double> zipf_strict(std::uint64_t k) {
    long double harmonic = 0.0L;
    std::uint64_t m = 0;
    for (std::uint64_t next = 1; next <= k; ++next) {
        const long double h = harmonic + 1.0L / static_cast<long double>(next);
        if ((1.0L / static_cast<long double>(next)) / h < 1.0L / static_cast<long double>(k)) break;
        harmonic = h;
        m = next;
    }
    std::vector<long double> p(m);
    for (std::uint64_t i = 0; i < m; ++i) p[i] = (1.0L / static_cast<long double>(i + 1)) / harmonic;
    return p;
}

/// Root of u^2 = 4 e^{-(u+2)} by interval halving on [0.5, 0.6] in long double.
inline long double alpha_root() {
    long double lo = 0.5L;
    long double hi = 0.6L;
    for (int it = 0; it < 200; ++it) {
        const long double mid = (lo + hi) / 2.0L;
        const long double r = mid * mid - 4.0L * std::exp(-(mid + 2.0L));
        (r < 0.0L ? lo : hi) = mid;
    }
    return (lo + hi) / 2.0L;
}

/// P(N <= c) for N ~ Poisson(mean), forward pmf recurrence in long double.
inline long double poisson_cdf(long double mean, std::uint64_t c) {
    long double term = std::exp(-mean);
    long double acc = term;
    for (std::uint64_t i = 1; i <= c; ++i) {
        term *= mean / static_cast<long double>(i);
        acc += term;
    }
    return acc;
}

inline long double poisson_pmf(long double mean, std::uint64_t i) {
    long double term = std::exp(-mean);
    for (std::uint64_t j = 1; j <= i; ++j) term *= mean / static_cast<long double>(j);
    return term;
}

/// Number of set partitions of {1..h} into exactly b blocks, for b = 1..h,
/// counted by enumerating restricted growth strings.
inline std::vector<std::uint64_t> partition_counts(std::uint64_t h) {
    std::vector<std::uint64_t> counts(h, 0);
    std::vector<std::uint64_t> rgs(h, 0);
    std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t pos, std::uint64_t blocks) {
        if (pos == h) {
            ++counts[blocks - 1];
            return;
        }
        for (std::uint64_t b = 0; b <= blocks; ++b) {
            rgs[pos] = b;
            rec(pos + 1, std::max(blocks, b + 1));
        }
    };
    if (h > 0) {
        rgs[0] = 0;
        rec(1, 1);
    }
    return counts;
}

/// E[g(N_1, ..., N_m)] for independent Poisson counts, by nested summation up
/// to `cutoff` per symbol in long double. Only for tiny m and cutoff.
inline long double brute_expectation(const std::vector<double>& means, std::uint64_t cutoff,
                                     const std::function<long double(const std::vector<std::uint64_t>&)>& g) {
    std::vector<std::uint64_t> counts(means.size(), 0);
    long double total = 0.0L;
    while (true) {
        long double prob = 1.0L;
        for (std::size_t x = 0; x < means.size(); ++x) prob *= poisson_pmf(means[x], counts[x]);
        total += prob * g(counts);
        std::size_t x = 0;
        while (x < counts.size() && counts[x] == cutoff) counts[x++] = 0;
        if (x == counts.size()) break;
        ++counts[x];
    }
    return total;
}

/// Number of entries of `counts` equal to i.
inline long double prevalence(const std::vector<std::uint64_t>& counts, std::uint64_t i) {
    long double c = 0.0L;
    for (auto v : counts) c += (v == i) ? 1.0L : 0.0L;
    return c;
}

}  // namespace oracles

namespace oracles {

/// log P(N = i) via lgamma, for means too large for the forward recurrence.
inline double poisson_log_pmf(double mean, std::uint64_t i) {
    const double x = static_cast<double>(i);
    return x * std::log(mean) - mean - std::lgamma(x + 1.0);
}

/// P(N <= c) + P(N >= d) for c < mean < d, summed outward from both ends.
inline double poisson_two_sided_tail(double mean, std::uint64_t c, std::uint64_t d) {
    double total = 0.0;
    for (std::uint64_t i = c;; --i) {
        const double t = std::exp(poisson_log_pmf(mean, i));
        total += t;
        if (t < total * 1e-18 || i == 0) break;
    }
    for (std::uint64_t i = d;; ++i) {
        const double t = std::exp(poisson_log_pmf(mean, i));
        total += t;
        if (t < total * 1e-18) break;
    }
    return total;
}

}  // namespace oracles
