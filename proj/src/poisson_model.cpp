#include "unseen/poisson_model.hpp"

#include <cmath>
#include <string>

#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

constexpr double kInversionLimit = 30.0;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t poisson_inversion(double mean, std::mt19937_64& rng) {
    const double start = std::exp(-mean);
    const double give_up = mean + 40.0 * std::sqrt(mean) + 60.0;
    for (;;) {
        const double u = uniform01(rng);
        double pmf = start;
        double cdf = pmf;
        std::uint64_t x = 0;
        while (u >= cdf) {
            ++x;
            pmf *= mean / static_cast<double>(x);
            cdf += pmf;
            if (static_cast<double>(x) > give_up) break;
        }
        // Only reachable when rounding leaves cdf short of u; redraw.
        if (static_cast<double>(x) <= give_up) return x;
    }
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables". Exact for mean >= 10.
std::uint64_t poisson_ptrs(double mean, std::mt19937_64& rng) {
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double u = uniform01(rng) - 0.5;
        const double v = uniform01(rng);
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0) continue;
        if (us < 0.013 && v > us) continue;
        const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
        const double rhs = -mean + kf * log_mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
}

}  // namespace

Fingerprint::Fingerprint(std::map<std::uint64_t, std::uint64_t> phi, std::optional<std::uint64_t> phi0)
    : phi_(std::move(phi)), phi0_(phi0) {
    for (const auto& [i, count] : phi_) {
        if (i == 0) throw InvalidArgument("fingerprint keys start at 1; use phi0 for unseen symbols");
        if (count == 0) throw InvalidArgument("fingerprint stores only non-zero prevalences");
    }
}

std::uint64_t Fingerprint::phi(std::uint64_t i) const {
    if (i == 0) {
        if (!phi0_) throw InvalidArgument("phi0 is latent: generating distribution unknown");
        return *phi0_;
    }
    const auto it = phi_.find(i);
    return it == phi_.end() ? 0 : it->second;
}

std::uint64_t Fingerprint::distinct() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [i, count] : phi_) total += count;
    return total;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double uniform01(std::mt19937_64& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t poisson_variate(double mean, std::mt19937_64& rng) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidArgument("Poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    return mean < kInversionLimit ? poisson_inversion(mean, rng) : poisson_ptrs(mean, rng);
}

void sample_into(const DiscreteDistribution& p, double n, std::mt19937_64& rng,
                 std::vector<std::uint64_t>& counts) {
    if (!(n > 0.0)) throw InvalidArgument("sample size n must be positive");
    counts.resize(p.support_size());
    const auto probs = p.probs();
    for (std::size_t x = 0; x < probs.size(); ++x) counts[x] = poisson_variate(n * probs[x], rng);
}

MultiplicitySample sample(const DiscreteDistribution& p, double n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MultiplicitySample s;
    sample_into(p, n, rng, s.counts);
    return s;
}

Fingerprint fingerprint(std::span<const std::uint64_t> counts, bool latent_known) {
    std::map<std::uint64_t, std::uint64_t> phi;
    std::uint64_t zeros = 0;
    for (std::uint64_t c : counts) {
        if (c == 0) {
            ++zeros;
        } else {
            ++phi[c];
        }
    }
    return Fingerprint(std::move(phi), latent_known ? std::optional<std::uint64_t>(zeros) : std::nullopt);
}

Fingerprint fingerprint(const MultiplicitySample& s, const DiscreteDistribution* generating) {
    if (generating != nullptr && generating->support_size() != s.counts.size()) {
        throw InvalidArgument("sample length does not match the generating distribution's support");
    }
    return fingerprint(s.counts, generating != nullptr);
}

std::vector<double> poisson_means(const DiscreteDistribution& p, double n) {
    std::vector<double> means;
    means.reserve(p.support_size());
    for (double px : p.probs()) means.push_back(n * px);
    return means;
}

double expected_prevalence(std::span<const double> means, std::uint64_t i) {
    CompensatedSum acc;
    for (double m : means) acc += poisson_pmf(m, i);
    return acc.value();
}

double expected_prevalence(const DiscreteDistribution& p, double n, std::uint64_t i) {
    return expected_prevalence(poisson_means(p, n), i);
}

double prevalence_second_moment(std::span<const double> means, std::uint64_t i) {
    CompensatedSum mean;
    CompensatedSum var;
    for (double m : means) {
        const double q = poisson_pmf(m, i);
        mean += q;
        var += q * (1.0 - q);
    }
    return mean.value() * mean.value() + var.value();
}

double prevalence_second_moment(const DiscreteDistribution& p, double n, std::uint64_t i) {
    return prevalence_second_moment(poisson_means(p, n), i);
}

double exact_plugin_mse(const DiscreteDistribution& p, double n) {
    CompensatedSum unseen;
    CompensatedSum var;
    for (double px : p.probs()) {
        const double q = std::exp(-n * px);
        unseen += q;
        var += q * (1.0 - q);
    }
    return unseen.value() * unseen.value() + var.value();
}

double exact_bias_expression(const DiscreteDistribution& p, double n) {
    const auto means = poisson_means(p, n);
    const double e2 = expected_prevalence(means, 2);
    if (!(e2 > 0.0)) throw UndefinedEstimate("E[phi_2] is zero; bias expression undefined");
    return prevalence_second_moment(means, 1) / (2.0 * e2) - expected_prevalence(means, 0);
}

}  // namespace unseen
