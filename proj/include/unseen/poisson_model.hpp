#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "unseen/distributions.hpp"

namespace unseen {

/// Per-symbol multiplicities N_x, one entry per supported symbol of the
/// generating distribution.
struct MultiplicitySample {
    std::vector<std::uint64_t> counts;
};

/// Prevalences phi_i (symbols seen exactly i times, i >= 1). phi0 is the
/// latent number of supported-but-unseen symbols and is only known when the
/// generating distribution is.
class Fingerprint {
public:
    Fingerprint() = default;
    /// Zero entries and a zero key are rejected with InvalidArgument.
    explicit Fingerprint(std::map<std::uint64_t, std::uint64_t> phi,
                         std::optional<std::uint64_t> phi0 = std::nullopt);

    /// phi_i for i >= 1; zero when absent. phi(0) returns phi0 or throws.
    std::uint64_t phi(std::uint64_t i) const;
    const std::map<std::uint64_t, std::uint64_t>& entries() const noexcept { return phi_; }
    std::optional<std::uint64_t> phi0() const noexcept { return phi0_; }
    bool empty() const noexcept { return phi_.empty(); }
    /// Number of distinct seen symbols.
    std::uint64_t distinct() const noexcept;

    bool operator==(const Fingerprint&) const = default;

private:
    std::map<std::uint64_t, std::uint64_t> phi_;
    std::optional<std::uint64_t> phi0_;
};

/// 64-bit seed for trial `index` of a run seeded with `master`. Mixing is
/// SplitMix64, so neighbouring indices give unrelated streams.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& rng) noexcept;

/// Exact Poisson variate: sequential inversion below mean 30, transformed
/// rejection (PTRS) at and above it.
std::uint64_t poisson_variate(double mean, std::mt19937_64& rng);

/// Independent Poisson(n p_x) counts for every supported symbol.
MultiplicitySample sample(const DiscreteDistribution& p, double n, std::uint64_t seed);
void sample_into(const DiscreteDistribution& p, double n, std::mt19937_64& rng,
                 std::vector<std::uint64_t>& counts);

/// phi0 is filled in only when the generating distribution is supplied.
Fingerprint fingerprint(const MultiplicitySample& s,
                        const DiscreteDistribution* generating = nullptr);
Fingerprint fingerprint(std::span<const std::uint64_t> counts, bool latent_known);

/// E[phi_i] = sum_x e^{-n p_x} (n p_x)^i / i!
double expected_prevalence(const DiscreteDistribution& p, double n, std::uint64_t i);
/// Same sum with the per-symbol Poisson means given directly.
double expected_prevalence(std::span<const double> means, std::uint64_t i);

/// E[phi_i^2]; phi_i is a sum of independent indicators.
double prevalence_second_moment(const DiscreteDistribution& p, double n, std::uint64_t i);
double prevalence_second_moment(std::span<const double> means, std::uint64_t i);

/// Exact MSE of the plug-in support estimator:
/// (sum e^{-n p_x})^2 + sum e^{-n p_x}(1 - e^{-n p_x}).
double exact_plugin_mse(const DiscreteDistribution& p, double n);

/// E[phi_1^2] / (2 E[phi_2]) - E[phi_0]. Throws UndefinedEstimate when
/// E[phi_2] underflows to zero.
double exact_bias_expression(const DiscreteDistribution& p, double n);

std::vector<double> poisson_means(const DiscreteDistribution& p, double n);

}  // namespace unseen
