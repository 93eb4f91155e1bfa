#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unseen {

/// The synthetic families used in the estimator comparison.
enum class Family { uniform, zipf, geometric, two_mixture };

std::string_view to_string(Family family) noexcept;
/// Throws InvalidArgument for unknown names.
Family parse_family(std::string_view name);
std::vector<Family> all_families();

/// A probability vector over the supported symbols only.
///
/// Zero-probability symbols are never stored, so support_size() is the
/// length of probs(). When `strict` is set the distribution is checked for
/// membership in Delta_k: every entry >= 1/k and at most k entries.
class DiscreteDistribution {
public:
    /// Validates the invariants; throws InvalidArgument on violation.
    DiscreteDistribution(std::vector<double> probs, std::uint64_t k, bool strict);

    std::span<const double> probs() const noexcept { return probs_; }
    std::uint64_t k() const noexcept { return k_; }
    bool strict() const noexcept { return strict_; }
    std::size_t support_size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }

private:
    std::vector<double> probs_;
    std::uint64_t k_;
    bool strict_;
};

/// Builds a member of `family` for class parameter k (k >= 2).
///
/// Strict mode truncates Zipf and geometric supports to the longest prefix
/// whose renormalized minimum stays >= 1/k. Lenient mode normalizes over
/// `lenient_support` symbols (default k) with no probability floor.
/// two_mixture requires even k and always has k/2 symbols.
DiscreteDistribution make_distribution(Family family, std::uint64_t k, bool strict = true,
                                       std::optional<std::size_t> lenient_support = std::nullopt);

std::size_t support_size(const DiscreteDistribution& p) noexcept;

}  // namespace unseen
