#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "unseen/poisson_model.hpp"

namespace unseen {

enum class EstimatorId { plugin, chao, modified_chao, chebyshev };

std::string_view to_string(EstimatorId id) noexcept;
EstimatorId parse_estimator(std::string_view name);

struct EstimatorOutput {
    double value = 0.0;
    EstimatorId estimator_id = EstimatorId::plugin;
};

/// Default Chebyshev tuning constants (degree and interval scale).
inline constexpr double kChebyshevC0 = 0.45;
inline constexpr double kChebyshevC1 = 0.5;

/// Number of distinct observed symbols.
double plugin_support(const Fingerprint& fp) noexcept;

/// phi_1^2 / (2 phi_2); empty when phi_2 = 0. Callers that want an always
/// defined value must ask for modified_chao_unseen explicitly.
std::optional<double> chao_unseen(const Fingerprint& fp);

/// phi_1^2 / (2 (phi_2 + 1)).
double modified_chao_unseen(const Fingerprint& fp) noexcept;

/// Linear-estimator weights g_j applied to phi_j.
///
/// For j <= degree: g_j = 1 + a_j j! / n^j, where sum_j a_j p^j is the
/// Chebyshev polynomial T_L mapped onto [1/k, c1 ln(k) / n] and scaled to
/// equal -1 at p = 0 (so E[g(N_x)] - 1 = e^{-n p} P(p) is uniformly small on
/// the interval). L = floor(c0 ln k). g_j = 1 beyond the degree, and the
/// estimator collapses to plug-in when the interval is empty.
struct ChebyshevWeights {
    std::uint64_t degree = 0;
    double left = 0.0;
    double right = 0.0;
    std::vector<double> poly;     ///< a_0..a_L, monomial coefficients in p
    std::vector<double> weights;  ///< g_1..g_L (index 0 is g_1)

    double weight(std::uint64_t j) const noexcept {
        return (j >= 1 && j <= weights.size()) ? weights[j - 1] : 1.0;
    }
};

/// Cached per (k, n, c0, c1); safe to call concurrently.
std::shared_ptr<const ChebyshevWeights> chebyshev_weights(std::uint64_t k, double n,
                                                          double c0 = kChebyshevC0,
                                                          double c1 = kChebyshevC1);

/// sum_j g_j phi_j, projected onto [distinct seen, k] (the true support lies there).
EstimatorOutput chebyshev_support(const Fingerprint& fp, std::uint64_t k, double n,
                                  double c0 = kChebyshevC0, double c1 = kChebyshevC1);

/// plug-in + unseen estimate. `unseen` must be chao or modified_chao;
/// throws UndefinedEstimate for chao with phi_2 = 0.
EstimatorOutput support_estimate(const Fingerprint& fp, EstimatorId unseen);

/// Uniform dispatch over all four estimators. Chebyshev needs k and n;
/// returns empty only for an undefined Chao estimate.
std::optional<double> estimate_support(const Fingerprint& fp, EstimatorId id, std::uint64_t k,
                                       double n);

}  // namespace unseen
