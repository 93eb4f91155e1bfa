#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "unseen/distributions.hpp"
#include "unseen/error.hpp"

namespace unseen {

/// Positive root of u^2 = 4 e^{-(u+2)} (about 0.5569), by bisection on
/// [0.1, 1]. Computed once and memoized.
double solve_alpha();

/// sigma = beta_0 + sum_{i>=1} beta_i / sqrt(2 pi i). Throws InvalidArgument
/// for coefficients outside [0, 1].
double sigma_of(std::span<const double> coeffs);

/// sigma of the linear functional phi_2 alone: 1 / sqrt(4 pi).
double sigma_chao();

/// 1 / (1 - 2 e^{-2})^4, the conditioning constant of the low-collision bound.
double low_collision_constant();

struct PluginMseBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Worst-case plug-in MSE over Delta_k: upper = k^2 e^{-2n/k} + k e^{-n/k},
/// lower = upper - k e^{-2n/k} (attained by the uniform distribution).
PluginMseBounds plugin_mse_bounds(double n, std::uint64_t k);

struct ChaoMseBound {
    double leading = 0.0;  ///< k^2 (1 + n/(k alpha))^{-4} e^{-2n/k}
    double epsilon = 0.0;
    double total = 0.0;
};

/// Worst-case MSE bound for the modified Chao estimator. Inapplicable unless
/// n^{4/5} > sqrt(4/pi).
BoundResult<ChaoMseBound> chao_mse_upper(double n, std::uint64_t k);

/// High-collision MSE bound, in terms of exact moments. Requires
/// E[phi_2] > 4 sigma_Chao.
BoundResult<double> high_collision_bound(double e_phi1_sq, double e_phi2, double e_phi0, std::uint64_t k);

struct BiasBounds {
    double lower = 0.0;
    double upper = 0.0;
    double sq_upper = 0.0;
};

/// Bracket for E[phi_1^2]/(2E[phi_2]) - E[phi_0] over Delta_k, and a bound on its square.
BiasBounds bias_bounds(double n, std::uint64_t k);

/// Low-collision MSE bound as a function of E[phi_2]:
/// (4+8a)(k/n)^4 E^2 + (28a(k/n)^3 + 2(k/n)^2 + 0.5a(k/n)) E + 6a(k/n)^2.
double low_collision_bound(double e_phi2, double n, std::uint64_t k);

/// The same bound at E[phi_2] = n^{4/5}, with the published rounded
/// coefficients (32.28, 98.97, 2, 1.77, 21.21). Requires n >= 1.
double low_collision_bound_at_threshold(double n, std::uint64_t k);

/// The k^2/n^2 coefficient carried into the combined worst-case bound.
inline constexpr double kEpsilonQuadraticCoefficient = 22.21;
/// The same coefficient as printed for the low-collision lemma itself.
inline constexpr double kLowCollisionQuadraticCoefficient = 21.21;

struct BoundReport {
    double n = 0.0;
    std::uint64_t k = 0;
    double plugin_lower = 0.0;
    double plugin_upper = 0.0;
    std::optional<double> chao_theorem1;  ///< empty when inapplicable
    std::optional<double> epsilon_term;
    double bias_lower = 0.0;
    double bias_upper = 0.0;
    double bias_sq_upper = 0.0;
    std::optional<double> low_collision;
    std::optional<double> high_collision;
};

/// Distribution-free report. low_collision uses the threshold form (n >= 1).
BoundReport bound_report(double n, std::uint64_t k);

/// Report for a specific P: low/high collision bounds use P's exact moments,
/// k is taken from P.
BoundReport bound_report(const DiscreteDistribution& p, double n);

}  // namespace unseen
