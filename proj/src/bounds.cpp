#include "unseen/bounds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "unseen/poisson_model.hpp"

namespace unseen {

namespace {

double alpha_residual(double u) { return u * u - 4.0 * std::exp(-(u + 2.0)); }

double compute_alpha() {
    double lo = 0.1;  // residual < 0
    double hi = 1.0;  // residual > 0
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        if (alpha_residual(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void require_positive(double n, std::uint64_t k) {
    if (!(n > 0.0)) throw InvalidArgument("n must be positive");
    if (k == 0) throw InvalidArgument("k must be positive");
}

}  // namespace

double solve_alpha() {
    static const double alpha = compute_alpha();
    return alpha;
}

double sigma_of(std::span<const double> coeffs) {
    double sigma = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double beta = coeffs[i];
        if (!(beta >= 0.0 && beta <= 1.0)) {
            std::ostringstream msg;
            msg << "coefficient beta_" << i << " = " << beta << " outside [0, 1]";
            throw InvalidArgument(msg.str());
        }
        if (i == 0) {
            sigma += beta;
        } else {
            sigma += beta / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(i));
        }
    }
    return sigma;
}

double sigma_chao() { return 1.0 / std::sqrt(4.0 * std::numbers::pi); }

double low_collision_constant() { return 1.0 / std::pow(1.0 - 2.0 * std::exp(-2.0), 4); }

PluginMseBounds plugin_mse_bounds(double n, std::uint64_t k) {
    if (!(n >= 0.0)) throw InvalidArgument("n must be non-negative");
    const double kd = static_cast<double>(k);
    const double e1 = std::exp(-n / kd);
    const double e2 = std::exp(-2.0 * n / kd);
    const double upper = kd * kd * e2 + kd * e1;
    return {upper - kd * e2, upper};
}

BoundResult<ChaoMseBound> chao_mse_upper(double n, std::uint64_t k) {
    require_positive(n, k);
    const double offset = std::sqrt(4.0 / std::numbers::pi);
    const double n45 = std::pow(n, 0.8);
    if (!(n45 > offset)) {
        std::ostringstream msg;
        msg << "n^(4/5) = " << n45 << " does not exceed sqrt(4/pi)";
        return Inapplicable{msg.str()};
    }
    const double kd = static_cast<double>(k);
    const double alpha = solve_alpha();
    const double k2 = kd * kd;
    const double k3 = k2 * kd;
    const double k4 = k2 * k2;
    ChaoMseBound b;
    b.leading = k2 * std::pow(1.0 + n / (kd * alpha), -4.0) * std::exp(-2.0 * n / kd);
    b.epsilon = 4.0 * k4 / std::pow(n45 - offset, 3.0)
              + 32.28 * k4 / std::pow(n, 12.0 / 5.0)
              + 98.97 * k3 / std::pow(n, 11.0 / 5.0)
              + 2.0 * k2 / std::pow(n, 6.0 / 5.0)
              + 1.77 * kd / std::pow(n, 1.0 / 5.0)
              + kEpsilonQuadraticCoefficient * k2 / (n * n);
    b.total = b.leading + b.epsilon;
    return b;
}

BoundResult<double> high_collision_bound(double e_phi1_sq, double e_phi2, double e_phi0, std::uint64_t k) {
    const double gap = e_phi2 - 4.0 * sigma_chao();
    if (!(gap > 0.0)) {
        std::ostringstream msg;
        msg << "E[phi_2] = " << e_phi2 << " does not exceed 4 sigma_Chao";
        return Inapplicable{msg.str()};
    }
    const double kd = static_cast<double>(k);
    const double bias = e_phi1_sq / (2.0 * e_phi2) - e_phi0;
    return bias * bias + 4.0 * kd * kd * kd * kd / (gap * gap * gap);
}

BiasBounds bias_bounds(double n, std::uint64_t k) {
    require_positive(n, k);
    const double kd = static_cast<double>(k);
    const double shrink = 1.0 + n / (kd * solve_alpha());
    BiasBounds b;
    b.lower = -kd * std::exp(-n / kd) / (shrink * shrink);
    b.upper = kd / n;
    b.sq_upper = kd * kd * std::exp(-2.0 * n / kd) / std::pow(shrink, 4.0) + kd * kd / (n * n);
    return b;
}

double low_collision_bound(double e_phi2, double n, std::uint64_t k) {
    require_positive(n, k);
    const double a = low_collision_constant();
    const double r = static_cast<double>(k) / n;
    return (4.0 + 8.0 * a) * std::pow(r, 4.0) * e_phi2 * e_phi2
         + (28.0 * a * r * r * r + 2.0 * r * r + 0.5 * a * r) * e_phi2
         + 6.0 * a * r * r;
}

double low_collision_bound_at_threshold(double n, std::uint64_t k) {
    if (!(n >= 1.0)) throw InvalidArgument("low-collision threshold bound needs n >= 1");
    const double kd = static_cast<double>(k);
    const double k2 = kd * kd;
    return 32.28 * k2 * k2 / std::pow(n, 12.0 / 5.0)
         + 98.97 * k2 * kd / std::pow(n, 11.0 / 5.0)
         + 2.0 * k2 / std::pow(n, 6.0 / 5.0)
         + 1.77 * kd / std::pow(n, 1.0 / 5.0)
         + kLowCollisionQuadraticCoefficient * k2 / (n * n);
}

BoundReport bound_report(double n, std::uint64_t k) {
    require_positive(n, k);
    BoundReport r;
    r.n = n;
    r.k = k;
    const auto plugin = plugin_mse_bounds(n, k);
    r.plugin_lower = plugin.lower;
    r.plugin_upper = plugin.upper;
    if (const auto chao = chao_mse_upper(n, k)) {
        r.chao_theorem1 = chao->total;
        r.epsilon_term = chao->epsilon;
    }
    const auto bias = bias_bounds(n, k);
    r.bias_lower = bias.lower;
    r.bias_upper = bias.upper;
    r.bias_sq_upper = bias.sq_upper;
    if (n >= 1.0) r.low_collision = low_collision_bound_at_threshold(n, k);
    return r;
}

BoundReport bound_report(const DiscreteDistribution& p, double n) {
    BoundReport r = bound_report(n, p.k());
    r.low_collision.reset();
    const auto means = poisson_means(p, n);
    const double e0 = expected_prevalence(means, 0);
    const double e2 = expected_prevalence(means, 2);
    const double e1_sq = prevalence_second_moment(means, 1);
    r.low_collision = low_collision_bound(e2, n, p.k());
    if (const auto high = high_collision_bound(e1_sq, e2, e0, p.k())) r.high_collision = *high;
    return r;
}

}  // namespace unseen
