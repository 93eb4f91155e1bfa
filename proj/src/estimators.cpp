#include "unseen/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "unseen/error.hpp"

namespace unseen {

namespace {

using WeightKey = std::tuple<std::uint64_t, double, double, double>;

struct WeightCache {
    std::shared_mutex mutex;
    std::map<WeightKey, std::shared_ptr<const ChebyshevWeights>> entries;
};

WeightCache& weight_cache() {
    static WeightCache cache;
    return cache;
}

// Monomial coefficients of T_degree(scale * p + shift).
std::vector<double> shifted_chebyshev(std::uint64_t degree, double scale, double shift) {
    std::vector<double> prev{1.0};
    if (degree == 0) return prev;
    std::vector<double> cur{shift, scale};
    for (std::uint64_t d = 1; d < degree; ++d) {
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            next[j] += 2.0 * shift * cur[j];
            next[j + 1] += 2.0 * scale * cur[j];
        }
        for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

ChebyshevWeights build_weights(std::uint64_t k, double n, double c0, double c1) {
    const double log_k = std::log(static_cast<double>(k));
    ChebyshevWeights w;
    w.left = 1.0 / static_cast<double>(k);
    w.right = c1 * log_k / n;
    const auto degree = static_cast<std::uint64_t>(std::floor(c0 * log_k));
    if (degree == 0 || !(w.right > w.left)) {
        w.poly = {-1.0};
        return w;
    }
    w.degree = degree;
    const double scale = 2.0 / (w.right - w.left);
    const double shift = -(w.right + w.left) / (w.right - w.left);
    auto t = shifted_chebyshev(degree, scale, shift);
    const double at_zero = t[0];
    w.poly.resize(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) w.poly[j] = -t[j] / at_zero;

    // a_j j! / n^j, accumulated as a running product to avoid overflow.
    w.weights.resize(degree);
    double factor = 1.0;
    for (std::uint64_t j = 1; j <= degree; ++j) {
        factor *= static_cast<double>(j) / n;
        w.weights[j - 1] = 1.0 + w.poly[j] * factor;
    }
    return w;
}

}  // namespace

std::string_view to_string(EstimatorId id) noexcept {
    switch (id) {
        case EstimatorId::plugin: return "plugin";
        case EstimatorId::chao: return "chao";
        case EstimatorId::modified_chao: return "modified_chao";
        case EstimatorId::chebyshev: return "chebyshev";
    }
    return "unknown";
}

EstimatorId parse_estimator(std::string_view name) {
    for (EstimatorId id : {EstimatorId::plugin, EstimatorId::chao, EstimatorId::modified_chao,
                           EstimatorId::chebyshev}) {
        if (to_string(id) == name) return id;
    }
    throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

double plugin_support(const Fingerprint& fp) noexcept { return static_cast<double>(fp.distinct()); }

std::optional<double> chao_unseen(const Fingerprint& fp) {
    const auto phi2 = static_cast<double>(fp.phi(2));
    if (phi2 == 0.0) return std::nullopt;
    const auto phi1 = static_cast<double>(fp.phi(1));
    return phi1 * phi1 / (2.0 * phi2);
}

double modified_chao_unseen(const Fingerprint& fp) noexcept {
    const auto phi1 = static_cast<double>(fp.phi(1));
    const auto phi2 = static_cast<double>(fp.phi(2));
    return phi1 * phi1 / (2.0 * (phi2 + 1.0));
}

std::shared_ptr<const ChebyshevWeights> chebyshev_weights(std::uint64_t k, double n, double c0, double c1) {
    if (k < 2) throw InvalidArgument("Chebyshev estimator needs k >= 2");
    if (!(n > 0.0) || !(c0 > 0.0) || !(c1 > 0.0)) {
        throw InvalidArgument("Chebyshev estimator needs n, c0, c1 > 0");
    }
    auto& cache = weight_cache();
    const WeightKey key{k, n, c0, c1};
    {
        std::shared_lock lock(cache.mutex);
        if (auto it = cache.entries.find(key); it != cache.entries.end()) return it->second;
    }
    auto built = std::make_shared<const ChebyshevWeights>(build_weights(k, n, c0, c1));
    std::unique_lock lock(cache.mutex);
    return cache.entries.try_emplace(key, std::move(built)).first->second;
}

EstimatorOutput chebyshev_support(const Fingerprint& fp, std::uint64_t k, double n, double c0, double c1) {
    const auto w = chebyshev_weights(k, n, c0, c1);
    double total = 0.0;
    for (const auto& [j, count] : fp.entries()) total += w->weight(j) * static_cast<double>(count);
    const double seen = plugin_support(fp);
    const double value = std::clamp(total, seen, std::max(seen, static_cast<double>(k)));
    return {value, EstimatorId::chebyshev};
}

EstimatorOutput support_estimate(const Fingerprint& fp, EstimatorId unseen) {
    switch (unseen) {
        case EstimatorId::plugin: return {plugin_support(fp), unseen};
        case EstimatorId::modified_chao: return {plugin_support(fp) + modified_chao_unseen(fp), unseen};
        case EstimatorId::chao: {
            const auto u = chao_unseen(fp);
            if (!u) throw UndefinedEstimate("Chao estimator undefined: phi_2 = 0");
            return {plugin_support(fp) + *u, unseen};
        }
        case EstimatorId::chebyshev: break;
    }
    throw InvalidArgument("chebyshev needs k and n; use chebyshev_support");
}

std::optional<double> estimate_support(const Fingerprint& fp, EstimatorId id, std::uint64_t k, double n) {
    switch (id) {
        case EstimatorId::plugin: return plugin_support(fp);
        case EstimatorId::modified_chao: return plugin_support(fp) + modified_chao_unseen(fp);
        case EstimatorId::chao: {
            const auto u = chao_unseen(fp);
            if (!u) return std::nullopt;
            return plugin_support(fp) + *u;
        }
        case EstimatorId::chebyshev: return chebyshev_support(fp, k, n).value;
    }
    return std::nullopt;
}

}  // namespace unseen
