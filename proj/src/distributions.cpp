#include "unseen/distributions.hpp"

#include <cmath>
#include <sstream>

#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

constexpr double kSumTolerance = 1e-12;

std::vector<double> normalized(std::vector<double> weights) {
    const double total = compensated_sum(weights);
    for (double& w : weights) w /= total;
    return weights;
}

// Longest m such that weight(m) / (weight(1) + ... + weight(m)) >= 1/k.
// The ratio is non-increasing in m for non-increasing weights.
template <class WeightFn>
std::size_t strict_prefix(std::uint64_t k, WeightFn weight) {
    const double floor = 1.0 / static_cast<double>(k);
    CompensatedSum partial;
    partial += weight(1);
    std::size_t m = 1;
    while (m < k) {
        const double next = weight(m + 1);
        CompensatedSum extended = partial;
        extended += next;
        if (next / extended.value() < floor) break;
        partial = extended;
        ++m;
    }
    return m;
}

}  // namespace

std::string_view to_string(Family family) noexcept {
    switch (family) {
        case Family::uniform: return "uniform";
        case Family::zipf: return "zipf";
        case Family::geometric: return "geometric";
        case Family::two_mixture: return "two_mixture";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    for (Family f : all_families()) {
        if (to_string(f) == name) return f;
    }
    throw InvalidArgument("unknown distribution family '" + std::string(name) + "'");
}

std::vector<Family> all_families() {
    return {Family::uniform, Family::zipf, Family::geometric, Family::two_mixture};
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs, std::uint64_t k, bool strict)
    : probs_(std::move(probs)), k_(k), strict_(strict) {
    if (k_ == 0) throw InvalidArgument("k must be positive");
    if (probs_.empty()) throw InvalidArgument("distribution has empty support");
    for (double p : probs_) {
        if (!(p > 0.0) || p > 1.0) {
            std::ostringstream msg;
            msg << "probability " << p << " outside (0, 1]";
            throw InvalidArgument(msg.str());
        }
    }
    const double total = compensated_sum(probs_);
    if (std::fabs(total - 1.0) > kSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "probabilities sum to " << total;
        throw InvalidArgument(msg.str());
    }
    if (strict_) {
        if (probs_.size() > k_) throw InvalidArgument("support exceeds k in strict mode");
        const double floor = 1.0 / static_cast<double>(k_);
        for (double p : probs_) {
            if (p < floor - kSumTolerance) throw InvalidArgument("probability below 1/k in strict mode");
        }
    }
}

DiscreteDistribution make_distribution(Family family, std::uint64_t k, bool strict,
                                       std::optional<std::size_t> lenient_support) {
    if (k < 2) throw InvalidArgument("k must be at least 2");
    const std::size_t lenient_m = lenient_support.value_or(k);
    if (!strict && lenient_m == 0) throw InvalidArgument("support size must be positive");

    switch (family) {
        case Family::uniform: {
            const std::size_t m = strict ? k : lenient_m;
            return {std::vector<double>(m, 1.0 / static_cast<double>(m)), k, strict};
        }
        case Family::zipf: {
            auto weight = [](std::size_t i) { return 1.0 / static_cast<double>(i); };
            const std::size_t m = strict ? strict_prefix(k, weight) : lenient_m;
            std::vector<double> w(m);
            for (std::size_t i = 0; i < m; ++i) w[i] = weight(i + 1);
            return {normalized(std::move(w)), k, strict};
        }
        case Family::geometric: {
            const double ratio = 1.0 - 1.0 / static_cast<double>(k);
            auto weight = [ratio](std::size_t i) { return std::pow(ratio, static_cast<double>(i - 1)); };
            const std::size_t m = strict ? strict_prefix(k, weight) : lenient_m;
            std::vector<double> w(m);
            for (std::size_t i = 0; i < m; ++i) w[i] = weight(i + 1);
            return {normalized(std::move(w)), k, strict};
        }
        case Family::two_mixture: {
            if (k % 2 != 0) throw InvalidArgument("two_mixture requires even k");
            // k/2 symbols; the light half (rounded up) gets weight 1, the rest 3.
            const std::size_t m = k / 2;
            const std::size_t light = (m + 1) / 2;
            std::vector<double> w(m, 3.0);
            for (std::size_t i = 0; i < light; ++i) w[i] = 1.0;
            return {normalized(std::move(w)), k, strict};
        }
    }
    throw InvalidArgument("unknown family");
}

std::size_t support_size(const DiscreteDistribution& p) noexcept { return p.support_size(); }

}  // namespace unseen
