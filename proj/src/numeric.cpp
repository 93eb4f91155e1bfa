#include "unseen/numeric.hpp"

#include <cmath>

namespace unseen {

CompensatedSum& CompensatedSum::operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
}

double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum acc;
    for (double x : xs) acc += x;
    return acc.value();
}

double poisson_pmf(double mean, std::uint64_t i) noexcept {
    if (i == 0) return std::exp(-mean);
    const double di = static_cast<double>(i);
    return std::exp(-mean + di * std::log(mean) - std::lgamma(di + 1.0));
}

double poisson_upper_tail(double mean, std::uint64_t cutoff) noexcept {
    if (static_cast<double>(cutoff) < mean) {
        // Tail holds most of the mass; the complement is the accurate side.
        CompensatedSum head;
        for (std::uint64_t j = 0; j <= cutoff; ++j) head += poisson_pmf(mean, j);
        return 1.0 - head.value();
    }
    // At or above the mode the terms decrease geometrically.
    CompensatedSum acc;
    std::uint64_t j = cutoff + 1;
    double term = poisson_pmf(mean, j);
    for (;;) {
        acc += term;
        ++j;
        term *= mean / static_cast<double>(j);
        if (term <= acc.value() * 1e-18 || term == 0.0) break;
    }
    return acc.value();
}

}  // namespace unseen
