#pragma once

#include <cstdint>
#include <span>

namespace unseen {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    CompensatedSum& operator+=(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;

/// P(N = i) for N ~ Poisson(mean), evaluated in log space. mean must be > 0.
double poisson_pmf(double mean, std::uint64_t i) noexcept;

/// P(N > cutoff) for N ~ Poisson(mean), summed term by term above the cutoff
/// so that small tails keep full relative precision.
double poisson_upper_tail(double mean, std::uint64_t cutoff) noexcept;

}  // namespace unseen
