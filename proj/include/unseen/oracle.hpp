#pragma once

// Exhaustive exact-expectation engine over tiny alphabets.
//
// Every symbol's multiplicity is an independent Poisson variable truncated at
// a per-symbol cutoff; the joint table enumerates all count vectors below the
// cutoffs. Expectations carry an explicit error bar (tail mass times the
// largest |g| seen on the table), and every inequality check folds those
// error bars into its slack.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "unseen/distributions.hpp"

namespace unseen::oracle {

inline constexpr double kDefaultTailTolerance = 1e-10;
inline constexpr std::size_t kDefaultCellCap = 10'000'000;
inline constexpr std::size_t kMaxSymbols = 4;

/// Read-only view of one enumerated multiplicity vector.
class Cell {
public:
    Cell(std::span<const std::uint32_t> counts, double prob) : counts_(counts), prob_(prob) {}

    std::span<const std::uint32_t> counts() const noexcept { return counts_; }
    double prob() const noexcept { return prob_; }
    /// phi_i of this cell; phi_0 counts every zero (all symbols are supported).
    double phi(std::uint64_t i) const noexcept;

private:
    std::span<const std::uint32_t> counts_;
    double prob_;
};

class OracleInstance {
public:
    /// 1 <= means.size() <= 4, all means > 0. The cutoff for symbol x is the
    /// smallest M with P(N_x > M) < tail_tol / m. Throws InvalidArgument when
    /// the table would exceed `cell_cap` cells.
    static OracleInstance build(std::span<const double> means, double tail_tol = kDefaultTailTolerance,
                                std::size_t cell_cap = kDefaultCellCap);

    std::span<const double> means() const noexcept { return means_; }
    std::span<const std::uint32_t> cutoffs() const noexcept { return cutoffs_; }
    std::size_t symbols() const noexcept { return means_.size(); }
    std::size_t cells() const noexcept { return probs_.size(); }
    Cell cell(std::size_t index) const noexcept;

    /// 1 - (enumerated probability mass), computed from the per-symbol tails.
    double tail_mass() const noexcept { return tail_mass_; }
    double enumerated_mass() const noexcept { return enumerated_mass_; }

    template <class Fn>
    void for_each_cell(Fn&& fn) const {
        for (std::size_t c = 0; c < probs_.size(); ++c) fn(cell(c));
    }

private:
    std::vector<double> means_;
    std::vector<std::uint32_t> cutoffs_;
    std::vector<std::uint32_t> counts_;  // cells x symbols, row-major
    std::vector<double> probs_;
    double tail_mass_ = 0.0;
    double enumerated_mass_ = 0.0;
};

struct Expectation {
    double value = 0.0;
    double error_bar = 0.0;  ///< tail_mass * sup |g| over the table
    double sup_abs = 0.0;
};

Expectation exact_expectation(const OracleInstance& inst, const std::function<double(const Cell&)>& g);

/// Homogeneous degree-d polynomial in prevalences:
/// sum over terms of coeff * phi_{i_1} ... phi_{i_d}.
class PolyFunctional {
public:
    struct Term {
        std::vector<std::uint64_t> indices;
        double coeff = 0.0;
    };

    PolyFunctional(std::uint64_t degree, std::vector<Term> terms);

    /// phi_i^power as a single-term functional.
    static PolyFunctional power(std::uint64_t index, std::uint64_t power);

    std::uint64_t degree() const noexcept { return degree_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    double evaluate(const Cell& c) const noexcept;
    bool coefficients_in_unit_interval() const noexcept;
    std::uint64_t max_index() const noexcept;
    std::string describe() const;

private:
    std::uint64_t degree_;
    std::vector<Term> terms_;
};

/// sum_i beta_i phi_i with every beta_i in [0, 1].
class LinearFunctional {
public:
    explicit LinearFunctional(std::vector<double> beta);
    /// beta_index = 1, everything else 0.
    static LinearFunctional single(std::uint64_t index);

    std::span<const double> beta() const noexcept { return beta_; }
    double evaluate(const Cell& c) const noexcept;
    double sigma() const;
    std::string describe() const;

private:
    std::vector<double> beta_;
};

/// A named real function, used as f in the decoupling checks.
struct ScalarFunction {
    std::string name;
    std::function<double(double)> fn;

    double operator()(double x) const { return fn(x); }
};

namespace functions {
ScalarFunction reciprocal();          ///< 1 / (1 + x)
ScalarFunction reciprocal_pair();     ///< 1 / ((1 + x)(2 + x))
ScalarFunction reciprocal_squared();  ///< 1 / (1 + x)^2
ScalarFunction exp_decay();           ///< e^{-x}
ScalarFunction negative_identity();   ///< -x
ScalarFunction constant(double c);
/// prod_{j=1}^{r} (x + j)^{-1}; r = 0 gives 1.
ScalarFunction rising_reciprocal(std::uint64_t r);
/// sum_r v_r * rising_reciprocal(r)(x).
ScalarFunction span_v(std::vector<double> v);
/// Piecewise-linear through (xs, ys), extended linearly past both ends.
/// xs strictly increasing, at least two knots.
ScalarFunction tabulated(std::vector<double> xs, std::vector<double> ys);
}  // namespace functions

/// Finite-difference shape checks on a sorted set of points.
bool non_increasing_on(const ScalarFunction& f, std::span<const double> points, double tol = 1e-12);
bool non_decreasing_on(const ScalarFunction& f, std::span<const double> points, double tol = 1e-12);
bool concave_on(const ScalarFunction& f, std::span<const double> points, double tol = 1e-12);

/// Distinct values of the linear functional over the enumerated table, sorted.
std::vector<double> linear_support(const OracleInstance& inst, const LinearFunctional& lin);

enum class Verdict { holds, falsified, skipped };
std::string_view to_string(Verdict v) noexcept;

/// Outcome of one numerical inequality check. `margin` is the signed amount
/// by which the inequality holds (negative = violated before slack);
/// `slack` is the truncation and rounding allowance.
struct Certificate {
    std::string check;
    Verdict verdict = Verdict::skipped;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double slack = 0.0;
    std::string note;

    bool holds() const noexcept { return verdict == Verdict::holds; }
    bool falsified() const noexcept { return verdict == Verdict::falsified; }
    bool skipped() const noexcept { return verdict == Verdict::skipped; }
};

/// E[poly * f(lin)] >= E[poly] * E[f(lin + d)] for non-increasing f.
Certificate check_decoupling_lower(const OracleInstance& inst, const PolyFunctional& poly,
                                   const LinearFunctional& lin, const ScalarFunction& f);

/// E[poly * f(lin)] <= E[poly] * f(E[lin] - d sigma) for concave non-increasing f,
/// when E[lin] >= d sigma.
Certificate check_decoupling_upper_concave(const OracleInstance& inst, const PolyFunctional& poly,
                                           const LinearFunctional& lin, const ScalarFunction& f);

/// E[poly * f(lin)] <= E[poly] * sum_t f'_t (E[lin] - d sigma)^{-t} where
/// f' (in the span of the rising reciprocals) dominates f on the support of lin.
Certificate check_domination_upper(const OracleInstance& inst, const PolyFunctional& poly,
                                   const LinearFunctional& lin, const ScalarFunction& f,
                                   std::span<const double> fprime);

/// One independent summand: (value in [0,1], mass) pairs.
using SupportList = std::vector<std::pair<double, double>>;

/// Generating polynomial E[z^X] of X = sum of independent summands, as
/// exponent -> mass. Throws InvalidArgument on bad values or masses.
std::map<double, double> charpoly(std::span<const SupportList> supports);

/// int_0^u E[z^X] dz <= E[X]^{-1} E[u^X], u in (0, 1].
Certificate check_charpoly_integral(std::span<const SupportList> supports, double u);

/// E[prod_{j=1}^r (X + j)^{-1}] <= E[X]^{-r}.
Certificate check_rising_reciprocal(std::span<const SupportList> supports, std::uint64_t r);

/// c_{h,1..h} from c_{h,1} = 1, c_{h,k} = sum_{l=k-1}^{h-1} C(h-1, l) c_{l,k-1}.
std::vector<std::uint64_t> moment_coefficients(std::uint64_t h);

/// E[phi_j^h] <= sum_k c_{h,k} E[phi_j]^k (h <= 6).
Certificate check_moment_bound(const OracleInstance& inst, std::uint64_t j, std::uint64_t h);

/// E[poly^2] <= E[poly]^2 + 6 k L E[poly] for degree-2 poly over phi_0..phi_L
/// with coefficients in [0, 1] and 1 < m <= k.
Certificate check_degree2_second_moment(const OracleInstance& inst, const PolyFunctional& poly,
                                        std::uint64_t k, std::uint64_t max_index);

/// E[phi_j^h | phi_2 = 0] <= (1 - 2e^{-2})^{-min(m, h)} E[phi_j^h], j != 2.
Certificate check_conditional_moment(const OracleInstance& inst, std::uint64_t j, std::uint64_t h);

/// E[shape(phi_i) | phi_j = t] is non-increasing over the feasible t, for
/// non-decreasing shape. Values of t with P(phi_j = t) < min_mass are ignored.
Certificate check_negative_regression(const OracleInstance& inst, std::uint64_t i, std::uint64_t j,
                                      const ScalarFunction& shape, double min_mass = 1e-9);

/// E[phi_1]^2 <= 2 E[phi_0] E[phi_2] from exact moments.
Certificate check_cauchy_schwarz(const DiscreteDistribution& p, double n);

}  // namespace unseen::oracle
