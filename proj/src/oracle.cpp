#include "unseen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "unseen/bounds.hpp"
#include "unseen/error.hpp"
#include "unseen/numeric.hpp"
#include "unseen/poisson_model.hpp"

namespace unseen::oracle {

namespace {

constexpr double kRelativeRounding = 1e-12;
constexpr double kAbsoluteRounding = 1e-14;

double rounding(double a, double b) {
    return kRelativeRounding * (std::fabs(a) + std::fabs(b)) + kAbsoluteRounding;
}

// Bound on |a*b - a'*b'| when |a - a'| <= a.error_bar and |b - b'| <= b.error_bar.
double product_error(const Expectation& a, const Expectation& b) {
    return std::fabs(a.value) * b.error_bar + std::fabs(b.value) * a.error_bar + a.error_bar * b.error_bar;
}

Certificate finish(std::string name, double lhs, double rhs, double margin, double slack, std::string note = {}) {
    Certificate c;
    c.check = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = margin;
    c.slack = slack;
    c.note = std::move(note);
    c.verdict = margin >= -slack ? Verdict::holds : Verdict::falsified;
    return c;
}

Certificate skipped(std::string name, std::string note) {
    Certificate c;
    c.check = std::move(name);
    c.verdict = Verdict::skipped;
    c.note = std::move(note);
    return c;
}

std::vector<double> sorted_unique(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::fabs(a - b) <= 1e-12; }),
             xs.end());
    return xs;
}

// Largest deviation of f over [x - e, x + e] measured at the endpoints.
double perturbation(const ScalarFunction& f, double x, double e) {
    const double fx = f(x);
    return std::max(std::fabs(f(x + e) - fx), std::fabs(f(x - e) - fx));
}

}  // namespace

double Cell::phi(std::uint64_t i) const noexcept {
    double count = 0.0;
    for (std::uint32_t c : counts_) {
        if (c == i) count += 1.0;
    }
    return count;
}

OracleInstance OracleInstance::build(std::span<const double> means, double tail_tol, std::size_t cell_cap) {
    if (means.empty() || means.size() > kMaxSymbols) {
        throw InvalidArgument("oracle instances hold between 1 and 4 symbols");
    }
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw InvalidArgument("tail tolerance must lie in (0, 1)");
    for (double m : means) {
        if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("oracle means must be positive and finite");
    }

    OracleInstance inst;
    inst.means_.assign(means.begin(), means.end());
    const std::size_t m = means.size();
    const double per_symbol = tail_tol / static_cast<double>(m);

    std::vector<std::vector<double>> pmfs(m);
    double log_kept = 0.0;
    double cells = 1.0;
    for (std::size_t x = 0; x < m; ++x) {
        std::uint32_t cutoff = 0;
        double tail = poisson_upper_tail(means[x], cutoff);
        while (!(tail < per_symbol)) {
            ++cutoff;
            tail = poisson_upper_tail(means[x], cutoff);
        }
        inst.cutoffs_.push_back(cutoff);
        log_kept += std::log1p(-tail);
        cells *= static_cast<double>(cutoff + 1);
        for (std::uint32_t j = 0; j <= cutoff; ++j) pmfs[x].push_back(poisson_pmf(means[x], j));
    }
    if (cells > static_cast<double>(cell_cap)) {
        std::ostringstream msg;
        msg << "oracle table needs " << cells << " cells, cap is " << cell_cap;
        throw InvalidArgument(msg.str());
    }
    inst.tail_mass_ = -std::expm1(log_kept);

    const auto total = static_cast<std::size_t>(cells);
    inst.counts_.reserve(total * m);
    inst.probs_.reserve(total);
    std::vector<std::uint32_t> digits(m, 0);
    CompensatedSum mass;
    for (std::size_t c = 0; c < total; ++c) {
        double prob = 1.0;
        for (std::size_t x = 0; x < m; ++x) {
            prob *= pmfs[x][digits[x]];
            inst.counts_.push_back(digits[x]);
        }
        inst.probs_.push_back(prob);
        mass += prob;
        for (std::size_t x = 0; x < m; ++x) {
            if (++digits[x] <= inst.cutoffs_[x]) break;
            digits[x] = 0;
        }
    }
    inst.enumerated_mass_ = mass.value();
    return inst;
}

Cell OracleInstance::cell(std::size_t index) const noexcept {
    const std::size_t m = means_.size();
    return Cell(std::span<const std::uint32_t>(counts_).subspan(index * m, m), probs_[index]);
}

Expectation exact_expectation(const OracleInstance& inst, const std::function<double(const Cell&)>& g) {
    CompensatedSum acc;
    double sup = 0.0;
    inst.for_each_cell([&](const Cell& c) {
        const double v = g(c);
        acc += v * c.prob();
        sup = std::max(sup, std::fabs(v));
    });
    return {acc.value(), inst.tail_mass() * sup, sup};
}

// ---------------------------------------------------------------------------
// Functionals

PolyFunctional::PolyFunctional(std::uint64_t degree, std::vector<Term> terms)
    : degree_(degree), terms_(std::move(terms)) {
    if (degree_ == 0) throw InvalidArgument("polynomial degree must be positive");
    for (const auto& t : terms_) {
        if (t.indices.size() != degree_) throw InvalidArgument("polynomial term does not match its degree");
        if (!std::isfinite(t.coeff)) throw InvalidArgument("polynomial coefficient must be finite");
    }
}

PolyFunctional PolyFunctional::power(std::uint64_t index, std::uint64_t power) {
    return PolyFunctional(power, {Term{std::vector<std::uint64_t>(power, index), 1.0}});
}

double PolyFunctional::evaluate(const Cell& c) const noexcept {
    double total = 0.0;
    for (const auto& t : terms_) {
        double prod = t.coeff;
        for (std::uint64_t i : t.indices) prod *= c.phi(i);
        total += prod;
    }
    return total;
}

bool PolyFunctional::coefficients_in_unit_interval() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff >= 0.0 && t.coeff <= 1.0; });
}

std::uint64_t PolyFunctional::max_index() const noexcept {
    std::uint64_t hi = 0;
    for (const auto& t : terms_) {
        for (std::uint64_t i : t.indices) hi = std::max(hi, i);
    }
    return hi;
}

std::string PolyFunctional::describe() const {
    std::ostringstream out;
    out.precision(3);
    for (std::size_t n = 0; n < terms_.size(); ++n) {
        if (n) out << " + ";
        out << terms_[n].coeff;
        for (std::uint64_t i : terms_[n].indices) out << "*phi" << i;
    }
    return out.str();
}

LinearFunctional::LinearFunctional(std::vector<double> beta) : beta_(std::move(beta)) {
    sigma_of(beta_);  // validates [0, 1]
}

LinearFunctional LinearFunctional::single(std::uint64_t index) {
    std::vector<double> beta(index + 1, 0.0);
    beta[index] = 1.0;
    return LinearFunctional(std::move(beta));
}

double LinearFunctional::evaluate(const Cell& c) const noexcept {
    double total = 0.0;
    for (std::uint32_t count : c.counts()) {
        if (count < beta_.size()) total += beta_[count];
    }
    return total;
}

double LinearFunctional::sigma() const { return sigma_of(beta_); }

std::string LinearFunctional::describe() const {
    std::ostringstream out;
    out.precision(3);
    bool first = true;
    for (std::size_t i = 0; i < beta_.size(); ++i) {
        if (beta_[i] == 0.0) continue;
        if (!first) out << " + ";
        out << beta_[i] << "*phi" << i;
        first = false;
    }
    return first ? "0" : out.str();
}

namespace functions {

ScalarFunction reciprocal() {
    return {"1/(1+x)", [](double x) { return 1.0 / (1.0 + x); }};
}

ScalarFunction reciprocal_pair() {
    return {"1/((1+x)(2+x))", [](double x) { return 1.0 / ((1.0 + x) * (2.0 + x)); }};
}

ScalarFunction reciprocal_squared() {
    return {"1/(1+x)^2", [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); }};
}

ScalarFunction exp_decay() {
    return {"exp(-x)", [](double x) { return std::exp(-x); }};
}

ScalarFunction negative_identity() {
    return {"-x", [](double x) { return -x; }};
}

ScalarFunction constant(double c) {
    std::ostringstream name;
    name << "const(" << c << ")";
    return {name.str(), [c](double) { return c; }};
}

ScalarFunction rising_reciprocal(std::uint64_t r) {
    return {"f_" + std::to_string(r), [r](double x) {
                double v = 1.0;
                for (std::uint64_t j = 1; j <= r; ++j) v /= (x + static_cast<double>(j));
                return v;
            }};
}

ScalarFunction span_v(std::vector<double> v) {
    std::ostringstream name;
    name << "V(";
    for (std::size_t i = 0; i < v.size(); ++i) name << (i ? "," : "") << v[i];
    name << ")";
    return {name.str(), [v = std::move(v)](double x) {
                double total = 0.0;
                double basis = 1.0;
                for (std::size_t r = 0; r < v.size(); ++r) {
                    if (r > 0) basis /= (x + static_cast<double>(r));
                    total += v[r] * basis;
                }
                return total;
            }};
}

ScalarFunction tabulated(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() < 2 || xs.size() != ys.size()) throw InvalidArgument("tabulated function needs >= 2 matching knots");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw InvalidArgument("tabulated knots must be strictly increasing");
    }
    return {"tabulated", [xs = std::move(xs), ys = std::move(ys)](double x) {
                std::size_t hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
                hi = std::clamp<std::size_t>(hi, 1, xs.size() - 1);
                const std::size_t lo = hi - 1;
                const double slope = (ys[hi] - ys[lo]) / (xs[hi] - xs[lo]);
                return ys[lo] + slope * (x - xs[lo]);
            }};
}

}  // namespace functions

bool non_increasing_on(const ScalarFunction& f, std::span<const double> points, double tol) {
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double a = f(points[i - 1]);
        const double b = f(points[i]);
        if (b > a + tol * (1.0 + std::fabs(a))) return false;
    }
    return true;
}

bool non_decreasing_on(const ScalarFunction& f, std::span<const double> points, double tol) {
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double a = f(points[i - 1]);
        const double b = f(points[i]);
        if (b < a - tol * (1.0 + std::fabs(a))) return false;
    }
    return true;
}

bool concave_on(const ScalarFunction& f, std::span<const double> points, double tol) {
    for (std::size_t i = 2; i < points.size(); ++i) {
        const double x0 = points[i - 2], x1 = points[i - 1], x2 = points[i];
        const double s01 = (f(x1) - f(x0)) / (x1 - x0);
        const double s12 = (f(x2) - f(x1)) / (x2 - x1);
        if (s12 > s01 + tol * (1.0 + std::fabs(s01))) return false;
    }
    return true;
}

std::vector<double> linear_support(const OracleInstance& inst, const LinearFunctional& lin) {
    std::vector<double> values;
    values.reserve(inst.cells());
    inst.for_each_cell([&](const Cell& c) { values.push_back(lin.evaluate(c)); });
    return sorted_unique(std::move(values));
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::falsified: return "FALSIFIED";
        case Verdict::skipped: return "skipped";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Decoupling inequalities

Certificate check_decoupling_lower(const OracleInstance& inst, const PolyFunctional& poly,
                                   const LinearFunctional& lin, const ScalarFunction& f) {
    const std::string name = "decoupling-lower";
    const auto d = static_cast<double>(poly.degree());
    auto points = linear_support(inst, lin);
    const std::size_t base = points.size();
    for (std::size_t i = 0; i < base; ++i) points.push_back(points[i] + d);
    points = sorted_unique(std::move(points));
    if (!non_increasing_on(f, points)) return skipped(name, f.name + " is not non-increasing on the support");

    const auto lhs = exact_expectation(inst, [&](const Cell& c) { return poly.evaluate(c) * f(lin.evaluate(c)); });
    const auto a = exact_expectation(inst, [&](const Cell& c) { return poly.evaluate(c); });
    const auto b = exact_expectation(inst, [&](const Cell& c) { return f(lin.evaluate(c) + d); });
    const double rhs = a.value * b.value;
    return finish(name, lhs.value, rhs, lhs.value - rhs,
                  lhs.error_bar + product_error(a, b) + rounding(lhs.value, rhs));
}

Certificate check_decoupling_upper_concave(const OracleInstance& inst, const PolyFunctional& poly,
                                           const LinearFunctional& lin, const ScalarFunction& f) {
    const std::string name = "decoupling-upper-concave";
    const auto d = static_cast<double>(poly.degree());
    const auto mean_lin = exact_expectation(inst, [&](const Cell& c) { return lin.evaluate(c); });
    const double shift = d * lin.sigma();
    if (mean_lin.value < shift) return skipped(name, "E[linear] < d * sigma");
    const double x0 = mean_lin.value - shift;

    auto points = linear_support(inst, lin);
    points.push_back(x0);
    points = sorted_unique(std::move(points));
    if (!non_increasing_on(f, points) || !concave_on(f, points)) {
        return skipped(name, f.name + " is not concave and non-increasing on the support");
    }

    const auto lhs = exact_expectation(inst, [&](const Cell& c) { return poly.evaluate(c) * f(lin.evaluate(c)); });
    const auto a = exact_expectation(inst, [&](const Cell& c) { return poly.evaluate(c); });
    const double fx = f(x0);
    const double df = perturbation(f, x0, mean_lin.error_bar);
    const double rhs = a.value * fx;
    const double rhs_err = std::fabs(a.value) * df + std::fabs(fx) * a.error_bar + a.error_bar * df;
    return finish(name, lhs.value, rhs, rhs - lhs.value, lhs.error_bar + rhs_err + rounding(lhs.value, rhs));
}

Certificate check_domination_upper(const OracleInstance& inst, const PolyFunctional& poly,
                                   const LinearFunctional& lin, const ScalarFunction& f,
                                   std::span<const double> fprime) {
    const std::string name = "domination-upper";
    for (std::size_t t = 1; t < fprime.size(); ++t) {
        if (fprime[t] < 0.0) return skipped(name, "dominator has a negative coefficient");
    }
    const auto d = static_cast<double>(poly.degree());
    const auto mean_lin = exact_expectation(inst, [&](const Cell& c) { return lin.evaluate(c); });
    const double x0 = mean_lin.value - d * lin.sigma();
    if (!(x0 > 0.0)) return skipped(name, "E[linear] <= d * sigma");

    const auto dominator = functions::span_v(std::vector<double>(fprime.begin(), fprime.end()));
    for (double x : linear_support(inst, lin)) {
        const double fx = f(x);
        if (dominator(x) < fx - 1e-12 * (1.0 + std::fabs(fx))) {
            std::ostringstream msg;
            msg << dominator.name << " does not dominate " << f.name << " at " << x;
            return skipped(name, msg.str());
        }
    }

    auto series = [&](double x) {
        double total = 0.0;
        for (std::size_t t = 0; t < fprime.size(); ++t) total += fprime[t] * std::pow(x, -static_cast<double>(t));
        return total;
    };
    const auto lhs = exact_expectation(inst, [&](const Cell& c) { return poly.evaluate(c) * f(lin.evaluate(c)); });
    const auto a = exact_expectation(inst, [&](const Cell& c) { return poly.evaluate(c); });
    const double s = series(x0);
    const double lo = x0 - mean_lin.error_bar;
    const double ds = lo > 0.0 ? std::fabs(series(lo) - s) : std::fabs(s);
    const double rhs = a.value * s;
    const double rhs_err = std::fabs(a.value) * ds + std::fabs(s) * a.error_bar + a.error_bar * ds;
    return finish(name, lhs.value, rhs, rhs - lhs.value, lhs.error_bar + rhs_err + rounding(lhs.value, rhs));
}

// ---------------------------------------------------------------------------
// Generalized Poisson binomial

std::map<double, double> charpoly(std::span<const SupportList> supports) {
    std::map<double, double> poly{{0.0, 1.0}};
    for (const auto& summand : supports) {
        double total = 0.0;
        for (const auto& [value, mass] : summand) {
            if (!(value >= 0.0 && value <= 1.0)) throw InvalidArgument("summand values must lie in [0, 1]");
            if (!(mass >= 0.0)) throw InvalidArgument("summand masses must be non-negative");
            total += mass;
        }
        if (std::fabs(total - 1.0) > 1e-12) throw InvalidArgument("summand masses must sum to 1");
        std::map<double, double> next;
        for (const auto& [exponent, mass] : poly) {
            for (const auto& [value, p] : summand) next[exponent + value] += mass * p;
        }
        poly = std::move(next);
    }
    return poly;
}

namespace {

double charpoly_mean(const std::map<double, double>& poly) {
    CompensatedSum mean;
    for (const auto& [s, mass] : poly) mean += s * mass;
    return mean.value();
}

}  // namespace

Certificate check_charpoly_integral(std::span<const SupportList> supports, double u) {
    const std::string name = "charpoly-integral";
    if (!(u > 0.0 && u <= 1.0)) throw InvalidArgument("u must lie in (0, 1]");
    const auto poly = charpoly(supports);
    const double mean = charpoly_mean(poly);
    if (!(mean > 0.0)) return skipped(name, "E[X] = 0");
    CompensatedSum integral;
    CompensatedSum at_u;
    for (const auto& [s, mass] : poly) {
        integral += mass * std::pow(u, s + 1.0) / (s + 1.0);
        at_u += mass * std::pow(u, s);
    }
    const double lhs = integral.value();
    const double rhs = at_u.value() / mean;
    return finish(name, lhs, rhs, rhs - lhs, rounding(lhs, rhs));
}

Certificate check_rising_reciprocal(std::span<const SupportList> supports, std::uint64_t r) {
    const std::string name = "rising-reciprocal";
    const auto poly = charpoly(supports);
    const double mean = charpoly_mean(poly);
    if (!(mean > 0.0)) return skipped(name, "E[X] = 0");
    const auto f = functions::rising_reciprocal(r);
    CompensatedSum lhs;
    for (const auto& [s, mass] : poly) lhs += mass * f(s);
    const double rhs = std::pow(mean, -static_cast<double>(r));
    return finish(name, lhs.value(), rhs, rhs - lhs.value(), rounding(lhs.value(), rhs));
}

// ---------------------------------------------------------------------------
// Moment lemmas

std::vector<std::uint64_t> moment_coefficients(std::uint64_t h) {
    if (h == 0) throw InvalidArgument("h must be at least 1");
    std::vector<std::vector<std::uint64_t>> binom(h, std::vector<std::uint64_t>(h, 0));
    for (std::uint64_t a = 0; a < h; ++a) {
        binom[a][0] = 1;
        for (std::uint64_t b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + (b < a ? binom[a - 1][b] : 0);
    }
    // c[l][k] for 1 <= k <= l <= h; zero elsewhere.
    std::vector<std::vector<std::uint64_t>> c(h + 1, std::vector<std::uint64_t>(h + 1, 0));
    for (std::uint64_t l = 1; l <= h; ++l) {
        c[l][1] = 1;
        for (std::uint64_t k = 2; k <= l; ++k) {
            std::uint64_t total = 0;
            for (std::uint64_t q = k - 1; q <= l - 1; ++q) total += binom[l - 1][q] * c[q][k - 1];
            c[l][k] = total;
        }
    }
    return {c[h].begin() + 1, c[h].end()};
}

Certificate check_moment_bound(const OracleInstance& inst, std::uint64_t j, std::uint64_t h) {
    if (h == 0 || h > 6) throw InvalidArgument("moment bound checks support 1 <= h <= 6");
    const auto coeffs = moment_coefficients(h);
    const auto hd = static_cast<double>(h);
    const auto lhs = exact_expectation(inst, [&](const Cell& c) { return std::pow(c.phi(j), hd); });
    const auto mean = exact_expectation(inst, [&](const Cell& c) { return c.phi(j); });
    auto poly = [&](double e) {
        double total = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) total += static_cast<double>(coeffs[k]) * std::pow(e, k + 1.0);
        return total;
    };
    const double rhs = poly(mean.value);
    const double rhs_err = poly(mean.value + mean.error_bar) - rhs;
    return finish("moment-bound", lhs.value, rhs, rhs - lhs.value,
                  lhs.error_bar + rhs_err + rounding(lhs.value, rhs));
}

Certificate check_degree2_second_moment(const OracleInstance& inst, const PolyFunctional& poly,
                                        std::uint64_t k, std::uint64_t max_index) {
    if (poly.degree() != 2) throw InvalidArgument("degree-2 second-moment check needs a degree-2 polynomial");
    if (!poly.coefficients_in_unit_interval()) throw InvalidArgument("coefficients must lie in [0, 1]");
    if (max_index < 1 || poly.max_index() > max_index) throw InvalidArgument("indices must lie in [0, L], L >= 1");
    if (inst.symbols() < 2 || inst.symbols() > k) throw InvalidArgument("need 1 < alphabet size <= k");
    const auto sq = exact_expectation(inst, [&](const Cell& c) {
        const double v = poly.evaluate(c);
        return v * v;
    });
    const auto mean = exact_expectation(inst, [&](const Cell& c) { return poly.evaluate(c); });
    const double scale = 6.0 * static_cast<double>(k) * static_cast<double>(max_index);
    const double rhs = mean.value * mean.value + scale * mean.value;
    const double rhs_err = 2.0 * std::fabs(mean.value) * mean.error_bar + mean.error_bar * mean.error_bar
                         + scale * mean.error_bar;
    return finish("degree2-second-moment", sq.value, rhs, rhs - sq.value,
                  sq.error_bar + rhs_err + rounding(sq.value, rhs));
}

Certificate check_conditional_moment(const OracleInstance& inst, std::uint64_t j, std::uint64_t h) {
    if (j == 2) throw InvalidArgument("conditional moment bound requires j != 2");
    if (h == 0) throw InvalidArgument("h must be at least 1");
    const auto hd = static_cast<double>(h);
    const auto mass = exact_expectation(inst, [](const Cell& c) { return c.phi(2) == 0.0 ? 1.0 : 0.0; });
    if (!(mass.value > 0.0)) throw InvalidArgument("P(phi_2 = 0) is zero on the table");
    const auto joint = exact_expectation(inst, [&](const Cell& c) {
        return c.phi(2) == 0.0 ? std::pow(c.phi(j), hd) : 0.0;
    });
    const auto moment = exact_expectation(inst, [&](const Cell& c) { return std::pow(c.phi(j), hd); });

    const double lhs = joint.value / mass.value;
    const double lhs_err = std::max(lhs - joint.value / (mass.value + inst.tail_mass()),
                                    (joint.value + joint.error_bar) / mass.value - lhs);
    const double exponent = static_cast<double>(std::min<std::uint64_t>(inst.symbols(), h));
    const double factor = 1.0 / std::pow(1.0 - 2.0 * std::exp(-2.0), exponent);
    const double rhs = factor * moment.value;
    return finish("conditional-moment", lhs, rhs, rhs - lhs,
                  lhs_err + factor * moment.error_bar + rounding(lhs, rhs));
}

Certificate check_negative_regression(const OracleInstance& inst, std::uint64_t i, std::uint64_t j,
                                      const ScalarFunction& shape, double min_mass) {
    const std::string name = "negative-regression";
    if (i == j) throw InvalidArgument("negative regression compares two distinct prevalences");
    const std::size_t m = inst.symbols();
    std::vector<double> levels(m + 1);
    for (std::size_t t = 0; t <= m; ++t) levels[t] = static_cast<double>(t);
    if (!non_decreasing_on(shape, levels)) return skipped(name, shape.name + " is not non-decreasing");

    std::vector<CompensatedSum> mass(m + 1), weighted(m + 1);
    double sup = 0.0;
    inst.for_each_cell([&](const Cell& c) {
        const auto t = static_cast<std::size_t>(c.phi(j));
        const double v = shape(c.phi(i));
        mass[t] += c.prob();
        weighted[t] += v * c.prob();
        sup = std::max(sup, std::fabs(v));
    });

    struct Level {
        double cond;
        double err;
    };
    std::vector<Level> feasible;
    for (std::size_t t = 0; t <= m; ++t) {
        const double z = mass[t].value();
        if (z < min_mass) continue;
        const double cond = weighted[t].value() / z;
        const double err = inst.tail_mass() * (sup + std::fabs(cond)) / z;
        feasible.push_back({cond, err});
    }
    if (feasible.size() < 2) {
        Certificate c = finish(name, 0.0, 0.0, 0.0, 0.0, "fewer than two feasible conditioning values");
        return c;
    }
    std::size_t worst = 1;
    double worst_score = 0.0;
    for (std::size_t n = 1; n < feasible.size(); ++n) {
        const double margin = feasible[n - 1].cond - feasible[n].cond;
        const double slack = feasible[n - 1].err + feasible[n].err
                           + rounding(feasible[n - 1].cond, feasible[n].cond);
        const double score = margin + slack;
        if (n == 1 || score < worst_score) {
            worst = n;
            worst_score = score;
        }
    }
    const auto& prev = feasible[worst - 1];
    const auto& next = feasible[worst];
    return finish(name, next.cond, prev.cond, prev.cond - next.cond,
                  prev.err + next.err + rounding(prev.cond, next.cond));
}

Certificate check_cauchy_schwarz(const DiscreteDistribution& p, double n) {
    const auto means = poisson_means(p, n);
    const double e0 = expected_prevalence(means, 0);
    const double e1 = expected_prevalence(means, 1);
    const double e2 = expected_prevalence(means, 2);
    const double lhs = e1 * e1;
    const double rhs = 2.0 * e0 * e2;
    return finish("cauchy-schwarz", lhs, rhs, rhs - lhs, rounding(lhs, rhs) + 1e-300);
}

}  // namespace unseen::oracle
