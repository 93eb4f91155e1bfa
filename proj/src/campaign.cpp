#include "unseen/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "unseen/distributions.hpp"
#include "unseen/poisson_model.hpp"

namespace unseen::oracle {

namespace {

constexpr double kMinMean = 0.2;
constexpr double kMaxMean = 3.0;
constexpr std::uint64_t kMaxPrevalenceIndex = 3;

// Each group gets its own stream so that resizing one group never shifts another.
std::mt19937_64 group_rng(const CampaignConfig& cfg, std::uint64_t group) {
    return std::mt19937_64(trial_seed(cfg.seed, group));
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return lo + static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(hi - lo + 1));
}

OracleInstance random_instance(std::mt19937_64& rng, const CampaignConfig& cfg, std::size_t max_symbols,
                               std::size_t min_symbols = 1) {
    const auto m = static_cast<std::size_t>(pick(rng, min_symbols, max_symbols));
    std::vector<double> means(m);
    for (double& mean : means) mean = uniform(rng, kMinMean, kMaxMean);
    return OracleInstance::build(means, cfg.tail_tolerance);
}

PolyFunctional random_poly(std::mt19937_64& rng, std::uint64_t degree, std::uint64_t max_index) {
    const auto terms = pick(rng, 1, 3);
    std::vector<PolyFunctional::Term> out;
    for (std::uint64_t t = 0; t < terms; ++t) {
        PolyFunctional::Term term;
        for (std::uint64_t i = 0; i < degree; ++i) term.indices.push_back(pick(rng, 0, max_index));
        term.coeff = uniform01(rng);
        out.push_back(std::move(term));
    }
    return PolyFunctional(degree, std::move(out));
}

LinearFunctional random_linear(std::mt19937_64& rng, bool allow_zero_index) {
    std::vector<double> beta(kMaxPrevalenceIndex + 1, 0.0);
    const std::size_t first = allow_zero_index ? 0 : 1;
    bool any = false;
    for (std::size_t i = first; i < beta.size(); ++i) {
        if (uniform01(rng) < 0.5) {
            beta[i] = uniform01(rng);
            any = true;
        }
    }
    if (!any) beta[pick(rng, first, kMaxPrevalenceIndex)] = uniform(rng, 0.5, 1.0);
    return LinearFunctional(std::move(beta));
}

// Random concave, non-increasing piecewise-linear function on [0, span].
ScalarFunction random_concave_decreasing(std::mt19937_64& rng, double span) {
    const std::size_t knots = 6;
    std::vector<double> xs(knots), ys(knots);
    double slope = -uniform01(rng);
    ys[0] = uniform(rng, -1.0, 1.0);
    for (std::size_t i = 0; i < knots; ++i) {
        xs[i] = span * static_cast<double>(i) / static_cast<double>(knots - 1);
        if (i > 0) {
            ys[i] = ys[i - 1] + slope * (xs[i] - xs[i - 1]);
            slope -= uniform01(rng);
        }
    }
    auto f = functions::tabulated(std::move(xs), std::move(ys));
    f.name = "tabulated-concave";
    return f;
}

class Tally {
public:
    explicit Tally(std::string name) { line_.name = std::move(name); }

    // Records the certificates of one instance; returns true when none was skipped.
    bool add(const std::vector<Certificate>& certs, const std::string& context) {
        bool ran = true;
        for (const auto& c : certs) {
            if (c.skipped()) {
                ++line_.skipped;
                ran = false;
                continue;
            }
            ++line_.checks;
            if (!have_margin_ || c.margin < line_.min_margin) line_.min_margin = c.margin;
            have_margin_ = true;
            const double scale = std::max(std::fabs(c.lhs), std::fabs(c.rhs));
            if (scale > 0.0) line_.max_relative_slack = std::max(line_.max_relative_slack, c.slack / scale);
            if (c.holds() && c.margin < 0.0) ++line_.within_slack;
            if (c.falsified()) {
                ++line_.falsified;
                if (line_.first_failure.empty()) {
                    std::ostringstream msg;
                    msg.precision(10);
                    msg << c.check << " [" << context << "] lhs=" << c.lhs << " rhs=" << c.rhs
                        << " margin=" << c.margin << " slack=" << c.slack;
                    line_.first_failure = msg.str();
                }
            }
        }
        if (ran) ++line_.instances;
        return ran;
    }

    std::size_t instances() const noexcept { return line_.instances; }
    CampaignLine done() const { return line_; }

private:
    CampaignLine line_;
    bool have_margin_ = false;
};

std::string describe_instance(const OracleInstance& inst) {
    std::ostringstream out;
    out.precision(4);
    out << "means=(";
    for (std::size_t x = 0; x < inst.symbols(); ++x) out << (x ? "," : "") << inst.means()[x];
    out << ")";
    return out.str();
}

}  // namespace

std::size_t CampaignReport::falsifications() const noexcept {
    std::size_t total = 0;
    for (const auto& l : lines) total += l.falsified;
    return total;
}

bool CampaignReport::passed() const noexcept {
    return std::all_of(lines.begin(), lines.end(), [](const CampaignLine& l) { return l.passed(); });
}

CampaignLine campaign_decoupling_lower(const CampaignConfig& cfg) {
    auto rng = group_rng(cfg, 1);
    Tally tally("decoupling lower bound (non-increasing f)");
    const std::vector<ScalarFunction> fs{functions::reciprocal(), functions::exp_decay(),
                                         functions::reciprocal_squared()};
    for (std::size_t n = 0; n < cfg.instances; ++n) {
        const auto inst = random_instance(rng, cfg, 3);
        const auto poly = random_poly(rng, pick(rng, 1, 3), kMaxPrevalenceIndex);
        const auto lin = random_linear(rng, true);
        const auto& f = fs[n % fs.size()];
        tally.add({check_decoupling_lower(inst, poly, lin, f)},
                  describe_instance(inst) + " poly=" + poly.describe() + " lin=" + lin.describe() + " f=" + f.name);
    }
    return tally.done();
}

CampaignLine campaign_decoupling_upper(const CampaignConfig& cfg) {
    auto rng = group_rng(cfg, 2);
    Tally tally("decoupling upper bound (concave f)");
    const std::size_t budget = cfg.instances * cfg.attempts_per_instance;
    for (std::size_t attempt = 0; attempt < budget && tally.instances() < cfg.instances; ++attempt) {
        const auto inst = random_instance(rng, cfg, 3);
        const auto poly = random_poly(rng, pick(rng, 1, 2), kMaxPrevalenceIndex);
        const auto lin = random_linear(rng, uniform01(rng) < 0.3);
        ScalarFunction f;
        switch (attempt % 3) {
            case 0: f = functions::negative_identity(); break;
            case 1: f = functions::constant(uniform(rng, -2.0, 2.0)); break;
            default: f = random_concave_decreasing(rng, static_cast<double>(inst.symbols()) + 1.0); break;
        }
        tally.add({check_decoupling_upper_concave(inst, poly, lin, f)},
                  describe_instance(inst) + " poly=" + poly.describe() + " lin=" + lin.describe() + " f=" + f.name);
    }
    return tally.done();
}

CampaignLine campaign_domination(const CampaignConfig& cfg) {
    auto rng = group_rng(cfg, 3);
    Tally tally("domination upper bound (span of rising reciprocals)");
    const std::size_t budget = cfg.instances * cfg.attempts_per_instance;
    for (std::size_t attempt = 0; attempt < budget && tally.instances() < cfg.instances; ++attempt) {
        const auto inst = random_instance(rng, cfg, 3);
        const auto poly = random_poly(rng, pick(rng, 1, 2), kMaxPrevalenceIndex);
        const auto lin = random_linear(rng, uniform01(rng) < 0.3);
        ScalarFunction f;
        std::vector<double> fprime;
        switch (attempt % 4) {
            case 0:
                f = functions::reciprocal_squared();
                fprime = {0.0, 0.0, 1.0, 3.0};
                break;
            case 1:
                f = functions::reciprocal();
                fprime = {0.0, 1.0};
                break;
            case 2:
                f = functions::exp_decay();
                fprime = {0.0, 1.0};
                break;
            default: {
                fprime.resize(pick(rng, 1, 4));
                std::vector<double> below(fprime.size());
                for (std::size_t t = 0; t < fprime.size(); ++t) {
                    fprime[t] = uniform01(rng) < 0.7 ? uniform(rng, 0.0, 3.0) : 0.0;
                    below[t] = fprime[t] * uniform01(rng);
                }
                f = functions::span_v(std::move(below));
                break;
            }
        }
        tally.add({check_domination_upper(inst, poly, lin, f, fprime)},
                  describe_instance(inst) + " poly=" + poly.describe() + " lin=" + lin.describe() + " f=" + f.name);
    }
    return tally.done();
}

CampaignLine campaign_charpoly(const CampaignConfig& cfg) {
    auto rng = group_rng(cfg, 4);
    Tally tally("generalized Poisson binomial integral and rising reciprocals");
    for (std::size_t n = 0; n < 2 * cfg.instances; ++n) {
        std::vector<SupportList> supports(pick(rng, 1, 5));
        for (auto& summand : supports) {
            const auto points = pick(rng, 1, 4);
            std::vector<double> w(points);
            double total = 0.0;
            for (double& x : w) {
                x = -std::log(1.0 - uniform01(rng));
                total += x;
            }
            for (std::size_t p = 0; p < points; ++p) summand.emplace_back(uniform01(rng), w[p] / total);
        }
        std::vector<Certificate> certs;
        for (int step = 1; step <= 10; ++step) certs.push_back(check_charpoly_integral(supports, 0.1 * step));
        for (std::uint64_t r = 1; r <= 3; ++r) certs.push_back(check_rising_reciprocal(supports, r));
        tally.add(certs, "instance " + std::to_string(n));
    }
    return tally.done();
}

CampaignLine campaign_moment_bound(const CampaignConfig& cfg) {
    auto rng = group_rng(cfg, 5);
    Tally tally("prevalence moment bound (h <= 4)");
    for (std::size_t n = 0; n < cfg.instances; ++n) {
        const auto inst = random_instance(rng, cfg, 4);
        const auto j = pick(rng, 0, kMaxPrevalenceIndex);
        std::vector<Certificate> certs;
        for (std::uint64_t h = 1; h <= 4; ++h) certs.push_back(check_moment_bound(inst, j, h));
        tally.add(certs, describe_instance(inst) + " j=" + std::to_string(j));
    }
    return tally.done();
}

CampaignLine campaign_degree2(const CampaignConfig& cfg) {
    auto rng = group_rng(cfg, 6);
    Tally tally("degree-2 second moment");
    for (std::size_t n = 0; n < cfg.instances; ++n) {
        const auto inst = random_instance(rng, cfg, 3, 2);
        const auto max_index = pick(rng, 1, 3);
        const auto poly = random_poly(rng, 2, max_index);
        const auto k = inst.symbols() + pick(rng, 0, 2);
        tally.add({check_degree2_second_moment(inst, poly, k, max_index)},
                  describe_instance(inst) + " poly=" + poly.describe());
    }
    return tally.done();
}

CampaignLine campaign_conditional_moment(const CampaignConfig& cfg) {
    auto rng = group_rng(cfg, 7);
    Tally tally("conditional moment given phi_2 = 0");
    const std::uint64_t js[] = {0, 1, 3};
    for (std::size_t n = 0; n < cfg.instances; ++n) {
        const auto inst = random_instance(rng, cfg, 3);
        const auto j = js[pick(rng, 0, 2)];
        std::vector<Certificate> certs;
        for (std::uint64_t h = 1; h <= 4; ++h) certs.push_back(check_conditional_moment(inst, j, h));
        tally.add(certs, describe_instance(inst) + " j=" + std::to_string(j));
    }
    return tally.done();
}

CampaignLine campaign_negative_regression(const CampaignConfig& cfg) {
    auto rng = group_rng(cfg, 8);
    Tally tally("negative regression of prevalences");
    const ScalarFunction shapes[] = {
        {"x", [](double x) { return x; }},
        {"x^2", [](double x) { return x * x; }},
        {"x^4", [](double x) { return x * x * x * x; }},
    };
    for (std::size_t n = 0; n < cfg.instances; ++n) {
        const auto inst = random_instance(rng, cfg, 3);
        const auto i = pick(rng, 0, kMaxPrevalenceIndex);
        auto j = pick(rng, 0, kMaxPrevalenceIndex - 1);
        if (j >= i) ++j;
        std::vector<Certificate> certs;
        for (const auto& shape : shapes) certs.push_back(check_negative_regression(inst, i, j, shape));
        tally.add(certs, describe_instance(inst) + " i=" + std::to_string(i) + " j=" + std::to_string(j));
    }
    return tally.done();
}

CampaignLine campaign_cauchy_schwarz() {
    Tally tally("Cauchy-Schwarz over the distribution zoo");
    for (Family family : all_families()) {
        for (std::uint64_t k : {10ULL, 100ULL, 1000ULL, 10000ULL}) {
            for (bool strict : {true, false}) {
                const auto p = make_distribution(family, k, strict);
                for (double ratio : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
                    const double n = ratio * static_cast<double>(k);
                    std::ostringstream ctx;
                    ctx << to_string(family) << " k=" << k << (strict ? " strict" : " lenient") << " n=" << n;
                    tally.add({check_cauchy_schwarz(p, n)}, ctx.str());
                }
            }
        }
    }
    return tally.done();
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    CampaignReport report;
    report.lines.push_back(campaign_decoupling_lower(cfg));
    report.lines.push_back(campaign_decoupling_upper(cfg));
    report.lines.push_back(campaign_domination(cfg));
    report.lines.push_back(campaign_charpoly(cfg));
    report.lines.push_back(campaign_moment_bound(cfg));
    report.lines.push_back(campaign_degree2(cfg));
    report.lines.push_back(campaign_conditional_moment(cfg));
    report.lines.push_back(campaign_negative_regression(cfg));
    report.lines.push_back(campaign_cauchy_schwarz());
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace unseen::oracle
