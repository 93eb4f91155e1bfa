// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance            run everything
//   acceptance 3 7        run the listed criteria only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "unseen/bench.hpp"
#include "unseen/bounds.hpp"
#include "unseen/campaign.hpp"
#include "unseen/distributions.hpp"
#include "unseen/estimators.hpp"
#include "unseen/oracle.hpp"
#include "unseen/poisson_model.hpp"

using namespace unseen;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<Outcome()> run;
};

// Collects the first few failure notes of a criterion.
class Notes {
public:
    void fail(const std::string& what) {
        pass_ = false;
        if (shown_++ < 3) out_ << (out_.tellp() > 0 ? "; " : "") << what;
    }
    void info(const std::string& what) { out_ << (out_.tellp() > 0 ? "; " : "") << what; }
    Outcome done() const {
        std::string text = out_.str();
        if (shown_ > 3) text += "; " + std::to_string(shown_ - 3) + " more failures";
        return {pass_, text};
    }

private:
    bool pass_ = true;
    int shown_ = 0;
    std::ostringstream out_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::vector<DiscreteDistribution> zoo(std::uint64_t k) {
    std::vector<DiscreteDistribution> out;
    for (Family f : all_families()) out.push_back(make_distribution(f, k));
    return out;
}

Outcome exact_plugin() {
    Notes notes;
    for (std::uint64_t k : {10ULL, 100ULL, 1000ULL}) {
        const auto u = make_distribution(Family::uniform, k);
        const double kd = static_cast<double>(k);
        for (double n : {kd / 2, kd, 2 * kd, 4 * kd}) {
            const double formula = kd * kd * std::exp(-2 * n / kd) + kd * std::exp(-n / kd) - kd * std::exp(-2 * n / kd);
            const double exact = exact_plugin_mse(u, n);
            if (std::fabs(exact - formula) > 1e-10 * std::fabs(formula)) {
                notes.fail(fmt("k=%g n=%g exact=%.17g", kd, n, exact));
            }
            if (k == 100) {
                const auto row = monte_carlo_mse(u, n, EstimatorId::plugin, 100000, 20190707);
                if (std::fabs(row.mse - exact) > 4 * row.stderr_) {
                    notes.fail(fmt("MC at n=%g: %.4f vs %.4f", n, row.mse, exact));
                }
            }
        }
    }
    return notes.done();
}

Outcome alpha_regression() {
    Notes notes;
    const double alpha = solve_alpha();
    const double residual = std::fabs(alpha * alpha - 4 * std::exp(-(alpha + 2)));
    if (std::fabs(alpha - 0.5569) > 5e-5) notes.fail(fmt("alpha=%.10f", alpha));
    if (!(residual < 1e-11)) notes.fail(fmt("residual=%.3e", residual));
    if (std::fabs(alpha - static_cast<double>(oracles::alpha_root())) > 1e-12) notes.fail("second root finder disagrees");
    notes.info(fmt("alpha=%.12f residual=%.1e", alpha, residual));
    return notes.done();
}

Outcome sigma_chao_value() {
    Notes notes;
    const double beta[] = {0.0, 0.0, 1.0};
    const double s = sigma_of(beta);
    if (std::fabs(s - 0.2821) > 1e-4) notes.fail(fmt("sigma=%.6f", s));
    notes.info(fmt("sigma=%.10f, 1/sqrt(4 pi)=%.10f", s, 1 / std::sqrt(4 * std::numbers::pi)));
    return notes.done();
}

Outcome bound_bracketing() {
    Notes notes;
    const std::uint64_t k = 1000;
    const EstimatorId ids[] = {EstimatorId::modified_chao, EstimatorId::plugin};
    double worst_chao = 0.0;
    double worst_plugin = 0.0;
    for (Family f : all_families()) {
        const auto p = make_distribution(f, k);
        for (double r : {1.0, 2.0, 4.0, 8.0}) {
            const double n = r * static_cast<double>(k);
            const auto rows = monte_carlo_mse(p, n, ids, 2000, 20190707);
            const double chao_bound = chao_mse_upper(n, k)->total;
            const double plugin_bound = plugin_mse_bounds(n, k).upper;
            if (rows[0].mse > chao_bound + 4 * rows[0].stderr_) {
                notes.fail(std::string(to_string(f)) + fmt(" n=%g modified_chao %.4g > %.4g", n, rows[0].mse, chao_bound));
            }
            if (rows[1].mse > plugin_bound + 4 * rows[1].stderr_) {
                notes.fail(std::string(to_string(f)) + fmt(" n=%g plugin %.4g > %.4g", n, rows[1].mse, plugin_bound));
            }
            worst_chao = std::max(worst_chao, rows[0].mse / chao_bound);
            worst_plugin = std::max(worst_plugin, rows[1].mse / plugin_bound);
        }
    }
    notes.info(fmt("max mse/bound: modified_chao %.2e, plugin %.3f", worst_chao, worst_plugin));
    return notes.done();
}

Outcome bias_bracketing() {
    Notes notes;
    std::size_t cases = 0;
    for (std::uint64_t k : {10ULL, 100ULL, 1000ULL, 10000ULL}) {
        for (const auto& p : zoo(k)) {
            for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
                const double n = r * static_cast<double>(k);
                const auto b = bias_bounds(n, k);
                const double bias = exact_bias_expression(p, n);
                ++cases;
                if (bias < b.lower - 1e-9 || bias > b.upper + 1e-9) {
                    notes.fail(fmt("k=%g n=%g bias=%.6g", static_cast<double>(k), n, bias));
                }
            }
        }
    }
    notes.info(std::to_string(cases) + " (P, n) cases");
    return notes.done();
}

Outcome ratio_claim() {
    Notes notes;
    const std::uint64_t k = 1000;
    const double n = 4000.0;
    const auto chao = chao_mse_upper(n, k);
    const double plugin = plugin_mse_bounds(n, k).upper;
    const double target = std::pow(static_cast<double>(k) / n, 4) * 10;
    const double ratio = chao->total / plugin;
    if (!(ratio < target)) notes.fail(fmt("bound/plugin=%.4g >= %.4g", ratio, target));
    notes.info(fmt("leading-term ratio %.3g; correction term %.4g", chao->leading / plugin, chao->epsilon));
    return notes.done();
}

Outcome fig1_shape() {
    Notes notes;
    const std::uint64_t k = 1000;
    const double kd = static_cast<double>(k);
    std::vector<double> ns{2 * kd};
    for (double n : default_n_grid(k)) {
        if (n > 2 * kd) ns.push_back(n);
    }
    const EstimatorId ids[] = {EstimatorId::plugin, EstimatorId::modified_chao, EstimatorId::chebyshev};
    for (Family f : all_families()) {
        const auto p = make_distribution(f, k);
        for (double n : ns) {
            const auto rows = monte_carlo_mse(p, n, ids, 2000, 20190707);
            const std::string where = std::string(to_string(f)) + fmt(" n=%g", n);
            if (!(rows[1].mse < rows[0].mse)) {
                notes.fail(where + fmt(": modified_chao %.4g >= plugin %.4g", rows[1].mse, rows[0].mse));
            }
            if (n == 2 * kd && f != Family::uniform) {
                if (!(rows[2].mse < rows[1].mse)) {
                    notes.fail(where + fmt(": chebyshev %.4g >= modified_chao %.4g", rows[2].mse, rows[1].mse));
                } else {
                    notes.info(where + fmt(": chebyshev %.3g < modified_chao %.3g", rows[2].mse, rows[1].mse));
                }
            }
        }
    }
    return notes.done();
}

Outcome campaign() {
    Notes notes;
    const auto report = oracle::run_campaign();
    for (const auto& line : report.lines) {
        if (!line.passed()) notes.fail(line.name + ": " + line.first_failure);
    }
    if (report.seconds > 300) notes.fail(fmt("runtime %.1fs", report.seconds));
    notes.info(std::to_string(report.falsifications()) + " falsifications over " + std::to_string(report.lines.size()) +
               " groups");
    return notes.done();
}

Outcome moment_coefficients_check() {
    Notes notes;
    if (oracle::moment_coefficients(4) != std::vector<std::uint64_t>{1, 7, 6, 1}) notes.fail("h=4 coefficients");
    for (std::uint64_t h = 1; h <= 6; ++h) {
        if (oracle::moment_coefficients(h) != oracles::partition_counts(h)) notes.fail("h=" + std::to_string(h));
    }
    return notes.done();
}

Outcome determinism() {
    Notes notes;
    SweepConfig cfg;
    cfg.master_seed = 20190707;
    cfg.workers = 1;
    std::ostringstream serial;
    write_mse_csv(serial, run_sweep(cfg));
    cfg.workers = 4;
    std::ostringstream parallel;
    write_mse_csv(parallel, run_sweep(cfg));
    const std::string csv = serial.str();
    if (csv != parallel.str()) notes.fail("CSV differs between 1 and 4 workers");
    notes.info(std::to_string(std::count(csv.begin(), csv.end(), '\n') - 1) + " rows");
    return notes.done();
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "exact plug-in MSE and Monte Carlo agreement", 60, exact_plugin},
        {2, "alpha root", 1e-3, alpha_regression},
        {3, "sigma of phi_2", 1, sigma_chao_value},
        {4, "Monte Carlo MSE under the worst-case bounds", 300, bound_bracketing},
        {5, "exact bias within its bracket", 60, bias_bracketing},
        {6, "worst-case bound ratio at n = 4k", 1, ratio_claim},
        {7, "estimator ordering at k = 1000", 600, fig1_shape},
        {8, "inequality certification campaign", 300, campaign},
        {9, "moment coefficients", 1, moment_coefficients_check},
        {10, "sweep determinism across worker counts", 600, determinism},
    };
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out = c.run();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            out.pass = false;
            out.detail += fmt("; over time budget (%.3gs > %.3gs)", secs, c.budget_seconds);
        }
        std::printf("%s  %2d  %-46s %8.2fs  %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
