// Command-line front end: sweeps, estimates from counts, bound reports,
// the certification campaign and distribution dumps.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unseen/bench.hpp"
#include "unseen/bounds.hpp"
#include "unseen/campaign.hpp"
#include "unseen/distributions.hpp"
#include "unseen/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFalsified = 2;

template <class T, class Parse>
std::vector<T> parse_list(const std::vector<std::string>& names, Parse parse) {
    std::vector<T> out;
    for (const auto& name : names) out.push_back(parse(name));
    return out;
}

struct SweepFlags {
    std::string config;
    std::vector<std::string> families;
    std::optional<std::uint64_t> k;
    std::vector<double> n_grid;
    std::vector<std::string> estimators;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::string> output_path;
    std::optional<bool> strict;
    std::optional<unsigned> workers;
    bool paper_scale = false;
};

int run_sweep_command(const SweepFlags& f) {
    unseen::SweepConfig cfg;
    if (f.paper_scale) cfg.k = 10000;
    if (!f.config.empty()) cfg = unseen::load_sweep_config(f.config, cfg);
    if (!f.families.empty()) cfg.families = parse_list<unseen::Family>(f.families, unseen::parse_family);
    if (f.k) cfg.k = *f.k;
    if (!f.n_grid.empty()) cfg.n_grid = f.n_grid;
    if (!f.estimators.empty()) cfg.estimators = parse_list<unseen::EstimatorId>(f.estimators, unseen::parse_estimator);
    if (f.trials) cfg.trials = *f.trials;
    if (f.master_seed) cfg.master_seed = *f.master_seed;
    if (f.output_path) cfg.output_path = *f.output_path;
    if (f.strict) cfg.strict = *f.strict;
    if (f.workers) cfg.workers = *f.workers;
    const auto rows = unseen::run_sweep_to_csv(cfg);
    if (!cfg.output_path.empty()) std::cerr << "wrote " << rows.size() << " rows to " << cfg.output_path << '\n';
    return kExitOk;
}

struct EstimateFlags {
    std::string counts;
    std::optional<std::uint64_t> k;
    std::optional<double> n;
    std::vector<std::string> estimators{"plugin", "chao", "modified_chao"};
};

int run_estimate_command(const EstimateFlags& f) {
    const auto ids = parse_list<unseen::EstimatorId>(f.estimators, unseen::parse_estimator);
    const auto lines = unseen::estimate_from_counts(f.counts, ids, f.k, f.n);
    std::cout << "estimator,value\n";
    for (const auto& line : lines) {
        std::cout << unseen::to_string(line.estimator_id) << ','
                  << (line.value ? unseen::format_double(*line.value) : std::string("undefined")) << '\n';
    }
    return kExitOk;
}

struct BoundsFlags {
    double n = 0.0;
    std::uint64_t k = 0;
    std::string family;
    bool lenient = false;
    std::string format = "text";
};

int run_bounds_command(const BoundsFlags& f) {
    const auto report = f.family.empty()
                            ? unseen::bound_report(f.n, f.k)
                            : unseen::bound_report(unseen::make_distribution(unseen::parse_family(f.family), f.k,
                                                                             !f.lenient),
                                                   f.n);
    if (f.format == "csv") {
        std::cout << unseen::bound_report_csv_header() << '\n' << unseen::bound_report_csv_row(report) << '\n';
    } else {
        std::cout << unseen::bound_report_text(report);
    }
    return kExitOk;
}

struct VerifyFlags {
    std::uint64_t seed = unseen::oracle::CampaignConfig{}.seed;
    std::size_t campaign_size = unseen::oracle::CampaignConfig{}.instances;
};

int run_verify_command(const VerifyFlags& f) {
    unseen::oracle::CampaignConfig cfg;
    cfg.seed = f.seed;
    cfg.instances = f.campaign_size;
    const auto report = unseen::oracle::run_campaign(cfg);
    for (const auto& line : report.lines) {
        std::printf("%-4s %-58s instances=%-4zu checks=%-5zu skipped=%-5zu falsified=%zu within_slack=%zu min_margin=%.3e max_rel_slack=%.3e\n",
                    line.passed() ? "PASS" : "FAIL", line.name.c_str(), line.instances, line.checks, line.skipped,
                    line.falsified, line.within_slack, line.min_margin,
                    line.max_relative_slack);
        if (!line.first_failure.empty()) std::printf("     first failure: %s\n", line.first_failure.c_str());
    }
    std::printf("falsifications=%zu runtime=%.2fs\n", report.falsifications(), report.seconds);
    return report.passed() ? kExitOk : kExitFalsified;
}

struct DumpFlags {
    std::string family;
    std::uint64_t k = 0;
    bool lenient = false;
};

int run_dump_command(const DumpFlags& f) {
    const auto p = unseen::make_distribution(unseen::parse_family(f.family), f.k, !f.lenient);
    std::cout << "symbol_index,probability\n";
    for (std::size_t i = 0; i < p.support_size(); ++i) std::cout << i << ',' << unseen::format_double(p[i]) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Support-size estimation under Poisson sampling"};
    app.require_subcommand(1);

    SweepFlags sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo MSE sweep, written as CSV");
    sweep_cmd->add_option("--config", sweep.config, "key = value config file")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--families", sweep.families, "uniform, zipf, geometric, two_mixture")->delimiter(',');
    sweep_cmd->add_option("--k", sweep.k);
    sweep_cmd->add_option("--n-grid,--n_grid", sweep.n_grid)->delimiter(',');
    sweep_cmd->add_option("--estimators", sweep.estimators)->delimiter(',');
    sweep_cmd->add_option("--trials", sweep.trials);
    sweep_cmd->add_option("--master-seed,--master_seed", sweep.master_seed);
    sweep_cmd->add_option("--output-path,--output_path,-o", sweep.output_path, "CSV destination (default stdout)");
    sweep_cmd->add_option("--strict", sweep.strict, "true or false");
    sweep_cmd->add_option("--workers", sweep.workers, "threads, 0 = all cores");
    sweep_cmd->add_flag("--paper-scale", sweep.paper_scale, "k = 10000 instead of 1000");

    EstimateFlags estimate;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate support size from a symbol,count CSV");
    estimate_cmd->add_option("--counts", estimate.counts)->required()->check(CLI::ExistingFile);
    estimate_cmd->add_option("--k", estimate.k, "class parameter, needed by chebyshev");
    estimate_cmd->add_option("--n", estimate.n, "sample size, needed by chebyshev");
    estimate_cmd->add_option("--estimators", estimate.estimators)->delimiter(',')->capture_default_str();

    BoundsFlags bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "Closed-form MSE and bias bounds");
    bounds_cmd->add_option("--n", bounds.n)->required();
    bounds_cmd->add_option("--k", bounds.k)->required();
    bounds_cmd->add_option("--family", bounds.family, "add distribution-specific bounds");
    bounds_cmd->add_flag("--lenient", bounds.lenient);
    bounds_cmd->add_option("--format", bounds.format)->check(CLI::IsMember({"text", "csv"}))->capture_default_str();

    VerifyFlags verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run the inequality certification campaign");
    verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
    verify_cmd->add_option("--campaign-size", verify.campaign_size, "instances per group")->capture_default_str();

    DumpFlags dump;
    auto* dist_cmd = app.add_subcommand("dist", "Distribution utilities");
    dist_cmd->require_subcommand(1);
    auto* dump_cmd = dist_cmd->add_subcommand("dump", "Print a probability vector as CSV");
    dump_cmd->add_option("--family", dump.family)->required();
    dump_cmd->add_option("--k", dump.k)->required();
    dump_cmd->add_flag("--lenient", dump.lenient);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sweep_cmd) return run_sweep_command(sweep);
        if (*estimate_cmd) return run_estimate_command(estimate);
        if (*bounds_cmd) return run_bounds_command(bounds);
        if (*verify_cmd) return run_verify_command(verify);
        if (*dump_cmd) return run_dump_command(dump);
    } catch (const unseen::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
