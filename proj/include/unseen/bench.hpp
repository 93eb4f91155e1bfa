#pragma once

// Monte Carlo MSE harness, estimator-comparison sweeps and the
// empirical-counts estimation path.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unseen/bounds.hpp"
#include "unseen/distributions.hpp"
#include "unseen/estimators.hpp"
#include "unseen/poisson_model.hpp"

namespace unseen {

struct SweepConfig {
    std::vector<Family> families = all_families();
    std::uint64_t k = 1000;
    /// Empty means the default log-spaced grid for k (see default_n_grid).
    std::vector<double> n_grid;
    std::vector<EstimatorId> estimators{EstimatorId::plugin, EstimatorId::modified_chao, EstimatorId::chebyshev};
    std::uint64_t trials = 2000;
    std::uint64_t master_seed = 1;
    std::string output_path;
    bool strict = true;
    /// Worker threads; 0 picks the hardware concurrency. Never affects results.
    unsigned workers = 1;
};

/// Eight values log-spaced over [k/4, 8k].
std::vector<double> default_n_grid(std::uint64_t k);

/// Fills the default grid and checks k >= 2, trials >= 1, nonempty lists.
SweepConfig finalize(SweepConfig cfg);

/// Applies `key = value` lines onto `base`. Keys are the SweepConfig field
/// names; lists are comma separated; `#` starts a comment. Throws FormatError.
SweepConfig parse_sweep_config(std::string_view text, SweepConfig base = {});
SweepConfig load_sweep_config(const std::string& path, SweepConfig base = {});

struct MseRow {
    std::string family;
    std::uint64_t k = 0;
    double n = 0.0;
    EstimatorId estimator_id = EstimatorId::plugin;
    double mse = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t undefined_count = 0;
};

/// Mean of (S(P) - estimate)^2 over `trials` Poisson samples. Trial t draws
/// from trial_seed(master_seed, t). Undefined Chao trials are left out of the
/// mean and counted; throws UndefinedEstimate when every trial is undefined.
MseRow monte_carlo_mse(const DiscreteDistribution& p, double n, EstimatorId id, std::uint64_t trials,
                       std::uint64_t master_seed, unsigned workers = 1);

/// Same, for several estimators evaluated on shared samples. Rows follow the
/// order of `ids`.
std::vector<MseRow> monte_carlo_mse(const DiscreteDistribution& p, double n, std::span<const EstimatorId> ids,
                                    std::uint64_t trials, std::uint64_t master_seed, unsigned workers = 1);

/// families x n_grid x estimators, in that nesting order.
std::vector<MseRow> run_sweep(const SweepConfig& cfg);

inline constexpr std::string_view kMseCsvHeader = "family,k,n,estimator,mse,stderr,trials,undefined_count";
void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows);
/// Runs the sweep and writes the CSV to cfg.output_path (stdout when empty).
/// Throws Error when the file cannot be written.
std::vector<MseRow> run_sweep_to_csv(const SweepConfig& cfg);

/// Reads `symbol,count` rows. Zero counts are accepted and ignored.
Fingerprint ingest_counts(const std::string& path);
Fingerprint parse_counts(std::istream& in);

struct EstimateLine {
    EstimatorId estimator_id = EstimatorId::plugin;
    std::optional<double> value;  ///< empty for an undefined Chao estimate
};

/// Throws InvalidArgument when Chebyshev is requested without k and n.
std::vector<EstimateLine> estimate_from_counts(const Fingerprint& fp, std::span<const EstimatorId> ids,
                                               std::optional<std::uint64_t> k, std::optional<double> n);
std::vector<EstimateLine> estimate_from_counts(const std::string& path, std::span<const EstimatorId> ids,
                                               std::optional<std::uint64_t> k, std::optional<double> n);

std::string bound_report_csv_header();
std::string bound_report_csv_row(const BoundReport& r);
std::string bound_report_text(const BoundReport& r);

/// %.17g, so values round-trip.
std::string format_double(double x);

}  // namespace unseen
