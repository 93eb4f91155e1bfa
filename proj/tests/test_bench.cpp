#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "unseen/bench.hpp"
#include "unseen/bounds.hpp"
#include "unseen/error.hpp"

using namespace unseen;

namespace {

std::string sweep_csv(SweepConfig cfg) {
    std::ostringstream out;
    write_mse_csv(out, run_sweep(cfg));
    return out.str();
}

Fingerprint counts_of(const std::string& text) {
    std::istringstream in(text);
    return parse_counts(in);
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("Monte Carlo MSE is reproducible") {
    const auto p = make_distribution(Family::zipf, 100);
    const auto a = monte_carlo_mse(p, 150.0, EstimatorId::modified_chao, 500, 9);
    const auto b = monte_carlo_mse(p, 150.0, EstimatorId::modified_chao, 500, 9, 3);
    CHECK(a.mse == b.mse);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.trials == 500);
    CHECK(a.mse >= 0.0);
    CHECK(a.stderr_ >= 0.0);
    CHECK(monte_carlo_mse(p, 150.0, EstimatorId::modified_chao, 500, 10).mse != a.mse);
}

TEST_CASE("plug-in Monte Carlo MSE matches the exact value") {
    const auto u = make_distribution(Family::uniform, 50);
    const auto row = monte_carlo_mse(u, 100.0, EstimatorId::plugin, 100000, 4);
    CHECK(std::fabs(row.mse - exact_plugin_mse(u, 100.0)) <= 4.0 * row.stderr_);
}

TEST_CASE("modified Chao stays under its worst-case bound") {
    const auto u = make_distribution(Family::uniform, 50);
    const auto row = monte_carlo_mse(u, 200.0, EstimatorId::modified_chao, 100000, 4);
    CHECK(row.mse <= chao_mse_upper(200.0, 50)->total);
}

TEST_CASE("undefined Chao trials are counted, not imputed") {
    // Tiny n: phi_2 is often zero.
    const auto u = make_distribution(Family::uniform, 200);
    const auto row = monte_carlo_mse(u, 10.0, EstimatorId::chao, 400, 1);
    CHECK(row.undefined_count > 0);
    CHECK(row.undefined_count < row.trials);
    CHECK_THROWS_AS(monte_carlo_mse(u, 0.5, EstimatorId::chao, 5, 1), UndefinedEstimate);

    // Rare at n >= k.
    const auto p = make_distribution(Family::zipf, 1000);
    const auto big = monte_carlo_mse(p, 1000.0, EstimatorId::chao, 500, 1);
    CHECK(static_cast<double>(big.undefined_count) < 0.01 * static_cast<double>(big.trials));
}

TEST_CASE("sweep shape and CSV") {
    SweepConfig cfg;
    cfg.families = {Family::uniform};
    cfg.k = 100;
    cfg.n_grid = {150.0};
    cfg.estimators = {EstimatorId::plugin};
    cfg.trials = 50;
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].family == "uniform");
    CHECK(rows[0].n == 150.0);

    const auto grid = default_n_grid(1000);
    REQUIRE(grid.size() == 8);
    CHECK(grid.front() == doctest::Approx(250.0));
    CHECK(grid.back() == doctest::Approx(8000.0));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] / grid[i - 1] == doctest::Approx(std::pow(32.0, 1.0 / 7.0)));
    }
    const auto defaults = finalize(SweepConfig{});
    CHECK(defaults.families.size() * defaults.n_grid.size() * defaults.estimators.size() == 96);
    CHECK(defaults.trials == 2000);

    const auto csv = sweep_csv(cfg);
    CHECK(csv.rfind(std::string(kMseCsvHeader) + "\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("sweep CSV is independent of the worker count") {
    SweepConfig cfg;
    cfg.k = 200;
    cfg.n_grid = {100.0, 400.0};
    cfg.trials = 64;
    cfg.master_seed = 77;
    cfg.workers = 1;
    const auto serial = sweep_csv(cfg);
    cfg.workers = 4;
    CHECK(sweep_csv(cfg) == serial);
    cfg.workers = 7;
    CHECK(sweep_csv(cfg) == serial);
}

TEST_CASE("config parsing") {
    const auto cfg = parse_sweep_config(R"(# desk run
families = zipf, geometric
k = 300
n_grid = 100, 200.5
estimators = plugin,chebyshev
trials = 12
master_seed = 5
output_path = out.csv
strict = false
workers = 2
)");
    CHECK(cfg.families == std::vector<Family>{Family::zipf, Family::geometric});
    CHECK(cfg.k == 300);
    CHECK(cfg.n_grid == std::vector<double>{100.0, 200.5});
    CHECK(cfg.estimators == std::vector<EstimatorId>{EstimatorId::plugin, EstimatorId::chebyshev});
    CHECK(cfg.trials == 12);
    CHECK(cfg.master_seed == 5);
    CHECK(cfg.output_path == "out.csv");
    CHECK_FALSE(cfg.strict);
    CHECK(cfg.workers == 2);

    CHECK_THROWS_AS(parse_sweep_config("k 5"), FormatError);
    CHECK_THROWS_AS(parse_sweep_config("colour = red"), FormatError);
    CHECK_THROWS_AS(parse_sweep_config("k = -3"), FormatError);
    CHECK_THROWS_AS(parse_sweep_config("families = pareto"), FormatError);
    CHECK_THROWS_AS(finalize(parse_sweep_config("k = 1")), InvalidArgument);
    CHECK_THROWS_AS(finalize(parse_sweep_config("trials = 0")), InvalidArgument);
}

TEST_CASE("unwritable output path is an error") {
    SweepConfig cfg;
    cfg.families = {Family::uniform};
    cfg.k = 10;
    cfg.n_grid = {10.0};
    cfg.trials = 2;
    cfg.output_path = "/nonexistent-dir/out.csv";
    CHECK_THROWS_AS(run_sweep_to_csv(cfg), Error);
}

TEST_CASE("counts ingestion") {
    const auto fp = counts_of("symbol,count\na,1\nb,1\nc,2\n");
    CHECK(fp.entries() == std::map<std::uint64_t, std::uint64_t>{{1, 2}, {2, 1}});
    CHECK_FALSE(fp.phi0().has_value());
    CHECK(counts_of("symbol,count\n").empty());
    CHECK(counts_of("symbol,count\nx,0\ny,3\n").entries() == std::map<std::uint64_t, std::uint64_t>{{3, 1}});
    CHECK_THROWS_AS(counts_of("symbol,count\na,1\na,2\n"), FormatError);
    CHECK_THROWS_AS(counts_of("symbol,count\na,-1\n"), FormatError);
    CHECK_THROWS_AS(counts_of("symbol,count\na,1.5\n"), FormatError);
    CHECK_THROWS_AS(counts_of("symbol,count\na\n"), FormatError);
    CHECK_THROWS_AS(counts_of("name,n\na,1\n"), FormatError);
    CHECK_THROWS_AS(counts_of(""), FormatError);

    const auto path = temp_file("unseen_counts_test.csv");
    std::ofstream(path) << "symbol,count\nsparrow,4\nfinch,1\n";
    CHECK(ingest_counts(path.string()).distinct() == 2);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(ingest_counts("/nonexistent/counts.csv"), Error);
}

TEST_CASE("estimates from counts") {
    const EstimatorId three[] = {EstimatorId::plugin, EstimatorId::chao, EstimatorId::modified_chao};
    const auto lines = estimate_from_counts(counts_of("symbol,count\na,1\nb,1\nc,2\n"), three, std::nullopt, std::nullopt);
    REQUIRE(lines.size() == 3);
    CHECK(*lines[0].value == 3.0);
    CHECK(*lines[1].value == 5.0);
    CHECK(*lines[2].value == 4.0);

    const auto singles = estimate_from_counts(counts_of("symbol,count\na,1\nb,1\nc,1\n"), three, {}, {});
    CHECK_FALSE(singles[1].value.has_value());
    CHECK(*singles[2].value == 7.5);

    const auto empty = estimate_from_counts(Fingerprint{}, three, {}, {});
    CHECK(*empty[0].value == 0.0);
    CHECK_FALSE(empty[1].value.has_value());
    CHECK(*empty[2].value == 0.0);

    const EstimatorId cheb[] = {EstimatorId::chebyshev};
    CHECK_THROWS_AS(estimate_from_counts(Fingerprint{}, cheb, 100, std::nullopt), InvalidArgument);
    CHECK(*estimate_from_counts(Fingerprint{}, cheb, 100, 50.0)[0].value == 0.0);
}

TEST_CASE("doubles are written round-trip") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(250.0) == "250");
}
