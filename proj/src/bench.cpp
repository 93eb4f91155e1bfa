#include "unseen/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        throw FormatError(std::string(what) + ": expected a non-negative integer, got '" + std::string(s) + "'");
    }
    return v;
}

double parse_double(std::string_view s, std::string_view what) {
    const std::string copy(s);
    char* end = nullptr;
    const double v = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v)) {
        throw FormatError(std::string(what) + ": expected a number, got '" + copy + "'");
    }
    return v;
}

bool parse_bool(std::string_view s, std::string_view what) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw FormatError(std::string(what) + ": expected true or false, got '" + std::string(s) + "'");
}

unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(first, last) over [0, count) split into contiguous blocks.
template <class Body>
void parallel_blocks(std::uint64_t count, unsigned workers, Body&& body) {
    workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(count, 1)));
    if (workers <= 1) {
        body(std::uint64_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::uint64_t block = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t first = std::min<std::uint64_t>(count, w * block);
        const std::uint64_t last = std::min<std::uint64_t>(count, first + block);
        pool.emplace_back([&, w, first, last] {
            try {
                body(first, last);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

constexpr double kUndefined = -1.0;

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> default_n_grid(std::uint64_t k) {
    const double lo = static_cast<double>(k) / 4.0;
    std::vector<double> grid;
    for (int i = 0; i < 8; ++i) grid.push_back(lo * std::pow(32.0, i / 7.0));
    grid.back() = 8.0 * static_cast<double>(k);
    return grid;
}

SweepConfig finalize(SweepConfig cfg) {
    if (cfg.k < 2) throw InvalidArgument("sweep k must be at least 2");
    if (cfg.trials < 1) throw InvalidArgument("sweep needs at least one trial");
    if (cfg.families.empty()) throw InvalidArgument("sweep needs at least one family");
    if (cfg.estimators.empty()) throw InvalidArgument("sweep needs at least one estimator");
    if (cfg.n_grid.empty()) cfg.n_grid = default_n_grid(cfg.k);
    for (double n : cfg.n_grid) {
        if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("n_grid values must be positive");
    }
    return cfg;
}

SweepConfig parse_sweep_config(std::string_view text, SweepConfig base) {
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const std::string where = "config line " + std::to_string(line_no) + " (" + std::string(key) + ")";
        try {
            if (key == "families") {
                base.families.clear();
                for (auto f : split(value, ',')) base.families.push_back(parse_family(f));
            } else if (key == "k") {
                base.k = parse_u64(value, where);
            } else if (key == "n_grid") {
                base.n_grid.clear();
                for (auto n : split(value, ',')) base.n_grid.push_back(parse_double(n, where));
            } else if (key == "estimators") {
                base.estimators.clear();
                for (auto e : split(value, ',')) base.estimators.push_back(parse_estimator(e));
            } else if (key == "trials") {
                base.trials = parse_u64(value, where);
            } else if (key == "master_seed") {
                base.master_seed = parse_u64(value, where);
            } else if (key == "output_path") {
                base.output_path = std::string(value);
            } else if (key == "strict") {
                base.strict = parse_bool(value, where);
            } else if (key == "workers") {
                base.workers = static_cast<unsigned>(parse_u64(value, where));
            } else {
                throw FormatError(where + ": unknown key");
            }
        } catch (const InvalidArgument& e) {
            throw FormatError(where + ": " + e.what());
        }
    }
    return base;
}

SweepConfig load_sweep_config(const std::string& path, SweepConfig base) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_sweep_config(text.str(), std::move(base));
}

std::vector<MseRow> monte_carlo_mse(const DiscreteDistribution& p, double n, std::span<const EstimatorId> ids,
                                    std::uint64_t trials, std::uint64_t master_seed, unsigned workers) {
    if (trials < 1) throw InvalidArgument("monte_carlo_mse needs at least one trial");
    if (!(n > 0.0)) throw InvalidArgument("n must be positive");
    const double truth = static_cast<double>(p.support_size());
    const std::size_t width = ids.size();
    // Row-major trials x estimators; kUndefined marks an undefined estimate.
    std::vector<double> sq(trials * width, 0.0);
    if (std::find(ids.begin(), ids.end(), EstimatorId::chebyshev) != ids.end()) {
        chebyshev_weights(p.k(), n);  // warm the cache before the workers start
    }

    parallel_blocks(trials, workers, [&](std::uint64_t first, std::uint64_t last) {
        std::vector<std::uint64_t> counts;
        for (std::uint64_t t = first; t < last; ++t) {
            std::mt19937_64 rng(trial_seed(master_seed, t));
            sample_into(p, n, rng, counts);
            const Fingerprint fp = fingerprint(counts, true);
            for (std::size_t e = 0; e < width; ++e) {
                const auto est = estimate_support(fp, ids[e], p.k(), n);
                sq[t * width + e] = est ? (truth - *est) * (truth - *est) : kUndefined;
            }
        }
    });

    std::vector<MseRow> rows;
    for (std::size_t e = 0; e < width; ++e) {
        CompensatedSum sum;
        CompensatedSum sum_sq;
        std::uint64_t defined = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const double v = sq[t * width + e];
            if (v == kUndefined) continue;
            sum += v;
            sum_sq += v * v;
            ++defined;
        }
        if (defined == 0) {
            throw UndefinedEstimate(std::string(to_string(ids[e])) + " was undefined on every trial");
        }
        const double d = static_cast<double>(defined);
        const double mean = sum.value() / d;
        const double var = defined > 1 ? std::max(0.0, (sum_sq.value() - d * mean * mean) / (d - 1.0)) : 0.0;
        MseRow row;
        row.family = "custom";
        row.k = p.k();
        row.n = n;
        row.estimator_id = ids[e];
        row.mse = mean;
        row.stderr_ = std::sqrt(var / d);
        row.trials = trials;
        row.undefined_count = trials - defined;
        rows.push_back(std::move(row));
    }
    return rows;
}

MseRow monte_carlo_mse(const DiscreteDistribution& p, double n, EstimatorId id, std::uint64_t trials,
                       std::uint64_t master_seed, unsigned workers) {
    const EstimatorId ids[] = {id};
    return monte_carlo_mse(p, n, ids, trials, master_seed, workers).front();
}

std::vector<MseRow> run_sweep(const SweepConfig& config) {
    const SweepConfig cfg = finalize(config);
    std::vector<MseRow> rows;
    for (Family family : cfg.families) {
        const auto p = make_distribution(family, cfg.k, cfg.strict);
        for (double n : cfg.n_grid) {
            auto cell = monte_carlo_mse(p, n, cfg.estimators, cfg.trials, cfg.master_seed, cfg.workers);
            for (auto& row : cell) {
                row.family = std::string(to_string(family));
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows) {
    out << kMseCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.family << ',' << r.k << ',' << format_double(r.n) << ',' << to_string(r.estimator_id) << ','
            << format_double(r.mse) << ',' << format_double(r.stderr_) << ',' << r.trials << ','
            << r.undefined_count << '\n';
    }
}

std::vector<MseRow> run_sweep_to_csv(const SweepConfig& cfg) {
    std::ofstream file;
    if (!cfg.output_path.empty()) {
        file.open(cfg.output_path);
        if (!file) throw Error("cannot write '" + cfg.output_path + "'");
    }
    auto rows = run_sweep(cfg);
    std::ostream& out = cfg.output_path.empty() ? std::cout : file;
    write_mse_csv(out, rows);
    out.flush();
    if (!out) throw Error("failed writing sweep CSV");
    return rows;
}

Fingerprint parse_counts(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::set<std::string> symbols;
    std::map<std::uint64_t, std::uint64_t> phi;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        const auto fields = split(row, ',');
        const std::string where = "counts line " + std::to_string(line_no);
        if (!header_seen) {
            if (fields.size() != 2 || fields[0] != "symbol" || fields[1] != "count") {
                throw FormatError(where + ": expected header 'symbol,count'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 2 || fields[0].empty()) throw FormatError(where + ": expected 'symbol,count'");
        if (!fields[1].empty() && fields[1].front() == '-') throw FormatError(where + ": negative count");
        const auto count = parse_u64(fields[1], where);
        if (!symbols.insert(std::string(fields[0])).second) {
            throw FormatError(where + ": duplicate symbol '" + std::string(fields[0]) + "'");
        }
        if (count > 0) ++phi[count];
    }
    if (!header_seen) throw FormatError("counts file is missing the 'symbol,count' header");
    return Fingerprint(std::move(phi));
}

Fingerprint ingest_counts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open counts file '" + path + "'");
    return parse_counts(in);
}

std::vector<EstimateLine> estimate_from_counts(const Fingerprint& fp, std::span<const EstimatorId> ids,
                                               std::optional<std::uint64_t> k, std::optional<double> n) {
    std::vector<EstimateLine> out;
    for (EstimatorId id : ids) {
        if (id == EstimatorId::chebyshev && (!k || !n)) {
            throw InvalidArgument("the chebyshev estimator needs both k and n");
        }
        out.push_back({id, estimate_support(fp, id, k.value_or(0), n.value_or(0.0))});
    }
    return out;
}

std::vector<EstimateLine> estimate_from_counts(const std::string& path, std::span<const EstimatorId> ids,
                                               std::optional<std::uint64_t> k, std::optional<double> n) {
    return estimate_from_counts(ingest_counts(path), ids, k, n);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::pair<std::string, std::string>> report_fields(const BoundReport& r) {
    return {
        {"n", format_double(r.n)},
        {"k", std::to_string(r.k)},
        {"plugin_lower", format_double(r.plugin_lower)},
        {"plugin_upper", format_double(r.plugin_upper)},
        {"chao_theorem1", opt(r.chao_theorem1)},
        {"epsilon_term", opt(r.epsilon_term)},
        {"bias_lower", format_double(r.bias_lower)},
        {"bias_upper", format_double(r.bias_upper)},
        {"bias_sq_upper", format_double(r.bias_sq_upper)},
        {"low_collision", opt(r.low_collision)},
        {"high_collision", opt(r.high_collision)},
    };
}

}  // namespace

std::string bound_report_csv_header() {
    std::string out;
    for (const auto& [name, value] : report_fields(BoundReport{})) out += (out.empty() ? "" : ",") + name;
    return out;
}

std::string bound_report_csv_row(const BoundReport& r) {
    std::string out;
    bool first = true;
    for (const auto& [name, value] : report_fields(r)) {
        if (!first) out += ',';
        out += value;
        first = false;
    }
    return out;
}

std::string bound_report_text(const BoundReport& r) {
    std::ostringstream out;
    for (const auto& [name, value] : report_fields(r)) {
        out << name;
        for (std::size_t pad = name.size(); pad < 16; ++pad) out << ' ';
        out << (value.empty() ? "inapplicable" : value) << '\n';
    }
    return out.str();
}

}  // namespace unseen
