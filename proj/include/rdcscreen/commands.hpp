#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rdcscreen/csv.hpp"
#include "rdcscreen/error.hpp"
#include "rdcscreen/evaluation.hpp"
#include "rdcscreen/scenarios.hpp"
#include "rdcscreen/screening.hpp"
#include "rdcscreen/tau_solver.hpp"

namespace rdcscreen {

/// Everything a run can be configured with. Unused fields are ignored by
/// commands that do not need them.
struct RunConfig {
    // input
    std::filesystem::path input;
    std::vector<std::string> response;
    std::optional<std::filesystem::path> response_file;
    bool tsv = false;

    // screening
    std::vector<Method> methods = {Method::RDC};
    double c_const = 1.0;
    std::optional<std::size_t> d; ///< nullopt means floor(n / ln n)
    std::array<unsigned, 3> multipliers = {1, 2, 3};
    std::size_t workers = 1;
    std::filesystem::path output_dir = ".";

    // simulate
    Scenario scenario = Scenario::Ia;
    std::size_t n = 100;
    std::size_t p = 2000;
    double rho = 0.5;
    std::uint64_t seed = 0;
    std::size_t reps = 100;
    bool adjacent_ii = false;
    bool dump_data = false;

    // tune
    std::string column;
    std::optional<double> t;          ///< overrides C ln p
    std::optional<std::size_t> p_for_t; ///< p used in t = C ln p

    [[nodiscard]] char delimiter() const noexcept { return tsv ? '\t' : ','; }

    void validate() const
    {
        if (!(c_const > 0.0)) {
            throw ParameterError("c-const must be positive");
        }
        if (workers < 1) {
            throw ParameterError("workers must be at least 1");
        }
        if (t && !(*t > 0.0)) {
            throw ParameterError("t must be positive");
        }
        for (unsigned m : multipliers) {
            if (m == 0) {
                throw ParameterError("model size multipliers must be positive");
            }
        }
    }
};

/// Flat `key = value` lines; blank lines and `#` comments are skipped.
[[nodiscard]] inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot open config file '" + path.string() + "'");
    }
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const auto body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ParameterError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(body.substr(0, eq));
        if (key.empty()) {
            throw ParameterError(path.string() + ":" + std::to_string(line_no) + ": empty key");
        }
        entries.emplace_back(std::string(key), std::string(trim(body.substr(eq + 1))));
    }
    return entries;
}

[[nodiscard]] inline std::string join_methods(const std::vector<Method>& methods)
{
    std::string s;
    for (Method m : methods) {
        s += (s.empty() ? "" : ",") + std::string(to_string(m));
    }
    return s;
}

/// Ordered key = value writer for run manifests.
class Manifest {
public:
    void set(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void set(const std::string& key, double value) { set(key, format_double(value)); }
    void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }

    void write(const std::filesystem::path& path) const
    {
        std::ofstream out(path);
        if (!out) {
            throw ParameterError("cannot write '" + path.string() + "'");
        }
        for (const auto& [k, v] : entries_) {
            out << k << " = " << v << '\n';
        }
    }

    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept
    {
        return entries_;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw ParameterError("cannot write '" + path.string() + "'");
    }
    return out;
}

inline std::string multipliers_string(const std::array<unsigned, 3>& m)
{
    return std::to_string(m[0]) + "," + std::to_string(m[1]) + "," + std::to_string(m[2]);
}

// Run-time facts that must not enter the manifest, which has to be
// byte-identical across reruns and worker counts.
inline void write_timing(const std::filesystem::path& dir, double seconds, std::size_t workers)
{
    auto out = open_output(dir / "timing.txt");
    out << "wall_seconds = " << format_double(seconds) << '\n' << "workers = " << workers << '\n';
}

} // namespace detail

inline void write_ranking_csv(std::ostream& out, const ScreeningResult& r, const std::vector<std::string>& names)
{
    out << "feature_name,feature_index,utility,rank,tau,retained\n";
    for (std::size_t pos = 0; pos < r.ranking.size(); ++pos) {
        const std::size_t j = r.ranking[pos];
        out << names[j] << ',' << j + 1 << ',' << format_double(r.utilities[j]) << ',' << pos + 1 << ',';
        if (!r.taus.empty() && r.taus[j]) {
            out << format_double(*r.taus[j]);
        }
        out << ',' << (pos < r.d ? 1 : 0) << '\n';
    }
}

struct ScreenOutcome {
    DataMatrix data;
    double t = 0.0;
    std::size_t d = 0;
    std::vector<ScreeningResult> results;
};

/// `screen`: rank every predictor of a CSV file by each requested method.
/// Writes ranking_<method>.csv, manifest.txt and timing.txt to output_dir.
inline ScreenOutcome cmd_screen(const RunConfig& cfg, std::ostream& log)
{
    cfg.validate();
    if (cfg.methods.empty()) {
        throw ParameterError("no screening methods selected");
    }
    const auto start = std::chrono::steady_clock::now();

    ScreenOutcome out;
    out.data = load_csv(cfg.input, {cfg.response, cfg.response_file}, cfg.delimiter());
    const auto& data = out.data;
    if (data.p == 0) {
        throw ParameterError("input has no predictor columns");
    }
    out.t = screening_t(cfg.c_const, data.p);
    out.d = cfg.d ? *cfg.d : std::min(data.p, default_model_size(data.n, cfg.multipliers[0]));

    std::filesystem::create_directories(cfg.output_dir);
    Manifest manifest;
    manifest.set("command", std::string("screen"));
    manifest.set("input", cfg.input.string());
    manifest.set("response", join_list(cfg.response));
    manifest.set("response_file", cfg.response_file ? cfg.response_file->string() : std::string());
    manifest.set("delimiter", std::string(cfg.tsv ? "tab" : "comma"));
    manifest.set("methods", join_methods(cfg.methods));
    manifest.set("c_const", cfg.c_const);
    manifest.set("n", data.n);
    manifest.set("p", data.p);
    manifest.set("q", data.q);
    manifest.set("t", out.t);
    manifest.set("d_mode", std::string(cfg.d ? "fixed" : "auto"));
    manifest.set("d", out.d);
    manifest.set("multipliers", detail::multipliers_string(cfg.multipliers));

    for (Method m : cfg.methods) {
        ScreeningResult r = screen(data, m, out.t, out.d, cfg.workers);
        const auto flagged = static_cast<std::size_t>(std::count(r.degenerate.begin(), r.degenerate.end(), true));
        if (flagged == data.p) {
            throw DataError("every feature is degenerate under method " + std::string(to_string(m)));
        }
        const std::string name(to_string(m));
        auto file = detail::open_output(cfg.output_dir / ("ranking_" + name + ".csv"));
        write_ranking_csv(file, r, data.predictor_names);
        if (r.tau_y) {
            manifest.set("tau_y", *r.tau_y);
        }
        manifest.set("degenerate_features_" + name, flagged);
        log << name << ": top " << out.d << " of " << data.p << " retained";
        if (flagged > 0) {
            log << " (" << flagged << " constant feature(s) scored 0)";
        }
        log << '\n';
        out.results.push_back(std::move(r));
    }
    manifest.write(cfg.output_dir / "manifest.txt");

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::write_timing(cfg.output_dir, seconds, cfg.workers);
    return out;
}

struct TuneReport {
    std::size_t n = 0;
    std::size_t pairs = 0; ///< N
    double t = 0.0;
    TauResult tau;
    double truncated_fraction = 0.0; ///< #{Z_i > tau} / N
};

[[nodiscard]] inline TuneReport tune_report(std::span<const double> z, std::size_t n, double t)
{
    TuneReport r;
    r.n = n;
    r.pairs = z.size();
    r.t = t;
    r.tau = solve_tau(z, n, t);
    if (r.tau.has_tau()) {
        const auto above = std::count_if(z.begin(), z.end(), [&](double v) { return v > r.tau.tau; });
        r.truncated_fraction = static_cast<double>(above) / static_cast<double>(z.size());
    }
    return r;
}

inline void print_tune_report(std::ostream& out, const std::string& column, const TuneReport& r)
{
    out << "column = " << column << '\n'
        << "n = " << r.n << '\n'
        << "N = " << r.pairs << '\n'
        << "t = " << format_double(r.t) << '\n'
        << "t/n = " << format_double(r.t / static_cast<double>(r.n)) << '\n'
        << "status = " << to_string(r.tau.status) << '\n';
    if (r.tau.has_tau()) {
        out << "tau = " << format_double(r.tau.tau) << '\n'
            << "residual = " << format_double(r.tau.residual) << '\n'
            << "truncated_fraction = " << format_double(r.truncated_fraction) << '\n';
    } else {
        out << "tau = \n"
            << "warning: column is constant, no truncation level exists\n";
    }
}

/// `tune`: solve the truncation level of one column and report it.
/// t = C ln p with p the number of other columns unless given explicitly.
inline TuneReport cmd_tune(const RunConfig& cfg, std::ostream& out)
{
    cfg.validate();
    if (cfg.column.empty()) {
        throw ParameterError("no column given to tune");
    }
    const CsvTable table = read_numeric_table(cfg.input, cfg.delimiter());
    const std::size_t c = detail::column_index(table, cfg.column, cfg.input.string());

    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        values.push_back(row[c]);
    }
    if (values.size() < 2) {
        throw SizeError("need at least 2 rows to tune, got " + std::to_string(values.size()));
    }

    double t = 0.0;
    if (cfg.t) {
        t = *cfg.t;
    } else {
        std::size_t p = cfg.p_for_t.value_or(0);
        if (!cfg.p_for_t) {
            p = table.header.size();
            for (const auto& name : cfg.response) {
                if (std::find(table.header.begin(), table.header.end(), name) != table.header.end()) {
                    --p;
                }
            }
        }
        t = screening_t(cfg.c_const, p);
    }

    const auto z = pairwise_diffs(SampleView::scalar(values));
    const TuneReport report = tune_report(z.values, values.size(), t);
    print_tune_report(out, cfg.column, report);
    return report;
}

inline void write_metrics_csv(std::ostream& out, const std::vector<MethodSummary>& summaries)
{
    out << "method,mms_median,p1,pa,tp_d1,tp_d2\n";
    for (const auto& s : summaries) {
        out << to_string(s.method) << ',' << format_double(s.mms_median) << ',' << format_double(s.p1) << ','
            << format_double(s.pa) << ',' << format_double(s.tp_d1) << ',' << format_double(s.tp_d2) << '\n';
    }
}

inline void write_records_csv(std::ostream& out, const std::vector<ReplicateRecord>& records)
{
    out << "replicate,seed,method,mms,hit1,hitall,tp_d,tp_d1,tp_d2\n";
    for (const auto& r : records) {
        out << r.replicate << ',' << r.seed << ',' << to_string(r.method) << ',' << r.mms << ','
            << (r.metrics.hit1 ? 1 : 0) << ',' << (r.metrics.hitall ? 1 : 0) << ',' << r.metrics.tp_d << ','
            << r.metrics.tp_d1 << ',' << r.metrics.tp_d2 << '\n';
    }
}

/// Long format for plotting: one (scenario, method, metric, value) per row.
inline void write_metrics_long_csv(std::ostream& out, Scenario scenario, const std::vector<MethodSummary>& summaries)
{
    out << "scenario,method,metric,value\n";
    for (const auto& s : summaries) {
        const std::pair<const char*, double> metrics[] = {
            {"mms_median", s.mms_median}, {"p1", s.p1}, {"pa", s.pa}, {"tp_d1", s.tp_d1}, {"tp_d2", s.tp_d2}};
        for (const auto& [name, value] : metrics) {
            out << to_string(scenario) << ',' << to_string(s.method) << ',' << name << ',' << format_double(value)
                << '\n';
        }
    }
}

inline void print_metrics_table(std::ostream& out, const RunConfig& cfg, const BenchmarkResult& r)
{
    out << "Scenario " << to_string(cfg.scenario) << ": n = " << cfg.n << ", p = " << cfg.p << ", B = " << cfg.reps
        << ", d = " << r.d << ", d1 = " << r.d1 << ", d2 = " << r.d2 << '\n';
    out << std::left << std::setw(10) << "Method" << std::right << std::setw(20) << "Minimum model size"
        << std::setw(8) << "P1" << std::setw(8) << "Pa" << std::setw(8) << "TP_d1" << std::setw(8) << "TP_d2" << '\n';
    auto fixed = [](double v) {
        std::ostringstream s;
        s << std::setprecision(3) << v;
        return s.str();
    };
    for (const auto& s : r.summaries) {
        std::string name(to_string(s.method));
        for (auto& ch : name) {
            ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        }
        out << std::left << std::setw(10) << name << std::right << std::setw(20) << fixed(s.mms_median)
            << std::setw(8) << fixed(s.p1) << std::setw(8) << fixed(s.pa) << std::setw(8) << fixed(s.tp_d1)
            << std::setw(8) << fixed(s.tp_d2) << '\n';
    }
}

[[nodiscard]] inline BenchmarkConfig benchmark_config(const RunConfig& cfg)
{
    BenchmarkConfig bc;
    bc.scenario.scenario = cfg.scenario;
    bc.scenario.n = cfg.n;
    bc.scenario.p = cfg.p;
    bc.scenario.rho = cfg.rho;
    bc.scenario.seed = cfg.seed;
    bc.scenario.adjacent_ii = cfg.adjacent_ii;
    bc.methods = cfg.methods;
    bc.replicates = cfg.reps;
    bc.c_const = cfg.c_const;
    bc.multipliers = cfg.multipliers;
    bc.d = cfg.d;
    bc.workers = cfg.workers;
    return bc;
}

/// `simulate`: run a benchmark scenario and write metrics.csv,
/// records.csv, metrics_long.csv, manifest.txt and timing.txt.
inline BenchmarkResult cmd_simulate(const RunConfig& cfg, std::ostream& out)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const BenchmarkConfig bc = benchmark_config(cfg);
    const BenchmarkResult res = run_benchmark(bc);

    std::filesystem::create_directories(cfg.output_dir);
    {
        auto f = detail::open_output(cfg.output_dir / "metrics.csv");
        write_metrics_csv(f, res.summaries);
    }
    {
        auto f = detail::open_output(cfg.output_dir / "records.csv");
        write_records_csv(f, res.records);
    }
    {
        auto f = detail::open_output(cfg.output_dir / "metrics_long.csv");
        write_metrics_long_csv(f, cfg.scenario, res.summaries);
    }
    if (cfg.dump_data) {
        const auto dir = cfg.output_dir / "data";
        std::filesystem::create_directories(dir);
        for (std::size_t b = 0; b < cfg.reps; ++b) {
            ScenarioConfig sc = bc.scenario;
            sc.replicate = b;
            const Dataset ds = generate(sc);
            auto f = detail::open_output(dir / ("rep_" + std::to_string(b) + ".csv"));
            write_csv(f, ds.data);
            auto a = detail::open_output(dir / ("rep_" + std::to_string(b) + "_active.txt"));
            for (std::size_t j : ds.active) {
                a << ds.data.predictor_names[j] << '\n';
            }
        }
    }

    Manifest manifest;
    manifest.set("command", std::string("simulate"));
    manifest.set("scenario", std::string(to_string(cfg.scenario)));
    manifest.set("n", cfg.n);
    manifest.set("p", cfg.p);
    manifest.set("rho", cfg.rho);
    manifest.set("seed", std::to_string(cfg.seed));
    manifest.set("reps", cfg.reps);
    manifest.set("methods", join_methods(cfg.methods));
    manifest.set("c_const", cfg.c_const);
    manifest.set("t", res.t);
    manifest.set("multipliers", detail::multipliers_string(cfg.multipliers));
    manifest.set("d_mode", std::string(cfg.d ? "fixed" : "auto"));
    manifest.set("d", res.d);
    manifest.set("d1", res.d1);
    manifest.set("d2", res.d2);
    manifest.set("ii_placement", std::string(cfg.adjacent_ii ? "adjacent" : "even"));
    manifest.write(cfg.output_dir / "manifest.txt");

    print_metrics_table(out, cfg, res);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::write_timing(cfg.output_dir, seconds, cfg.workers);
    return res;
}

} // namespace rdcscreen
