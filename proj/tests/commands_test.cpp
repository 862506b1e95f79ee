#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rdcscreen/commands.hpp"
#include "temp_dir.hpp"

using namespace rdcscreen;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

// 100 rows: y depends on x1 only, plus 9 null columns and one constant column.
std::string screening_csv()
{
    Rng rng(21);
    std::ostringstream s;
    s << "x1,x2,x3,x4,x5,x6,x7,x8,x9,x10,konst,y\n";
    for (int i = 0; i < 100; ++i) {
        const double x1 = rng.student_t(3.0);
        s << format_double(x1);
        for (int j = 0; j < 9; ++j) {
            s << ',' << format_double(rng.student_t(3.0));
        }
        s << ",3," << format_double(2.0 * x1 + rng.normal()) << '\n';
    }
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

std::map<std::string, std::string> manifest_of(const std::filesystem::path& p)
{
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : read_config_file(p)) {
        m[k] = v;
    }
    return m;
}

} // namespace

TEST(ScreenCommand, WritesRankingsManifestAndTiming)
{
    TempDir dir;
    write_file(dir / "in.csv", screening_csv());
    RunConfig cfg;
    cfg.input = dir / "in.csv";
    cfg.response = {"y"};
    cfg.methods = {Method::RDC, Method::DC, Method::PearsonSIS};
    cfg.output_dir = dir / "out";
    std::ostringstream log;
    const auto outcome = cmd_screen(cfg, log);
    EXPECT_EQ(outcome.d, 11u); // floor(100 / ln 100) = 21, capped at p = 11

    for (const char* name : {"rdc", "dc", "pearson"}) {
        const auto lines = lines_of(read_file(cfg.output_dir / (std::string("ranking_") + name + ".csv")));
        ASSERT_EQ(lines.size(), 12u) << name;
        EXPECT_EQ(lines[0], "feature_name,feature_index,utility,rank,tau,retained");
        EXPECT_EQ(lines[1].rfind("x1,1,", 0), 0u) << lines[1];
        EXPECT_EQ(lines.back().rfind("konst,11,0,11,", 0), 0u) << lines.back();
    }
    const auto rdc = lines_of(read_file(cfg.output_dir / "ranking_rdc.csv"));
    EXPECT_EQ(rdc.back(), "konst,11,0,11,,1");

    const auto m = manifest_of(cfg.output_dir / "manifest.txt");
    EXPECT_EQ(m.at("command"), "screen");
    EXPECT_EQ(m.at("methods"), "rdc,dc,pearson");
    EXPECT_EQ(m.at("n"), "100");
    EXPECT_EQ(m.at("p"), "11");
    EXPECT_EQ(m.at("d_mode"), "auto");
    EXPECT_EQ(m.at("degenerate_features_dc"), "1");
    EXPECT_EQ(std::stod(m.at("t")), std::log(11.0));
    EXPECT_TRUE(m.count("tau_y"));
    const auto timing = manifest_of(cfg.output_dir / "timing.txt");
    EXPECT_EQ(timing.at("workers"), "1");
    EXPECT_NE(log.str().find("constant feature"), std::string::npos);
}

TEST(ScreenCommand, AutoModelSizeFromN)
{
    TempDir dir;
    std::ostringstream s;
    s << "y";
    for (int j = 1; j <= 30; ++j) {
        s << ",x" << j;
    }
    s << '\n';
    Rng rng(22);
    for (int i = 0; i < 100; ++i) {
        s << format_double(rng.normal());
        for (int j = 0; j < 30; ++j) {
            s << ',' << format_double(rng.normal());
        }
        s << '\n';
    }
    write_file(dir / "in.csv", s.str());
    RunConfig cfg;
    cfg.input = dir / "in.csv";
    cfg.response = {"y"};
    cfg.output_dir = dir.path();
    std::ostringstream log;
    EXPECT_EQ(cmd_screen(cfg, log).d, 21u);
    const auto lines = lines_of(read_file(dir / "ranking_rdc.csv"));
    EXPECT_EQ(lines[21].back(), '1');
    EXPECT_EQ(lines[22].back(), '0');
}

TEST(ScreenCommand, RerunIsByteIdentical)
{
    TempDir dir;
    write_file(dir / "in.csv", screening_csv());
    RunConfig cfg;
    cfg.input = dir / "in.csv";
    cfg.response = {"y"};
    cfg.methods = {Method::RDC, Method::DC};
    cfg.d = 3;
    std::ostringstream log;
    cfg.output_dir = dir / "a";
    (void)cmd_screen(cfg, log);
    cfg.output_dir = dir / "b";
    cfg.workers = 4;
    (void)cmd_screen(cfg, log);
    for (const char* f : {"ranking_rdc.csv", "ranking_dc.csv", "manifest.txt"}) {
        EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
    }
}

TEST(ScreenCommand, AllFeaturesDegenerateIsADataError)
{
    TempDir dir;
    write_file(dir / "in.csv", "a,b,y\n1,2,1\n1,2,5\n1,2,3\n");
    RunConfig cfg;
    cfg.input = dir / "in.csv";
    cfg.response = {"y"};
    cfg.output_dir = dir.path();
    std::ostringstream log;
    EXPECT_THROW((void)cmd_screen(cfg, log), DataError);
}

TEST(TuneCommand, HomogeneousColumn)
{
    TempDir dir;
    write_file(dir / "in.csv", "a,b\n0,1\n2,1\n");
    RunConfig cfg;
    cfg.input = dir / "in.csv";
    cfg.column = "a";
    cfg.t = 0.25; // N = 1, Z = 2 -> tau = 2 (n/t)^(1/4) = 2 * 8^(1/4)
    std::ostringstream out;
    const auto r = cmd_tune(cfg, out);
    EXPECT_EQ(r.tau.status, TauStatus::Solved);
    EXPECT_NEAR(r.tau.tau, 2.0 * std::pow(8.0, 0.25), 1e-12);
    EXPECT_EQ(r.truncated_fraction, 0.0);
    EXPECT_NE(out.str().find("status = solved"), std::string::npos);
}

TEST(TuneCommand, ConstantColumnIsReportedNotThrown)
{
    TempDir dir;
    write_file(dir / "in.csv", "a,b\n1,1\n2,1\n3,1\n");
    RunConfig cfg;
    cfg.input = dir / "in.csv";
    cfg.column = "b";
    std::ostringstream out;
    const auto r = cmd_tune(cfg, out);
    EXPECT_EQ(r.tau.status, TauStatus::Degenerate);
    EXPECT_NE(out.str().find("warning"), std::string::npos);
}

TEST(TuneCommand, HeavyTailedColumnTruncatesSomePairs)
{
    TempDir dir;
    std::ostringstream s;
    s << "x,y\n";
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        s << format_double(rng.student_t(2.0)) << ',' << format_double(rng.normal()) << '\n';
    }
    write_file(dir / "in.csv", s.str());
    RunConfig cfg;
    cfg.input = dir / "in.csv";
    cfg.column = "x";
    cfg.response = {"y"};
    cfg.p_for_t = 2000;
    std::ostringstream out;
    const auto r = cmd_tune(cfg, out);
    EXPECT_EQ(r.pairs, 4950u);
    EXPECT_DOUBLE_EQ(r.t, std::log(2000.0));
    EXPECT_GT(r.truncated_fraction, 0.0);
    EXPECT_LT(r.truncated_fraction, 1.0);
    EXPECT_LE(r.tau.residual, kTauTolerance);

    cfg.p_for_t.reset();
    EXPECT_THROW((void)cmd_tune(cfg, out), ParameterError); // p = 1 gives t = 0
    cfg.column = "nope";
    EXPECT_THROW((void)cmd_tune(cfg, out), ParameterError);
}

namespace {

RunConfig small_simulation(const std::filesystem::path& out)
{
    RunConfig cfg;
    cfg.scenario = Scenario::Ib;
    cfg.n = 40;
    cfg.p = 50;
    cfg.reps = 4;
    cfg.seed = 5;
    cfg.methods = {Method::RDC, Method::DC, Method::PearsonSIS};
    cfg.output_dir = out;
    return cfg;
}

} // namespace

TEST(SimulateCommand, OutputShape)
{
    TempDir dir;
    auto cfg = small_simulation(dir / "run");
    std::ostringstream table;
    (void)cmd_simulate(cfg, table);
    const auto metrics = lines_of(read_file(cfg.output_dir / "metrics.csv"));
    ASSERT_EQ(metrics.size(), 4u);
    EXPECT_EQ(metrics[0], "method,mms_median,p1,pa,tp_d1,tp_d2");
    EXPECT_EQ(metrics[1].rfind("rdc,", 0), 0u);
    EXPECT_EQ(lines_of(read_file(cfg.output_dir / "records.csv")).size(), 13u);
    EXPECT_EQ(lines_of(read_file(cfg.output_dir / "metrics_long.csv")).size(), 16u);
    const auto m = manifest_of(cfg.output_dir / "manifest.txt");
    for (const char* key : {"command", "scenario", "n", "p", "rho", "seed", "reps", "methods", "c_const", "t",
                            "multipliers", "d_mode", "d", "d1", "d2", "ii_placement"}) {
        EXPECT_TRUE(m.count(key)) << key;
    }
    EXPECT_EQ(m.at("scenario"), "Ib");
    EXPECT_NE(table.str().find("Minimum model size"), std::string::npos);
}

TEST(SimulateCommand, RerunAndWorkerCountAreByteIdentical)
{
    TempDir dir;
    auto cfg = small_simulation(dir / "a");
    std::ostringstream sink;
    (void)cmd_simulate(cfg, sink);
    cfg.output_dir = dir / "b";
    (void)cmd_simulate(cfg, sink);
    cfg.output_dir = dir / "c";
    cfg.workers = 3;
    (void)cmd_simulate(cfg, sink);
    for (const char* f : {"metrics.csv", "records.csv", "metrics_long.csv", "manifest.txt"}) {
        const auto a = read_file(dir / "a" / f);
        EXPECT_EQ(a, read_file(dir / "b" / f)) << f;
        EXPECT_EQ(a, read_file(dir / "c" / f)) << f;
    }
}

TEST(SimulateCommand, DumpedDataReproducesRecords)
{
    TempDir dir;
    auto cfg = small_simulation(dir / "run");
    cfg.dump_data = true;
    cfg.methods = {Method::RDC};
    std::ostringstream sink;
    const auto res = cmd_simulate(cfg, sink);
    for (std::size_t b = 0; b < cfg.reps; ++b) {
        const auto base = cfg.output_dir / "data" / ("rep_" + std::to_string(b));
        const auto data = load_csv(base.string() + ".csv", {{"Y"}, {}});
        const auto active_names = lines_of(read_file(base.string() + "_active.txt"));
        ASSERT_EQ(active_names.size(), 4u);
        std::vector<std::size_t> active;
        for (const auto& name : active_names) {
            active.push_back(static_cast<std::size_t>(std::stoul(name.substr(1)) - 1));
        }
        const auto sr = screen(data, Method::RDC, res.t, res.d);
        EXPECT_EQ(minimum_model_size(sr.ranking, active), res.records[b].mms);
    }
}

TEST(SimulateCommand, PearsonRejectedForScenarioII)
{
    TempDir dir;
    auto cfg = small_simulation(dir / "run");
    cfg.scenario = Scenario::IIa;
    std::ostringstream sink;
    EXPECT_THROW((void)cmd_simulate(cfg, sink), ParameterError);
}

TEST(ConfigFile, ParsesKeyValueLines)
{
    TempDir dir;
    write_file(dir / "c.conf", "# comment\nreps = 7\n\n  methods = rdc,dc  # trailing\n");
    const auto entries = read_config_file(dir / "c.conf");
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_EQ(entries[0], (std::pair<std::string, std::string>{"reps", "7"}));
    EXPECT_EQ(entries[1].second, "rdc,dc");
    write_file(dir / "bad.conf", "reps 7\n");
    EXPECT_THROW((void)read_config_file(dir / "bad.conf"), ParameterError);
    EXPECT_THROW((void)read_config_file(dir / "none.conf"), ParameterError);
}
