#include <mpc/io.hpp>
#include <mpc/session.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::path(::testing::TempDir()) / "mpc_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path out = work_dir() / ("stdout_" + std::to_string(counter));
    const fs::path err = work_dir() / ("stderr_" + std::to_string(counter));
    ++counter;
    const std::string cmd = env + (env.empty() ? "" : " ") + MPC_CLI_BIN +
                            " " + args + " >" + out.string() + " 2>" +
                            err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path small_config() {
    static const fs::path path = [] {
        const fs::path p = work_dir() / "small.conf";
        std::ofstream(p) << "scenario.windows = 40\n"
                            "scenario.training = 60\n";
        return p;
    }();
    return path;
}

TEST(Cli, RequiresSubcommand) {
    const auto r = run_cli("");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("subcommand"), std::string::npos);
}

TEST(Cli, UnknownFlagFails) {
    const auto r = run_cli("simulate --frobnicate");
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, PrintConfigShowsResolvedValues) {
    const auto r = run_cli("--print-config");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("engine.levels = 4\n"), std::string::npos);
    EXPECT_NE(r.out.find("run.seeds = 0\n"), std::string::npos);

    const auto flags = run_cli(
        "simulate --second-factor off --expansion off --mode jump "
        "--print-config");
    EXPECT_EQ(flags.code, 0);
    EXPECT_NE(flags.out.find("engine.second_factor = off\n"),
              std::string::npos);
    EXPECT_NE(flags.out.find("engine.expansion = off\n"), std::string::npos);
    EXPECT_NE(flags.out.find("engine.mode = jump\n"), std::string::npos);
}

TEST(Cli, PrintConfigValidates) {
    const fs::path bad = work_dir() / "bad_value.conf";
    std::ofstream(bad) << "engine.mode = teleport\n";
    const auto r = run_cli("--config " + bad.string() + " --print-config");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("engine.mode"), std::string::npos);
}

TEST(Cli, SimulateWritesAllArtifacts) {
    const fs::path dir = work_dir() / "sim1";
    const auto r = run_cli("simulate --config " + small_config().string() +
                           " --seed 1 --out " + dir.string());
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* name :
         {"events_1.csv", "trace_mpc_1.csv", "trace_baseline_1.csv",
          "report_mpc_1.json", "report_baseline_1.json", "aggregate.json"}) {
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    }

    const auto rep = nlohmann::json::parse(slurp(dir / "report_mpc_1.json"));
    EXPECT_TRUE(rep["acc"].is_number());
    EXPECT_EQ(rep["seed"], 1);
    EXPECT_TRUE(rep.contains("occupancy_4"));
    EXPECT_FALSE(rep["config"].contains("run.jobs"));
    EXPECT_FALSE(rep["config"].contains("run.out"));

    const auto base =
        nlohmann::json::parse(slurp(dir / "report_baseline_1.json"));
    EXPECT_TRUE(base["occupancy_1"].is_null());

    const std::string trace = slurp(dir / "trace_mpc_1.csv");
    EXPECT_EQ(trace.substr(0, trace.find('\n')),
              "window,score,class,position,level,alpha,beta,decision,"
              "password");
}

TEST(Cli, UnknownConfigKeyNamedInError) {
    const fs::path bad = work_dir() / "bad_key.conf";
    std::ofstream(bad) << "engine.levles = 4\n";
    const auto r = run_cli("simulate --config " + bad.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("engine.levles"), std::string::npos);
}

TEST(Cli, ReplayMissingFileIsIoError) {
    const auto r = run_cli("replay " +
                           (work_dir() / "missing.csv").string());
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, ReplayRejectsBadHeaderNamingColumn) {
    const fs::path bad = work_dir() / "bad_header.csv";
    std::ofstream(bad)
        << "window,score,user,password_entered,password_correct\n";
    const auto r = run_cli("replay " + bad.string() + " --out " +
                           (work_dir() / "rp_bad").string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("actor"), std::string::npos);
}

TEST(Cli, ReplayRejectsBadRowNamingLine) {
    const fs::path bad = work_dir() / "bad_row.csv";
    std::ofstream(bad) << mpc::kEventHeader << "\n0,1.2,legit,,\n";
    const auto r = run_cli("replay " + bad.string() + " --out " +
                           (work_dir() / "rp_bad2").string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("2"), std::string::npos);
}

TEST(Cli, ReplayRoundTripReproducesReport) {
    const fs::path dir = work_dir() / "roundtrip";
    const std::string common = " --config " + small_config().string() +
                               " --seed 5 --out " + dir.string();
    ASSERT_EQ(run_cli("simulate" + common).code, 0);
    const std::string before = slurp(dir / "report_mpc_5.json");
    const std::string trace_before = slurp(dir / "trace_mpc_5.csv");
    ASSERT_FALSE(before.empty());

    const auto r =
        run_cli("replay " + (dir / "events_5.csv").string() + common);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir / "report_mpc_5.json"), before);
    EXPECT_EQ(slurp(dir / "trace_mpc_5.csv"), trace_before);
}

TEST(Cli, ParallelRunsAreByteIdentical) {
    const fs::path a = work_dir() / "par_a";
    const fs::path b = work_dir() / "par_b";
    const std::string common = "simulate --config " + small_config().string() +
                               " --seed 1 --seed 2 --seed 3 --seed 4";
    ASSERT_EQ(run_cli(common + " --jobs 1 --out " + a.string()).code, 0);
    ASSERT_EQ(run_cli(common + " --jobs 4 --out " + b.string()).code, 0);

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(a))
        names.push_back(entry.path().filename().string());
    ASSERT_EQ(names.size(), 21u);
    for (const std::string& name : names) {
        ASSERT_TRUE(fs::exists(b / name)) << name;
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
}

TEST(Cli, CompareWritesSummary) {
    const fs::path dir = work_dir() / "cmp";
    const auto r = run_cli("compare --config " + small_config().string() +
                           " --seed 1 --seed 2 --out " + dir.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(dir / "compare.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "seed,overlap,mpc_acc,baseline_acc,acc_delta,mpc_delay_windows,"
              "baseline_delay_windows,delay_delta_windows");
    EXPECT_NE(csv.find("\nsummary,"), std::string::npos);
    EXPECT_NE(csv.find("\n1,"), std::string::npos);
    EXPECT_NE(csv.find("\n2,"), std::string::npos);

    const auto j = nlohmann::json::parse(slurp(dir / "compare.json"));
    EXPECT_EQ(j["seeds"], 2);
    EXPECT_TRUE(j["mean_acc_delta"].is_number());
}

TEST(Cli, SweepGridAndFailureHandling) {
    const fs::path dir = work_dir() / "sweep";
    const fs::path conf = work_dir() / "sweep.conf";
    std::ofstream(conf) << "scenario.windows = 30\n"
                           "scenario.training = 50\n"
                           "sweep.key = engine.mu_a\n"
                           "sweep.values = 0.5, 1\n"
                           "sweep.key2 = engine.mode\n"
                           "sweep.values2 = gradual, jump\n";
    const auto r = run_cli("sweep --config " + conf.string() + " --seed 1 " +
                           "--out " + dir.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(dir / "sweep.csv");
    int lines = 0;
    for (char ch : csv) lines += ch == '\n';
    EXPECT_EQ(lines, 5);
    EXPECT_NE(csv.find("engine.mu_a,0.5,engine.mode,gradual,1,"),
              std::string::npos);
    EXPECT_NE(csv.find(",ok\n"), std::string::npos);

    const fs::path allbad = work_dir() / "sweep_bad.conf";
    std::ofstream(allbad) << "sweep.key = engine.levels\n"
                             "sweep.values = 0, 1\n";
    const auto bad = run_cli("sweep --config " + allbad.string() + " --out " +
                             (work_dir() / "sweep_bad").string());
    EXPECT_EQ(bad.code, 3);
    const std::string bad_csv = slurp(work_dir() / "sweep_bad" / "sweep.csv");
    EXPECT_NE(bad_csv.find(",failed\n"), std::string::npos);

    const auto nokey = run_cli("sweep --config " + small_config().string());
    EXPECT_EQ(nokey.code, 1);
}

TEST(Cli, DebugLoggingGoesToStderr) {
    const fs::path dir = work_dir() / "logrun";
    const auto r = run_cli("simulate --config " + small_config().string() +
                               " --seed 1 --out " + dir.string(),
                           "MPC_LOG=debug");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("overlap"), std::string::npos);
    const auto quiet = run_cli("simulate --config " + small_config().string() +
                                   " --seed 1 --out " + dir.string(),
                               "MPC_LOG=quiet");
    ASSERT_EQ(quiet.code, 0);
    EXPECT_TRUE(quiet.err.empty()) << quiet.err;
}

}  // namespace
