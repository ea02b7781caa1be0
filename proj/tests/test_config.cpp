#include <mpc/config.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

namespace {

using mpc::Config;

std::string tmp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::path(::testing::TempDir()) / name;
    std::ofstream(path) << text;
    return path.string();
}

TEST(Config, DefaultsAndRoundTrip) {
    Config c;
    EXPECT_EQ(c.get("engine.levels"), "4");
    EXPECT_EQ(c.get("scenario.windows"), "400");
    EXPECT_EQ(c.get("run.seeds"), "0");
    c.set("engine.levels", "6");
    EXPECT_EQ(c.get("engine.levels"), "6");
}

TEST(Config, UnknownKeysAreRejectedByName) {
    Config c;
    try {
        c.set("engine.levles", "4");
        FAIL() << "expected ConfigError";
    } catch (const mpc::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("engine.levles"),
                  std::string::npos);
    }
    EXPECT_THROW(c.get("nope"), mpc::ConfigError);
}

TEST(Config, LoadFileParsesAndOverrides) {
    Config c;
    const std::string path = tmp_file("good.conf",
                                      "# comment line\n"
                                      "engine.levels = 5\n"
                                      "\n"
                                      "scenario.drift=0.002   # trailing\n"
                                      "  run.seeds = 1, 2, 3\n");
    c.load_file(path);
    EXPECT_EQ(c.get("engine.levels"), "5");
    EXPECT_DOUBLE_EQ(c.get_double("scenario.drift"), 0.002);
    const auto seeds = c.seeds();
    ASSERT_EQ(seeds.size(), 3u);
    EXPECT_EQ(seeds[0], 1u);
    EXPECT_EQ(seeds[2], 3u);
}

TEST(Config, LoadFileErrors) {
    Config c;
    EXPECT_THROW(c.load_file("/no/such/file.conf"), mpc::IoError);
    EXPECT_THROW(c.load_file(tmp_file("noeq.conf", "engine.levels 5\n")),
                 mpc::ConfigError);
    EXPECT_THROW(c.load_file(tmp_file("badkey.conf", "engine.bogus = 1\n")),
                 mpc::ConfigError);
}

TEST(Config, TypedGetters) {
    Config c;
    EXPECT_DOUBLE_EQ(c.get_double("engine.tau"), 0.2);
    EXPECT_EQ(c.get_u64("engine.lookback"), 20u);
    EXPECT_TRUE(c.get_on_off("engine.second_factor"));
    c.set("engine.second_factor", "off");
    EXPECT_FALSE(c.get_on_off("engine.second_factor"));

    c.set("engine.tau", "fast");
    try {
        c.get_double("engine.tau");
        FAIL() << "expected ConfigError";
    } catch (const mpc::ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("engine.tau"), std::string::npos);
    }
    c.set("engine.second_factor", "maybe");
    EXPECT_THROW(c.get_on_off("engine.second_factor"), mpc::ConfigError);
}

TEST(Config, ScenarioBuilder) {
    Config c;
    const auto sc = c.scenario();
    EXPECT_EQ(sc.n_windows, 400u);
    EXPECT_EQ(sc.legit_dist.kind, mpc::DistKind::Normal);
    EXPECT_DOUBLE_EQ(sc.legit_dist.location, 0.25);
    EXPECT_DOUBLE_EQ(sc.illegit_dist.location, 0.75);
    EXPECT_DOUBLE_EQ(sc.baseline_threshold, 0.5);

    c.set("scenario.legit_kind", "uniform");
    EXPECT_EQ(c.scenario().legit_dist.kind, mpc::DistKind::Uniform);
    c.set("scenario.legit_kind", "poisson");
    EXPECT_THROW(c.scenario(), mpc::ConfigError);
    c.set("scenario.legit_kind", "normal");
    c.set("scenario.illegit_fraction", "2");
    EXPECT_THROW(c.scenario(), mpc::InvalidArgument);
}

TEST(Config, EngineBuilder) {
    Config c;
    const auto ec = c.engine();
    EXPECT_EQ(ec.ladder.n, 4);
    EXPECT_DOUBLE_EQ(ec.ladder.l, 1.0);
    EXPECT_DOUBLE_EQ(ec.distances.mu_l, 0.5);
    EXPECT_DOUBLE_EQ(ec.distances.mu_a, 1.0);
    EXPECT_EQ(ec.mode, mpc::MovementMode::Gradual);
    EXPECT_EQ(ec.evidence, mpc::EvidencePolicy::MostRecent);
    EXPECT_EQ(ec.expansion_mode, mpc::ExpansionMode::On);
    EXPECT_TRUE(ec.second_factor);
    EXPECT_DOUBLE_EQ(ec.expansion.theta, 0.02);
    EXPECT_DOUBLE_EQ(ec.oracle.legit_correct_rate, 1.0);

    c.set("engine.mode", "jump");
    c.set("engine.expansion", "paper-literal");
    c.set("engine.evidence", "majority");
    const auto ec2 = c.engine();
    EXPECT_EQ(ec2.mode, mpc::MovementMode::Jump);
    EXPECT_EQ(ec2.expansion_mode, mpc::ExpansionMode::PaperLiteral);
    EXPECT_EQ(ec2.evidence, mpc::EvidencePolicy::Majority);

    c.set("engine.mode", "teleport");
    EXPECT_THROW(c.engine(), mpc::ConfigError);
    c.set("engine.mode", "gradual");
    c.set("engine.levels", "1");
    EXPECT_THROW(c.engine(), mpc::ConfigError);
    c.set("engine.levels", "4");
    c.set("engine.tau", "-0.5");
    EXPECT_THROW(c.engine(), mpc::InvalidArgument);
}

TEST(Config, SeedsJobsAndStability) {
    Config c;
    c.set("run.seeds", "7");
    ASSERT_EQ(c.seeds().size(), 1u);
    EXPECT_EQ(c.seeds()[0], 7u);
    c.set("run.seeds", "");
    EXPECT_THROW(c.seeds(), mpc::ConfigError);
    c.set("run.seeds", "1,x");
    EXPECT_THROW(c.seeds(), mpc::ConfigError);
    c.set("run.seeds", "0");

    EXPECT_EQ(c.jobs(), 1u);
    c.set("run.jobs", "0");
    EXPECT_THROW(c.jobs(), mpc::ConfigError);
    c.set("run.jobs", "600");
    EXPECT_THROW(c.jobs(), mpc::ConfigError);
    c.set("run.jobs", "8");
    EXPECT_EQ(c.jobs(), 8u);

    EXPECT_EQ(c.k_stable(), 5u);
    EXPECT_EQ(c.training_per_class(), 200u);
    c.set("scenario.training", "0");
    EXPECT_THROW(c.training_per_class(), mpc::ConfigError);
}

TEST(Config, PrintAndJson) {
    Config c;
    const std::string text = c.print();
    EXPECT_NE(text.find("engine.levels = 4\n"), std::string::npos);
    EXPECT_NE(text.find("run.jobs = 1\n"), std::string::npos);

    const auto j = c.to_json();
    EXPECT_EQ(j.begin().key(), "scenario.windows");
    EXPECT_EQ(j["engine.levels"], "4");
    EXPECT_FALSE(j.contains("run.jobs"));
    EXPECT_FALSE(j.contains("run.out"));
    EXPECT_TRUE(j.contains("run.seeds"));
}

TEST(Config, SplitList) {
    const auto items = Config::split_list(" a, b ,, c ");
    ASSERT_EQ(items.size(), 3u);
    EXPECT_EQ(items[0], "a");
    EXPECT_EQ(items[1], "b");
    EXPECT_EQ(items[2], "c");
    EXPECT_TRUE(Config::split_list("").empty());
}

}  // namespace
