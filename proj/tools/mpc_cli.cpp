// Command-line front end: scenario simulation, event replay, MPC-vs-baseline
// comparison, and parameter sweeps, with deterministic multi-seed batches.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mpc/mpc.hpp>

namespace fs = std::filesystem;

namespace {

enum class LogLevel { Quiet = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MPC_LOG");
        if (!env) return LogLevel::Warn;
        const std::string v = env;
        if (v == "quiet") return LogLevel::Quiet;
        if (v == "info") return LogLevel::Info;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

void log(LogLevel lvl, const std::string& msg) {
    if (log_level() >= lvl) std::cerr << "mpc: " << msg << '\n';
}

struct SeedOutcome {
    std::uint64_t seed = 0;
    double overlap = 0.0;
    std::vector<mpc::SessionEvent> events;
    mpc::SessionTrace mpc_trace;
    mpc::SessionTrace base_trace;
    mpc::Report mpc_report;
    mpc::Report base_report;
};

SeedOutcome evaluate(const mpc::Config& cfg, std::uint64_t seed,
                     std::vector<mpc::SessionEvent> events, double overlap) {
    mpc::ScenarioConfig sc = cfg.scenario();
    sc.seed = seed;
    mpc::EngineConfig ec = cfg.engine();
    ec.oracle_seed = seed;
    const mpc::TrainingData training =
        mpc::generate_training(sc, cfg.training_per_class());

    SeedOutcome o;
    o.seed = seed;
    o.overlap = overlap;
    o.events = std::move(events);
    o.mpc_trace = mpc::run_mpc(o.events, ec, training);
    o.base_trace = mpc::run_baseline(o.events, sc.baseline_threshold);

    std::vector<mpc::Actor> actors;
    actors.reserve(o.events.size());
    for (const mpc::SessionEvent& ev : o.events)
        actors.push_back(ev.sample.actor);
    o.mpc_report = mpc::make_report(o.mpc_trace, actors, cfg.k_stable(),
                                    sc.window_seconds, ec.ladder);
    o.base_report = mpc::make_report(o.base_trace, actors, cfg.k_stable(),
                                     sc.window_seconds, std::nullopt);
    return o;
}

SeedOutcome run_one(const mpc::Config& cfg, std::uint64_t seed) {
    mpc::ScenarioConfig sc = cfg.scenario();
    sc.seed = seed;
    mpc::GeneratedSession gen = mpc::generate_session(sc);
    log(LogLevel::Debug, "seed " + std::to_string(seed) + ": overlap " +
                             mpc::fmt_double(gen.realized_overlap));
    return evaluate(cfg, seed, std::move(gen.events), gen.realized_overlap);
}

std::vector<SeedOutcome> run_batch(const mpc::Config& cfg) {
    const std::vector<std::uint64_t> seeds = cfg.seeds();
    const unsigned jobs = cfg.jobs();
    log(LogLevel::Info, std::to_string(seeds.size()) + " seed(s), jobs=" +
                            std::to_string(jobs));
    return mpc::run_indexed<SeedOutcome>(
        seeds.size(), jobs,
        [&](std::size_t i) { return run_one(cfg, seeds[i]); });
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mpc::IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw mpc::IoError("write failed: " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mpc::IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw mpc::IoError("write failed: " + path.string());
}

fs::path make_out_dir(const mpc::Config& cfg) {
    const fs::path dir = cfg.get("run.out");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw mpc::IoError("cannot create output directory: " + dir.string());
    return dir;
}

nlohmann::ordered_json seed_report_json(const mpc::Config& cfg,
                                        const SeedOutcome& o,
                                        const mpc::Report& rep,
                                        std::size_t n_levels) {
    nlohmann::ordered_json j = mpc::report_to_json(rep, n_levels);
    j["seed"] = o.seed;
    j["realized_overlap"] = o.overlap;
    j["config"] = cfg.to_json();
    return j;
}

double mean(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

constexpr double kNever = std::numeric_limits<double>::infinity();

double delay_or_inf(const mpc::DelayResult& d) {
    return d.windows ? static_cast<double>(*d.windows) : kNever;
}

/// Median with never-stable runs counted as infinite; empty when the median
/// itself is infinite.
std::optional<double> median_delay(std::vector<double> xs) {
    if (xs.empty()) return std::nullopt;
    std::sort(xs.begin(), xs.end());
    const double lo = xs[(xs.size() - 1) / 2];
    const double hi = xs[xs.size() / 2];
    if (std::isinf(lo) || std::isinf(hi)) return std::nullopt;
    return 0.5 * (lo + hi);
}

struct BatchSummary {
    std::size_t n_seeds = 0;
    double mean_overlap = 0.0;
    double mean_mpc_acc = 0.0;
    double mean_baseline_acc = 0.0;
    double mean_acc_delta = 0.0;
    std::optional<double> mpc_delay_median;
    std::optional<double> baseline_delay_median;
    double delay_win_rate = 0.0;
};

BatchSummary summarize(const std::vector<SeedOutcome>& outcomes) {
    BatchSummary s;
    s.n_seeds = outcomes.size();
    std::vector<double> overlaps, mpc_accs, base_accs, deltas, mpc_delays,
        base_delays;
    std::size_t wins = 0;
    for (const SeedOutcome& o : outcomes) {
        overlaps.push_back(o.overlap);
        const double ma = o.mpc_report.rates.acc.value_or(0.0);
        const double ba = o.base_report.rates.acc.value_or(0.0);
        mpc_accs.push_back(ma);
        base_accs.push_back(ba);
        deltas.push_back(ma - ba);
        const double md = delay_or_inf(o.mpc_report.delay);
        const double bd = delay_or_inf(o.base_report.delay);
        mpc_delays.push_back(md);
        base_delays.push_back(bd);
        wins += md < bd;
    }
    s.mean_overlap = mean(overlaps);
    s.mean_mpc_acc = mean(mpc_accs);
    s.mean_baseline_acc = mean(base_accs);
    s.mean_acc_delta = mean(deltas);
    s.mpc_delay_median = median_delay(mpc_delays);
    s.baseline_delay_median = median_delay(base_delays);
    s.delay_win_rate = outcomes.empty()
                           ? 0.0
                           : static_cast<double>(wins) /
                                 static_cast<double>(outcomes.size());
    return s;
}

nlohmann::ordered_json summary_json(const BatchSummary& s) {
    nlohmann::ordered_json j;
    j["seeds"] = s.n_seeds;
    j["mean_overlap"] = s.mean_overlap;
    j["mean_mpc_acc"] = s.mean_mpc_acc;
    j["mean_baseline_acc"] = s.mean_baseline_acc;
    j["mean_acc_delta"] = s.mean_acc_delta;
    if (s.mpc_delay_median)
        j["mpc_delay_median_windows"] = *s.mpc_delay_median;
    else
        j["mpc_delay_median_windows"] = nullptr;
    if (s.baseline_delay_median)
        j["baseline_delay_median_windows"] = *s.baseline_delay_median;
    else
        j["baseline_delay_median_windows"] = nullptr;
    j["delay_win_rate"] = s.delay_win_rate;
    return j;
}

void write_seed_outputs(const mpc::Config& cfg, const fs::path& dir,
                        const std::vector<SeedOutcome>& outcomes,
                        bool write_event_files) {
    const std::size_t n_levels =
        static_cast<std::size_t>(cfg.engine().ladder.n);
    for (const SeedOutcome& o : outcomes) {
        const std::string tag = std::to_string(o.seed);
        if (write_event_files)
            mpc::write_events((dir / ("events_" + tag + ".csv")).string(),
                              o.events);
        mpc::write_trace((dir / ("trace_mpc_" + tag + ".csv")).string(),
                         o.mpc_trace);
        mpc::write_trace((dir / ("trace_baseline_" + tag + ".csv")).string(),
                         o.base_trace);
        write_json(dir / ("report_mpc_" + tag + ".json"),
                   seed_report_json(cfg, o, o.mpc_report, n_levels));
        write_json(dir / ("report_baseline_" + tag + ".json"),
                   seed_report_json(cfg, o, o.base_report, n_levels));
    }
    nlohmann::ordered_json agg = summary_json(summarize(outcomes));
    agg["config"] = cfg.to_json();
    write_json(dir / "aggregate.json", agg);
}

int cmd_simulate(const mpc::Config& cfg) {
    const std::vector<SeedOutcome> outcomes = run_batch(cfg);
    write_seed_outputs(cfg, make_out_dir(cfg), outcomes, true);
    return 0;
}

int cmd_replay(const mpc::Config& cfg, const std::string& input) {
    std::vector<mpc::SessionEvent> events = mpc::replay(input);
    const std::uint64_t seed = cfg.seeds().front();
    const double overlap = mpc::session_overlap(events);
    std::vector<SeedOutcome> outcomes;
    outcomes.push_back(evaluate(cfg, seed, std::move(events), overlap));
    write_seed_outputs(cfg, make_out_dir(cfg), outcomes, false);
    return 0;
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? mpc::fmt_double(*v) : std::string();
}

int cmd_compare(const mpc::Config& cfg) {
    const std::vector<SeedOutcome> outcomes = run_batch(cfg);
    const fs::path dir = make_out_dir(cfg);

    std::string csv =
        "seed,overlap,mpc_acc,baseline_acc,acc_delta,mpc_delay_windows,"
        "baseline_delay_windows,delay_delta_windows\n";
    for (const SeedOutcome& o : outcomes) {
        const double ma = o.mpc_report.rates.acc.value_or(0.0);
        const double ba = o.base_report.rates.acc.value_or(0.0);
        csv += std::to_string(o.seed) + ',' + mpc::fmt_double(o.overlap) +
               ',' + mpc::fmt_double(ma) + ',' + mpc::fmt_double(ba) + ',' +
               mpc::fmt_double(ma - ba) + ',';
        const auto& md = o.mpc_report.delay.windows;
        const auto& bd = o.base_report.delay.windows;
        if (md) csv += std::to_string(*md);
        csv += ',';
        if (bd) csv += std::to_string(*bd);
        csv += ',';
        if (md && bd)
            csv += mpc::fmt_double(static_cast<double>(*md) -
                                   static_cast<double>(*bd));
        csv += '\n';
    }
    const BatchSummary s = summarize(outcomes);
    csv += "summary," + mpc::fmt_double(s.mean_overlap) + ',' +
           mpc::fmt_double(s.mean_mpc_acc) + ',' +
           mpc::fmt_double(s.mean_baseline_acc) + ',' +
           mpc::fmt_double(s.mean_acc_delta) + ',' +
           csv_cell(s.mpc_delay_median) + ',' +
           csv_cell(s.baseline_delay_median) + ",\n";
    write_text(dir / "compare.csv", csv);

    nlohmann::ordered_json j = summary_json(s);
    j["config"] = cfg.to_json();
    write_json(dir / "compare.json", j);
    return 0;
}

int cmd_sweep(const mpc::Config& cfg) {
    const std::string key = cfg.get("sweep.key");
    const std::vector<std::string> values =
        mpc::Config::split_list(cfg.get("sweep.values"));
    if (key.empty() || values.empty())
        throw mpc::ConfigError("sweep requires sweep.key and sweep.values");
    const std::string key2 = cfg.get("sweep.key2");
    std::vector<std::string> values2 =
        mpc::Config::split_list(cfg.get("sweep.values2"));
    if (key2.empty()) {
        if (!values2.empty())
            throw mpc::ConfigError("sweep.values2 set without sweep.key2");
        values2 = {""};
    } else if (values2.empty()) {
        throw mpc::ConfigError("sweep.key2 set without sweep.values2");
    }

    std::string csv =
        "key,value,key2,value2,seeds,mean_mpc_acc,mean_baseline_acc,"
        "mean_acc_delta,delay_win_rate,status\n";
    std::size_t failures = 0;
    std::size_t cells = 0;
    for (const std::string& v1 : values) {
        for (const std::string& v2 : values2) {
            ++cells;
            csv += key + ',' + v1 + ',' + key2 + ',' + v2 + ',';
            try {
                mpc::Config cell = cfg;
                cell.set(key, v1);
                if (!key2.empty()) cell.set(key2, v2);
                const BatchSummary s = summarize(run_batch(cell));
                csv += std::to_string(s.n_seeds) + ',' +
                       mpc::fmt_double(s.mean_mpc_acc) + ',' +
                       mpc::fmt_double(s.mean_baseline_acc) + ',' +
                       mpc::fmt_double(s.mean_acc_delta) + ',' +
                       mpc::fmt_double(s.delay_win_rate) + ",ok\n";
            } catch (const std::exception& e) {
                log(LogLevel::Warn, std::string("sweep cell failed: ") +
                                        e.what());
                csv += ",,,,failed\n";
                ++failures;
            }
        }
    }
    write_text(make_out_dir(cfg) / "sweep.csv", csv);
    if (failures == cells) {
        std::cerr << "mpc: every sweep cell failed\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-level privilege control simulator"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir, mode, expansion, second_factor,
        replay_input;
    std::vector<std::uint64_t> seeds;
    unsigned jobs = 0;
    bool print_config = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file path");
        cmd->add_option("--seed", seeds, "seed (repeatable)");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--jobs", jobs, "worker threads");
        cmd->add_option("--mode", mode, "movement mode (jump|gradual)");
        cmd->add_option("--expansion", expansion,
                        "domain expansion (on|off|paper-literal)");
        cmd->add_option("--second-factor", second_factor,
                        "password prompts (on|off)");
        cmd->add_flag("--print-config", print_config,
                      "print the resolved configuration and exit");
    };

    add_common(&app);
    CLI::App* simulate =
        app.add_subcommand("simulate", "generate sessions and run both engines");
    CLI::App* replay_cmd =
        app.add_subcommand("replay", "run both engines over an event CSV");
    replay_cmd->add_option("input", replay_input, "event CSV path")
        ->required();
    CLI::App* compare =
        app.add_subcommand("compare", "per-seed MPC vs baseline comparison");
    CLI::App* sweep =
        app.add_subcommand("sweep", "grid of compare runs over config values");
    add_common(simulate);
    add_common(replay_cmd);
    add_common(compare);
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        mpc::Config cfg;
        if (!config_path.empty()) cfg.load_file(config_path);
        if (!seeds.empty()) {
            std::string list;
            for (std::uint64_t s : seeds) {
                if (!list.empty()) list += ',';
                list += std::to_string(s);
            }
            cfg.set("run.seeds", list);
        }
        if (!out_dir.empty()) cfg.set("run.out", out_dir);
        if (jobs != 0) cfg.set("run.jobs", std::to_string(jobs));
        if (!mode.empty()) cfg.set("engine.mode", mode);
        if (!expansion.empty()) cfg.set("engine.expansion", expansion);
        if (!second_factor.empty())
            cfg.set("engine.second_factor", second_factor);

        if (print_config) {
            cfg.scenario();  // validate before echoing
            cfg.engine();
            std::cout << cfg.print();
            return 0;
        }
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (replay_cmd->parsed()) return cmd_replay(cfg, replay_input);
        if (compare->parsed()) return cmd_compare(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        std::cerr << "mpc: a subcommand is required (simulate | replay | "
                     "compare | sweep)\n";
        return 1;
    } catch (const mpc::IoError& e) {
        std::cerr << "mpc: io error: " << e.what() << '\n';
        return 2;
    } catch (const mpc::ConfigError& e) {
        std::cerr << "mpc: config error: " << e.what() << '\n';
        return 1;
    } catch (const mpc::ParseError& e) {
        std::cerr << "mpc: input error: " << e.what() << '\n';
        return 1;
    } catch (const mpc::InvalidArgument& e) {
        std::cerr << "mpc: config error: " << e.what() << '\n';
        return 1;
    } catch (const mpc::InsufficientData& e) {
        std::cerr << "mpc: config error: " << e.what() << '\n';
        return 1;
    } catch (const mpc::DegenerateLabels& e) {
        std::cerr << "mpc: config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "mpc: internal error: " << e.what() << '\n';
        return 3;
    } catch (...) {
        std::cerr << "mpc: internal error\n";
        return 3;
    }
}
