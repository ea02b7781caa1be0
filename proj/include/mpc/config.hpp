#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mpc/errors.hpp"
#include "mpc/session.hpp"

namespace mpc {

struct KeySpec {
    const char* key;
    const char* def;
    const char* help;
};

/// Flat dotted key/value run configuration. Every key has a default; file
/// values override defaults and CLI flags override file values. Unknown keys
/// are rejected so typos cannot silently fall back to defaults.
class Config {
public:
    static const std::vector<KeySpec>& registry() {
        static const std::vector<KeySpec> specs = {
            {"scenario.windows", "400", "windows per session"},
            {"scenario.training", "200", "training scores per class"},
            {"scenario.legit_kind", "normal",
             "legitimate score distribution (normal|uniform)"},
            {"scenario.legit_location", "0.25", "legitimate location"},
            {"scenario.legit_scale", "0.08", "legitimate scale"},
            {"scenario.illegit_kind", "normal",
             "illegitimate score distribution (normal|uniform)"},
            {"scenario.illegit_location", "0.75", "illegitimate location"},
            {"scenario.illegit_scale", "0.08", "illegitimate scale"},
            {"scenario.overlap_target", "0",
             "re-space means to hit this score overlap (0 = off)"},
            {"scenario.drift", "0", "per-window legitimate mean shift"},
            {"scenario.sensor_noise", "0.02", "sensor noise sd"},
            {"scenario.illegit_fraction", "0.5",
             "trailing fraction of hostile windows"},
            {"scenario.window_seconds", "15", "seconds per window"},
            {"scenario.omega", "0.5", "baseline reject threshold"},
            {"engine.levels", "4", "privilege levels"},
            {"engine.spacing", "1", "inter-level spacing"},
            {"engine.mu_l", "0.5", "upward movement distance"},
            {"engine.mu_a", "1", "downward movement distance"},
            {"engine.mode", "gradual", "movement mode (gradual|jump)"},
            {"engine.evidence", "most-recent",
             "slack resolution (most-recent|majority)"},
            {"engine.lookback", "20", "evidence window length"},
            {"engine.start_position", "0", "initial privilege position"},
            {"engine.delta", "0.001", "boundary tie-break offset"},
            {"engine.theta", "0.02", "anti-collision margin"},
            {"engine.expansion", "on",
             "domain expansion (on|off|paper-literal)"},
            {"engine.second_factor", "on", "password prompts (on|off)"},
            {"engine.w2", "0.05", "baseline acceleration"},
            {"engine.v0", "0", "initial expansion velocity"},
            {"engine.sigma_a", "0.05", "process noise magnitude"},
            {"engine.r_obs", "0.01", "observation noise covariance"},
            {"engine.rescale", "1", "expansion rescale factor"},
            {"engine.w1_floor", "0.05", "balancing parameter floor"},
            {"engine.rd_floor", "0.5", "R_d floor for wrong passwords"},
            {"engine.tau", "0.2", "retrain threshold"},
            {"engine.retrain_window", "50", "retrain sliding window"},
            {"engine.r_min", "0.1", "distance ratio floor"},
            {"engine.r_max", "10", "distance ratio ceiling"},
            {"engine.eps_div", "1e-09", "denominator guard"},
            {"engine.kde_min_bandwidth", "0.001", "KDE bandwidth floor"},
            {"oracle.legit_correct", "1",
             "legitimate password success rate"},
            {"oracle.illegit_correct", "0",
             "illegitimate password success rate"},
            {"run.seeds", "0", "comma-separated seed list"},
            {"run.jobs", "1", "worker threads"},
            {"run.out", "out", "output directory"},
            {"run.k_stable", "5", "delay stability horizon"},
            {"sweep.key", "", "first sweep key"},
            {"sweep.values", "", "comma-separated first sweep values"},
            {"sweep.key2", "", "second sweep key"},
            {"sweep.values2", "", "comma-separated second sweep values"},
        };
        return specs;
    }

    Config() {
        for (const KeySpec& s : registry()) values_[s.key] = s.def;
    }

    void set(const std::string& key, const std::string& value) {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError("unknown config key '" + key + "'");
        it->second = value;
    }

    const std::string& get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError("unknown config key '" + key + "'");
        return it->second;
    }

    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file: " + path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            const std::string_view trimmed = trim(line);
            if (trimmed.empty()) continue;
            const std::size_t eq = trimmed.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError("missing '=' at " + path + ":" +
                                  std::to_string(line_no));
            set(std::string(trim(trimmed.substr(0, eq))),
                std::string(trim(trimmed.substr(eq + 1))));
        }
    }

    double get_double(const std::string& key) const {
        const std::string& v = get(key);
        double out = 0.0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
            throw ConfigError("key '" + key + "' needs a number, got '" + v +
                              "'");
        return out;
    }

    std::uint64_t get_u64(const std::string& key) const {
        const std::string& v = get(key);
        std::uint64_t out = 0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
            throw ConfigError("key '" + key +
                              "' needs a non-negative integer, got '" + v +
                              "'");
        return out;
    }

    bool get_on_off(const std::string& key) const {
        const std::string& v = get(key);
        if (v == "on") return true;
        if (v == "off") return false;
        throw ConfigError("key '" + key + "' must be on or off, got '" + v +
                          "'");
    }

    ScenarioConfig scenario() const {
        ScenarioConfig c;
        c.n_windows = get_u64("scenario.windows");
        c.legit_dist = dist("scenario.legit_kind", "scenario.legit_location",
                            "scenario.legit_scale");
        c.illegit_dist =
            dist("scenario.illegit_kind", "scenario.illegit_location",
                 "scenario.illegit_scale");
        c.overlap_target = get_double("scenario.overlap_target");
        c.drift = get_double("scenario.drift");
        c.sensor_noise_sd = get_double("scenario.sensor_noise");
        c.illegit_fraction = get_double("scenario.illegit_fraction");
        c.window_seconds = get_double("scenario.window_seconds");
        c.baseline_threshold = get_double("scenario.omega");
        validate_scenario(c);
        return c;
    }

    EngineConfig engine() const {
        const std::uint64_t levels = get_u64("engine.levels");
        if (levels < 2 || levels > 1000)
            throw ConfigError("engine.levels must be between 2 and 1000");
        EngineConfig c{
            .ladder = PrivilegeLadder(static_cast<int>(levels),
                                      get_double("engine.spacing"))};
        c.distances = {get_double("engine.mu_l"), get_double("engine.mu_a")};
        const std::string& mode = get("engine.mode");
        if (mode == "gradual")
            c.mode = MovementMode::Gradual;
        else if (mode == "jump")
            c.mode = MovementMode::Jump;
        else
            throw ConfigError("engine.mode must be gradual or jump, got '" +
                              mode + "'");
        const std::string& ev = get("engine.evidence");
        if (ev == "most-recent")
            c.evidence = EvidencePolicy::MostRecent;
        else if (ev == "majority")
            c.evidence = EvidencePolicy::Majority;
        else
            throw ConfigError(
                "engine.evidence must be most-recent or majority, got '" +
                ev + "'");
        c.lookback = get_u64("engine.lookback");
        c.start_position = get_double("engine.start_position");
        c.delta = get_double("engine.delta");
        c.expansion.theta = get_double("engine.theta");
        c.expansion.w2 = get_double("engine.w2");
        c.expansion.v0 = get_double("engine.v0");
        c.expansion.sigma_a = get_double("engine.sigma_a");
        c.expansion.r_obs = get_double("engine.r_obs");
        c.expansion.rescale = get_double("engine.rescale");
        c.expansion.w1_floor = get_double("engine.w1_floor");
        c.expansion.rd_floor = get_double("engine.rd_floor");
        const std::string& ex = get("engine.expansion");
        if (ex == "on")
            c.expansion_mode = ExpansionMode::On;
        else if (ex == "off")
            c.expansion_mode = ExpansionMode::Off;
        else if (ex == "paper-literal")
            c.expansion_mode = ExpansionMode::PaperLiteral;
        else
            throw ConfigError(
                "engine.expansion must be on, off or paper-literal, got '" +
                ex + "'");
        c.second_factor = get_on_off("engine.second_factor");
        c.clamp = {get_double("engine.r_min"), get_double("engine.r_max"),
                   get_double("engine.eps_div")};
        c.tau = get_double("engine.tau");
        c.retrain_window = get_u64("engine.retrain_window");
        c.kde_min_bandwidth = get_double("engine.kde_min_bandwidth");
        c.oracle = {get_double("oracle.legit_correct"),
                    get_double("oracle.illegit_correct")};
        validate_engine(c);
        return c;
    }

    std::vector<std::uint64_t> seeds() const {
        std::vector<std::uint64_t> out;
        for (const std::string& item : split_list(get("run.seeds"))) {
            std::uint64_t v = 0;
            auto res =
                std::from_chars(item.data(), item.data() + item.size(), v);
            if (res.ec != std::errc{} ||
                res.ptr != item.data() + item.size())
                throw ConfigError("run.seeds: bad seed '" + item + "'");
            out.push_back(v);
        }
        if (out.empty()) throw ConfigError("run.seeds: empty seed list");
        return out;
    }

    unsigned jobs() const {
        const std::uint64_t j = get_u64("run.jobs");
        if (j < 1 || j > 512)
            throw ConfigError("run.jobs must be between 1 and 512");
        return static_cast<unsigned>(j);
    }

    std::size_t k_stable() const {
        const std::uint64_t k = get_u64("run.k_stable");
        if (k < 1) throw ConfigError("run.k_stable must be >= 1");
        return k;
    }

    std::size_t training_per_class() const {
        const std::uint64_t n = get_u64("scenario.training");
        if (n < 1) throw ConfigError("scenario.training must be >= 1");
        return n;
    }

    std::string print() const {
        std::string out;
        for (const KeySpec& s : registry()) {
            out += s.key;
            out += " = ";
            out += values_.at(s.key);
            out += '\n';
        }
        return out;
    }

    /// Config as embedded in result artifacts. Execution-environment keys
    /// (worker count, output directory) are omitted so equal experiments
    /// produce byte-identical files no matter where or how wide they ran.
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        for (const KeySpec& s : registry()) {
            const std::string_view key(s.key);
            if (key == "run.jobs" || key == "run.out") continue;
            j[s.key] = values_.at(s.key);
        }
        return j;
    }

    static std::vector<std::string> split_list(std::string_view text) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t pos = text.find(',', start);
            if (pos == std::string_view::npos) pos = text.size();
            const std::string_view item = trim(text.substr(start, pos - start));
            if (!item.empty()) out.emplace_back(item);
            start = pos + 1;
        }
        return out;
    }

private:
    static std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                              s.front() == '\r'))
            s.remove_prefix(1);
        while (!s.empty() &&
               (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
            s.remove_suffix(1);
        return s;
    }

    DistSpec dist(const std::string& kind_key, const std::string& loc_key,
                  const std::string& scale_key) const {
        DistSpec d;
        const std::string& kind = get(kind_key);
        if (kind == "normal")
            d.kind = DistKind::Normal;
        else if (kind == "uniform")
            d.kind = DistKind::Uniform;
        else
            throw ConfigError("key '" + kind_key +
                              "' must be normal or uniform, got '" + kind +
                              "'");
        d.location = get_double(loc_key);
        d.scale = get_double(scale_key);
        return d;
    }

    std::map<std::string, std::string> values_;
};

}  // namespace mpc
