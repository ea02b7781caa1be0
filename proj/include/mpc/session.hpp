#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpc/domains.hpp"
#include "mpc/errors.hpp"
#include "mpc/expansion.hpp"
#include "mpc/io.hpp"
#include "mpc/privilege.hpp"
#include "mpc/rng.hpp"
#include "mpc/score_model.hpp"

namespace mpc {

constexpr std::uint64_t kTrainingStream = 0x54524149;
constexpr std::uint64_t kSessionStream = 0x53455353;
constexpr std::uint64_t kOracleStream = 0x4f52434c;

struct PasswordEvent {
    bool entered = false;
    bool correct = false;
};

struct SessionEvent {
    std::size_t window = 0;
    ScoreSample sample;
    std::optional<PasswordEvent> password;
};

// ---------------------------------------------------------------------------
// Scenario generation.
// ---------------------------------------------------------------------------

enum class DistKind { Normal, Uniform };

/// Location/scale family: Normal(location, scale) or
/// Uniform[location - scale, location + scale]. scale = 0 is a point mass.
struct DistSpec {
    DistKind kind = DistKind::Normal;
    double location = 0.5;
    double scale = 0.1;

    double sample(Rng& rng) const {
        if (kind == DistKind::Normal) return location + scale * rng.normal();
        return location + scale * (2.0 * rng.uniform() - 1.0);
    }
};

struct ScenarioConfig {
    std::size_t n_windows = 400;
    DistSpec legit_dist{DistKind::Normal, 0.25, 0.08};
    DistSpec illegit_dist{DistKind::Normal, 0.75, 0.08};
    double overlap_target = 0.0;  // 0 disables spacing calibration
    double drift = 0.0;           // per-window shift of the legitimate mean
    double sensor_noise_sd = 0.02;
    double illegit_fraction = 0.5;  // trailing fraction of hostile windows
    std::uint64_t seed = 0;
    double window_seconds = 15.0;
    double baseline_threshold = 0.5;
};

inline void validate_scenario(const ScenarioConfig& c) {
    if (c.n_windows < 1)
        throw InvalidArgument("scenario: need at least one window");
    auto check_dist = [](const DistSpec& d, const char* side) {
        if (!std::isfinite(d.location) || !std::isfinite(d.scale) ||
            d.scale < 0.0)
            throw InvalidArgument(std::string("scenario: invalid ") + side +
                                  " distribution");
    };
    check_dist(c.legit_dist, "legitimate");
    check_dist(c.illegit_dist, "illegitimate");
    if (!(c.overlap_target >= 0.0 && c.overlap_target < 1.0))
        throw InvalidArgument("scenario: overlap_target must be in [0,1)");
    if (!(c.sensor_noise_sd >= 0.0))
        throw InvalidArgument("scenario: sensor_noise_sd must be >= 0");
    if (!(c.illegit_fraction >= 0.0 && c.illegit_fraction <= 1.0))
        throw InvalidArgument("scenario: illegit_fraction must be in [0,1]");
    if (!(c.window_seconds > 0.0))
        throw InvalidArgument("scenario: window_seconds must be > 0");
    if (!(c.baseline_threshold > 0.0 && c.baseline_threshold < 1.0))
        throw InvalidArgument("scenario: baseline_threshold must be in (0,1)");
    if (!std::isfinite(c.drift))
        throw InvalidArgument("scenario: drift must be finite");
}

namespace detail {

/// Population overlap of two normals a gap d apart, measured as the pooled
/// mass between the upper population's 5th percentile and the lower one's
/// 95th, with mixing fraction fr of the upper population.
inline double population_overlap(double d, double s_lo, double s_hi,
                                 double fr) {
    const double z95 = normal_quantile(0.95);
    const double f_lo =
        std::max(0.0, 0.95 - normal_cdf((d - z95 * s_hi) / s_lo));
    const double f_hi =
        std::max(0.0, normal_cdf((z95 * s_lo - d) / s_hi) - 0.05);
    return (1.0 - fr) * f_lo + fr * f_hi;
}

inline double solve_overlap_gap(double target, double s_lo, double s_hi,
                                double fr) {
    if (population_overlap(0.0, s_lo, s_hi, fr) <= target) return 0.0;
    double lo = 0.0;
    double hi = normal_quantile(0.95) * (s_lo + s_hi) +
                12.0 * std::max(s_lo, s_hi);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (population_overlap(mid, s_lo, s_hi, fr) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Applies the overlap target, if set, by re-spacing the two normal means
/// symmetrically around their midpoint so the stationary mix hits the target
/// overlap. Drift and truncation to [0,1] are not modeled here.
inline ScenarioConfig calibrated(ScenarioConfig c) {
    validate_scenario(c);
    if (c.overlap_target <= 0.0) return c;
    if (c.legit_dist.kind != DistKind::Normal ||
        c.illegit_dist.kind != DistKind::Normal)
        throw InvalidArgument(
            "scenario: overlap_target requires normal distributions");
    const double s_lo =
        std::hypot(c.legit_dist.scale, c.sensor_noise_sd);
    const double s_hi = c.illegit_dist.scale;
    if (!(s_lo > 0.0) || !(s_hi > 0.0))
        throw InvalidArgument(
            "scenario: overlap_target requires positive spread");
    const double d = detail::solve_overlap_gap(c.overlap_target, s_lo, s_hi,
                                               c.illegit_fraction);
    const double mid =
        0.5 * (c.legit_dist.location + c.illegit_dist.location);
    c.legit_dist.location = mid - 0.5 * d;
    c.illegit_dist.location = mid + 0.5 * d;
    return c;
}

struct GeneratedSession {
    std::vector<SessionEvent> events;
    double realized_overlap = 0.0;
    std::size_t onset_window = 0;  // first hostile window; n_windows if none
};

namespace detail {

/// Nearest-rank percentile; xs need not be sorted.
inline double percentile(std::vector<double> xs, double p) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * n));
    rank = std::clamp<std::size_t>(rank, 1, xs.size());
    return xs[rank - 1];
}

inline double realized_overlap(const std::vector<double>& legit,
                               const std::vector<double>& illegit) {
    if (legit.empty() || illegit.empty()) return 0.0;
    const double hi = percentile(legit, 0.95);
    const double lo = percentile(illegit, 0.05);
    if (lo > hi) return 0.0;
    std::size_t inside = 0;
    for (double s : legit) inside += (s >= lo && s <= hi);
    for (double s : illegit) inside += (s >= lo && s <= hi);
    return static_cast<double>(inside) /
           static_cast<double>(legit.size() + illegit.size());
}

}  // namespace detail

/// Draws one session: legitimate windows first, then a hostile tail of
/// illegit_fraction of the windows. Legitimate draws take the per-window
/// drift plus sensor noise; all scores are clipped to [0,1]. Deterministic
/// in the seed.
inline GeneratedSession generate_session(const ScenarioConfig& raw) {
    const ScenarioConfig c = calibrated(raw);
    Rng rng(mix_seed(c.seed, kSessionStream));
    const std::size_t hostile = static_cast<std::size_t>(
        std::llround(static_cast<double>(c.n_windows) * c.illegit_fraction));
    const std::size_t onset = c.n_windows - std::min(hostile, c.n_windows);

    GeneratedSession out;
    out.onset_window = onset;
    out.events.reserve(c.n_windows);
    std::vector<double> legit_scores, illegit_scores;
    for (std::size_t w = 0; w < c.n_windows; ++w) {
        const bool hostile_now = w >= onset;
        double score;
        if (hostile_now) {
            score = c.illegit_dist.sample(rng);
        } else {
            score = c.legit_dist.sample(rng) +
                    c.drift * static_cast<double>(w);
            if (c.sensor_noise_sd > 0.0)
                score += rng.normal(0.0, c.sensor_noise_sd);
        }
        score = std::clamp(score, 0.0, 1.0);
        (hostile_now ? illegit_scores : legit_scores).push_back(score);
        out.events.push_back(
            {w,
             {w, score,
              hostile_now ? Actor::Illegitimate : Actor::Legitimate},
             std::nullopt});
    }
    out.realized_overlap = detail::realized_overlap(legit_scores,
                                                    illegit_scores);
    return out;
}

/// Overlap measure of an existing event stream (same definition as the
/// generator's realized overlap).
inline double session_overlap(std::span<const SessionEvent> events) {
    std::vector<double> legit, illegit;
    for (const SessionEvent& ev : events)
        (ev.sample.actor == Actor::Legitimate ? legit : illegit)
            .push_back(ev.sample.score);
    return detail::realized_overlap(legit, illegit);
}

struct TrainingData {
    std::vector<double> legit;
    std::vector<double> illegit;
};

/// Labeled calibration scores drawn from the same (calibrated) scenario
/// distributions on an independent seed stream; no drift, sensor noise on
/// the legitimate side only.
inline TrainingData generate_training(const ScenarioConfig& raw,
                                      std::size_t per_class) {
    if (per_class < 1)
        throw InvalidArgument("generate_training: per_class must be >= 1");
    const ScenarioConfig c = calibrated(raw);
    Rng rng(mix_seed(c.seed, kTrainingStream));
    TrainingData t;
    t.legit.reserve(per_class);
    t.illegit.reserve(per_class);
    for (std::size_t i = 0; i < per_class; ++i) {
        double s = c.legit_dist.sample(rng);
        if (c.sensor_noise_sd > 0.0) s += rng.normal(0.0, c.sensor_noise_sd);
        t.legit.push_back(std::clamp(s, 0.0, 1.0));
    }
    for (std::size_t i = 0; i < per_class; ++i)
        t.illegit.push_back(std::clamp(c.illegit_dist.sample(rng), 0.0, 1.0));
    return t;
}

// ---------------------------------------------------------------------------
// Second factor.
// ---------------------------------------------------------------------------

struct PasswordPolicy {
    double legit_correct_rate = 1.0;
    double illegit_correct_rate = 0.0;
};

inline void validate_policy(const PasswordPolicy& p) {
    if (!(p.legit_correct_rate >= 0.0 && p.legit_correct_rate <= 1.0) ||
        !(p.illegit_correct_rate >= 0.0 && p.illegit_correct_rate <= 1.0))
        throw InvalidArgument("password policy: rates must be in [0,1]");
}

/// Simulated password entry: the user always responds, correctly with the
/// actor's configured rate.
inline PasswordEvent password_oracle(Actor actor, const PasswordPolicy& policy,
                                     Rng& rng) {
    const double rate = actor == Actor::Legitimate
                            ? policy.legit_correct_rate
                            : policy.illegit_correct_rate;
    return {true, rng.bernoulli(rate)};
}

// ---------------------------------------------------------------------------
// Event CSV round trip.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kEventHeader =
    "window,score,actor,password_entered,password_correct";

inline void write_events(const std::string& path,
                         std::span<const SessionEvent> events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << kEventHeader << '\n';
    for (const SessionEvent& ev : events) {
        out << ev.window << ',' << fmt_double(ev.sample.score) << ','
            << (ev.sample.actor == Actor::Legitimate ? "legit" : "illegit")
            << ',';
        if (ev.password) {
            out << (ev.password->entered ? '1' : '0') << ',';
            if (ev.password->entered) out << (ev.password->correct ? '1' : '0');
        } else {
            out << ',';
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

inline std::vector<SessionEvent> replay(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);

    std::vector<SessionEvent> events;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!saw_header) {
            const auto want = detail::split_csv(kEventHeader);
            const auto got = detail::split_csv(line);
            for (std::size_t i = 0; i < want.size(); ++i) {
                if (i >= got.size() || got[i] != want[i])
                    throw ParseError("expected column '" +
                                         std::string(want[i]) + "' in header",
                                     line_no);
            }
            if (got.size() != want.size())
                throw ParseError("too many header columns", line_no);
            saw_header = true;
            continue;
        }
        if (line.empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 5)
            throw ParseError("expected 5 fields, got " +
                                 std::to_string(f.size()),
                             line_no);
        SessionEvent ev;
        ev.window = detail::parse_u64(f[0], line_no, "window");
        ev.sample.window = ev.window;
        ev.sample.score = detail::parse_double(f[1], line_no, "score");
        if (!(ev.sample.score >= 0.0 && ev.sample.score <= 1.0))
            throw ParseError("score outside [0,1]", line_no);
        if (f[2] == "legit")
            ev.sample.actor = Actor::Legitimate;
        else if (f[2] == "illegit")
            ev.sample.actor = Actor::Illegitimate;
        else
            throw ParseError("bad actor value '" + std::string(f[2]) + "'",
                             line_no);
        if (f[3].empty()) {
            if (!f[4].empty())
                throw ParseError("password_correct set without entry flag",
                                 line_no);
        } else if (f[3] == "0" || f[3] == "1") {
            PasswordEvent pw;
            pw.entered = f[3] == "1";
            if (pw.entered) {
                if (f[4] != "0" && f[4] != "1")
                    throw ParseError("bad password_correct value '" +
                                         std::string(f[4]) + "'",
                                     line_no);
                pw.correct = f[4] == "1";
            } else if (!f[4].empty() && f[4] != "0") {
                throw ParseError("password_correct set without entry",
                                 line_no);
            }
            ev.password = pw;
        } else {
            throw ParseError("bad password_entered value '" +
                                 std::string(f[3]) + "'",
                             line_no);
        }
        events.push_back(ev);
    }
    return events;
}

// ---------------------------------------------------------------------------
// Engine.
// ---------------------------------------------------------------------------

struct TraceRecord {
    std::size_t window = 0;
    double score = 0.0;
    std::optional<DomainClass> cls;  // empty for the stateless baseline
    double position = -1.0;
    int level = 0;
    double alpha = -1.0;
    double beta = -1.0;
    bool accept = true;
    std::optional<PasswordEvent> password;
};

using SessionTrace = std::vector<TraceRecord>;

enum class ExpansionMode { Off, On, PaperLiteral };

struct EngineConfig {
    PrivilegeLadder ladder{4, 1.0};
    MovementDistances distances{0.5, 1.0};
    MovementMode mode = MovementMode::Gradual;
    EvidencePolicy evidence = EvidencePolicy::MostRecent;
    std::size_t lookback = 20;
    double start_position = 0.0;
    double delta = 1e-3;  // boundary tie-break offset
    ExpansionParams expansion{};
    ExpansionMode expansion_mode = ExpansionMode::On;
    bool second_factor = true;
    RatioClamp clamp{};
    double tau = 0.2;
    std::size_t retrain_window = 50;
    PasswordPolicy oracle{};
    std::uint64_t oracle_seed = 0;
    double kde_min_bandwidth = 1e-3;
};

inline void validate_engine(const EngineConfig& c) {
    if (!(c.distances.mu_l > 0.0) || !(c.distances.mu_a > 0.0))
        throw InvalidArgument("engine: movement distances must be positive");
    if (c.lookback < 1) throw InvalidArgument("engine: lookback must be >= 1");
    if (!(c.delta > 0.0)) throw InvalidArgument("engine: delta must be > 0");
    const ExpansionParams& e = c.expansion;
    if (!(e.theta >= 0.0 && e.theta <= 1.0))
        throw InvalidArgument("engine: theta must be in [0,1]");
    if (!(e.v0 >= 0.0)) throw InvalidArgument("engine: v0 must be >= 0");
    if (!(e.sigma_a >= 0.0))
        throw InvalidArgument("engine: sigma_a must be >= 0");
    if (!(e.r_obs > 0.0)) throw InvalidArgument("engine: r_obs must be > 0");
    if (!(e.rescale > 0.0))
        throw InvalidArgument("engine: rescale must be > 0");
    if (!(e.w1_floor > 0.0 && e.w1_floor <= 1.0))
        throw InvalidArgument("engine: w1_floor must be in (0,1]");
    if (!(e.rd_floor > 0.0))
        throw InvalidArgument("engine: rd_floor must be > 0");
    if (!(c.clamp.r_min > 0.0) || !(c.clamp.r_max >= c.clamp.r_min) ||
        !(c.clamp.eps_div >= 0.0))
        throw InvalidArgument("engine: invalid ratio clamp");
    if (!(c.tau >= 0.0)) throw InvalidArgument("engine: tau must be >= 0");
    if (c.retrain_window < 1)
        throw InvalidArgument("engine: retrain_window must be >= 1");
    if (!(c.kde_min_bandwidth > 0.0))
        throw InvalidArgument("engine: kde_min_bandwidth must be > 0");
    validate_policy(c.oracle);
    if (!(c.start_position >= 0.0 &&
          c.start_position <= c.ladder.bottom()))
        throw InvalidArgument("engine: start_position outside ladder");
}

/// Online MPC engine: one step() call per authentication window.
///
/// Per window it classifies the score, applies privilege movement, and, when
/// the second factor is armed (score not legitimate, effective level below
/// the top), resolves a password prompt. A correct password resets privilege
/// to the top and expands the legitimate domain; a wrong one expands the
/// illegitimate domain. Both expansions run through their own Kalman filter
/// over the observed score-to-boundary gap. Movement distances are re-derived
/// from the training densities whenever the boundaries move.
class MpcEngine {
public:
    MpcEngine(const EngineConfig& cfg, const TrainingData& training)
        : cfg_(cfg),
          partition_(init_boundaries(training.legit, training.illegit,
                                     cfg.delta, cfg.expansion.theta)),
          legit_kde_(KdeModel::fit(std::vector<double>(training.legit),
                                   cfg.kde_min_bandwidth)),
          illegit_kde_(KdeModel::fit(std::vector<double>(training.illegit),
                                     cfg.kde_min_bandwidth)),
          priv_(cfg.ladder, cfg.start_position),
          evidence_(cfg.lookback),
          eff_dist_(cfg.distances),
          oracle_rng_(mix_seed(cfg.oracle_seed, kOracleStream)) {
        validate_engine(cfg_);
        filter_legit_.x = {0.0, cfg_.expansion.v0};
        filter_illegit_.x = {0.0, cfg_.expansion.v0};
        if (expansion_on()) refresh_distances(true);
    }

    TraceRecord step(const SessionEvent& ev) {
        ++counters_.cycles;
        const double score = ev.sample.score;
        const DomainClass cls = classify(partition_, score);
        priv_ = movement_step(priv_, cls, evidence_, eff_dist_, cfg_.mode,
                              cfg_.evidence);

        std::optional<PasswordEvent> pw;
        if (cfg_.second_factor && cls != DomainClass::Legitimate &&
            effective_level(priv_) > 1) {
            pw = ev.password ? *ev.password
                             : password_oracle(ev.sample.actor, cfg_.oracle,
                                               oracle_rng_);
            if (pw->entered) {
                if (cls == DomainClass::Slack)
                    ++(pw->correct ? counters_.n_l : counters_.n_a);
                if (expansion_on()) expansion_cycle(pw->correct, score);
                if (pw->correct) priv_ = reset_to_top(priv_);
            }
        }

        push_prompt(pw && pw->entered);
        retrain_ = retrain_signal(prompt_count_, prompt_hist_.size(),
                                  cfg_.tau);
        if (retrain_) ++retrain_cycles_;
        if (expansion_on()) refresh_distances(false);

        TraceRecord rec;
        rec.window = ev.window;
        rec.score = score;
        rec.cls = cls;
        rec.position = priv_.position();
        rec.level = effective_level(priv_);
        rec.alpha = partition_.alpha();
        rec.beta = partition_.beta();
        rec.accept = !is_locked(priv_);
        rec.password = pw;
        return rec;
    }

    const DomainPartition& partition() const noexcept { return partition_; }
    const PrivilegeState& privilege() const noexcept { return priv_; }
    const FeedbackCounters& counters() const noexcept { return counters_; }
    const MovementDistances& effective_distances() const noexcept {
        return eff_dist_;
    }
    bool retrain_signaled() const noexcept { return retrain_; }
    std::uint64_t retrain_cycles() const noexcept { return retrain_cycles_; }

private:
    bool expansion_on() const noexcept {
        return cfg_.expansion_mode != ExpansionMode::Off;
    }

    FilterMode filter_mode() const noexcept {
        return cfg_.expansion_mode == ExpansionMode::PaperLiteral
                   ? FilterMode::PaperLiteral
                   : FilterMode::StateEstimate;
    }

    void expansion_cycle(bool correct, double score) {
        const ExpansionParams& e = cfg_.expansion;
        const double w1 = balancing_w1(counters_, e.w1_floor);
        const double r_d = priv_.position();
        if (correct) {
            const double mass =
                kde_integral(illegit_kde_, 0.0, partition_.alpha());
            const double v = std::max(0.0, 1.0 - mass - e.theta);
            const double gap = std::max(score - partition_.alpha(), 0.0);
            const double u =
                control_input(r_d, gap, w1, e.w2, v, true, e.rd_floor);
            filter_legit_ = kalman_update(
                kalman_predict(filter_legit_, 1.0, u, e.sigma_a), gap,
                e.r_obs);
            const double s =
                filtered_expansion(filter_legit_, filter_mode(), e.rescale);
            partition_ = expand_legitimate(partition_, s);
        } else {
            const double gap = std::max(partition_.beta() - score, 0.0);
            const double u =
                control_input(r_d, gap, w1, e.w2, 0.0, false, e.rd_floor);
            filter_illegit_ = kalman_update(
                kalman_predict(filter_illegit_, 1.0, u, e.sigma_a), gap,
                e.r_obs);
            const double s =
                filtered_expansion(filter_illegit_, filter_mode(), e.rescale);
            partition_ = expand_illegitimate(partition_, s);
        }
    }

    void push_prompt(bool entered) {
        prompt_hist_.push_back(entered);
        prompt_count_ += entered;
        if (prompt_hist_.size() > cfg_.retrain_window) {
            prompt_count_ -= prompt_hist_.front();
            prompt_hist_.pop_front();
        }
    }

    void refresh_distances(bool force) {
        if (!force && partition_.alpha() == dist_alpha_ &&
            partition_.beta() == dist_beta_)
            return;
        eff_dist_ = adjust_distances(cfg_.distances, legit_kde_, illegit_kde_,
                                     partition_, cfg_.clamp);
        dist_alpha_ = partition_.alpha();
        dist_beta_ = partition_.beta();
    }

    EngineConfig cfg_;
    DomainPartition partition_;
    KdeModel legit_kde_;
    KdeModel illegit_kde_;
    PrivilegeState priv_;
    EvidenceWindow evidence_;
    MovementDistances eff_dist_;
    Rng oracle_rng_;
    FeedbackCounters counters_;
    KalmanState filter_legit_;
    KalmanState filter_illegit_;
    std::deque<bool> prompt_hist_;
    std::size_t prompt_count_ = 0;
    bool retrain_ = false;
    std::uint64_t retrain_cycles_ = 0;
    double dist_alpha_ = -1.0;
    double dist_beta_ = -1.0;
};

inline SessionTrace run_mpc(std::span<const SessionEvent> events,
                            const EngineConfig& cfg,
                            const TrainingData& training) {
    MpcEngine engine(cfg, training);
    SessionTrace trace;
    trace.reserve(events.size());
    for (const SessionEvent& ev : events) trace.push_back(engine.step(ev));
    return trace;
}

/// Stateless single-threshold baseline: reject iff score >= omega. Ladder
/// and domain fields carry sentinels (-1 position, level 0, -1 boundaries).
inline SessionTrace run_baseline(std::span<const SessionEvent> events,
                                 double omega) {
    if (!(omega > 0.0 && omega < 1.0))
        throw InvalidArgument("run_baseline: omega must be in (0,1)");
    SessionTrace trace;
    trace.reserve(events.size());
    for (const SessionEvent& ev : events) {
        TraceRecord rec;
        rec.window = ev.window;
        rec.score = ev.sample.score;
        rec.accept = ev.sample.score < omega;
        trace.push_back(rec);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Trace CSV.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kTraceHeader =
    "window,score,class,position,level,alpha,beta,decision,password";

inline void write_trace(const std::string& path, const SessionTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << kTraceHeader << '\n';
    for (const TraceRecord& r : trace) {
        out << r.window << ',' << fmt_double(r.score) << ','
            << (r.cls ? to_string(*r.cls) : "-") << ','
            << fmt_double(r.position) << ',' << r.level << ','
            << fmt_double(r.alpha) << ',' << fmt_double(r.beta) << ','
            << (r.accept ? "accept" : "reject") << ',';
        if (r.password)
            out << (!r.password->entered ? "none"
                    : r.password->correct ? "correct"
                                          : "wrong");
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace mpc
