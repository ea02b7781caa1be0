#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpc/errors.hpp"
#include "mpc/io.hpp"
#include "mpc/privilege.hpp"
#include "mpc/session.hpp"

namespace mpc {

struct ConfusionCounts {
    std::uint64_t ta = 0;
    std::uint64_t tr = 0;
    std::uint64_t fa = 0;
    std::uint64_t fr = 0;

    std::uint64_t total() const noexcept { return ta + tr + fa + fr; }
};

inline ConfusionCounts confusion(const SessionTrace& trace,
                                 std::span<const Actor> actors) {
    if (trace.empty()) throw InsufficientData("confusion: empty trace");
    if (trace.size() != actors.size())
        throw InvalidArgument("confusion: trace/actor size mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const bool legit = actors[i] == Actor::Legitimate;
        const bool accept = trace[i].accept;
        if (legit)
            ++(accept ? c.ta : c.fr);
        else
            ++(accept ? c.fa : c.tr);
    }
    return c;
}

inline ConfusionCounts confusion(const SessionTrace& trace, Actor actor) {
    std::vector<Actor> actors(trace.size(), actor);
    return confusion(trace, actors);
}

struct RateReport {
    std::optional<double> acc, prec, tar, trr, far, frr;
};

/// ACC=(TA+TR)/all, PREC=TA/(TA+FA), TAR=TA/(TA+FR), TRR=TR/(TR+FA),
/// FAR=FA/(FA+TR), FRR=FR/(FR+TA); a zero denominator yields an empty rate.
inline RateReport rates(const ConfusionCounts& c) {
    auto ratio = [](std::uint64_t num,
                    std::uint64_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    RateReport r;
    r.acc = ratio(c.ta + c.tr, c.total());
    r.prec = ratio(c.ta, c.ta + c.fa);
    r.tar = ratio(c.ta, c.ta + c.fr);
    r.trr = ratio(c.tr, c.tr + c.fa);
    r.far = ratio(c.fa, c.fa + c.tr);
    r.frr = ratio(c.fr, c.fr + c.ta);
    return r;
}

struct DelayResult {
    std::optional<std::size_t> windows;
    std::optional<double> minutes;
};

/// Delay until the decisions become correct and stay correct: the start of
/// the final all-correct suffix, provided that suffix spans at least
/// k_stable windows; empty when the trace never settles.
inline DelayResult authentication_delay(const SessionTrace& trace,
                                        std::span<const Actor> actors,
                                        std::size_t k_stable,
                                        double window_seconds) {
    if (trace.empty())
        throw InsufficientData("authentication_delay: empty trace");
    if (trace.size() != actors.size())
        throw InvalidArgument("authentication_delay: size mismatch");
    if (k_stable < 1)
        throw InvalidArgument("authentication_delay: k_stable must be >= 1");
    if (!(window_seconds > 0.0))
        throw InvalidArgument(
            "authentication_delay: window_seconds must be > 0");

    std::size_t start = 0;
    for (std::size_t i = trace.size(); i-- > 0;) {
        const bool correct =
            trace[i].accept == (actors[i] == Actor::Legitimate);
        if (!correct) {
            start = i + 1;
            break;
        }
    }
    DelayResult d;
    if (start + k_stable <= trace.size()) {
        d.windows = start;
        d.minutes = static_cast<double>(start) * window_seconds / 60.0;
    }
    return d;
}

/// Fraction of windows spent at each effective level, indexed level-1.
inline std::vector<double> level_occupancy(const SessionTrace& trace,
                                           const PrivilegeLadder& ladder) {
    if (trace.empty()) throw InsufficientData("level_occupancy: empty trace");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(ladder.n), 0);
    for (const TraceRecord& r : trace) {
        if (r.level < 1 || r.level > ladder.n)
            throw InvalidArgument("level_occupancy: level outside ladder");
        ++counts[static_cast<std::size_t>(r.level - 1)];
    }
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        out[i] = static_cast<double>(counts[i]) /
                 static_cast<double>(trace.size());
    return out;
}

struct Report {
    RateReport rates;
    DelayResult delay;
    std::vector<double> occupancy;  // empty for the baseline
};

inline Report make_report(const SessionTrace& trace,
                          std::span<const Actor> actors,
                          std::size_t k_stable, double window_seconds,
                          const std::optional<PrivilegeLadder>& ladder) {
    Report rep;
    rep.rates = rates(confusion(trace, actors));
    rep.delay = authentication_delay(trace, actors, k_stable, window_seconds);
    if (ladder) rep.occupancy = level_occupancy(trace, *ladder);
    return rep;
}

/// Flat report object; absent values are null. Occupancy fields are emitted
/// for n_levels levels, null when the report carries none (baseline).
inline nlohmann::ordered_json report_to_json(const Report& rep,
                                             std::size_t n_levels) {
    nlohmann::ordered_json j;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v)
            j[key] = *v;
        else
            j[key] = nullptr;
    };
    put("acc", rep.rates.acc);
    put("prec", rep.rates.prec);
    put("tar", rep.rates.tar);
    put("trr", rep.rates.trr);
    put("far", rep.rates.far);
    put("frr", rep.rates.frr);
    if (rep.delay.windows)
        j["delay_windows"] = *rep.delay.windows;
    else
        j["delay_windows"] = nullptr;
    put("delay_minutes", rep.delay.minutes);
    for (std::size_t k = 1; k <= n_levels; ++k) {
        const std::string key = "occupancy_" + std::to_string(k);
        if (k <= rep.occupancy.size())
            j[key] = rep.occupancy[k - 1];
        else
            j[key] = nullptr;
    }
    return j;
}

inline std::string report_csv_header(std::size_t n_levels) {
    std::string h = "acc,prec,tar,trr,far,frr,delay_windows,delay_minutes";
    for (std::size_t k = 1; k <= n_levels; ++k)
        h += ",occupancy_" + std::to_string(k);
    return h;
}

inline std::string report_csv_row(const Report& rep, std::size_t n_levels) {
    auto cell = [](const std::optional<double>& v) {
        return v ? fmt_double(*v) : std::string();
    };
    std::string row = cell(rep.rates.acc) + ',' + cell(rep.rates.prec) + ',' +
                      cell(rep.rates.tar) + ',' + cell(rep.rates.trr) + ',' +
                      cell(rep.rates.far) + ',' + cell(rep.rates.frr) + ',';
    if (rep.delay.windows) row += std::to_string(*rep.delay.windows);
    row += ',';
    row += cell(rep.delay.minutes);
    for (std::size_t k = 1; k <= n_levels; ++k) {
        row += ',';
        if (k <= rep.occupancy.size()) row += fmt_double(rep.occupancy[k - 1]);
    }
    return row;
}

}  // namespace mpc
