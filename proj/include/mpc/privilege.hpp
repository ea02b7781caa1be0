#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>

#include "mpc/domains.hpp"
#include "mpc/errors.hpp"
#include "mpc/score_model.hpp"

namespace mpc {

/// Ladder of n privilege levels R_1..R_n with spacing l; level k sits at
/// position (k-1)*l. R_1 grants full access, R_n locks the device.
struct PrivilegeLadder {
    int n = 4;
    double l = 1.0;

    PrivilegeLadder(int levels, double spacing) : n(levels), l(spacing) {
        if (n < 2) throw InvalidArgument("PrivilegeLadder: need n >= 2");
        if (!(l > 0.0) || !std::isfinite(l))
            throw InvalidArgument("PrivilegeLadder: spacing must be positive");
    }

    double bottom() const noexcept { return (n - 1) * l; }
};

class PrivilegeState {
public:
    PrivilegeState(PrivilegeLadder ladder, double position)
        : ladder_(ladder), position_(position) {
        if (!(position_ >= 0.0 && position_ <= ladder_.bottom()))
            throw InvalidArgument(
                "PrivilegeState: position outside [0, (n-1)*l]");
    }

    const PrivilegeLadder& ladder() const noexcept { return ladder_; }
    double position() const noexcept { return position_; }

private:
    PrivilegeLadder ladder_;
    double position_;
};

/// A position between two levels carries the access rights of the lower
/// (less privileged) level; positions within rounding of a level boundary
/// snap to that level. Level n is reached only at the exact ladder bottom,
/// so any interior position still maps to an observation level.
inline int effective_level(const PrivilegeState& s) {
    const PrivilegeLadder& lad = s.ladder();
    const double snap = 1e-9;
    if (s.position() >= lad.bottom() - snap * lad.l) return lad.n;
    const double q = s.position() / lad.l;
    int k = 1 + static_cast<int>(std::ceil(q - snap));
    return std::clamp(k, 1, lad.n - 1);
}

inline bool is_locked(const PrivilegeState& s) {
    return effective_level(s) == s.ladder().n;
}

inline PrivilegeState reset_to_top(const PrivilegeState& s) {
    return PrivilegeState(s.ladder(), 0.0);
}

/// Sliding window over recent domain classifications, newest last. Slack
/// entries are recorded but never decisive.
class EvidenceWindow {
public:
    explicit EvidenceWindow(std::size_t lookback) : lookback_(lookback) {
        if (lookback_ < 1)
            throw InvalidArgument("EvidenceWindow: lookback must be >= 1");
    }

    void push(DomainClass c) {
        entries_.push_back(c);
        if (entries_.size() > lookback_) entries_.pop_front();
    }

    std::size_t lookback() const noexcept { return lookback_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Most recent non-slack class, if any.
    std::optional<DomainClass> last_decisive() const {
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
            if (*it != DomainClass::Slack) return *it;
        return std::nullopt;
    }

    /// Majority vote over non-slack entries; ties and empty windows are
    /// indecisive.
    std::optional<DomainClass> majority_decisive() const {
        std::size_t legit = 0, illegit = 0;
        for (DomainClass c : entries_) {
            if (c == DomainClass::Legitimate) ++legit;
            if (c == DomainClass::Illegitimate) ++illegit;
        }
        if (legit > illegit) return DomainClass::Legitimate;
        if (illegit > legit) return DomainClass::Illegitimate;
        return std::nullopt;
    }

private:
    std::size_t lookback_;
    std::deque<DomainClass> entries_;
};

struct MovementDistances {
    double mu_l = 0.5;
    double mu_a = 1.0;
};

enum class MovementMode { Gradual, Jump };
enum class EvidencePolicy { MostRecent, Majority };

/// One privilege-movement cycle: legitimate scores move up by mu_l,
/// illegitimate scores move down by mu_a, slack scores move in the direction
/// of the decisive evidence (or hold without any). Jump mode goes straight
/// to the top or bottom instead of stepping. The classification is appended
/// to the evidence window afterwards.
inline PrivilegeState movement_step(
    const PrivilegeState& state, DomainClass cls, EvidenceWindow& evidence,
    const MovementDistances& dist,
    MovementMode mode = MovementMode::Gradual,
    EvidencePolicy policy = EvidencePolicy::MostRecent) {
    if (!(dist.mu_l > 0.0) || !(dist.mu_a > 0.0))
        throw InvalidArgument("movement_step: distances must be positive");

    std::optional<DomainClass> direction;
    if (cls == DomainClass::Slack) {
        direction = policy == EvidencePolicy::MostRecent
                        ? evidence.last_decisive()
                        : evidence.majority_decisive();
    } else {
        direction = cls;
    }

    double position = state.position();
    const double bottom = state.ladder().bottom();
    if (direction == DomainClass::Legitimate) {
        position = mode == MovementMode::Jump
                       ? 0.0
                       : std::max(position - dist.mu_l, 0.0);
    } else if (direction == DomainClass::Illegitimate) {
        position = mode == MovementMode::Jump
                       ? bottom
                       : std::min(position + dist.mu_a, bottom);
    }
    evidence.push(cls);
    return PrivilegeState(state.ladder(), position);
}

struct RatioClamp {
    double r_min = 0.1;
    double r_max = 10.0;
    double eps_div = 1e-9;
};

/// Rescales the movement distances by how exclusively each outer domain is
/// occupied by its own population:
///   mu_l *= clamp(legit mass in [0,alpha] / illegit mass in [0,alpha])
///   mu_a *= clamp(illegit mass in [beta,1] / legit mass in [beta,1])
/// A vanishing denominator counts as maximal separation and takes r_max.
inline MovementDistances adjust_distances(const MovementDistances& dist,
                                          const KdeModel& legit_kde,
                                          const KdeModel& illegit_kde,
                                          const DomainPartition& partition,
                                          const RatioClamp& clamp = {}) {
    if (!(clamp.r_min > 0.0) || !(clamp.r_max >= clamp.r_min))
        throw InvalidArgument("adjust_distances: invalid clamp range");
    auto ratio = [&](double num, double den) {
        if (den < clamp.eps_div) return clamp.r_max;
        return std::clamp(num / den, clamp.r_min, clamp.r_max);
    };
    const double a = partition.alpha();
    const double b = partition.beta();
    const double rl = ratio(kde_integral(legit_kde, 0.0, a),
                            kde_integral(illegit_kde, 0.0, a));
    const double ra = ratio(kde_integral(illegit_kde, b, 1.0),
                            kde_integral(legit_kde, b, 1.0));
    return {dist.mu_l * rl, dist.mu_a * ra};
}

}  // namespace mpc
