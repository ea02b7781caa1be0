#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "mpc/errors.hpp"

namespace mpc {

enum class DomainClass { Legitimate, Slack, Illegitimate };

inline const char* to_string(DomainClass c) {
    switch (c) {
        case DomainClass::Legitimate: return "legit";
        case DomainClass::Slack: return "slack";
        case DomainClass::Illegitimate: return "illegit";
    }
    return "?";
}

/// Three-way partition of [0,1]: [0,alpha] legitimate, (alpha,beta) slack,
/// [beta,1] illegitimate. theta keeps the two outer domains from colliding;
/// delta breaks ties when training populations touch.
class DomainPartition {
public:
    static constexpr double kBoundaryTol = 1e-12;

    DomainPartition(double alpha, double beta, double theta, double delta)
        : alpha_(alpha), beta_(beta), theta_(theta), delta_(delta) {
        if (!std::isfinite(alpha_) || !std::isfinite(beta_))
            throw InvalidArgument("DomainPartition: non-finite boundary");
        if (!(theta_ >= 0.0) || !(theta_ <= 1.0))
            throw InvalidArgument("DomainPartition: theta must be in [0,1]");
        if (!(delta_ > 0.0))
            throw InvalidArgument("DomainPartition: delta must be positive");
        if (alpha_ < 0.0 || beta_ > 1.0 ||
            alpha_ + theta_ > beta_ + kBoundaryTol)
            throw InvalidArgument(
                "DomainPartition: need 0 <= alpha, alpha + theta <= beta <= 1");
    }

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double theta() const noexcept { return theta_; }
    double delta() const noexcept { return delta_; }

private:
    double alpha_;
    double beta_;
    double theta_;
    double delta_;
};

inline DomainClass classify(const DomainPartition& p, double score) {
    if (!(score >= 0.0 && score <= 1.0))
        throw InvalidArgument("classify: score must be in [0,1]");
    if (score <= p.alpha()) return DomainClass::Legitimate;
    if (score >= p.beta()) return DomainClass::Illegitimate;
    return DomainClass::Slack;
}

/// Initial boundaries from labeled training scores:
///   alpha = min(max(legit), min(illegit) - delta)
///   beta  = max(min(illegit), max(legit) + delta)
/// clamped to [0,1]; alpha is pulled down to beta - theta if the margin is
/// violated, and the fully degenerate corner (beta < theta) collapses to
/// [0, theta].
inline DomainPartition init_boundaries(std::span<const double> legit_scores,
                                       std::span<const double> illegit_scores,
                                       double delta, double theta) {
    if (legit_scores.empty() || illegit_scores.empty())
        throw InsufficientData(
            "init_boundaries: both training score lists must be non-empty");
    auto check = [](std::span<const double> xs, const char* side) {
        for (double x : xs)
            if (!(x >= 0.0 && x <= 1.0))
                throw InvalidArgument(std::string("init_boundaries: ") + side +
                                      " score outside [0,1]");
    };
    check(legit_scores, "legitimate");
    check(illegit_scores, "illegitimate");

    const double max_l =
        *std::max_element(legit_scores.begin(), legit_scores.end());
    const double min_i =
        *std::min_element(illegit_scores.begin(), illegit_scores.end());

    double alpha = std::min(max_l, min_i - delta);
    double beta = std::max(min_i, max_l + delta);
    alpha = std::clamp(alpha, 0.0, 1.0);
    beta = std::clamp(beta, 0.0, 1.0);
    if (alpha + theta > beta) alpha = beta - theta;
    if (alpha < 0.0) {
        alpha = 0.0;
        beta = std::min(theta, 1.0);
    }
    return DomainPartition(alpha, beta, theta, delta);
}

inline DomainPartition expand_legitimate(const DomainPartition& p, double s) {
    if (!(s >= 0.0))
        throw InvalidArgument("expand_legitimate: distance must be >= 0");
    // outer max keeps the domain monotone when alpha already sits within
    // rounding of the beta - theta cap
    const double alpha =
        std::max(p.alpha(), std::min(p.alpha() + s, p.beta() - p.theta()));
    return DomainPartition(alpha, p.beta(), p.theta(), p.delta());
}

inline DomainPartition expand_illegitimate(const DomainPartition& p,
                                           double s) {
    if (!(s >= 0.0))
        throw InvalidArgument("expand_illegitimate: distance must be >= 0");
    const double beta =
        std::min(p.beta(), std::max(p.beta() - s, p.alpha() + p.theta()));
    return DomainPartition(p.alpha(), beta, p.theta(), p.delta());
}

}  // namespace mpc
