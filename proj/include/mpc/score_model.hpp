#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "mpc/errors.hpp"

namespace mpc {

enum class Actor { Legitimate, Illegitimate };

/// One behavior score observed in a single authentication window. The actor
/// label is ground truth carried for evaluation only; the engine never reads
/// it.
struct ScoreSample {
    std::size_t window = 0;
    double score = 0.0;
    Actor actor = Actor::Legitimate;
};

// ---------------------------------------------------------------------------
// Gaussian helpers shared by the density model and the scenario generator.
// ---------------------------------------------------------------------------

inline double normal_pdf(double z) {
    constexpr double inv_sqrt_2pi = 0.3989422804014327;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

inline double normal_cdf(double z) {
    if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Inverse standard-normal CDF by bisection on normal_cdf. Only used at
/// configuration time (overlap calibration), so speed is irrelevant.
inline double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw InvalidArgument("normal_quantile: q must be in (0,1)");
    double lo = -12.0, hi = 12.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Platt calibration: margins -> probabilistic scores.
// ---------------------------------------------------------------------------

/// Parameters of the sigmoid 1/(1 + exp(A*margin + B)).
struct PlattParams {
    double a = 0.0;
    double b = 0.0;
};

/// Maps a classifier margin to a probabilistic score, strictly inside (0,1).
inline double platt_score(double margin, const PlattParams& p) {
    if (!std::isfinite(margin) || !std::isfinite(p.a) || !std::isfinite(p.b))
        throw InvalidArgument("platt_score: non-finite input");
    const double t = p.a * margin + p.b;
    double s;
    if (t >= 0.0) {
        const double e = std::exp(-t);
        s = e / (1.0 + e);
    } else {
        s = 1.0 / (1.0 + std::exp(t));
    }
    // exp saturation would otherwise produce exactly 0 or 1
    constexpr double lo = std::numeric_limits<double>::min();
    constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
    return std::clamp(s, lo, hi);
}

namespace detail {

// Negative log-likelihood with regularized targets; model 1/(1+exp(A*f+B)).
inline double platt_objective(std::span<const double> margins,
                              std::span<const double> targets, double a,
                              double b) {
    double fval = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        const double fApB = margins[i] * a + b;
        if (fApB >= 0.0)
            fval += targets[i] * fApB + std::log1p(std::exp(-fApB));
        else
            fval += (targets[i] - 1.0) * fApB + std::log1p(std::exp(fApB));
    }
    return fval;
}

}  // namespace detail

/// Fits sigmoid parameters by damped Newton iteration on the regularized
/// cross-entropy (the standard calibration procedure). Labels are +1/-1;
/// the fitted model gives the probability of the +1 class. Deterministic.
///
/// When every margin is identical the slope is unidentifiable; A = 0 is
/// returned with B matching the regularized base rate.
inline PlattParams fit_platt(std::span<const double> margins,
                             std::span<const int> labels) {
    if (margins.size() != labels.size())
        throw InvalidArgument("fit_platt: margins/labels size mismatch");
    if (margins.size() < 2)
        throw InsufficientData("fit_platt: need at least 2 samples");

    std::size_t prior1 = 0, prior0 = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!std::isfinite(margins[i]))
            throw InvalidArgument("fit_platt: non-finite margin");
        if (labels[i] == 1)
            ++prior1;
        else if (labels[i] == -1)
            ++prior0;
        else
            throw InvalidArgument("fit_platt: labels must be +1 or -1");
    }
    if (prior1 == 0 || prior0 == 0)
        throw DegenerateLabels("fit_platt: both classes required");

    const double hi_target = (static_cast<double>(prior1) + 1.0) /
                             (static_cast<double>(prior1) + 2.0);
    const double lo_target = 1.0 / (static_cast<double>(prior0) + 2.0);
    std::vector<double> targets(margins.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        targets[i] = labels[i] == 1 ? hi_target : lo_target;

    const bool flat =
        std::all_of(margins.begin(), margins.end(),
                    [&](double m) { return m == margins.front(); });
    if (flat) {
        double mean_t = 0.0;
        for (double t : targets) mean_t += t;
        mean_t /= static_cast<double>(targets.size());
        return {0.0, std::log((1.0 - mean_t) / mean_t)};
    }

    constexpr int max_iter = 100;
    constexpr double min_step = 1e-10;
    constexpr double ridge = 1e-12;
    constexpr double grad_tol = 1e-5;

    double a = 0.0;
    double b = std::log((static_cast<double>(prior0) + 1.0) /
                        (static_cast<double>(prior1) + 1.0));
    double fval = detail::platt_objective(margins, targets, a, b);

    for (int iter = 0; iter < max_iter; ++iter) {
        double h11 = ridge, h22 = ridge, h21 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < margins.size(); ++i) {
            const double fApB = margins[i] * a + b;
            double p, q;
            if (fApB >= 0.0) {
                p = std::exp(-fApB) / (1.0 + std::exp(-fApB));
                q = 1.0 / (1.0 + std::exp(-fApB));
            } else {
                p = 1.0 / (1.0 + std::exp(fApB));
                q = std::exp(fApB) / (1.0 + std::exp(fApB));
            }
            const double d2 = p * q;
            h11 += margins[i] * margins[i] * d2;
            h22 += d2;
            h21 += margins[i] * d2;
            const double d1 = targets[i] - p;
            g1 += margins[i] * d1;
            g2 += d1;
        }
        if (std::abs(g1) < grad_tol && std::abs(g2) < grad_tol) break;

        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;

        double step = 1.0;
        while (step >= min_step) {
            const double na = a + step * da;
            const double nb = b + step * db;
            const double nf = detail::platt_objective(margins, targets, na, nb);
            if (nf < fval + 1e-4 * step * gd) {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if (step < min_step) break;  // line search failed; keep best point
    }
    return {a, b};
}

// ---------------------------------------------------------------------------
// One-dimensional Gaussian kernel density model over behavior scores.
// ---------------------------------------------------------------------------

class KdeModel {
public:
    KdeModel(std::vector<double> samples, double bandwidth)
        : samples_(std::move(samples)), bandwidth_(bandwidth) {
        if (samples_.empty())
            throw InsufficientData("KdeModel: samples must be non-empty");
        if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_))
            throw InvalidArgument("KdeModel: bandwidth must be positive");
    }

    /// Silverman-style bandwidth 1.06 * sigma * N^(-1/5), floored at
    /// min_bandwidth so degenerate samples stay usable.
    static KdeModel fit(std::vector<double> samples,
                        double min_bandwidth = 1e-3) {
        if (samples.empty())
            throw InsufficientData("KdeModel::fit: samples must be non-empty");
        const double n = static_cast<double>(samples.size());
        double mean = 0.0;
        for (double s : samples) mean += s;
        mean /= n;
        double var = 0.0;
        for (double s : samples) var += (s - mean) * (s - mean);
        if (samples.size() > 1) var /= (n - 1.0);
        const double h = 1.06 * std::sqrt(var) * std::pow(n, -0.2);
        return KdeModel(std::move(samples), std::max(h, min_bandwidth));
    }

    const std::vector<double>& samples() const noexcept { return samples_; }
    double bandwidth() const noexcept { return bandwidth_; }

private:
    std::vector<double> samples_;
    double bandwidth_;
};

/// Density p(x) = (1/N) sum_n N(x; x_n, h^2).
inline double kde_density(const KdeModel& model, double x) {
    const double h = model.bandwidth();
    double sum = 0.0;
    for (double xn : model.samples()) sum += normal_pdf((x - xn) / h) / h;
    return sum / static_cast<double>(model.samples().size());
}

/// Probability mass on [lo, hi] as the exact per-kernel Gaussian CDF sum.
/// Mass outside [0,1] is not renormalized. Infinite bounds are accepted.
inline double kde_integral(const KdeModel& model, double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
        throw InvalidArgument("kde_integral: invalid range");
    const double h = model.bandwidth();
    double sum = 0.0;
    for (double xn : model.samples())
        sum += normal_cdf((hi - xn) / h) - normal_cdf((lo - xn) / h);
    return sum / static_cast<double>(model.samples().size());
}

}  // namespace mpc
