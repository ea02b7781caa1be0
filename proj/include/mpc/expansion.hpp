#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "mpc/errors.hpp"

namespace mpc {

/// Tuning constants for the feedback-driven domain expansion.
struct ExpansionParams {
    double w2 = 0.05;        // baseline acceleration term
    double theta = 0.02;     // anti-collision margin, also damps resistance
    double v0 = 0.0;         // initial expansion velocity
    double sigma_a = 0.05;   // process-noise magnitude
    double r_obs = 0.01;     // observation-noise covariance
    double rescale = 1.0;    // filtered state -> score scale
    double w1_floor = 0.05;  // lower clamp on the balancing parameter
    double rd_floor = 0.5;   // lower clamp on R_d in the wrong-password input
};

/// Second-factor feedback tallies. n_l and n_a count correct and wrong
/// password entries on slack-domain scores; cycles counts every
/// authentication window elapsed.
struct FeedbackCounters {
    std::uint64_t n_l = 0;
    std::uint64_t n_a = 0;
    std::uint64_t cycles = 0;
};

/// W1 = (n_l + n_a) / cycles, floored away from zero so it can divide.
inline double balancing_w1(const FeedbackCounters& c, double w1_floor) {
    if (c.cycles == 0)
        throw InsufficientData("balancing_w1: no cycles elapsed");
    const double frac = static_cast<double>(c.n_l + c.n_a) /
                        static_cast<double>(c.cycles);
    return std::max(frac, w1_floor);
}

/// a = R_d * eps / W1 + W2 + delta_noise
inline double acceleration(double r_d, double eps, double w1, double w2,
                           double delta_noise) {
    if (!(r_d >= 0.0)) throw InvalidArgument("acceleration: R_d must be >= 0");
    if (!(w1 > 0.0)) throw InvalidArgument("acceleration: W1 must be > 0");
    return r_d * eps / w1 + w2 + delta_noise;
}

/// a_hat = a * (mass + theta), the braking term fed by how much illegitimate
/// probability mass already sits inside the legitimate domain.
inline double resistance(double a, double illegit_mass_in_legit,
                         double theta) {
    if (!(illegit_mass_in_legit >= 0.0 && illegit_mass_in_legit <= 1.0))
        throw InvalidArgument("resistance: mass must be in [0,1]");
    return a * (illegit_mass_in_legit + theta);
}

/// S = (a - a_hat) * t^2 / 2 + v0 * t
inline double expansion_distance(double a, double a_hat, int t, double v0) {
    if (t < 1) throw InvalidArgument("expansion_distance: t must be >= 1");
    const double td = static_cast<double>(t);
    return 0.5 * (a - a_hat) * td * td + v0 * td;
}

/// Control input for the expansion filter. A correct password accelerates
/// the legitimate domain, scaled by the stop factor V; a wrong password
/// accelerates the illegitimate domain with R_d floored so it can divide.
inline double control_input(double r_d, double eps_gap, double w1, double w2,
                            double v, bool password_correct,
                            double rd_floor) {
    if (!(w1 > 0.0)) throw InvalidArgument("control_input: W1 must be > 0");
    if (password_correct) return (r_d * eps_gap / w1 + w2) * v;
    return eps_gap / (std::max(r_d, rd_floor) * w1) + w2;
}

/// Constant-velocity Kalman state: x = (expansion estimate, velocity),
/// P row-major 2x2 covariance.
struct KalmanState {
    std::array<double, 2> x{0.0, 0.0};
    std::array<double, 4> p{1.0, 0.0, 0.0, 1.0};

    double& p00() noexcept { return p[0]; }
    double& p01() noexcept { return p[1]; }
    double& p10() noexcept { return p[2]; }
    double& p11() noexcept { return p[3]; }
    double p00() const noexcept { return p[0]; }
    double p01() const noexcept { return p[1]; }
    double p10() const noexcept { return p[2]; }
    double p11() const noexcept { return p[3]; }
};

/// x' = F x + B u with F = [[1,t],[0,1]], B = [t^2/2, t];
/// P' = F P F^T + Q, Q = [[t^4/4, t^3/2], [t^3/2, t^2]] * sigma_a^2.
inline KalmanState kalman_predict(const KalmanState& s, double t, double u_k,
                                  double sigma_a) {
    if (!(t > 0.0)) throw InvalidArgument("kalman_predict: t must be > 0");
    const double s2 = sigma_a * sigma_a;
    const double t2 = t * t;
    KalmanState n;
    n.x[0] = s.x[0] + t * s.x[1] + 0.5 * t2 * u_k;
    n.x[1] = s.x[1] + t * u_k;
    n.p[0] = s.p[0] + t * (s.p[2] + s.p[1]) + t2 * s.p[3] + 0.25 * t2 * t2 * s2;
    n.p[1] = s.p[1] + t * s.p[3] + 0.5 * t2 * t * s2;
    n.p[2] = s.p[2] + t * s.p[3] + 0.5 * t2 * t * s2;
    n.p[3] = s.p[3] + t2 * s2;
    return n;
}

/// Scalar-measurement update with H = [1, 0]:
/// K = P H^T / (H P H^T + r), x' = x + K (z - x[0]), P' = (I - K H) P.
inline KalmanState kalman_update(const KalmanState& s, double z_k,
                                 double r_obs) {
    if (!(r_obs > 0.0))
        throw InvalidArgument("kalman_update: r_obs must be > 0");
    const double innov_cov = s.p[0] + r_obs;
    const double k0 = s.p[0] / innov_cov;
    const double k1 = s.p[2] / innov_cov;
    const double resid = z_k - s.x[0];
    KalmanState n;
    n.x[0] = s.x[0] + k0 * resid;
    n.x[1] = s.x[1] + k1 * resid;
    n.p[0] = (1.0 - k0) * s.p[0];
    n.p[1] = (1.0 - k0) * s.p[1];
    n.p[2] = s.p[2] - k1 * s.p[0];
    n.p[3] = s.p[3] - k1 * s.p[1];
    return n;
}

enum class FilterMode { StateEstimate, PaperLiteral };

/// Expansion distance read off the filter: the posterior state estimate by
/// default, or the covariance projection P H^T in paper-literal mode. Never
/// negative.
inline double filtered_expansion(const KalmanState& s, FilterMode mode,
                                 double rescale) {
    if (!(rescale > 0.0))
        throw InvalidArgument("filtered_expansion: rescale must be > 0");
    const double raw = mode == FilterMode::StateEstimate ? s.x[0] : s.p[0];
    return std::max(raw, 0.0) * rescale;
}

/// True when password prompts exceed the tau fraction of recent cycles,
/// meaning the deployed score model no longer fits the user.
inline bool retrain_signal(std::size_t password_events, std::size_t window,
                           double tau) {
    if (window < 1) throw InvalidArgument("retrain_signal: window must be >= 1");
    return static_cast<double>(password_events) /
               static_cast<double>(window) >
           tau;
}

}  // namespace mpc
