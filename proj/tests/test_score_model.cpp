#include <mpc/rng.hpp>
#include <mpc/score_model.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace {

using mpc::fit_platt;
using mpc::KdeModel;
using mpc::PlattParams;
using mpc::platt_score;
using mpc::Rng;

TEST(NormalHelpers, PdfPeak) {
    EXPECT_NEAR(mpc::normal_pdf(0.0), 0.3989422804014327, 1e-15);
    EXPECT_NEAR(mpc::normal_pdf(1.0), 0.24197072451914337, 1e-15);
}

TEST(NormalHelpers, CdfSymmetry) {
    EXPECT_DOUBLE_EQ(mpc::normal_cdf(0.0), 0.5);
    for (double z : {0.3, 1.0, 2.5, 7.0}) {
        EXPECT_NEAR(mpc::normal_cdf(z) + mpc::normal_cdf(-z), 1.0, 1e-14);
    }
}

TEST(NormalHelpers, QuantileRoundTrip) {
    EXPECT_NEAR(mpc::normal_quantile(0.975), 1.959963984540054, 1e-9);
    for (double q : {0.01, 0.2, 0.5, 0.77, 0.999}) {
        EXPECT_NEAR(mpc::normal_cdf(mpc::normal_quantile(q)), q, 1e-12);
    }
}

TEST(PlattScore, KnownValues) {
    EXPECT_DOUBLE_EQ(platt_score(0.0, {1.0, 0.0}), 0.5);
    EXPECT_DOUBLE_EQ(platt_score(1.0, {-2.0, 0.0}), 0.8807970779778823);
    EXPECT_DOUBLE_EQ(platt_score(2.0, {1.0, -1.0}),
                     1.0 / (1.0 + std::exp(1.0)));
}

TEST(PlattScore, StrictOpenInterval) {
    for (double m : {-1e6, -50.0, 0.0, 50.0, 1e6}) {
        const double s = platt_score(m, {3.0, 1.0});
        EXPECT_GT(s, 0.0);
        EXPECT_LT(s, 1.0);
    }
    EXPECT_LT(platt_score(1e6, {2.0, 0.0}), 1e-300);
    EXPECT_GT(platt_score(-1e6, {2.0, 0.0}), 1.0 - 1e-15);
}

TEST(PlattScore, MonotoneInMargin) {
    const PlattParams p{1.7, -0.4};
    double prev = platt_score(-8.0, p);
    for (double m = -7.75; m <= 8.0; m += 0.25) {
        const double cur = platt_score(m, p);
        EXPECT_LT(cur, prev) << "margin " << m;
        prev = cur;
    }
}

TEST(PlattScore, RejectsNonFinite) {
    EXPECT_THROW(platt_score(std::numeric_limits<double>::quiet_NaN(), {1, 0}),
                 mpc::InvalidArgument);
    EXPECT_THROW(platt_score(0.0, {std::numeric_limits<double>::infinity(), 0}),
                 mpc::InvalidArgument);
}

TEST(FitPlatt, SymmetricPairGivesZeroIntercept) {
    std::vector<double> margins;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        margins.push_back(-1.0);
        labels.push_back(+1);
        margins.push_back(+1.0);
        labels.push_back(-1);
    }
    const PlattParams p = fit_platt(margins, labels);
    EXPECT_GT(p.a, 0.0);
    EXPECT_NEAR(p.b, 0.0, 1e-6);
}

TEST(FitPlatt, FlatLikelihoodKeepsSlopeAtZero) {
    Rng rng(17);
    std::vector<double> margins;
    std::vector<int> labels;
    for (int i = 0; i < 500; ++i) {
        const double m = rng.uniform() * 4.0 - 2.0;
        margins.push_back(m);
        labels.push_back(+1);
        margins.push_back(m);
        labels.push_back(-1);
    }
    const PlattParams p = fit_platt(margins, labels);
    EXPECT_LT(std::fabs(p.a), 1e-3);
}

TEST(FitPlatt, IdenticalMarginsFitPriorOnly) {
    const std::vector<double> margins(12, 0.7);
    std::vector<int> labels(12, -1);
    labels[0] = labels[1] = labels[2] = +1;
    const PlattParams p = fit_platt(margins, labels);
    EXPECT_DOUBLE_EQ(p.a, 0.0);
    const double hi = (3.0 + 1.0) / (3.0 + 2.0);
    const double lo = 1.0 / (9.0 + 2.0);
    const double tbar = (3.0 * hi + 9.0 * lo) / 12.0;
    EXPECT_NEAR(p.b, std::log((1.0 - tbar) / tbar), 1e-12);
}

TEST(FitPlatt, CalibratedFrequencies) {
    Rng rng(99);
    std::vector<double> margins;
    std::vector<int> labels;
    std::size_t positives = 0;
    for (int i = 0; i < 2000; ++i) {
        const double m = rng.normal();
        const double q = 1.0 / (1.0 + std::exp(1.5 * m - 0.2));
        const bool pos = rng.bernoulli(q);
        margins.push_back(m);
        labels.push_back(pos ? +1 : -1);
        positives += pos ? 1 : 0;
    }
    const PlattParams p = fit_platt(margins, labels);
    double mean_score = 0.0;
    for (double m : margins) mean_score += platt_score(m, p);
    mean_score /= static_cast<double>(margins.size());
    const double freq = static_cast<double>(positives) /
                        static_cast<double>(margins.size());
    EXPECT_NEAR(mean_score, freq, 0.05);
    EXPECT_GT(p.a, 0.0);
}

TEST(FitPlatt, RejectsDegenerateInput) {
    const std::vector<double> two{1.0, 2.0};
    const std::vector<double> none;
    EXPECT_THROW(fit_platt(two, std::vector<int>{1}), mpc::InvalidArgument);
    EXPECT_THROW(fit_platt(none, std::vector<int>{}), mpc::InsufficientData);
    EXPECT_THROW(fit_platt(two, std::vector<int>{1, 1}), mpc::DegenerateLabels);
    EXPECT_THROW(fit_platt(two, std::vector<int>{-1, -1}),
                 mpc::DegenerateLabels);
    EXPECT_THROW(fit_platt(two, std::vector<int>{1, 0}), mpc::InvalidArgument);
}

TEST(Kde, SingleKernelPeak) {
    const KdeModel m({0.5}, 0.1);
    EXPECT_NEAR(kde_density(m, 0.5), 3.989422804014327, 1e-12);
    EXPECT_LT(kde_density(m, 1.6), 1e-20);
}

TEST(Kde, SymmetricSamples) {
    const KdeModel m({0.4, 0.6}, 0.05);
    for (double d : {0.01, 0.07, 0.2, 0.55}) {
        const double lo = kde_density(m, 0.5 - d);
        const double hi = kde_density(m, 0.5 + d);
        EXPECT_NEAR(lo, hi, 1e-12 * std::max(lo, 1.0));
    }
}

TEST(Kde, DensityMatchesDirectSum) {
    Rng rng(4);
    std::vector<double> samples;
    for (int i = 0; i < 50; ++i) samples.push_back(rng.uniform());
    const double h = 0.07;
    const KdeModel m(samples, h);
    const double norm = 1.0 / (static_cast<double>(samples.size()) * h *
                               std::sqrt(2.0 * 3.14159265358979323846));
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform() * 2.0 - 0.5;
        double direct = 0.0;
        for (double s : samples) {
            const double z = (x - s) / h;
            direct += std::exp(-0.5 * z * z);
        }
        direct *= norm;
        EXPECT_NEAR(kde_density(m, x), direct, 1e-12);
    }
}

TEST(Kde, IntegralKnownMass) {
    const KdeModel m({0.5}, 0.1);
    EXPECT_NEAR(kde_integral(m, 0.4, 0.6), 0.6826894921370859, 1e-12);
    EXPECT_DOUBLE_EQ(kde_integral(m, 0.37, 0.37), 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_NEAR(kde_integral(m, -inf, inf), 1.0, 1e-9);
}

TEST(Kde, IntegralAdditiveAndTotal) {
    Rng rng(11);
    std::vector<double> samples;
    for (int i = 0; i < 80; ++i) samples.push_back(rng.uniform());
    const KdeModel m = KdeModel::fit(samples);
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_NEAR(kde_integral(m, -inf, inf), 1.0, 1e-9);
    for (int i = 0; i < 200; ++i) {
        double a = rng.uniform() * 2.0 - 0.5;
        double b = rng.uniform() * 2.0 - 0.5;
        if (a > b) std::swap(a, b);
        const double mid = a + (b - a) * rng.uniform();
        const double whole = kde_integral(m, a, b);
        const double parts = kde_integral(m, a, mid) + kde_integral(m, mid, b);
        EXPECT_NEAR(whole, parts, 1e-12);
    }
}

TEST(Kde, IntegralRejectsBadBounds) {
    const KdeModel m({0.5}, 0.1);
    EXPECT_THROW(kde_integral(m, 0.6, 0.4), mpc::InvalidArgument);
    EXPECT_THROW(kde_integral(m, std::numeric_limits<double>::quiet_NaN(), 1.0),
                 mpc::InvalidArgument);
}

TEST(Kde, SilvermanBandwidth) {
    Rng rng(23);
    std::vector<double> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(0.4 + 0.1 * rng.normal());
    const KdeModel m = KdeModel::fit(samples);

    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size() - 1);
    const double expected =
        1.06 * std::sqrt(var) *
        std::pow(static_cast<double>(samples.size()), -0.2);
    EXPECT_NEAR(m.bandwidth(), expected, 1e-12);
}

TEST(Kde, BandwidthFloorOnDegenerateSamples) {
    const KdeModel m = KdeModel::fit({0.3, 0.3, 0.3, 0.3});
    EXPECT_DOUBLE_EQ(m.bandwidth(), 1e-3);
    EXPECT_THROW(KdeModel::fit({}), mpc::InsufficientData);
    EXPECT_THROW(KdeModel({0.5}, 0.0), mpc::InvalidArgument);
    EXPECT_THROW(KdeModel({0.5}, -1.0), mpc::InvalidArgument);
}

}  // namespace
