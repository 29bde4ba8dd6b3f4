#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "wdep/bootstrap.hpp"
#include "wdep/processes.hpp"
#include "wdep/stats.hpp"

using namespace wdep;

namespace {

std::vector<double> ar_sample(std::vector<double> theta, std::size_t n, std::uint64_t seed,
                              InnovationDist d = InnovationDist::gaussian(1.0)) {
    return simulate(ARModel(std::move(theta), std::move(d)), n, std::nullopt, seed).values;
}

ARFit fixed_fit(std::vector<double> theta) {
    ARFit fit;
    fit.theta_hat = std::move(theta);
    fit.residuals_raw = {0.5, -0.5, 1.0, -1.0};
    fit.residuals_centered = fit.residuals_raw;
    return fit;
}

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

}  // namespace

TEST(Recenter, Examples) {
    EXPECT_EQ(recenter(std::vector<double>{1, 2, 3}), (std::vector<double>{-1, 0, 1}));
    EXPECT_EQ(recenter(std::vector<double>{-1, 0, 1}), (std::vector<double>{-1, 0, 1}));
    EXPECT_EQ(recenter(std::vector<double>{5}), (std::vector<double>{0}));
}

TEST(Recenter, IdempotentAndMeanAnnihilating) {
    Rng rng(1, 0);
    std::vector<double> raw(1001);
    for (double& v : raw) v = 3.0 + rng.normal();
    const auto once = recenter(raw);
    double maxabs = 0.0;
    for (double v : raw) maxabs = std::max(maxabs, std::abs(v));
    EXPECT_LE(std::abs(mean_of(once)), 1e-12 * maxabs);
    const auto twice = recenter(once);
    for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_NEAR(twice[i], once[i], 1e-14);
}

TEST(YuleWalker, Order1IsAutocovarianceRatio) {
    const auto x = ar_sample({0.5}, 3000, 2);
    const double m = mean_of(x);
    double g0 = 0.0, g1 = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) g0 += (x[t] - m) * (x[t] - m);
    for (std::size_t t = 0; t + 1 < x.size(); ++t) g1 += (x[t] - m) * (x[t + 1] - m);
    EXPECT_DOUBLE_EQ(fit_yule_walker(x, 1).theta_hat[0], (g1 / 3000.0) / (g0 / 3000.0));
}

TEST(YuleWalker, CoverageAt1e5) {
    int covered = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto fit = fit_yule_walker(ar_sample({0.5}, 100000, 100 + s), 1);
        covered += std::abs(fit.theta_hat[0] - 0.5) <= 0.02;
    }
    EXPECT_EQ(covered, 100);
}

TEST(YuleWalker, ResidualShapeAndErrors) {
    const auto x = ar_sample({0.5, 0.25}, 1000, 3);
    const auto fit = fit_yule_walker(x, 2);
    EXPECT_EQ(fit.residuals_raw.size(), 998u);
    EXPECT_EQ(fit.residuals_centered.size(), 998u);
    EXPECT_THROW(fit_yule_walker(std::vector<double>(100, 1.5), 1), std::domain_error);
    EXPECT_THROW(fit_yule_walker(std::vector<double>(15, 1.0), 2), std::invalid_argument);
}

TEST(YuleWalker, WhiteNoiseEstimateShrinks) {
    const double small = std::abs(fit_yule_walker(ar_sample({0.0}, 1000, 4), 1).theta_hat[0]);
    const double large = std::abs(fit_yule_walker(ar_sample({0.0}, 1000000, 4), 1).theta_hat[0]);
    EXPECT_LT(large, 5.0 / std::sqrt(1e6));
    EXPECT_LT(small, 5.0 / std::sqrt(1e3));
}

TEST(LeastSquares, Ar2Coverage) {
    const auto fit = fit_least_squares(ar_sample({0.5, 0.25}, 100000, 5), 2);
    EXPECT_NEAR(fit.theta_hat[0], 0.5, 0.02);
    EXPECT_NEAR(fit.theta_hat[1], 0.25, 0.02);
    EXPECT_FALSE(fit.underdetermined_risk);
}

TEST(LeastSquares, ExactFitCornerFlagged) {
    const std::vector<double> x{1.0, 0.7};
    const auto fit = fit_least_squares(x, 1);
    EXPECT_NEAR(fit.theta_hat[0], 0.7, 1e-15);
    EXPECT_NEAR(fit.residuals_raw[0], 0.0, 1e-15);
    EXPECT_TRUE(fit.underdetermined_risk);
    EXPECT_TRUE(fit_least_squares(std::vector<double>{1.0, -0.4, 0.3}, 2).underdetermined_risk);
}

TEST(LeastSquares, AgreesWithYuleWalkerToOrderOneOverN) {
    const std::size_t n = 10000;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto x = ar_sample({0.5, 0.25}, n, 200 + s);
        const auto yw = fit_yule_walker(x, 2);
        const auto ls = fit_least_squares(x, 2);
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(yw.theta_hat[j], ls.theta_hat[j], 30.0 / n) << s;
    }
}

TEST(StabilityGate, Examples) {
    const auto a = stability_gate(fixed_fit({0.5}));
    EXPECT_NEAR(a.min_modulus, 2.0, 1e-14);
    EXPECT_TRUE(a.accepted);
    EXPECT_DOUBLE_EQ(a.threshold, 1.01);
    const auto b = stability_gate(fixed_fit({0.999}));
    EXPECT_NEAR(b.min_modulus, 1.0 / 0.999, 1e-14);
    EXPECT_FALSE(b.accepted);
    EXPECT_FALSE(stability_gate(fixed_fit({1.5})).accepted);
}

TEST(StabilityGate, AcceptanceRateGrowsWithN) {
    double rate_small = 0.0, rate_large = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        rate_small += stability_gate(fit_yule_walker(ar_sample({0.5}, 500, 300 + s), 1)).accepted;
        rate_large += stability_gate(fit_yule_walker(ar_sample({0.5}, 5000, 300 + s), 1)).accepted;
    }
    EXPECT_LE(rate_small, rate_large);
    EXPECT_GE(rate_large / 200.0, 0.99);
}

TEST(BootstrapSeries, PassesOwnStationarityCheck) {
    const auto fit = fit_yule_walker(ar_sample({0.5}, 2000, 6), 1);
    const auto ts = bootstrap_series(fit, 1000, std::nullopt, 9);
    EXPECT_EQ(ts.values.size(), 1000u);
    EXPECT_TRUE(stationarity_check(bootstrap_model(fit)).ok);
    EXPECT_TRUE(stability_gate(fit).accepted);
    EXPECT_EQ(ts.values, bootstrap_series(fit, 1000, std::nullopt, 9).values);
    EXPECT_THROW(bootstrap_series(fixed_fit({0.999}), 10, std::nullopt, 1), std::domain_error);
}

TEST(BootstrapSeries, ZeroResidualsGiveZeroPath) {
    ARFit fit = fixed_fit({0.5});
    fit.residuals_raw.assign(10, 0.0);
    fit.residuals_centered.assign(10, 0.0);
    for (double v : bootstrap_series(fit, 200, std::nullopt, 1).values) EXPECT_EQ(v, 0.0);
}

TEST(BootstrapSeries, DrawsReproduceResidualMultiset) {
    ARFit fit = fixed_fit({0.3});
    fit.residuals_centered = {-1.0, -1.0, 0.5, 1.5};
    const auto innov = bootstrap_model(fit).innovation();
    std::map<double, int> counts;
    Rng rng(4, 0);
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) ++counts[innov.sample(rng)];
    const std::map<double, double> expected{{-1.0, 0.5}, {0.5, 0.25}, {1.5, 0.25}};
    ASSERT_EQ(counts.size(), expected.size());
    double chi2 = 0.0;
    for (const auto& [v, p] : expected) chi2 += std::pow(counts[v] - p * draws, 2) / (p * draws);
    EXPECT_LT(chi2, 13.82);  // chi-square(2) 0.999 quantile
}

TEST(BootstrapSeries, InnovationSecondMomentConverges) {
    // |(1/n) sum e_hat^2 - E e^2| <= 5 n^(-1/2) sqrt(E e^4) on >= 95% of seeds.
    const std::size_t n = 10000;
    int within = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto fit = fit_yule_walker(ar_sample({0.5}, n, 500 + s), 1);
        within += std::abs(fit.innovation_second_moment - 1.0) <= 5.0 * std::sqrt(3.0 / n);
    }
    EXPECT_GE(within, 190);
}

TEST(BootstrapDistribution, MeanStatisticLongRunSd) {
    const std::size_t n = 2000;
    const auto x = ar_sample({0.5}, n, 7);
    const auto scaled_mean = [n](std::span<const double> p) { return std::sqrt(double(n)) * mean_of(p); };
    const auto boot = bootstrap_distribution(x, 1, scaled_mean, 1000, 8);
    std::vector<double> direct(1000);
    const ProcessModel model = ARModel({0.5}, InnovationDist::gaussian(1.0));
    for (std::size_t i = 0; i < direct.size(); ++i) direct[i] = scaled_mean(simulate(model, n, std::nullopt, 9000 + i).values);
    const double sd_boot = std::sqrt(summarize(boot).variance);
    const double sd_direct = std::sqrt(summarize(direct).variance);
    EXPECT_NEAR(sd_boot, 2.0, 0.2);
    EXPECT_NEAR(sd_boot / sd_direct, 1.0, 0.15);
}

TEST(BootstrapDistribution, DeterministicAndScheduleIndependent) {
    const auto x = ar_sample({0.5}, 500, 10);
    const auto first = [](std::span<const double> p) { return p[0]; };
    const auto a = bootstrap_distribution(x, 1, first, 1, 11);
    EXPECT_EQ(a, bootstrap_distribution(x, 1, first, 1, 11));
    BootstrapOptions serial;
    serial.exec = Exec::serial;
    const auto sum = [](std::span<const double> p) { return mean_of(p); };
    EXPECT_EQ(bootstrap_distribution(x, 1, sum, 64, 12, serial), bootstrap_distribution(x, 1, sum, 64, 12));
}
