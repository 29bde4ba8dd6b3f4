#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "wdep/stats.hpp"

using namespace wdep;

TEST(Stats, SummarizeKnownValues) {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const auto s = summarize(xs);
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.stderr_mean, std::sqrt(5.0 / 3.0 / 4.0));
    EXPECT_EQ(s.count, 4u);
}

TEST(Stats, SampleCovarianceMatchesDefinition) {
    const std::vector<double> x{1.0, 2.0, 4.0, 7.0};
    const std::vector<double> y{2.0, 1.0, 5.0, 6.0};
    // mean x = 3.5, mean y = 3.5; products: 3.75, 3.75, 0.75, 8.75 -> sum 17
    EXPECT_DOUBLE_EQ(sample_covariance(x, y).cov, 17.0 / 3.0);
}

TEST(Stats, NormalCdfReferencePoints) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
    EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-14);
}

TEST(Stats, KsOfMidpointGridIsHalfStep) {
    // Points (i - 0.5)/n against the uniform CDF deviate by exactly 1/(2n).
    const std::size_t n = 50;
    std::vector<double> xs;
    for (std::size_t i = 1; i <= n; ++i) xs.push_back((static_cast<double>(i) - 0.5) / n);
    EXPECT_NEAR(ks_statistic(xs, [](double x) { return x; }), 0.5 / n, 1e-15);
}

TEST(Stats, KsTwoSampleIdenticalAndDisjoint) {
    const std::vector<double> a{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(ks_two_sample(a, a), 0.0);
    EXPECT_DOUBLE_EQ(ks_two_sample(a, {10, 11}), 1.0);
    EXPECT_DOUBLE_EQ(ks_two_sample({1, 2}, {2, 3}), 0.5);
}

TEST(Stats, KsCriticalValueAtOnePercent) {
    // c(0.01) = sqrt(-ln(0.005)/2) = 1.6276
    EXPECT_NEAR(ks_critical_value(1, 0.01), 1.62762, 1e-5);
    EXPECT_NEAR(ks_critical_value(100, 0.01), 0.162762, 1e-6);
}

TEST(Stats, FitLineExact) {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{1, 3, 5, 7};
    const auto f = fit_line(x, y);
    EXPECT_DOUBLE_EQ(f.slope, 2.0);
    EXPECT_DOUBLE_EQ(f.intercept, 1.0);
    EXPECT_DOUBLE_EQ(f.r_squared, 1.0);
}

TEST(Stats, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0, 0.0}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(INFINITY), "inf");
}
