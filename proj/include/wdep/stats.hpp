#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wdep {

struct Summary {
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n - 1)
    double stderr_mean = 0.0;
    std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

/// Unbiased sample covariance of paired values, with the standard error of the
/// estimate taken from the replicate-level spread of centered products.
struct CovarianceEstimate {
    double cov = 0.0;
    double stderr_cov = 0.0;
};
CovarianceEstimate sample_covariance(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)|.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic KS critical value c(alpha)/sqrt(n), c(alpha) = sqrt(-log(alpha/2)/2).
double ks_critical_value(std::size_t n, double alpha = 0.01);

/// Finite-sample allowance added to every asymptotic KS critical value in verdicts.
inline constexpr double kKsFiniteAllowance = 0.01;

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t count = 0;
};

/// Ordinary least-squares line y = intercept + slope * x. Needs two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace wdep
