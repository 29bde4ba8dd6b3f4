#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wdep/models.hpp"
#include "wdep/parallel.hpp"
#include "wdep/rng.hpp"

namespace wdep {

enum class FitMethod { yule_walker, least_squares };

const char* to_string(FitMethod method);

/// Fitted AR(p) with residuals for t = 1..n, where the input holds the
/// observations X_{1-p}, ..., X_n (so n = length - p).
struct ARFit {
    std::vector<double> theta_hat;
    FitMethod method = FitMethod::yule_walker;
    std::vector<double> residuals_raw;
    std::vector<double> residuals_centered;
    double innovation_second_moment = 0.0;  // (1/n) sum centered^2
    /// Set when the least-squares system has fewer than 10 equations per
    /// parameter or is rank deficient.
    bool underdetermined_risk = false;
};

/// Yule-Walker estimate from demeaned, divide-by-length autocovariances.
/// Requires length >= 10 p; throws std::domain_error on a singular system.
ARFit fit_yule_walker(std::span<const double> x, std::size_t p);

/// Least squares over t = 1..n with regressors (X_{t-1}, ..., X_{t-p}).
/// Requires length >= p + 1.
ARFit fit_least_squares(std::span<const double> x, std::size_t p);

ARFit fit_ar(std::span<const double> x, std::size_t p, FitMethod method);

/// x - mean(x).
std::vector<double> recenter(std::span<const double> residuals_raw);

struct StabilityReport {
    std::vector<std::complex<double>> roots;
    double min_modulus = 0.0;
    bool accepted = false;
    double threshold = 0.0;
};

/// Accepts the fit iff every root of the fitted characteristic polynomial has
/// modulus >= 1 + delta.
StabilityReport stability_gate(const ARFit& fit, double delta = 0.01);

/// AR(theta_hat) driven by uniform draws from the centered residuals.
ARModel bootstrap_model(const ARFit& fit);

/// Burn-in for the bootstrap recursion from the fitted minimum root modulus.
std::size_t bootstrap_burn_in(const ARFit& fit);

/// One bootstrap path of length n; throws std::domain_error if the gate rejects.
TimeSeries bootstrap_series(const ARFit& fit, std::size_t n, std::optional<std::size_t> burn_in,
                            std::uint64_t seed, double delta = 0.01);

struct BootstrapOptions {
    FitMethod method = FitMethod::yule_walker;
    double delta = 0.01;
    std::optional<std::size_t> burn_in;
    Exec exec = Exec::parallel;
};

using PathStatistic = std::function<double(std::span<const double>)>;

/// Fits once, then evaluates `statistic` on B bootstrap paths of the input's
/// length; replicate i uses Rng(seed, i). `statistic` must be callable
/// concurrently.
std::vector<double> bootstrap_distribution(std::span<const double> x, std::size_t p, const PathStatistic& statistic,
                                           std::size_t replicates, std::uint64_t seed,
                                           const BootstrapOptions& options = {});

}  // namespace wdep
