#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wdep/bootstrap.hpp"
#include "wdep/models.hpp"
#include "wdep/parallel.hpp"
#include "wdep/processes.hpp"
#include "wdep/rng.hpp"
#include "wdep/stats.hpp"

namespace wdep {

/// sigma^2 = var(e) / (1 - sum theta)^2 for a stationary AR model.
double ar_long_run_variance(const ARModel& model);

struct LongRunOptions {
    /// Lag cutoff L; chosen automatically when absent.
    std::optional<std::size_t> lag_cutoff;
    /// Upper limit for the automatic cutoff.
    std::size_t max_lag = 200;
    /// Length of each replicate path; lag-h products are averaged along it.
    std::size_t path_length = 2000;
    std::optional<std::size_t> burn_in;
    Exec exec = Exec::parallel;
};

struct LongRunVariance {
    double sigma2 = 0.0;
    double stderr_sigma2 = 0.0;
    std::size_t lag_cutoff = 0;
    std::vector<double> gamma;         // gamma_hat(0..L)
    std::vector<double> gamma_stderr;
    double tail_estimate = 0.0;        // fitted geometric mass beyond L (both sides)
    bool cutoff_converged = true;      // automatic rule met before max_lag
    bool negative = false;             // sigma2 < 0: raise L or replicates
    std::size_t replicates = 0;
};

/// sigma^2 = gamma(0) + 2 sum_{h=1..L} gamma(h). Each replicate contributes
/// its path averages of (X_t - m)(X_{t+h} - m), m the ensemble mean; the
/// standard error comes from the spread of the per-replicate sums. The
/// automatic L is the smallest lag whose fitted geometric tail is below 1%
/// of the partial sum.
LongRunVariance long_run_variance(const ProcessModel& model, std::size_t replicates, std::uint64_t seed,
                                  const LongRunOptions& options = {});

/// Replicates x grid points.
struct PathEnsemble {
    std::vector<double> grid;
    std::vector<std::vector<double>> paths;
    std::size_t n = 0;
};

struct DonskerOptions {
    /// Normalizing variance; estimated by long_run_variance when absent.
    std::optional<double> sigma2;
    LongRunOptions long_run;
    std::size_t long_run_replicates = 2000;
    std::optional<std::size_t> burn_in;
    Exec exec = Exec::parallel;
};

struct DonskerReport {
    PathEnsemble ensemble;
    double sigma2_hat = 0.0;
    double sigma2_stderr = 0.0;
    double ks_w1 = 0.0;        // KS of W_n(1) / sigma_hat against N(0, 1)
    double ks_threshold = 0.0; // critical value at level 0.01 plus the finite-n allowance
    std::vector<double> var_curve, var_curve_stderr;  // var W_n(t) per grid point
    LinearFit var_fit;         // var W_n(t) on t
    /// cov(W_n(s), W_n(t) - W_n(s)) for consecutive grid points s < t.
    std::vector<double> increment_cov, increment_cov_stderr;
    /// Mean over paths of the largest increment between consecutive grid points.
    double modulus = 0.0;
    bool passed = false;
};

/// W_n(t) = n^{-1/2} sum_{i <= floor(n t)} X_i on the grid.
DonskerReport donsker_check(const ProcessModel& model, std::size_t n, std::span<const double> grid,
                            std::size_t replicates, std::uint64_t seed, const DonskerOptions& options = {});

/// Piecewise-linear interpolation of the right-continuous empirical CDF of a
/// calibration path through its distinct values.
class QuantileTransform {
public:
    QuantileTransform(std::vector<double> knots, std::vector<double> levels, double max_atom);
    double operator()(double x) const;
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& levels() const { return levels_; }
    /// Largest probability mass on a single value of the calibration path.
    double max_atom() const { return max_atom_; }
    /// The transform cannot uniformize a marginal with atoms above 1%.
    bool atomic() const { return max_atom_ > 0.01; }

private:
    std::vector<double> knots_, levels_;
    double max_atom_ = 0.0;
};

/// Throws std::invalid_argument for calibration_length < 10^4 or a constant path.
QuantileTransform quantile_transform(const ProcessModel& model, std::size_t calibration_length, std::uint64_t seed);

/// Closed-form marginal CDF where known: Gaussian AR models, i.i.d. uniform,
/// and AR(1) with theta = +-1/2 and Rademacher innovations (Uniform(-2, 2)).
std::optional<MarginalTransform> exact_marginal_cdf(const ProcessModel& model);

/// min(x, y) - x y.
double bridge_covariance(double x, double y);

struct EmpiricalProcessOptions {
    /// Truncation |k| <= lag_cutoff of the limiting covariance series.
    std::size_t lag_cutoff = 30;
    std::size_t oracle_replicates = 20000;
    /// Use min(x, y) - xy as the theory instead of the Monte Carlo series.
    bool standard_bridge = false;
    double tolerance_se = 3.0;
    std::optional<std::size_t> burn_in;
    Exec exec = Exec::parallel;
};

struct CovarianceCell {
    double x = 0.0, y = 0.0;
    double cov_hat = 0.0, stderr_hat = 0.0;
    double cov_theory = 0.0, stderr_theory = 0.0;
    bool within = true;  // |hat - theory| <= tol * combined stderr
};

struct EmpiricalProcessReport {
    PathEnsemble ensemble;       // E_n(x) / sqrt(n) per replicate and grid point
    std::vector<double> ks;      // pointwise KS of the standardized values against N(0, 1)
    double ks_threshold = 0.0;
    std::vector<CovarianceCell> cells;  // all (x, y) with x <= y
    std::size_t violations = 0;
    bool passed = false;
};

/// E_n(x) = sum_k (1{U_k <= x} - x), U_k = to_uniform(X_k). The theory
/// series sum_{|k| <= K} (P(U_0 <= x, U_k <= y) - xy) is estimated from
/// independent windows (seed stream splitmix64(seed)) using centered products.
EmpiricalProcessReport empirical_process_check(const ProcessModel& model, const MarginalTransform& to_uniform,
                                               std::size_t n, std::span<const double> x_grid,
                                               std::size_t replicates, std::uint64_t seed,
                                               const EmpiricalProcessOptions& options = {});

/// Draws row n of a triangular array (X_{n,1}, ..., X_{n,n}).
using RowSampler = std::function<std::vector<double>(std::size_t n, Rng& rng)>;

/// Stationary path of the model as the row, independent of n otherwise.
RowSampler model_rows(const ProcessModel& model, std::optional<std::size_t> burn_in = std::nullopt);
/// Rows from the bootstrap process of a fit; throws std::domain_error if the
/// stability gate rejects it.
RowSampler bootstrap_rows(const ARFit& fit, double delta = 0.01);

struct CltOptions {
    double epsilon = 0.1;
    /// KS threshold at the largest n; defaults to the level-0.01 critical
    /// value plus the finite-n allowance.
    std::optional<double> ks_threshold;
    Exec exec = Exec::parallel;
};

struct CltReport {
    std::vector<std::size_t> n_grid;
    std::vector<double> ks_distance;   // S_n / sqrt(n) against N(0, sigma2_hat)
    std::vector<double> sigma2;        // var(S_n) / n per n
    std::vector<double> sigma2_stderr;
    double sigma2_hat = 0.0;           // at the largest n
    std::vector<double> lindeberg;     // (1/n) sum E X^2 1{|X| / sqrt n > eps}
    double ks_threshold = 0.0;
    bool ks_decreasing = true;         // up to one critical value of noise
    bool verdict = false;
};

/// Row n of replicate i uses Rng(stream_key(seed, j), i) for n = n_grid[j].
CltReport triangular_clt_check(const RowSampler& scheme, std::span<const std::size_t> n_grid,
                               std::size_t replicates, std::uint64_t seed, const CltOptions& options = {});

/// Draws row n of a d-dimensional array, row-major n x d.
struct VectorRowSampler {
    std::size_t dim = 1;
    std::function<std::vector<double>(std::size_t n, Rng& rng)> draw;
};

/// X_{n,k} = X_k / sqrt(n) in each coordinate of independent model copies.
VectorRowSampler scaled_model_rows(const std::vector<ProcessModel>& coordinates);
/// X_{n,k} = sqrt(1/J) X_k at k = m, 2m, ..., J m with m = n / J, zero elsewhere.
VectorRowSampler windowed_rows(const ProcessModel& model, std::size_t blocks);

struct MultivariateCltOptions {
    std::size_t chunks = 64;  // fixed reduction blocks for the characteristic-function sums
    Exec exec = Exec::parallel;
};

struct ProbeReport {
    std::vector<double> t;
    double dependence_sum = 0.0;    // sum_k |cov(exp(i t'S_{k-1}), exp(i t'X_k))|
    double noise_floor = 0.0;       // expected value of that sum under zero covariance
    double ks = 0.0;                // t'S_n against N(0, t' Sigma t)
};

struct MultivariateCltStep {
    std::size_t n = 0;
    std::vector<double> sigma;          // sum_k Cov(X_{n,k}), d x d row-major
    std::vector<double> sigma_stderr;
    std::vector<double> sum_covariance; // sample Cov(S_n), d x d
    std::vector<double> sum_covariance_stderr;
    bool positive_definite = false;
    std::vector<double> ks_component;   // S_n[j] against N(0, Sigma_jj)
    std::vector<ProbeReport> probes;
};

struct MultivariateCltReport {
    std::size_t dim = 0;
    std::vector<MultivariateCltStep> steps;
    double ks_threshold = 0.0;
    bool verdict = false;  // every Sigma positive definite and all KS below threshold at the largest n
};

MultivariateCltReport multivariate_clt_check(const VectorRowSampler& scheme, std::span<const std::size_t> n_grid,
                                             std::size_t replicates, std::span<const std::vector<double>> probes,
                                             std::uint64_t seed, const MultivariateCltOptions& options = {});

}  // namespace wdep
