#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wdep/bootstrap.hpp"
#include "wdep/models.hpp"
#include "wdep/parallel.hpp"
#include "wdep/processes.hpp"
#include "wdep/stats.hpp"
#include "wdep/weak_dependence.hpp"

namespace wdep {

enum class Profile {
    ramp,     // clamp(u, -1, 1)
    step,     // clamp(u, 0, 1), a smoothed indicator of {u > 0}
    tent,     // max(0, 1 - |u|)
    constant  // 1
};

const char* to_string(Profile profile);

/// f(x) = amplitude * profile((sum_i w_i x_i - center) / scale).
/// Lip w.r.t. the l1 norm is amplitude * max|w_i| / scale (exact: attained
/// along the coordinate of largest weight) and sup|f| = amplitude.
struct TestFunction {
    std::string id;
    Profile profile = Profile::ramp;
    double amplitude = 1.0;
    std::vector<double> weights;
    double center = 0.0;
    double scale = 1.0;

    std::size_t arity() const { return weights.size(); }
    double lip() const;
    double sup_bound() const;
    double operator()(std::span<const double> x) const;
};

/// clamp((x - center) / scale, -1, 1) on one coordinate.
TestFunction clamp_function(double center = 0.0, double scale = 1.0);
/// Smoothed indicator x -> clamp((x - s) / w, 0, 1).
TestFunction smoothed_indicator(double s, double w);
TestFunction constant_function(std::size_t arity, double value);

struct TestPair {
    TestFunction g;  // applied to the past block
    TestFunction h;  // applied to the future block
};

/// Deterministic bank: `size` pairs for each (k, l) arity pair. The first pair
/// of each group clamps the coordinates adjacent to the gap; the rest are
/// drawn from Rng(seed, group) and include smoothed indicators.
std::vector<TestPair> make_bank(std::span<const std::pair<std::size_t, std::size_t>> arity_pairs, std::size_t size,
                                std::uint64_t seed);
std::vector<std::pair<std::size_t, std::size_t>> default_arity_pairs();

struct CovarianceGap {
    double cov_hat = 0.0;
    double stderr_cov = 0.0;
    bool correlated_stderr = false;
};

/// Monte Carlo cov(g(X_s), h(X_t)) for index tuples with max(s) < min(t).
CovarianceGap covariance_gap(const ProcessModel& model, std::span<const long long> s_idx,
                             std::span<const long long> t_idx, const TestFunction& g, const TestFunction& h,
                             std::size_t replicates, std::uint64_t seed, const SamplingOptions& options = {});

/// Constants of the pairwise bound ||g||_inf Lip h K l rho_eps^r.
struct BoundConstant {
    double k = 0.0;
    double rho_eps = 0.0;
};

/// K_1 = 2 K_eps E|e_0| / (1 - rho_eps) for an AR model.
BoundConstant ar_bound_constant(const ARModel& model, double eps);
/// K_2 = 2 K~_eps sqrt(E e*^2) for the bootstrap process of a fit, with
/// K~_eps = K_eps(theta_hat) / (1 - rho_eps) and e* the centered residuals.
BoundConstant bootstrap_bound_constant(const ARFit& fit, double eps);

struct AuditOptions {
    /// Envelope slack in rho_eps = (1 + eps) / rho.
    double eps = 0.1;
    /// Overrides the bound constant (e.g. with bootstrap_bound_constant).
    /// AR models default to ar_bound_constant; other models have no bound.
    std::optional<BoundConstant> bound;
    /// Exceedances beyond this many standard errors count as violations.
    double tolerance_se = 3.0;
    SamplingOptions sampling;
};

/// Past block s = (0..k-1), future block t = (k-1+r .. k-2+r+l).
struct DependenceAudit {
    WeakDepKind kind = WeakDepKind::theta;
    std::vector<std::size_t> lags;
    std::vector<double> eps_hat;  // max over the bank of |cov| / psi
    std::vector<double> stderr;   // of the maximizing pair
    std::vector<double> stderr_max;  // max over the bank of stderr / psi
    std::vector<std::string> worst_g, worst_h;
    bool bound_available = false;
    BoundConstant bound;
    std::vector<double> theory_bound;  // max over the bank of bound / psi
    std::size_t checks = 0;
    std::size_t violations = 0;
    double worst_excess_se = 0.0;  // max (|cov| - bound) / stderr over all checks
    bool passed = true;
};

DependenceAudit audit(const ProcessModel& model, WeakDepKind kind, std::span<const std::size_t> lags,
                      std::span<const TestPair> bank, std::size_t replicates, std::uint64_t seed,
                      const AuditOptions& options = {});

/// Log-linear fit of eps_hat on r over lags where eps_hat exceeds
/// `resolve_se` standard errors; empty when fewer than two such lags.
std::optional<LinearFit> resolved_log_fit(std::span<const std::size_t> lags, std::span<const double> values,
                                          std::span<const double> stderrs, double resolve_se = 3.0);

struct DecayShape {
    std::optional<LinearFit> geometric;  // log value on r
    std::optional<LinearFit> power;      // log value on log r
    bool summable_looking = false;       // geometric slope < 0 or power exponent < -1
};

DecayShape decay_shape(std::span<const std::size_t> lags, std::span<const double> values,
                       std::span<const double> stderrs, double resolve_se = 3.0);

/// Curves of the two causal covariance functionals:
///   cond_l2[r]  = max_g |cov(g(X_{s}), X_{s_u + r})| / sqrt(E g^2)
///   cond_sup[r] = max_g |cov(g(X_{s}), X_{s_u + r})| / ||g||_inf
struct CausalConditionAudit {
    std::vector<std::size_t> lags;
    std::vector<double> cond_l2, stderr_l2;
    std::vector<double> cond_sup, stderr_sup;
    DecayShape shape_l2, shape_sup;
};

CausalConditionAudit causal_condition_audit(const ProcessModel& model, std::span<const std::size_t> lags,
                                            std::span<const TestFunction> bank, std::size_t replicates,
                                            std::uint64_t seed, const SamplingOptions& options = {});

/// Past blocks of a bank, i.e. the g of each pair.
std::vector<TestFunction> past_functions(std::span<const TestPair> bank);

/// sup over intervals (s, t] from the grid and inner spacings of
/// |cov(f(U_{t1}) f(U_{t2}), f(U_{t3}) f(U_{t4}))|, f = 1_{s < u <= t},
/// with t1 <= t2 < t3 <= t4 and r = t3 - t2.
struct PairsCondition {
    std::vector<std::size_t> lags;
    std::vector<double> eps_hat, stderr;
    std::vector<std::pair<double, double>> worst_interval;
    DecayShape shape;
    double nu = 0.0;
    /// Resolved geometric decay, or resolved power exponent below -5/2 - nu.
    bool meets_rate = false;
};

struct PairsOptions {
    std::vector<double> interval_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<std::size_t> inner_spacings = {0, 1};
    double nu = 0.1;
    SamplingOptions sampling;
};

PairsCondition empirical_pairs_condition(const ProcessModel& model, const MarginalTransform& to_uniform,
                                         std::span<const std::size_t> lags, std::size_t replicates,
                                         std::uint64_t seed, const PairsOptions& options = {});

}  // namespace wdep
