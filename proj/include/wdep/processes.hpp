#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wdep/models.hpp"
#include "wdep/parallel.hpp"
#include "wdep/rng.hpp"
#include "wdep/weak_dependence.hpp"

namespace wdep {

struct CharPolyRoots {
    std::vector<std::complex<double>> roots;
    double rho = 0.0;           // min |root|; +inf when theta is identically zero
    double max_residual = 0.0;  // max |theta(root)|
};

/// Roots of 1 - theta_1 z - ... - theta_p z^p. Trailing zero coefficients are
/// dropped (they lower the degree); an all-zero theta has no roots.
CharPolyRoots char_poly_roots(std::span<const double> theta);

/// alpha_0..alpha_K of the causal representation X_t = sum alpha_k e_{t-k}.
/// Throws std::domain_error for non-stationary theta.
std::vector<double> linear_coefficients(std::span<const double> theta, std::size_t k);

/// K_eps = max_k |alpha_k| rho_eps^(-k), rho_eps = (1 + eps) / rho.
double geometric_envelope(std::span<const double> alpha, double rho, double eps);

struct Envelope {
    double k_eps = 0.0;
    double rho = 0.0;
    double rho_eps = 0.0;
    std::size_t range = 0;  // number of alpha terms inspected
};

/// Envelope of an AR model's coefficients, over a range long enough that
/// |alpha_k| rho_eps^(-k) has passed its maximum.
Envelope ar_envelope(std::span<const double> theta, double eps);

/// gamma(h) = var * sum_k alpha_k alpha_{k+h} for a causal linear filter alpha.
double linear_autocovariance(std::span<const double> alpha, double innovation_variance, std::size_t h);

struct StationarityReport {
    bool ok = false;
    double margin = 0.0;
    std::string detail;
};

StationarityReport stationarity_check(const ProcessModel& model);

/// Burn-in that brings the zero-state start within 1e-10 of stationarity for a
/// geometric contraction factor c per `stride` steps.
std::size_t contraction_burn_in(double c, std::size_t stride = 1);
/// Smallest burn-in simulate accepts for the model.
std::size_t recommended_burn_in(const ProcessModel& model);

/// Where the n output values sit inside the innovation panel: X_t is driven by
/// panel[offset + t] (its own-time innovation).
struct PathLayout {
    std::size_t n = 0;
    std::size_t burn_in = 0;
    std::size_t panel_length = 0;
    std::size_t offset = 0;
};

PathLayout path_layout(const ProcessModel& model, std::size_t n, std::size_t burn_in);

/// Deterministic map from an innovation panel to the path. `exec` selects the
/// data-parallel kernel for windowed models (LARCH, Volterra, linear).
std::vector<double> evaluate_path(const ProcessModel& model, std::span<const double> panel,
                                  const PathLayout& layout, Exec exec = Exec::serial);

/// Draws a panel from rng and evaluates it.
std::vector<double> simulate_path(const ProcessModel& model, const PathLayout& layout, Rng& rng,
                                  Exec exec = Exec::serial);

/// Stationary path of length n; burn_in defaults to recommended_burn_in.
/// Uses Rng(seed, 0).
TimeSeries simulate(const ProcessModel& model, std::size_t n, std::optional<std::size_t> burn_in,
                    std::uint64_t seed, Exec exec = Exec::serial);

enum class SamplingMode {
    replicates,   // independent stationary paths, one window each
    time_average  // sliding windows of one long path; stderr ignores serial correlation
};

struct SamplingOptions {
    SamplingMode mode = SamplingMode::replicates;
    std::optional<std::size_t> burn_in;
    Exec exec = Exec::parallel;
};

/// Stationary windows X_0..X_{width-1}: row i comes from Rng(seed, i) in
/// replicate mode, or is the i-th sliding window of one Rng(seed, 0) path.
std::vector<std::vector<double>> sample_windows(const ProcessModel& model, std::size_t width, std::size_t count,
                                                std::uint64_t seed, const SamplingOptions& options = {});

/// Maps the process marginal to U(0, 1).
using MarginalTransform = std::function<double(double)>;

struct LarchSolution {
    std::vector<double> window;
    std::vector<double> sup_changes;  // sup-norm change of each sweep
};

/// Jacobi fixed-point iteration on a window with zero boundary.
LarchSolution solve_larch(const LarchModel& model, std::span<const double> innovations, Exec exec = Exec::serial,
                          double tolerance = 1e-12, std::size_t max_iterations = 100000);

struct ReferenceRate {
    bool available = false;
    double value = 0.0;
    std::string note;
};

/// Shape of the theoretical decay of the dependence coefficient at lag r,
/// normalised to 1 at r = 1. `c` is the constant in exp(-c sqrt r) shapes.
ReferenceRate reference_rate(const ProcessModel& model, WeakDepKind kind, std::size_t r, double c = 1.0);

}  // namespace wdep
