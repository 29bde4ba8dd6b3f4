#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wdep/models.hpp"
#include "wdep/parallel.hpp"
#include "wdep/rng.hpp"
#include "wdep/stats.hpp"

namespace wdep {

/// Expected coupling gaps E|X_{cut+r} - X'_{cut+r}| over a lag grid.
struct CouplingEstimate {
    std::vector<std::size_t> lags;
    std::vector<double> mean_gap;
    std::vector<double> stderr_gap;
    std::size_t replicates = 0;
};

struct GapEstimate {
    double mean_gap = 0.0;
    double stderr_gap = 0.0;
    std::size_t replicates = 0;
};

struct CouplingOptions {
    /// Stationary steps between the end of burn-in and the cut time.
    std::size_t cut_offset = 0;
    /// Gap summed over `block` consecutive coordinates starting at cut + r.
    std::size_t block = 1;
    std::optional<std::size_t> burn_in;
    Exec exec = Exec::parallel;
};

/// Two AR paths with independent innovations up to the cut and shared
/// innovations after it, both started from the zero state.
struct CoupledArPair {
    std::vector<double> e, e_prime;  // innovation panels
    std::vector<double> x, x_prime;  // paths on the same index set
    std::size_t cut = 0;             // panel index of the cut time s
    /// d[r] = X_{s+r} - X'_{s+r}, r = 0..horizon, propagated by the
    /// innovation-free recursion d_t = sum theta_j d_{t-j}.
    std::vector<double> d;
};

CoupledArPair coupled_ar_pair(const ARModel& model, std::size_t burn_in, std::size_t cut_offset, std::size_t horizon,
                              Rng& rng);

/// Per-replicate gaps: result[i][j] is the replicate-i gap at lags[j].
/// Replicate i uses Rng(seed, i).
std::vector<std::vector<double>> coupling_gap_matrix(const ProcessModel& model, std::span<const std::size_t> lags,
                                                     std::size_t replicates, std::uint64_t seed,
                                                     const CouplingOptions& options = {});

/// Monte Carlo estimate of E|X_{cut+r} - X'_{cut+r}| for an AR model.
GapEstimate couple_linear(const ARModel& model, std::size_t r, std::size_t replicates, std::uint64_t seed,
                          const CouplingOptions& options = {});

/// 2 l K_eps rho_eps^r E|e_0| / (1 - rho_eps).
double theoretical_tau_bound(const ARModel& model, std::size_t r, std::size_t l, double eps);

enum class SlopeModulus { local, chord };

struct ContractionEstimate {
    double rho_hat = 0.0;
    double stderr_rho = 0.0;
    double argmax = 0.0;
    std::vector<double> grid;
    std::vector<double> mean_modulus;  // E Delta(m(x) + e) per grid point
};

/// sup over the grid of E Delta(m(x) + e_0), with common innovation draws
/// across grid points. `local` uses the adjacent-slope modulus, `chord` the
/// global sup_y |m(y) - m(x)| / |y - x|.
ContractionEstimate contraction_coefficient(const NonlinearARModel& model, std::span<const double> grid,
                                            std::size_t replicates, std::uint64_t seed,
                                            SlopeModulus modulus = SlopeModulus::local, Exec exec = Exec::parallel);

/// Grid over +-5 marginal standard deviations (estimated from a simulated
/// path when Lip m < 1, else from the innovation law).
std::vector<double> default_contraction_grid(const NonlinearARModel& model, std::size_t points = 101);

struct NonlinearCoupling {
    GapEstimate gap;
    ContractionEstimate contraction;  // chord modulus
    double delta_x = 0.0;             // chord modulus at x
    double bound = 0.0;               // rho_hat^(k-1) Delta(x) |x - y|
    bool bound_applicable = false;    // rho_hat + 2 stderr < 1
    bool within_bound = true;         // gap <= bound + 3 stderr (when applicable)
};

/// Chains started at x and y fed with shared innovations for k steps.
NonlinearCoupling coupled_decay_nonlinear(const NonlinearARModel& model, double x, double y, std::size_t k,
                                          std::size_t replicates, std::uint64_t seed,
                                          std::optional<std::vector<double>> grid = std::nullopt,
                                          Exec exec = Exec::parallel);

struct TauCurve {
    CouplingEstimate estimate;
    std::optional<LinearFit> log_fit;       // log mean_gap on r, all positive lags
    std::optional<LinearFit> tail_log_fit;  // same over the upper half of the lags
};

TauCurve tau_curve(const ProcessModel& model, std::span<const std::size_t> lags, std::size_t replicates,
                   std::uint64_t seed, const CouplingOptions& options = {});

}  // namespace wdep
