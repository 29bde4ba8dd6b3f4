#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wdep/models.hpp"
#include "wdep/parallel.hpp"
#include "wdep/processes.hpp"
#include "wdep/rng.hpp"

namespace wdep {

/// Nonincreasing nonnegative dependence sequence rho(0), rho(1), ...
/// Either c q^s or an explicit list that is zero past its end.
struct RhoSequence {
    enum class Kind { geometric, explicit_values };
    Kind kind = Kind::geometric;
    double c = 1.0, q = 0.5;
    std::vector<double> values;

    static RhoSequence geometric(double c, double q);
    static RhoSequence explicit_list(std::vector<double> values);
    double operator()(std::size_t s) const;
    std::string describe() const;
};

enum class PsiVariant { a, b, c, d };

/// (a) 2v  (b) u + v  (c) uv  (d) alpha (u + v) + (1 - alpha) uv
double psi_bound(PsiVariant variant, double u, double v, double alpha = 0.5);
PsiVariant parse_psi_variant(const std::string& name);
const char* to_string(PsiVariant variant);

struct BoundParams {
    double K = 1.0, M = 1.0;
    double L1 = 1.0, L2 = 1.0;
    double mu = 0.0, nu = 0.0;
    RhoSequence rho = RhoSequence::explicit_list({1.0});
    PsiVariant psi = PsiVariant::b;
    double alpha = 0.5;
};

/// K^2 M^(u+v-2) ((u+v)!)^nu Psi(u, v) rho(r).
double premise_bound(const BoundParams& params, std::size_t u, std::size_t v, std::size_t r);

/// sum_s (s+1)^k rho(s), summed until the terms are negligible.
double rho_moment_series(const RhoSequence& rho, std::size_t k);

struct SeriesCheck {
    std::vector<double> series;  // sum_s (s+1)^k rho(s), k = 0..k_max
    std::vector<double> cap;     // L1 L2^k (k!)^mu
    bool ok = true;
};

/// Numerical check of sum_s (s+1)^k rho(s) <= L1 L2^k (k!)^mu for k = 0..k_max.
SeriesCheck check_rho_series(const BoundParams& params, std::size_t k_max);

struct GeometricRhoConstants {
    double L1 = 0.0, L2 = 0.0, mu = 1.0;
    SeriesCheck check;
};

/// L1 = c / (1 - q), L2 = 1 / (1 - q), mu = 1, verified for k = 0..k_max.
/// Throws std::logic_error if the verification fails.
GeometricRhoConstants geometric_rho_constants(double c, double q, std::size_t k_max);

/// B_n = 2 (K v M) L2 ((2^(4+mu+nu) n K^2 L1 / A_n) v 1).
double bernstein_b(const BoundParams& params, double a_n, std::size_t n);

/// exp(-(t^2/2) / (A_n + B_n^(1/(mu+nu+2)) t^((2mu+2nu+3)/(mu+nu+2)))).
double bernstein_bound(const BoundParams& params, double a_n, std::size_t n, double t);

/// n! for n <= 20; throws std::overflow_error above.
std::uint64_t checked_factorial(unsigned n);

/// (1/u!) sum over ordered compositions k_1 + ... + k_u = p with parts >= 2 of
/// p! / (k_1! ... k_u!). Exact; p <= 20.
std::uint64_t compositions_Aup(unsigned u, unsigned p);

/// sum_{s=0}^{n-1} (s+1)^(k-2) rho(s).
double rho_kn(const RhoSequence& rho, unsigned k, std::size_t n);

/// E Z^p for Z ~ N(0, 1).
double gaussian_moment(unsigned p);

struct RosenthalBound {
    double bound = 0.0;
    double b_pn = 0.0;                  // (p!)^2 2^p max_k rho_{k,n}^(p/k)
    double term_sum = 0.0;              // sum_u A_{u,p} K^2u (M v K)^(p-2u) n^u
    std::vector<double> rho_kn;         // k = 2..p
    std::vector<std::uint64_t> a_up;    // u = 1 .. ceil(p/2) - 1
};

RosenthalBound rosenthal_gap_bound(unsigned p, double K, double M, std::size_t n, const RhoSequence& rho);

/// Constants for AR(1) with |theta| < 1 obtained by coupling the past and
/// Holder's inequality: |cov| <= 2 M^(u+v) |theta|^r / (1 - |theta|) with
/// M = ||e||_p / (1 - |theta|) (p = inf needs bounded innovations).
/// Gives K^2 = M^2 / (1 - |theta|), rho(s) = |theta|^s, Psi = u + v, nu = 0.
BoundParams ar1_bound_params(const ARModel& model, std::optional<double> p = std::nullopt);

/// Draws S_n = X_1 + ... + X_n.
struct SumSampler {
    std::size_t n = 0;
    std::function<double(Rng&)> draw;
};

SumSampler model_sum_sampler(const ProcessModel& model, std::size_t n);

struct PremiseCheck {
    struct Cell {
        std::size_t u = 0, v = 0, r = 0;
        double cov = 0.0, stderr_cov = 0.0, bound = 0.0;
    };
    std::vector<Cell> cells;
    std::size_t violations = 0;
};

/// Monte Carlo check of the product-covariance premise for u + v <= max_order
/// on consecutive blocks s = (0..u-1), t = (u-1+r ..).
PremiseCheck premise_check(const ProcessModel& model, const BoundParams& params, std::size_t max_order,
                           std::span<const std::size_t> gaps, std::size_t replicates, std::uint64_t seed,
                           Exec exec = Exec::parallel);

struct TailCheckOptions {
    /// A_n = sigma_n2_hat (1 + margin).
    double margin = 0.1;
    /// Overrides the variance estimated from the same replicates.
    std::optional<double> sigma_n2;
    double tolerance_se = 3.0;
    Exec exec = Exec::parallel;
};

struct TailReport {
    std::vector<double> t_grid;
    std::vector<double> exceedance;    // P_hat(S_n >= t)
    std::vector<double> stderr;        // binomial
    std::vector<double> wilson_upper;  // 99.7% Wilson upper limit
    std::vector<double> bound;
    double sigma_n2_hat = 0.0;
    double a_n = 0.0;
    double b_n = 0.0;
    std::size_t violations = 0;
    bool passed = false;
};

/// Replicate i draws from Rng(seed, i).
TailReport tail_check(const SumSampler& sampler, const BoundParams& params, std::span<const double> t_grid,
                      std::size_t replicates, std::uint64_t seed, const TailCheckOptions& options = {});

struct MomentGapReport {
    unsigned p = 0;
    double moment_hat = 0.0;    // mean S_n^p
    double sigma_n2_hat = 0.0;  // mean S_n^2
    double gap = 0.0;           // |moment_hat - sigma^p E Z^p|
    double stderr_gap = 0.0;    // delta method on (S^p, S^2)
    RosenthalBound bound;
    bool passed = false;
};

MomentGapReport moment_gap_check(const SumSampler& sampler, unsigned p, const BoundParams& params,
                                 std::size_t replicates, std::uint64_t seed, double tolerance_se = 3.0,
                                 Exec exec = Exec::parallel);

}  // namespace wdep
