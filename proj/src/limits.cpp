#include "wdep/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "overloaded.hpp"

namespace wdep {

namespace {

void check_grid(std::span<const double> grid, const char* who) {
    if (grid.empty()) throw std::invalid_argument(std::string(who) + ": empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw std::invalid_argument(std::string(who) + ": grid outside [0, 1]");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument(std::string(who) + ": grid must be increasing");
    }
}

void check_n_grid(std::span<const std::size_t> n_grid, const char* who) {
    if (n_grid.empty()) throw std::invalid_argument(std::string(who) + ": empty n grid");
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
        if (n_grid[j] == 0) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
        if (j > 0 && !(n_grid[j] > n_grid[j - 1])) throw std::invalid_argument(std::string(who) + ": n grid must be increasing");
    }
}

/// Unbiased sample variance with the standard error of that estimate.
std::pair<double, double> variance_with_stderr(std::span<const double> v) {
    const auto s = summarize(v);
    std::vector<double> dev2(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev2[i] = (v[i] - s.mean) * (v[i] - s.mean);
    const auto d = summarize(dev2);
    const double scale = static_cast<double>(v.size()) / static_cast<double>(v.size() - 1);
    return {d.mean * scale, d.stderr_mean * scale};
}

double standard_normal_cdf(double x) { return normal_cdf(x); }

/// KS of values / sd against N(0, 1); 0 for a degenerate column.
double ks_normal(std::vector<double> values, double sd) {
    if (!(sd > 0.0)) return 0.0;
    for (auto& v : values) v /= sd;
    return ks_statistic(std::move(values), standard_normal_cdf);
}

std::size_t floor_index(std::size_t n, double t) {
    return std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * t)));
}

}  // namespace

double ar_long_run_variance(const ARModel& model) {
    double s = 0.0;
    for (double t : model.theta()) s += t;
    if (!stationarity_check(model).ok) throw std::domain_error("ar_long_run_variance: model is not stationary");
    return model.innovation().variance() / ((1.0 - s) * (1.0 - s));
}

LongRunVariance long_run_variance(const ProcessModel& model, std::size_t replicates, std::uint64_t seed,
                                  const LongRunOptions& options) {
    if (replicates < 2) throw std::invalid_argument("long_run_variance: need at least two replicates");
    const std::size_t lmax = options.lag_cutoff.value_or(options.max_lag);
    if (options.path_length <= lmax) throw std::invalid_argument("long_run_variance: path_length must exceed the lag cutoff");
    SamplingOptions sampling;
    sampling.burn_in = options.burn_in;
    sampling.exec = options.exec;
    const auto windows = sample_windows(model, options.path_length, replicates, seed, sampling);

    std::vector<double> row_means(replicates);
    for (std::size_t i = 0; i < replicates; ++i) row_means[i] = summarize(windows[i]).mean;
    const double m = summarize(row_means).mean;

    // g[i][h]: path average of centered lag-h products.
    std::vector<std::vector<double>> g(replicates, std::vector<double>(lmax + 1));
    for_each_index(options.exec, replicates, [&](std::size_t i) {
        std::vector<double> x(windows[i].size());
        for (std::size_t t = 0; t < x.size(); ++t) x[t] = windows[i][t] - m;
        for (std::size_t h = 0; h <= lmax; ++h) {
            double s = 0.0;
            for (std::size_t t = 0; t + h < x.size(); ++t) s += x[t] * x[t + h];
            g[i][h] = s / static_cast<double>(x.size() - h);
        }
    });

    LongRunVariance out;
    out.replicates = replicates;
    std::vector<double> col(replicates);
    for (std::size_t h = 0; h <= lmax; ++h) {
        for (std::size_t i = 0; i < replicates; ++i) col[i] = g[i][h];
        const auto s = summarize(col);
        out.gamma.push_back(s.mean);
        out.gamma_stderr.push_back(s.stderr_mean);
    }

    auto tail_at = [&](std::size_t L) -> std::optional<double> {
        std::vector<double> r, lg;
        for (std::size_t h = 1; h <= L; ++h) {
            const double a = std::abs(out.gamma[h]);
            if (a > 0.0 && a > 2.0 * out.gamma_stderr[h]) {
                r.push_back(static_cast<double>(h));
                lg.push_back(std::log(a));
            }
        }
        if (r.empty()) return 0.0;
        if (r.size() < 2) return std::nullopt;
        const auto fit = fit_line(r, lg);
        if (!(fit.slope < 0.0)) return std::nullopt;
        const double q = std::exp(fit.slope);
        return 2.0 * std::exp(fit.intercept + fit.slope * static_cast<double>(L + 1)) / (1.0 - q);
    };

    std::size_t cutoff = lmax;
    if (options.lag_cutoff) {
        out.tail_estimate = tail_at(lmax).value_or(std::numeric_limits<double>::quiet_NaN());
    } else {
        out.cutoff_converged = false;
        double partial = out.gamma[0];
        for (std::size_t L = 1; L <= lmax; ++L) {
            partial += 2.0 * out.gamma[L];
            const auto tail = tail_at(L);
            if (tail && *tail < 0.01 * std::abs(partial)) {
                cutoff = L;
                out.tail_estimate = *tail;
                out.cutoff_converged = true;
                break;
            }
        }
        if (!out.cutoff_converged) out.tail_estimate = tail_at(lmax).value_or(std::numeric_limits<double>::quiet_NaN());
    }
    out.lag_cutoff = cutoff;

    for (std::size_t i = 0; i < replicates; ++i) {
        double q = g[i][0];
        for (std::size_t h = 1; h <= cutoff; ++h) q += 2.0 * g[i][h];
        col[i] = q;
    }
    const auto s = summarize(col);
    out.sigma2 = s.mean;
    out.stderr_sigma2 = s.stderr_mean;
    out.negative = out.sigma2 < 0.0;
    out.gamma.resize(cutoff + 1);
    out.gamma_stderr.resize(cutoff + 1);
    return out;
}

DonskerReport donsker_check(const ProcessModel& model, std::size_t n, std::span<const double> grid,
                            std::size_t replicates, std::uint64_t seed, const DonskerOptions& options) {
    check_grid(grid, "donsker_check");
    if (n == 0) throw std::invalid_argument("donsker_check: n must be >= 1");
    if (replicates < 2) throw std::invalid_argument("donsker_check: need at least two replicates");
    const auto check = stationarity_check(model);
    if (!check.ok) throw std::domain_error("donsker_check: model is not stationary (" + check.detail + ")");

    DonskerReport rep;
    rep.ensemble.grid.assign(grid.begin(), grid.end());
    rep.ensemble.n = n;
    rep.ensemble.paths.assign(replicates, std::vector<double>(grid.size()));
    std::vector<double> w1(replicates);
    const auto layout = path_layout(model, n, options.burn_in.value_or(recommended_burn_in(model)));
    const double root_n = std::sqrt(static_cast<double>(n));
    for_each_index(options.exec, replicates, [&](std::size_t i) {
        Rng rng(seed, i);
        const auto x = simulate_path(model, layout, rng);
        std::vector<double> cum(n + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) cum[k + 1] = cum[k] + x[k];
        for (std::size_t g = 0; g < grid.size(); ++g) rep.ensemble.paths[i][g] = cum[floor_index(n, grid[g])] / root_n;
        w1[i] = cum[n] / root_n;
    });

    if (options.sigma2) {
        rep.sigma2_hat = *options.sigma2;
    } else {
        auto lr = options.long_run;
        lr.exec = options.exec;
        const auto est = long_run_variance(model, options.long_run_replicates, splitmix64(seed), lr);
        rep.sigma2_hat = est.sigma2;
        rep.sigma2_stderr = est.stderr_sigma2;
    }
    rep.ks_w1 = rep.sigma2_hat > 0.0 ? ks_normal(w1, std::sqrt(rep.sigma2_hat)) : 1.0;
    rep.ks_threshold = ks_critical_value(replicates) + kKsFiniteAllowance;

    std::vector<double> col(replicates), prev(replicates), inc(replicates);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (std::size_t i = 0; i < replicates; ++i) col[i] = rep.ensemble.paths[i][g];
        const auto [v, se] = variance_with_stderr(col);
        rep.var_curve.push_back(v);
        rep.var_curve_stderr.push_back(se);
        if (g > 0) {
            for (std::size_t i = 0; i < replicates; ++i) inc[i] = col[i] - prev[i];
            const auto c = sample_covariance(prev, inc);
            rep.increment_cov.push_back(c.cov);
            rep.increment_cov_stderr.push_back(c.stderr_cov);
        }
        prev = col;
    }
    if (grid.size() >= 2) rep.var_fit = fit_line(rep.ensemble.grid, rep.var_curve);
    double mod = 0.0;
    for (const auto& path : rep.ensemble.paths) {
        double m = 0.0;
        for (std::size_t g = 1; g < path.size(); ++g) m = std::max(m, std::abs(path[g] - path[g - 1]));
        mod += m;
    }
    rep.modulus = mod / static_cast<double>(replicates);
    rep.passed = rep.ks_w1 < rep.ks_threshold;
    return rep;
}

QuantileTransform::QuantileTransform(std::vector<double> knots, std::vector<double> levels, double max_atom)
    : knots_(std::move(knots)), levels_(std::move(levels)), max_atom_(max_atom) {
    if (knots_.empty() || knots_.size() != levels_.size())
        throw std::invalid_argument("QuantileTransform: knots and levels must be nonempty and equally long");
}

double QuantileTransform::operator()(double x) const {
    if (x < knots_.front()) return 0.0;
    if (x >= knots_.back()) return 1.0;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - knots_.begin()) - 1;
    const double w = (x - knots_[j]) / (knots_[j + 1] - knots_[j]);
    return levels_[j] + w * (levels_[j + 1] - levels_[j]);
}

QuantileTransform quantile_transform(const ProcessModel& model, std::size_t calibration_length, std::uint64_t seed) {
    if (calibration_length < 10000) throw std::invalid_argument("quantile_transform: calibration_length must be >= 10^4");
    auto v = simulate(model, calibration_length, std::nullopt, seed).values;
    std::sort(v.begin(), v.end());
    if (v.front() == v.back()) throw std::invalid_argument("quantile_transform: constant calibration path");
    std::vector<double> knots, levels;
    std::size_t largest = 0;
    const double total = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        knots.push_back(v[i]);
        levels.push_back(static_cast<double>(j) / total);
        largest = std::max(largest, j - i);
        i = j;
    }
    if (knots.size() == 1) throw std::invalid_argument("quantile_transform: constant calibration path");
    return QuantileTransform(std::move(knots), std::move(levels), static_cast<double>(largest) / total);
}

std::optional<MarginalTransform> exact_marginal_cdf(const ProcessModel& model) {
    const auto* ar = std::get_if<ARModel>(&model);
    if (!ar || !stationarity_check(model).ok) return std::nullopt;
    std::vector<double> theta = ar->theta();
    while (!theta.empty() && theta.back() == 0.0) theta.pop_back();
    return std::visit(
        detail::Overloaded{
            [&](const Gaussian& g) -> std::optional<MarginalTransform> {
                double var = g.sd * g.sd;
                if (!theta.empty()) {
                    const auto env = ar_envelope(theta, 0.1);
                    const auto alpha = linear_coefficients(theta, env.range);
                    double s = 0.0;
                    for (double a : alpha) s += a * a;
                    var *= s;
                }
                const double sd = std::sqrt(var);
                return MarginalTransform([sd](double x) { return normal_cdf(x / sd); });
            },
            [&](const Uniform& u) -> std::optional<MarginalTransform> {
                if (!theta.empty()) return std::nullopt;
                const double a = u.a, b = u.b;
                return MarginalTransform([a, b](double x) { return std::clamp((x - a) / (b - a), 0.0, 1.0); });
            },
            [&](const Rademacher&) -> std::optional<MarginalTransform> {
                if (theta.size() != 1 || std::abs(theta[0]) != 0.5) return std::nullopt;
                return MarginalTransform([](double x) { return std::clamp((x + 2.0) / 4.0, 0.0, 1.0); });
            },
            [&](const Empirical&) -> std::optional<MarginalTransform> { return std::nullopt; },
        },
        ar->innovation().law());
}

double bridge_covariance(double x, double y) { return std::min(x, y) - x * y; }

EmpiricalProcessReport empirical_process_check(const ProcessModel& model, const MarginalTransform& to_uniform,
                                               std::size_t n, std::span<const double> x_grid,
                                               std::size_t replicates, std::uint64_t seed,
                                               const EmpiricalProcessOptions& options) {
    check_grid(x_grid, "empirical_process_check");
    if (n == 0) throw std::invalid_argument("empirical_process_check: n must be >= 1");
    if (replicates < 2) throw std::invalid_argument("empirical_process_check: need at least two replicates");
    const auto check = stationarity_check(model);
    if (!check.ok) throw std::domain_error("empirical_process_check: model is not stationary (" + check.detail + ")");
    const std::size_t ng = x_grid.size();
    const std::size_t burn_in = options.burn_in.value_or(recommended_burn_in(model));

    EmpiricalProcessReport rep;
    rep.ensemble.grid.assign(x_grid.begin(), x_grid.end());
    rep.ensemble.n = n;
    rep.ensemble.paths.assign(replicates, std::vector<double>(ng));
    const auto layout = path_layout(model, n, burn_in);
    const double root_n = std::sqrt(static_cast<double>(n));
    for_each_index(options.exec, replicates, [&](std::size_t i) {
        Rng rng(seed, i);
        const auto x = simulate_path(model, layout, rng);
        auto& row = rep.ensemble.paths[i];
        std::vector<std::size_t> below(ng, 0);
        for (double v : x) {
            const double u = to_uniform(v);
            for (std::size_t g = 0; g < ng; ++g)
                if (u <= x_grid[g]) ++below[g];
        }
        for (std::size_t g = 0; g < ng; ++g)
            row[g] = (static_cast<double>(below[g]) - static_cast<double>(n) * x_grid[g]) / root_n;
    });

    std::vector<std::vector<double>> cols(ng, std::vector<double>(replicates));
    for (std::size_t i = 0; i < replicates; ++i)
        for (std::size_t g = 0; g < ng; ++g) cols[g][i] = rep.ensemble.paths[i][g];
    for (std::size_t g = 0; g < ng; ++g) {
        const auto s = summarize(cols[g]);
        std::vector<double> centered(replicates);
        for (std::size_t i = 0; i < replicates; ++i) centered[i] = cols[g][i] - s.mean;
        rep.ks.push_back(ks_normal(std::move(centered), std::sqrt(s.variance)));
    }
    rep.ks_threshold = ks_critical_value(replicates) + kKsFiniteAllowance;

    // Monte Carlo series: sum_{k=0..K} a_0(x) b_k(y) + sum_{k=1..K} a_k(x) b_0(y)
    // with a_k(x) = 1{U_k <= x} - x, b_k(y) = 1{U_k <= y} - y.
    std::vector<std::vector<double>> oracle;
    const std::size_t K = options.lag_cutoff;
    if (!options.standard_bridge) {
        SamplingOptions sampling;
        sampling.burn_in = burn_in;
        sampling.exec = options.exec;
        oracle = sample_windows(model, K + 1, options.oracle_replicates, splitmix64(seed), sampling);
        for (auto& w : oracle)
            for (auto& v : w) v = to_uniform(v);
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < ng; ++a)
        for (std::size_t b = a; b < ng; ++b) pairs.emplace_back(a, b);
    rep.cells.resize(pairs.size());
    for_each_index(options.exec, pairs.size(), [&](std::size_t c) {
        const auto [a, b] = pairs[c];
        auto& cell = rep.cells[c];
        cell.x = x_grid[a];
        cell.y = x_grid[b];
        const auto est = sample_covariance(cols[a], cols[b]);
        cell.cov_hat = est.cov;
        cell.stderr_hat = est.stderr_cov;
        if (options.standard_bridge) {
            cell.cov_theory = bridge_covariance(cell.x, cell.y);
        } else {
            std::vector<double> q(oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                const auto& u = oracle[i];
                const double a0 = (u[0] <= cell.x ? 1.0 : 0.0) - cell.x;
                const double b0 = (u[0] <= cell.y ? 1.0 : 0.0) - cell.y;
                double s = a0 * b0;
                for (std::size_t k = 1; k <= K; ++k)
                    s += a0 * ((u[k] <= cell.y ? 1.0 : 0.0) - cell.y) + ((u[k] <= cell.x ? 1.0 : 0.0) - cell.x) * b0;
                q[i] = s;
            }
            const auto s = summarize(q);
            cell.cov_theory = s.mean;
            cell.stderr_theory = s.stderr_mean;
        }
        const double se = std::hypot(cell.stderr_hat, cell.stderr_theory);
        cell.within = std::abs(cell.cov_hat - cell.cov_theory) <= options.tolerance_se * se;
    });
    for (const auto& cell : rep.cells)
        if (!cell.within) ++rep.violations;
    rep.passed = rep.violations == 0 &&
                 std::all_of(rep.ks.begin(), rep.ks.end(), [&](double k) { return k < rep.ks_threshold; });
    return rep;
}

RowSampler model_rows(const ProcessModel& model, std::optional<std::size_t> burn_in) {
    const auto check = stationarity_check(model);
    if (!check.ok) throw std::domain_error("model_rows: model is not stationary (" + check.detail + ")");
    const std::size_t burn = burn_in.value_or(recommended_burn_in(model));
    return [model, burn](std::size_t n, Rng& rng) { return simulate_path(model, path_layout(model, n, burn), rng); };
}

RowSampler bootstrap_rows(const ARFit& fit, double delta) {
    if (!stability_gate(fit, delta).accepted) throw std::domain_error("bootstrap_rows: fit rejected by the stability gate");
    return model_rows(bootstrap_model(fit), bootstrap_burn_in(fit));
}

CltReport triangular_clt_check(const RowSampler& scheme, std::span<const std::size_t> n_grid,
                               std::size_t replicates, std::uint64_t seed, const CltOptions& options) {
    check_n_grid(n_grid, "triangular_clt_check");
    if (replicates < 2) throw std::invalid_argument("triangular_clt_check: need at least two replicates");
    if (!(options.epsilon > 0.0)) throw std::invalid_argument("triangular_clt_check: epsilon must be > 0");
    CltReport rep;
    rep.n_grid.assign(n_grid.begin(), n_grid.end());
    const double crit = ks_critical_value(replicates);
    rep.ks_threshold = options.ks_threshold.value_or(crit + kKsFiniteAllowance);
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
        const std::size_t n = n_grid[j];
        const double root_n = std::sqrt(static_cast<double>(n));
        const std::uint64_t seed_j = stream_key(seed, j);
        std::vector<double> sums(replicates), lind(replicates);
        for_each_index(options.exec, replicates, [&](std::size_t i) {
            Rng rng(seed_j, i);
            const auto row = scheme(n, rng);
            if (row.size() != n) throw std::invalid_argument("triangular_clt_check: scheme returned a row of wrong length");
            double s = 0.0, l = 0.0;
            for (double x : row) {
                s += x;
                if (std::abs(x) / root_n > options.epsilon) l += x * x;
            }
            sums[i] = s / root_n;
            lind[i] = l / static_cast<double>(n);
        });
        const auto [var, se] = variance_with_stderr(sums);
        rep.sigma2.push_back(var);
        rep.sigma2_stderr.push_back(se);
        rep.ks_distance.push_back(var > 0.0 ? ks_normal(sums, std::sqrt(var)) : 1.0);
        rep.lindeberg.push_back(summarize(lind).mean);
    }
    rep.sigma2_hat = rep.sigma2.back();
    for (std::size_t j = 1; j < rep.ks_distance.size(); ++j)
        if (rep.ks_distance[j] > rep.ks_distance[j - 1] + crit) rep.ks_decreasing = false;
    rep.verdict = rep.ks_decreasing && rep.ks_distance.back() < rep.ks_threshold;
    return rep;
}

VectorRowSampler scaled_model_rows(const std::vector<ProcessModel>& coordinates) {
    if (coordinates.empty()) throw std::invalid_argument("scaled_model_rows: no coordinates");
    std::vector<RowSampler> rows;
    for (const auto& m : coordinates) rows.push_back(model_rows(m));
    const std::size_t d = coordinates.size();
    return {d, [rows, d](std::size_t n, Rng& rng) {
                std::vector<double> out(n * d);
                const double scale = 1.0 / std::sqrt(static_cast<double>(n));
                for (std::size_t c = 0; c < d; ++c) {
                    const auto x = rows[c](n, rng);
                    for (std::size_t k = 0; k < n; ++k) out[k * d + c] = x[k] * scale;
                }
                return out;
            }};
}

VectorRowSampler windowed_rows(const ProcessModel& model, std::size_t blocks) {
    if (blocks == 0) throw std::invalid_argument("windowed_rows: blocks must be >= 1");
    const auto rows = model_rows(model);
    return {1, [rows, blocks](std::size_t n, Rng& rng) {
                if (n < blocks) throw std::invalid_argument("windowed_rows: n must be >= blocks");
                const std::size_t m = n / blocks;
                const auto x = rows(blocks * m, rng);
                std::vector<double> out(n, 0.0);
                const double scale = 1.0 / std::sqrt(static_cast<double>(blocks));
                for (std::size_t j = 1; j <= blocks; ++j) out[j * m - 1] = x[j * m - 1] * scale;
                return out;
            }};
}

MultivariateCltReport multivariate_clt_check(const VectorRowSampler& scheme, std::span<const std::size_t> n_grid,
                                             std::size_t replicates, std::span<const std::vector<double>> probes,
                                             std::uint64_t seed, const MultivariateCltOptions& options) {
    check_n_grid(n_grid, "multivariate_clt_check");
    if (replicates < 2) throw std::invalid_argument("multivariate_clt_check: need at least two replicates");
    const std::size_t d = scheme.dim;
    if (d == 0) throw std::invalid_argument("multivariate_clt_check: dimension must be >= 1");
    for (const auto& t : probes)
        if (t.size() != d) throw std::invalid_argument("multivariate_clt_check: probe dimension mismatch");
    using cplx = std::complex<double>;

    MultivariateCltReport rep;
    rep.dim = d;
    rep.ks_threshold = ks_critical_value(replicates) + kKsFiniteAllowance;
    const std::size_t chunks = std::clamp<std::size_t>(options.chunks, 1, replicates);
    const std::size_t np = probes.size();

    for (std::size_t j = 0; j < n_grid.size(); ++j) {
        const std::size_t n = n_grid[j];
        const std::uint64_t seed_j = stream_key(seed, j);
        std::vector<std::vector<double>> sums(replicates, std::vector<double>(d));
        std::vector<std::vector<double>> quad(replicates, std::vector<double>(d * d));
        // Per chunk and probe: sums over replicates of A_k, B_k and A_k conj(B_k).
        struct Acc {
            std::vector<cplx> a, b, ab;
        };
        std::vector<std::vector<Acc>> acc(chunks, std::vector<Acc>(np));
        for_each_index(options.exec, chunks, [&](std::size_t c) {
            for (auto& p : acc[c]) p = {std::vector<cplx>(n), std::vector<cplx>(n), std::vector<cplx>(n)};
            const std::size_t lo = c * replicates / chunks, hi = (c + 1) * replicates / chunks;
            for (std::size_t i = lo; i < hi; ++i) {
                Rng rng(seed_j, i);
                const auto rows = scheme.draw(n, rng);
                if (rows.size() != n * d) throw std::invalid_argument("multivariate_clt_check: scheme returned wrong size");
                for (std::size_t k = 0; k < n; ++k) {
                    for (std::size_t a = 0; a < d; ++a) {
                        sums[i][a] += rows[k * d + a];
                        for (std::size_t b = 0; b < d; ++b) quad[i][a * d + b] += rows[k * d + a] * rows[k * d + b];
                    }
                }
                for (std::size_t p = 0; p < np; ++p) {
                    double partial = 0.0;  // t' S_{k-1}
                    for (std::size_t k = 0; k < n; ++k) {
                        double tx = 0.0;
                        for (std::size_t a = 0; a < d; ++a) tx += probes[p][a] * rows[k * d + a];
                        if (k > 0) {
                            const cplx A = std::polar(1.0, partial), B = std::polar(1.0, tx);
                            acc[c][p].a[k] += A;
                            acc[c][p].b[k] += B;
                            acc[c][p].ab[k] += A * std::conj(B);
                        }
                        partial += tx;
                    }
                }
            }
        });

        MultivariateCltStep step;
        step.n = n;
        const double R = static_cast<double>(replicates);
        std::vector<double> col(replicates), col2(replicates);
        for (std::size_t e = 0; e < d * d; ++e) {
            for (std::size_t i = 0; i < replicates; ++i) col[i] = quad[i][e];
            const auto s = summarize(col);
            step.sigma.push_back(s.mean);
            step.sigma_stderr.push_back(s.stderr_mean);
            const std::size_t a = e / d, b = e % d;
            for (std::size_t i = 0; i < replicates; ++i) {
                col[i] = sums[i][a];
                col2[i] = sums[i][b];
            }
            const auto c = sample_covariance(col, col2);
            step.sum_covariance.push_back(c.cov);
            step.sum_covariance_stderr.push_back(c.stderr_cov);
        }
        Eigen::MatrixXd sig(d, d);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                sig(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    0.5 * (step.sigma[a * d + b] + step.sigma[b * d + a]);
        step.positive_definite = sig.llt().info() == Eigen::Success;

        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t i = 0; i < replicates; ++i) col[i] = sums[i][a];
            const double v = step.sigma[a * d + a];
            step.ks_component.push_back(v > 0.0 ? ks_normal(col, std::sqrt(v)) : 1.0);
        }
        for (std::size_t p = 0; p < np; ++p) {
            ProbeReport pr;
            pr.t = probes[p];
            std::vector<cplx> a(n), b(n), ab(n);
            for (std::size_t c = 0; c < chunks; ++c)
                for (std::size_t k = 1; k < n; ++k) {
                    a[k] += acc[c][p].a[k];
                    b[k] += acc[c][p].b[k];
                    ab[k] += acc[c][p].ab[k];
                }
            for (std::size_t k = 1; k < n; ++k) {
                const cplx ma = a[k] / R, mb = b[k] / R;
                const cplx cov = ab[k] / R - ma * std::conj(mb);
                pr.dependence_sum += std::abs(cov);
                const double var0 = (1.0 - std::norm(ma)) * (1.0 - std::norm(mb)) / R;
                pr.noise_floor += std::sqrt(std::max(var0, 0.0)) * std::sqrt(std::numbers::pi) / 2.0;
            }
            double v = 0.0;
            for (std::size_t x = 0; x < d; ++x)
                for (std::size_t y = 0; y < d; ++y) v += pr.t[x] * step.sigma[x * d + y] * pr.t[y];
            for (std::size_t i = 0; i < replicates; ++i) {
                double s = 0.0;
                for (std::size_t x = 0; x < d; ++x) s += pr.t[x] * sums[i][x];
                col[i] = s;
            }
            pr.ks = v > 0.0 ? ks_normal(col, std::sqrt(v)) : 1.0;
            step.probes.push_back(std::move(pr));
        }
        rep.steps.push_back(std::move(step));
    }

    const auto& last = rep.steps.back();
    rep.verdict = std::all_of(rep.steps.begin(), rep.steps.end(), [](const auto& s) { return s.positive_definite; }) &&
                  std::all_of(last.ks_component.begin(), last.ks_component.end(),
                              [&](double k) { return k < rep.ks_threshold; }) &&
                  std::all_of(last.probes.begin(), last.probes.end(),
                              [&](const ProbeReport& p) { return p.ks < rep.ks_threshold; });
    return rep;
}

}  // namespace wdep
