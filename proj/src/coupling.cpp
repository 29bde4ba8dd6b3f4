#include "wdep/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wdep/processes.hpp"

namespace wdep {

namespace {

void check_lags(std::span<const std::size_t> lags) {
    if (lags.empty()) throw std::invalid_argument("coupling: empty lag grid");
    for (std::size_t i = 1; i < lags.size(); ++i)
        if (!(lags[i] > lags[i - 1])) throw std::invalid_argument("coupling: lag grid must be strictly increasing");
}

std::vector<double> ar_recursion(const std::vector<double>& theta, const std::vector<double>& e) {
    std::vector<double> x(e.size(), 0.0);
    for (std::size_t i = 0; i < e.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= theta.size() && j <= i; ++j) acc += theta[j - 1] * x[i - j];
        x[i] = acc + e[i];
    }
    return x;
}

std::optional<LinearFit> log_fit(const std::vector<std::size_t>& lags, const std::vector<double>& gaps,
                                 std::size_t first) {
    std::vector<double> r, lg;
    for (std::size_t j = first; j < lags.size(); ++j) {
        if (gaps[j] > 0.0) {
            r.push_back(static_cast<double>(lags[j]));
            lg.push_back(std::log(gaps[j]));
        }
    }
    if (r.size() < 2) return std::nullopt;
    return fit_line(r, lg);
}

}  // namespace

CoupledArPair coupled_ar_pair(const ARModel& model, std::size_t burn_in, std::size_t cut_offset, std::size_t horizon,
                              Rng& rng) {
    CoupledArPair pair;
    pair.cut = burn_in + cut_offset;
    const std::size_t len = pair.cut + 1 + horizon;
    const auto& innov = model.innovation();
    pair.e.resize(len);
    pair.e_prime.resize(len);
    // Pre-cut draws come first so a replicate's history does not depend on the horizon.
    for (std::size_t t = 0; t <= pair.cut; ++t) pair.e[t] = innov.sample(rng);
    for (std::size_t t = 0; t <= pair.cut; ++t) pair.e_prime[t] = innov.sample(rng);
    for (std::size_t t = pair.cut + 1; t < len; ++t) pair.e_prime[t] = pair.e[t] = innov.sample(rng);
    pair.x = ar_recursion(model.theta(), pair.e);
    pair.x_prime = ar_recursion(model.theta(), pair.e_prime);

    // Difference path: independent part up to the cut, innovation-free after.
    std::vector<double> diff(len);
    for (std::size_t t = 0; t <= pair.cut; ++t) diff[t] = pair.x[t] - pair.x_prime[t];
    const auto& theta = model.theta();
    for (std::size_t t = pair.cut + 1; t < len; ++t) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= theta.size() && j <= t; ++j) acc += theta[j - 1] * diff[t - j];
        diff[t] = acc;
    }
    pair.d.assign(diff.begin() + static_cast<std::ptrdiff_t>(pair.cut), diff.end());
    return pair;
}

std::vector<std::vector<double>> coupling_gap_matrix(const ProcessModel& model, std::span<const std::size_t> lags,
                                                     std::size_t replicates, std::uint64_t seed,
                                                     const CouplingOptions& options) {
    check_lags(lags);
    if (replicates == 0) throw std::invalid_argument("coupling: need at least one replicate");
    if (options.block == 0) throw std::invalid_argument("coupling: block size must be >= 1");
    const auto check = stationarity_check(model);
    if (!check.ok) throw std::domain_error("coupling: model is not stationary (" + check.detail + ")");
    const std::size_t burn_in = options.burn_in.value_or(recommended_burn_in(model));
    const std::size_t horizon = lags.back() + options.block - 1;

    std::vector<std::vector<double>> gaps(replicates, std::vector<double>(lags.size(), 0.0));
    auto fill_row = [&](std::vector<double>& row, auto&& diff_at) {
        for (std::size_t j = 0; j < lags.size(); ++j) {
            double g = 0.0;
            for (std::size_t b = 0; b < options.block; ++b) g += std::abs(diff_at(lags[j] + b));
            row[j] = g;
        }
    };

    if (const auto* ar = std::get_if<ARModel>(&model)) {
        for_each_index(options.exec, replicates, [&](std::size_t i) {
            Rng rng(seed, i);
            const auto pair = coupled_ar_pair(*ar, burn_in, options.cut_offset, horizon, rng);
            fill_row(gaps[i], [&](std::size_t r) { return pair.d[r]; });
        });
        return gaps;
    }

    // Generic route: two panels agreeing strictly after the cut, evaluated in full.
    const std::size_t cut = options.cut_offset;
    const auto layout = path_layout(model, cut + horizon + 1, burn_in);
    const std::size_t cut_index = layout.offset + cut;
    const auto& innov = innovation_of(model);
    for_each_index(options.exec, replicates, [&](std::size_t i) {
        Rng rng(seed, i);
        std::vector<double> a(layout.panel_length), b(layout.panel_length);
        for (std::size_t t = 0; t <= cut_index; ++t) a[t] = innov.sample(rng);
        for (std::size_t t = 0; t <= cut_index; ++t) b[t] = innov.sample(rng);
        for (std::size_t t = cut_index + 1; t < a.size(); ++t) b[t] = a[t] = innov.sample(rng);
        const auto x = evaluate_path(model, a, layout);
        const auto y = evaluate_path(model, b, layout);
        fill_row(gaps[i], [&](std::size_t r) { return x[cut + r] - y[cut + r]; });
    });
    return gaps;
}

GapEstimate couple_linear(const ARModel& model, std::size_t r, std::size_t replicates, std::uint64_t seed,
                          const CouplingOptions& options) {
    if (r == 0) throw std::invalid_argument("couple_linear: lag must be >= 1");
    const std::size_t lag[] = {r};
    const auto gaps = coupling_gap_matrix(model, lag, replicates, seed, options);
    std::vector<double> column(replicates);
    for (std::size_t i = 0; i < replicates; ++i) column[i] = gaps[i][0];
    const auto s = summarize(column);
    return {s.mean, s.stderr_mean, replicates};
}

double theoretical_tau_bound(const ARModel& model, std::size_t r, std::size_t l, double eps) {
    const Envelope env = ar_envelope(model.theta(), eps);
    if (!(env.rho_eps < 1.0)) throw std::invalid_argument("theoretical_tau_bound: rho_eps must be < 1");
    return 2.0 * static_cast<double>(l) * env.k_eps * std::pow(env.rho_eps, static_cast<double>(r)) *
           model.innovation().abs_mean() / (1.0 - env.rho_eps);
}

ContractionEstimate contraction_coefficient(const NonlinearARModel& model, std::span<const double> grid,
                                            std::size_t replicates, std::uint64_t seed, SlopeModulus modulus,
                                            Exec exec) {
    if (grid.empty()) throw std::invalid_argument("contraction_coefficient: empty grid");
    if (replicates < 2) throw std::invalid_argument("contraction_coefficient: need at least two replicates");
    std::vector<double> eps(replicates);
    for_each_index(exec, replicates, [&](std::size_t i) {
        Rng rng(seed, i);
        eps[i] = model.innovation().sample(rng);
    });
    const auto& m = model.map();
    ContractionEstimate out;
    out.grid.assign(grid.begin(), grid.end());
    out.mean_modulus.resize(grid.size());
    std::vector<double> stderrs(grid.size());
    for_each_index(exec, grid.size(), [&](std::size_t g) {
        const double mx = m(grid[g]);
        std::vector<double> vals(replicates);
        for (std::size_t i = 0; i < replicates; ++i) {
            const double z = mx + eps[i];
            vals[i] = modulus == SlopeModulus::local ? m.slope_modulus(z) : m.chord_modulus(z);
        }
        const auto s = summarize(vals);
        out.mean_modulus[g] = s.mean;
        stderrs[g] = s.stderr_mean;
    });
    const auto best = std::max_element(out.mean_modulus.begin(), out.mean_modulus.end()) - out.mean_modulus.begin();
    out.rho_hat = out.mean_modulus[static_cast<std::size_t>(best)];
    out.stderr_rho = stderrs[static_cast<std::size_t>(best)];
    out.argmax = grid[static_cast<std::size_t>(best)];
    return out;
}

std::vector<double> default_contraction_grid(const NonlinearARModel& model, std::size_t points) {
    if (points < 2) throw std::invalid_argument("default_contraction_grid: need at least two points");
    double sd = std::sqrt(model.innovation().variance());
    if (model.map().lipschitz() < 1.0) {
        const auto ts = simulate(model, 10000, std::nullopt, 0);
        sd = std::sqrt(summarize(ts.values).variance);
    }
    if (!(sd > 0.0)) sd = 1.0;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = -5.0 * sd + 10.0 * sd * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

NonlinearCoupling coupled_decay_nonlinear(const NonlinearARModel& model, double x, double y, std::size_t k,
                                          std::size_t replicates, std::uint64_t seed,
                                          std::optional<std::vector<double>> grid, Exec exec) {
    if (k == 0) throw std::invalid_argument("coupled_decay_nonlinear: horizon must be >= 1");
    if (replicates < 2) throw std::invalid_argument("coupled_decay_nonlinear: need at least two replicates");
    const auto& m = model.map();
    std::vector<double> gaps(replicates);
    for_each_index(exec, replicates, [&](std::size_t i) {
        Rng rng(seed, i);
        double a = x, b = y;
        for (std::size_t j = 0; j < k; ++j) {
            const double e = model.innovation().sample(rng);
            a = m(a) + e;
            b = m(b) + e;
        }
        gaps[i] = std::abs(a - b);
    });
    NonlinearCoupling out;
    const auto s = summarize(gaps);
    out.gap = {s.mean, s.stderr_mean, replicates};
    const auto g = grid ? *grid : default_contraction_grid(model);
    out.contraction = contraction_coefficient(model, g, replicates, splitmix64(seed), SlopeModulus::chord, exec);
    out.delta_x = m.chord_modulus(x);
    out.bound = std::pow(out.contraction.rho_hat, static_cast<double>(k - 1)) * out.delta_x * std::abs(x - y);
    out.bound_applicable = out.contraction.rho_hat + 2.0 * out.contraction.stderr_rho < 1.0;
    out.within_bound =
        !out.bound_applicable || out.gap.mean_gap <= out.bound * (1.0 + 1e-12) + 3.0 * out.gap.stderr_gap;
    return out;
}

TauCurve tau_curve(const ProcessModel& model, std::span<const std::size_t> lags, std::size_t replicates,
                   std::uint64_t seed, const CouplingOptions& options) {
    const auto gaps = coupling_gap_matrix(model, lags, replicates, seed, options);
    TauCurve curve;
    auto& est = curve.estimate;
    est.lags.assign(lags.begin(), lags.end());
    est.replicates = replicates;
    std::vector<double> column(replicates);
    for (std::size_t j = 0; j < lags.size(); ++j) {
        for (std::size_t i = 0; i < replicates; ++i) column[i] = gaps[i][j];
        const auto s = summarize(column);
        est.mean_gap.push_back(s.mean);
        est.stderr_gap.push_back(s.stderr_mean);
    }
    curve.log_fit = log_fit(est.lags, est.mean_gap, 0);
    curve.tail_log_fit = log_fit(est.lags, est.mean_gap, lags.size() / 2);
    return curve;
}

}  // namespace wdep
