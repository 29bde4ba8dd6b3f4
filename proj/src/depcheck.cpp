#include "wdep/depcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wdep/coupling.hpp"
#include "wdep/processes.hpp"
#include "wdep/rng.hpp"

namespace wdep {

namespace {

void check_lag_grid(std::span<const std::size_t> lags, const char* who) {
    if (lags.empty()) throw std::invalid_argument(std::string(who) + ": empty lag grid");
    if (lags.front() == 0) throw std::invalid_argument(std::string(who) + ": lags must be >= 1");
    for (std::size_t i = 1; i < lags.size(); ++i)
        if (!(lags[i] > lags[i - 1])) throw std::invalid_argument(std::string(who) + ": lag grid must be increasing");
}

double apply_profile(Profile p, double u) {
    switch (p) {
        case Profile::ramp: return std::clamp(u, -1.0, 1.0);
        case Profile::step: return std::clamp(u, 0.0, 1.0);
        case Profile::tent: return std::max(0.0, 1.0 - std::abs(u));
        case Profile::constant: return 1.0;
    }
    return 0.0;
}

std::vector<double> evaluate_on(const TestFunction& f, const std::vector<std::vector<double>>& windows,
                                std::size_t first) {
    std::vector<double> out(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        out[i] = f(std::span<const double>(windows[i]).subspan(first, f.arity()));
    return out;
}

TestFunction draw_function(Rng& rng, std::size_t arity, const std::string& id) {
    static constexpr double kScales[] = {0.25, 0.5, 1.0, 2.0};
    static constexpr double kWidths[] = {0.1, 0.25, 0.5};
    TestFunction f;
    f.id = id;
    f.profile = static_cast<Profile>(rng.below(3));
    f.amplitude = 0.25 + 0.75 * rng.uniform();
    f.weights.assign(arity, 0.0);
    if (arity == 1 || rng.below(3) == 0) {
        f.weights[rng.below(arity)] = 1.0;
    } else {
        double top = 0.0;
        for (auto& w : f.weights) {
            w = (rng.below(2) == 0 ? -1.0 : 1.0) * (0.2 + 0.8 * rng.uniform());
            top = std::max(top, std::abs(w));
        }
        for (auto& w : f.weights) w /= top;
    }
    f.center = -1.5 + 3.0 * rng.uniform();
    f.scale = f.profile == Profile::step ? kWidths[rng.below(3)] : kScales[rng.below(4)];
    return f;
}

std::optional<LinearFit> fit_points(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) return std::nullopt;
    return fit_line(x, y);
}

}  // namespace

const char* to_string(Profile profile) {
    switch (profile) {
        case Profile::ramp: return "ramp";
        case Profile::step: return "step";
        case Profile::tent: return "tent";
        case Profile::constant: return "constant";
    }
    return "unknown";
}

double TestFunction::lip() const {
    if (profile == Profile::constant) return 0.0;
    double top = 0.0;
    for (double w : weights) top = std::max(top, std::abs(w));
    return amplitude * top / scale;
}

double TestFunction::sup_bound() const { return std::abs(amplitude); }

double TestFunction::operator()(std::span<const double> x) const {
    if (x.size() != weights.size()) throw std::invalid_argument("TestFunction: arity mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * x[i];
    return amplitude * apply_profile(profile, (s - center) / scale);
}

TestFunction clamp_function(double center, double scale) {
    return {"clamp", Profile::ramp, 1.0, {1.0}, center, scale};
}

TestFunction smoothed_indicator(double s, double w) {
    return {"indicator", Profile::step, 1.0, {1.0}, s, w};
}

TestFunction constant_function(std::size_t arity, double value) {
    return {"constant", Profile::constant, value, std::vector<double>(arity, 0.0), 0.0, 1.0};
}

std::vector<std::pair<std::size_t, std::size_t>> default_arity_pairs() { return {{1, 1}, {2, 1}, {2, 2}}; }

std::vector<TestPair> make_bank(std::span<const std::pair<std::size_t, std::size_t>> arity_pairs, std::size_t size,
                                std::uint64_t seed) {
    if (size == 0) throw std::invalid_argument("make_bank: size must be >= 1");
    std::vector<TestPair> bank;
    for (std::size_t group = 0; group < arity_pairs.size(); ++group) {
        const auto [k, l] = arity_pairs[group];
        if (k == 0 || l == 0) throw std::invalid_argument("make_bank: arities must be >= 1");
        const std::string tag = "k" + std::to_string(k) + "l" + std::to_string(l) + "#";
        Rng rng(seed, group);
        for (std::size_t j = 0; j < size; ++j) {
            const std::string id = tag + std::to_string(j);
            TestPair pair;
            if (j == 0) {
                pair.g = {id + "g", Profile::ramp, 1.0, std::vector<double>(k, 0.0), 0.0, 1.0};
                pair.g.weights.back() = 1.0;
                pair.h = {id + "h", Profile::ramp, 1.0, std::vector<double>(l, 0.0), 0.0, 1.0};
                pair.h.weights.front() = 1.0;
            } else {
                pair.g = draw_function(rng, k, id + "g");
                pair.h = draw_function(rng, l, id + "h");
            }
            bank.push_back(std::move(pair));
        }
    }
    return bank;
}

std::vector<TestFunction> past_functions(std::span<const TestPair> bank) {
    std::vector<TestFunction> out;
    out.reserve(bank.size());
    for (const auto& p : bank) out.push_back(p.g);
    return out;
}

CovarianceGap covariance_gap(const ProcessModel& model, std::span<const long long> s_idx,
                             std::span<const long long> t_idx, const TestFunction& g, const TestFunction& h,
                             std::size_t replicates, std::uint64_t seed, const SamplingOptions& options) {
    if (s_idx.size() != g.arity() || t_idx.size() != h.arity())
        throw std::invalid_argument("covariance_gap: index tuples must match the function arities");
    if (s_idx.empty() || t_idx.empty()) throw std::invalid_argument("covariance_gap: empty index tuple");
    const long long s_max = *std::max_element(s_idx.begin(), s_idx.end());
    const long long t_min = *std::min_element(t_idx.begin(), t_idx.end());
    if (!(s_max < t_min)) throw std::invalid_argument("covariance_gap: need max(s) < min(t)");
    const long long lo = *std::min_element(s_idx.begin(), s_idx.end());
    const long long hi = *std::max_element(t_idx.begin(), t_idx.end());
    const auto windows =
        sample_windows(model, static_cast<std::size_t>(hi - lo + 1), replicates, seed, options);
    std::vector<double> gv(replicates), hv(replicates);
    std::vector<double> xs(s_idx.size()), xt(t_idx.size());
    for (std::size_t i = 0; i < replicates; ++i) {
        for (std::size_t j = 0; j < s_idx.size(); ++j) xs[j] = windows[i][static_cast<std::size_t>(s_idx[j] - lo)];
        for (std::size_t j = 0; j < t_idx.size(); ++j) xt[j] = windows[i][static_cast<std::size_t>(t_idx[j] - lo)];
        gv[i] = g(xs);
        hv[i] = h(xt);
    }
    const auto c = sample_covariance(gv, hv);
    return {c.cov, c.stderr_cov, options.mode == SamplingMode::time_average};
}

BoundConstant ar_bound_constant(const ARModel& model, double eps) {
    const Envelope env = ar_envelope(model.theta(), eps);
    if (!(env.rho_eps < 1.0)) throw std::invalid_argument("ar_bound_constant: rho_eps must be < 1");
    return {2.0 * env.k_eps * model.innovation().abs_mean() / (1.0 - env.rho_eps), env.rho_eps};
}

BoundConstant bootstrap_bound_constant(const ARFit& fit, double eps) {
    const Envelope env = ar_envelope(fit.theta_hat, eps);
    if (!(env.rho_eps < 1.0)) throw std::invalid_argument("bootstrap_bound_constant: rho_eps must be < 1");
    const double k_tilde = env.k_eps / (1.0 - env.rho_eps);
    return {2.0 * k_tilde * std::sqrt(fit.innovation_second_moment), env.rho_eps};
}

DependenceAudit audit(const ProcessModel& model, WeakDepKind kind, std::span<const std::size_t> lags,
                      std::span<const TestPair> bank, std::size_t replicates, std::uint64_t seed,
                      const AuditOptions& options) {
    check_lag_grid(lags, "audit");
    if (bank.empty()) throw std::invalid_argument("audit: empty bank");
    if (replicates < 2) throw std::invalid_argument("audit: need at least two replicates");

    DependenceAudit out;
    out.kind = kind;
    out.lags.assign(lags.begin(), lags.end());
    if (options.bound) {
        out.bound_available = true;
        out.bound = *options.bound;
    } else if (const auto* ar = std::get_if<ARModel>(&model)) {
        out.bound_available = true;
        out.bound = ar_bound_constant(*ar, options.eps);
    }

    std::size_t width = 0;
    for (const auto& p : bank) width = std::max(width, p.g.arity() + lags.back() + p.h.arity() - 1);
    const auto windows = sample_windows(model, width, replicates, seed, options.sampling);

    const std::size_t np = bank.size(), nl = lags.size();
    std::vector<std::vector<double>> gvals(np);
    for_each_index(options.sampling.exec, np, [&](std::size_t p) { gvals[p] = evaluate_on(bank[p].g, windows, 0); });
    std::vector<CovarianceEstimate> cov(np * nl);
    for_each_index(options.sampling.exec, np * nl, [&](std::size_t task) {
        const std::size_t p = task / nl, j = task % nl;
        const auto hv = evaluate_on(bank[p].h, windows, bank[p].g.arity() - 1 + lags[j]);
        cov[task] = sample_covariance(gvals[p], hv);
    });

    out.eps_hat.assign(nl, 0.0);
    out.stderr.assign(nl, 0.0);
    out.stderr_max.assign(nl, 0.0);
    out.worst_g.assign(nl, "");
    out.worst_h.assign(nl, "");
    if (out.bound_available) out.theory_bound.assign(nl, 0.0);
    for (std::size_t j = 0; j < nl; ++j) {
        const double geo = out.bound_available ? std::pow(out.bound.rho_eps, static_cast<double>(lags[j])) : 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            const auto& [g, h] = bank[p];
            const auto& c = cov[p * nl + j];
            const double a = std::abs(c.cov);
            const double psi = psi_value(kind, static_cast<double>(g.arity()), static_cast<double>(h.arity()),
                                         g.lip(), h.lip());
            const double bound =
                g.sup_bound() * h.lip() * out.bound.k * static_cast<double>(h.arity()) * geo;
            if (psi > 0.0) {
                const double ratio = a / psi;
                out.stderr_max[j] = std::max(out.stderr_max[j], c.stderr_cov / psi);
                if (ratio > out.eps_hat[j] || out.worst_g[j].empty()) {
                    out.eps_hat[j] = ratio;
                    out.stderr[j] = c.stderr_cov / psi;
                    out.worst_g[j] = g.id;
                    out.worst_h[j] = h.id;
                }
                if (out.bound_available) out.theory_bound[j] = std::max(out.theory_bound[j], bound / psi);
            }
            if (!out.bound_available) continue;
            ++out.checks;
            const double excess = a - bound;
            if (c.stderr_cov > 0.0) out.worst_excess_se = std::max(out.worst_excess_se, excess / c.stderr_cov);
            if (excess > options.tolerance_se * c.stderr_cov) ++out.violations;
        }
    }
    out.passed = out.violations == 0;
    return out;
}

std::optional<LinearFit> resolved_log_fit(std::span<const std::size_t> lags, std::span<const double> values,
                                          std::span<const double> stderrs, double resolve_se) {
    std::vector<double> r, lv;
    for (std::size_t j = 0; j < lags.size(); ++j) {
        if (values[j] > 0.0 && values[j] > resolve_se * stderrs[j]) {
            r.push_back(static_cast<double>(lags[j]));
            lv.push_back(std::log(values[j]));
        }
    }
    return fit_points(r, lv);
}

DecayShape decay_shape(std::span<const std::size_t> lags, std::span<const double> values,
                       std::span<const double> stderrs, double resolve_se) {
    DecayShape shape;
    std::vector<double> r, logr, lv;
    for (std::size_t j = 0; j < lags.size(); ++j) {
        if (values[j] > 0.0 && values[j] > resolve_se * stderrs[j]) {
            r.push_back(static_cast<double>(lags[j]));
            logr.push_back(std::log(static_cast<double>(lags[j])));
            lv.push_back(std::log(values[j]));
        }
    }
    shape.geometric = fit_points(r, lv);
    shape.power = fit_points(logr, lv);
    // Nothing resolved above noise: no detectable dependence.
    if (!shape.geometric) {
        shape.summable_looking = true;
    } else if (shape.geometric->r_squared >= shape.power->r_squared) {
        shape.summable_looking = shape.geometric->slope < 0.0;
    } else {
        shape.summable_looking = shape.power->slope < -1.0;
    }
    return shape;
}

CausalConditionAudit causal_condition_audit(const ProcessModel& model, std::span<const std::size_t> lags,
                                            std::span<const TestFunction> bank, std::size_t replicates,
                                            std::uint64_t seed, const SamplingOptions& options) {
    check_lag_grid(lags, "causal_condition_audit");
    if (bank.empty()) throw std::invalid_argument("causal_condition_audit: empty bank");
    if (replicates < 2) throw std::invalid_argument("causal_condition_audit: need at least two replicates");
    std::size_t width = 0;
    for (const auto& g : bank) width = std::max(width, g.arity() + lags.back());
    const auto windows = sample_windows(model, width, replicates, seed, options);

    const std::size_t nb = bank.size(), nl = lags.size();
    std::vector<std::vector<double>> gvals(nb);
    std::vector<double> l2norm(nb);
    for_each_index(options.exec, nb, [&](std::size_t b) {
        gvals[b] = evaluate_on(bank[b], windows, 0);
        double s = 0.0;
        for (double v : gvals[b]) s += v * v;
        l2norm[b] = std::sqrt(s / static_cast<double>(replicates));
    });
    std::vector<CovarianceEstimate> cov(nb * nl);
    for_each_index(options.exec, nb * nl, [&](std::size_t task) {
        const std::size_t b = task / nl, j = task % nl;
        const std::size_t t = bank[b].arity() - 1 + lags[j];
        std::vector<double> xt(replicates);
        for (std::size_t i = 0; i < replicates; ++i) xt[i] = windows[i][t];
        cov[task] = sample_covariance(gvals[b], xt);
    });

    CausalConditionAudit out;
    out.lags.assign(lags.begin(), lags.end());
    out.cond_l2.assign(nl, 0.0);
    out.stderr_l2.assign(nl, 0.0);
    out.cond_sup.assign(nl, 0.0);
    out.stderr_sup.assign(nl, 0.0);
    for (std::size_t j = 0; j < nl; ++j) {
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& c = cov[b * nl + j];
            if (l2norm[b] > 0.0) {
                const double v = std::abs(c.cov) / l2norm[b];
                if (v > out.cond_l2[j]) {
                    out.cond_l2[j] = v;
                    out.stderr_l2[j] = c.stderr_cov / l2norm[b];
                }
            }
            const double sup = bank[b].sup_bound();
            if (sup > 0.0) {
                const double v = std::abs(c.cov) / sup;
                if (v > out.cond_sup[j]) {
                    out.cond_sup[j] = v;
                    out.stderr_sup[j] = c.stderr_cov / sup;
                }
            }
        }
    }
    out.shape_l2 = decay_shape(out.lags, out.cond_l2, out.stderr_l2);
    out.shape_sup = decay_shape(out.lags, out.cond_sup, out.stderr_sup);
    return out;
}

PairsCondition empirical_pairs_condition(const ProcessModel& model, const MarginalTransform& to_uniform,
                                         std::span<const std::size_t> lags, std::size_t replicates,
                                         std::uint64_t seed, const PairsOptions& options) {
    check_lag_grid(lags, "empirical_pairs_condition");
    if (replicates < 2) throw std::invalid_argument("empirical_pairs_condition: need at least two replicates");
    if (options.inner_spacings.empty()) throw std::invalid_argument("empirical_pairs_condition: no inner spacings");
    std::vector<std::pair<double, double>> intervals;
    for (std::size_t a = 0; a < options.interval_grid.size(); ++a)
        for (std::size_t b = a + 1; b < options.interval_grid.size(); ++b)
            if (options.interval_grid[a] < options.interval_grid[b])
                intervals.emplace_back(options.interval_grid[a], options.interval_grid[b]);
    if (intervals.empty()) throw std::invalid_argument("empirical_pairs_condition: interval grid has no intervals");

    const std::size_t dmax = *std::max_element(options.inner_spacings.begin(), options.inner_spacings.end());
    auto windows = sample_windows(model, 2 * dmax + lags.back() + 1, replicates, seed, options.sampling);
    for (auto& w : windows)
        for (auto& x : w) x = to_uniform(x);

    const std::size_t nd = options.inner_spacings.size();
    const std::size_t ni = intervals.size(), nl = lags.size();
    const std::size_t per_lag = nd * nd * ni;
    std::vector<CovarianceEstimate> cov(nl * per_lag);
    for_each_index(options.sampling.exec, cov.size(), [&](std::size_t task) {
        const std::size_t j = task / per_lag;
        std::size_t rest = task % per_lag;
        const std::size_t d1 = options.inner_spacings[rest / (nd * ni)];
        rest %= nd * ni;
        const std::size_t d2 = options.inner_spacings[rest / ni];
        const auto [s, t] = intervals[rest % ni];
        const std::size_t t2 = d1, t3 = d1 + lags[j], t4 = t3 + d2;
        auto f = [s, t](double u) { return (s < u && u <= t) ? 1.0 : 0.0; };
        std::vector<double> left(replicates), right(replicates);
        for (std::size_t i = 0; i < replicates; ++i) {
            const auto& w = windows[i];
            left[i] = f(w[0]) * f(w[t2]);
            right[i] = f(w[t3]) * f(w[t4]);
        }
        cov[task] = sample_covariance(left, right);
    });

    PairsCondition out;
    out.lags.assign(lags.begin(), lags.end());
    out.nu = options.nu;
    out.eps_hat.assign(nl, 0.0);
    out.stderr.assign(nl, 0.0);
    out.worst_interval.assign(nl, intervals.front());
    for (std::size_t j = 0; j < nl; ++j) {
        for (std::size_t k = 0; k < per_lag; ++k) {
            const auto& c = cov[j * per_lag + k];
            if (std::abs(c.cov) > out.eps_hat[j]) {
                out.eps_hat[j] = std::abs(c.cov);
                out.stderr[j] = c.stderr_cov;
                out.worst_interval[j] = intervals[k % ni];
            }
        }
    }
    out.shape = decay_shape(out.lags, out.eps_hat, out.stderr);
    if (!out.shape.geometric) {
        out.meets_rate = true;
    } else if (out.shape.geometric->r_squared >= out.shape.power->r_squared) {
        out.meets_rate = out.shape.geometric->slope < 0.0;
    } else {
        out.meets_rate = out.shape.power->slope < -2.5 - out.nu;
    }
    return out;
}

}  // namespace wdep
