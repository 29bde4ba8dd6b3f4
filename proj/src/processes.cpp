#include "wdep/processes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "overloaded.hpp"
#include "wdep/stats.hpp"

namespace wdep {

using detail::Overloaded;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// theta(z) = 1 - sum theta_k z^k and its derivative.
std::pair<std::complex<double>, std::complex<double>> char_poly_eval(std::span<const double> theta,
                                                                     std::complex<double> z) {
    std::complex<double> p = 0.0, dp = 0.0;
    for (std::size_t k = theta.size(); k >= 1; --k) {
        dp = dp * z + p;
        p = p * z - theta[k - 1];
    }
    dp = dp * z + p;
    p = p * z + 1.0;
    return {p, dp};
}

double char_poly_scale(std::span<const double> theta, double modulus) {
    double s = 1.0, zk = 1.0;
    for (double t : theta) {
        zk *= modulus;
        s += std::abs(t) * zk;
    }
    return s;
}

bool is_gaussian(const InnovationDist& d) { return std::holds_alternative<Gaussian>(d.law()); }

// Covariances of X_t = sum_k a_k e_{t-k}: gamma(h) = var sum_k a_k a_{k+h}.
double map_autocovariance(const std::map<int, double>& a, double var, long h) {
    double s = 0.0;
    for (const auto& [k, v] : a) {
        const auto it = a.find(static_cast<int>(k + h));
        if (it != a.end()) s += v * it->second;
    }
    return var * s;
}

// sup_{t >= r} |gamma(t)| or sum_{t >= r} |gamma(t)| given gamma on 0..size-1.
double covariance_functional(const std::vector<double>& gamma, std::size_t r, bool summed) {
    double acc = 0.0;
    for (std::size_t t = r; t < gamma.size(); ++t)
        acc = summed ? acc + std::abs(gamma[t]) : std::max(acc, std::abs(gamma[t]));
    return acc;
}

ReferenceRate covariance_rate(const std::vector<double>& gamma, std::size_t r, bool summed) {
    ReferenceRate out;
    const double base = covariance_functional(gamma, 1, summed);
    if (!(base > 0.0)) {
        out.note = "no serial covariance; the coefficient vanishes for r >= 1";
        return out;
    }
    out.available = true;
    out.value = covariance_functional(gamma, r, summed) / base;
    out.note = summed ? "sum_{t>=r} |cov(X_0,X_t)|" : "sup_{t>=r} |cov(X_0,X_t)|";
    return out;
}

ReferenceRate shape(double value, std::string note) {
    ReferenceRate out;
    out.available = true;
    out.value = value;
    out.note = std::move(note);
    return out;
}

std::size_t checked_add(std::size_t a, std::size_t b) {
    if (a > std::numeric_limits<std::size_t>::max() - b) throw std::length_error("path length overflow");
    return a + b;
}

}  // namespace

CharPolyRoots char_poly_roots(std::span<const double> theta_in) {
    if (theta_in.empty()) throw std::invalid_argument("char_poly_roots: theta must be nonempty");
    std::vector<double> theta(theta_in.begin(), theta_in.end());
    while (!theta.empty() && theta.back() == 0.0) theta.pop_back();

    CharPolyRoots out;
    if (theta.empty()) {
        out.rho = kInf;
        return out;
    }
    const std::size_t d = theta.size();
    // Monic form z^d + c_{d-1} z^{d-1} + ... + c_0 after dividing by -theta_d.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const double lead = -theta[d - 1];
    for (std::size_t i = 1; i < d; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double coef = (k == 0) ? 1.0 : -theta[k - 1];
        companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d - 1)) = -coef / lead;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("char_poly_roots: eigenvalue solver failed");

    out.rho = kInf;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        std::complex<double> z = solver.eigenvalues()[i];
        // Newton polishing, keeping only steps that reduce the residual.
        for (int it = 0; it < 8; ++it) {
            const auto [p, dp] = char_poly_eval(theta, z);
            if (p == 0.0 || dp == 0.0) break;
            const std::complex<double> next = z - p / dp;
            if (std::abs(char_poly_eval(theta, next).first) >= std::abs(p)) break;
            z = next;
        }
        const double residual = std::abs(char_poly_eval(theta, z).first);
        if (residual > 1e-8 * char_poly_scale(theta, std::abs(z)))
            throw std::runtime_error("char_poly_roots: root finder did not converge");
        out.max_residual = std::max(out.max_residual, residual);
        out.rho = std::min(out.rho, std::abs(z));
        out.roots.push_back(z);
    }
    return out;
}

std::vector<double> linear_coefficients(std::span<const double> theta, std::size_t k) {
    const CharPolyRoots roots = char_poly_roots(theta);
    if (!(roots.rho > 1.0))
        throw std::domain_error("linear_coefficients: characteristic polynomial has a root inside the unit circle");
    std::vector<double> alpha(k + 1, 0.0);
    alpha[0] = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        double s = 0.0;
        for (std::size_t j = 1; j <= std::min(i, theta.size()); ++j) s += theta[j - 1] * alpha[i - j];
        alpha[i] = s;
    }
    return alpha;
}

double geometric_envelope(std::span<const double> alpha, double rho, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("geometric_envelope: eps must be positive");
    if (!(rho > 1.0)) throw std::invalid_argument("geometric_envelope: rho must exceed 1");
    const double rho_eps = (1.0 + eps) / rho;
    if (!(rho_eps < 1.0)) throw std::invalid_argument("geometric_envelope: rho_eps = (1+eps)/rho must be < 1");
    if (alpha.empty()) throw std::invalid_argument("geometric_envelope: empty coefficient vector");
    double k_eps = 0.0;
    const double log_rho_eps = std::log(rho_eps);
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (alpha[k] == 0.0) continue;
        k_eps = std::max(k_eps, std::exp(std::log(std::abs(alpha[k])) - static_cast<double>(k) * log_rho_eps));
    }
    return k_eps;
}

Envelope ar_envelope(std::span<const double> theta, double eps) {
    Envelope env;
    env.rho = char_poly_roots(theta).rho;
    if (!(env.rho > 1.0)) throw std::domain_error("ar_envelope: model is not stationary");
    env.rho_eps = (1.0 + eps) / env.rho;
    // |alpha_k| rho_eps^-k <= C k^(p-1) (1+eps)^-k peaks near k = (p-1)/log(1+eps).
    const double p = static_cast<double>(theta.size());
    env.range = std::isinf(env.rho)
                    ? theta.size() + 1
                    : static_cast<std::size_t>(std::min(1e6, std::ceil((p + 40.0) / std::log1p(eps)) + p));
    const auto alpha = linear_coefficients(theta, env.range);
    env.k_eps = geometric_envelope(alpha, std::isinf(env.rho) ? kInf : env.rho, eps);
    return env;
}

double linear_autocovariance(std::span<const double> alpha, double innovation_variance, std::size_t h) {
    double s = 0.0;
    for (std::size_t k = 0; k + h < alpha.size(); ++k) s += alpha[k] * alpha[k + h];
    return innovation_variance * s;
}

StationarityReport stationarity_check(const ProcessModel& model) {
    return std::visit(
        Overloaded{
            [](const ARModel& m) {
                StationarityReport rep;
                try {
                    const auto roots = char_poly_roots(m.theta());
                    rep.ok = roots.rho > 1.0;
                    rep.margin = roots.rho - 1.0;
                    rep.detail = "min characteristic-root modulus rho = " + format_double(roots.rho) +
                                 (rep.ok ? " > 1" : " <= 1: not causal-stationary");
                } catch (const std::exception& e) {
                    rep.detail = e.what();
                }
                return rep;
            },
            [](const NonlinearARModel& m) {
                StationarityReport rep;
                const double lip = m.map().lipschitz();
                rep.ok = lip < 1.0;
                rep.margin = 1.0 - lip;
                rep.detail = "Lipschitz constant of m = " + format_double(lip) +
                             (rep.ok ? " < 1: global contraction"
                                     : " >= 1: global contraction not certified; estimate "
                                       "sup_x E Delta(m(x)+e) with contraction_coefficient");
                return rep;
            },
            [](const ArchInfModel& m) {
                StationarityReport rep;
                const double c = m.contraction();
                rep.ok = c < 1.0;
                rep.margin = 1.0 - c;
                rep.detail = "||xi||_m^2 sum|b_j| = " + format_double(c) + (rep.ok ? " < 1" : " >= 1");
                return rep;
            },
            [](const LarchModel& m) {
                StationarityReport rep;
                const double lambda = m.lambda();
                rep.ok = lambda < 1.0;
                rep.margin = 1.0 - lambda;
                rep.detail = "lambda = ||xi||_inf sum|a_j| = " + format_double(lambda) + (rep.ok ? " < 1" : " >= 1");
                return rep;
            },
            [](const BilinearModel& m) {
                StationarityReport rep;
                const double c = m.contraction();
                rep.ok = c < 1.0;
                rep.margin = 1.0 - c;
                rep.detail = "||xi||_m (sum|a_k| + sum|c_k|) = " + format_double(c) + (rep.ok ? " < 1" : " >= 1");
                return rep;
            },
            [](const VolterraModel&) {
                return StationarityReport{true, kInf, "finite Volterra sum of i.i.d. innovations"};
            },
            [](const LinearModel& m) {
                const bool ok = std::isfinite(m.tail_mass());
                return StationarityReport{ok, ok ? kInf : 0.0,
                                          ok ? "absolutely summable linear filter" : "non-summable filter"};
            },
        },
        model);
}

std::size_t contraction_burn_in(double c, std::size_t stride) {
    if (!(c < 1.0)) throw std::domain_error("burn-in: contraction factor must be < 1");
    if (c <= 0.0) return stride;
    return stride * static_cast<std::size_t>(std::ceil(std::log(1e-10) / std::log(c)));
}

std::size_t recommended_burn_in(const ProcessModel& model) {
    return std::visit(
        Overloaded{
            [](const ARModel& m) -> std::size_t {
                const double rho = char_poly_roots(m.theta()).rho;
                if (std::isinf(rho)) return 0;
                return contraction_burn_in(1.0 / rho);
            },
            [](const NonlinearARModel& m) -> std::size_t {
                const double lip = m.map().lipschitz();
                return lip < 1.0 ? contraction_burn_in(lip) : 1000;
            },
            [](const ArchInfModel& m) -> std::size_t {
                const std::size_t k = std::max<std::size_t>(m.k_trunc(), 1);
                return std::max(10 * k, contraction_burn_in(m.contraction(), k));
            },
            [](const LarchModel& m) -> std::size_t {
                const std::size_t k = std::max<std::size_t>(m.k_trunc(), 1);
                return 2 * std::max(10 * k, contraction_burn_in(m.lambda(), k));
            },
            [](const BilinearModel& m) -> std::size_t {
                const std::size_t k = std::max<std::size_t>(m.k_trunc(), 1);
                return std::max(10 * k, contraction_burn_in(m.contraction(), k));
            },
            [](const VolterraModel&) -> std::size_t { return 0; },
            [](const LinearModel&) -> std::size_t { return 0; },
        },
        model);
}

PathLayout path_layout(const ProcessModel& model, std::size_t n, std::size_t burn_in) {
    PathLayout layout;
    layout.n = n;
    layout.burn_in = burn_in;
    auto windowed = [&](int min_lag, int max_lag) {
        const auto lo = static_cast<std::size_t>(-std::min(min_lag, 0));
        const auto hi = static_cast<std::size_t>(std::max(max_lag, 0));
        layout.offset = checked_add(hi, burn_in);
        layout.panel_length = checked_add(checked_add(n, lo), layout.offset);
    };
    std::visit(Overloaded{
                   [&](const LarchModel& m) {
                       const std::size_t k = m.k_trunc();
                       layout.panel_length = checked_add(checked_add(n, 2 * k), burn_in);
                       layout.offset = k + burn_in / 2;
                   },
                   [&](const VolterraModel& m) { windowed(m.min_lag(), m.max_lag()); },
                   [&](const LinearModel& m) { windowed(m.min_lag(), m.max_lag()); },
                   [&](const auto&) {
                       layout.panel_length = checked_add(n, burn_in);
                       layout.offset = burn_in;
                   },
               },
               model);
    return layout;
}

std::vector<std::vector<double>> sample_windows(const ProcessModel& model, std::size_t width, std::size_t count,
                                                std::uint64_t seed, const SamplingOptions& options) {
    if (width == 0 || count == 0) throw std::invalid_argument("sample_windows: width and count must be >= 1");
    const auto check = stationarity_check(model);
    if (!check.ok) throw std::domain_error("sample_windows: model is not stationary (" + check.detail + ")");
    const std::size_t burn_in = options.burn_in.value_or(recommended_burn_in(model));
    std::vector<std::vector<double>> windows(count);
    if (options.mode == SamplingMode::time_average) {
        const auto ts = simulate(model, count + width - 1, burn_in, seed, options.exec);
        for (std::size_t i = 0; i < count; ++i)
            windows[i].assign(ts.values.begin() + static_cast<std::ptrdiff_t>(i),
                              ts.values.begin() + static_cast<std::ptrdiff_t>(i + width));
        return windows;
    }
    const auto layout = path_layout(model, width, burn_in);
    for_each_index(options.exec, count, [&](std::size_t i) {
        Rng rng(seed, i);
        windows[i] = simulate_path(model, layout, rng);
    });
    return windows;
}

LarchSolution solve_larch(const LarchModel& model, std::span<const double> xi, Exec exec, double tolerance,
                          std::size_t max_iterations) {
    const std::size_t w = xi.size();
    const std::vector<std::pair<int, double>> a(model.a().begin(), model.a().end());
    const double a0 = model.a0();
    LarchSolution sol;
    std::vector<double> x(w, 0.0), next(w, 0.0), change(w, 0.0);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        for_each_index(exec, w, [&](std::size_t t) {
            double s = a0;
            for (const auto& [k, coef] : a) {
                const auto idx = static_cast<std::ptrdiff_t>(t) - k;
                if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(w)) s += coef * x[static_cast<std::size_t>(idx)];
            }
            next[t] = xi[t] * s;
            change[t] = std::abs(next[t] - x[t]);
        });
        const double sup = w ? *std::max_element(change.begin(), change.end()) : 0.0;
        sol.sup_changes.push_back(sup);
        x.swap(next);
        if (sup < tolerance) {
            sol.window = std::move(x);
            return sol;
        }
    }
    throw std::runtime_error("LARCH fixed-point iteration did not converge within " + std::to_string(max_iterations) +
                             " sweeps");
}

std::vector<double> evaluate_path(const ProcessModel& model, std::span<const double> e, const PathLayout& layout,
                                  Exec exec) {
    if (e.size() != layout.panel_length) throw std::invalid_argument("evaluate_path: panel length mismatch");
    const std::size_t len = layout.panel_length;
    const std::size_t off = layout.offset;
    const std::size_t n = layout.n;

    // Causal recursions run over the whole panel and return the tail.
    auto causal = [&](auto&& step) {
        std::vector<double> x(len, 0.0);
        for (std::size_t i = 0; i < len; ++i) x[i] = step(x, i);
        return std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(off), x.end());
    };

    return std::visit(
        Overloaded{
            [&](const ARModel& m) {
                const auto& theta = m.theta();
                return causal([&](const std::vector<double>& x, std::size_t i) {
                    double acc = 0.0;
                    for (std::size_t j = 1; j <= theta.size() && j <= i; ++j) acc += theta[j - 1] * x[i - j];
                    return acc + e[i];
                });
            },
            [&](const NonlinearARModel& m) {
                const auto& f = m.map();
                return causal([&](const std::vector<double>& x, std::size_t i) {
                    return f(i ? x[i - 1] : 0.0) + e[i];
                });
            },
            [&](const ArchInfModel& m) {
                const auto& b = m.b();
                const double b0 = m.b0();
                return causal([&](const std::vector<double>& x, std::size_t i) {
                    double v = b0;
                    for (std::size_t k = 1; k <= b.size() && k <= i; ++k) v += b[k - 1] * x[i - k] * x[i - k];
                    return std::sqrt(v) * e[i];
                });
            },
            [&](const BilinearModel& m) {
                const auto& a = m.a();
                const auto& c = m.c();
                return causal([&](const std::vector<double>& x, std::size_t i) {
                    double sa = m.a0(), sc = m.c0();
                    for (std::size_t k = 1; k <= a.size() && k <= i; ++k) sa += a[k - 1] * x[i - k];
                    for (std::size_t k = 1; k <= c.size() && k <= i; ++k) sc += c[k - 1] * x[i - k];
                    return e[i] * sa + sc;
                });
            },
            [&](const LarchModel& m) {
                const auto sol = solve_larch(m, e, exec);
                return std::vector<double>(sol.window.begin() + static_cast<std::ptrdiff_t>(off),
                                           sol.window.begin() + static_cast<std::ptrdiff_t>(off + n));
            },
            [&](const VolterraModel& m) {
                const std::vector<std::pair<std::vector<int>, double>> terms(m.terms().begin(), m.terms().end());
                std::vector<double> x(n, 0.0);
                for_each_index(exec, n, [&](std::size_t t) {
                    double s = 0.0;
                    for (const auto& [idx, coef] : terms) {
                        double prod = coef;
                        for (int j : idx) prod *= e[off + t - static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j))];
                        s += prod;
                    }
                    x[t] = s;
                });
                return x;
            },
            [&](const LinearModel& m) {
                const std::vector<std::pair<int, double>> a(m.a().begin(), m.a().end());
                std::vector<double> x(n, 0.0);
                for_each_index(exec, n, [&](std::size_t t) {
                    double s = 0.0;
                    for (const auto& [k, coef] : a)
                        s += coef * e[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(off + t) - k)];
                    x[t] = s;
                });
                return x;
            },
        },
        model);
}

std::vector<double> simulate_path(const ProcessModel& model, const PathLayout& layout, Rng& rng, Exec exec) {
    std::vector<double> panel(layout.panel_length);
    innovation_of(model).fill(rng, panel);
    return evaluate_path(model, panel, layout, exec);
}

TimeSeries simulate(const ProcessModel& model, std::size_t n, std::optional<std::size_t> burn_in, std::uint64_t seed,
                    Exec exec) {
    if (n == 0) throw std::invalid_argument("simulate: n must be positive");
    const auto check = stationarity_check(model);
    if (!check.ok) throw std::domain_error("simulate: model is not stationary (" + check.detail + ")");
    const std::size_t minimum = recommended_burn_in(model);
    const std::size_t b = burn_in.value_or(minimum);
    if (b < minimum)
        throw std::invalid_argument("simulate: burn_in " + std::to_string(b) + " is below the recommended minimum " +
                                    std::to_string(minimum));
    Rng rng(seed, 0);
    TimeSeries ts;
    ts.values = simulate_path(model, path_layout(model, n, b), rng, exec);
    ts.model_id = model_id(model);
    ts.seed = seed;
    ts.burn_in = b;
    return ts;
}

ReferenceRate reference_rate(const ProcessModel& model, WeakDepKind kind, std::size_t r, double c) {
    if (r == 0) throw std::invalid_argument("reference_rate: lag must be >= 1");
    const double rr = static_cast<double>(r);
    const bool kappa_like = kind == WeakDepKind::kappa || kind == WeakDepKind::kappa_prime;
    const bool summed = kind == WeakDepKind::kappa_prime;
    ReferenceRate none;
    none.note = "no reference rate for this (model, kind) pair";

    return std::visit(
        Overloaded{
            [&](const ARModel& m) {
                const double rho = char_poly_roots(m.theta()).rho;
                if (kind == WeakDepKind::theta) {
                    if (std::isinf(rho)) return shape(r == 1 ? 1.0 : 0.0, "no memory");
                    return shape(std::pow(1.0 / rho, rr - 1.0), "rho^-(r-1), rho = min root modulus");
                }
                if (kappa_like && is_gaussian(m.innovation())) {
                    if (!(rho > 1.0)) return none;
                    const std::size_t horizon =
                        r + (std::isinf(rho) ? 2 : static_cast<std::size_t>(std::min(
                                                        1e6, std::ceil(std::log(1e-18) / std::log(1.0 / rho)) +
                                                                 10.0 * static_cast<double>(m.order()))));
                    const auto alpha = linear_coefficients(m.theta(), 2 * horizon);
                    std::vector<double> gamma(horizon + 1);
                    for (std::size_t h = 0; h <= horizon; ++h)
                        gamma[h] = linear_autocovariance(alpha, m.innovation().variance(), h);
                    return covariance_rate(gamma, r, summed);
                }
                return none;
            },
            [&](const LinearModel& m) {
                if (kind == WeakDepKind::eta) {
                    if (const auto* p = std::get_if<PowerDecay>(&m.profile()); p && p->exponent > 0.5)
                        return shape(std::pow(rr, -(p->exponent - 0.5)), "r^-(mu-1/2)");
                    return none;
                }
                if (kappa_like && is_gaussian(m.innovation())) {
                    const long span = m.max_lag() - m.min_lag();
                    std::vector<double> gamma(static_cast<std::size_t>(std::max<long>(span, 0)) + r + 1, 0.0);
                    for (std::size_t h = 0; h < gamma.size(); ++h)
                        gamma[h] = map_autocovariance(m.a(), m.innovation().variance(), static_cast<long>(h));
                    return covariance_rate(gamma, r, summed);
                }
                return none;
            },
            [&](const ArchInfModel& m) {
                if (kind != WeakDepKind::theta) return none;
                if (const auto* p = std::get_if<PowerDecay>(&m.profile()))
                    return shape(std::pow(rr, 1.0 - p->exponent), "r^-(nu-1)");
                return shape(std::exp(-c * (std::sqrt(rr) - 1.0)), "exp(-c (sqrt(r) - 1))");
            },
            [&](const BilinearModel& m) {
                if (kind != WeakDepKind::theta || std::holds_alternative<PowerDecay>(m.profile())) return none;
                return shape(std::exp(-c * (std::sqrt(rr) - 1.0)), "exp(-c (sqrt(r) - 1))");
            },
            [&](const LarchModel& m) {
                const auto* p = std::get_if<PowerDecay>(&m.profile());
                if (kind != WeakDepKind::eta || !p || !(p->exponent > 1.0)) return none;
                return shape(std::pow(rr, -(p->exponent - 1.0)), "r^-(mu-1)");
            },
            [&](const VolterraModel& m) {
                const auto* p = std::get_if<PowerDecay>(&m.profile());
                if (kind != WeakDepKind::eta || !p) return none;
                return shape(std::pow(rr, -(p->exponent + 1.0)), "r^-(mu+1)");
            },
            [&](const NonlinearARModel&) { return none; },
        },
        model);
}

}  // namespace wdep
