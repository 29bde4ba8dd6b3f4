#include "wdep/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wdep/limits.hpp"
#include "wdep/stats.hpp"

namespace wdep {

RhoSequence RhoSequence::geometric(double c, double q) {
    if (!(c >= 0.0) || !(q >= 0.0) || !(q < 1.0)) throw std::invalid_argument("RhoSequence: need c >= 0 and 0 <= q < 1");
    RhoSequence r;
    r.kind = Kind::geometric;
    r.c = c;
    r.q = q;
    return r;
}

RhoSequence RhoSequence::explicit_list(std::vector<double> values) {
    for (std::size_t s = 0; s < values.size(); ++s) {
        if (!(values[s] >= 0.0)) throw std::invalid_argument("RhoSequence: values must be nonnegative");
        if (s > 0 && values[s] > values[s - 1]) throw std::invalid_argument("RhoSequence: values must be nonincreasing");
    }
    RhoSequence r;
    r.kind = Kind::explicit_values;
    r.values = std::move(values);
    return r;
}

double RhoSequence::operator()(std::size_t s) const {
    if (kind == Kind::geometric) return s == 0 ? c : c * std::pow(q, static_cast<double>(s));
    return s < values.size() ? values[s] : 0.0;
}

std::string RhoSequence::describe() const {
    std::ostringstream os;
    if (kind == Kind::geometric) {
        os << "geometric(" << format_double(c) << "," << format_double(q) << ")";
    } else {
        os << "explicit(";
        for (std::size_t s = 0; s < values.size(); ++s) os << (s ? "," : "") << format_double(values[s]);
        os << ")";
    }
    return os.str();
}

double psi_bound(PsiVariant variant, double u, double v, double alpha) {
    switch (variant) {
        case PsiVariant::a: return 2.0 * v;
        case PsiVariant::b: return u + v;
        case PsiVariant::c: return u * v;
        case PsiVariant::d:
            if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("psi_bound: alpha must lie in (0, 1)");
            return alpha * (u + v) + (1.0 - alpha) * u * v;
    }
    return 0.0;
}

PsiVariant parse_psi_variant(const std::string& name) {
    if (name == "a") return PsiVariant::a;
    if (name == "b") return PsiVariant::b;
    if (name == "c") return PsiVariant::c;
    if (name == "d") return PsiVariant::d;
    throw std::invalid_argument("unknown psi variant '" + name + "' (expected a, b, c or d)");
}

const char* to_string(PsiVariant variant) {
    switch (variant) {
        case PsiVariant::a: return "a";
        case PsiVariant::b: return "b";
        case PsiVariant::c: return "c";
        case PsiVariant::d: return "d";
    }
    return "?";
}

double premise_bound(const BoundParams& params, std::size_t u, std::size_t v, std::size_t r) {
    if (u == 0 || v == 0) throw std::invalid_argument("premise_bound: u and v must be positive");
    const double uv = static_cast<double>(u + v);
    return params.K * params.K * std::pow(params.M, uv - 2.0) * std::pow(std::tgamma(uv + 1.0), params.nu) *
           psi_bound(params.psi, static_cast<double>(u), static_cast<double>(v), params.alpha) * params.rho(r);
}

double rho_moment_series(const RhoSequence& rho, std::size_t k) {
    const double kd = static_cast<double>(k);
    if (rho.kind == RhoSequence::Kind::explicit_values) {
        double sum = 0.0;
        for (std::size_t s = 0; s < rho.values.size(); ++s) sum += std::pow(s + 1.0, kd) * rho.values[s];
        return sum;
    }
    if (rho.q == 0.0 || rho.c == 0.0) return rho.c;
    // terms (s+1)^k q^s peak near s = k / -log q
    const double peak = kd / -std::log(rho.q);
    double sum = 0.0;
    for (std::size_t s = 0; s < 100000000; ++s) {
        const double term = rho.c * std::exp(kd * std::log(s + 1.0) + static_cast<double>(s) * std::log(rho.q));
        sum += term;
        if (static_cast<double>(s) > peak && term < 1e-17 * sum) return sum;
    }
    throw std::runtime_error("rho_moment_series: series did not converge");
}

SeriesCheck check_rho_series(const BoundParams& params, std::size_t k_max) {
    SeriesCheck check;
    for (std::size_t k = 0; k <= k_max; ++k) {
        const double kd = static_cast<double>(k);
        const double series = rho_moment_series(params.rho, k);
        const double cap = params.L1 * std::pow(params.L2, kd) * std::pow(std::tgamma(kd + 1.0), params.mu);
        check.series.push_back(series);
        check.cap.push_back(cap);
        if (series > cap * (1.0 + 1e-12)) check.ok = false;
    }
    return check;
}

GeometricRhoConstants geometric_rho_constants(double c, double q, std::size_t k_max) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("geometric_rho_constants: need 0 < q < 1");
    if (!(c > 0.0)) throw std::invalid_argument("geometric_rho_constants: need c > 0");
    GeometricRhoConstants out;
    out.L1 = c / (1.0 - q);
    out.L2 = 1.0 / (1.0 - q);
    out.mu = 1.0;
    BoundParams params;
    params.L1 = out.L1;
    params.L2 = out.L2;
    params.mu = out.mu;
    params.rho = RhoSequence::geometric(c, q);
    out.check = check_rho_series(params, k_max);
    if (!out.check.ok) throw std::logic_error("geometric_rho_constants: series exceeds L1 L2^k k!");
    return out;
}

double bernstein_b(const BoundParams& params, double a_n, std::size_t n) {
    if (!(a_n > 0.0)) throw std::invalid_argument("bernstein_bound: A_n must be positive");
    const double inner = std::pow(2.0, 4.0 + params.mu + params.nu) * static_cast<double>(n) * params.K * params.K *
                         params.L1 / a_n;
    return 2.0 * std::max(params.K, params.M) * params.L2 * std::max(inner, 1.0);
}

double bernstein_bound(const BoundParams& params, double a_n, std::size_t n, double t) {
    const double b = bernstein_b(params, a_n, n);
    if (!(t >= 0.0)) throw std::invalid_argument("bernstein_bound: t must be >= 0");
    const double order = params.mu + params.nu + 2.0;
    const double denom = a_n + std::pow(b, 1.0 / order) * std::pow(t, (2.0 * params.mu + 2.0 * params.nu + 3.0) / order);
    return std::exp(-(t * t / 2.0) / denom);
}

std::uint64_t checked_factorial(unsigned n) {
    if (n > 20) throw std::overflow_error("checked_factorial: n! overflows 64 bits for n > 20");
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

namespace {

__extension__ typedef unsigned __int128 u128;

// Sum over ordered compositions of `rest` into `parts` parts >= 2 of 1 / prod k_i!,
// scaled by p! and carried exactly as p! / prod k_i!.
void compose(unsigned rest, unsigned parts, u128 partial, u128& total) {
    if (parts == 0) {
        if (rest == 0) total += partial;
        return;
    }
    for (unsigned k = 2; k + 2 * (parts - 1) <= rest; ++k) {
        const u128 f = checked_factorial(k);
        if (partial % f != 0) throw std::logic_error("compositions_Aup: inexact multinomial");
        compose(rest - k, parts - 1, partial / f, total);
    }
}

}  // namespace

std::uint64_t compositions_Aup(unsigned u, unsigned p) {
    if (u == 0) throw std::invalid_argument("compositions_Aup: u must be >= 1");
    if (p > 20) throw std::overflow_error("compositions_Aup: p > 20 is not supported");
    if (2 * u > p) return 0;
    u128 total = 0;
    compose(p, u, checked_factorial(p), total);
    const u128 uf = checked_factorial(u);
    if (total % uf != 0) throw std::logic_error("compositions_Aup: sum not divisible by u!");
    const u128 a = total / uf;
    if (a > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("compositions_Aup: result overflows");
    return static_cast<std::uint64_t>(a);
}

double rho_kn(const RhoSequence& rho, unsigned k, std::size_t n) {
    if (k < 2) throw std::invalid_argument("rho_kn: k must be >= 2");
    if (n < 1) throw std::invalid_argument("rho_kn: n must be >= 1");
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) sum += std::pow(s + 1.0, static_cast<double>(k) - 2.0) * rho(s);
    return sum;
}

double gaussian_moment(unsigned p) {
    if (p % 2 == 1) return 0.0;
    double m = 1.0;
    for (unsigned j = p; j > 1; j -= 2) m *= j - 1;
    return m;
}

RosenthalBound rosenthal_gap_bound(unsigned p, double K, double M, std::size_t n, const RhoSequence& rho) {
    if (p < 2) throw std::invalid_argument("rosenthal_gap_bound: p must be >= 2");
    if (p > 20) throw std::overflow_error("rosenthal_gap_bound: p > 20 is not supported");
    if (!(K > 0.0) || !(M > 0.0)) throw std::invalid_argument("rosenthal_gap_bound: K and M must be positive");
    RosenthalBound out;
    const double pd = static_cast<double>(p);
    double worst = 0.0;
    for (unsigned k = 2; k <= p; ++k) {
        const double r = rho_kn(rho, k, n);
        out.rho_kn.push_back(r);
        worst = std::max(worst, std::pow(r, pd / k));
    }
    const double pf = static_cast<double>(checked_factorial(p));
    out.b_pn = pf * pf * std::pow(2.0, pd) * worst;
    const double mk = std::max(M, K);
    for (unsigned u = 1; 2 * u < p; ++u) {
        const std::uint64_t a = compositions_Aup(u, p);
        out.a_up.push_back(a);
        out.term_sum += static_cast<double>(a) * std::pow(K, 2.0 * u) * std::pow(mk, pd - 2.0 * u) *
                        std::pow(static_cast<double>(n), static_cast<double>(u));
    }
    out.bound = out.b_pn * out.term_sum;
    return out;
}

BoundParams ar1_bound_params(const ARModel& model, std::optional<double> p) {
    if (model.order() != 1) throw std::invalid_argument("ar1_bound_params: model must be AR(1)");
    const double theta = std::abs(model.theta()[0]);
    if (!(theta < 1.0)) throw std::domain_error("ar1_bound_params: need |theta| < 1");
    const auto& e = model.innovation();
    if (std::abs(e.mean()) > 1e-12) throw std::domain_error("ar1_bound_params: innovations must have zero mean");
    double norm;
    if (p) {
        if (!(*p >= 1.0)) throw std::invalid_argument("ar1_bound_params: p must be >= 1");
        norm = e.moment_norm(*p);
    } else {
        if (!e.bounded()) throw std::domain_error("ar1_bound_params: unbounded innovations need a finite p");
        norm = e.sup_norm();
    }
    BoundParams params;
    params.M = norm / (1.0 - theta);
    params.K = params.M / std::sqrt(1.0 - theta);
    params.nu = 0.0;
    params.psi = PsiVariant::b;
    if (theta == 0.0) {
        params.rho = RhoSequence::explicit_list({1.0});
        params.L1 = 1.0;
        params.L2 = 1.0;
        params.mu = 0.0;
    } else {
        const auto g = geometric_rho_constants(1.0, theta, 20);
        params.rho = RhoSequence::geometric(1.0, theta);
        params.L1 = g.L1;
        params.L2 = g.L2;
        params.mu = g.mu;
    }
    return params;
}

SumSampler model_sum_sampler(const ProcessModel& model, std::size_t n) {
    if (n == 0) throw std::invalid_argument("model_sum_sampler: n must be positive");
    auto rows = model_rows(model);
    return {n, [rows, n](Rng& rng) {
                const auto row = rows(n, rng);
                double s = 0.0;
                for (double x : row) s += x;
                return s;
            }};
}

PremiseCheck premise_check(const ProcessModel& model, const BoundParams& params, std::size_t max_order,
                           std::span<const std::size_t> gaps, std::size_t replicates, std::uint64_t seed, Exec exec) {
    if (max_order < 2) throw std::invalid_argument("premise_check: max_order must be >= 2");
    if (gaps.empty()) throw std::invalid_argument("premise_check: no gaps");
    if (replicates < 2) throw std::invalid_argument("premise_check: need at least two replicates");
    const std::size_t max_gap = *std::max_element(gaps.begin(), gaps.end());
    SamplingOptions sampling;
    sampling.exec = exec;
    const auto windows = sample_windows(model, max_order + max_gap, replicates, seed, sampling);
    PremiseCheck out;
    std::vector<double> a(replicates), b(replicates);
    for (std::size_t order = 2; order <= max_order; ++order) {
        for (std::size_t u = 1; u < order; ++u) {
            const std::size_t v = order - u;
            for (std::size_t r : gaps) {
                for (std::size_t i = 0; i < replicates; ++i) {
                    const auto& w = windows[i];
                    double pa = 1.0, pb = 1.0;
                    for (std::size_t j = 0; j < u; ++j) pa *= w[j];
                    for (std::size_t j = 0; j < v; ++j) pb *= w[u - 1 + r + j];
                    a[i] = pa;
                    b[i] = pb;
                }
                const auto est = sample_covariance(a, b);
                PremiseCheck::Cell cell{u, v, r, est.cov, est.stderr_cov, premise_bound(params, u, v, r)};
                if (std::abs(cell.cov) > cell.bound + 3.0 * cell.stderr_cov) ++out.violations;
                out.cells.push_back(cell);
            }
        }
    }
    return out;
}

namespace {

std::vector<double> draw_sums(const SumSampler& sampler, std::size_t replicates, std::uint64_t seed, Exec exec) {
    if (!sampler.draw) throw std::invalid_argument("sum sampler has no draw function");
    std::vector<double> sums(replicates);
    for_each_index(exec, replicates, [&](std::size_t i) {
        Rng rng(seed, i);
        sums[i] = sampler.draw(rng);
    });
    return sums;
}

double int_pow(double x, unsigned p) {
    double r = 1.0;
    for (unsigned j = 0; j < p; ++j) r *= x;
    return r;
}

}  // namespace

TailReport tail_check(const SumSampler& sampler, const BoundParams& params, std::span<const double> t_grid,
                      std::size_t replicates, std::uint64_t seed, const TailCheckOptions& options) {
    if (replicates < 2) throw std::invalid_argument("tail_check: need at least two replicates");
    if (t_grid.empty()) throw std::invalid_argument("tail_check: empty t grid");
    if (!(options.margin >= 0.0)) throw std::invalid_argument("tail_check: margin must be >= 0");
    const auto sums = draw_sums(sampler, replicates, seed, options.exec);
    TailReport rep;
    rep.t_grid.assign(t_grid.begin(), t_grid.end());
    rep.sigma_n2_hat = options.sigma_n2 ? *options.sigma_n2 : summarize(sums).variance;
    rep.a_n = rep.sigma_n2_hat * (1.0 + options.margin);
    rep.b_n = bernstein_b(params, rep.a_n, sampler.n);
    const double rd = static_cast<double>(replicates);
    const double z = options.tolerance_se;
    for (double t : t_grid) {
        std::size_t hits = 0;
        for (double s : sums) hits += s >= t ? 1 : 0;
        const double ph = static_cast<double>(hits) / rd;
        const double se = std::sqrt(ph * (1.0 - ph) / rd);
        const double center = ph + z * z / (2.0 * rd);
        const double half = z * std::sqrt(ph * (1.0 - ph) / rd + z * z / (4.0 * rd * rd));
        const double bound = bernstein_bound(params, rep.a_n, sampler.n, t);
        rep.exceedance.push_back(ph);
        rep.stderr.push_back(se);
        rep.wilson_upper.push_back((center + half) / (1.0 + z * z / rd));
        rep.bound.push_back(bound);
        if (ph > bound + z * se) ++rep.violations;
    }
    rep.passed = rep.violations == 0;
    return rep;
}

MomentGapReport moment_gap_check(const SumSampler& sampler, unsigned p, const BoundParams& params,
                                 std::size_t replicates, std::uint64_t seed, double tolerance_se, Exec exec) {
    if (replicates < 2) throw std::invalid_argument("moment_gap_check: need at least two replicates");
    MomentGapReport rep;
    rep.p = p;
    rep.bound = rosenthal_gap_bound(p, params.K, params.M, sampler.n, params.rho);
    const auto sums = draw_sums(sampler, replicates, seed, exec);
    std::vector<double> sp(replicates), s2(replicates);
    for (std::size_t i = 0; i < replicates; ++i) {
        sp[i] = int_pow(sums[i], p);
        s2[i] = int_pow(sums[i], 2);
    }
    rep.moment_hat = summarize(sp).mean;
    rep.sigma_n2_hat = summarize(s2).mean;
    const double ez = gaussian_moment(p);
    const double half = static_cast<double>(p) / 2.0;
    rep.gap = std::abs(rep.moment_hat - std::pow(rep.sigma_n2_hat, half) * ez);
    // influence of (mean S^p, mean S^2) on the gap
    const double slope = half * std::pow(rep.sigma_n2_hat, half - 1.0) * ez;
    std::vector<double> influence(replicates);
    for (std::size_t i = 0; i < replicates; ++i) influence[i] = sp[i] - slope * s2[i];
    rep.stderr_gap = summarize(influence).stderr_mean;
    rep.passed = rep.gap <= rep.bound.bound + tolerance_se * rep.stderr_gap;
    return rep;
}

}  // namespace wdep
