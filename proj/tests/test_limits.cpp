#include <gtest/gtest.h>

#include <cmath>

#include "wdep/bootstrap.hpp"
#include "wdep/limits.hpp"
#include "wdep/processes.hpp"

using namespace wdep;

namespace {

const ARModel kIid(std::vector<double>{0.0}, InnovationDist::gaussian(1.0));
const ARModel kIidUniform(std::vector<double>{0.0}, InnovationDist::uniform(0.0, 1.0));
const ARModel kAr1Gauss(std::vector<double>{0.5}, InnovationDist::gaussian(1.0));
const ARModel kAr1Rad(std::vector<double>{0.5}, InnovationDist::rademacher());

// sum_t theta^|t| var / (1 - theta^2), truncated once terms fall below 1e-18.
double ar1_series(double theta, double var) {
    const double gamma0 = var / (1.0 - theta * theta);
    double s = gamma0, term = gamma0;
    for (int t = 1; t < 10000; ++t) {
        term *= theta;
        s += 2.0 * term;
        if (std::abs(term) < 1e-18) break;
    }
    return s;
}

// For AR(1) theta = 1/2 with Rademacher noise, U_t = (X_t + 2) / 4 has the
// innovation signs as binary digits, so U_k = (B + U_0) / 2^k with B uniform
// on {0, ..., 2^k - 1} and independent of U_0.
double joint_below(double x, double y, int k) {
    if (k == 0) return std::min(x, y);
    const double m = std::ldexp(1.0, k);
    // integral over u in [0, x] of P(B <= m y - u)
    auto p_b = [m](double z) { return z < 0.0 ? 0.0 : std::min(std::floor(z) + 1.0, m) / m; };
    double total = 0.0, lo = 0.0;
    while (lo < x) {
        const double z = m * y - lo;
        // next breakpoint where m y - u crosses an integer from above
        double hi = z - std::floor(z) > 0.0 ? lo + (z - std::floor(z)) : lo + 1.0;
        hi = std::min(hi, x);
        total += (hi - lo) * p_b(m * y - 0.5 * (lo + hi));
        lo = hi;
    }
    return total;
}

double rademacher_bridge(double x, double y, int lags) {
    double s = joint_below(x, y, 0) - x * y;
    for (int k = 1; k <= lags; ++k) s += (joint_below(x, y, k) - x * y) + (joint_below(y, x, k) - x * y);
    return s;
}

}  // namespace

TEST(LongRun, AnalyticValues) {
    EXPECT_NEAR(ar_long_run_variance(kAr1Gauss), ar1_series(0.5, 1.0), 1e-12);
    EXPECT_NEAR(ar_long_run_variance(kAr1Gauss), 4.0, 1e-12);
    EXPECT_NEAR(ar_long_run_variance(ARModel({-0.5}, InnovationDist::gaussian(1.0))), ar1_series(-0.5, 1.0), 1e-12);
    EXPECT_NEAR(ar_long_run_variance(kIid), 1.0, 1e-15);
}

TEST(LongRun, Ar1EstimateMatchesSeries) {
    const auto est = long_run_variance(kAr1Gauss, 1000, 1);
    EXPECT_TRUE(est.cutoff_converged);
    EXPECT_GE(est.lag_cutoff, 4u);
    EXPECT_LT(est.tail_estimate, 0.01 * est.sigma2 * 1.01);
    EXPECT_NEAR(est.sigma2 + est.tail_estimate, 4.0, 3.0 * est.stderr_sigma2);
    EXPECT_NEAR(est.gamma[0], 4.0 / 3.0, 3.0 * est.gamma_stderr[0]);
    EXPECT_NEAR(est.gamma[1], 2.0 / 3.0, 3.0 * est.gamma_stderr[1]);
    EXPECT_FALSE(est.negative);
}

TEST(LongRun, NegativeCoefficientAndIid) {
    const auto neg = long_run_variance(ARModel({-0.5}, InnovationDist::gaussian(1.0)), 1000, 2);
    EXPECT_NEAR(neg.sigma2, ar1_series(-0.5, 1.0), 3.0 * neg.stderr_sigma2 + std::abs(neg.tail_estimate));
    const auto iid = long_run_variance(kIid, 1000, 3);
    EXPECT_NEAR(iid.sigma2, 1.0, 3.0 * iid.stderr_sigma2);
    LongRunOptions fixed;
    fixed.lag_cutoff = 5;
    EXPECT_EQ(long_run_variance(kIid, 200, 3, fixed).lag_cutoff, 5u);
}

TEST(Donsker, IidGaussianIsNormal) {
    const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    DonskerOptions opt;
    opt.sigma2 = 1.0;
    const auto rep = donsker_check(kIid, 2000, grid, 2000, 4, opt);
    EXPECT_LT(rep.ks_w1, 0.03);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.var_curve[0], 0.0);
    for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_NEAR(rep.var_curve[g], grid[g], 3.0 * rep.var_curve_stderr[g] + 1e-15);
    for (std::size_t g = 0; g + 1 < grid.size(); ++g)
        EXPECT_LE(std::abs(rep.increment_cov[g]), 3.0 * rep.increment_cov_stderr[g] + 1e-15);
}

TEST(Donsker, EndpointIsTheScaledFullSum) {
    const std::vector<double> grid = {0.5, 1.0};
    DonskerOptions opt;
    opt.sigma2 = 4.0;
    const std::size_t n = 37;
    const auto rep = donsker_check(kAr1Gauss, n, grid, 5, 6, opt);
    const auto layout = path_layout(kAr1Gauss, n, recommended_burn_in(kAr1Gauss));
    for (std::size_t i = 0; i < 5; ++i) {
        Rng rng(6, i);
        const auto x = simulate_path(kAr1Gauss, layout, rng);
        double full = 0.0, half = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            full += x[k];
            if (k < 18) half += x[k];
        }
        EXPECT_EQ(rep.ensemble.paths[i][1], full / std::sqrt(37.0));
        EXPECT_EQ(rep.ensemble.paths[i][0], half / std::sqrt(37.0));
    }
}

TEST(Donsker, Ar1RademacherVarianceLine) {
    std::vector<double> grid;
    for (int g = 0; g <= 10; ++g) grid.push_back(0.1 * g);
    const auto rep = donsker_check(kAr1Rad, 2000, grid, 2000, 7);
    const double sigma2 = ar1_series(0.5, 1.0);
    EXPECT_NEAR(rep.sigma2_hat, sigma2, 0.05 * sigma2);
    EXPECT_NEAR(rep.var_curve.back(), rep.sigma2_hat, 0.05 * rep.sigma2_hat);
    EXPECT_NEAR(rep.var_fit.slope, rep.sigma2_hat, 0.05 * rep.sigma2_hat);
    EXPECT_TRUE(rep.passed);
    EXPECT_GT(rep.modulus, 0.0);
}

TEST(Donsker, SerialMatchesParallel) {
    const std::vector<double> grid = {0.5, 1.0};
    DonskerOptions a, b;
    a.sigma2 = b.sigma2 = 4.0;
    a.exec = Exec::serial;
    b.exec = Exec::parallel;
    const auto x = donsker_check(kAr1Gauss, 100, grid, 64, 8, a);
    const auto y = donsker_check(kAr1Gauss, 100, grid, 64, 8, b);
    EXPECT_EQ(x.ensemble.paths, y.ensemble.paths);
    EXPECT_EQ(x.ks_w1, y.ks_w1);
}

TEST(QuantileTransformTest, RademacherMatchesExactUniform) {
    const auto q = quantile_transform(kAr1Rad, 100000, 9);
    EXPECT_FALSE(q.atomic());
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -2.0 + 4.0 * i / 400.0;
        worst = std::max(worst, std::abs(q(x) - (x + 2.0) / 4.0));
    }
    EXPECT_LT(worst, 0.01);
    const auto exact = exact_marginal_cdf(kAr1Rad);
    ASSERT_TRUE(exact.has_value());
    EXPECT_DOUBLE_EQ((*exact)(0.0), 0.5);
}

TEST(QuantileTransformTest, UniformIsNearIdentityAndFreshDataIsUniform) {
    const auto q = quantile_transform(kIidUniform, 20000, 10);
    for (double x : {0.1, 0.5, 0.9}) EXPECT_NEAR(q(x), x, 0.02);
    EXPECT_EQ(q(-1.0), 0.0);
    EXPECT_EQ(q(2.0), 1.0);
    const ARModel ar2(std::vector<double>{0.5, 0.25}, InnovationDist::gaussian(1.0));
    const auto qa = quantile_transform(ar2, 50000, 11);
    const auto fresh = sample_windows(ar2, 1, 5000, 12);
    std::vector<double> u;
    for (const auto& w : fresh) u.push_back(qa(w[0]));
    EXPECT_LT(ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); }),
              ks_critical_value(u.size()) + kKsFiniteAllowance);
}

TEST(QuantileTransformTest, ExactGaussianCdfMatchesDraws) {
    const ARModel ar2(std::vector<double>{0.5, 0.25}, InnovationDist::gaussian(1.0));
    const auto f = exact_marginal_cdf(ar2);
    ASSERT_TRUE(f.has_value());
    const auto fresh = sample_windows(ar2, 1, 20000, 13);
    std::vector<double> v;
    for (const auto& w : fresh) v.push_back(w[0]);
    EXPECT_LT(ks_statistic(v, *f), ks_critical_value(v.size()) + kKsFiniteAllowance);
    EXPECT_FALSE(exact_marginal_cdf(ARModel({0.3}, InnovationDist::rademacher())).has_value());
}

TEST(QuantileTransformTest, Errors) {
    EXPECT_THROW(quantile_transform(kIid, 5000, 1), std::invalid_argument);
    const ARModel constant(std::vector<double>{0.0}, InnovationDist::empirical({0.0, 0.0, 0.0}));
    EXPECT_THROW(quantile_transform(constant, 10000, 1), std::invalid_argument);
    const ARModel atoms(std::vector<double>{0.0}, InnovationDist::rademacher());
    EXPECT_TRUE(quantile_transform(atoms, 10000, 1).atomic());
}

TEST(EmpiricalProcess, IidUniformBridge) {
    const std::vector<double> grid = {0.25, 0.5, 0.75, 1.0};
    const auto rep = empirical_process_check(kIidUniform, [](double x) { return x; }, 500, grid, 2000, 14);
    for (const auto& c : rep.cells) {
        EXPECT_NEAR(c.cov_hat, bridge_covariance(c.x, c.y), 3.0 * c.stderr_hat + 1e-15) << c.x << "," << c.y;
        EXPECT_NEAR(c.cov_theory, bridge_covariance(c.x, c.y), 4.0 * c.stderr_theory + 1e-15);
    }
    EXPECT_DOUBLE_EQ(bridge_covariance(0.5, 0.5), 0.25);
    EXPECT_DOUBLE_EQ(bridge_covariance(0.25, 0.75), 0.0625);
    for (const auto& row : rep.ensemble.paths) ASSERT_EQ(row.back(), 0.0);
    EXPECT_TRUE(rep.passed);
}

TEST(EmpiricalProcess, RademacherMatchesExactSeries) {
    EXPECT_NEAR(joint_below(0.3, 0.6, 0), 0.3, 1e-15);
    EXPECT_NEAR(joint_below(0.3, 1.0, 5), 0.3, 1e-12);
    const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
    const auto to_u = [](double x) { return (x + 2.0) / 4.0; };
    const auto rep = empirical_process_check(kAr1Rad, to_u, 2000, grid, 2000, 15);
    EXPECT_EQ(rep.violations, 0u);
    for (const auto& c : rep.cells) {
        const double exact = rademacher_bridge(c.x, c.y, 30);
        EXPECT_NEAR(c.cov_theory, exact, 4.0 * c.stderr_theory) << c.x << "," << c.y;
        EXPECT_NEAR(c.cov_hat, exact, 4.0 * c.stderr_hat) << c.x << "," << c.y;
    }
}

TEST(Triangular, Ar1GaussianRows) {
    const std::size_t ns[] = {2000};
    const auto rep = triangular_clt_check(model_rows(kAr1Gauss), ns, 2000, 16);
    EXPECT_LT(rep.ks_distance[0], 0.04);
    EXPECT_NEAR(rep.sigma2_hat, 4.0, 3.0 * rep.sigma2_stderr[0]);
    EXPECT_TRUE(rep.verdict);
}

TEST(Triangular, LindebergVanishesForBoundedRows) {
    const std::size_t ns[] = {100, 500};
    CltOptions opt;
    opt.epsilon = 0.1;
    const auto rep = triangular_clt_check(model_rows(kAr1Rad), ns, 500, 17, opt);
    EXPECT_GT(rep.lindeberg[0], 0.0);  // 0.1 sqrt(100) = 1 < 2
    EXPECT_EQ(rep.lindeberg[1], 0.0);  // 0.1 sqrt(500) > 2
}

TEST(Triangular, BootstrapRows) {
    const auto ts = simulate(kAr1Gauss, 2000, std::nullopt, 18);
    const auto fit = fit_yule_walker(ts.values, 1);
    const std::size_t ns[] = {2000};
    const auto rep = triangular_clt_check(bootstrap_rows(fit), ns, 2000, 19);
    EXPECT_LT(rep.ks_distance[0], 0.06);
    const double fitted = ar_long_run_variance(bootstrap_model(fit));
    EXPECT_NEAR(rep.sigma2_hat, fitted, 3.0 * rep.sigma2_stderr[0] + 0.01 * fitted);
    const auto plain = triangular_clt_check(model_rows(kAr1Gauss), ns, 2000, 20);
    EXPECT_NEAR(rep.sigma2_hat, plain.sigma2_hat, 0.15 * plain.sigma2_hat);
}

TEST(Triangular, SerialMatchesParallel) {
    const std::size_t ns[] = {50, 100};
    CltOptions a, b;
    a.exec = Exec::serial;
    b.exec = Exec::parallel;
    const auto x = triangular_clt_check(model_rows(kAr1Gauss), ns, 300, 21, a);
    const auto y = triangular_clt_check(model_rows(kAr1Gauss), ns, 300, 21, b);
    EXPECT_EQ(x.ks_distance, y.ks_distance);
    EXPECT_EQ(x.sigma2, y.sigma2);
}

TEST(Multivariate, IidGaussianIdentity) {
    const auto scheme = scaled_model_rows({kIid, kIid});
    const std::size_t ns[] = {200};
    const std::vector<std::vector<double>> probes = {{1.0, 0.0}, {0.7, -0.7}};
    const auto rep = multivariate_clt_check(scheme, ns, 4000, probes, 22);
    const auto& s = rep.steps[0];
    EXPECT_TRUE(s.positive_definite);
    EXPECT_NEAR(s.sigma[0], 1.0, 3.0 * s.sigma_stderr[0]);
    EXPECT_NEAR(s.sigma[3], 1.0, 3.0 * s.sigma_stderr[3]);
    EXPECT_NEAR(s.sigma[1], 0.0, 3.0 * s.sigma_stderr[1]);
    for (const auto& p : s.probes) EXPECT_NEAR(p.dependence_sum, p.noise_floor, 0.1 * p.noise_floor);
    EXPECT_TRUE(rep.verdict);
}

TEST(Multivariate, OneDimensionMatchesTriangular) {
    const std::size_t ns[] = {500};
    const std::vector<std::vector<double>> probes = {{1.0}};
    const auto m = multivariate_clt_check(scaled_model_rows({kAr1Gauss}), ns, 3000, probes, 23);
    const auto t = triangular_clt_check(model_rows(kAr1Gauss), ns, 3000, 24);
    const auto& s = m.steps[0];
    EXPECT_NEAR(s.sum_covariance[0], t.sigma2[0], 3.0 * std::hypot(s.sum_covariance_stderr[0], t.sigma2_stderr[0]));
}

TEST(Multivariate, WindowedRowsLoseDependence) {
    // Nonzero rows sit m = n / J apart; A = t S_{k-1} and B = t X_k are jointly
    // Gaussian, so |cov(e^{iA}, e^{iB})| = e^{-(va + vb)/2} |e^{c} - 1|.
    const std::size_t J = 20;
    const double g0 = 4.0 / 3.0;
    auto exact_sum = [&](std::size_t m) {
        double total = 0.0;
        for (std::size_t j = 2; j <= J; ++j) {
            double va = 0.0, c = 0.0;
            for (std::size_t a = 1; a < j; ++a) {
                c += g0 * std::pow(0.5, static_cast<double>((j - a) * m));
                for (std::size_t b = 1; b < j; ++b)
                    va += g0 * std::pow(0.5, static_cast<double>((a > b ? a - b : b - a) * m));
            }
            va /= J;
            c /= J;
            total += std::exp(-(va + g0 / J) / 2.0) * std::abs(std::exp(c) - 1.0);
        }
        return total;
    };
    const std::size_t ns[] = {20, 40, 80};
    const std::vector<std::vector<double>> probes = {{1.0}};
    const auto rep = multivariate_clt_check(windowed_rows(kAr1Gauss, J), ns, 20000, probes, 25);
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& p = rep.steps[j].probes[0];
        const double exact = exact_sum(ns[j] / J);
        EXPECT_GT(p.dependence_sum + p.noise_floor, exact);
        EXPECT_LT(p.dependence_sum, exact + 2.0 * p.noise_floor);
        EXPECT_NEAR(rep.steps[j].sigma[0], g0, 3.0 * rep.steps[j].sigma_stderr[0]);
    }
    EXPECT_GT(rep.steps[0].probes[0].dependence_sum, rep.steps[1].probes[0].dependence_sum);
    EXPECT_GT(rep.steps[1].probes[0].dependence_sum, rep.steps[2].probes[0].dependence_sum);
}

TEST(Multivariate, SerialMatchesParallel) {
    const std::size_t ns[] = {30};
    const std::vector<std::vector<double>> probes = {{1.0, 1.0}};
    MultivariateCltOptions a, b;
    a.exec = Exec::serial;
    b.exec = Exec::parallel;
    const auto x = multivariate_clt_check(scaled_model_rows({kIid, kAr1Gauss}), ns, 200, probes, 26, a);
    const auto y = multivariate_clt_check(scaled_model_rows({kIid, kAr1Gauss}), ns, 200, probes, 26, b);
    EXPECT_EQ(x.steps[0].sigma, y.steps[0].sigma);
    EXPECT_EQ(x.steps[0].probes[0].dependence_sum, y.steps[0].probes[0].dependence_sum);
}
