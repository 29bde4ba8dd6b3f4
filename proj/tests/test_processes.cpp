#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "wdep/processes.hpp"
#include "wdep/stats.hpp"

using namespace wdep;

namespace {

// alpha_k as the sum over ordered compositions k = k_1 + ... + k_j with parts
// in 1..p of theta_{k_1} ... theta_{k_j}.
double composition_sum(const std::vector<double>& theta, int k) {
    if (k == 0) return 1.0;
    double total = 0.0;
    std::function<void(int, double)> walk = [&](int remaining, double prod) {
        if (remaining == 0) {
            total += prod;
            return;
        }
        for (int part = 1; part <= static_cast<int>(theta.size()) && part <= remaining; ++part)
            walk(remaining - part, prod * theta[part - 1]);
    };
    walk(k, 1.0);
    return total;
}

ProcessModel ar(std::vector<double> theta, InnovationDist d) { return ARModel(std::move(theta), std::move(d)); }

}  // namespace

TEST(CharPoly, Ar1Root) {
    const auto r = char_poly_roots(std::vector<double>{0.5});
    ASSERT_EQ(r.roots.size(), 1u);
    EXPECT_NEAR(r.roots[0].real(), 2.0, 1e-14);
    EXPECT_NEAR(r.rho, 2.0, 1e-14);
}

TEST(CharPoly, QuadraticFormula) {
    // 0.25 z^2 + 0.5 z - 1 = 0  ->  z = -1 +- sqrt(5)
    const auto r = char_poly_roots(std::vector<double>{0.5, 0.25});
    ASSERT_EQ(r.roots.size(), 2u);
    std::vector<double> re{r.roots[0].real(), r.roots[1].real()};
    std::sort(re.begin(), re.end());
    EXPECT_NEAR(re[0], -1.0 - std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(re[1], -1.0 + std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(r.rho, std::sqrt(5.0) - 1.0, 1e-12);
    EXPECT_LT(r.max_residual, 1e-8);
}

TEST(CharPoly, ExplosiveAndDegenerate) {
    const auto r = char_poly_roots(std::vector<double>{1.5});
    EXPECT_NEAR(r.rho, 2.0 / 3.0, 1e-14);
    EXPECT_FALSE(stationarity_check(ar({1.5}, InnovationDist::gaussian(1))).ok);
    EXPECT_TRUE(std::isinf(char_poly_roots(std::vector<double>{0.0, 0.0}).rho));
    EXPECT_THROW(char_poly_roots(std::vector<double>{}), std::invalid_argument);
}

TEST(CharPoly, ResidualsSmallForHigherOrders) {
    Rng rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> theta(2 + trial % 7);
        for (double& t : theta) t = 0.6 * (2.0 * rng.uniform() - 1.0) / static_cast<double>(theta.size());
        const auto r = char_poly_roots(theta);
        EXPECT_EQ(r.roots.size(), theta.size());
        EXPECT_LT(r.max_residual, 1e-8);
    }
}

TEST(LinearCoefficients, WorkedExamples) {
    EXPECT_EQ(linear_coefficients(std::vector<double>{0.5}, 3), (std::vector<double>{1, 0.5, 0.25, 0.125}));
    EXPECT_EQ(linear_coefficients(std::vector<double>{0.5, 0.25}, 3), (std::vector<double>{1, 0.5, 0.5, 0.375}));
    EXPECT_EQ(linear_coefficients(std::vector<double>{0.0}, 2), (std::vector<double>{1, 0, 0}));
    EXPECT_THROW(linear_coefficients(std::vector<double>{1.5}, 3), std::domain_error);
}

TEST(LinearCoefficients, RecursionEqualsCompositionSum) {
    Rng rng(12, 0);
    for (int p = 1; p <= 3; ++p) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> theta(p);
            for (double& t : theta) t = 0.9 * (2.0 * rng.uniform() - 1.0) / p;
            const auto alpha = linear_coefficients(theta, 8);
            for (int k = 0; k <= 8; ++k) EXPECT_NEAR(alpha[k], composition_sum(theta, k), 1e-14);
        }
    }
}

TEST(Envelope, WorkedExamples) {
    const auto alpha = linear_coefficients(std::vector<double>{0.5}, 60);
    EXPECT_DOUBLE_EQ(geometric_envelope(alpha, 2.0, 0.1), 1.0);
    EXPECT_DOUBLE_EQ(geometric_envelope(std::vector<double>{1.0}, 3.0, 0.5), 1.0);
    EXPECT_THROW(geometric_envelope(alpha, 2.0, 1.0), std::invalid_argument);
    const auto env = ar_envelope(std::vector<double>{0.5}, 0.1);
    EXPECT_DOUBLE_EQ(env.k_eps, 1.0);
    EXPECT_NEAR(env.rho_eps, 0.55, 1e-15);
}

TEST(Envelope, BoundsEveryCoefficient) {
    const std::vector<double> theta{0.5, 0.25};
    const auto env = ar_envelope(theta, 0.1);
    const auto alpha = linear_coefficients(theta, 3 * env.range);
    for (std::size_t k = 0; k < alpha.size(); ++k)
        EXPECT_LE(std::abs(alpha[k]), env.k_eps * std::pow(env.rho_eps, double(k)) * (1 + 1e-12)) << k;
}

TEST(Stationarity, WorkedExamples) {
    const auto a = stationarity_check(ar({0.5}, InnovationDist::rademacher()));
    EXPECT_TRUE(a.ok);
    EXPECT_NEAR(a.margin, 1.0, 1e-14);

    const LarchModel larch(0.5, {{-1, 0.3}, {1, 0.4}}, InnovationDist::rademacher());
    const auto l = stationarity_check(larch);
    EXPECT_TRUE(l.ok);
    EXPECT_NEAR(larch.lambda(), 0.7, 1e-15);
    EXPECT_NEAR(l.margin, 0.3, 1e-15);

    const ArchInfModel arch(1.0, explicit_sequence({0.5}), InnovationDist::gaussian(1.0), 2.0);
    const auto c = stationarity_check(arch);
    EXPECT_TRUE(c.ok);
    EXPECT_NEAR(arch.contraction(), 0.5, 1e-14);

    const BilinearModel bil(1.0, {0.3}, 0.0, {0.3}, InnovationDist::rademacher());
    EXPECT_NEAR(bil.contraction(), 0.6, 1e-15);
    EXPECT_TRUE(stationarity_check(bil).ok);

    EXPECT_THROW(LarchModel(0.5, {{1, 0.3}}, InnovationDist::gaussian(1)), std::invalid_argument);
}

TEST(Simulate, NonMixingExampleBoundsAndSigns) {
    const ProcessModel model = ar({0.5}, InnovationDist::rademacher());
    const auto layout = path_layout(model, 20000, recommended_burn_in(model));
    Rng rng(21, 0);
    std::vector<double> panel(layout.panel_length);
    InnovationDist::rademacher().fill(rng, panel);
    const auto x = evaluate_path(model, panel, layout);
    for (std::size_t t = 0; t < x.size(); ++t) {
        ASSERT_LE(std::abs(x[t]), 2.0);
        ASSERT_EQ(std::signbit(x[t]), std::signbit(panel[layout.offset + t]));
    }
}

TEST(Simulate, NonMixingMarginalIsUniform) {
    const ProcessModel model = ar({0.5}, InnovationDist::rademacher());
    const auto ts = simulate(model, 200000, std::nullopt, 22);
    const double ks = ks_statistic(ts.values, [](double x) { return std::clamp((x + 2.0) / 4.0, 0.0, 1.0); });
    EXPECT_LT(ks, 0.01);
}

TEST(Simulate, DeterministicAndBurnInEnforced) {
    const ProcessModel model = ar({0.5, 0.25}, InnovationDist::gaussian(1.0));
    const auto a = simulate(model, 500, std::nullopt, 7);
    const auto b = simulate(model, 500, std::nullopt, 7);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.model_id, b.model_id);
    EXPECT_NE(a.values, simulate(model, 500, std::nullopt, 8).values);
    EXPECT_THROW(simulate(model, 500, std::size_t{3}, 7), std::invalid_argument);
    EXPECT_THROW(simulate(ar({1.5}, InnovationDist::gaussian(1)), 10, std::nullopt, 1), std::domain_error);
}

TEST(Simulate, WhiteNoiseHasNoLagOneCorrelation) {
    const auto ts = simulate(ar({0.0}, InnovationDist::gaussian(1.0)), 100000, std::nullopt, 3);
    double s01 = 0.0, s00 = 0.0;
    for (std::size_t t = 0; t + 1 < ts.values.size(); ++t) s01 += ts.values[t] * ts.values[t + 1];
    for (double v : ts.values) s00 += v * v;
    EXPECT_NEAR(s01 / s00, 0.0, 4.0 / std::sqrt(1e5));
    EXPECT_NEAR(s00 / 1e5, 1.0, 0.02);
}

TEST(Simulate, ArMatchesTruncatedLinearRepresentation) {
    const std::vector<double> theta{0.5, 0.25};
    const ProcessModel model = ar(theta, InnovationDist::gaussian(1.0));
    const std::size_t k = 20;
    const auto alpha = linear_coefficients(theta, 2000);
    double tail = 0.0;
    for (std::size_t j = k + 1; j < alpha.size(); ++j) tail += std::abs(alpha[j]);
    const auto layout = path_layout(model, 5000, recommended_burn_in(model));
    Rng rng(31, 0);
    std::vector<double> panel(layout.panel_length);
    InnovationDist::gaussian(1.0).fill(rng, panel);
    const auto x = evaluate_path(model, panel, layout);
    double mad = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        double s = 0.0;
        for (std::size_t j = 0; j <= k; ++j) s += alpha[j] * panel[layout.offset + t - j];
        mad += std::abs(x[t] - s);
    }
    mad /= static_cast<double>(x.size());
    EXPECT_LE(mad, tail * std::sqrt(2.0 / std::numbers::pi));
}

TEST(Simulate, Ar1AutocovarianceMatchesTheory) {
    const double theta = 0.5;
    const ProcessModel model = ar({theta}, InnovationDist::gaussian(1.0));
    const std::size_t reps = 100, n = 1000;
    for (std::size_t h : {0u, 1u, 3u}) {
        std::vector<double> est(reps);
        for (std::size_t i = 0; i < reps; ++i) {
            Rng rng(41, i);
            const auto x = simulate_path(model, path_layout(model, n, recommended_burn_in(model)), rng);
            double s = 0.0;
            for (std::size_t t = 0; t + h < n; ++t) s += x[t] * x[t + h];
            est[i] = s / static_cast<double>(n - h);
        }
        const auto sm = summarize(est);
        const double truth = std::pow(theta, double(h)) / (1.0 - theta * theta);
        EXPECT_NEAR(sm.mean, truth, 4.0 * sm.stderr_mean) << "h=" << h;
    }
}

TEST(Simulate, ArchStationaryVariance) {
    // E X^2 = b0 / (1 - b1 E xi^2) for ARCH(1).
    const ArchInfModel arch(1.0, explicit_sequence({0.5}), InnovationDist::gaussian(1.0), 2.0);
    const std::size_t reps = 200;
    std::vector<double> second(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        Rng rng(51, i);
        const auto x = simulate_path(arch, path_layout(arch, 500, recommended_burn_in(arch)), rng);
        double s = 0.0;
        for (double v : x) s += v * v;
        second[i] = s / 500.0;
    }
    const auto sm = summarize(second);
    EXPECT_NEAR(sm.mean, 2.0, 4.0 * sm.stderr_mean);
}

TEST(Simulate, LarchContractsAtRateLambda) {
    const LarchModel model(1.0, {{-2, 0.2}, {-1, 0.25}, {1, 0.15}, {3, 0.1}}, InnovationDist::uniform(-1, 1));
    Rng rng(61, 0);
    std::vector<double> xi(400);
    model.innovation().fill(rng, xi);
    const auto sol = solve_larch(model, xi);
    ASSERT_GE(sol.sup_changes.size(), 3u);
    EXPECT_LT(sol.sup_changes.back(), 1e-12);
    for (std::size_t i = 1; i < sol.sup_changes.size(); ++i) {
        if (sol.sup_changes[i - 1] < 1e-14) break;
        EXPECT_LE(sol.sup_changes[i] / sol.sup_changes[i - 1], model.lambda() + 0.05) << i;
    }
    // The converged window satisfies the model equation away from the boundary.
    const auto& x = sol.window;
    for (std::size_t t = 2; t + 3 < x.size(); ++t) {
        const double rhs = xi[t] * (1.0 + 0.2 * x[t + 2] + 0.25 * x[t + 1] + 0.15 * x[t - 1] + 0.1 * x[t - 3]);
        ASSERT_NEAR(x[t], rhs, 1e-11);
    }
}

TEST(Simulate, WindowedKernelsSerialEqualsParallel) {
    const LarchModel larch = LarchModel::power_law(1.0, 0.15, 2.5, 8, InnovationDist::rademacher());
    const VolterraModel volterra({{{0}, 1.0}, {{0, 1}, 0.5}, {{-1, 2}, 0.25}}, InnovationDist::gaussian(1.0));
    const LinearModel linear = LinearModel::power_law(1.0, 2.0, 30, InnovationDist::gaussian(1.0));
    for (const ProcessModel& m : std::vector<ProcessModel>{larch, volterra, linear}) {
        const auto a = simulate(m, 3000, std::nullopt, 5, Exec::serial);
        const auto b = simulate(m, 3000, std::nullopt, 5, Exec::parallel);
        EXPECT_EQ(a.values, b.values) << kind_name(m);
    }
}

TEST(Simulate, VolterraAndLinearEvaluateTheirSums) {
    const VolterraModel volterra({{{0}, 1.0}, {{0, 1}, 0.5}, {{-1, 2}, 0.25}}, InnovationDist::gaussian(1.0));
    const auto layout = path_layout(volterra, 50, 0);
    std::vector<double> e(layout.panel_length);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::sin(1.0 + double(i));
    const auto x = evaluate_path(volterra, e, layout);
    for (std::size_t t = 0; t < 50; ++t) {
        const std::size_t o = layout.offset + t;
        EXPECT_NEAR(x[t], e[o] + 0.5 * e[o] * e[o - 1] + 0.25 * e[o + 1] * e[o - 2], 1e-15);
    }
    const LinearModel lin({{-1, 0.5}, {0, 1.0}, {2, -0.3}}, InnovationDist::gaussian(1.0));
    const auto ll = path_layout(lin, 50, 0);
    std::vector<double> f(ll.panel_length);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(double(i));
    const auto y = evaluate_path(lin, f, ll);
    for (std::size_t t = 0; t < 50; ++t) {
        const std::size_t o = ll.offset + t;
        EXPECT_NEAR(y[t], 0.5 * f[o + 1] + f[o] - 0.3 * f[o - 2], 1e-15);
    }
}

TEST(ReferenceRate, WorkedExamples) {
    const LinearModel lin = LinearModel::power_law(1.0, 2.0, 200, InnovationDist::gaussian(1.0));
    EXPECT_NEAR(reference_rate(lin, WeakDepKind::eta, 4).value, 0.125, 1e-15);
    const ArchInfModel garch(0.1, geometric_sequence(0.4, 0.5, 40), InnovationDist::gaussian(1.0));
    EXPECT_NEAR(reference_rate(garch, WeakDepKind::theta, 9).value, std::exp(-2.0), 1e-15);
    const ArchInfModel power(0.1, power_sequence(0.3, 3.0, 40), InnovationDist::gaussian(1.0));
    EXPECT_NEAR(reference_rate(power, WeakDepKind::theta, 2).value, 0.25, 1e-15);
    const LarchModel larch = LarchModel::power_law(1.0, 0.1, 3.0, 20, InnovationDist::rademacher());
    EXPECT_NEAR(reference_rate(larch, WeakDepKind::eta, 2).value, 0.25, 1e-15);
    const VolterraModel vol({{{1}, 1.0}}, InnovationDist::gaussian(1.0), PowerDecay{2.0});
    EXPECT_NEAR(reference_rate(vol, WeakDepKind::eta, 2).value, 0.125, 1e-15);

    for (const ProcessModel& m : std::vector<ProcessModel>{lin, garch, power, larch, vol})
        for (auto kind : {WeakDepKind::eta, WeakDepKind::theta}) {
            const auto rate = reference_rate(m, kind, 1);
            if (rate.available) EXPECT_DOUBLE_EQ(rate.value, 1.0);
        }
    EXPECT_FALSE(reference_rate(garch, WeakDepKind::eta, 3).available);
    EXPECT_FALSE(reference_rate(NonlinearARModel(PiecewiseLinear::linear(0.5), InnovationDist::gaussian(1)),
                                WeakDepKind::theta, 3)
                     .available);
}

TEST(ReferenceRate, GaussianArCovarianceShape) {
    const ProcessModel model = ar({0.5}, InnovationDist::gaussian(1.0));
    // sup_{t>=r} |gamma(t)| / sup_{t>=1} = 0.5^(r-1); the summed version too.
    EXPECT_NEAR(reference_rate(model, WeakDepKind::kappa, 4).value, 0.125, 1e-12);
    EXPECT_NEAR(reference_rate(model, WeakDepKind::kappa_prime, 4).value, 0.125, 1e-12);
    EXPECT_NEAR(reference_rate(model, WeakDepKind::theta, 4).value, 0.125, 1e-12);
}

TEST(PiecewiseLinear, EvaluationAndModulus) {
    const PiecewiseLinear m({-1.0, 0.0, 2.0}, {-1.2, 0.0, 0.4});
    EXPECT_DOUBLE_EQ(m(-2.0), -2.4);
    EXPECT_DOUBLE_EQ(m(1.0), 0.2);
    EXPECT_DOUBLE_EQ(m(4.0), 0.8);
    EXPECT_DOUBLE_EQ(m.slope_modulus(-0.5), 1.2);
    EXPECT_DOUBLE_EQ(m.slope_modulus(0.0), 1.2);
    EXPECT_DOUBLE_EQ(m.slope_modulus(0.5), 0.2);
    EXPECT_DOUBLE_EQ(m.lipschitz(), 1.2);
    EXPECT_THROW(PiecewiseLinear({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST(Models, PowerSequenceTailMass) {
    // sum_{k>10} k^-2 = pi^2/6 - H_10^(2)
    double head = 0.0;
    for (int k = 1; k <= 10; ++k) head += 1.0 / (k * k);
    EXPECT_NEAR(power_sequence(1.0, 2.0, 10).tail_mass, std::numbers::pi * std::numbers::pi / 6.0 - head, 1e-13);
    EXPECT_NEAR(geometric_sequence(2.0, 0.5, 3).tail_mass, 2.0 * 0.0625 / 0.5, 1e-15);
}
