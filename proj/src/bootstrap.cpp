#include "wdep/bootstrap.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

#include "wdep/processes.hpp"

namespace wdep {

namespace {

void finish_fit(ARFit& fit, std::span<const double> x) {
    const std::size_t p = fit.theta_hat.size();
    const std::size_t n = x.size() - p;
    fit.residuals_raw.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        double pred = 0.0;
        for (std::size_t j = 1; j <= p; ++j) pred += fit.theta_hat[j - 1] * x[p + t - j];
        fit.residuals_raw[t] = x[p + t] - pred;
    }
    fit.residuals_centered = recenter(fit.residuals_raw);
    double s = 0.0;
    for (double e : fit.residuals_centered) s += e * e;
    fit.innovation_second_moment = s / static_cast<double>(n);
}

}  // namespace

const char* to_string(FitMethod method) {
    return method == FitMethod::yule_walker ? "yule_walker" : "least_squares";
}

ARFit fit_yule_walker(std::span<const double> x, std::size_t p) {
    if (p == 0) throw std::invalid_argument("fit_yule_walker: order must be >= 1");
    if (x.size() < 10 * p) throw std::invalid_argument("fit_yule_walker: need at least 10 p observations");
    const auto len = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= len;
    std::vector<double> gamma(p + 1, 0.0);
    for (std::size_t h = 0; h <= p; ++h) {
        double s = 0.0;
        for (std::size_t t = 0; t + h < x.size(); ++t) s += (x[t] - mean) * (x[t + h] - mean);
        gamma[h] = s / len;
    }
    if (!(gamma[0] > 0.0)) throw std::domain_error("fit_yule_walker: singular autocovariance matrix (constant series)");
    const auto dim = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd toeplitz(dim, dim);
    Eigen::VectorXd rhs(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        rhs(i) = gamma[static_cast<std::size_t>(i) + 1];
        for (Eigen::Index j = 0; j < dim; ++j) toeplitz(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];
    }
    ARFit fit;
    fit.method = FitMethod::yule_walker;
    if (p == 1) {
        fit.theta_hat = {gamma[1] / gamma[0]};
    } else {
        Eigen::LLT<Eigen::MatrixXd> llt(toeplitz);
        if (llt.info() != Eigen::Success) throw std::domain_error("fit_yule_walker: singular autocovariance matrix");
        const Eigen::VectorXd theta = llt.solve(rhs);
        fit.theta_hat.assign(theta.data(), theta.data() + theta.size());
    }
    finish_fit(fit, x);
    return fit;
}

ARFit fit_least_squares(std::span<const double> x, std::size_t p) {
    if (p == 0) throw std::invalid_argument("fit_least_squares: order must be >= 1");
    if (x.size() < p + 1) throw std::invalid_argument("fit_least_squares: need at least p + 1 observations");
    const std::size_t n = x.size() - p;
    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) {
        y(static_cast<Eigen::Index>(t)) = x[p + t];
        for (std::size_t j = 1; j <= p; ++j)
            design(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j - 1)) = x[p + t - j];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() == 0) throw std::domain_error("fit_least_squares: singular design (all regressors zero)");
    const Eigen::VectorXd theta = qr.solve(y);
    ARFit fit;
    fit.method = FitMethod::least_squares;
    fit.theta_hat.assign(theta.data(), theta.data() + theta.size());
    fit.underdetermined_risk = n < 10 * p || qr.rank() < static_cast<Eigen::Index>(p);
    finish_fit(fit, x);
    return fit;
}

ARFit fit_ar(std::span<const double> x, std::size_t p, FitMethod method) {
    return method == FitMethod::yule_walker ? fit_yule_walker(x, p) : fit_least_squares(x, p);
}

std::vector<double> recenter(std::span<const double> raw) {
    if (raw.empty()) return {};
    double mean = 0.0;
    for (double v : raw) mean += v;
    mean /= static_cast<double>(raw.size());
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] - mean;
    return out;
}

StabilityReport stability_gate(const ARFit& fit, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("stability_gate: delta must be positive");
    const auto roots = char_poly_roots(fit.theta_hat);
    StabilityReport rep;
    rep.roots = roots.roots;
    rep.min_modulus = roots.rho;
    rep.threshold = 1.0 + delta;
    rep.accepted = rep.min_modulus >= rep.threshold;
    return rep;
}

ARModel bootstrap_model(const ARFit& fit) {
    return ARModel(fit.theta_hat, InnovationDist::empirical(fit.residuals_centered));
}

std::size_t bootstrap_burn_in(const ARFit& fit) {
    const double rho = char_poly_roots(fit.theta_hat).rho;
    if (std::isinf(rho)) return 0;
    return contraction_burn_in(1.0 / rho);
}

TimeSeries bootstrap_series(const ARFit& fit, std::size_t n, std::optional<std::size_t> burn_in, std::uint64_t seed,
                            double delta) {
    const auto gate = stability_gate(fit, delta);
    if (!gate.accepted)
        throw std::domain_error("bootstrap_series: fitted model rejected by the stability gate (min root modulus " +
                                std::to_string(gate.min_modulus) + ")");
    const ProcessModel model = bootstrap_model(fit);
    const std::size_t b = burn_in.value_or(bootstrap_burn_in(fit));
    Rng rng(seed, 0);
    TimeSeries ts;
    ts.values = simulate_path(model, path_layout(model, n, b), rng);
    ts.model_id = model_id(model);
    ts.seed = seed;
    ts.burn_in = b;
    return ts;
}

std::vector<double> bootstrap_distribution(std::span<const double> x, std::size_t p, const PathStatistic& statistic,
                                           std::size_t replicates, std::uint64_t seed,
                                           const BootstrapOptions& options) {
    if (replicates == 0) throw std::invalid_argument("bootstrap_distribution: need at least one replicate");
    const ARFit fit = fit_ar(x, p, options.method);
    const auto gate = stability_gate(fit, options.delta);
    if (!gate.accepted) throw std::domain_error("bootstrap_distribution: fitted model rejected by the stability gate");
    const ProcessModel model = bootstrap_model(fit);
    const auto layout = path_layout(model, x.size(), options.burn_in.value_or(bootstrap_burn_in(fit)));
    std::vector<double> out(replicates);
    for_each_index(options.exec, replicates, [&](std::size_t i) {
        Rng rng(seed, i);
        const auto path = simulate_path(model, layout, rng);
        out[i] = statistic(path);
    });
    return out;
}

}  // namespace wdep
