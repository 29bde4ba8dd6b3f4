#include "wdep/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wdep/bootstrap.hpp"
#include "wdep/coupling.hpp"
#include "wdep/csv.hpp"
#include "wdep/depcheck.hpp"
#include "wdep/limits.hpp"
#include "wdep/parallel.hpp"
#include "wdep/processes.hpp"
#include "wdep/stats.hpp"
#include "wdep/text.hpp"

namespace wdep {

using nlohmann::json;

namespace {

struct SubcommandName {
    Subcommand sub;
    const char* name;
};

constexpr SubcommandName kNames[] = {
    {Subcommand::simulate, "simulate"},   {Subcommand::fit, "fit"},
    {Subcommand::bootstrap, "bootstrap"}, {Subcommand::tau, "tau"},
    {Subcommand::audit, "audit"},         {Subcommand::causal_audit, "causal-audit"},
    {Subcommand::donsker, "donsker"},     {Subcommand::empproc, "empproc"},
    {Subcommand::clt, "clt"},             {Subcommand::mclt, "mclt"},
    {Subcommand::bernstein, "bernstein"}, {Subcommand::rosenthal, "rosenthal"},
    {Subcommand::tail, "tail"},           {Subcommand::moment_gap, "moment-gap"},
};

using VT = ValueType;

void add(std::vector<KeySpec>& s, const std::vector<KeySpec>& more) { s.insert(s.end(), more.begin(), more.end()); }

std::vector<KeySpec> model_keys(bool required) {
    return {{"model.kind", VT::text, required},   {"model.innovation", VT::innovation, false},
            {"model.theta", VT::real_list, false}, {"model.knots", VT::real_list, false},
            {"model.values", VT::real_list, false}, {"model.b0", VT::real, false},
            {"model.b", VT::real_list, false},     {"model.a0", VT::real, false},
            {"model.a", VT::text, false},          {"model.c0", VT::real, false},
            {"model.c", VT::real_list, false},     {"model.decay", VT::text, false},
            {"model.k_trunc", VT::count, false},   {"model.m_norm", VT::real, false},
            {"model.terms", VT::text, false}};
}

std::vector<KeySpec> fit_keys() {
    return {{"fit.p", VT::count, false}, {"fit.method", VT::text, false}, {"fit.delta", VT::real, false}};
}

std::vector<KeySpec> bound_keys() {
    return {{"bounds.K", VT::real, false},    {"bounds.M", VT::real, false},     {"bounds.L1", VT::real, false},
            {"bounds.L2", VT::real, false},   {"bounds.mu", VT::real, false},    {"bounds.nu", VT::real, false},
            {"bounds.rho", VT::text, false},  {"bounds.rho_file", VT::path, false}, {"bounds.psi", VT::text, false},
            {"bounds.alpha", VT::real, false}, {"bounds.k_max", VT::count, false}};
}

// Keys restricted to a fixed set of words.
const std::map<std::string, std::vector<std::string>>& choice_keys() {
    static const std::map<std::string, std::vector<std::string>> choices{
        {"model.kind", {"ar", "nlar", "arch", "larch", "bilinear", "volterra", "linear"}},
        {"fit.method", {"yule_walker", "least_squares"}},
        {"run.source", {"model", "bootstrap"}},
        {"run.mode", {"replicates", "time_average"}},
        {"run.kind", {"kappa", "kappa_prime", "eta", "theta", "lambda"}},
        {"run.scheme", {"scaled", "windowed"}},
        {"run.transform", {"exact", "quantile", "identity"}},
        {"bounds.psi", {"a", "b", "c", "d"}},
    };
    return choices;
}

InnovationDist innovation_from(const Config& cfg) { return parse_innovation(cfg.text_or("model.innovation", "gaussian(1)")); }

std::map<int, double> lag_map(const std::string& key, const std::string& text) {
    std::map<int, double> out;
    for (const auto& item : split(text, ',')) {
        const auto kv = split(item, ':');
        if (kv.size() != 2) throw std::invalid_argument("config key '" + key + "': expected 'lag:coef' items, got '" + item + "'");
        const auto lag = static_cast<int>(parse_integer(kv[0]));
        if (!out.emplace(lag, parse_real(kv[1])).second)
            throw std::invalid_argument("config key '" + key + "': duplicate lag " + kv[0]);
    }
    return out;
}

VolterraModel::Terms volterra_terms(const std::string& text) {
    VolterraModel::Terms terms;
    for (const auto& item : split(text, ';')) {
        if (item.empty()) continue;
        const auto kv = split(item, ':');
        if (kv.size() != 2) throw std::invalid_argument("config key 'model.terms': expected 'j1,j2:coef' items, got '" + item + "'");
        std::vector<int> idx;
        for (long long j : parse_integer_grid(kv[0])) idx.push_back(static_cast<int>(j));
        terms[idx] = parse_real(kv[1]);
    }
    return terms;
}

TruncatedSequence decay_sequence(const Config& cfg) {
    const auto call = parse_call(cfg.text("model.decay"));
    if (call.args.size() != 2) throw std::invalid_argument("config key 'model.decay': expected geometric(scale,ratio) or power(scale,exponent)");
    const std::size_t k = cfg.count("model.k_trunc");
    const double a = parse_real(call.args[0]), b = parse_real(call.args[1]);
    if (call.name == "geometric") return geometric_sequence(a, b, k);
    if (call.name == "power") return power_sequence(a, b, k);
    throw std::invalid_argument("config key 'model.decay': unknown decay '" + call.name + "'");
}

RhoSequence rho_from(const Config& cfg) {
    if (cfg.has("bounds.rho_file")) return RhoSequence::explicit_list(read_real_lines(cfg.text("bounds.rho_file")));
    const auto text = cfg.text_or("bounds.rho", "1");
    const auto call = parse_call(text);
    if (call.name == "geometric") {
        if (call.args.size() != 2) throw std::invalid_argument("config key 'bounds.rho': geometric(c,q) takes two arguments");
        return RhoSequence::geometric(parse_real(call.args[0]), parse_real(call.args[1]));
    }
    return RhoSequence::explicit_list(parse_real_list(text));
}

json params_json(const BoundParams& p) {
    return {{"K", p.K},       {"M", p.M},   {"L1", p.L1},
            {"L2", p.L2},     {"mu", p.mu}, {"nu", p.nu},
            {"rho", p.rho.describe()}, {"psi", to_string(p.psi)}, {"alpha", p.alpha}};
}

json fit_json(const ARFit& fit, const StabilityReport& gate) {
    json roots = json::array();
    for (const auto& z : gate.roots) roots.push_back({z.real(), z.imag()});
    return {{"theta_hat", fit.theta_hat},
            {"method", to_string(fit.method)},
            {"innovation_second_moment", fit.innovation_second_moment},
            {"underdetermined_risk", fit.underdetermined_risk},
            {"gate", {{"accepted", gate.accepted}, {"min_modulus", gate.min_modulus}, {"threshold", gate.threshold}, {"roots", roots}}}};
}

json fit_line_json(const std::optional<LinearFit>& f) {
    if (!f) return nullptr;
    return {{"slope", f->slope}, {"intercept", f->intercept}, {"r_squared", f->r_squared}, {"count", f->count}};
}

json shape_json(const DecayShape& s) {
    return {{"geometric", fit_line_json(s.geometric)}, {"power", fit_line_json(s.power)}, {"summable_looking", s.summable_looking}};
}

double shape_statistic(const DecayShape& s) {
    if (s.geometric) return s.geometric->slope;
    if (s.power) return s.power->slope;
    return 0.0;
}

CsvTable::Cell cell(std::size_t v) { return static_cast<long long>(v); }

class Context {
public:
    Context(Subcommand sub, Config config, const RunOptions& options) : options_(options) {
        report.subcommand = sub;
        report.config = std::move(config);
    }

    const Config& cfg() const { return report.config; }
    std::uint64_t seed() const { return cfg().seed("sim.seed"); }

    void progress(const std::string& msg) const {
        if (options_.progress) options_.progress(msg);
    }

    void write(const std::string& name, const CsvTable& table) {
        const auto path = options_.out_dir / name;
        table.write(path);
        report.artifacts.push_back(path.string());
    }

    void verdict(const std::string& name, bool passed, double statistic, double threshold) {
        report.verdicts.push_back({name, passed, statistic, threshold});
    }

    RunReport report;

private:
    const RunOptions& options_;
};

FitMethod fit_method(const Config& cfg) {
    return cfg.text_or("fit.method", "yule_walker") == "least_squares" ? FitMethod::least_squares : FitMethod::yule_walker;
}

std::optional<std::size_t> burn_in(const Config& cfg) { return cfg.optional_count("sim.burn_in"); }

// Observations for fit/bootstrap: a CSV series, or a simulated path from stream `stream` of the seed.
std::vector<double> input_series(Context& ctx, std::uint64_t stream) {
    const auto& cfg = ctx.cfg();
    if (cfg.has("data.series")) return read_series_csv(cfg.text("data.series"));
    const auto model = model_from_config(cfg);
    const std::size_t n = cfg.count_or("sim.n", 5000);
    ctx.progress("simulating " + std::to_string(n) + " observations");
    return simulate(model, n, burn_in(cfg), stream_key(ctx.seed(), stream), Exec::parallel).values;
}

struct GatedFit {
    ARFit fit;
    StabilityReport gate;
};

GatedFit gated_fit(Context& ctx, std::span<const double> x) {
    const auto& cfg = ctx.cfg();
    GatedFit g{fit_ar(x, cfg.count_or("fit.p", 1), fit_method(cfg)), {}};
    g.gate = stability_gate(g.fit, cfg.real_or("fit.delta", 0.01));
    ctx.verdict("stability_gate", g.gate.accepted, g.gate.min_modulus, g.gate.threshold);
    ctx.report.summary["fit"] = fit_json(g.fit, g.gate);
    return g;
}

SamplingOptions sampling_from(const Config& cfg) {
    SamplingOptions s;
    s.mode = cfg.text_or("run.mode", "replicates") == "time_average" ? SamplingMode::time_average : SamplingMode::replicates;
    s.burn_in = burn_in(cfg);
    return s;
}

// Model under audit: the configured model, or the bootstrap process of a fit to a simulated path.
struct AuditTarget {
    ProcessModel model;
    std::optional<BoundConstant> bound;
    std::optional<std::size_t> burn_in;
    bool usable = true;
};

AuditTarget audit_target(Context& ctx, double eps) {
    const auto& cfg = ctx.cfg();
    const auto model = model_from_config(cfg);
    if (cfg.text_or("run.source", "model") == "model") return {model, std::nullopt, burn_in(cfg), true};
    const auto x = input_series(ctx, 2);
    const auto g = gated_fit(ctx, x);
    if (!g.gate.accepted) return {model, std::nullopt, std::nullopt, false};
    return {bootstrap_model(g.fit), bootstrap_bound_constant(g.fit, eps), bootstrap_burn_in(g.fit), true};
}

void run_simulate(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto model = model_from_config(cfg);
    const auto st = stationarity_check(model);
    ctx.verdict("stationary", st.ok, st.margin, 0.0);
    ctx.report.summary["stationarity"] = {{"ok", st.ok}, {"margin", st.margin}, {"detail", st.detail}};
    ctx.report.summary["model"] = describe(model);
    if (!st.ok) return;
    const std::size_t n = cfg.count("sim.n");
    const auto ts = simulate(model, n, burn_in(cfg), ctx.seed(), Exec::parallel);
    CsvTable t({"t", "value"});
    for (std::size_t i = 0; i < ts.values.size(); ++i) t.add_row({static_cast<long long>(i + 1), ts.values[i]});
    ctx.write("series.csv", t);
    const auto s = summarize(ts.values);
    ctx.report.summary["series"] = {{"n", n}, {"burn_in", ts.burn_in}, {"mean", s.mean}, {"variance", s.variance}};
}

void run_fit(Context& ctx) {
    const auto x = input_series(ctx, 0);
    const auto g = gated_fit(ctx, x);
    CsvTable coef({"lag", "theta_hat"});
    for (std::size_t j = 0; j < g.fit.theta_hat.size(); ++j) coef.add_row({static_cast<long long>(j + 1), g.fit.theta_hat[j]});
    ctx.write("fit.csv", coef);
    CsvTable res({"t", "residual"});
    for (std::size_t t = 0; t < g.fit.residuals_centered.size(); ++t)
        res.add_row({static_cast<long long>(t + 1), g.fit.residuals_centered[t]});
    ctx.write("residuals.csv", res);
    ctx.report.summary["n"] = x.size();
}

void run_bootstrap(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto x = input_series(ctx, 0);
    const auto g = gated_fit(ctx, x);
    if (!g.gate.accepted) return;
    const std::size_t p = g.fit.theta_hat.size();
    const double root_n = std::sqrt(static_cast<double>(x.size()));
    const double theta1 = g.fit.theta_hat[0];
    const FitMethod method = fit_method(cfg);
    BootstrapOptions opt;
    opt.method = method;
    opt.delta = cfg.real_or("fit.delta", 0.01);
    const std::size_t b = cfg.count_or("run.B", 1000);
    ctx.progress("drawing " + std::to_string(b) + " bootstrap replicates");
    const auto stats = bootstrap_distribution(
        x, p, [&](std::span<const double> path) { return root_n * (fit_ar(path, p, method).theta_hat[0] - theta1); }, b,
        stream_key(ctx.seed(), 1), opt);
    CsvTable t({"replicate", "value"});
    for (std::size_t i = 0; i < stats.size(); ++i) t.add_row({static_cast<long long>(i), stats[i]});
    ctx.write("bootstrap.csv", t);
    const auto s = summarize(stats);
    ctx.report.summary["statistic"] = "sqrt(n) (theta_hat*_1 - theta_hat_1)";
    ctx.report.summary["replicates"] = {{"count", b}, {"mean", s.mean}, {"variance", s.variance}};
}

void run_tau(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto model = model_from_config(cfg);
    const auto lags = cfg.count_grid("run.lags");
    const std::size_t reps = cfg.count("run.replicates");
    const double eps = cfg.real_or("run.eps", 0.1);
    CouplingOptions opt;
    opt.cut_offset = cfg.optional_count("run.cut_offset").value_or(0);
    opt.block = cfg.count_or("run.block", 1);
    opt.burn_in = burn_in(cfg);
    ctx.progress("coupling " + std::to_string(reps) + " path pairs");
    const auto tc = tau_curve(model, lags, reps, ctx.seed(), opt);
    const auto* ar = std::get_if<ARModel>(&model);
    const auto& est = tc.estimate;
    CsvTable t({"r", "mean_gap", "stderr", "ratio", "bound"});
    std::size_t violations = 0;
    for (std::size_t j = 0; j < est.lags.size(); ++j) {
        CsvTable::Cell ratio = std::string();
        if (j > 0 && est.lags[j] == est.lags[j - 1] + 1 && est.mean_gap[j - 1] > 0.0) ratio = est.mean_gap[j] / est.mean_gap[j - 1];
        CsvTable::Cell bound = std::string();
        if (ar) {
            const double b = theoretical_tau_bound(*ar, est.lags[j], opt.block, eps);
            bound = b;
            if (est.mean_gap[j] > b + 3.0 * est.stderr_gap[j]) ++violations;
        }
        t.add_row({cell(est.lags[j]), est.mean_gap[j], est.stderr_gap[j], ratio, bound});
    }
    ctx.write("tau.csv", t);
    if (ar) {
        ctx.verdict("tau_below_bound", violations == 0, static_cast<double>(violations), 0.0);
    } else {
        const double slope = tc.log_fit ? tc.log_fit->slope : 0.0;
        ctx.verdict("tau_decreasing", !tc.log_fit || slope < 0.0, slope, 0.0);
    }
    ctx.report.summary["log_fit"] = fit_line_json(tc.log_fit);
    ctx.report.summary["tail_log_fit"] = fit_line_json(tc.tail_log_fit);
}

void run_audit(Context& ctx) {
    const auto& cfg = ctx.cfg();
    AuditOptions opt;
    opt.eps = cfg.real_or("run.eps", 0.1);
    opt.tolerance_se = cfg.real_or("run.tolerance_se", 3.0);
    opt.sampling = sampling_from(cfg);
    auto target = audit_target(ctx, opt.eps);
    if (!target.usable) return;
    opt.bound = target.bound;
    opt.sampling.burn_in = target.burn_in;
    const auto kind = parse_weak_dep_kind(cfg.text_or("run.kind", "theta"));
    const auto pairs = default_arity_pairs();
    const auto bank = make_bank(pairs, cfg.count_or("run.bank_size", 64), cfg.has("run.bank_seed") ? cfg.seed("run.bank_seed") : ctx.seed());
    const auto lags = cfg.count_grid("run.lags");
    ctx.progress("auditing " + std::to_string(bank.size()) + " test-function pairs");
    const auto a = audit(target.model, kind, lags, bank, cfg.count("run.replicates"), ctx.seed(), opt);
    CsvTable t({"r", "kind", "eps_hat", "stderr", "theory_bound", "worst_g", "worst_h"});
    for (std::size_t j = 0; j < a.lags.size(); ++j) {
        CsvTable::Cell bound = std::string();
        if (a.bound_available) bound = a.theory_bound[j];
        t.add_row({cell(a.lags[j]), to_string(kind), a.eps_hat[j], a.stderr[j], bound, a.worst_g[j], a.worst_h[j]});
    }
    ctx.write("audit.csv", t);
    ctx.verdict("covariance_bound", a.passed, static_cast<double>(a.violations), 0.0);
    ctx.report.summary["audit"] = {{"checks", a.checks},
                                   {"violations", a.violations},
                                   {"worst_excess_se", a.worst_excess_se},
                                   {"bound_available", a.bound_available},
                                   {"bound_k", a.bound.k},
                                   {"bound_rho_eps", a.bound.rho_eps},
                                   {"bank_size", bank.size()},
                                   {"shape", shape_json(decay_shape(a.lags, a.eps_hat, a.stderr))}};
}

void run_causal_audit(Context& ctx) {
    const auto& cfg = ctx.cfg();
    auto target = audit_target(ctx, 0.1);
    if (!target.usable) return;
    auto sampling = sampling_from(cfg);
    sampling.burn_in = target.burn_in;
    const auto pairs = default_arity_pairs();
    const auto bank = past_functions(make_bank(pairs, cfg.count_or("run.bank_size", 64),
                                               cfg.has("run.bank_seed") ? cfg.seed("run.bank_seed") : ctx.seed()));
    const auto lags = cfg.count_grid("run.lags");
    const auto c = causal_condition_audit(target.model, lags, bank, cfg.count("run.replicates"), ctx.seed(), sampling);
    CsvTable t({"r", "cond_l2", "stderr_l2", "cond_sup", "stderr_sup"});
    for (std::size_t j = 0; j < c.lags.size(); ++j)
        t.add_row({cell(c.lags[j]), c.cond_l2[j], c.stderr_l2[j], c.cond_sup[j], c.stderr_sup[j]});
    ctx.write("causal_audit.csv", t);
    ctx.verdict("l2_condition_summable", c.shape_l2.summable_looking, shape_statistic(c.shape_l2), 0.0);
    ctx.verdict("sup_condition_summable", c.shape_sup.summable_looking, shape_statistic(c.shape_sup), 0.0);
    ctx.report.summary["shape_l2"] = shape_json(c.shape_l2);
    ctx.report.summary["shape_sup"] = shape_json(c.shape_sup);
}

void run_donsker(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto model = model_from_config(cfg);
    DonskerOptions opt;
    opt.sigma2 = cfg.optional_real("run.sigma2");
    opt.long_run_replicates = cfg.count_or("run.long_run_replicates", 2000);
    opt.long_run.lag_cutoff = cfg.optional_count("run.lag_cutoff");
    opt.burn_in = burn_in(cfg);
    const auto grid = cfg.real_grid_or("run.grid", parse_real_grid("0:1:0.1"));
    ctx.progress("simulating partial-sum paths");
    const auto rep = donsker_check(model, cfg.count("sim.n"), grid, cfg.count("run.replicates"), ctx.seed(), opt);
    CsvTable v({"t", "var", "stderr"});
    for (std::size_t j = 0; j < rep.ensemble.grid.size(); ++j) v.add_row({rep.ensemble.grid[j], rep.var_curve[j], rep.var_curve_stderr[j]});
    ctx.write("donsker.csv", v);
    CsvTable inc({"s", "t", "cov", "stderr"});
    for (std::size_t j = 0; j < rep.increment_cov.size(); ++j)
        inc.add_row({rep.ensemble.grid[j], rep.ensemble.grid[j + 1], rep.increment_cov[j], rep.increment_cov_stderr[j]});
    ctx.write("donsker_increments.csv", inc);
    ctx.verdict("donsker", rep.passed, rep.ks_w1, rep.ks_threshold);
    ctx.report.summary["sigma2_hat"] = rep.sigma2_hat;
    ctx.report.summary["sigma2_stderr"] = rep.sigma2_stderr;
    ctx.report.summary["var_fit"] = fit_line_json(rep.var_fit);
    ctx.report.summary["modulus"] = rep.modulus;
}

void run_empproc(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto model = model_from_config(cfg);
    const auto exact = exact_marginal_cdf(model);
    const std::string mode = cfg.text_or("run.transform", exact ? "exact" : "quantile");
    MarginalTransform to_uniform;
    if (mode == "exact") {
        if (!exact) throw std::invalid_argument("config key 'run.transform': no closed-form marginal CDF for this model");
        to_uniform = *exact;
    } else if (mode == "identity") {
        to_uniform = [](double x) { return x; };
    } else {
        ctx.progress("calibrating the quantile transform");
        const auto q = quantile_transform(model, cfg.count_or("run.calibration", 100000), stream_key(ctx.seed(), 3));
        ctx.report.summary["max_atom"] = q.max_atom();
        if (q.atomic()) {
            ctx.report.summary["atomic_marginal"] = true;
            ctx.progress("marginal has atoms above 1%; uniformity cannot hold, no verdict asserted");
            return;
        }
        to_uniform = q;
    }
    ctx.report.summary["transform"] = mode;
    EmpiricalProcessOptions opt;
    opt.lag_cutoff = cfg.optional_count("run.lag_cutoff").value_or(30);
    opt.oracle_replicates = cfg.count_or("run.oracle_replicates", 20000);
    opt.standard_bridge = cfg.boolean_or("run.standard_bridge", false);
    opt.tolerance_se = cfg.real_or("run.tolerance_se", 3.0);
    opt.burn_in = burn_in(cfg);
    const auto grid = cfg.real_grid_or("run.x_grid", parse_real_grid("0.1:0.9:0.2"));
    const auto rep = empirical_process_check(model, to_uniform, cfg.count("sim.n"), grid, cfg.count("run.replicates"), ctx.seed(), opt);
    CsvTable t({"x", "y", "cov_hat", "cov_theory", "stderr"});
    for (const auto& c : rep.cells)
        t.add_row({c.x, c.y, c.cov_hat, c.cov_theory, std::hypot(c.stderr_hat, c.stderr_theory)});
    ctx.write("empproc.csv", t);
    CsvTable k({"x", "ks"});
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        k.add_row({grid[j], rep.ks[j]});
        worst = std::max(worst, rep.ks[j]);
    }
    ctx.write("empproc_ks.csv", k);
    ctx.verdict("pointwise_ks", worst < rep.ks_threshold, worst, rep.ks_threshold);
    ctx.verdict("covariance_cells", rep.violations == 0, static_cast<double>(rep.violations), 0.0);
}

void run_clt(Context& ctx) {
    const auto& cfg = ctx.cfg();
    RowSampler scheme;
    if (cfg.text_or("run.source", "model") == "bootstrap") {
        const auto x = input_series(ctx, 2);
        const auto g = gated_fit(ctx, x);
        if (!g.gate.accepted) return;
        scheme = bootstrap_rows(g.fit, cfg.real_or("fit.delta", 0.01));
    } else {
        scheme = model_rows(model_from_config(cfg), burn_in(cfg));
    }
    CltOptions opt;
    opt.epsilon = cfg.real_or("run.epsilon", 0.1);
    opt.ks_threshold = cfg.optional_real("run.ks_threshold");
    const auto n_grid = cfg.count_grid("run.n_grid");
    const auto rep = triangular_clt_check(scheme, n_grid, cfg.count("run.replicates"), ctx.seed(), opt);
    CsvTable t({"n", "ks", "sigma2", "lindeberg"});
    for (std::size_t j = 0; j < rep.n_grid.size(); ++j) t.add_row({cell(rep.n_grid[j]), rep.ks_distance[j], rep.sigma2[j], rep.lindeberg[j]});
    ctx.write("clt.csv", t);
    ctx.verdict("clt", rep.verdict, rep.ks_distance.back(), rep.ks_threshold);
    ctx.report.summary["sigma2_hat"] = rep.sigma2_hat;
    ctx.report.summary["ks_decreasing"] = rep.ks_decreasing;
}

std::vector<std::vector<double>> parse_probes(const std::string& text, std::size_t dim) {
    std::vector<std::vector<double>> out;
    for (const auto& item : split(text, ';')) {
        auto v = parse_real_list(item);
        if (v.size() != dim) throw std::invalid_argument("config key 'run.probes': probe '" + item + "' does not have dimension " + std::to_string(dim));
        out.push_back(std::move(v));
    }
    return out;
}

void run_mclt(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto model = model_from_config(cfg);
    VectorRowSampler scheme;
    if (cfg.text_or("run.scheme", "scaled") == "windowed") {
        scheme = windowed_rows(model, cfg.count_or("run.blocks", 4));
    } else {
        scheme = scaled_model_rows(std::vector<ProcessModel>(cfg.count_or("run.dim", 2), model));
    }
    std::vector<std::vector<double>> probes;
    if (cfg.has("run.probes")) {
        probes = parse_probes(cfg.text("run.probes"), scheme.dim);
    } else {
        for (std::size_t j = 0; j < scheme.dim; ++j) {
            std::vector<double> e(scheme.dim, 0.0);
            e[j] = 1.0;
            probes.push_back(e);
        }
        probes.emplace_back(scheme.dim, 1.0 / std::sqrt(static_cast<double>(scheme.dim)));
    }
    MultivariateCltOptions opt;
    opt.chunks = cfg.count_or("run.chunks", 64);
    const auto n_grid = cfg.count_grid("run.n_grid");
    const auto rep = multivariate_clt_check(scheme, n_grid, cfg.count("run.replicates"), probes, ctx.seed(), opt);
    CsvTable t({"n", "probe", "dependence_sum", "noise_floor", "ks"});
    CsvTable s({"n", "i", "j", "sigma", "stderr", "sum_covariance", "sum_covariance_stderr"});
    for (const auto& step : rep.steps) {
        for (std::size_t k = 0; k < step.probes.size(); ++k)
            t.add_row({cell(step.n), cell(k), step.probes[k].dependence_sum, step.probes[k].noise_floor, step.probes[k].ks});
        for (std::size_t i = 0; i < rep.dim; ++i)
            for (std::size_t j = 0; j < rep.dim; ++j) {
                const std::size_t ij = i * rep.dim + j;
                s.add_row({cell(step.n), cell(i), cell(j), step.sigma[ij], step.sigma_stderr[ij], step.sum_covariance[ij],
                           step.sum_covariance_stderr[ij]});
            }
    }
    ctx.write("mclt.csv", t);
    ctx.write("mclt_sigma.csv", s);
    const auto& last = rep.steps.back();
    const double worst = last.ks_component.empty() ? 0.0 : *std::max_element(last.ks_component.begin(), last.ks_component.end());
    ctx.verdict("mclt", rep.verdict, worst, rep.ks_threshold);
    ctx.report.summary["dim"] = rep.dim;
    ctx.report.summary["probes"] = probes;
}

void run_bernstein(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto params = bound_params_from_config(cfg);
    const double a_n = cfg.real("bounds.A_n");
    const std::size_t n = cfg.count("bounds.n");
    const auto grid = cfg.real_grid("run.t_grid");
    CsvTable t({"t", "bound"});
    double top = 0.0, rise = -std::numeric_limits<double>::infinity(), bottom = 1.0;
    double prev_t = 0.0, prev_b = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double b = bernstein_bound(params, a_n, n, grid[j]);
        t.add_row({grid[j], b});
        top = std::max(top, b);
        bottom = std::min(bottom, b);
        if (j > 0 && grid[j] > prev_t) rise = std::max(rise, b - prev_b);
        prev_t = grid[j];
        prev_b = b;
    }
    ctx.write("bernstein.csv", t);
    ctx.verdict("bound_in_unit_interval", top <= 1.0 && bottom > 0.0, top, 1.0);
    if (grid.size() > 1) ctx.verdict("nonincreasing_in_t", rise <= 0.0, rise, 0.0);
    ctx.report.summary["B_n"] = bernstein_b(params, a_n, n);
    ctx.report.summary["params"] = params_json(params);
}

void run_rosenthal(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto p = static_cast<unsigned>(cfg.count("bounds.p"));
    const auto rho = rho_from(cfg);
    const auto r = rosenthal_gap_bound(p, cfg.real("bounds.K"), cfg.real("bounds.M"), cfg.count("bounds.n"), rho);
    CsvTable rk({"k", "rho_kn"});
    for (std::size_t j = 0; j < r.rho_kn.size(); ++j) rk.add_row({static_cast<long long>(j + 2), r.rho_kn[j]});
    ctx.write("rosenthal_rho.csv", rk);
    CsvTable au({"u", "a_up"});
    for (std::size_t j = 0; j < r.a_up.size(); ++j) au.add_row({static_cast<long long>(j + 1), static_cast<long long>(r.a_up[j])});
    ctx.write("rosenthal_a.csv", au);
    ctx.verdict("bound_finite", std::isfinite(r.bound) && r.bound >= 0.0, r.bound, 0.0);
    ctx.report.summary["bound"] = r.bound;
    ctx.report.summary["B_pn"] = r.b_pn;
    ctx.report.summary["term_sum"] = r.term_sum;
    ctx.report.summary["rho"] = rho.describe();
}

void series_verdict(Context& ctx, const BoundParams& params) {
    const auto check = check_rho_series(params, ctx.cfg().count_or("bounds.k_max", 20));
    double worst = 0.0;
    for (std::size_t k = 0; k < check.series.size(); ++k) worst = std::max(worst, check.series[k] / check.cap[k]);
    ctx.verdict("rho_series_condition", check.ok, worst, 1.0);
}

void run_tail(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto model = model_from_config(cfg);
    const auto params = bound_params_from_config(cfg);
    series_verdict(ctx, params);
    TailCheckOptions opt;
    opt.margin = cfg.real_or("run.margin", 0.1);
    opt.sigma_n2 = cfg.optional_real("run.sigma2");
    const auto grid = cfg.real_grid("run.t_grid");
    ctx.progress("drawing partial sums");
    const auto rep = tail_check(model_sum_sampler(model, cfg.count("sim.n")), params, grid, cfg.count("run.replicates"), ctx.seed(), opt);
    CsvTable t({"t", "exceedance", "stderr", "wilson_upper", "bound"});
    for (std::size_t j = 0; j < rep.t_grid.size(); ++j)
        t.add_row({rep.t_grid[j], rep.exceedance[j], rep.stderr[j], rep.wilson_upper[j], rep.bound[j]});
    ctx.write("tail.csv", t);
    ctx.verdict("tail_bound", rep.passed, static_cast<double>(rep.violations), 0.0);
    ctx.report.summary["sigma_n2_hat"] = rep.sigma_n2_hat;
    ctx.report.summary["A_n"] = rep.a_n;
    ctx.report.summary["B_n"] = rep.b_n;
    ctx.report.summary["params"] = params_json(params);
}

void run_moment_gap(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const auto model = model_from_config(cfg);
    const auto p = static_cast<unsigned>(cfg.count("run.p"));
    const auto params = bound_params_from_config(cfg, static_cast<double>(p));
    ctx.progress("drawing partial sums");
    const auto rep = moment_gap_check(model_sum_sampler(model, cfg.count("sim.n")), p, params, cfg.count("run.replicates"), ctx.seed(),
                                      cfg.real_or("run.tolerance_se", 3.0));
    CsvTable t({"p", "moment_hat", "sigma_n2_hat", "gap", "stderr", "bound"});
    t.add_row({static_cast<long long>(p), rep.moment_hat, rep.sigma_n2_hat, rep.gap, rep.stderr_gap, rep.bound.bound});
    ctx.write("moment_gap.csv", t);
    const double tol = cfg.real_or("run.tolerance_se", 3.0);
    ctx.verdict("moment_gap", rep.passed, rep.gap, rep.bound.bound + tol * rep.stderr_gap);
    ctx.report.summary["B_pn"] = rep.bound.b_pn;
    ctx.report.summary["term_sum"] = rep.bound.term_sum;
    ctx.report.summary["rho_kn"] = rep.bound.rho_kn;
    ctx.report.summary["a_up"] = rep.bound.a_up;
    ctx.report.summary["params"] = params_json(params);
}

std::string issues_text(const std::vector<ConfigIssue>& issues) {
    std::string out = "invalid config:";
    for (const auto& i : issues) out += "\n  " + i.key + ": " + i.message;
    return out;
}

}  // namespace

const char* to_string(Subcommand sub) {
    for (const auto& n : kNames)
        if (n.sub == sub) return n.name;
    return "?";
}

std::optional<Subcommand> parse_subcommand(const std::string& name) {
    for (const auto& n : kNames)
        if (name == n.name) return n.sub;
    return std::nullopt;
}

const std::vector<Subcommand>& all_subcommands() {
    static const std::vector<Subcommand> subs = [] {
        std::vector<Subcommand> v;
        for (const auto& n : kNames) v.push_back(n.sub);
        return v;
    }();
    return subs;
}

std::vector<KeySpec> schema_for(Subcommand sub) {
    std::vector<KeySpec> s{{"subcommand", VT::text, false}};
    const KeySpec seed{"sim.seed", VT::seed, true};
    const KeySpec burn{"sim.burn_in", VT::integer, false};
    const KeySpec lags{"run.lags", VT::count_grid, true};
    const KeySpec reps{"run.replicates", VT::count, true};
    switch (sub) {
        case Subcommand::simulate:
            add(s, model_keys(true));
            add(s, {seed, {"sim.n", VT::count, true}, burn});
            break;
        case Subcommand::fit:
        case Subcommand::bootstrap:
            add(s, model_keys(false));
            add(s, fit_keys());
            add(s, {seed, {"sim.n", VT::count, false}, burn, {"data.series", VT::path, false}});
            if (sub == Subcommand::bootstrap) s.push_back({"run.B", VT::count, false});
            break;
        case Subcommand::tau:
            add(s, model_keys(true));
            add(s, {seed, burn, lags, reps, {"run.eps", VT::real, false}, {"run.block", VT::count, false},
                    {"run.cut_offset", VT::integer, false}});
            break;
        case Subcommand::audit:
        case Subcommand::causal_audit:
            add(s, model_keys(true));
            add(s, fit_keys());
            add(s, {seed, burn, lags, reps, {"sim.n", VT::count, false}, {"run.bank_size", VT::count, false},
                    {"run.bank_seed", VT::seed, false}, {"run.source", VT::text, false}, {"run.mode", VT::text, false}});
            if (sub == Subcommand::audit)
                add(s, {{"run.kind", VT::text, false}, {"run.eps", VT::real, false}, {"run.tolerance_se", VT::real, false}});
            break;
        case Subcommand::donsker:
            add(s, model_keys(true));
            add(s, {seed, burn, reps, {"sim.n", VT::count, true}, {"run.grid", VT::real_grid, false},
                    {"run.sigma2", VT::real, false}, {"run.long_run_replicates", VT::count, false},
                    {"run.lag_cutoff", VT::count, false}});
            break;
        case Subcommand::empproc:
            add(s, model_keys(true));
            add(s, {seed, burn, reps, {"sim.n", VT::count, true}, {"run.x_grid", VT::real_grid, false},
                    {"run.lag_cutoff", VT::integer, false}, {"run.oracle_replicates", VT::count, false},
                    {"run.standard_bridge", VT::boolean, false}, {"run.transform", VT::text, false},
                    {"run.calibration", VT::count, false}, {"run.tolerance_se", VT::real, false}});
            break;
        case Subcommand::clt:
            add(s, model_keys(true));
            add(s, fit_keys());
            add(s, {seed, burn, reps, {"sim.n", VT::count, false}, {"run.n_grid", VT::count_grid, true},
                    {"run.epsilon", VT::real, false}, {"run.ks_threshold", VT::real, false}, {"run.source", VT::text, false}});
            break;
        case Subcommand::mclt:
            add(s, model_keys(true));
            add(s, {seed, reps, {"run.n_grid", VT::count_grid, true}, {"run.dim", VT::count, false},
                    {"run.scheme", VT::text, false}, {"run.blocks", VT::count, false}, {"run.probes", VT::text, false},
                    {"run.chunks", VT::count, false}});
            break;
        case Subcommand::bernstein:
            add(s, bound_keys());
            for (auto& k : s)
                if (k.key == "bounds.K" || k.key == "bounds.M" || k.key == "bounds.L1" || k.key == "bounds.L2") k.required = true;
            add(s, {{"bounds.n", VT::count, true}, {"bounds.A_n", VT::real, true}, {"run.t_grid", VT::real_grid, true}});
            break;
        case Subcommand::rosenthal:
            add(s, {{"bounds.p", VT::count, true}, {"bounds.K", VT::real, true}, {"bounds.M", VT::real, true},
                    {"bounds.n", VT::count, true}, {"bounds.rho", VT::text, false}, {"bounds.rho_file", VT::path, false}});
            break;
        case Subcommand::tail:
        case Subcommand::moment_gap:
            add(s, model_keys(true));
            add(s, bound_keys());
            add(s, {seed, reps, {"sim.n", VT::count, true}});
            if (sub == Subcommand::tail)
                add(s, {{"run.t_grid", VT::real_grid, true}, {"run.margin", VT::real, false}, {"run.sigma2", VT::real, false}});
            else
                add(s, {{"run.p", VT::count, true}, {"run.tolerance_se", VT::real, false}});
            break;
    }
    return s;
}

ProcessModel model_from_config(const Config& cfg) {
    const std::string kind = cfg.text("model.kind");
    const auto innovation = innovation_from(cfg);
    if (kind == "ar") return ARModel(cfg.real_list("model.theta"), innovation);
    if (kind == "nlar") return NonlinearARModel(PiecewiseLinear(cfg.real_list("model.knots"), cfg.real_list("model.values")), innovation);
    if (kind == "arch") {
        auto b = cfg.has("model.decay") ? decay_sequence(cfg) : explicit_sequence(cfg.real_list("model.b"));
        return ArchInfModel(cfg.real("model.b0"), std::move(b), innovation, cfg.real_or("model.m_norm", 2.0));
    }
    if (kind == "larch") {
        if (cfg.has("model.decay")) {
            const auto call = parse_call(cfg.text("model.decay"));
            if (call.name != "power" || call.args.size() != 2)
                throw std::invalid_argument("config key 'model.decay': larch supports power(scale,exponent)");
            return LarchModel::power_law(cfg.real("model.a0"), parse_real(call.args[0]), parse_real(call.args[1]),
                                         cfg.count("model.k_trunc"), innovation);
        }
        return LarchModel(cfg.real("model.a0"), lag_map("model.a", cfg.text("model.a")), innovation);
    }
    if (kind == "bilinear") {
        return BilinearModel(cfg.real_or("model.a0", 0.0), parse_real_list(cfg.text("model.a")), cfg.real_or("model.c0", 0.0),
                             cfg.real_list("model.c"), innovation, cfg.real_or("model.m_norm", 2.0));
    }
    if (kind == "volterra") return VolterraModel(volterra_terms(cfg.text("model.terms")), innovation);
    if (kind == "linear") {
        if (cfg.has("model.decay")) {
            const auto call = parse_call(cfg.text("model.decay"));
            if (call.name != "power" || call.args.size() != 2)
                throw std::invalid_argument("config key 'model.decay': linear supports power(scale,exponent)");
            return LinearModel::power_law(parse_real(call.args[0]), parse_real(call.args[1]), cfg.count("model.k_trunc"), innovation);
        }
        return LinearModel(lag_map("model.a", cfg.text("model.a")), innovation);
    }
    throw std::invalid_argument("config key 'model.kind': unknown kind '" + kind + "'");
}

BoundParams bound_params_from_config(const Config& cfg, std::optional<double> moment_order) {
    if (!cfg.has("bounds.K")) {
        if (!cfg.has("model.kind"))
            throw std::invalid_argument("config key 'bounds.K': required unless the model is AR(1)");
        const auto model = model_from_config(cfg);
        const auto* ar = std::get_if<ARModel>(&model);
        if (!ar || ar->order() != 1)
            throw std::invalid_argument("config key 'bounds.K': constants can only be derived for AR(1); give bounds.* explicitly");
        return ar1_bound_params(*ar, moment_order);
    }
    BoundParams p;
    p.K = cfg.real("bounds.K");
    p.M = cfg.real("bounds.M");
    if (!(p.K > 0.0) || !(p.M > 0.0)) throw std::invalid_argument("config keys 'bounds.K', 'bounds.M': must be positive");
    p.rho = rho_from(cfg);
    p.nu = cfg.real_or("bounds.nu", 0.0);
    p.psi = parse_psi_variant(cfg.text_or("bounds.psi", "b"));
    p.alpha = cfg.real_or("bounds.alpha", 0.5);
    if (cfg.has("bounds.L1") || cfg.has("bounds.L2")) {
        p.L1 = cfg.real("bounds.L1");
        p.L2 = cfg.real("bounds.L2");
        p.mu = cfg.real_or("bounds.mu", 0.0);
    } else if (p.rho.kind == RhoSequence::Kind::geometric) {
        const auto g = geometric_rho_constants(p.rho.c, p.rho.q, cfg.count_or("bounds.k_max", 20));
        p.L1 = g.L1;
        p.L2 = g.L2;
        p.mu = g.mu;
    } else {
        // finite support S: sum (s+1)^k rho(s) <= S^k sum rho
        double total = 0.0;
        for (double v : p.rho.values) total += v;
        p.L1 = std::max(total, std::numeric_limits<double>::min());
        p.L2 = static_cast<double>(std::max<std::size_t>(p.rho.values.size(), 1));
        p.mu = 0.0;
    }
    if (!(p.mu >= 0.0) || !(p.nu >= 0.0)) throw std::invalid_argument("config keys 'bounds.mu', 'bounds.nu': must be >= 0");
    return p;
}

bool RunReport::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

RunReport run(Subcommand sub, Config config, const RunOptions& options) {
    if (options.seed) config.set("sim.seed", std::to_string(*options.seed));
    if (!config.has("subcommand")) config.set("subcommand", to_string(sub));
    const auto validation = validate_config(config, sub);
    if (!validation.ok()) throw std::invalid_argument(issues_text(validation.issues));
    std::filesystem::create_directories(options.out_dir);
    const auto start = std::chrono::steady_clock::now();
    Context ctx(sub, std::move(config), options);
    ctx.report.summary = json::object();
    ctx.progress(std::string("running ") + to_string(sub));
    switch (sub) {
        case Subcommand::simulate: run_simulate(ctx); break;
        case Subcommand::fit: run_fit(ctx); break;
        case Subcommand::bootstrap: run_bootstrap(ctx); break;
        case Subcommand::tau: run_tau(ctx); break;
        case Subcommand::audit: run_audit(ctx); break;
        case Subcommand::causal_audit: run_causal_audit(ctx); break;
        case Subcommand::donsker: run_donsker(ctx); break;
        case Subcommand::empproc: run_empproc(ctx); break;
        case Subcommand::clt: run_clt(ctx); break;
        case Subcommand::mclt: run_mclt(ctx); break;
        case Subcommand::bernstein: run_bernstein(ctx); break;
        case Subcommand::rosenthal: run_rosenthal(ctx); break;
        case Subcommand::tail: run_tail(ctx); break;
        case Subcommand::moment_gap: run_moment_gap(ctx); break;
    }
    auto report = std::move(ctx.report);
    report.threads = thread_count();
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto path = options.out_dir / "report.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << report_json(report).dump(2) << '\n';
    return report;
}

json report_json(const RunReport& report) {
    json verdicts = json::array();
    for (const auto& v : report.verdicts)
        verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"statistic", v.statistic}, {"threshold", v.threshold}});
    json config = json::object();
    for (const auto& e : report.config.entries()) config[e.key] = e.value;
    return {{"tool", "wdep"},
            {"version", kToolkitVersion},
            {"subcommand", to_string(report.subcommand)},
            {"passed", report.passed()},
            {"verdicts", verdicts},
            {"artifacts", report.artifacts},
            {"config", config},
            {"summary", report.summary},
            {"threads", report.threads},
            {"runtime_seconds", report.runtime_seconds}};
}

Config config_from_report(const json& report) {
    if (!report.contains("config") || !report["config"].is_object())
        throw std::invalid_argument("report has no 'config' object");
    auto cfg = Config::parse("", "<report>");
    for (const auto& [key, value] : report["config"].items()) {
        if (!value.is_string()) throw std::invalid_argument("report config value for '" + key + "' is not a string");
        cfg.set(key, value.get<std::string>());
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    if (path.extension() == ".json") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read config file '" + path.string() + "'");
        try {
            return config_from_report(json::parse(in));
        } catch (const json::exception& e) {
            throw std::runtime_error(path.string() + ": " + e.what());
        }
    }
    return Config::load(path);
}

ValidationReport validate_config(const Config& config, std::optional<Subcommand> sub) {
    ValidationReport rep;
    if (const auto* named = config.find("subcommand")) {
        const auto parsed = parse_subcommand(*named);
        if (!parsed) {
            rep.issues.push_back({ConfigIssue::Kind::invalid_value, "subcommand", "unknown subcommand '" + *named + "'"});
            return rep;
        }
        if (sub && *sub != *parsed) {
            rep.issues.push_back({ConfigIssue::Kind::invalid_value, "subcommand",
                                  "config is for '" + *named + "' but '" + to_string(*sub) + "' was requested"});
            return rep;
        }
        sub = parsed;
    }
    if (!sub) {
        rep.issues.push_back({ConfigIssue::Kind::missing_key, "subcommand", "required key is missing"});
        return rep;
    }
    rep.subcommand = sub;
    rep.issues = check_schema(config, schema_for(*sub));
    for (const auto& [key, allowed] : choice_keys()) {
        const auto* v = config.find(key);
        if (v && std::find(allowed.begin(), allowed.end(), *v) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            rep.issues.push_back({ConfigIssue::Kind::invalid_value, key, "'" + *v + "' is not one of: " + list});
        }
    }
    if (!rep.issues.empty()) return rep;
    if ((*sub == Subcommand::fit || *sub == Subcommand::bootstrap) && !config.has("data.series") && !config.has("model.kind"))
        rep.issues.push_back({ConfigIssue::Kind::missing_key, "data.series", "give data.series or a model to simulate from"});
    const bool model_required = *sub != Subcommand::bernstein && *sub != Subcommand::rosenthal;
    if (model_required && config.has("model.kind")) {
        try {
            const auto model = model_from_config(config);
            const auto st = stationarity_check(model);
            if (!st.ok) rep.issues.push_back({ConfigIssue::Kind::invalid_value, "model", "not stationary: " + st.detail});
        } catch (const std::exception& e) {
            rep.issues.push_back({ConfigIssue::Kind::invalid_value, "model", e.what()});
        }
    }
    if (rep.issues.empty() && (*sub == Subcommand::tail || *sub == Subcommand::moment_gap || *sub == Subcommand::bernstein)) {
        try {
            std::optional<double> order;
            if (*sub == Subcommand::moment_gap) order = static_cast<double>(config.count("run.p"));
            bound_params_from_config(config, order);
        } catch (const std::exception& e) {
            rep.issues.push_back({ConfigIssue::Kind::invalid_value, "bounds", e.what()});
        }
    }
    return rep;
}

ValidationReport validate_config_file(const std::filesystem::path& path) { return validate_config(load_config(path)); }

json validation_json(const ValidationReport& report) {
    json issues = json::array();
    for (const auto& i : report.issues) issues.push_back({{"kind", to_string(i.kind)}, {"key", i.key}, {"message", i.message}});
    return {{"tool", "wdep"},
            {"version", kToolkitVersion},
            {"subcommand", report.subcommand ? json(to_string(*report.subcommand)) : json(nullptr)},
            {"valid", report.ok()},
            {"issues", issues}};
}

}  // namespace wdep
