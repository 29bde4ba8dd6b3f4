#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdep/bounds.hpp"
#include "wdep/config.hpp"
#include "wdep/models.hpp"

namespace wdep {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class Subcommand {
    simulate, fit, bootstrap, tau, audit, causal_audit, donsker, empproc, clt, mclt,
    bernstein, rosenthal, tail, moment_gap
};

const char* to_string(Subcommand sub);
std::optional<Subcommand> parse_subcommand(const std::string& name);
const std::vector<Subcommand>& all_subcommands();

/// Keys accepted by a subcommand, with types and required flags.
std::vector<KeySpec> schema_for(Subcommand sub);

/// Builds the model from the `model.*` keys.
///   model.kind        ar | nlar | arch | larch | bilinear | volterra | linear
///   model.innovation  rademacher | gaussian(sd) | uniform(a,b); default gaussian(1)
///   ar:       model.theta = 0.5,0.25
///   nlar:     model.knots, model.values (piecewise-linear m)
///   arch:     model.b0, model.b (list) or model.decay = geometric(scale,ratio) | power(scale,exponent)
///             with model.k_trunc; model.m_norm
///   larch:    model.a0, model.a = "lag:coef,..." or model.decay = power(scale,exponent) with model.k_trunc
///   bilinear: model.a0, model.a (list), model.c0, model.c (list), model.m_norm
///   volterra: model.terms = "0,1:0.5; 2:0.3" (index tuple : coefficient)
///   linear:   model.a = "lag:coef,..." or model.decay = power(scale,exponent) with model.k_trunc
ProcessModel model_from_config(const Config& config);

/// Explicit `bounds.*` constants when bounds.K is present; otherwise the
/// AR(1) constants of ar1_bound_params (p = inf, or the given moment order).
BoundParams bound_params_from_config(const Config& config, std::optional<double> moment_order = std::nullopt);

struct Verdict {
    std::string name;
    bool passed = false;
    double statistic = 0.0;
    double threshold = 0.0;
};

struct RunReport {
    Subcommand subcommand = Subcommand::simulate;
    Config config;  // as run, including any seed override
    std::vector<Verdict> verdicts;
    std::vector<std::string> artifacts;
    nlohmann::json summary;
    int threads = 1;
    double runtime_seconds = 0.0;

    bool passed() const;
};

struct RunOptions {
    std::filesystem::path out_dir = "wdep_out";
    std::optional<std::uint64_t> seed;  // overrides sim.seed
    /// Progress lines; the CLI sends them to standard error.
    std::function<void(const std::string&)> progress;
};

/// Validates, executes, writes the CSV artifacts and report.json into
/// out_dir. Throws std::invalid_argument listing the issues of an invalid config.
RunReport run(Subcommand sub, Config config, const RunOptions& options = {});

nlohmann::json report_json(const RunReport& report);

/// Rebuilds the configuration echoed in a report.json.
Config config_from_report(const nlohmann::json& report);

/// Loads a key-value config, or the echoed config of a report.json.
Config load_config(const std::filesystem::path& path);

struct ValidationReport {
    std::optional<Subcommand> subcommand;
    std::vector<ConfigIssue> issues;
    bool ok() const { return issues.empty(); }
};

/// Schema issues for the subcommand named by the `subcommand` key (or the
/// given one), plus model and bound construction errors.
ValidationReport validate_config(const Config& config, std::optional<Subcommand> sub = std::nullopt);
/// Throws std::runtime_error if the file cannot be read or parsed.
ValidationReport validate_config_file(const std::filesystem::path& path);
nlohmann::json validation_json(const ValidationReport& report);

}  // namespace wdep
