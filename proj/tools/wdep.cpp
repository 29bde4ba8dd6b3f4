#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wdep/parallel.hpp"
#include "wdep/runner.hpp"

namespace {

const char* describe(wdep::Subcommand sub) {
    using S = wdep::Subcommand;
    switch (sub) {
        case S::simulate: return "Simulate a stationary path";
        case S::fit: return "Fit AR(p) and apply the stability gate";
        case S::bootstrap: return "Residual AR bootstrap of the first coefficient";
        case S::tau: return "Coupling estimate of the tau dependence coefficient";
        case S::audit: return "Covariance audit of weak-dependence coefficients";
        case S::causal_audit: return "Conditional-expectation audit of the past";
        case S::donsker: return "Partial-sum process diagnostics";
        case S::empproc: return "Empirical process covariance diagnostics";
        case S::clt: return "Triangular-array CLT diagnostics";
        case S::mclt: return "Multivariate CLT diagnostics";
        case S::bernstein: return "Evaluate the Bernstein tail bound";
        case S::rosenthal: return "Evaluate the Rosenthal moment bound";
        case S::tail: return "Monte Carlo check of the Bernstein tail bound";
        case S::moment_gap: return "Monte Carlo check of the Rosenthal moment bound";
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak-dependence simulation and diagnostics toolkit"};
    app.set_version_flag("--version", std::string(wdep::kToolkitVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "wdep_out";
    int threads = 0;
    std::optional<std::uint64_t> seed;

    for (auto sub : wdep::all_subcommands()) {
        auto* cmd = app.add_subcommand(wdep::to_string(sub), describe(sub));
        cmd->add_option("-c,--config", config_path, "Config file (key = value) or a report.json to replay")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
        cmd->add_option("-t,--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
        cmd->add_option("-s,--seed", seed, "Override sim.seed");
        cmd->callback([&, sub] {
            if (threads > 0) wdep::set_thread_count(threads);
            wdep::RunOptions opt;
            opt.out_dir = out_dir;
            opt.seed = seed;
            opt.progress = [](const std::string& line) { std::cerr << "wdep: " << line << '\n'; };
            const auto report = wdep::run(sub, wdep::load_config(config_path), opt);
            for (const auto& v : report.verdicts)
                std::cerr << "wdep: " << (v.passed ? "PASS " : "FAIL ") << v.name << " (" << v.statistic << " vs " << v.threshold << ")\n";
            std::cout << (std::filesystem::path(out_dir) / "report.json").string() << '\n';
            if (!report.passed()) throw CLI::RuntimeError(1);
        });
    }

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    validate->add_option("-c,--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    validate->callback([&] {
        const auto report = wdep::validate_config_file(config_path);
        std::cout << wdep::validation_json(report).dump(2) << '\n';
        if (!report.ok()) throw CLI::RuntimeError(2);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "wdep: error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
