// aggsim: command-line driver for LTP aggregation runs and studies.
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltp/config.hpp"
#include "ltp/errors.hpp"
#include "ltp/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericFailure = 3;

ltp::SimulationConfig load(const std::string& path, const std::vector<std::string>& overrides) {
    ltp::SimulationConfig cfg = path.empty() ? ltp::SimulationConfig{} : ltp::SimulationConfig::from_file(path);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ltp::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

void print_report(const ltp::ErrorReport& report) {
    std::cout << std::setprecision(6);
    std::cout << "method        h          dt     steps          l1          lp        linf         dbl\n";
    for (const auto& r : report.rows)
        std::cout << std::setw(6) << r.method << std::setw(12) << r.h << std::setw(12) << r.dt << std::setw(10)
                  << r.steps << std::setw(12) << r.l1 << std::setw(12) << r.lp << std::setw(12) << r.linf
                  << std::setw(12) << r.dbl << '\n';
    for (const auto& r : report.rates)
        std::cout << "rate " << r.metric << " = " << r.fit.slope << " (residual " << r.fit.residual << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearly transformed particle simulations of aggregation equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    auto add_common = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--config", config_path, "key = value configuration file");
        if (required) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--set", overrides, "override one setting, key=value");
    };

    auto* run = app.add_subcommand("run", "run one scenario and write CSV artifacts");
    add_common(run, true);

    std::string h_list;
    std::string mode = "vs_exact";
    auto* converge = app.add_subcommand("converge", "convergence study over a list of h");
    add_common(converge, true);
    // "--h" shares its name with the short help flag.
    converge->set_help_flag("--help", "Print this help message and exit");
    converge->add_option("--h", h_list, "descending list, e.g. 0.04,0.02,0.01")->required();
    converge->add_option("--mode", mode, "vs_exact or self_convergence");

    std::string eps_list;
    auto* sweep = app.add_subcommand("sweep", "fixed-radius particle sweep against LTP");
    add_common(sweep, true);
    sweep->add_option("--eps", eps_list, "list of particle radii (default: sp.epsilon)");

    auto* validate = app.add_subcommand("validate", "check a configuration and print it in canonical form");
    add_common(validate, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        ltp::SimulationConfig cfg = load(config_path, overrides);
        if (*run) {
            const auto art = ltp::run_scenario(cfg);
            const auto& res = art.result;
            std::cout << "steps " << res.final_state.step << " / " << cfg.steps() << ", t = " << res.final_state.time
                      << ", particles " << res.final_state.size() << '\n';
            if (res.stopped_early) std::cout << "stopped early: " << res.stop_reason << '\n';
            std::cout << "wrote " << art.files.size() << " files to " << art.directory.string() << '\n';
        } else if (*converge) {
            const auto hs = ltp::parse_number_list(h_list);
            print_report(ltp::convergence_study(cfg, hs, ltp::parse_study_mode(mode)));
        } else if (*sweep) {
            const auto eps = eps_list.empty() ? cfg.sp_epsilon : ltp::parse_number_list(eps_list);
            print_report(ltp::sp_sweep(cfg, eps));
        } else if (*validate) {
            cfg.validate();
            std::cout << cfg.to_text() << "# steps = " << cfg.steps() << '\n';
        }
    } catch (const ltp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ltp::UnsupportedFeature& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ltp::UnsupportedPotential& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }
    return kOk;
}
