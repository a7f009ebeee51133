#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gfk/errors.hpp"
#include "gfk/runner.hpp"

// Exit codes: 0 success, 2 config error, 3 guard exhaustion, 4 fit
// non-convergence, 1 anything else.

int main(int argc, char** argv) {
    CLI::App app{"Generalized Feynman-Kac path-integral energy estimator"};

    std::string config_path;
    std::string output_dir;
    int workers = -1;
    long long seed = -1;
    bool dry_run = false;

    app.add_option("-c,--config", config_path, "run configuration file")->required();
    app.add_option("-o,--output-dir", output_dir, "output directory (overrides config)");
    app.add_option("-w,--workers", workers, "worker count (overrides config)");
    app.add_option("-s,--seed", seed, "master seed (overrides config)");
    app.add_flag("--dry-run", dry_run, "validate the configuration and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        gfk::RunConfig cfg = gfk::load_config(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (workers >= 0) cfg.workers = workers;
        if (seed >= 0) cfg.master_seed = static_cast<std::uint32_t>(seed);
        cfg.validate();
        if (cfg.mode == gfk::WalkMode::GFK) gfk::make_trial_function(cfg); // early parameter check
        if (dry_run) {
            std::cout << "config ok: " << config_path << "\n";
            return 0;
        }

        gfk::RunResult res = gfk::run_to_files(cfg);
        gfk::emit_table(std::cout, res.stats,
                        {res.linear ? &*res.linear : nullptr,
                         res.nonlinear ? &*res.nonlinear : nullptr},
                        cfg.lambda0);
        if ((res.linear && !res.linear->monotone_fit) ||
            (res.nonlinear && !res.nonlinear->monotone_fit))
            std::cerr << "warning: fitted ln(z)/t is not monotone over the checkpoints\n";
        std::cout << "outputs written to " << cfg.output_dir << "\n";
        return 0;
    } catch (const gfk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gfk::GuardExhaustedError& e) {
        std::cerr << "guard exhaustion: " << e.what() << "\n";
        return 3;
    } catch (const gfk::FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
