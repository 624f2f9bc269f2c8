#include <cstdio>
#include <iostream>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "glsim/errors.hpp"
#include "glsim/experiments.hpp"

namespace {

// --config is honored before flag parsing so flags can override it.
glsim::ExperimentConfig preload_config(int argc, char** argv) {
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw glsim::config_error(std::string("cannot open config: ") + argv[i + 1]);
            std::ostringstream buf;
            buf << in.rdbuf();
            return glsim::ExperimentConfig::from_json(buf.str());
        }
    }
    return glsim::ExperimentConfig{};
}

void add_common_options(CLI::App* cmd, glsim::ExperimentConfig& config) {
    cmd->add_option("--n", config.n, "game count per round");
    cmd->add_option("--delta", config.delta, "win-fraction slack, rational or decimal");
    cmd->add_option("--epsilon", config.epsilon, "per-gate fault probability (default delta/100)");
    cmd->add_option("--trials", config.trials, "Monte Carlo trial count");
    cmd->add_option("--seed", config.seed, "master RNG seed");
    cmd->add_option("--cap", config.cap, "enumeration cap");
    cmd->add_option("--workers", config.workers, "worker threads (0 = hardware)");
    cmd->add_option("--out", config.out, "output stem; writes <out>.csv etc.");
}

}  // namespace

int main(int argc, char** argv) {
    glsim::ExperimentConfig config;
    try {
        config = preload_config(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    CLI::App app{"Magic Square games on shallow circuits: exact game values, a noisy\n"
                 "entangled prover, circuit-to-protocol compilation with bit metering,\n"
                 "and verifier/prover advantage experiments."};
    app.require_subcommand(0, 1);
    std::string config_path;

    auto* value = app.add_subcommand("value", "exact classical or leakage-assisted game value");
    value->add_option("--game", config.game, "game file or 'magic-square'");
    value->add_option("--leak-bits", config.leak_bits, "one-way leakage budget in bits");
    add_common_options(value, config);

    auto* completeness =
        app.add_subcommand("completeness", "honest-prover acceptance statistics");
    completeness->add_option("--epsilon-sweep", config.epsilon_sweep,
                             "comma-separated fault probabilities")
        ->delimiter(',');
    completeness->add_flag("--noisy-prep", config.noisy_resource_prep,
                           "apply gate noise during resource preparation");
    add_common_options(completeness, config);

    auto* scaling = app.add_subcommand("scaling", "communication vs size and depth table");
    scaling->add_option("--dim", config.dimension, "grid dimension");
    scaling->add_option("--n-sweep", config.n_sweep, "comma-separated game counts")
        ->delimiter(',');
    scaling->add_option("--depth-sweep", config.depth_sweep, "comma-separated circuit depths")
        ->delimiter(',');
    scaling->add_flag("--two-process", config.two_process,
                      "run Alice and Bob in separate processes");
    add_common_options(scaling, config);

    auto* probe = app.add_subcommand("probe", "classical adversary acceptance probe");
    probe->add_option("--game", config.game, "game file or 'magic-square'");
    probe->add_option("--adversary", config.adversary,
                      "'best-classical', 'fixed-parity', strategy table, or circuit .json");
    probe->add_option("--n-sweep", config.n_sweep, "comma-separated game counts")->delimiter(',');
    add_common_options(probe, config);

    auto* parbell = app.add_subcommand("parbell", "threshold runs for a generic Bell game");
    parbell->add_option("--game", config.game, "game file or 'magic-square'");
    parbell->add_option("--plugin", config.plugin,
                        "quantum strategy plugin ('magic-square' or 'none')");
    parbell->add_option("--omega-q", config.omega_q, "quantum value for the threshold, rational");
    add_common_options(parbell, config);

    auto* round = app.add_subcommand("round", "one verifier/prover round, JSON verdict");
    round->add_flag("--two-process", config.two_process, "prover in a separate process");
    round->add_flag("--noisy-prep", config.noisy_resource_prep,
                    "apply gate noise during resource preparation");
    add_common_options(round, config);

    app.add_option("--config", config_path, "JSON config file (loaded before flags)");
    for (auto* cmd : {value, completeness, scaling, probe, parbell, round}) {
        cmd->add_option("--config", config_path, "JSON config file (loaded before flags)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (app.get_subcommands().empty()) {
        if (config.subcommand.empty()) {
            std::cout << app.help();
            return 2;
        }
    } else {
        config.subcommand = app.get_subcommands().front()->get_name();
    }

    try {
        std::cout << glsim::run_command(config);
        return 0;
    } catch (const glsim::resource_error& e) {
        std::fprintf(stderr, "resource cap exceeded: %s\n", e.what());
        return 3;
    } catch (const glsim::config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const glsim::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
