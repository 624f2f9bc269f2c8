#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glsim/game_value.hpp"
#include "glsim/rational.hpp"

namespace glsim {

// Everything a subcommand needs, serializable as JSON. Re-running a saved
// config reproduces every output byte for byte; precedence is
// flags > config file > defaults.
struct ExperimentConfig {
    std::string subcommand;
    std::string game = "magic-square";
    std::string adversary = "best-classical";
    std::string plugin;            // parbell; empty = classical replay mode
    std::string omega_q;           // rational text, overrides plugin metadata
    std::string delta = "1/10";
    double epsilon = -1;           // < 0 means delta/100
    std::vector<double> epsilon_sweep;
    int64_t n = 1000;
    std::vector<int64_t> n_sweep;
    std::vector<int> depth_sweep;
    int dimension = 1;
    int leak_bits = 0;
    int64_t trials = 100;
    uint64_t seed = 1;
    uint64_t cap = kDefaultEnumerationCap;
    int workers = 0;
    bool two_process = false;
    bool noisy_resource_prep = false;
    std::string out;  // output stem; empty = stdout only

    Rational delta_rational() const { return parse_rational(delta); }
    double effective_epsilon() const;
    std::vector<double> effective_epsilon_sweep() const;
    std::vector<int64_t> effective_n_sweep() const;

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

// Shortest round-trip decimal; exact integers print without a point.
std::string format_double(double v);

struct ValueOutput {
    std::string printed;  // the exact rational, e.g. "8/9"
    std::string csv;
};
ValueOutput cmd_value(const ExperimentConfig& config);

struct CompletenessOutput {
    std::string csv;
    std::string jsonl;      // one round log per line
    std::string shots_csv;  // per-game rows of the first round
};
CompletenessOutput cmd_completeness(const ExperimentConfig& config);

struct ScalingOutput {
    std::string csv;
};
ScalingOutput cmd_scaling(const ExperimentConfig& config);

struct ProbeOutput {
    std::string csv;
    std::string summary;
};
ProbeOutput cmd_probe(const ExperimentConfig& config);

struct ParbellOutput {
    std::string csv;
};
ParbellOutput cmd_parbell(const ExperimentConfig& config);

struct RoundOutput {
    std::string json_line;
    bool accept = false;
};
RoundOutput cmd_round(const ExperimentConfig& config);

// Writes the subcommand outputs next to config.out (<out>.csv and friends)
// plus the resolved config at <out>.config.json. Returns the text meant for
// stdout.
std::string run_command(const ExperimentConfig& config);

}  // namespace glsim
