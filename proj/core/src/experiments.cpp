#include "glsim/experiments.hpp"

#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "glsim/advantage.hpp"
#include "glsim/binomial.hpp"
#include "glsim/channel.hpp"
#include "glsim/circuit.hpp"
#include "glsim/errors.hpp"
#include "glsim/magic_square.hpp"
#include "glsim/parallel.hpp"
#include "glsim/protocol.hpp"

namespace glsim {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

double ExperimentConfig::effective_epsilon() const {
    if (epsilon >= 0) return epsilon;
    return to_double(delta_rational()) / 100.0;
}

std::vector<double> ExperimentConfig::effective_epsilon_sweep() const {
    if (!epsilon_sweep.empty()) return epsilon_sweep;
    return {effective_epsilon()};
}

std::vector<int64_t> ExperimentConfig::effective_n_sweep() const {
    if (!n_sweep.empty()) return n_sweep;
    return {n};
}

std::string ExperimentConfig::to_json() const {
    ordered_json j;
    j["subcommand"] = subcommand;
    j["game"] = game;
    j["adversary"] = adversary;
    j["plugin"] = plugin;
    j["omega_q"] = omega_q;
    j["delta"] = delta;
    j["epsilon"] = epsilon;
    j["epsilon_sweep"] = epsilon_sweep;
    j["n"] = n;
    j["n_sweep"] = n_sweep;
    j["depth_sweep"] = depth_sweep;
    j["dimension"] = dimension;
    j["leak_bits"] = leak_bits;
    j["trials"] = trials;
    j["seed"] = seed;
    j["cap"] = cap;
    j["workers"] = workers;
    j["two_process"] = two_process;
    j["noisy_resource_prep"] = noisy_resource_prep;
    j["out"] = out;
    return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config parse failure: ") + e.what());
    }
    ExperimentConfig c;
    c.subcommand = j.value("subcommand", c.subcommand);
    c.game = j.value("game", c.game);
    c.adversary = j.value("adversary", c.adversary);
    c.plugin = j.value("plugin", c.plugin);
    c.omega_q = j.value("omega_q", c.omega_q);
    c.delta = j.value("delta", c.delta);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.epsilon_sweep = j.value("epsilon_sweep", c.epsilon_sweep);
    c.n = j.value("n", c.n);
    c.n_sweep = j.value("n_sweep", c.n_sweep);
    c.depth_sweep = j.value("depth_sweep", c.depth_sweep);
    c.dimension = j.value("dimension", c.dimension);
    c.leak_bits = j.value("leak_bits", c.leak_bits);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.cap = j.value("cap", c.cap);
    c.workers = j.value("workers", c.workers);
    c.two_process = j.value("two_process", c.two_process);
    c.noisy_resource_prep = j.value("noisy_resource_prep", c.noisy_resource_prep);
    c.out = j.value("out", c.out);
    return c;
}

ValueOutput cmd_value(const ExperimentConfig& config) {
    GameSpec game = load_game_file(config.game);
    Rational value;
    if (config.leak_bits == 0) {
        value = brute_force_classical_value(game, config.cap, config.workers).value;
    } else {
        value = brute_force_leakage_value(game, config.leak_bits, config.cap, config.workers).value;
    }
    ValueOutput out;
    out.printed = to_string(value);
    std::ostringstream csv;
    csv << "game,leak_bits,value\n";
    csv << game.name << "," << config.leak_bits << "," << out.printed << "\n";
    out.csv = csv.str();
    return out;
}

namespace {

struct RoundStats {
    int64_t accepts = 0;
    int64_t total_wins = 0;
    int64_t min_wins = -1;

    RoundStats merged(const RoundStats& other) const {
        RoundStats out;
        out.accepts = accepts + other.accepts;
        out.total_wins = total_wins + other.total_wins;
        out.min_wins = min_wins < 0   ? other.min_wins
                       : other.min_wins < 0 ? min_wins
                                            : std::min(min_wins, other.min_wins);
        return out;
    }
};

struct RoundLog {
    uint64_t seed = 0;
    int64_t win_count = 0;
    bool accept = false;
};

RoundLog play_round(int64_t n, const Rational& delta, const NoiseModel& noise, uint64_t round_seed,
                    int workers) {
    CounterRng rng(round_seed);
    uint64_t verifier_seed = rng.next();
    uint64_t prover_seed = rng.next();
    VerifierRound round = verifier_round(n, delta, verifier_seed);
    ParmagicAnswers answers = honest_prover(round.message, noise, prover_seed, workers);
    Verdict verdict = verify(round.xs, round.ys, answers.a, answers.b, delta);
    return RoundLog{round_seed, verdict.win_count, verdict.accept};
}

}  // namespace

CompletenessOutput cmd_completeness(const ExperimentConfig& config) {
    Rational delta = config.delta_rational();
    int64_t n = config.n;
    int64_t trials = config.trials;
    if (trials < 1) throw config_error("completeness needs trials >= 1");

    CompletenessOutput out;
    std::ostringstream csv;
    csv << "n,delta,epsilon,trials,accepts,acceptance_rate,ci_low,ci_high,mean_win_fraction,"
           "per_game_failure_rate,min_win_count\n";
    std::ostringstream jsonl;

    CounterRng master(config.seed);
    for (size_t ei = 0; ei < config.effective_epsilon_sweep().size(); ++ei) {
        double eps = config.effective_epsilon_sweep()[ei];
        NoiseModel noise(eps);
        noise.noisy_resource_prep = config.noisy_resource_prep;
        CounterRng sweep = master.stream(ei);
        std::vector<uint64_t> round_seeds(static_cast<size_t>(trials));
        for (int64_t r = 0; r < trials; ++r) round_seeds[size_t(r)] = sweep.stream(uint64_t(r)).next();

        auto logs = parallel_table<RoundLog>(
            trials,
            [&](int64_t r) { return play_round(n, delta, noise, round_seeds[size_t(r)], 1); },
            config.workers);

        RoundStats stats;
        for (const RoundLog& log : logs) {
            stats.accepts += log.accept ? 1 : 0;
            stats.total_wins += log.win_count;
            stats.min_wins = stats.min_wins < 0 ? log.win_count
                                                : std::min(stats.min_wins, log.win_count);
        }
        Interval ci = wilson_interval(stats.accepts, trials);
        double mean_win = double(stats.total_wins) / (double(trials) * double(n));
        csv << n << "," << to_string(delta) << "," << format_double(eps) << "," << trials << ","
            << stats.accepts << "," << format_double(double(stats.accepts) / double(trials)) << ","
            << format_double(ci.low) << "," << format_double(ci.high) << ","
            << format_double(mean_win) << "," << format_double(1.0 - mean_win) << ","
            << stats.min_wins << "\n";
        for (int64_t r = 0; r < trials; ++r) {
            const RoundLog& log = logs[size_t(r)];
            ordered_json line;
            line["round"] = r;
            line["seed"] = log.seed;
            line["n"] = n;
            line["delta"] = to_string(delta);
            line["epsilon"] = eps;
            line["win_count"] = log.win_count;
            line["accept"] = log.accept;
            jsonl << line.dump() << "\n";
        }
    }
    out.csv = csv.str();
    out.jsonl = jsonl.str();

    // Shot-level export of the first round at the first noise setting.
    {
        double eps = config.effective_epsilon_sweep().front();
        NoiseModel noise(eps);
        noise.noisy_resource_prep = config.noisy_resource_prep;
        uint64_t round_seed = master.stream(0).stream(0).next();
        CounterRng rng(round_seed);
        uint64_t verifier_seed = rng.next();
        uint64_t prover_seed = rng.next();
        VerifierRound round = verifier_round(n, delta, verifier_seed);
        ParmagicAnswers answers = honest_prover(round.message, noise, prover_seed, config.workers);
        const GameSpec& ms = magic_square_game();
        std::ostringstream shots;
        shots << "game_index,x,y,a,b,satisfied\n";
        for (int64_t i = 0; i < n; ++i) {
            bool win = eval_predicate(ms, round.xs[size_t(i)], round.ys[size_t(i)],
                                      answers.a[size_t(i)], answers.b[size_t(i)]);
            shots << i << "," << round.xs[size_t(i)] << "," << round.ys[size_t(i)] << ","
                  << ms_output_bits(answers.a[size_t(i)]) << ","
                  << ms_output_bits(answers.b[size_t(i)]) << "," << (win ? 1 : 0) << "\n";
        }
        out.shots_csv = shots.str();
    }
    return out;
}

ScalingOutput cmd_scaling(const ExperimentConfig& config) {
    std::vector<int64_t> ns = config.effective_n_sweep();
    std::vector<int> depths = config.depth_sweep.empty() ? std::vector<int>{4, 8, 16}
                                                         : config.depth_sweep;
    CounterRng master(config.seed);
    std::ostringstream csv;
    csv << "dimension,n,depth,cut_pairs,measured_bits,bound_bits\n";
    for (int64_t n : ns) {
        InputGeometry geometry = grid_input_geometry(config.dimension, n);
        for (int d : depths) {
            // The circuit seed depends only on the depth, so 1D rows are
            // unchanged across n at fixed d.
            uint64_t circuit_seed = master.stream(uint64_t(d)).next();
            RandomCircuitOptions opts;
            opts.randomness_wires = 2;
            LayeredCircuit circuit =
                random_circuit(geometry, d, GateKind::Toffoli, circuit_seed, opts);
            ProtocolSpec spec = compile_protocol(circuit, geometry);

            CounterRng cell = master.stream(uint64_t(d) * 1000003 + uint64_t(n));
            std::vector<uint8_t> x_bits, y_bits, tape;
            for (int64_t i = 0; i < 2 * n; ++i) x_bits.push_back(uint8_t(cell.next() & 1));
            for (int64_t i = 0; i < 2 * n; ++i) y_bits.push_back(uint8_t(cell.next() & 1));
            for (size_t i = 0; i < circuit.randomness_wires().size(); ++i) {
                tape.push_back(uint8_t(cell.next() & 1));
            }
            ProtocolRun run = config.two_process
                                  ? execute_protocol_two_process(spec, x_bits, y_bits, tape)
                                  : execute_protocol(spec, x_bits, y_bits, tape);
            int64_t bound = 2 * int64_t(d) * geometry.cut_pair_count();
            csv << config.dimension << "," << n << "," << d << ","
                << geometry.cut_pair_count() << "," << run.transcript.total_bits() << "," << bound
                << "\n";
        }
    }
    return ScalingOutput{csv.str()};
}

ProbeOutput cmd_probe(const ExperimentConfig& config) {
    GameSpec game = load_game_file(config.game);
    AdversarySpec adversary = load_adversary(config.adversary, game);
    Rational delta = config.delta_rational();
    std::ostringstream csv;
    csv << "adversary,kind,n,delta,trials,accepts,acceptance_rate,ci_low,ci_high,per_game_p,"
           "exact_tail,exact_tail_decimal,source_depth,compiled_depth,comm_bits,leak_bits_total\n";
    std::ostringstream summary;
    CounterRng master(config.seed);
    for (int64_t n : config.effective_n_sweep()) {
        uint64_t probe_seed = master.stream(uint64_t(n)).next();
        ProbeResult r = run_soundness_probe(adversary, game, n, delta, config.trials, probe_seed,
                                            config.workers);
        csv << config.adversary << "," << r.metadata.kind << "," << n << "," << to_string(delta)
            << "," << r.trials << "," << r.accepts << "," << format_double(r.acceptance_rate)
            << "," << format_double(r.ci.low) << "," << format_double(r.ci.high) << ","
            << (r.per_game_p ? to_string(*r.per_game_p) : "") << ","
            << (r.exact_tail ? to_string(*r.exact_tail) : "") << ","
            << (r.exact_tail ? format_double(to_double(*r.exact_tail)) : "") << ","
            << r.metadata.source_depth << "," << r.metadata.compiled_depth << ","
            << r.metadata.comm_bits << "," << r.metadata.leak_bits_total << "\n";
        summary << "n=" << n << " acceptance " << format_double(r.acceptance_rate) << " ["
                << format_double(r.ci.low) << ", " << format_double(r.ci.high) << "]";
        if (r.exact_tail) {
            summary << " exact " << format_double(to_double(*r.exact_tail));
        }
        summary << "\n";
    }
    return ProbeOutput{csv.str(), summary.str()};
}

ParbellOutput cmd_parbell(const ExperimentConfig& config) {
    GameSpec game = load_game_file(config.game);
    Rational delta = config.delta_rational();
    if (delta < 0) throw config_error("delta must be nonnegative");

    bool quantum = !config.plugin.empty() && config.plugin != "none";
    if (quantum && config.plugin != "magic-square") {
        throw config_error("unknown quantum strategy plugin: " + config.plugin);
    }
    if (quantum && game.name != "magic-square") {
        throw config_error("plugin magic-square only plays the magic-square game");
    }
    bool constant_depth_declared = quantum;  // the built-in strategy is depth 2

    Rational omega_c = brute_force_classical_value(game, config.cap, config.workers).value;
    bool have_omega_q = quantum || !config.omega_q.empty();
    Rational omega_q = quantum ? Rational(1)
                               : (config.omega_q.empty() ? Rational(0)
                                                         : parse_rational(config.omega_q));
    if (have_omega_q && delta >= omega_q - omega_c) {
        throw config_error("delta must be below omega_q - omega_c = " +
                           to_string(omega_q - omega_c));
    }

    DeterministicStrategy classical;
    if (!quantum) classical = brute_force_classical_value(game, config.cap, config.workers).best;
    NoiseModel noise(config.effective_epsilon());
    noise.noisy_resource_prep = config.noisy_resource_prep;

    int64_t n = config.n;
    int64_t trials = config.trials;
    BigInt threshold = have_omega_q ? ceil_rational(Rational(n) * (omega_q - delta)) : BigInt(0);

    CounterRng master(config.seed);
    struct Tally {
        int64_t accepts = 0;
        int64_t wins = 0;
    };
    Tally tally = partitioned_reduce<Tally>(
        0, trials, Tally{},
        [&](int64_t lo, int64_t hi) {
            Tally local;
            for (int64_t trial = lo; trial < hi; ++trial) {
                CounterRng rng = master.stream(uint64_t(trial));
                SampledInputs inputs = sample_inputs(game, n, rng.next());
                std::vector<int> as(static_cast<size_t>(n)), bs(static_cast<size_t>(n));
                if (quantum) {
                    CounterRng games = rng.stream(1);
                    for (int64_t i = 0; i < n; ++i) {
                        CounterRng g = games.stream(uint64_t(i));
                        StateVector resource = prepare_bell_pairs(noise, g);
                        GameAnswers ans = measure_magic_square(resource, inputs.xs[size_t(i)],
                                                               inputs.ys[size_t(i)], noise, g);
                        as[size_t(i)] = ans.a;
                        bs[size_t(i)] = ans.b;
                    }
                } else {
                    for (int64_t i = 0; i < n; ++i) {
                        as[size_t(i)] = classical.alice[size_t(inputs.xs[size_t(i)])];
                        bs[size_t(i)] = classical.bob[size_t(inputs.ys[size_t(i)])];
                    }
                }
                int64_t wins = count_satisfied(game, inputs.xs, inputs.ys, as, bs);
                local.wins += wins;
                if (have_omega_q && BigInt(wins) >= threshold) ++local.accepts;
            }
            return local;
        },
        [](Tally a, const Tally& b) {
            a.accepts += b.accepts;
            a.wins += b.wins;
            return a;
        },
        config.workers <= 0 ? default_worker_count() : config.workers, config.workers);

    std::ostringstream csv;
    csv << "game,mode,n,delta,omega_q,omega_c,threshold,trials,accepts,acceptance_rate,win_rate,"
           "declared_constant_depth\n";
    csv << game.name << "," << (quantum ? "quantum:" + config.plugin : "classical") << "," << n
        << "," << to_string(delta) << "," << (have_omega_q ? to_string(omega_q) : "") << ","
        << to_string(omega_c) << "," << (have_omega_q ? threshold.str() : "") << "," << trials
        << "," << (have_omega_q ? std::to_string(tally.accepts) : "") << ","
        << (have_omega_q ? format_double(double(tally.accepts) / double(trials)) : "") << ","
        << format_double(double(tally.wins) / (double(trials) * double(n))) << ","
        << (constant_depth_declared ? "true" : "false") << "\n";
    return ParbellOutput{csv.str()};
}

namespace {

RoundOutput round_in_process(const ExperimentConfig& config) {
    Rational delta = config.delta_rational();
    NoiseModel noise(config.effective_epsilon());
    noise.noisy_resource_prep = config.noisy_resource_prep;
    CounterRng rng(config.seed);
    uint64_t verifier_seed = rng.next();
    uint64_t prover_seed = rng.next();
    VerifierRound round = verifier_round(config.n, delta, verifier_seed);
    ParmagicAnswers answers = honest_prover(round.message, noise, prover_seed, config.workers);
    Verdict verdict = verify(round.xs, round.ys, answers.a, answers.b, delta);

    ordered_json line;
    line["round"] = 0;
    line["seed"] = config.seed;
    line["n"] = config.n;
    line["delta"] = to_string(delta);
    line["epsilon"] = config.effective_epsilon();
    line["win_count"] = verdict.win_count;
    line["accept"] = verdict.accept;
    line["two_process"] = config.two_process;
    return RoundOutput{line.dump() + "\n", verdict.accept};
}

}  // namespace

RoundOutput cmd_round(const ExperimentConfig& config) {
    if (!config.two_process) return round_in_process(config);

    // Verifier here, prover in a forked child; the challenge and the answers
    // cross a framed byte stream. The verdict must match the in-process run.
    Rational delta = config.delta_rational();
    NoiseModel noise(config.effective_epsilon());
    noise.noisy_resource_prep = config.noisy_resource_prep;
    CounterRng rng(config.seed);
    uint64_t verifier_seed = rng.next();
    uint64_t prover_seed = rng.next();

    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
        throw std::runtime_error("socketpair failed");
    }
    pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error("fork failed");
    if (pid == 0) {
        ::close(fds[0]);
        FdChannel channel(fds[1], fds[1]);
        Frame challenge = channel.receive();
        PaddedMessage message = PaddedMessage::from_bits(challenge.bits);
        ParmagicAnswers answers = honest_prover(message, noise, prover_seed, config.workers);
        std::vector<uint8_t> reply;
        for (int a : answers.a) {
            for (int j = 0; j < 3; ++j) reply.push_back(uint8_t(ms_output_bit(a, j)));
        }
        for (int b : answers.b) {
            for (int j = 0; j < 3; ++j) reply.push_back(uint8_t(ms_output_bit(b, j)));
        }
        channel.send(1, 1, reply);
        ::_exit(0);
    }
    ::close(fds[1]);
    FdChannel channel(fds[0], fds[0]);
    VerifierRound round = verifier_round(config.n, delta, verifier_seed);
    channel.send(0, 0, round.message.to_bits());
    Frame reply = channel.receive();
    if (int64_t(reply.bits.size()) != 6 * config.n) {
        throw std::runtime_error("prover reply has wrong length");
    }
    std::vector<int> as(static_cast<size_t>(config.n)), bs(static_cast<size_t>(config.n));
    for (int64_t i = 0; i < config.n; ++i) {
        as[size_t(i)] = ms_output_index(reply.bits[size_t(3 * i)], reply.bits[size_t(3 * i + 1)],
                                        reply.bits[size_t(3 * i + 2)]);
        int64_t off = 3 * config.n;
        bs[size_t(i)] = ms_output_index(reply.bits[size_t(off + 3 * i)],
                                        reply.bits[size_t(off + 3 * i + 1)],
                                        reply.bits[size_t(off + 3 * i + 2)]);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw std::runtime_error("prover process exited abnormally");
    }
    Verdict verdict = verify(round.xs, round.ys, as, bs, delta);
    ordered_json line;
    line["round"] = 0;
    line["seed"] = config.seed;
    line["n"] = config.n;
    line["delta"] = to_string(delta);
    line["epsilon"] = config.effective_epsilon();
    line["win_count"] = verdict.win_count;
    line["accept"] = verdict.accept;
    line["two_process"] = config.two_process;
    return RoundOutput{line.dump() + "\n", verdict.accept};
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write output file: " + path);
    out << content;
}

}  // namespace

std::string run_command(const ExperimentConfig& config) {
    std::string stdout_text;
    auto emit = [&](const std::string& suffix, const std::string& content) {
        if (!config.out.empty()) write_file(config.out + suffix, content);
    };
    if (config.subcommand == "value") {
        ValueOutput out = cmd_value(config);
        stdout_text = out.printed + "\n";
        emit(".csv", out.csv);
    } else if (config.subcommand == "completeness") {
        CompletenessOutput out = cmd_completeness(config);
        stdout_text = out.csv;
        emit(".csv", out.csv);
        emit(".jsonl", out.jsonl);
        emit(".shots.csv", out.shots_csv);
    } else if (config.subcommand == "scaling") {
        ScalingOutput out = cmd_scaling(config);
        stdout_text = out.csv;
        emit(".csv", out.csv);
    } else if (config.subcommand == "probe") {
        ProbeOutput out = cmd_probe(config);
        stdout_text = out.summary;
        emit(".csv", out.csv);
        if (config.out.empty()) stdout_text += out.csv;
    } else if (config.subcommand == "parbell") {
        ParbellOutput out = cmd_parbell(config);
        stdout_text = out.csv;
        emit(".csv", out.csv);
    } else if (config.subcommand == "round") {
        RoundOutput out = cmd_round(config);
        stdout_text = out.json_line;
        emit(".jsonl", out.json_line);
    } else {
        throw config_error("unknown subcommand: " + config.subcommand);
    }
    if (!config.out.empty()) write_file(config.out + ".config.json", config.to_json());
    return stdout_text;
}

}  // namespace glsim
