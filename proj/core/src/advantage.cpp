#include "glsim/advantage.hpp"

#include <fstream>
#include <sstream>

#include "glsim/circuit_json.hpp"
#include "glsim/errors.hpp"
#include "glsim/parallel.hpp"
#include "glsim/protocol.hpp"

namespace glsim {

PaddedMessage PaddedMessage::build(const std::vector<int>& xs, const std::vector<int>& ys) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw domain_error("padded message needs equal, nonempty question lists");
    }
    PaddedMessage msg;
    msg.n = int64_t(xs.size());
    msg.symbols.assign(size_t(6 * msg.n), kBlank);
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < 0 || xs[i] > 2 || ys[i] < 0 || ys[i] > 2) {
            throw domain_error("question trit out of range");
        }
        msg.symbols[3 * i + 2] = uint8_t(xs[i]);
        msg.symbols[3 * (xs.size() + i) + 2] = uint8_t(ys[i]);
    }
    return msg;
}

std::vector<uint8_t> PaddedMessage::to_bits() const {
    std::vector<uint8_t> bits;
    bits.reserve(symbols.size() * 2);
    for (uint8_t s : symbols) {
        bits.push_back(uint8_t((s >> 1) & 1));
        bits.push_back(uint8_t(s & 1));
    }
    return bits;
}

PaddedMessage PaddedMessage::from_bits(const std::vector<uint8_t>& bits) {
    if (bits.size() % 12 != 0 || bits.empty()) {
        throw domain_error("padded message must be 12n bits");
    }
    PaddedMessage msg;
    msg.n = int64_t(bits.size() / 12);
    msg.symbols.resize(bits.size() / 2);
    for (size_t i = 0; i < msg.symbols.size(); ++i) {
        msg.symbols[i] = uint8_t(((bits[2 * i] & 1) << 1) | (bits[2 * i + 1] & 1));
    }
    return msg;
}

VerifierRound verifier_round(int64_t n, const Rational& delta, uint64_t seed) {
    if (n < 1) throw domain_error("need at least one game");
    if (delta < 0 || delta > Rational(1, 10)) {
        throw domain_error("delta must lie in [0, 1/10]");
    }
    CounterRng master(seed);
    VerifierRound round;
    round.xs.resize(size_t(n));
    round.ys.resize(size_t(n));
    for (int64_t i = 0; i < n; ++i) {
        CounterRng rng = master.stream(uint64_t(i));
        round.xs[size_t(i)] = int(rng.bounded(3));
        round.ys[size_t(i)] = int(rng.bounded(3));
    }
    round.message = PaddedMessage::build(round.xs, round.ys);
    return round;
}

Verdict verify(const std::vector<int>& xs, const std::vector<int>& ys, const std::vector<int>& as,
               const std::vector<int>& bs, const Rational& delta) {
    const GameSpec& game = magic_square_game();
    size_t n = xs.size();
    if (ys.size() != n || as.size() != n || bs.size() != n || n == 0) {
        throw domain_error("verdict needs equal-length question and answer lists");
    }
    Verdict v;
    v.per_game.resize(n);
    for (size_t i = 0; i < n; ++i) {
        bool win = eval_predicate(game, xs[i], ys[i], as[i], bs[i]);
        v.per_game[i] = win ? 1 : 0;
        v.win_count += win ? 1 : 0;
    }
    v.threshold = win_threshold(int64_t(n), delta);
    v.accept = BigInt(v.win_count) >= v.threshold;
    return v;
}

namespace {

// One swap gate per message bit; a fault's X/Y component on the consumed bit
// flips it.
uint8_t swap_in_bit(uint8_t bit, const NoiseModel& noise, CounterRng& rng) {
    if (!noise.noisy_swap_network || noise.epsilon <= 0) return bit;
    if (!rng.coin(noise.epsilon)) return bit;
    uint64_t pauli = 1 + rng.bounded(15);  // non-identity on the 2-qubit support
    int consumed = int(pauli & 3);
    if (consumed == 1 || consumed == 2) bit ^= 1;  // X or Y
    return bit;
}

}  // namespace

ParmagicAnswers honest_prover(const PaddedMessage& message, const NoiseModel& noise, uint64_t seed,
                              int workers) {
    if (message.n < 1 || int64_t(message.symbols.size()) != 6 * message.n) {
        throw domain_error("malformed padded message");
    }
    CounterRng master(seed);
    CounterRng swap_rng = master.stream(1);
    uint64_t game_seed = master.stream(2).next();

    // Swap network: route every populated register, ignore the blanks.
    std::vector<int> symbols(size_t(2 * message.n));
    for (int64_t k = 0; k < 2 * message.n; ++k) {
        uint8_t sym = message.symbols[size_t(3 * k + 2)];
        if (sym == PaddedMessage::kBlank) {
            throw domain_error("payload position holds a blank");
        }
        CounterRng rng = swap_rng.stream(uint64_t(k));
        uint8_t hi = swap_in_bit(uint8_t((sym >> 1) & 1), noise, rng);
        uint8_t lo = swap_in_bit(uint8_t(sym & 1), noise, rng);
        int value = (int(hi) << 1) | int(lo);
        symbols[size_t(k)] = value == 3 ? 0 : value;  // corrupted code falls back to 0
    }
    std::vector<int> xs(symbols.begin(), symbols.begin() + message.n);
    std::vector<int> ys(symbols.begin() + message.n, symbols.end());
    return run_parmagic(LineInput::from_symbols(xs, ys), noise, game_seed, workers);
}

void AdversarySpec::validate(const GameSpec& game, int64_t n) const {
    switch (kind) {
        case Kind::Replay:
            if (strategy.alice.size() != size_t(game.nx) ||
                strategy.bob.size() != size_t(game.ny)) {
                throw domain_error("replay strategy tables must cover the question alphabets");
            }
            for (int a : strategy.alice) {
                if (a < 0 || a >= game.na) throw domain_error("replay answer out of range");
            }
            for (int b : strategy.bob) {
                if (b < 0 || b >= game.nb) throw domain_error("replay answer out of range");
            }
            break;
        case Kind::Leakage: {
            if (leakage.bits < 0) throw domain_error("leakage budget must be nonnegative");
            size_t messages = size_t(1) << leakage.bits;
            if (leakage.message.size() != size_t(game.nx) ||
                leakage.alice.size() != size_t(game.nx) ||
                leakage.bob.size() != size_t(game.ny) * messages) {
                throw domain_error("leakage protocol tables have wrong shape");
            }
            break;
        }
        case Kind::Circuit: {
            GeometryReport report = validate_geometry(circuit);
            if (!report.ok()) {
                throw domain_error("adversary circuit fails geometry validation: " +
                                   report.violations.front().reason);
            }
            if (int64_t(circuit.input_wires().size()) != 4 * n) {
                throw domain_error("adversary circuit must have 4n input wires for n games");
            }
            break;
        }
    }
}

AdversarySpec load_adversary(const std::string& name_or_path, const GameSpec& game) {
    AdversarySpec spec;
    spec.name = name_or_path;
    if (name_or_path == "best-classical") {
        spec.kind = AdversarySpec::Kind::Replay;
        spec.strategy = brute_force_classical_value(game).best;
        return spec;
    }
    if (name_or_path == "fixed-parity") {
        spec.kind = AdversarySpec::Kind::Replay;
        spec.strategy.alice.assign(size_t(game.nx), ms_output_index("000"));
        spec.strategy.bob.assign(size_t(game.ny), ms_output_index("001"));
        return spec;
    }
    if (name_or_path.size() > 5 &&
        name_or_path.compare(name_or_path.size() - 5, 5, ".json") == 0) {
        spec.kind = AdversarySpec::Kind::Circuit;
        spec.circuit = load_circuit_file(name_or_path);
        return spec;
    }
    std::ifstream in(name_or_path);
    if (!in) throw config_error("cannot open adversary file: " + name_or_path);
    spec.kind = AdversarySpec::Kind::Replay;
    spec.strategy.alice.assign(size_t(game.nx), -1);
    spec.strategy.bob.assign(size_t(game.ny), -1);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string who, answer;
        int q;
        if (!(ls >> who)) continue;
        if (!(ls >> q >> answer)) throw domain_error("strategy line needs '<who> <q> <answer>'");
        int symbol = answer.size() == 3 && answer.find_first_not_of("01") == std::string::npos
                         ? ms_output_index(answer)
                         : std::stoi(answer);
        if (who == "alice") {
            if (q < 0 || q >= game.nx) throw domain_error("alice question out of range");
            spec.strategy.alice[size_t(q)] = symbol;
        } else if (who == "bob") {
            if (q < 0 || q >= game.ny) throw domain_error("bob question out of range");
            spec.strategy.bob[size_t(q)] = symbol;
        } else {
            throw domain_error("strategy rows start with 'alice' or 'bob'");
        }
    }
    for (int a : spec.strategy.alice) {
        if (a < 0) throw domain_error("strategy table misses an alice question");
    }
    for (int b : spec.strategy.bob) {
        if (b < 0) throw domain_error("strategy table misses a bob question");
    }
    return spec;
}

namespace {

void adversary_answers(const AdversarySpec& adv, const std::vector<int>& xs,
                       const std::vector<int>& ys, CounterRng& rng, std::vector<int>& as,
                       std::vector<int>& bs) {
    size_t n = xs.size();
    as.resize(n);
    bs.resize(n);
    switch (adv.kind) {
        case AdversarySpec::Kind::Replay:
            for (size_t i = 0; i < n; ++i) {
                as[i] = adv.strategy.alice[size_t(xs[i])];
                bs[i] = adv.strategy.bob[size_t(ys[i])];
            }
            break;
        case AdversarySpec::Kind::Leakage:
            for (size_t i = 0; i < n; ++i) {
                int msg = adv.leakage.message[size_t(xs[i])];
                as[i] = adv.leakage.alice[size_t(xs[i])];
                bs[i] = adv.leakage.bob_answer(ys[i], msg);
            }
            break;
        case AdversarySpec::Kind::Circuit: {
            LineInput line = LineInput::from_symbols(xs, ys);
            std::vector<uint8_t> input = line.x_bits;
            input.insert(input.end(), line.y_bits.begin(), line.y_bits.end());
            std::vector<uint8_t> tape(adv.circuit.randomness_wires().size());
            for (auto& bit : tape) bit = uint8_t(rng.next() & 1);
            std::vector<uint8_t> final_state = evaluate(adv.circuit, input, tape);
            auto wires = adv.circuit.input_wires();
            // Answers live on the question wires: 2-bit codes with the third
            // bit fixed by the Magic Square parity constraints.
            for (size_t i = 0; i < n; ++i) {
                int a0 = final_state[size_t(wires[2 * i])];
                int a1 = final_state[size_t(wires[2 * i + 1])];
                as[i] = ms_output_index(a0, a1, a0 ^ a1);
                int b0 = final_state[size_t(wires[2 * (n + i)])];
                int b1 = final_state[size_t(wires[2 * (n + i) + 1])];
                bs[i] = ms_output_index(b0, b1, b0 ^ b1 ^ 1);
            }
            break;
        }
    }
}

Rational leakage_per_game_value(const GameSpec& game, const LeakageProtocol& p) {
    Rational v = 0;
    for (int x = 0; x < game.nx; ++x) {
        for (int y = 0; y < game.ny; ++y) {
            if (game.weight(x, y) == 0) continue;
            int b = p.bob_answer(y, p.message[size_t(x)]);
            if (game.predicate[game.predicate_index(x, y, p.alice[size_t(x)], b)]) {
                v += game.weight(x, y);
            }
        }
    }
    return v;
}

}  // namespace

ProbeResult run_soundness_probe(const AdversarySpec& adversary, const GameSpec& game, int64_t n,
                                const Rational& delta, int64_t trials, uint64_t seed,
                                int workers) {
    if (trials < 1) throw domain_error("need at least one trial");
    if (n < 1) throw domain_error("need at least one game");
    adversary.validate(game, n);
    if (adversary.kind == AdversarySpec::Kind::Circuit && game.name != "magic-square") {
        throw domain_error("circuit adversaries answer with the trit encoding of magic-square");
    }

    ProbeResult result;
    result.trials = trials;
    CounterRng master(seed);
    result.accepts = partitioned_reduce<int64_t>(
        0, trials, 0,
        [&](int64_t lo, int64_t hi) {
            int64_t accepted = 0;
            std::vector<int> as, bs;
            for (int64_t trial = lo; trial < hi; ++trial) {
                CounterRng rng = master.stream(uint64_t(trial));
                SampledInputs inputs = sample_inputs(game, n, rng.next());
                adversary_answers(adversary, inputs.xs, inputs.ys, rng, as, bs);
                int64_t wins = count_satisfied(game, inputs.xs, inputs.ys, as, bs);
                if (BigInt(wins) >= win_threshold(n, delta)) ++accepted;
            }
            return accepted;
        },
        [](int64_t a, int64_t b) { return a + b; }, workers <= 0 ? default_worker_count() : workers,
        workers);
    result.acceptance_rate = double(result.accepts) / double(trials);
    result.ci = wilson_interval(result.accepts, trials);

    switch (adversary.kind) {
        case AdversarySpec::Kind::Replay:
            result.metadata.kind = "replay";
            result.per_game_p = strategy_value(game, adversary.strategy);
            break;
        case AdversarySpec::Kind::Leakage:
            result.metadata.kind = "leakage";
            result.per_game_p = leakage_per_game_value(game, adversary.leakage);
            result.metadata.leak_bits_total = int64_t(adversary.leakage.bits) * n;
            break;
        case AdversarySpec::Kind::Circuit: {
            result.metadata.kind = "circuit";
            result.metadata.source_depth = adversary.circuit.depth();
            const LayeredCircuit* toffoli = &adversary.circuit;
            TranspileResult transpiled;
            if (!adversary.circuit.all_gates_are(GateKind::Toffoli)) {
                transpiled = nand_to_toffoli(adversary.circuit);
                toffoli = &transpiled.circuit;
            }
            ProtocolSpec spec = compile_protocol(*toffoli, line_input_geometry(n));
            result.metadata.compiled_depth = toffoli->depth();
            result.metadata.comm_bits = spec.predicted_total_bits;
            break;
        }
    }
    if (result.per_game_p) {
        result.exact_tail = binomial_tail_geq(n, win_threshold(n, delta), *result.per_game_p);
    }
    return result;
}

}  // namespace glsim
