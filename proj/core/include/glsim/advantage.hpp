#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glsim/binomial.hpp"
#include "glsim/circuit.hpp"
#include "glsim/game.hpp"
#include "glsim/game_value.hpp"
#include "glsim/magic_square.hpp"
#include "glsim/rational.hpp"

namespace glsim {

// The verifier's one-shot challenge: the 2n question trits in
// geometrically-local order with two blanks before every payload symbol,
//   _,_,x_1,_,_,x_2,...,_,_,x_n,_,_,y_1,...,_,_,y_n
// Symbols are 2-bit codes (00,01,10 trits, 11 blank), so the message is 6n
// symbols = 12n bits and every third symbol is a payload trit.
struct PaddedMessage {
    static constexpr uint8_t kBlank = 3;

    int64_t n = 0;
    std::vector<uint8_t> symbols;  // 6n entries over {0,1,2,kBlank}

    static PaddedMessage build(const std::vector<int>& xs, const std::vector<int>& ys);
    std::vector<uint8_t> to_bits() const;  // 12n bits, high bit first per symbol
    static PaddedMessage from_bits(const std::vector<uint8_t>& bits);

    bool is_payload_position(int64_t index) const { return (index + 1) % 3 == 0; }
};

struct VerifierRound {
    PaddedMessage message;
    std::vector<int> xs;  // hidden from the prover role
    std::vector<int> ys;
};

// Uniform question trits; delta must lie in [0, 1/10].
VerifierRound verifier_round(int64_t n, const Rational& delta, uint64_t seed);

struct Verdict {
    bool accept = false;
    int64_t win_count = 0;
    BigInt threshold;
    std::vector<uint8_t> per_game;
};

Verdict verify(const std::vector<int>& xs, const std::vector<int>& ys, const std::vector<int>& as,
               const std::vector<int>& bs, const Rational& delta);

// The honest constant-depth prover: routes every populated register through
// the swap network (one noisy swap gate per message bit when
// noise.noisy_swap_network is set; an X or Y fault component on the consumed
// bit flips it, and a corrupted 11 pattern falls back to trit 0), ignores
// the blanks, then plays every game with the entangled strategy.
ParmagicAnswers honest_prover(const PaddedMessage& message, const NoiseModel& noise, uint64_t seed,
                              int workers = 0);

// A classical adversary for soundness probes.
struct AdversarySpec {
    enum class Kind { Replay, Leakage, Circuit };

    Kind kind = Kind::Replay;
    std::string name;
    DeterministicStrategy strategy;  // Replay: one single-game strategy per game
    LeakageProtocol leakage;         // Leakage: per-game one-way messages
    LayeredCircuit circuit;          // Circuit: answers computed on the line input

    // Throws domain_error if the adversary is malformed (circuit adversaries
    // must pass validate_geometry and fit the line input for n games).
    void validate(const GameSpec& game, int64_t n) const;
};

// Built-in names: "best-classical" (optimal single-game strategy replayed) and
// "fixed-parity" (a = 000, b = 001 everywhere). Paths ending in .json load
// the circuit schema; anything else parses the strategy-table text format:
//   alice <x> <bits>
//   bob <y> <bits>
AdversarySpec load_adversary(const std::string& name_or_path, const GameSpec& game);

struct ProbeMetadata {
    std::string kind;
    int64_t source_depth = 0;       // circuit adversaries
    int64_t compiled_depth = 0;     // after NAND->Toffoli when needed
    int64_t comm_bits = 0;          // compiled two-party communication
    int64_t leak_bits_total = 0;    // leakage adversaries: c * n
};

struct ProbeResult {
    int64_t trials = 0;
    int64_t accepts = 0;
    double acceptance_rate = 0;
    Interval ci;                          // 95% Wilson interval
    std::optional<Rational> per_game_p;   // exact, when the adversary is per-game
    std::optional<Rational> exact_tail;   // Pr[Bin(n, p) >= threshold]
    ProbeMetadata metadata;
};

// Empirical acceptance of the adversary against the full protocol at the
// given size, with exact binomial baselines whenever the adversary plays
// each game independently.
ProbeResult run_soundness_probe(const AdversarySpec& adversary, const GameSpec& game, int64_t n,
                                const Rational& delta, int64_t trials, uint64_t seed,
                                int workers = 0);

}  // namespace glsim
