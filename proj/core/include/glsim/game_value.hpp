#pragma once

#include <cstdint>
#include <vector>

#include "glsim/game.hpp"
#include "glsim/rational.hpp"

namespace glsim {

// One deterministic answer function per player. alice[x] / bob[y] are answer
// symbols of the underlying game.
struct DeterministicStrategy {
    std::vector<int> alice;
    std::vector<int> bob;

    bool operator==(const DeterministicStrategy&) const = default;
    // Lexicographic on (alice, bob); used for reproducible tie-breaking.
    bool operator<(const DeterministicStrategy& other) const;
};

// Exact win probability of a strategy pair under the game's distribution.
Rational strategy_value(const GameSpec& game, const DeterministicStrategy& s);

// Per-question answer candidates with never-winning answers pruned (an answer
// that loses against everything is dominated by any other answer, so pruning
// preserves the exact maximum). For the Magic Square game this leaves the
// four parity-0 answers for Alice and the four parity-1 answers for Bob.
std::vector<std::vector<int>> alice_candidates(const GameSpec& game);
std::vector<std::vector<int>> bob_candidates(const GameSpec& game);

inline constexpr uint64_t kDefaultEnumerationCap = 200'000'000ull;

struct ValueResult {
    Rational value;
    DeterministicStrategy best;
};

// Exact classical value by full enumeration of valid strategy pairs
// (64 x 64 for the Magic Square game). Shared randomness cannot beat the
// best deterministic pair, so this equals val(G). The search is partitioned
// over Alice strategies; the result is independent of partition count.
// Throws resource_error when the pair count exceeds the cap.
ValueResult brute_force_classical_value(const GameSpec& game,
                                        uint64_t cap = kDefaultEnumerationCap, int partitions = 0);

// One-way leakage protocol: Alice sends a fixed-length c-bit message about x,
// Bob answers from (y, message). This lower-bounds the value of interactive
// leakage protocols with the same budget.
struct LeakageProtocol {
    int bits = 0;
    std::vector<int> message;  // per x, in [0, 2^bits)
    std::vector<int> alice;    // per x
    std::vector<int> bob;      // per (y, message), row-major y-major

    int bob_answer(int y, int msg) const { return bob[size_t(y) * (size_t(1) << bits) + msg]; }
};

struct LeakageResult {
    Rational value;
    LeakageProtocol best;
};

// Exact maximum over one-way protocols with budget c. Enumerates message
// maps and Alice maps; Bob's table is optimized exactly per (y, message)
// cell, which decomposes because each cell contributes independently.
// Cost ~ (2^c)^|X| * |aliceCandidates| * (|Y| * 2^c * |bobCandidates|).
LeakageResult brute_force_leakage_value(const GameSpec& game, int leak_bits,
                                        uint64_t cap = kDefaultEnumerationCap, int partitions = 0);

struct BestResponseResult {
    Rational value;  // lower bound on val(G^m)
    DeterministicStrategy strategy;
    int rounds = 0;  // best-response sweeps until the value stabilized
};

// Alternating exact best responses on the m-fold product game, restarted
// from random strategies plus the product of single-game optima. Returned
// value is a lower bound on val(G^m) and is >= val(G)^m because the product
// optimum is always one of the starting points. Ties are broken toward the
// lexicographically smallest strategy, so the result is reproducible and
// monotone in the restart count.
BestResponseResult best_response_search(const GameSpec& game, int m, int restarts, uint64_t seed,
                                        uint64_t cap = kDefaultEnumerationCap);

}  // namespace glsim
