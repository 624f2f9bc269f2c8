#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "glsim/game.hpp"
#include "glsim/statevector.hpp"

namespace glsim {

// Sign-tracking Pauli word in the symplectic encoding P = i^phase * X^x Z^z
// (per qubit; Y carries phase 1). Enough algebra to check operator products
// symbolically.
struct PauliString {
    int phase = 0;  // exponent of i, mod 4
    uint32_t x = 0;
    uint32_t z = 0;

    static PauliString identity() { return {}; }
    static PauliString from_label(const std::string& label, int sign);  // e.g. "XZ", sign -1

    PauliString operator*(const PauliString& other) const;
    bool is_identity_up_to_sign() const { return x == 0 && z == 0; }
    // +1 or -1 when proportional to identity with a real sign.
    int identity_sign() const;
};

// The two-qubit observable table behind the optimal strategy:
//   row 0:  I@Z   Z@I   Z@Z
//   row 1:  X@I   I@X   X@X
//   row 2: -X@Z  -Z@X   Y@Y
// Every row multiplies to +identity and every column to -identity, so three
// commuting measurements per party always produce parity 0 (Alice, rows) or
// parity 1 (Bob, columns). Bob measures column entries, i.e. the transposed
// table; all nine observables equal their own transpose, which is what makes
// shared Bell pairs reproduce a[y] = b[x].
struct ObservableGrid {
    struct Entry {
        std::string label;  // two characters over {I,X,Y,Z}
        int sign;           // +1 or -1
    };
    std::array<std::array<Entry, 3>, 3> cells;

    PauliString row_product(int r) const;
    PauliString column_product(int c) const;
    // Throws logic_error unless rows give +I and columns give -I.
    void verify() const;
};

// The standard grid above, verified once at first use.
const ObservableGrid& mermin_peres_grid();

// One game instance holds two Bell pairs: qubits (0,1) and (2,3), Alice
// holding {0,2} and Bob {1,3}. Preparation is exact unless
// noise.noisy_resource_prep is set.
StateVector prepare_bell_pairs(const NoiseModel& noise, CounterRng& rng);
std::vector<StateVector> prepare_resource(int64_t n, const NoiseModel& noise, uint64_t seed);

struct GameAnswers {
    int a = 0;  // Alice's 3-bit answer index
    int b = 0;  // Bob's 3-bit answer index
};

// Applies the basis-change circuit for row x on Alice's qubits and column y
// on Bob's, measures two bits per side, decodes two observable outcomes and
// derives the third from the row/column parity, so a has parity 0 and b
// parity 1 by construction even under noise. Every gate is followed by a
// depolarizing fault with probability noise.epsilon.
GameAnswers measure_magic_square(const StateVector& resource, int x, int y,
                                 const NoiseModel& noise, CounterRng& rng);

struct ParmagicAnswers {
    std::vector<int> a;
    std::vector<int> b;
};

// Independent per-game simulation with per-game derived RNG streams; the
// output depends only on (inputs, noise, seed), not on worker count.
ParmagicAnswers run_parmagic(const LineInput& inputs, const NoiseModel& noise, uint64_t seed,
                             int workers = 0);

}  // namespace glsim
