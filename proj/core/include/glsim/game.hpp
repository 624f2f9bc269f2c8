#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "glsim/rational.hpp"
#include "glsim/rng.hpp"

namespace glsim {

// A finite two-prover one-round game: question alphabets X/Y, answer
// alphabets A/B, a question distribution and a win predicate. Symbols are
// dense integer indices into their alphabets. Instances are immutable after
// validate() and safe to share across threads.
struct GameSpec {
    std::string name;
    int nx = 0;
    int ny = 0;
    int na = 0;
    int nb = 0;
    std::vector<Rational> weights;   // nx*ny entries, row-major over (x,y)
    std::vector<uint8_t> predicate;  // nx*ny*na*nb entries

    const Rational& weight(int x, int y) const { return weights[size_t(x) * ny + y]; }

    size_t predicate_index(int x, int y, int a, int b) const {
        return ((size_t(x) * ny + y) * na + a) * nb + b;
    }

    // Throws domain_error unless weights are nonnegative and sum to exactly 1
    // and the predicate table covers the full alphabet product.
    void validate() const;
};

bool eval_predicate(const GameSpec& game, int x, int y, int a, int b);

// The Magic Square game: X = Y = {0,1,2}, A = B = {0,1}^3 indexed as
// a[0]<<2 | a[1]<<1 | a[2], uniform question distribution, win iff
// parity(a) = 0, parity(b) = 1 and a[y] = b[x].
const GameSpec& magic_square_game();

inline int ms_output_bit(int symbol, int position) { return (symbol >> (2 - position)) & 1; }
inline int ms_output_index(int bit0, int bit1, int bit2) {
    return (bit0 << 2) | (bit1 << 1) | bit2;
}
int ms_output_index(const std::string& bits);  // "010" -> 2
std::string ms_output_bits(int symbol);        // 2 -> "010"

// n parallel question pairs arranged along a line, two bits per trit
// (0 -> 00, 1 -> 01, 2 -> 10; 11 is invalid). Bit j of trit i sits at line
// position 2*i + j, x block before y block, so x_n touches y_1.
struct LineInput {
    int64_t n = 0;
    std::vector<uint8_t> x_bits;  // 2n bits
    std::vector<uint8_t> y_bits;  // 2n bits

    static LineInput from_symbols(const std::vector<int>& xs, const std::vector<int>& ys);
    std::vector<int> x_symbols() const;
    std::vector<int> y_symbols() const;
};

void encode_trit(int symbol, uint8_t& hi, uint8_t& lo);
int decode_trit(uint8_t hi, uint8_t lo);  // throws on 11

// n i.i.d. question pairs from the game's distribution.
struct SampledInputs {
    std::vector<int> xs;
    std::vector<int> ys;
};
SampledInputs sample_inputs(const GameSpec& game, int64_t n, uint64_t seed);

// |{i : V(x_i, y_i, a_i, b_i) = 1}|.
int64_t count_satisfied(const GameSpec& game, const std::vector<int>& xs,
                        const std::vector<int>& ys, const std::vector<int>& as,
                        const std::vector<int>& bs);

// Threshold for "win at least n*(1-delta) games": smallest integer >= n(1-delta).
BigInt win_threshold(int64_t n, const Rational& delta);

// The n-fold product game: symbols are base-|alphabet| digit tuples, the
// predicate is the AND over coordinates. Alphabet sizes grow as k^m, so this
// is only for small m.
GameSpec parallel_power(const GameSpec& game, int m);

// Text table format:
//   game <nx> <ny> <na> <nb>
//   weights          (lines "x y p/q"; omitted pairs are zero)
//   predicate        (lines "x y a b"; listed tuples win, others lose)
GameSpec parse_game(std::istream& in);
GameSpec load_game_file(const std::string& path);
void write_game(std::ostream& out, const GameSpec& game);

}  // namespace glsim
