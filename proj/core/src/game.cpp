#include "glsim/game.hpp"

#include <fstream>
#include <sstream>

#include "glsim/errors.hpp"

namespace glsim {

void GameSpec::validate() const {
    if (nx <= 0 || ny <= 0 || na <= 0 || nb <= 0) {
        throw domain_error("game alphabets must be nonempty");
    }
    if (weights.size() != size_t(nx) * ny) {
        throw domain_error("weight table must cover every (x,y) pair");
    }
    if (predicate.size() != size_t(nx) * ny * na * nb) {
        throw domain_error("predicate table must cover the full alphabet product");
    }
    Rational sum = 0;
    for (const Rational& w : weights) {
        if (w < 0) throw domain_error("negative question weight");
        sum += w;
    }
    if (sum != 1) {
        throw domain_error("question weights sum to " + to_string(sum) + ", expected 1");
    }
}

bool eval_predicate(const GameSpec& game, int x, int y, int a, int b) {
    if (x < 0 || x >= game.nx || y < 0 || y >= game.ny) {
        throw domain_error("question symbol outside game alphabet");
    }
    if (a < 0 || a >= game.na || b < 0 || b >= game.nb) {
        throw domain_error("answer symbol outside game alphabet");
    }
    return game.predicate[game.predicate_index(x, y, a, b)] != 0;
}

const GameSpec& magic_square_game() {
    static const GameSpec game = [] {
        GameSpec g;
        g.name = "magic-square";
        g.nx = g.ny = 3;
        g.na = g.nb = 8;
        g.weights.assign(9, Rational(1, 9));
        g.predicate.assign(size_t(9) * 64, 0);
        for (int x = 0; x < 3; ++x) {
            for (int y = 0; y < 3; ++y) {
                for (int a = 0; a < 8; ++a) {
                    int pa = ms_output_bit(a, 0) ^ ms_output_bit(a, 1) ^ ms_output_bit(a, 2);
                    for (int b = 0; b < 8; ++b) {
                        int pb = ms_output_bit(b, 0) ^ ms_output_bit(b, 1) ^ ms_output_bit(b, 2);
                        bool win = pa == 0 && pb == 1 && ms_output_bit(a, y) == ms_output_bit(b, x);
                        g.predicate[g.predicate_index(x, y, a, b)] = win ? 1 : 0;
                    }
                }
            }
        }
        g.validate();
        return g;
    }();
    return game;
}

int ms_output_index(const std::string& bits) {
    if (bits.size() != 3 || bits.find_first_not_of("01") != std::string::npos) {
        throw domain_error("expected a 3-bit answer string, got \"" + bits + "\"");
    }
    return ms_output_index(bits[0] - '0', bits[1] - '0', bits[2] - '0');
}

std::string ms_output_bits(int symbol) {
    std::string s(3, '0');
    for (int j = 0; j < 3; ++j) s[j] = char('0' + ms_output_bit(symbol, j));
    return s;
}

void encode_trit(int symbol, uint8_t& hi, uint8_t& lo) {
    if (symbol < 0 || symbol > 2) throw domain_error("trit symbol out of range");
    hi = uint8_t((symbol >> 1) & 1);
    lo = uint8_t(symbol & 1);
}

int decode_trit(uint8_t hi, uint8_t lo) {
    int v = (int(hi & 1) << 1) | int(lo & 1);
    if (v == 3) throw domain_error("bit pattern 11 does not encode a trit");
    return v;
}

LineInput LineInput::from_symbols(const std::vector<int>& xs, const std::vector<int>& ys) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw domain_error("line input needs equal, nonempty x and y symbol lists");
    }
    LineInput in;
    in.n = int64_t(xs.size());
    in.x_bits.resize(xs.size() * 2);
    in.y_bits.resize(ys.size() * 2);
    for (size_t i = 0; i < xs.size(); ++i) {
        encode_trit(xs[i], in.x_bits[2 * i], in.x_bits[2 * i + 1]);
        encode_trit(ys[i], in.y_bits[2 * i], in.y_bits[2 * i + 1]);
    }
    return in;
}

std::vector<int> LineInput::x_symbols() const {
    std::vector<int> out(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) out[size_t(i)] = decode_trit(x_bits[2 * i], x_bits[2 * i + 1]);
    return out;
}

std::vector<int> LineInput::y_symbols() const {
    std::vector<int> out(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) out[size_t(i)] = decode_trit(y_bits[2 * i], y_bits[2 * i + 1]);
    return out;
}

SampledInputs sample_inputs(const GameSpec& game, int64_t n, uint64_t seed) {
    if (n < 1) throw domain_error("need at least one game instance");
    // Cumulative weights on a common denominator so the draw is exact:
    // a uniform 64-bit integer below den*2^k ... easier: walk the CDF with a
    // rational uniform variate made of 64 random bits over denominator scale.
    // All our distributions are tiny, so precompute a flat alias over a
    // common denominator.
    BigInt den = 1;
    for (const Rational& w : game.weights) den = boost::multiprecision::lcm(den, denominator(w));
    std::vector<BigInt> cumulative;
    cumulative.reserve(game.weights.size());
    BigInt acc = 0;
    for (const Rational& w : game.weights) {
        acc += numerator(w) * (den / denominator(w));
        cumulative.push_back(acc);
    }
    // acc == den by validate().
    if (den > BigInt(uint64_t(1) << 62)) {
        throw domain_error("question distribution denominator too large to sample");
    }
    uint64_t total = den.convert_to<uint64_t>();

    CounterRng master(seed);
    SampledInputs out;
    out.xs.resize(size_t(n));
    out.ys.resize(size_t(n));
    for (int64_t i = 0; i < n; ++i) {
        CounterRng rng = master.stream(uint64_t(i));
        uint64_t u = rng.bounded(total);
        size_t pair = 0;
        while (cumulative[pair] <= u) ++pair;
        out.xs[size_t(i)] = int(pair) / game.ny;
        out.ys[size_t(i)] = int(pair) % game.ny;
    }
    return out;
}

int64_t count_satisfied(const GameSpec& game, const std::vector<int>& xs,
                        const std::vector<int>& ys, const std::vector<int>& as,
                        const std::vector<int>& bs) {
    size_t n = xs.size();
    if (ys.size() != n || as.size() != n || bs.size() != n) {
        throw domain_error("question and answer lists must have equal length");
    }
    int64_t count = 0;
    for (size_t i = 0; i < n; ++i) {
        if (eval_predicate(game, xs[i], ys[i], as[i], bs[i])) ++count;
    }
    return count;
}

BigInt win_threshold(int64_t n, const Rational& delta) {
    return ceil_rational(Rational(n) * (Rational(1) - delta));
}

GameSpec parallel_power(const GameSpec& game, int m) {
    if (m < 1) throw domain_error("parallel power needs m >= 1");
    auto ipow = [](int base, int exp) {
        int64_t v = 1;
        for (int i = 0; i < exp; ++i) {
            v *= base;
            if (v > (int64_t(1) << 30)) throw domain_error("parallel power alphabet too large");
        }
        return int(v);
    };
    GameSpec g;
    g.name = game.name + "^" + std::to_string(m);
    g.nx = ipow(game.nx, m);
    g.ny = ipow(game.ny, m);
    g.na = ipow(game.na, m);
    g.nb = ipow(game.nb, m);
    if (int64_t(g.nx) * g.ny * g.na * g.nb > (int64_t(1) << 32)) {
        throw domain_error("parallel power predicate table too large");
    }
    auto digits = [](int value, int base, int m) {
        std::vector<int> d(static_cast<size_t>(m));
        for (int i = m - 1; i >= 0; --i) {
            d[size_t(i)] = value % base;
            value /= base;
        }
        return d;
    };
    g.weights.resize(size_t(g.nx) * g.ny);
    for (int x = 0; x < g.nx; ++x) {
        auto dx = digits(x, game.nx, m);
        for (int y = 0; y < g.ny; ++y) {
            auto dy = digits(y, game.ny, m);
            Rational w = 1;
            for (int i = 0; i < m; ++i) w *= game.weight(dx[size_t(i)], dy[size_t(i)]);
            g.weights[size_t(x) * g.ny + y] = w;
        }
    }
    g.predicate.assign(size_t(g.nx) * g.ny * g.na * g.nb, 0);
    for (int x = 0; x < g.nx; ++x) {
        auto dx = digits(x, game.nx, m);
        for (int y = 0; y < g.ny; ++y) {
            auto dy = digits(y, game.ny, m);
            for (int a = 0; a < g.na; ++a) {
                auto da = digits(a, game.na, m);
                for (int b = 0; b < g.nb; ++b) {
                    auto db = digits(b, game.nb, m);
                    bool win = true;
                    for (int i = 0; i < m && win; ++i) {
                        win = game.predicate[game.predicate_index(dx[size_t(i)], dy[size_t(i)],
                                                                  da[size_t(i)], db[size_t(i)])];
                    }
                    g.predicate[g.predicate_index(x, y, a, b)] = win ? 1 : 0;
                }
            }
        }
    }
    g.validate();
    return g;
}

GameSpec parse_game(std::istream& in) {
    GameSpec g;
    std::string line;
    enum class Section { Header, Weights, Predicate } section = Section::Header;
    bool have_header = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "game") {
            if (!(ls >> g.nx >> g.ny >> g.na >> g.nb)) {
                throw domain_error("game header needs four alphabet sizes");
            }
            if (ls >> g.name) {
            }
            g.weights.assign(size_t(g.nx) * g.ny, Rational(0));
            g.predicate.assign(size_t(g.nx) * g.ny * g.na * g.nb, 0);
            have_header = true;
            continue;
        }
        if (first == "weights") {
            section = Section::Weights;
            continue;
        }
        if (first == "predicate") {
            section = Section::Predicate;
            continue;
        }
        if (!have_header) throw domain_error("game file must start with a 'game' header");
        if (section == Section::Weights) {
            int x = std::stoi(first);
            int y;
            std::string w;
            if (!(ls >> y >> w)) throw domain_error("weight line needs 'x y p/q'");
            if (x < 0 || x >= g.nx || y < 0 || y >= g.ny) {
                throw domain_error("weight entry outside alphabets");
            }
            g.weights[size_t(x) * g.ny + y] = parse_rational(w);
        } else if (section == Section::Predicate) {
            int x = std::stoi(first);
            int y, a, b;
            if (!(ls >> y >> a >> b)) throw domain_error("predicate line needs 'x y a b'");
            if (x < 0 || x >= g.nx || y < 0 || y >= g.ny || a < 0 || a >= g.na || b < 0 ||
                b >= g.nb) {
                throw domain_error("predicate entry outside alphabets");
            }
            g.predicate[g.predicate_index(x, y, a, b)] = 1;
        } else {
            throw domain_error("unexpected line before weights/predicate section: " + line);
        }
    }
    if (!have_header) throw domain_error("missing 'game' header");
    g.validate();
    return g;
}

GameSpec load_game_file(const std::string& path) {
    if (path == "magic-square") return magic_square_game();
    std::ifstream in(path);
    if (!in) throw config_error("cannot open game file: " + path);
    GameSpec g = parse_game(in);
    if (g.name.empty()) g.name = path;
    return g;
}

void write_game(std::ostream& out, const GameSpec& game) {
    out << "game " << game.nx << " " << game.ny << " " << game.na << " " << game.nb;
    if (!game.name.empty()) out << " " << game.name;
    out << "\n";
    out << "weights\n";
    for (int x = 0; x < game.nx; ++x) {
        for (int y = 0; y < game.ny; ++y) {
            const Rational& w = game.weight(x, y);
            if (w != 0) out << x << " " << y << " " << to_string(w) << "\n";
        }
    }
    out << "predicate\n";
    for (int x = 0; x < game.nx; ++x) {
        for (int y = 0; y < game.ny; ++y) {
            for (int a = 0; a < game.na; ++a) {
                for (int b = 0; b < game.nb; ++b) {
                    if (game.predicate[game.predicate_index(x, y, a, b)]) {
                        out << x << " " << y << " " << a << " " << b << "\n";
                    }
                }
            }
        }
    }
}

}  // namespace glsim
