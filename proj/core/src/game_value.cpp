#include "glsim/game_value.hpp"

#include <algorithm>

#include "glsim/errors.hpp"
#include "glsim/parallel.hpp"

namespace glsim {

namespace {

// Mixed-radix decode of a strategy index into per-question candidate picks.
std::vector<int> decode_strategy(uint64_t index, const std::vector<std::vector<int>>& candidates) {
    std::vector<int> out(candidates.size());
    for (size_t q = candidates.size(); q-- > 0;) {
        uint64_t base = candidates[q].size();
        out[q] = candidates[q][size_t(index % base)];
        index /= base;
    }
    return out;
}

uint64_t strategy_count(const std::vector<std::vector<int>>& candidates, uint64_t limit) {
    uint64_t count = 1;
    for (const auto& c : candidates) {
        if (c.empty()) return 0;
        if (count > limit / c.size() + 1) return limit + 1;  // saturate
        count *= c.size();
    }
    return count;
}

std::vector<std::vector<int>> candidate_answers(const GameSpec& game, bool for_alice) {
    int questions = for_alice ? game.nx : game.ny;
    int answers = for_alice ? game.na : game.nb;
    std::vector<std::vector<int>> out(static_cast<size_t>(questions));
    for (int q = 0; q < questions; ++q) {
        for (int ans = 0; ans < answers; ++ans) {
            bool can_win = false;
            if (for_alice) {
                for (int y = 0; y < game.ny && !can_win; ++y) {
                    if (game.weight(q, y) == 0) continue;
                    for (int b = 0; b < game.nb && !can_win; ++b) {
                        can_win = game.predicate[game.predicate_index(q, y, ans, b)];
                    }
                }
            } else {
                for (int x = 0; x < game.nx && !can_win; ++x) {
                    if (game.weight(x, q) == 0) continue;
                    for (int a = 0; a < game.na && !can_win; ++a) {
                        can_win = game.predicate[game.predicate_index(x, q, a, ans)];
                    }
                }
            }
            if (can_win) out[size_t(q)].push_back(ans);
        }
        // Keep a fallback answer so the strategy space is never empty.
        if (out[size_t(q)].empty()) out[size_t(q)].push_back(0);
    }
    return out;
}

struct SearchState {
    Rational value = -1;
    DeterministicStrategy best;

    void offer(const Rational& v, const DeterministicStrategy& s) {
        if (v > value || (v == value && s < best)) {
            value = v;
            best = s;
        }
    }
};

SearchState merge_states(SearchState a, const SearchState& b) {
    if (b.value >= 0) a.offer(b.value, b.best);
    return a;
}

// Exact best response of Bob against a fixed Alice map; per y the optimal
// answer is independent of other questions. Smallest answer wins ties.
std::vector<int> bob_best_response(const GameSpec& game, const std::vector<int>& alice,
                                   const std::vector<std::vector<int>>& bob_cand) {
    std::vector<int> bob(size_t(game.ny));
    for (int y = 0; y < game.ny; ++y) {
        Rational best = -1;
        int pick = bob_cand[size_t(y)].front();
        for (int b : bob_cand[size_t(y)]) {
            Rational v = 0;
            for (int x = 0; x < game.nx; ++x) {
                if (game.predicate[game.predicate_index(x, y, alice[size_t(x)], b)]) {
                    v += game.weight(x, y);
                }
            }
            if (v > best) {
                best = v;
                pick = b;
            }
        }
        bob[size_t(y)] = pick;
    }
    return bob;
}

std::vector<int> alice_best_response(const GameSpec& game, const std::vector<int>& bob,
                                     const std::vector<std::vector<int>>& alice_cand) {
    std::vector<int> alice(size_t(game.nx));
    for (int x = 0; x < game.nx; ++x) {
        Rational best = -1;
        int pick = alice_cand[size_t(x)].front();
        for (int a : alice_cand[size_t(x)]) {
            Rational v = 0;
            for (int y = 0; y < game.ny; ++y) {
                if (game.predicate[game.predicate_index(x, y, a, bob[size_t(y)])]) {
                    v += game.weight(x, y);
                }
            }
            if (v > best) {
                best = v;
                pick = a;
            }
        }
        alice[size_t(x)] = pick;
    }
    return alice;
}

}  // namespace

bool DeterministicStrategy::operator<(const DeterministicStrategy& other) const {
    if (alice != other.alice) return alice < other.alice;
    return bob < other.bob;
}

Rational strategy_value(const GameSpec& game, const DeterministicStrategy& s) {
    if (s.alice.size() != size_t(game.nx) || s.bob.size() != size_t(game.ny)) {
        throw domain_error("strategy tables must cover the question alphabets");
    }
    Rational v = 0;
    for (int x = 0; x < game.nx; ++x) {
        for (int y = 0; y < game.ny; ++y) {
            if (game.weight(x, y) == 0) continue;
            if (game.predicate[game.predicate_index(x, y, s.alice[size_t(x)], s.bob[size_t(y)])]) {
                v += game.weight(x, y);
            }
        }
    }
    return v;
}

std::vector<std::vector<int>> alice_candidates(const GameSpec& game) {
    return candidate_answers(game, true);
}

std::vector<std::vector<int>> bob_candidates(const GameSpec& game) {
    return candidate_answers(game, false);
}

ValueResult brute_force_classical_value(const GameSpec& game, uint64_t cap, int partitions) {
    game.validate();
    auto a_cand = alice_candidates(game);
    auto b_cand = bob_candidates(game);
    uint64_t a_count = strategy_count(a_cand, cap);
    uint64_t b_count = strategy_count(b_cand, cap);
    if (a_count > cap || b_count > cap || a_count > cap / b_count) {
        throw resource_error("strategy pair enumeration exceeds cap",
                             a_count > cap || b_count > cap ? cap + 1 : a_count * b_count, cap);
    }
    if (partitions <= 0) partitions = default_worker_count();

    SearchState found = partitioned_reduce<SearchState>(
        0, int64_t(a_count), SearchState{},
        [&](int64_t lo, int64_t hi) {
            SearchState local;
            for (int64_t ai = lo; ai < hi; ++ai) {
                DeterministicStrategy s;
                s.alice = decode_strategy(uint64_t(ai), a_cand);
                for (uint64_t bi = 0; bi < b_count; ++bi) {
                    s.bob = decode_strategy(bi, b_cand);
                    local.offer(strategy_value(game, s), s);
                }
            }
            return local;
        },
        merge_states, partitions);
    return ValueResult{found.value, found.best};
}

LeakageResult brute_force_leakage_value(const GameSpec& game, int leak_bits, uint64_t cap,
                                        int partitions) {
    game.validate();
    if (leak_bits < 0 || leak_bits > 20) throw domain_error("leakage budget out of range");
    uint64_t messages = uint64_t(1) << leak_bits;
    auto a_cand = alice_candidates(game);
    auto b_cand = bob_candidates(game);
    uint64_t a_count = strategy_count(a_cand, cap);

    uint64_t msg_maps = 1;
    for (int x = 0; x < game.nx; ++x) {
        if (msg_maps > cap / messages + 1) msg_maps = cap + 1;
        msg_maps *= messages;
        if (msg_maps > cap) break;
    }
    size_t bob_cells = size_t(game.ny) * messages;
    uint64_t max_b = 0;
    for (const auto& c : b_cand) max_b = std::max<uint64_t>(max_b, c.size());
    // Work estimate: message maps x alice maps x exact Bob optimization.
    if (msg_maps > cap || a_count > cap || msg_maps > cap / a_count ||
        msg_maps * a_count > cap / std::max<uint64_t>(1, bob_cells * max_b)) {
        throw resource_error("leakage protocol enumeration exceeds cap",
                             msg_maps > cap || a_count > cap ? cap + 1
                                                             : msg_maps * a_count * bob_cells,
                             cap);
    }
    if (partitions <= 0) partitions = default_worker_count();

    struct LeakState {
        Rational value = -1;
        LeakageProtocol best;
    };
    auto better = [](const LeakageProtocol& s, const LeakageProtocol& t) {
        if (s.message != t.message) return s.message < t.message;
        if (s.alice != t.alice) return s.alice < t.alice;
        return s.bob < t.bob;
    };
    auto merge = [&](LeakState a, const LeakState& b) {
        if (b.value > a.value || (b.value == a.value && a.value >= 0 && better(b.best, a.best))) {
            return b;
        }
        return a;
    };

    LeakState found = partitioned_reduce<LeakState>(
        0, int64_t(msg_maps), LeakState{},
        [&](int64_t lo, int64_t hi) {
            LeakState local;
            std::vector<int> msg(size_t(game.nx));
            for (int64_t mi = lo; mi < hi; ++mi) {
                uint64_t rest = uint64_t(mi);
                for (size_t x = size_t(game.nx); x-- > 0;) {
                    msg[x] = int(rest % messages);
                    rest /= messages;
                }
                for (uint64_t ai = 0; ai < a_count; ++ai) {
                    LeakageProtocol p;
                    p.bits = leak_bits;
                    p.message = msg;
                    p.alice = decode_strategy(ai, a_cand);
                    p.bob.assign(bob_cells, -1);
                    Rational total = 0;
                    // Bob's optimum decomposes over (y, message) cells.
                    for (int y = 0; y < game.ny; ++y) {
                        for (uint64_t m = 0; m < messages; ++m) {
                            Rational best_cell = -1;
                            int pick = b_cand[size_t(y)].front();
                            for (int b : b_cand[size_t(y)]) {
                                Rational v = 0;
                                for (int x = 0; x < game.nx; ++x) {
                                    if (uint64_t(msg[size_t(x)]) != m) continue;
                                    if (game.weight(x, y) == 0) continue;
                                    if (game.predicate[game.predicate_index(
                                            x, y, p.alice[size_t(x)], b)]) {
                                        v += game.weight(x, y);
                                    }
                                }
                                if (v > best_cell) {
                                    best_cell = v;
                                    pick = b;
                                }
                            }
                            p.bob[size_t(y) * messages + m] = pick;
                            total += best_cell;
                        }
                    }
                    if (total > local.value || (total == local.value && better(p, local.best))) {
                        local.value = total;
                        local.best = p;
                    }
                }
            }
            return local;
        },
        merge, partitions);
    return LeakageResult{found.value, found.best};
}

BestResponseResult best_response_search(const GameSpec& game, int m, int restarts, uint64_t seed,
                                        uint64_t cap) {
    if (m < 1) throw domain_error("need m >= 1 repetitions");
    if (restarts < 0) throw domain_error("restart count must be nonnegative");
    GameSpec power = m == 1 ? game : parallel_power(game, m);
    auto a_cand = alice_candidates(power);
    auto b_cand = bob_candidates(power);
    // One best-response sweep enumerates every candidate per question.
    uint64_t sweep_cost = 0;
    for (const auto& c : a_cand) sweep_cost += c.size();
    for (const auto& c : b_cand) sweep_cost += c.size();
    uint64_t per_question = uint64_t(power.nx) * power.ny;
    if (sweep_cost > cap / std::max<uint64_t>(1, per_question)) {
        throw resource_error("best-response sweep exceeds cap", sweep_cost * per_question, cap);
    }

    // The product of single-game optima is always a starting point, so the
    // returned bound is at least val(G)^m.
    ValueResult base = brute_force_classical_value(game, cap);
    DeterministicStrategy product_init;
    product_init.alice.resize(size_t(power.nx));
    product_init.bob.resize(size_t(power.ny));
    auto digits_value = [m](int value, int base_size, const std::vector<int>& table, int out_base) {
        int out = 0;
        std::vector<int> d(static_cast<size_t>(m));
        for (int i = m - 1; i >= 0; --i) {
            d[size_t(i)] = value % base_size;
            value /= base_size;
        }
        for (int i = 0; i < m; ++i) out = out * out_base + table[size_t(d[size_t(i)])];
        return out;
    };
    for (int x = 0; x < power.nx; ++x) {
        product_init.alice[size_t(x)] = digits_value(x, game.nx, base.best.alice, game.na);
    }
    for (int y = 0; y < power.ny; ++y) {
        product_init.bob[size_t(y)] = digits_value(y, game.ny, base.best.bob, game.nb);
    }

    CounterRng master(seed);
    SearchState found;
    int total_rounds = 0;
    for (int r = 0; r <= restarts; ++r) {
        DeterministicStrategy s;
        if (r == 0) {
            s = product_init;
        } else {
            CounterRng rng = master.stream(uint64_t(r));
            s.alice.resize(size_t(power.nx));
            s.bob.resize(size_t(power.ny));
            for (int x = 0; x < power.nx; ++x) {
                const auto& c = a_cand[size_t(x)];
                s.alice[size_t(x)] = c[size_t(rng.bounded(c.size()))];
            }
            for (int y = 0; y < power.ny; ++y) {
                const auto& c = b_cand[size_t(y)];
                s.bob[size_t(y)] = c[size_t(rng.bounded(c.size()))];
            }
        }
        Rational value = strategy_value(power, s);
        for (;;) {
            ++total_rounds;
            s.bob = bob_best_response(power, s.alice, b_cand);
            s.alice = alice_best_response(power, s.bob, a_cand);
            Rational next = strategy_value(power, s);
            if (next <= value) break;  // best-response sweeps never decrease
            value = next;
        }
        found.offer(value, s);
    }
    return BestResponseResult{found.value, found.best, total_rounds};
}

}  // namespace glsim
