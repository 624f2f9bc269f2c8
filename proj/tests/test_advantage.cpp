#include "doctest.h"

#include <cmath>
#include <fstream>

#include "glsim/advantage.hpp"
#include "glsim/errors.hpp"

using namespace glsim;

TEST_CASE("padded message layout: blanks everywhere except every third slot") {
    PaddedMessage msg = PaddedMessage::build({0, 2}, {1, 1});
    REQUIRE(msg.symbols.size() == 12);
    std::vector<uint8_t> expect{3, 3, 0, 3, 3, 2, 3, 3, 1, 3, 3, 1};
    CHECK(msg.symbols == expect);
    for (int64_t k = 0; k < 12; ++k) {
        CHECK(msg.is_payload_position(k) == ((k + 1) % 3 == 0));
    }
    auto bits = msg.to_bits();
    REQUIRE(bits.size() == 24);
    CHECK(PaddedMessage::from_bits(bits).symbols == msg.symbols);
}

TEST_CASE("verifier rounds are deterministic with uniform trits") {
    VerifierRound a = verifier_round(50, Rational(1, 10), 77);
    VerifierRound b = verifier_round(50, Rational(1, 10), 77);
    CHECK(a.xs == b.xs);
    CHECK(a.message.symbols == b.message.symbols);
    CHECK_THROWS_AS(verifier_round(0, Rational(0), 1), domain_error);
    CHECK_THROWS_AS(verifier_round(10, Rational(11, 100), 1), domain_error);
    CHECK_THROWS_AS(verifier_round(10, Rational(-1, 10), 1), domain_error);

    int64_t counts[3] = {0, 0, 0};
    const int64_t kRounds = 700;
    for (int64_t s = 0; s < kRounds; ++s) {
        VerifierRound r = verifier_round(100, Rational(1, 10), 1000 + uint64_t(s));
        for (int x : r.xs) counts[x] += 1;
        for (int y : r.ys) counts[y] += 1;
    }
    double total = double(2 * 100 * kRounds);
    for (int64_t c : counts) {
        CHECK(std::abs(double(c) / total - 1.0 / 3.0) < 0.01);
    }
}

TEST_CASE("honest noiseless prover always convinces the verifier") {
    NoiseModel none;
    none.noisy_swap_network = false;
    for (uint64_t seed : {1ull, 9ull, 123ull}) {
        VerifierRound round = verifier_round(200, Rational(1, 10), seed);
        ParmagicAnswers ans = honest_prover(round.message, none, seed * 31 + 1);
        Verdict v = verify(round.xs, round.ys, ans.a, ans.b, Rational(1, 10));
        CHECK(v.accept);
        CHECK(v.win_count == 200);
    }
}

TEST_CASE("prover output ignores the blank registers' bit patterns") {
    NoiseModel none;
    VerifierRound round = verifier_round(20, Rational(1, 10), 5);
    ParmagicAnswers base = honest_prover(round.message, none, 99);
    PaddedMessage mutated = round.message;
    for (size_t k = 0; k < mutated.symbols.size(); ++k) {
        if (!mutated.is_payload_position(int64_t(k))) {
            mutated.symbols[k] = uint8_t(k % 3);  // arbitrary junk in the blanks
        }
    }
    ParmagicAnswers changed = honest_prover(mutated, none, 99);
    CHECK(changed.a == base.a);
    CHECK(changed.b == base.b);

    PaddedMessage bad = round.message;
    bad.symbols[2] = PaddedMessage::kBlank;  // blank where a trit belongs
    CHECK_THROWS_AS(honest_prover(bad, none, 99), domain_error);
}

TEST_CASE("verdict threshold uses exact ceiling arithmetic") {
    std::vector<int> xs(10, 0), ys(10, 0);
    std::vector<int> winning_a(10, ms_output_index("000"));
    std::vector<int> winning_b(10, ms_output_index("010"));
    Verdict all = verify(xs, ys, winning_a, winning_b, Rational(1, 10));
    CHECK(all.accept);
    CHECK(all.win_count == 10);
    CHECK(all.threshold == 9);

    // Break exactly one game: 9 >= 9 accepts.
    std::vector<int> one_loss = winning_b;
    one_loss[0] = ms_output_index("111");
    Verdict nine = verify(xs, ys, winning_a, one_loss, Rational(1, 10));
    CHECK(nine.win_count == 9);
    CHECK(nine.accept);

    // Two losses: 8 < 9 rejects.
    one_loss[1] = ms_output_index("111");
    Verdict eight = verify(xs, ys, winning_a, one_loss, Rational(1, 10));
    CHECK(eight.win_count == 8);
    CHECK_FALSE(eight.accept);

    CHECK_THROWS_AS(verify({0}, {0, 1}, {0}, {0}, Rational(0)), domain_error);
}

TEST_CASE("verdict is invariant under consistent reindexing") {
    VerifierRound round = verifier_round(30, Rational(1, 10), 3);
    NoiseModel noise(0.05);
    ParmagicAnswers ans = honest_prover(round.message, noise, 17);
    Verdict base = verify(round.xs, round.ys, ans.a, ans.b, Rational(1, 10));
    std::vector<int> xs, ys, as, bs;
    for (int64_t i = 29; i >= 0; --i) {
        xs.push_back(round.xs[size_t(i)]);
        ys.push_back(round.ys[size_t(i)]);
        as.push_back(ans.a[size_t(i)]);
        bs.push_back(ans.b[size_t(i)]);
    }
    Verdict flipped = verify(xs, ys, as, bs, Rational(1, 10));
    CHECK(flipped.win_count == base.win_count);
    CHECK(flipped.accept == base.accept);
}

TEST_CASE("fixed-parity adversary wins each game with probability 2/3") {
    const GameSpec& ms = magic_square_game();
    AdversarySpec adv = load_adversary("fixed-parity", ms);
    ProbeResult r = run_soundness_probe(adv, ms, 20, Rational(1, 10), 400, 11);
    REQUIRE(r.per_game_p.has_value());
    CHECK(*r.per_game_p == Rational(2, 3));
    REQUIRE(r.exact_tail.has_value());
    CHECK(*r.exact_tail == binomial_tail_geq(20, BigInt(18), Rational(2, 3)));
    CHECK(r.ci.contains(to_double(*r.exact_tail)));
}

TEST_CASE("fixed-parity acceptance curve decays with n") {
    const GameSpec& ms = magic_square_game();
    AdversarySpec adv = load_adversary("fixed-parity", ms);
    Rational prev = 1;
    for (int64_t n : {10, 20, 40, 80}) {
        ProbeResult r = run_soundness_probe(adv, ms, n, Rational(1, 10), 1, 2);
        REQUIRE(r.exact_tail.has_value());
        CHECK(*r.exact_tail < prev);
        prev = *r.exact_tail;
    }
}

TEST_CASE("best-classical replay matches the exact binomial tail") {
    const GameSpec& ms = magic_square_game();
    AdversarySpec adv = load_adversary("best-classical", ms);
    ProbeResult r = run_soundness_probe(adv, ms, 50, Rational(1, 10), 1500, 21);
    REQUIRE(r.per_game_p.has_value());
    CHECK(*r.per_game_p == Rational(8, 9));
    REQUIRE(r.exact_tail.has_value());
    CHECK(r.ci.contains(to_double(*r.exact_tail)));
}

TEST_CASE("probe acceptance counts are reproducible") {
    const GameSpec& ms = magic_square_game();
    AdversarySpec adv = load_adversary("best-classical", ms);
    ProbeResult a = run_soundness_probe(adv, ms, 30, Rational(1, 10), 500, 5);
    ProbeResult b = run_soundness_probe(adv, ms, 30, Rational(1, 10), 500, 5);
    ProbeResult c = run_soundness_probe(adv, ms, 30, Rational(1, 10), 500, 5, 3);
    CHECK(a.accepts == b.accepts);
    CHECK(a.accepts == c.accepts);
}

TEST_CASE("leakage adversaries report their total leaked bits") {
    const GameSpec& ms = magic_square_game();
    AdversarySpec adv;
    adv.kind = AdversarySpec::Kind::Leakage;
    adv.name = "two-bit-leak";
    adv.leakage = brute_force_leakage_value(ms, 2).best;
    ProbeResult r = run_soundness_probe(adv, ms, 25, Rational(1, 10), 200, 9);
    CHECK(r.metadata.leak_bits_total == 50);
    REQUIRE(r.per_game_p.has_value());
    CHECK(*r.per_game_p == Rational(1));
    CHECK(r.accepts == 200);  // a perfect per-game protocol always passes
}

TEST_CASE("circuit adversaries carry compiled communication metadata") {
    const GameSpec& ms = magic_square_game();
    const int64_t n = 6;
    InputGeometry g = line_input_geometry(n);
    AdversarySpec adv;
    adv.kind = AdversarySpec::Kind::Circuit;
    adv.name = "random-toffoli";
    adv.circuit = random_circuit(g, 5, GateKind::Toffoli, 77);
    ProbeResult r = run_soundness_probe(adv, ms, n, Rational(1, 10), 50, 3);
    CHECK(r.metadata.kind == "circuit");
    CHECK(r.metadata.source_depth == 5);
    CHECK(r.metadata.compiled_depth == 5);
    CHECK(r.metadata.comm_bits <= 2 * 5);
    CHECK_FALSE(r.per_game_p.has_value());

    // NAND adversaries are transpiled before compilation.
    AdversarySpec nand_adv;
    nand_adv.kind = AdversarySpec::Kind::Circuit;
    nand_adv.name = "random-nand";
    nand_adv.circuit = random_circuit(g, 4, GateKind::Nand, 13);
    ProbeResult rn = run_soundness_probe(nand_adv, ms, n, Rational(1, 10), 50, 3);
    CHECK(rn.metadata.source_depth == 4);
    CHECK(rn.metadata.compiled_depth <= 12);
    CHECK(rn.metadata.comm_bits <= 2 * rn.metadata.compiled_depth);

    // The wrong input count is a domain error.
    CHECK_THROWS_AS(run_soundness_probe(adv, ms, n + 1, Rational(1, 10), 10, 3), domain_error);
}

TEST_CASE("strategy tables load from text") {
    const GameSpec& ms = magic_square_game();
    std::string path = "/tmp/glsim_test_strategy.txt";
    {
        std::ofstream out(path);
        out << "# replayed every game\n";
        for (int x = 0; x < 3; ++x) out << "alice " << x << " 000\n";
        for (int y = 0; y < 3; ++y) out << "bob " << y << " 001\n";
    }
    AdversarySpec adv = load_adversary(path, ms);
    CHECK(adv.kind == AdversarySpec::Kind::Replay);
    CHECK(adv.strategy.alice == std::vector<int>{0, 0, 0});
    CHECK(adv.strategy.bob == std::vector<int>{1, 1, 1});

    std::string incomplete = "/tmp/glsim_test_strategy_bad.txt";
    {
        std::ofstream out(incomplete);
        out << "alice 0 000\n";
    }
    CHECK_THROWS_AS(load_adversary(incomplete, ms), domain_error);
    CHECK_THROWS_AS(load_adversary("/tmp/glsim_no_such_file.txt", ms), config_error);
}

TEST_CASE("swap-network noise leaves acceptance near one at epsilon 0.001") {
    NoiseModel noise(0.001);  // swaps noisy by default
    VerifierRound round = verifier_round(400, Rational(1, 10), 8);
    ParmagicAnswers ans = honest_prover(round.message, noise, 88);
    Verdict v = verify(round.xs, round.ys, ans.a, ans.b, Rational(1, 10));
    CHECK(v.accept);
}
