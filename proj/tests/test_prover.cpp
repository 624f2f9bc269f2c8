#include "doctest.h"

#include <cmath>

#include "glsim/errors.hpp"
#include "glsim/magic_square.hpp"

using namespace glsim;

TEST_CASE("observable grid rows multiply to +I and columns to -I") {
    const ObservableGrid& grid = mermin_peres_grid();
    for (int r = 0; r < 3; ++r) CHECK(grid.row_product(r).identity_sign() == 1);
    for (int c = 0; c < 3; ++c) CHECK(grid.column_product(c).identity_sign() == -1);

    // Breaking one sign breaks the check.
    ObservableGrid broken = grid;
    broken.cells[2][0].sign = 1;
    CHECK_THROWS(broken.verify());
}

TEST_CASE("pauli algebra basics") {
    PauliString x = PauliString::from_label("XI", 1);
    PauliString z = PauliString::from_label("ZI", 1);
    PauliString xz = x * z;
    PauliString zx = z * x;
    CHECK(xz.x == zx.x);
    CHECK(xz.z == zx.z);
    CHECK(((xz.phase - zx.phase) & 3) == 2);  // anticommute
    PauliString y = PauliString::from_label("YI", 1);
    PauliString yy = y * y;
    CHECK(yy.is_identity_up_to_sign());
    CHECK(yy.identity_sign() == 1);
}

TEST_CASE("noiseless resource is two Bell pairs with amplitude 1/2") {
    NoiseModel none;
    CounterRng rng(3);
    StateVector s = prepare_bell_pairs(none, rng);
    // Qubits (0,1) and (2,3) correlated: indices 0, 3, 12, 15.
    for (size_t i = 0; i < 16; ++i) {
        double expect = (i == 0 || i == 3 || i == 12 || i == 15) ? 0.5 : 0.0;
        CHECK(std::abs(s.amplitude(i) - std::complex<double>(expect, 0)) < 1e-12);
    }
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("prepare_resource is deterministic per seed") {
    NoiseModel none;
    auto a = prepare_resource(5, none, 42);
    auto b = prepare_resource(5, none, 42);
    REQUIRE(a.size() == 5);
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t k = 0; k < a[i].dimension(); ++k) {
            CHECK(a[i].amplitude(k) == b[i].amplitude(k));
        }
    }
    CHECK_THROWS_AS(prepare_resource(0, none, 1), domain_error);
}

TEST_CASE("noiseless strategy wins every question pair") {
    const GameSpec& ms = magic_square_game();
    NoiseModel none;
    CounterRng rng(12345);
    const int kShotsPerPair = 400;  // the acceptance suite runs 10^4 per pair
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
            for (int shot = 0; shot < kShotsPerPair; ++shot) {
                StateVector resource = prepare_bell_pairs(none, rng);
                GameAnswers ans = measure_magic_square(resource, x, y, none, rng);
                REQUIRE(eval_predicate(ms, x, y, ans.a, ans.b));
            }
        }
    }
}

TEST_CASE("parity constraints hold by construction even under heavy noise") {
    NoiseModel noisy(0.2);
    CounterRng rng(9);
    for (int shot = 0; shot < 2000; ++shot) {
        StateVector resource = prepare_bell_pairs(noisy, rng);
        GameAnswers ans = measure_magic_square(resource, int(rng.bounded(3)),
                                               int(rng.bounded(3)), noisy, rng);
        int pa = ms_output_bit(ans.a, 0) ^ ms_output_bit(ans.a, 1) ^ ms_output_bit(ans.a, 2);
        int pb = ms_output_bit(ans.b, 0) ^ ms_output_bit(ans.b, 1) ^ ms_output_bit(ans.b, 2);
        REQUIRE(pa == 0);
        REQUIRE(pb == 1);
    }
}

TEST_CASE("invalid trits are rejected") {
    NoiseModel none;
    CounterRng rng(1);
    StateVector resource = prepare_bell_pairs(none, rng);
    CHECK_THROWS_AS(measure_magic_square(resource, 3, 0, none, rng), domain_error);
    CHECK_THROWS_AS(measure_magic_square(resource, 0, -1, none, rng), domain_error);
}

TEST_CASE("run_parmagic wins everything noiselessly and is reproducible") {
    const GameSpec& ms = magic_square_game();
    SampledInputs q = sample_inputs(ms, 100, 31);
    LineInput line = LineInput::from_symbols(q.xs, q.ys);
    NoiseModel none;
    ParmagicAnswers one = run_parmagic(line, none, 8);
    CHECK(count_satisfied(ms, q.xs, q.ys, one.a, one.b) == 100);

    ParmagicAnswers again = run_parmagic(line, none, 8);
    CHECK(one.a == again.a);
    CHECK(one.b == again.b);

    // Worker count cannot change the outcome.
    ParmagicAnswers serial = run_parmagic(line, none, 8, 1);
    ParmagicAnswers wide = run_parmagic(line, none, 8, 4);
    CHECK(serial.a == wide.a);
    CHECK(serial.b == wide.b);
}

TEST_CASE("win rate decays monotonically along a noise sweep") {
    const GameSpec& ms = magic_square_game();
    const int64_t kGames = 4000;
    SampledInputs q = sample_inputs(ms, kGames, 555);
    LineInput line = LineInput::from_symbols(q.xs, q.ys);
    double prev = 1.1;
    for (double eps : {0.0, 0.001, 0.005, 0.01, 0.05}) {
        ParmagicAnswers ans = run_parmagic(line, NoiseModel(eps), 202);
        double rate = double(count_satisfied(ms, q.xs, q.ys, ans.a, ans.b)) / double(kGames);
        CHECK(rate <= prev + 1e-9);
        prev = rate;
    }
}

TEST_CASE("failures in distinct games are uncorrelated") {
    const GameSpec& ms = magic_square_game();
    const int kTrials = 20000;
    NoiseModel noise(0.02);
    LineInput line = LineInput::from_symbols({0, 1}, {2, 0});
    double sum0 = 0, sum1 = 0, sum01 = 0;
    for (int t = 0; t < kTrials; ++t) {
        ParmagicAnswers ans = run_parmagic(line, noise, 7000 + uint64_t(t));
        double f0 = eval_predicate(ms, 0, 2, ans.a[0], ans.b[0]) ? 0.0 : 1.0;
        double f1 = eval_predicate(ms, 1, 0, ans.a[1], ans.b[1]) ? 0.0 : 1.0;
        sum0 += f0;
        sum1 += f1;
        sum01 += f0 * f1;
    }
    double p0 = sum0 / kTrials, p1 = sum1 / kTrials;
    double cov = sum01 / kTrials - p0 * p1;
    double sd = std::sqrt(p0 * (1 - p0) * p1 * (1 - p1) / kTrials);
    CHECK(std::abs(cov) <= 3.5 * sd + 1e-9);
}

TEST_CASE("per-game failure rate stays small at epsilon = 0.001") {
    const GameSpec& ms = magic_square_game();
    const int64_t kGames = 20000;  // the acceptance suite runs 10^5
    SampledInputs q = sample_inputs(ms, kGames, 4242);
    LineInput line = LineInput::from_symbols(q.xs, q.ys);
    ParmagicAnswers ans = run_parmagic(line, NoiseModel(0.001), 99);
    double fail = 1.0 - double(count_satisfied(ms, q.xs, q.ys, ans.a, ans.b)) / double(kGames);
    CHECK(fail <= 0.05);
}
