#include "doctest.h"

#include "glsim/channel.hpp"
#include "glsim/circuit.hpp"
#include "glsim/errors.hpp"
#include "glsim/protocol.hpp"
#include "glsim/rng.hpp"

using namespace glsim;

namespace {

std::vector<uint8_t> random_bits(size_t count, CounterRng& rng) {
    std::vector<uint8_t> bits(count);
    for (auto& b : bits) b = uint8_t(rng.next() & 1);
    return bits;
}

struct Split {
    std::vector<uint8_t> x, y;
};

Split split_inputs(const LayeredCircuit& c, const InputGeometry& g, CounterRng& rng) {
    Split s;
    for (int w : c.input_wires()) {
        uint8_t bit = uint8_t(rng.next() & 1);
        if (g.upper_side(c.wire_coords[size_t(w)])) {
            s.x.push_back(bit);
        } else {
            s.y.push_back(bit);
        }
    }
    return s;
}

std::vector<uint8_t> joined(const LayeredCircuit& c, const InputGeometry& g, const Split& s) {
    std::vector<uint8_t> all;
    size_t xi = 0, yi = 0;
    for (int w : c.input_wires()) {
        bool upper = g.upper_side(c.wire_coords[size_t(w)]);
        all.push_back(upper ? s.x[xi++] : s.y[yi++]);
    }
    return all;
}

}  // namespace

TEST_CASE("horizontal cut demands Toffoli circuits") {
    InputGeometry g = line_input_geometry(2);
    LayeredCircuit nand = random_circuit(g, 2, GateKind::Nand, 5);
    CHECK_THROWS_AS(horizontal_cut(nand, g), domain_error);
}

TEST_CASE("cut rules: one-sided gates stay put, straddlers move up") {
    InputGeometry g = line_input_geometry(2);  // x wires 0..3, y wires 4..7
    LayeredCircuit c;
    c.dimension = 1;
    for (int w = 0; w < 8; ++w) {
        c.wire_coords.push_back({w});
        c.roles.push_back(WireRole::Input);
    }
    c.layers.push_back({CircuitGate{GateKind::Toffoli, {1, 0, 2}},    // pure x side
                        CircuitGate{GateKind::Toffoli, {5, 4, 6}}});  // pure y side
    c.layers.push_back({CircuitGate{GateKind::Toffoli, {3, 2, 4}}});  // straddles the cut

    CutPartition cut = horizontal_cut(c, g);
    check_cut_rules(c, g, cut);
    CHECK(cut.at(0, 3) == Side::U);
    CHECK(cut.at(0, 4) == Side::D);
    CHECK(cut.at(1, 2) == Side::U);   // rule 2 output stays U
    CHECK(cut.at(1, 6) == Side::D);   // rule 3 output stays D
    CHECK(cut.at(2, 4) == Side::U);   // rule 4: straddler output joins U

    ProtocolSpec spec = compile_protocol(c, g);
    const LayerClassification& cls = spec.classes;
    CHECK(cls.layers[0].u.size() == 1);
    CHECK(cls.layers[0].d.size() == 1);
    CHECK(cls.layers[0].crossing.empty());
    CHECK(cls.layers[1].crossing.size() == 1);
    CHECK(spec.predicted_layer_bits(0) == 0);
    CHECK(spec.predicted_layer_bits(1) == 1);  // only wire 4 is on Bob's side
}

TEST_CASE("cut partition is a partition on random circuits") {
    CounterRng rng(31);
    for (int i = 0; i < 40; ++i) {
        int64_t n = 2 + int64_t(rng.bounded(20));
        int depth = 1 + int(rng.bounded(12));
        RandomCircuitOptions opts;
        opts.randomness_wires = int(rng.bounded(3));
        InputGeometry g = line_input_geometry(n);
        LayeredCircuit c = random_circuit(g, depth, GateKind::Toffoli, rng.next(), opts);
        CutPartition cut = horizontal_cut(c, g);
        check_cut_rules(c, g, cut);
        REQUIRE(int(cut.side.size()) == depth + 1);
    }
}

TEST_CASE("no crossing gates means an empty transcript") {
    InputGeometry g = line_input_geometry(4);
    RandomCircuitOptions opts;
    opts.straddle_prob = 0.0;
    LayeredCircuit c = random_circuit(g, 6, GateKind::Toffoli, 8, opts);
    ProtocolSpec spec = compile_protocol(c, g);
    CHECK(spec.predicted_total_bits == 0);
    CounterRng rng(3);
    Split s = split_inputs(c, g, rng);
    ProtocolRun run = execute_protocol(spec, s.x, s.y);
    CHECK(run.transcript.messages.empty());
    CHECK(run.outputs == evaluate(c, joined(c, g, s)));
}

TEST_CASE("zero-depth protocol returns the inputs untouched") {
    InputGeometry g = line_input_geometry(2);
    LayeredCircuit c;
    c.dimension = 1;
    for (int w = 0; w < 8; ++w) {
        c.wire_coords.push_back({w});
        c.roles.push_back(WireRole::Input);
    }
    ProtocolSpec spec = compile_protocol(c, g);
    ProtocolRun run = execute_protocol(spec, {1, 0, 1, 1}, {0, 0, 1, 0});
    CHECK(run.transcript.messages.empty());
    CHECK(run.outputs == std::vector<uint8_t>{1, 0, 1, 1, 0, 0, 1, 0});
}

TEST_CASE("protocol equals direct evaluation on random 1D circuits") {
    CounterRng rng(404);
    for (int i = 0; i < 60; ++i) {
        int64_t n = 2 + int64_t(rng.bounded(15));
        int depth = 1 + int(rng.bounded(10));
        RandomCircuitOptions opts;
        opts.randomness_wires = int(rng.bounded(3));
        InputGeometry g = line_input_geometry(n);
        LayeredCircuit c = random_circuit(g, depth, GateKind::Toffoli, rng.next(), opts);
        ProtocolSpec spec = compile_protocol(c, g);
        REQUIRE(spec.classes.max_crossing_per_layer() <= 1);
        REQUIRE(spec.predicted_total_bits <= 2 * depth);
        for (int rep = 0; rep < 15; ++rep) {
            Split s = split_inputs(c, g, rng);
            auto rnd = random_bits(c.randomness_wires().size(), rng);
            ProtocolRun run = execute_protocol(spec, s.x, s.y, rnd);
            REQUIRE(run.outputs == evaluate(c, joined(c, g, s), rnd));
            REQUIRE(run.transcript.total_bits() == spec.predicted_total_bits);
        }
    }
}

TEST_CASE("transpiled NAND circuits compile and execute faithfully") {
    CounterRng rng(777);
    for (int i = 0; i < 20; ++i) {
        int64_t n = 2 + int64_t(rng.bounded(10));
        int depth = 1 + int(rng.bounded(8));
        InputGeometry g = line_input_geometry(n);
        LayeredCircuit src = random_circuit(g, depth, GateKind::Nand, rng.next());
        TranspileResult t = nand_to_toffoli(src);
        ProtocolSpec spec = compile_protocol(t.circuit, g);
        REQUIRE(spec.classes.max_crossing_per_layer() <= 1);
        REQUIRE(spec.predicted_total_bits <= 2 * t.circuit.depth());
        Split s = split_inputs(src, g, rng);
        ProtocolRun run = execute_protocol(spec, s.x, s.y);
        REQUIRE(run.outputs == evaluate(t.circuit, joined(src, g, s)));
    }
}

TEST_CASE("2D grids respect the pair-count communication bound") {
    CounterRng rng(99);
    for (int64_t n : {16, 64}) {
        InputGeometry g = grid_input_geometry(2, n);
        for (int depth : {4, 8}) {
            LayeredCircuit c = random_circuit(g, depth, GateKind::Toffoli, rng.next());
            ProtocolSpec spec = compile_protocol(c, g);
            REQUIRE(spec.predicted_total_bits <= 2 * int64_t(depth) * g.cut_pair_count());
            Split s = split_inputs(c, g, rng);
            ProtocolRun run = execute_protocol(spec, s.x, s.y);
            REQUIRE(run.outputs == evaluate(c, joined(c, g, s)));
        }
    }
}

TEST_CASE("frame codec round-trips messages") {
    std::vector<uint8_t> bits{1, 0, 1, 1, 0, 0, 1, 0, 1};
    auto encoded = encode_frame(7, 1, bits);
    FrameDecoder dec;
    dec.feed(encoded.data(), 2);  // partial feed
    Frame frame;
    CHECK_FALSE(dec.next(frame));
    dec.feed(encoded.data() + 2, encoded.size() - 2);
    REQUIRE(dec.next(frame));
    CHECK(frame.layer == 7);
    CHECK(frame.sender == 1);
    CHECK(frame.bits == bits);

    // Two frames back to back.
    auto second = encode_frame(kOutOfBandLayer, 0, {});
    dec.feed(encoded.data(), encoded.size());
    dec.feed(second.data(), second.size());
    REQUIRE(dec.next(frame));
    REQUIRE(dec.next(frame));
    CHECK(frame.layer == kOutOfBandLayer);
    CHECK(frame.bits.empty());
}

TEST_CASE("two-process execution reproduces the in-process transcript") {
    CounterRng rng(15);
    InputGeometry g = line_input_geometry(6);
    LayeredCircuit c = random_circuit(g, 8, GateKind::Toffoli, 1234);
    ProtocolSpec spec = compile_protocol(c, g);
    for (int rep = 0; rep < 5; ++rep) {
        Split s = split_inputs(c, g, rng);
        ProtocolRun in_process = execute_protocol(spec, s.x, s.y);
        ProtocolRun forked = execute_protocol_two_process(spec, s.x, s.y);
        REQUIRE(forked.outputs == in_process.outputs);
        REQUIRE(forked.transcript.messages.size() == in_process.transcript.messages.size());
        for (size_t m = 0; m < forked.transcript.messages.size(); ++m) {
            CHECK(forked.transcript.messages[m].layer == in_process.transcript.messages[m].layer);
            CHECK(forked.transcript.messages[m].payload ==
                  in_process.transcript.messages[m].payload);
        }
        REQUIRE(forked.transcript.total_bits() == spec.predicted_total_bits);
    }
}
