#include "glsim/protocol.hpp"

#include <stdexcept>

#include "glsim/errors.hpp"

namespace glsim {

namespace {

std::vector<Side> initial_sides(const LayeredCircuit& circuit, const InputGeometry& geometry) {
    std::vector<Side> side(size_t(circuit.wire_count()));
    for (int64_t w = 0; w < circuit.wire_count(); ++w) {
        side[size_t(w)] =
            geometry.upper_side(circuit.wire_coords[size_t(w)]) ? Side::U : Side::D;
    }
    return side;
}

void nominal_gate_sides(const CircuitGate& gate, const std::vector<Side>& side, bool& any_u,
                        bool& any_d) {
    any_u = any_d = false;
    for (int k = 0; k < gate.arity(); ++k) {
        (side[size_t(gate.wires[size_t(k)])] == Side::U ? any_u : any_d) = true;
    }
}

void require_toffoli(const LayeredCircuit& circuit) {
    if (!circuit.all_gates_are(GateKind::Toffoli)) {
        throw domain_error("horizontal cut requires a Toffoli circuit; run nand_to_toffoli first");
    }
}

}  // namespace

int64_t LayerClassification::max_crossing_per_layer() const {
    int64_t m = 0;
    for (const auto& layer : layers) m = std::max<int64_t>(m, int64_t(layer.crossing.size()));
    return m;
}

int64_t Transcript::total_bits() const {
    int64_t bits = 0;
    for (const auto& msg : messages) bits += msg.bit_count();
    return bits;
}

CutPartition horizontal_cut(const LayeredCircuit& circuit, const InputGeometry& geometry) {
    require_toffoli(circuit);
    CutPartition cut;
    cut.side.reserve(size_t(circuit.depth()) + 1);
    cut.side.push_back(initial_sides(circuit, geometry));
    for (int t = 0; t < circuit.depth(); ++t) {
        std::vector<Side> next = cut.side.back();
        for (const CircuitGate& gate : circuit.layers[size_t(t)]) {
            bool any_u, any_d;
            nominal_gate_sides(gate, cut.side.back(), any_u, any_d);
            Side out = (any_d && !any_u) ? Side::D : Side::U;
            for (int k = 0; k < gate.arity(); ++k) next[size_t(gate.wires[size_t(k)])] = out;
        }
        cut.side.push_back(std::move(next));
    }
    return cut;
}

void check_cut_rules(const LayeredCircuit& circuit, const InputGeometry& geometry,
                     const CutPartition& cut) {
    if (int(cut.side.size()) != circuit.depth() + 1) {
        throw std::logic_error("cut must have depth+1 rows");
    }
    auto expect = initial_sides(circuit, geometry);
    if (cut.side[0] != expect) throw std::logic_error("cut rule 1 violated at layer 0");
    for (int t = 0; t < circuit.depth(); ++t) {
        std::vector<uint8_t> touched(size_t(circuit.wire_count()), 0);
        for (const CircuitGate& gate : circuit.layers[size_t(t)]) {
            bool any_u, any_d;
            nominal_gate_sides(gate, cut.side[size_t(t)], any_u, any_d);
            Side out = (any_d && !any_u) ? Side::D : Side::U;
            for (int k = 0; k < gate.arity(); ++k) {
                int w = gate.wires[size_t(k)];
                touched[size_t(w)] = 1;
                if (cut.side[size_t(t) + 1][size_t(w)] != out) {
                    throw std::logic_error("cut rules 2-4 violated at layer " + std::to_string(t));
                }
            }
        }
        for (int64_t w = 0; w < circuit.wire_count(); ++w) {
            if (!touched[size_t(w)] &&
                cut.side[size_t(t) + 1][size_t(w)] != cut.side[size_t(t)][size_t(w)]) {
                throw std::logic_error("untouched wire changed side at layer " + std::to_string(t));
            }
        }
    }
}

ProtocolSpec compile_protocol(const LayeredCircuit& circuit, const InputGeometry& geometry) {
    GeometryReport report = validate_geometry(circuit);
    if (!report.ok()) {
        throw domain_error("cannot compile an invalid circuit: " +
                           report.violations.front().reason);
    }
    require_toffoli(circuit);

    ProtocolSpec spec;
    spec.circuit = circuit;
    spec.geometry = geometry;
    spec.cut = horizontal_cut(circuit, geometry);

    // Ownership: inputs by side, everything else pre-shared until a gate
    // overwrites it.
    std::vector<WireView> view(size_t(circuit.wire_count()));
    for (int64_t w = 0; w < circuit.wire_count(); ++w) {
        if (circuit.roles[size_t(w)] == WireRole::Input) {
            view[size_t(w)] =
                geometry.upper_side(circuit.wire_coords[size_t(w)]) ? WireView::U : WireView::D;
        } else {
            view[size_t(w)] = WireView::Both;
        }
    }
    spec.knowledge.view.push_back(view);
    spec.classes.layers.resize(size_t(circuit.depth()));
    spec.send_wires.resize(size_t(circuit.depth()));

    for (int t = 0; t < circuit.depth(); ++t) {
        const auto& layer = circuit.layers[size_t(t)];
        std::vector<WireView> next = view;
        for (int gi = 0; gi < int(layer.size()); ++gi) {
            const CircuitGate& gate = layer[size_t(gi)];
            bool any_u = false, any_d = false;
            for (int k = 0; k < gate.arity(); ++k) {
                WireView v = view[size_t(gate.wires[size_t(k)])];
                if (v == WireView::U) any_u = true;
                if (v == WireView::D) any_d = true;
            }
            WireView out;
            if (any_u && any_d) {
                spec.classes.layers[size_t(t)].crossing.push_back(gi);
                for (int k = 0; k < gate.arity(); ++k) {
                    int w = gate.wires[size_t(k)];
                    if (view[size_t(w)] == WireView::D) {
                        spec.send_wires[size_t(t)].push_back(w);
                    }
                }
                out = WireView::U;
            } else if (any_u) {
                spec.classes.layers[size_t(t)].u.push_back(gi);
                out = WireView::U;
            } else if (any_d) {
                spec.classes.layers[size_t(t)].d.push_back(gi);
                out = WireView::D;
            } else {
                // Fed purely from pre-shared values: both parties replay it.
                spec.classes.layers[size_t(t)].shared.push_back(gi);
                out = WireView::Both;
            }
            for (int k = 0; k < gate.arity(); ++k) next[size_t(gate.wires[size_t(k)])] = out;
        }
        spec.predicted_total_bits += int64_t(spec.send_wires[size_t(t)].size());
        view = std::move(next);
        spec.knowledge.view.push_back(view);
    }
    return spec;
}

PartyState init_party(const ProtocolSpec& spec, bool alice, const std::vector<uint8_t>& own_bits,
                      const std::vector<uint8_t>& randomness) {
    const LayeredCircuit& c = spec.circuit;
    PartyState st;
    st.value.assign(size_t(c.wire_count()), 0);
    st.known.assign(size_t(c.wire_count()), 0);
    size_t own_cursor = 0, rnd_cursor = 0;
    for (int64_t w = 0; w < c.wire_count(); ++w) {
        switch (c.roles[size_t(w)]) {
            case WireRole::Input: {
                bool upper = spec.knowledge.at(0, int(w)) == WireView::U;
                if (upper == alice) {
                    if (own_cursor >= own_bits.size()) {
                        throw domain_error("input bit vector too short");
                    }
                    st.value[size_t(w)] = own_bits[own_cursor++] & 1;
                    st.known[size_t(w)] = 1;
                }
                break;
            }
            case WireRole::Random:
                if (rnd_cursor >= randomness.size()) {
                    throw domain_error("randomness bit vector too short");
                }
                st.value[size_t(w)] = randomness[rnd_cursor++] & 1;
                st.known[size_t(w)] = 1;
                break;
            case WireRole::ConstZero:
                st.value[size_t(w)] = 0;
                st.known[size_t(w)] = 1;
                break;
            case WireRole::ConstOne:
                st.value[size_t(w)] = 1;
                st.known[size_t(w)] = 1;
                break;
        }
    }
    if (own_cursor != own_bits.size()) throw domain_error("input bit vector too long");
    if (rnd_cursor != randomness.size()) throw domain_error("randomness bit vector too long");
    return st;
}

std::vector<uint8_t> bob_layer_message(const ProtocolSpec& spec, int layer,
                                       const PartyState& bob) {
    std::vector<uint8_t> payload;
    for (int w : spec.send_wires[size_t(layer)]) {
        if (!bob.known[size_t(w)]) throw std::logic_error("Bob asked to send an unknown wire");
        payload.push_back(bob.value[size_t(w)]);
    }
    return payload;
}

void advance_party(const ProtocolSpec& spec, int layer, bool alice,
                   const std::vector<uint8_t>& incoming, PartyState& state) {
    const LayeredCircuit& c = spec.circuit;
    const auto& cls = spec.classes.layers[size_t(layer)];
    if (alice) {
        const auto& wires = spec.send_wires[size_t(layer)];
        if (incoming.size() != wires.size()) {
            throw domain_error("crossing message has wrong length");
        }
        for (size_t i = 0; i < wires.size(); ++i) {
            state.value[size_t(wires[i])] = incoming[i] & 1;
            state.known[size_t(wires[i])] = 1;
        }
    }
    std::vector<uint8_t> next_value = state.value;
    auto simulate = [&](int gi) {
        const CircuitGate& gate = c.layers[size_t(layer)][size_t(gi)];
        for (int k = 0; k < gate.arity(); ++k) {
            if (!state.known[size_t(gate.wires[size_t(k)])]) {
                throw std::logic_error("party simulating a gate without its inputs");
            }
        }
        uint8_t a = state.value[size_t(gate.wires[0])];
        uint8_t b = state.value[size_t(gate.wires[1])];
        next_value[size_t(gate.wires[2])] = uint8_t(state.value[size_t(gate.wires[2])] ^ (a & b));
    };
    for (int gi : cls.shared) simulate(gi);
    if (alice) {
        for (int gi : cls.u) simulate(gi);
        for (int gi : cls.crossing) simulate(gi);
    } else {
        for (int gi : cls.d) simulate(gi);
    }
    state.value = std::move(next_value);
    // A party tracks its own side of the cut plus everything still shared.
    WireView mine = alice ? WireView::U : WireView::D;
    for (int64_t w = 0; w < c.wire_count(); ++w) {
        WireView v = spec.knowledge.at(layer + 1, int(w));
        state.known[size_t(w)] = (v == mine || v == WireView::Both) ? 1 : 0;
    }
}

ProtocolRun execute_protocol(const ProtocolSpec& spec, const std::vector<uint8_t>& x_bits,
                             const std::vector<uint8_t>& y_bits,
                             const std::vector<uint8_t>& randomness) {
    PartyState alice = init_party(spec, true, x_bits, randomness);
    PartyState bob = init_party(spec, false, y_bits, randomness);
    ProtocolRun run;
    for (int t = 0; t < spec.circuit.depth(); ++t) {
        std::vector<uint8_t> payload = bob_layer_message(spec, t, bob);
        if (!payload.empty()) {
            run.transcript.messages.push_back({t, 1, payload});
        }
        advance_party(spec, t, true, payload, alice);
        advance_party(spec, t, false, {}, bob);
    }
    if (run.transcript.total_bits() != spec.predicted_total_bits) {
        throw std::logic_error("transcript meter disagrees with compile-time prediction");
    }
    run.outputs.assign(size_t(spec.circuit.wire_count()), 0);
    int d = spec.circuit.depth();
    for (int64_t w = 0; w < spec.circuit.wire_count(); ++w) {
        WireView v = spec.knowledge.at(d, int(w));
        const PartyState& owner = (v == WireView::D) ? bob : alice;
        if (!owner.known[size_t(w)]) {
            throw std::logic_error("output wire unknown to its owning party");
        }
        run.outputs[size_t(w)] = owner.value[size_t(w)];
    }
    return run;
}

}  // namespace glsim
