#pragma once

#include <cstdint>
#include <vector>

#include "glsim/circuit.hpp"

namespace glsim {

// Side of the horizontal cut. Alice owns U, Bob owns D.
enum class Side : uint8_t { U = 0, D = 1 };

// side[t][w] is wire w's side entering layer t; side[0] assigns every wire
// positioned in the x region to U and the y region to D. A gate with all
// inputs on one side keeps its wires there; a gate fed from both sides
// moves all its wires to U.
struct CutPartition {
    std::vector<std::vector<Side>> side;  // depth+1 rows

    Side at(int layer, int wire) const { return side[size_t(layer)][size_t(wire)]; }
};

// Who holds a wire's value during protocol execution. Shared randomness and
// constant ancillas start out known to both parties at zero cost; once a
// gate overwrites such a wire it carries computed data and belongs to the
// gate's side like any other wire.
enum class WireView : uint8_t { U = 0, D = 1, Both = 2 };

struct KnowledgeMap {
    std::vector<std::vector<WireView>> view;  // depth+1 rows

    WireView at(int layer, int wire) const { return view[size_t(layer)][size_t(wire)]; }
};

// Per layer: gates Alice simulates (u), gates Bob simulates (d), gates both
// simulate from pre-shared values (shared), and the crossing set, which Bob
// feeds with his input values. In a 1D circuit at most one gate per layer
// can cross: the data wires owned by Alice always form a contiguous prefix
// of the line, so every crossing gate covers the two wires at the frontier
// and crossing windows intersect pairwise.
struct LayerClassification {
    struct Layer {
        std::vector<int> u, d, shared, crossing;
    };
    std::vector<Layer> layers;

    int64_t max_crossing_per_layer() const;
};

CutPartition horizontal_cut(const LayeredCircuit& circuit, const InputGeometry& geometry);

// Throws logic_error if the partition violates the propagation rules; used
// by tests as an independent check on horizontal_cut.
void check_cut_rules(const LayeredCircuit& circuit, const InputGeometry& geometry,
                     const CutPartition& cut);

struct ProtocolMessage {
    int layer = 0;
    int sender = 1;  // 0 Alice, 1 Bob; compiled protocols only send Bob->Alice
    std::vector<uint8_t> payload;

    int64_t bit_count() const { return int64_t(payload.size()); }
};

struct Transcript {
    std::vector<ProtocolMessage> messages;

    int64_t total_bits() const;
};

// Compiled two-party protocol: per layer, Bob sends the values of his
// non-pre-shared input wires of every crossing gate (at most 2 bits per
// gate, since a Toffoli gate has three inputs and a crossing gate keeps at
// least one on U). Alice then simulates the U and crossing gates, Bob the D
// gates, and both replay the gates fed purely from shared values.
struct ProtocolSpec {
    LayeredCircuit circuit;
    InputGeometry geometry;
    CutPartition cut;         // the position-initialized partition
    KnowledgeMap knowledge;   // ownership used for execution and metering
    LayerClassification classes;
    std::vector<std::vector<int>> send_wires;  // per layer, Bob -> Alice
    int64_t predicted_total_bits = 0;

    int64_t predicted_layer_bits(int layer) const {
        return int64_t(send_wires[size_t(layer)].size());
    }
};

ProtocolSpec compile_protocol(const LayeredCircuit& circuit, const InputGeometry& geometry);

struct ProtocolRun {
    std::vector<uint8_t> outputs;  // final value of every wire
    Transcript transcript;
};

// Executes the protocol on concrete inputs. Outputs are bit-identical to
// evaluate(circuit, x||y, randomness); the transcript meter always equals
// the compile-time prediction.
ProtocolRun execute_protocol(const ProtocolSpec& spec, const std::vector<uint8_t>& x_bits,
                             const std::vector<uint8_t>& y_bits,
                             const std::vector<uint8_t>& randomness = {});

// Party-level stepping, shared by the in-process executor and the
// two-process runner.
struct PartyState {
    std::vector<uint8_t> value;
    std::vector<uint8_t> known;
};

PartyState init_party(const ProtocolSpec& spec, bool alice, const std::vector<uint8_t>& own_bits,
                      const std::vector<uint8_t>& randomness);
std::vector<uint8_t> bob_layer_message(const ProtocolSpec& spec, int layer, const PartyState& bob);
void advance_party(const ProtocolSpec& spec, int layer, bool alice,
                   const std::vector<uint8_t>& incoming, PartyState& state);

}  // namespace glsim
