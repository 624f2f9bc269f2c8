#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "glsim/rational.hpp"

namespace glsim {

// Geometric layout of a line or grid input holding n question pairs.
//
// 1D: one wire per integer position, x bits at 0..2n-1 (two per trit), y bits
// at 2n..4n-1; the single cut-adjacent pair is (2n-1, 2n).
// D >= 2: one site per question symbol (two wires per site). The x block
// snakes through slabs with last coordinate 0,1,2,..., the y block mirrors it
// at -1,-2,...; sites x_i and y_i for i < floor(n^((D-1)/D)) face each other
// across the boundary and are the only cut-adjacent site pairs.
struct InputGeometry {
    int dimension = 1;
    int64_t n = 0;
    int bits_per_site = 1;
    std::vector<std::vector<int>> site_coords;         // x sites, then y sites
    int64_t x_site_count = 0;
    std::vector<std::pair<int64_t, int64_t>> cross_pairs;

    int64_t site_count() const { return int64_t(site_coords.size()); }
    int64_t input_wire_count() const { return site_count() * bits_per_site; }
    int64_t cut_pair_count() const { return int64_t(cross_pairs.size()); }
    // Which side of the horizontal cut a coordinate falls on. The boundary
    // runs between the x and y blocks along the last axis.
    bool upper_side(const std::vector<int>& coord) const;
};

InputGeometry line_input_geometry(int64_t n);
// dimension == 1 falls back to the line layout.
InputGeometry grid_input_geometry(int dimension, int64_t n);

// floor(n^((d-1)/d)), exact integer arithmetic.
int64_t cut_pair_bound(int64_t n, int dimension);

enum class GateKind : uint8_t { Nand, Toffoli };

// NAND reads wires[0] and wires[1] and writes !(a&b) to wires[0].
// Toffoli reads all three and writes wires[2] ^= wires[0] & wires[1]; all
// three wires count as gate outputs for cut bookkeeping.
struct CircuitGate {
    GateKind kind = GateKind::Nand;
    std::array<int, 3> wires{-1, -1, -1};

    int arity() const { return kind == GateKind::Nand ? 2 : 3; }
    bool operator==(const CircuitGate&) const = default;
};

enum class WireRole : uint8_t { Input, Random, ConstZero, ConstOne };

// Layered circuit over persistent wires: a wire not written by any gate of a
// layer keeps its value. Gates in one layer read the previous layer's values
// (synchronous evaluation), so evaluation order within a layer cannot matter.
struct LayeredCircuit {
    int dimension = 1;
    int radius = 1;
    std::vector<std::vector<int>> wire_coords;
    std::vector<WireRole> roles;
    std::vector<std::vector<CircuitGate>> layers;

    int64_t wire_count() const { return int64_t(wire_coords.size()); }
    int depth() const { return int(layers.size()); }
    std::vector<int> input_wires() const;
    std::vector<int> randomness_wires() const;
    bool all_gates_are(GateKind kind) const;

    bool operator==(const LayeredCircuit&) const = default;
};

struct GeometryViolation {
    int layer = -1;  // -1 for structural problems
    int gate = -1;
    std::string reason;
};

struct GeometryReport {
    std::vector<GeometryViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks, per gate: wires in range and distinct; every wire within
// Chebyshev distance radius of the first wire's coordinate. Per layer:
// write targets are distinct; NAND wires feed at most 3^D gates of the
// layer; Toffoli gates touch pairwise disjoint wire triples. Violations are
// reported as data, not thrown.
GeometryReport validate_geometry(const LayeredCircuit& circuit);

// Synchronous layer-by-layer evaluation; returns the final value of every
// wire. input fills Input-role wires in wire order, randomness fills
// Random-role wires in wire order; lengths must match exactly.
std::vector<uint8_t> evaluate(const LayeredCircuit& circuit, const std::vector<uint8_t>& input,
                              const std::vector<uint8_t>& randomness = {});

struct RandomCircuitOptions {
    double density = 0.6;        // chance that a candidate anchor hosts a gate
    double straddle_prob = 0.8;  // chance of a cut-crossing gate per pair per layer
    int randomness_wires = 0;    // extra shared-randomness wires per flank
};

// Deterministic per seed. Gates are placed only on adjacency-respecting
// windows; cut-crossing gates are confined to the declared cut-adjacent
// pairs, at most one per pair per layer, which is what keeps the compiled
// communication within 2 * depth * cut_pairs bits.
LayeredCircuit random_circuit(const InputGeometry& geometry, int depth, GateKind kind,
                              uint64_t seed, const RandomCircuitOptions& options = {});

// Functionally equivalent Toffoli circuit for a 1D NAND circuit. Each NAND
// becomes one Toffoli writing into a fresh constant-1 ancilla co-located
// with the gate's output wire, and the live value of that wire moves to the
// ancilla. Gates of one source layer are split into at most three target
// layers (by output position mod 3) so that the Toffoli triples of a layer
// stay disjoint even where the source fans out, giving depth <= 3 * d.
struct TranspileResult {
    LayeredCircuit circuit;
    // Final wire of the Toffoli circuit holding each source wire's value.
    std::vector<int> source_wire_location;
};

TranspileResult nand_to_toffoli(const LayeredCircuit& circuit);

// evaluate() on the transpiled circuit, projected back onto source wires.
std::vector<uint8_t> evaluate_transpiled(const TranspileResult& transpiled,
                                         const std::vector<uint8_t>& input,
                                         const std::vector<uint8_t>& randomness = {});

}  // namespace glsim
