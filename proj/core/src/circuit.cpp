#include "glsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "glsim/errors.hpp"
#include "glsim/rng.hpp"

namespace glsim {

namespace {

// Boustrophedon order over a box: consecutive indices map to unit-adjacent
// cells. Axis a runs backwards whenever the combined higher-axis counter is
// odd.
std::vector<int> box_cell(int64_t index, const std::vector<int64_t>& sides) {
    size_t d = sides.size();
    std::vector<int64_t> digit(d);
    std::vector<int64_t> higher(d);
    int64_t rem = index;
    for (size_t a = 0; a < d; ++a) {
        digit[a] = rem % sides[a];
        rem /= sides[a];
        higher[a] = rem;
    }
    std::vector<int> coord(d);
    for (size_t a = 0; a < d; ++a) {
        coord[a] = int((higher[a] & 1) ? sides[a] - 1 - digit[a] : digit[a]);
    }
    return coord;
}

// count cells snaking through a (dims)-dimensional box, consecutive cells
// unit-adjacent.
std::vector<std::vector<int>> snake_cells(int64_t count, int dims) {
    int64_t side = 1;
    auto volume = [dims](int64_t s) {
        int64_t v = 1;
        for (int i = 0; i < dims; ++i) v *= s;
        return v;
    };
    while (volume(side) < count) ++side;
    std::vector<int64_t> sides(size_t(dims), side);
    std::vector<std::vector<int>> out;
    out.reserve(size_t(count));
    for (int64_t i = 0; i < count; ++i) out.push_back(box_cell(i, sides));
    return out;
}

}  // namespace

int64_t cut_pair_bound(int64_t n, int dimension) {
    if (n < 1 || dimension < 1) throw domain_error("need n >= 1 and dimension >= 1");
    if (dimension == 1) return 1;
    // floor((n^(D-1))^(1/D)) by binary search.
    BigInt target = 1;
    for (int i = 0; i < dimension - 1; ++i) target *= n;
    BigInt lo = 1, hi = n;
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        BigInt pw = 1;
        for (int i = 0; i < dimension; ++i) pw *= mid;
        if (pw <= target) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo.convert_to<int64_t>();
}

bool InputGeometry::upper_side(const std::vector<int>& coord) const {
    if (dimension == 1) return coord.at(0) < 2 * n;
    return coord.at(size_t(dimension) - 1) >= 0;
}

InputGeometry line_input_geometry(int64_t n) {
    if (n < 1) throw domain_error("line input needs n >= 1");
    InputGeometry g;
    g.dimension = 1;
    g.n = n;
    g.bits_per_site = 1;
    g.site_coords.reserve(size_t(4 * n));
    for (int64_t p = 0; p < 4 * n; ++p) g.site_coords.push_back({int(p)});
    g.x_site_count = 2 * n;
    g.cross_pairs = {{2 * n - 1, 2 * n}};
    return g;
}

InputGeometry grid_input_geometry(int dimension, int64_t n) {
    if (dimension < 1) throw domain_error("grid dimension must be positive");
    if (dimension == 1) return line_input_geometry(n);
    if (n < 1) throw domain_error("grid input needs n >= 1");
    InputGeometry g;
    g.dimension = dimension;
    g.n = n;
    g.bits_per_site = 2;
    int64_t pairs = cut_pair_bound(n, dimension);
    auto section = snake_cells(pairs, dimension - 1);

    auto symbol_coord = [&](int64_t index, bool x_side) {
        int64_t slab = index / pairs;
        int64_t pos = index % pairs;
        if (slab & 1) pos = pairs - 1 - pos;
        std::vector<int> coord = section[size_t(pos)];
        coord.push_back(x_side ? int(slab) : int(-1 - slab));
        return coord;
    };
    g.site_coords.reserve(size_t(2 * n));
    for (int64_t i = 0; i < n; ++i) g.site_coords.push_back(symbol_coord(i, true));
    for (int64_t i = 0; i < n; ++i) g.site_coords.push_back(symbol_coord(i, false));
    g.x_site_count = n;
    for (int64_t i = 0; i < pairs && i < n; ++i) g.cross_pairs.push_back({i, n + i});
    return g;
}

std::vector<int> LayeredCircuit::input_wires() const {
    std::vector<int> out;
    for (int64_t w = 0; w < wire_count(); ++w) {
        if (roles[size_t(w)] == WireRole::Input) out.push_back(int(w));
    }
    return out;
}

std::vector<int> LayeredCircuit::randomness_wires() const {
    std::vector<int> out;
    for (int64_t w = 0; w < wire_count(); ++w) {
        if (roles[size_t(w)] == WireRole::Random) out.push_back(int(w));
    }
    return out;
}

bool LayeredCircuit::all_gates_are(GateKind kind) const {
    for (const auto& layer : layers) {
        for (const auto& gate : layer) {
            if (gate.kind != kind) return false;
        }
    }
    return true;
}

namespace {

int chebyshev(const std::vector<int>& a, const std::vector<int>& b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

int64_t ipow(int64_t base, int exp) {
    int64_t v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

}  // namespace

GeometryReport validate_geometry(const LayeredCircuit& circuit) {
    GeometryReport report;
    auto flag = [&](int layer, int gate, std::string reason) {
        report.violations.push_back({layer, gate, std::move(reason)});
    };
    if (circuit.roles.size() != circuit.wire_coords.size()) {
        flag(-1, -1, "wire role table size mismatch");
        return report;
    }
    for (const auto& coord : circuit.wire_coords) {
        if (int(coord.size()) != circuit.dimension) {
            flag(-1, -1, "wire coordinate arity differs from circuit dimension");
            return report;
        }
    }
    int64_t fanout_cap = ipow(3, circuit.dimension);
    for (int t = 0; t < circuit.depth(); ++t) {
        const auto& layer = circuit.layers[size_t(t)];
        std::map<int, int> write_count;
        std::map<int, int> read_count;
        std::map<int, int> touch_count;
        for (int gi = 0; gi < int(layer.size()); ++gi) {
            const CircuitGate& gate = layer[size_t(gi)];
            int arity = gate.arity();
            bool wires_ok = true;
            for (int k = 0; k < arity; ++k) {
                int w = gate.wires[size_t(k)];
                if (w < 0 || w >= circuit.wire_count()) {
                    flag(t, gi, "wire index out of range");
                    wires_ok = false;
                }
            }
            if (!wires_ok) continue;
            for (int k = 0; k < arity; ++k) {
                for (int j = k + 1; j < arity; ++j) {
                    if (gate.wires[size_t(k)] == gate.wires[size_t(j)]) {
                        flag(t, gi, "gate wires must be distinct");
                    }
                }
            }
            const auto& anchor = circuit.wire_coords[size_t(gate.wires[0])];
            for (int k = 1; k < arity; ++k) {
                int dist = chebyshev(anchor, circuit.wire_coords[size_t(gate.wires[size_t(k)])]);
                if (dist > circuit.radius) {
                    flag(t, gi,
                         "wire " + std::to_string(gate.wires[size_t(k)]) + " lies " +
                             std::to_string(dist) + " from the gate anchor (radius " +
                             std::to_string(circuit.radius) + ")");
                }
            }
            if (gate.kind == GateKind::Nand) {
                write_count[gate.wires[0]] += 1;
                read_count[gate.wires[0]] += 1;
                read_count[gate.wires[1]] += 1;
            } else {
                for (int k = 0; k < 3; ++k) touch_count[gate.wires[size_t(k)]] += 1;
                write_count[gate.wires[2]] += 1;
            }
        }
        for (const auto& [w, c] : write_count) {
            if (c > 1) {
                flag(t, -1, "wire " + std::to_string(w) + " written by " + std::to_string(c) +
                                " gates in one layer");
            }
        }
        for (const auto& [w, c] : read_count) {
            if (c > fanout_cap) {
                flag(t, -1, "wire " + std::to_string(w) + " feeds " + std::to_string(c) +
                                " gates, fan-out cap " + std::to_string(fanout_cap));
            }
        }
        for (const auto& [w, c] : touch_count) {
            if (c > 1) {
                flag(t, -1, "Toffoli triples overlap on wire " + std::to_string(w));
            }
        }
    }
    return report;
}

std::vector<uint8_t> evaluate(const LayeredCircuit& circuit, const std::vector<uint8_t>& input,
                              const std::vector<uint8_t>& randomness) {
    std::vector<uint8_t> state(size_t(circuit.wire_count()), 0);
    size_t in_cursor = 0, rnd_cursor = 0;
    for (int64_t w = 0; w < circuit.wire_count(); ++w) {
        switch (circuit.roles[size_t(w)]) {
            case WireRole::Input:
                if (in_cursor >= input.size()) throw domain_error("input bit vector too short");
                state[size_t(w)] = input[in_cursor++] & 1;
                break;
            case WireRole::Random:
                if (rnd_cursor >= randomness.size()) {
                    throw domain_error("randomness bit vector too short");
                }
                state[size_t(w)] = randomness[rnd_cursor++] & 1;
                break;
            case WireRole::ConstZero:
                state[size_t(w)] = 0;
                break;
            case WireRole::ConstOne:
                state[size_t(w)] = 1;
                break;
        }
    }
    if (in_cursor != input.size()) throw domain_error("input bit vector too long");
    if (rnd_cursor != randomness.size()) throw domain_error("randomness bit vector too long");

    std::vector<uint8_t> next = state;
    for (const auto& layer : circuit.layers) {
        for (const CircuitGate& gate : layer) {
            if (gate.kind == GateKind::Nand) {
                uint8_t a = state[size_t(gate.wires[0])];
                uint8_t b = state[size_t(gate.wires[1])];
                next[size_t(gate.wires[0])] = uint8_t(1 - (a & b));
            } else {
                uint8_t a = state[size_t(gate.wires[0])];
                uint8_t b = state[size_t(gate.wires[1])];
                next[size_t(gate.wires[2])] = uint8_t(state[size_t(gate.wires[2])] ^ (a & b));
            }
        }
        state = next;
    }
    return state;
}

namespace {

struct LayerBuilder {
    std::map<int, int> reads;
    std::map<int, int> writes;
    std::map<int, int> touches;  // Toffoli occupancy

    bool nand_ok(int w0, int w1, int64_t fanout_cap) const {
        if (writes.count(w0)) return false;
        auto r0 = reads.find(w0);
        auto r1 = reads.find(w1);
        if (r0 != reads.end() && r0->second >= fanout_cap) return false;
        if (r1 != reads.end() && r1->second >= fanout_cap) return false;
        return true;
    }

    void take_nand(int w0, int w1) {
        writes[w0] += 1;
        reads[w0] += 1;
        reads[w1] += 1;
    }

    bool toffoli_ok(int a, int b, int c) const {
        return !touches.count(a) && !touches.count(b) && !touches.count(c);
    }

    void take_toffoli(int a, int b, int c) {
        touches[a] += 1;
        touches[b] += 1;
        touches[c] += 1;
    }
};

}  // namespace

LayeredCircuit random_circuit(const InputGeometry& geometry, int depth, GateKind kind,
                              uint64_t seed, const RandomCircuitOptions& options) {
    if (depth < 1) throw domain_error("circuit depth must be positive");
    LayeredCircuit c;
    c.dimension = geometry.dimension;
    c.radius = 1;

    // Input wires, in site order.
    std::vector<int64_t> site_of_wire;
    for (int64_t s = 0; s < geometry.site_count(); ++s) {
        for (int b = 0; b < geometry.bits_per_site; ++b) {
            c.wire_coords.push_back(geometry.site_coords[size_t(s)]);
            c.roles.push_back(WireRole::Input);
            site_of_wire.push_back(s);
        }
    }
    // Shared-randomness wires on the flanks, away from the cut.
    auto flank_coord = [&](bool x_side, int j) {
        std::vector<int> coord;
        if (geometry.dimension == 1) {
            coord = {x_side ? -1 - j : int(4 * geometry.n) + j};
        } else {
            int64_t pairs = geometry.cut_pair_count();
            int64_t last_slab = (geometry.n - 1) / pairs;
            int axis = geometry.dimension - 1;
            // One slab beyond the block, snaking along the cross-section.
            coord = geometry.site_coords[size_t(j % pairs)];
            int64_t slab = last_slab + 1 + j / pairs;
            coord[size_t(axis)] = x_side ? int(slab) : int(-1 - slab);
        }
        return coord;
    };
    for (int j = 0; j < options.randomness_wires; ++j) {
        c.wire_coords.push_back(flank_coord(true, j));
        c.roles.push_back(WireRole::Random);
        site_of_wire.push_back(-1);
        c.wire_coords.push_back(flank_coord(false, j));
        c.roles.push_back(WireRole::Random);
        site_of_wire.push_back(-1);
    }

    int64_t wires = c.wire_count();
    int64_t fanout_cap = ipow(3, c.dimension);
    // Same-region wires within Chebyshev distance 1, via a coordinate index.
    // Cut-crossing windows are reserved for the declared pairs.
    std::map<std::vector<int>, std::vector<int>> at_coord;
    for (int64_t w = 0; w < wires; ++w) at_coord[c.wire_coords[size_t(w)]].push_back(int(w));
    std::vector<std::vector<int>> neighbors(static_cast<size_t>(wires));
    std::vector<int> offsets(static_cast<size_t>(c.dimension), -1);
    for (int64_t v = 0; v < wires; ++v) {
        bool v_upper = geometry.upper_side(c.wire_coords[size_t(v)]);
        std::fill(offsets.begin(), offsets.end(), -1);
        for (;;) {
            std::vector<int> coord = c.wire_coords[size_t(v)];
            for (int a = 0; a < c.dimension; ++a) coord[size_t(a)] += offsets[size_t(a)];
            auto it = at_coord.find(coord);
            if (it != at_coord.end() && geometry.upper_side(coord) == v_upper) {
                for (int w : it->second) {
                    if (w != int(v)) neighbors[size_t(v)].push_back(w);
                }
            }
            int a = 0;
            while (a < c.dimension && offsets[size_t(a)] == 1) offsets[size_t(a++)] = -1;
            if (a == c.dimension) break;
            ++offsets[size_t(a)];
        }
        std::sort(neighbors[size_t(v)].begin(), neighbors[size_t(v)].end());
    }

    CounterRng master(seed);
    for (int t = 0; t < depth; ++t) {
        CounterRng rng = master.stream(uint64_t(t));
        LayerBuilder used;
        std::vector<CircuitGate> layer;

        // Cut-crossing gates: at most one per declared pair, windows confined
        // to the pair (plus, in 1D, one outer neighbor of the pair), so the
        // per-layer crossing cost stays <= 2 bits per pair.
        for (size_t pi = 0; pi < geometry.cross_pairs.size(); ++pi) {
            if (!rng.coin(options.straddle_prob)) continue;
            auto [sx, sy] = geometry.cross_pairs[pi];
            if (kind == GateKind::Nand) {
                int a = int(sx * geometry.bits_per_site) +
                        int(rng.bounded(uint64_t(geometry.bits_per_site)));
                int b = int(sy * geometry.bits_per_site) +
                        int(rng.bounded(uint64_t(geometry.bits_per_site)));
                if (rng.coin(0.5)) std::swap(a, b);
                if (used.nand_ok(a, b, fanout_cap)) {
                    used.take_nand(a, b);
                    layer.push_back({GateKind::Nand, {a, b, -1}});
                }
            } else if (geometry.bits_per_site == 1) {
                // 1D: contiguous window around the pair; the pair wire on the
                // chosen side anchors the gate.
                int wx = int(sx);
                int wy = int(sy);
                bool left_window = rng.coin(0.5);
                int outer = left_window ? wx - 1 : wy + 1;
                if (outer < 0 || outer >= wires || site_of_wire[size_t(outer)] < 0) continue;
                int anchor = left_window ? wx : wy;
                std::array<int, 2> rest{left_window ? wy : wx, outer};
                if (rng.coin(0.5)) std::swap(rest[0], rest[1]);
                std::array<int, 3> tri{anchor, rest[0], rest[1]};
                if (used.toffoli_ok(tri[0], tri[1], tri[2])) {
                    used.take_toffoli(tri[0], tri[1], tri[2]);
                    layer.push_back({GateKind::Toffoli, tri});
                }
            } else {
                // Grid: three of the pair's four wires, keeping both sides.
                std::array<int, 4> pool{int(sx * 2), int(sx * 2 + 1), int(sy * 2),
                                        int(sy * 2 + 1)};
                int drop = int(rng.bounded(4));
                std::array<int, 3> tri{};
                int k = 0;
                for (int j = 0; j < 4; ++j) {
                    if (j != drop) tri[size_t(k++)] = pool[size_t(j)];
                }
                int target = int(rng.bounded(3));
                std::swap(tri[size_t(target)], tri[2]);
                if (used.toffoli_ok(tri[0], tri[1], tri[2])) {
                    used.take_toffoli(tri[0], tri[1], tri[2]);
                    layer.push_back({GateKind::Toffoli, tri});
                }
            }
        }

        // Region-internal gates, anchors visited in seeded random order.
        std::vector<int> order(static_cast<size_t>(wires));
        for (int64_t w = 0; w < wires; ++w) order[size_t(w)] = int(w);
        for (int64_t i = wires - 1; i > 0; --i) {
            std::swap(order[size_t(i)], order[size_t(rng.bounded(uint64_t(i + 1)))]);
        }
        for (int anchor : order) {
            if (!rng.coin(options.density)) continue;
            const auto& nbrs = neighbors[size_t(anchor)];
            if (nbrs.empty()) continue;
            if (kind == GateKind::Nand) {
                int partner = nbrs[size_t(rng.bounded(nbrs.size()))];
                if (used.nand_ok(anchor, partner, fanout_cap)) {
                    used.take_nand(anchor, partner);
                    layer.push_back({GateKind::Nand, {anchor, partner, -1}});
                }
            } else {
                if (nbrs.size() < 2) continue;
                int b = nbrs[size_t(rng.bounded(nbrs.size()))];
                int cwire = nbrs[size_t(rng.bounded(nbrs.size()))];
                if (b == cwire) continue;
                // The first wire anchors the validator's ball test, so it
                // must sit within the radius of both others.
                auto covers = [&](const std::array<int, 3>& w) {
                    return chebyshev(c.wire_coords[size_t(w[0])], c.wire_coords[size_t(w[1])]) <=
                               c.radius &&
                           chebyshev(c.wire_coords[size_t(w[0])], c.wire_coords[size_t(w[2])]) <=
                               c.radius;
                };
                std::array<int, 3> w{anchor, b, cwire};
                int target = int(rng.bounded(3));
                std::swap(w[size_t(target)], w[2]);
                if (rng.coin(0.5)) std::swap(w[0], w[1]);
                if (!covers(w)) std::swap(w[0], w[1]);
                if (!covers(w)) w = {anchor, b, cwire};  // anchor always covers
                if (used.toffoli_ok(w[0], w[1], w[2])) {
                    used.take_toffoli(w[0], w[1], w[2]);
                    layer.push_back({GateKind::Toffoli, w});
                }
            }
        }
        c.layers.push_back(std::move(layer));
    }
    return c;
}

namespace {

void check_nand_source(const LayeredCircuit& circuit) {
    if (circuit.dimension != 1) {
        throw domain_error("the NAND-to-Toffoli pass handles 1D circuits");
    }
    if (!circuit.all_gates_are(GateKind::Nand)) {
        throw domain_error("source circuit must contain only NAND gates");
    }
    GeometryReport report = validate_geometry(circuit);
    if (!report.ok()) {
        throw domain_error("source circuit fails geometry validation: " +
                           report.violations.front().reason);
    }
}

}  // namespace

TranspileResult nand_to_toffoli(const LayeredCircuit& source) {
    check_nand_source(source);
    TranspileResult out;
    LayeredCircuit& t = out.circuit;
    t.dimension = source.dimension;
    t.radius = source.radius;
    t.wire_coords = source.wire_coords;
    t.roles = source.roles;
    out.source_wire_location.resize(size_t(source.wire_count()));
    for (int64_t w = 0; w < source.wire_count(); ++w) {
        out.source_wire_location[size_t(w)] = int(w);
    }

    for (const auto& layer : source.layers) {
        // Bucket by output position mod 3: gates of one bucket write wires at
        // least 3 apart, so their radius-1 windows cannot overlap.
        std::array<std::vector<const CircuitGate*>, 3> buckets;
        for (const CircuitGate& gate : layer) {
            int pos = source.wire_coords[size_t(gate.wires[0])][0];
            int residue = ((pos % 3) + 3) % 3;
            buckets[size_t(residue)].push_back(&gate);
        }
        // Reads inside one source layer must see pre-layer locations.
        std::vector<std::pair<int, int>> relocations;
        for (const auto& bucket : buckets) {
            if (bucket.empty()) continue;
            std::vector<CircuitGate> tlayer;
            for (const CircuitGate* gate : bucket) {
                int w0 = gate->wires[0];
                int w1 = gate->wires[1];
                int fresh = int(t.wire_count());
                t.wire_coords.push_back(source.wire_coords[size_t(w0)]);
                t.roles.push_back(WireRole::ConstOne);
                tlayer.push_back({GateKind::Toffoli,
                                  {out.source_wire_location[size_t(w0)],
                                   out.source_wire_location[size_t(w1)], fresh}});
                relocations.push_back({w0, fresh});
            }
            t.layers.push_back(std::move(tlayer));
        }
        for (auto [w, loc] : relocations) out.source_wire_location[size_t(w)] = loc;
    }
    return out;
}

std::vector<uint8_t> evaluate_transpiled(const TranspileResult& transpiled,
                                         const std::vector<uint8_t>& input,
                                         const std::vector<uint8_t>& randomness) {
    std::vector<uint8_t> full = evaluate(transpiled.circuit, input, randomness);
    std::vector<uint8_t> out(transpiled.source_wire_location.size());
    for (size_t w = 0; w < out.size(); ++w) {
        out[w] = full[size_t(transpiled.source_wire_location[w])];
    }
    return out;
}

}  // namespace glsim
