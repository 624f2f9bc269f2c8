#include "glsim/magic_square.hpp"

#include <stdexcept>

#include "glsim/errors.hpp"
#include "glsim/parallel.hpp"

namespace glsim {

PauliString PauliString::from_label(const std::string& label, int sign) {
    PauliString p;
    for (size_t q = 0; q < label.size(); ++q) {
        switch (label[q]) {
            case 'I':
                break;
            case 'X':
                p.x |= 1u << q;
                break;
            case 'Z':
                p.z |= 1u << q;
                break;
            case 'Y':
                p.x |= 1u << q;
                p.z |= 1u << q;
                p.phase = (p.phase + 1) & 3;
                break;
            default:
                throw domain_error("bad Pauli label: " + label);
        }
    }
    if (sign == -1) p.phase = (p.phase + 2) & 3;
    return p;
}

PauliString PauliString::operator*(const PauliString& other) const {
    PauliString out;
    // X^x1 Z^z1 * X^x2 Z^z2 = (-1)^|z1 & x2| X^(x1^x2) Z^(z1^z2)
    int anti = 0;
    uint32_t overlap = z & other.x;
    while (overlap) {
        anti ^= overlap & 1;
        overlap >>= 1;
    }
    out.phase = (phase + other.phase + (anti ? 2 : 0)) & 3;
    out.x = x ^ other.x;
    out.z = z ^ other.z;
    return out;
}

int PauliString::identity_sign() const {
    if (!is_identity_up_to_sign()) throw std::logic_error("not proportional to identity");
    if (phase == 0) return 1;
    if (phase == 2) return -1;
    throw std::logic_error("identity with imaginary phase");
}

PauliString ObservableGrid::row_product(int r) const {
    PauliString p = PauliString::identity();
    for (int c = 0; c < 3; ++c) {
        p = p * PauliString::from_label(cells[size_t(r)][size_t(c)].label,
                                        cells[size_t(r)][size_t(c)].sign);
    }
    return p;
}

PauliString ObservableGrid::column_product(int c) const {
    PauliString p = PauliString::identity();
    for (int r = 0; r < 3; ++r) {
        p = p * PauliString::from_label(cells[size_t(r)][size_t(c)].label,
                                        cells[size_t(r)][size_t(c)].sign);
    }
    return p;
}

void ObservableGrid::verify() const {
    for (int r = 0; r < 3; ++r) {
        if (row_product(r).identity_sign() != 1) {
            throw std::logic_error("row " + std::to_string(r) + " does not multiply to +I");
        }
    }
    for (int c = 0; c < 3; ++c) {
        if (column_product(c).identity_sign() != -1) {
            throw std::logic_error("column " + std::to_string(c) + " does not multiply to -I");
        }
    }
}

const ObservableGrid& mermin_peres_grid() {
    static const ObservableGrid grid = [] {
        ObservableGrid g;
        g.cells = {{
            {{{"IZ", 1}, {"ZI", 1}, {"ZZ", 1}}},
            {{{"XI", 1}, {"IX", 1}, {"XX", 1}}},
            {{{"XZ", -1}, {"ZX", -1}, {"YY", 1}}},
        }};
        g.verify();
        return g;
    }();
    return grid;
}

namespace {

// Basis-change circuits on a party's two logical qubits, plus the decode of
// the first two observable outcomes from the measured bits (m0, m1) as
// bit = c0*m0 ^ c1*m1 ^ bias. The third outcome is derived from parity.
struct PartyCircuit {
    struct Step {
        Gate gate;
        int q0;
        int q1;  // -1 for single-qubit gates
    };
    std::vector<Step> steps;
    struct Decode {
        int c0, c1, bias;
    };
    std::array<Decode, 2> first_two;
};

const PartyCircuit& alice_circuit(int row) {
    static const std::array<PartyCircuit, 3> table = {{
        // row 0: I@Z, Z@I already diagonal
        {{}, {{{0, 1, 0}, {1, 0, 0}}}},
        // row 1: X@I, I@X -> H on both
        {{{Gate::H, 0, -1}, {Gate::H, 1, -1}}, {{{1, 0, 0}, {0, 1, 0}}}},
        // row 2: -X@Z -> -I@Z, -Z@X -> -Z@I under H0, CNOT01, H0
        {{{Gate::H, 0, -1}, {Gate::CNOT, 0, 1}, {Gate::H, 0, -1}}, {{{0, 1, 1}, {1, 0, 1}}}},
    }};
    return table[size_t(row)];
}

const PartyCircuit& bob_circuit(int column) {
    static const std::array<PartyCircuit, 3> table = {{
        // column 0: I@Z, X@I -> H on first
        {{{Gate::H, 0, -1}}, {{{0, 1, 0}, {1, 0, 0}}}},
        // column 1: Z@I, I@X -> H on second
        {{{Gate::H, 1, -1}}, {{{1, 0, 0}, {0, 1, 0}}}},
        // column 2: Z@Z, X@X -> Bell basis via CNOT01, H0
        {{{Gate::CNOT, 0, 1}, {Gate::H, 0, -1}}, {{{0, 1, 0}, {1, 0, 0}}}},
    }};
    return table[size_t(column)];
}

void run_party(StateVector& state, const PartyCircuit& circuit, const std::array<int, 2>& qubits,
               const NoiseModel& noise, CounterRng& rng, int parity, int* out) {
    for (const auto& step : circuit.steps) {
        if (step.q1 < 0) {
            apply_gate(state, step.gate, {qubits[size_t(step.q0)]}, noise, rng);
        } else {
            apply_gate(state, step.gate, {qubits[size_t(step.q0)], qubits[size_t(step.q1)]}, noise,
                       rng);
        }
    }
    int m0 = state.measure(qubits[0], rng);
    int m1 = state.measure(qubits[1], rng);
    int o0 = (circuit.first_two[0].c0 & m0) ^ (circuit.first_two[0].c1 & m1) ^
             circuit.first_two[0].bias;
    int o1 = (circuit.first_two[1].c0 & m0) ^ (circuit.first_two[1].c1 & m1) ^
             circuit.first_two[1].bias;
    out[0] = o0;
    out[1] = o1;
    out[2] = o0 ^ o1 ^ parity;
}

}  // namespace

StateVector prepare_bell_pairs(const NoiseModel& noise, CounterRng& rng) {
    StateVector state(4);
    NoiseModel prep = noise.noisy_resource_prep ? noise : NoiseModel{};
    apply_gate(state, Gate::H, {0}, prep, rng);
    apply_gate(state, Gate::CNOT, {0, 1}, prep, rng);
    apply_gate(state, Gate::H, {2}, prep, rng);
    apply_gate(state, Gate::CNOT, {2, 3}, prep, rng);
    return state;
}

std::vector<StateVector> prepare_resource(int64_t n, const NoiseModel& noise, uint64_t seed) {
    if (n < 1) throw domain_error("need at least one resource state");
    CounterRng master(seed);
    std::vector<StateVector> states;
    states.reserve(size_t(n));
    for (int64_t i = 0; i < n; ++i) {
        CounterRng rng = master.stream(uint64_t(i));
        states.push_back(prepare_bell_pairs(noise, rng));
    }
    return states;
}

GameAnswers measure_magic_square(const StateVector& resource, int x, int y,
                                 const NoiseModel& noise, CounterRng& rng) {
    if (x < 0 || x > 2 || y < 0 || y > 2) throw domain_error("row/column trit out of range");
    mermin_peres_grid();  // grid identities checked on first use
    StateVector state = resource;
    int abits[3];
    int bbits[3];
    run_party(state, alice_circuit(x), {0, 2}, noise, rng, 0, abits);
    run_party(state, bob_circuit(y), {1, 3}, noise, rng, 1, bbits);
    return GameAnswers{ms_output_index(abits[0], abits[1], abits[2]),
                       ms_output_index(bbits[0], bbits[1], bbits[2])};
}

ParmagicAnswers run_parmagic(const LineInput& inputs, const NoiseModel& noise, uint64_t seed,
                             int workers) {
    auto xs = inputs.x_symbols();
    auto ys = inputs.y_symbols();
    CounterRng master(seed);
    auto answers = parallel_table<GameAnswers>(
        inputs.n,
        [&](int64_t i) {
            CounterRng rng = master.stream(uint64_t(i));
            StateVector resource = prepare_bell_pairs(noise, rng);
            return measure_magic_square(resource, xs[size_t(i)], ys[size_t(i)], noise, rng);
        },
        workers);
    ParmagicAnswers out;
    out.a.resize(size_t(inputs.n));
    out.b.resize(size_t(inputs.n));
    for (int64_t i = 0; i < inputs.n; ++i) {
        out.a[size_t(i)] = answers[size_t(i)].a;
        out.b[size_t(i)] = answers[size_t(i)].b;
    }
    return out;
}

}  // namespace glsim
