#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "glsim/rng.hpp"

namespace glsim {

// Per-gate fault model: after every applied gate, with probability epsilon a
// uniformly random non-identity Pauli hits the gate's support qubits.
struct NoiseModel {
    double epsilon = 0.0;
    bool noisy_resource_prep = false;
    bool noisy_swap_network = true;

    NoiseModel() = default;
    explicit NoiseModel(double eps) : epsilon(eps) {}
};

enum class Gate : uint8_t { I, X, Y, Z, H, S, CNOT, CZ, SWAP };

inline int gate_arity(Gate g) {
    return (g == Gate::CNOT || g == Gate::CZ || g == Gate::SWAP) ? 2 : 1;
}

// Dense amplitude vector over a small register. Qubit 0 is the least
// significant index bit. Gates renormalize nothing: the squared norm must
// stay within 1e-10 of 1, checked after every application.
class StateVector {
  public:
    static constexpr int kMaxQubits = 8;

    explicit StateVector(int qubit_count);

    int qubit_count() const { return qubits_; }
    size_t dimension() const { return amps_.size(); }
    const std::complex<double>& amplitude(size_t basis) const { return amps_[basis]; }
    double norm_squared() const;

    void apply(Gate g, int q);
    void apply(Gate g, int q0, int q1);
    // Pauli index 0..3 = I,X,Y,Z.
    void apply_pauli(int pauli, int q);

    // With probability noise.epsilon, applies a uniform non-identity Pauli on
    // the listed support qubits.
    void depolarize(const std::vector<int>& support, const NoiseModel& noise, CounterRng& rng);

    // Computational-basis measurement with collapse; returns the bit.
    int measure(int q, CounterRng& rng);

  private:
    void check_norm() const;
    void check_qubit(int q) const;

    int qubits_;
    std::vector<std::complex<double>> amps_;
};

// Applies the gate and then its depolarizing fault, per the noise model.
void apply_gate(StateVector& state, Gate g, const std::vector<int>& targets,
                const NoiseModel& noise, CounterRng& rng);

}  // namespace glsim
