#include "glsim/statevector.hpp"

#include <cmath>

#include "glsim/errors.hpp"

namespace glsim {

namespace {
constexpr double kNormTolerance = 1e-10;
constexpr double kInvSqrt2 = 0.7071067811865476;
}  // namespace

StateVector::StateVector(int qubit_count) : qubits_(qubit_count) {
    if (qubit_count < 1 || qubit_count > kMaxQubits) {
        throw domain_error("qubit count out of range (1.." + std::to_string(kMaxQubits) + ")");
    }
    amps_.assign(size_t(1) << qubit_count, {0.0, 0.0});
    amps_[0] = {1.0, 0.0};
}

double StateVector::norm_squared() const {
    double n = 0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
}

void StateVector::check_norm() const {
    double n = norm_squared();
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw std::logic_error("state norm drifted to " + std::to_string(n));
    }
}

void StateVector::check_qubit(int q) const {
    if (q < 0 || q >= qubits_) throw domain_error("gate target out of range");
}

void StateVector::apply(Gate g, int q) {
    check_qubit(q);
    if (gate_arity(g) != 1) throw domain_error("two-qubit gate needs two targets");
    const size_t bit = size_t(1) << q;
    const size_t dim = amps_.size();
    switch (g) {
        case Gate::I:
            return;
        case Gate::X:
            for (size_t i = 0; i < dim; ++i) {
                if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
            }
            break;
        case Gate::Y:
            for (size_t i = 0; i < dim; ++i) {
                if (!(i & bit)) {
                    auto a0 = amps_[i];
                    auto a1 = amps_[i | bit];
                    amps_[i] = std::complex<double>(0, -1) * a1;
                    amps_[i | bit] = std::complex<double>(0, 1) * a0;
                }
            }
            break;
        case Gate::Z:
            for (size_t i = 0; i < dim; ++i) {
                if (i & bit) amps_[i] = -amps_[i];
            }
            break;
        case Gate::S:
            for (size_t i = 0; i < dim; ++i) {
                if (i & bit) amps_[i] *= std::complex<double>(0, 1);
            }
            break;
        case Gate::H:
            for (size_t i = 0; i < dim; ++i) {
                if (!(i & bit)) {
                    auto a0 = amps_[i];
                    auto a1 = amps_[i | bit];
                    amps_[i] = kInvSqrt2 * (a0 + a1);
                    amps_[i | bit] = kInvSqrt2 * (a0 - a1);
                }
            }
            break;
        default:
            throw domain_error("unhandled single-qubit gate");
    }
    check_norm();
}

void StateVector::apply(Gate g, int q0, int q1) {
    check_qubit(q0);
    check_qubit(q1);
    if (q0 == q1) throw domain_error("gate targets must be distinct");
    if (gate_arity(g) != 2) throw domain_error("single-qubit gate takes one target");
    const size_t b0 = size_t(1) << q0;
    const size_t b1 = size_t(1) << q1;
    const size_t dim = amps_.size();
    switch (g) {
        case Gate::CNOT:  // control q0, target q1
            for (size_t i = 0; i < dim; ++i) {
                if ((i & b0) && !(i & b1)) std::swap(amps_[i], amps_[i | b1]);
            }
            break;
        case Gate::CZ:
            for (size_t i = 0; i < dim; ++i) {
                if ((i & b0) && (i & b1)) amps_[i] = -amps_[i];
            }
            break;
        case Gate::SWAP:
            for (size_t i = 0; i < dim; ++i) {
                if ((i & b0) && !(i & b1)) std::swap(amps_[i], amps_[(i & ~b0) | b1]);
            }
            break;
        default:
            throw domain_error("unhandled two-qubit gate");
    }
    check_norm();
}

void StateVector::apply_pauli(int pauli, int q) {
    switch (pauli & 3) {
        case 0:
            return;
        case 1:
            apply(Gate::X, q);
            return;
        case 2:
            apply(Gate::Y, q);
            return;
        case 3:
            apply(Gate::Z, q);
            return;
    }
}

void StateVector::depolarize(const std::vector<int>& support, const NoiseModel& noise,
                             CounterRng& rng) {
    if (noise.epsilon <= 0.0) return;
    if (!rng.coin(noise.epsilon)) return;
    // Uniform non-identity Pauli over the support.
    uint64_t options = 1;
    for (size_t i = 0; i < support.size(); ++i) options *= 4;
    uint64_t pick = 1 + rng.bounded(options - 1);
    for (int q : support) {
        apply_pauli(int(pick & 3), q);
        pick >>= 2;
    }
}

int StateVector::measure(int q, CounterRng& rng) {
    check_qubit(q);
    const size_t bit = size_t(1) << q;
    double p1 = 0;
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) p1 += std::norm(amps_[i]);
    }
    int outcome = rng.uniform01() < p1 ? 1 : 0;
    double keep = outcome ? p1 : 1.0 - p1;
    double scale = keep > 0 ? 1.0 / std::sqrt(keep) : 0.0;
    for (size_t i = 0; i < amps_.size(); ++i) {
        bool is_one = (i & bit) != 0;
        if (is_one == (outcome == 1)) {
            amps_[i] *= scale;
        } else {
            amps_[i] = {0.0, 0.0};
        }
    }
    check_norm();
    return outcome;
}

void apply_gate(StateVector& state, Gate g, const std::vector<int>& targets,
                const NoiseModel& noise, CounterRng& rng) {
    if (targets.size() != size_t(gate_arity(g))) {
        throw domain_error("wrong target count for gate");
    }
    if (targets.size() == 1) {
        state.apply(g, targets[0]);
    } else {
        state.apply(g, targets[0], targets[1]);
    }
    state.depolarize(targets, noise, rng);
}

}  // namespace glsim
