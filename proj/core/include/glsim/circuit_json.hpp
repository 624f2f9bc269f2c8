#pragma once

#include <string>

#include "glsim/circuit.hpp"

namespace glsim {

// Circuit JSON schema:
//   {
//     "dimension": D,
//     "wires": [[coords]...],
//     "layers": [[{"kind": "nand"|"toffoli", "wires": [i,j(,k)]}...]...],
//     "randomness_wires": [...]
//   }
// plus optional keys "radius" (default 1) and "constant_wires" ([[wire,
// value]...]) for circuits with fixed ancilla inputs. Serialization is
// canonical: parse(serialize(c)) == c and serialize(parse(s)) == s for
// canonical s.
std::string circuit_to_json(const LayeredCircuit& circuit);
LayeredCircuit circuit_from_json(const std::string& text);

LayeredCircuit load_circuit_file(const std::string& path);
void save_circuit_file(const std::string& path, const LayeredCircuit& circuit);

}  // namespace glsim
