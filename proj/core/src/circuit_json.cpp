#include "glsim/circuit_json.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "glsim/errors.hpp"

namespace glsim {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string circuit_to_json(const LayeredCircuit& circuit) {
    ordered_json j;
    j["dimension"] = circuit.dimension;
    if (circuit.radius != 1) j["radius"] = circuit.radius;
    j["wires"] = ordered_json::array();
    for (const auto& coord : circuit.wire_coords) j["wires"].push_back(coord);
    j["layers"] = ordered_json::array();
    for (const auto& layer : circuit.layers) {
        ordered_json jl = ordered_json::array();
        for (const CircuitGate& gate : layer) {
            ordered_json jg;
            jg["kind"] = gate.kind == GateKind::Nand ? "nand" : "toffoli";
            std::vector<int> wires(gate.wires.begin(), gate.wires.begin() + gate.arity());
            jg["wires"] = wires;
            jl.push_back(std::move(jg));
        }
        j["layers"].push_back(std::move(jl));
    }
    j["randomness_wires"] = circuit.randomness_wires();
    ordered_json consts = ordered_json::array();
    for (int64_t w = 0; w < circuit.wire_count(); ++w) {
        if (circuit.roles[size_t(w)] == WireRole::ConstZero) {
            consts.push_back(ordered_json::array({w, 0}));
        } else if (circuit.roles[size_t(w)] == WireRole::ConstOne) {
            consts.push_back(ordered_json::array({w, 1}));
        }
    }
    if (!consts.empty()) j["constant_wires"] = std::move(consts);
    return j.dump(2) + "\n";
}

LayeredCircuit circuit_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw domain_error(std::string("circuit JSON parse failure: ") + e.what());
    }
    LayeredCircuit c;
    try {
        c.dimension = j.at("dimension").get<int>();
        c.radius = j.value("radius", 1);
        for (const auto& coord : j.at("wires")) {
            c.wire_coords.push_back(coord.get<std::vector<int>>());
        }
        c.roles.assign(c.wire_coords.size(), WireRole::Input);
        for (const auto& layer : j.at("layers")) {
            std::vector<CircuitGate> gates;
            for (const auto& jg : layer) {
                CircuitGate g;
                std::string kind = jg.at("kind").get<std::string>();
                if (kind == "nand") {
                    g.kind = GateKind::Nand;
                } else if (kind == "toffoli") {
                    g.kind = GateKind::Toffoli;
                } else {
                    throw domain_error("unknown gate kind: " + kind);
                }
                auto wires = jg.at("wires").get<std::vector<int>>();
                if (int(wires.size()) != g.arity()) {
                    throw domain_error("gate wire count does not match kind");
                }
                for (size_t k = 0; k < wires.size(); ++k) g.wires[k] = wires[k];
                gates.push_back(g);
            }
            c.layers.push_back(std::move(gates));
        }
        for (const auto& w : j.at("randomness_wires")) {
            int idx = w.get<int>();
            if (idx < 0 || idx >= c.wire_count()) throw domain_error("randomness wire out of range");
            c.roles[size_t(idx)] = WireRole::Random;
        }
        if (j.contains("constant_wires")) {
            for (const auto& entry : j["constant_wires"]) {
                int idx = entry.at(0).get<int>();
                int value = entry.at(1).get<int>();
                if (idx < 0 || idx >= c.wire_count()) throw domain_error("constant wire out of range");
                c.roles[size_t(idx)] = value ? WireRole::ConstOne : WireRole::ConstZero;
            }
        }
    } catch (const ordered_json::exception& e) {
        throw domain_error(std::string("circuit JSON structure: ") + e.what());
    }
    return c;
}

LayeredCircuit load_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open circuit file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return circuit_from_json(buf.str());
}

void save_circuit_file(const std::string& path, const LayeredCircuit& circuit) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write circuit file: " + path);
    out << circuit_to_json(circuit);
}

}  // namespace glsim
