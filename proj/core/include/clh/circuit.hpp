// Copyright 2026 The clh-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clh/witness.hpp"
#include "json.hpp"

namespace clh {

// An isometry from the tensor product of its input wires to that of its
// output wires; gates without inputs prepare states.
struct Gate {
    std::vector<int> inputs;   // column factors, first slowest
    std::vector<int> outputs;  // row factors, first slowest
    Mat matrix;
    int ancillas = 0;  // qubits needed to realize the isometry as a unitary
};

// Wires 0 .. num_physical-1 are the particles of the instance. The circuit
// maps the computational basis of the input wires to common eigenvectors of
// every term.
struct Circuit {
    int num_physical = 0;
    std::map<int, int> wire_dims;
    std::vector<int> inputs;
    std::vector<std::vector<Gate>> layers;
};

struct CircuitOptions {
    int64_t gate_cap = 256;
    uint64_t seed = 1;
};

Circuit emit_circuit(const Instance& inst, const Clh2Witness& w, const CircuitOptions& opt = {});
Circuit emit_circuit(const Instance& inst, const Clh32Witness& w, const CircuitOptions& opt = {});

struct CircuitCheck {
    bool ok = false;
    std::string reason;
    int layers = 0;
    int64_t max_gate_dim = 0;
    double residual = 0;         // worst eigenvector residual over terms and columns
    int64_t columns = 0;
    int64_t ground_columns = 0;  // columns annihilated by every term
};

CircuitCheck verify_circuit(const Instance& inst, const Circuit& c, double tol = 1e-8,
                            int64_t dense_cap = int64_t{1} << 12, int64_t gate_cap = 256);

nlohmann::json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

}  // namespace clh
