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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clh/model.hpp"
#include "clh/qutrit_geom.hpp"
#include "json.hpp"

namespace clh {

struct ToricInstance {
    Instance instance;
    int n = 0;
    // Qubit ids: horizontal edge (x, y) = 2 (y n + x), vertical = 2 (y n + x) + 1.
    std::vector<std::array<int, 4>> vertices;
    std::vector<std::array<int, 4>> plaquettes;
    // pairs[(y n + x)] = {top edge, right edge} of plaquette (x, y).
    std::vector<std::array<int, 2>> pairs;
};

ToricInstance gen_toric(int n);
Instance pair_toric(const ToricInstance& toric);

struct ClassicalConfig {
    int n = 6;
    int m = 6;
    int k = 3;
    int d = 2;
    int rank = 1;  // configurations penalized per term
    bool satisfiable = true;
    bool rotate = true;  // conjugate by a random product unitary
    uint64_t seed = 1;
};

Instance gen_classical(const ClassicalConfig& cfg);

enum class ChainStyle {
    cluster,   // Z X Z stabilizer chain with random signs
    diagonal,  // random diagonal terms in a rotated product basis
    pendants,  // diagonal chain plus pendant qubits touching one window each
};

struct ChainConfig {
    int L = 5;
    ChainStyle style = ChainStyle::cluster;
    int pendants = 0;        // pendants style; cluster style takes up to 2 at the ends
    bool contradiction = false;  // add the complement of one term
    uint64_t seed = 1;
};

// Terms t = 0..L-1 act on backbone qubits (t, t+1, t+2). Pendant qubits, if
// any, follow the L + 2 backbone qubits.
Instance gen_chain(const ChainConfig& cfg);

struct TwoLocalConfig {
    // Edges of the interaction graph on `num_vertices` particles.
    int num_vertices = 4;
    std::vector<std::array<int, 2>> edges{{0, 1}, {0, 2}, {0, 3}};
    int max_blocks = 2;
    bool satisfiable = true;
    uint64_t seed = 1;
};

// Random commuting 2-local instance: every vertex carries a hidden direct sum
// of tensor products with one factor slot per incident edge.
Instance gen_two_local(const TwoLocalConfig& cfg);

// Star with `leaves` leaves around particle 0.
TwoLocalConfig star_config(int leaves, uint64_t seed, bool satisfiable = true);

Instance example_ex1();
// The realization is searched deterministically; `log` receives the record.
Instance example_ex2(std::vector<std::string>* log = nullptr);
Instance qutrit_chain();
// sum_i |i><i| (x) Pi_i on (qutrit, qubit); degenerate sets Pi_0 = Pi_1.
Instance critical_operator(bool degenerate);
// Three qubits; ground states |00>|0> and |00>|1>.
Instance classical_degenerate_control();

std::map<std::string, Instance> gen_named_examples();

// Random configurations for the separability theorems.
// Qubit q = 0 with butterfly-connected terms whose q-parts come from the Z
// and X bases. Returns an empty instance when the draw does not commute.
Instance gen_butterfly_config(uint64_t seed);
// Particle 0 (dim d) with a left-right partition of its terms.
Instance gen_left_right_config(int d, uint64_t seed);
// Qutrit 0 under an open operator path of length 5.
Instance gen_qutrit_fan(uint64_t seed);

struct PlanarFixture {
    Instance instance;
    PlanarEmbedding embedding;
    std::string relaxed;  // constraint relaxed by the generator, if any
};

// Triangulated rows x cols grid of qutrits. noop_pattern: "none", "all",
// "period:p" (every p-th face in both directions is noop), "strip" (alternate
// face rows), "single" (only face 0 is op).
PlanarFixture gen_planar_qutrit(int rows, int cols, const std::string& noop_pattern, uint64_t seed);

// Qutrit cluster strip: terms I - (I + K + K^2)/3 with K = Z X Z on
// consecutive triples, embedded as a zigzag strip of triangles.
PlanarFixture gen_qutrit_cluster_strip(int L, uint64_t seed);

// Closed triangulations drawn with exact Tutte coordinates; face 0 is the
// infinite face and every other face carries a rotated classical qutrit term.
// Names: tetrahedron, octahedron, icosahedron, bipyramid3, bipyramid4,
// bipyramid5.
PlanarFixture gen_polyhedron(const std::string& name, uint64_t seed);

// Qutrit 0 at the hub of `spokes` triangles, all op, classical terms.
PlanarFixture gen_wheel(int spokes, uint64_t seed);

// CLI entry: family name plus JSON parameters.
Instance generate_family(const std::string& family, const nlohmann::json& params, uint64_t seed,
                         PlanarEmbedding* embedding = nullptr);

}  // namespace clh
