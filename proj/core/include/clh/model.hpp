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

#include <optional>
#include <string>
#include <vector>

#include "clh/tensor_core.hpp"
#include "json.hpp"

namespace clh {

struct LocalTerm {
    int id = 0;
    std::vector<int> support;  // ascending particle ids
    Mat matrix;                // factor order = support order
};

// A commuting local Hamiltonian instance. Particles of dimension 1 only
// appear after restriction; files always carry dims >= 2.
struct Instance {
    Dims dims;
    std::vector<std::string> labels;
    std::vector<LocalTerm> terms;
    int k = 3;
    double tol = kDefaultTol;

    int num_particles() const { return static_cast<int>(dims.size()); }
    int max_support() const;
    int max_dim() const;
    // Indices (positions in `terms`) of the terms whose support contains p.
    std::vector<int> terms_on(int p) const;
    // True when some term is the empty-support contradiction marker.
    bool has_contradiction() const;
};

struct Violation {
    std::string kind;  // "projector", "hermitian", "commutation", "locality", "support", "dims"
    std::vector<int> term_ids;
    double norm = 0;
    std::string message;
};

std::vector<Violation> validate(const Instance& inst);

// Frobenius norm of [A, B] after embedding both terms on the union of their
// supports. Zero for disjoint supports.
double commutator_norm(const Instance& inst, const LocalTerm& a, const LocalTerm& b);

// Term matrix lifted onto `target` (ascending particle ids).
Mat embed_term(const Instance& inst, const LocalTerm& t, const std::vector<int>& target);

// Sorted union of the supports.
std::vector<int> support_union(const std::vector<int>& a, const std::vector<int>& b);

// True when the term acts as a scalar on the support slot `pos`.
bool acts_trivially_on(const Mat& M, const Dims& factor_dims, int pos, double tol);

struct NormalizeResult {
    Instance instance;
    // remap[old particle] = new particle, or -1 when removed. Identity when
    // compact is false.
    std::vector<int> remap;
    bool unsatisfiable = false;
};

// Drops particles a term acts trivially on, deletes zero terms and turns
// identity terms into the contradiction marker. With compact = true,
// particles of dimension 1 are removed and the rest renumbered.
NormalizeResult normalize(const Instance& inst, bool compact = true);

// Conjugate every term touching `particle` by the injection whose columns are
// `basis` (dim x m, orthonormal). The particle's dimension becomes m. The
// result is normalized without compaction so particle ids stay stable.
Instance restrict_particle(const Instance& inst, int particle, const Mat& basis);

// Terms listed by position, restricted to `particles` (ascending), which are
// renumbered 0.. in order. Every listed term must be supported inside.
Instance sub_instance(const Instance& inst, const std::vector<int>& particles,
                      const std::vector<int>& term_indices);

// Connected components of the particle graph (two particles are linked when
// a term acts on both). Untouched particles form singletons. Each component
// is ascending; components are ordered by their smallest particle.
std::vector<std::vector<int>> particle_components(const Instance& inst);

// Projector onto the range of a positive semidefinite matrix.
Mat support_projector(const Mat& psd, double tol = kDefaultTol);

nlohmann::json matrix_to_json(const Mat& M);
Mat matrix_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace clh
