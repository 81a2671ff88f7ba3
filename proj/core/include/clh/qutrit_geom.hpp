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
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "clh/model.hpp"
#include "clh/structure.hpp"
#include "json.hpp"

namespace clh {

using Rational = boost::multiprecision::cpp_rational;

struct Point {
    Rational x, y;
};

struct Face {
    int id = 0;
    std::vector<int> cycle;  // counterclockwise for finite faces
    bool op = false;
    std::vector<int> terms;  // term ids mapped to this face
};

struct PlanarEmbedding {
    std::vector<Point> vertices;  // vertex id = particle id
    std::vector<Face> faces;
    int infinite_face = 0;

    std::vector<std::array<int, 2>> edges() const;  // sorted pairs, ascending
};

// Checks straightness and planarity exactly, orients finite faces
// counterclockwise, and labels faces op/noop from the instance terms.
PlanarEmbedding build_embedding(const Instance& inst, const std::vector<Point>& coords,
                                const std::vector<std::vector<int>>& faces, int infinite_face);

// Exact barycentric (Tutte) coordinates for a 3-connected planar
// triangulation: the outer face is pinned to a triangle.
std::vector<Point> tutte_coordinates(int num_vertices, const std::vector<std::vector<int>>& faces, int outer_face);

// Adjacency lists over faces (simple graph, sorted).
std::vector<std::vector<int>> dual_graph(const PlanarEmbedding& emb);

// Dual-graph BFS distances from `sources` (faces). Unreachable = -1.
std::vector<int> dual_distances(const PlanarEmbedding& emb, const std::vector<int>& sources);

struct Tessellation {
    std::vector<int> faces;     // op face ids, ascending
    std::vector<int> boundary;  // counterclockwise cycle of external vertices
    int boundary_edges = 0;     // a-hat
};

// Tessellation induced by a set of finite faces. Throws when the union is
// not a triangulated polygon (one simple boundary cycle).
Tessellation tessellation_of(const PlanarEmbedding& emb, std::vector<int> faces);

struct TessellateStep {
    int vertex = -1;             // v_i closed at this step (-1 for T_1)
    std::vector<int> added;      // faces appended
    int boundary_edges = 0;      // a-hat_i
    int num_faces = 0;
};

struct TessellationTrace {
    std::vector<TessellateStep> steps;
    bool failed = false;
    int failing_vertex = -1;
    std::string failure;
    int premise_distance = -1;  // dual distance from w to the nearest noop face
    int max_boundary_edges() const;
};

struct TessellateOptions {
    bool check_premise = true;  // error out when a noop face lies within eta
    bool until_failure = false;  // ignore eta/5 and run until a step fails or T is exhausted
};

TessellationTrace tessellate(const PlanarEmbedding& emb, int w, int eta, const TessellateOptions& opt = {});

struct EulerStats {
    int64_t V = 0, E = 0, F = 0;
    Rational a, b, chi;
    Rational lhs, rhs;  // (a-2)(b-2) and 4(1-2/F)(1-2/V)
    bool identity_holds() const { return lhs == rhs; }
};

// Triangles of a connected triangulated polygon; the infinite face is
// counted once. With closed = true the list already covers the sphere.
EulerStats euler_stats(const std::vector<std::array<int, 3>>& triangles, bool closed = false);
EulerStats euler_stats(const PlanarEmbedding& emb, const Tessellation& t);

// Random triangulated polygon grown by gluing ears and new vertices.
std::vector<std::array<int, 3>> random_triangulated_polygon(int faces, uint64_t seed);

struct DegreeAudit {
    std::vector<int> high_degree;  // vertices of degree >= 6
    std::vector<int> long_paths;   // particles with an open operator path of length >= 5
    int max_degree = 0;
};

DegreeAudit degree_audit(const Instance& inst);

struct HoleAudit {
    std::vector<int> distance;  // per face; -1 for noop faces
    std::vector<int> violations;  // op faces farther than eta
    int max_distance = 0;
};

HoleAudit hole_density_audit(const PlanarEmbedding& emb, int eta);

// Runs the separability elimination on an instance of qutrits and qubits.
// A separable qutrit is restricted to a block of dimension at most 2, which
// the loop then tests again as a qubit.
EliminationResult eliminate_separable_qutrits(const Instance& inst, const BlockChooser& chooser);

nlohmann::json embedding_to_json(const PlanarEmbedding& emb);
PlanarEmbedding embedding_from_json(const Instance& inst, const nlohmann::json& j);
std::string rational_string(const Rational& r);
std::string embedding_svg(const PlanarEmbedding& emb);

// Measured quality helpers (no certification).
double min_angle_degrees(const PlanarEmbedding& emb);
double edge_length_ratio(const PlanarEmbedding& emb);

}  // namespace clh
