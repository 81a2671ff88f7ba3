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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clh/algebra.hpp"
#include "clh/model.hpp"

namespace clh {

struct InteractionGraph {
    int num_vertices = 0;
    std::vector<std::vector<int>> adjacency;  // sorted neighbor lists
    std::vector<std::vector<int>> hyperedges;  // term supports, by term position
    std::vector<std::vector<int>> components;  // particles touched by some term

    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
};

InteractionGraph build_graph(const Instance& inst);

// Ordered term ids. For paths "on" a particle q every term contains q and the
// intersection pattern is counted with q removed.
struct OperatorPath {
    std::vector<int> terms;
    bool closed = false;

    int length() const { return static_cast<int>(terms.size()); }
};

// Checks the 2/1/0 intersection pattern. With on >= 0 the particle `on` must
// lie in every support and is excluded from the counts.
bool is_operator_path(const Instance& inst, const OperatorPath& path, int on = -1);

// Pairs of term ids on the particle whose supports meet exactly in it.
std::vector<std::array<int, 2>> butterflies(const Instance& inst, int particle);

struct ButterflyConnectivity {
    bool connected = true;
    std::vector<std::vector<int>> components;  // term ids
};

ButterflyConnectivity butterfly_connected(const Instance& inst, int particle);

// Split of the terms on the particle into two nonempty sets whose cross
// pairs meet only in the particle. Term ids, each side ascending.
std::optional<std::pair<std::vector<int>, std::vector<int>>> left_right_partition(const Instance& inst,
                                                                                  int particle);

// Triples (H1, H2, H3) of term ids forming a crown on the particle.
std::vector<std::array<int, 3>> find_crowns(const Instance& inst, int particle);

// Open operator paths on the particle, of exactly `length` terms. Each path is
// listed once (the lexicographically smaller orientation).
std::vector<OperatorPath> paths_on(const Instance& inst, int particle, int length);

// Longest open operator path on the particle, searching up to max_length.
OperatorPath longest_path_on(const Instance& inst, int particle, int max_length = 8);

struct ElimStep {
    int particle = 0;
    Mat basis;  // d x m, orthonormal columns
};

// Picks the piece to restrict to. Returning a negative value or one out of
// range is an error.
using BlockChooser = std::function<int(const Instance& current, int particle, const std::vector<Mat>& pieces)>;

struct EliminationResult {
    Instance residual;  // particle ids are kept; eliminated particles have dim 1
    std::vector<ElimStep> log;
};

EliminationResult eliminate_separable(const Instance& inst, const BlockChooser& chooser,
                                      uint64_t seed = kAlgebraSeed);

// Always picks the first piece.
int first_block(const Instance&, int, const std::vector<Mat>&);

struct Backbone {
    OperatorPath path;
    std::vector<int> qubits;  // backbone particles in path order
    bool budget_exhausted = false;
    int64_t nodes = 0;
};

inline constexpr int64_t kDefaultSearchBudget = 10'000'000;

// Longest operator path over the whole instance by depth-first search. Ties
// go to the lexicographically least term-id sequence.
Backbone find_backbone(const Instance& inst, int64_t budget = kDefaultSearchBudget);

// Particles of the path ordered by first appearance, ties by last appearance.
std::vector<int> path_particles(const Instance& inst, const OperatorPath& path);

struct CoarseGraining {
    std::vector<std::vector<int>> Q;
    std::vector<std::vector<int>> V;  // one per window
    bool closed = false;

    int num_windows() const;
    // Q indices of window j (one or two).
    std::vector<int> window_groups(int j) const;
};

struct AlmostOneD {
    bool ok = true;
    int term = -1;  // offending term id
    std::string message;
    std::vector<int> term_window;  // by term position; -1 for terms outside the grouping
};

// Particles of the grouping must be disjoint; every term touching one of them
// must lie inside a single window V_j u Q_j u Q_{j+1}.
AlmostOneD check_almost_1d(const Instance& inst, const CoarseGraining& grouping);

// Groups backbone particles by g (fewer than 3g gives a single group; the
// last group absorbs the remainder) and assigns the other particles of the
// component to windows. The result is checked, and `report` receives the
// verdict; coarse_grain throws InputError when the check fails and `report`
// is null.
CoarseGraining coarse_grain(const Instance& inst, const Backbone& backbone, int g = 20,
                            AlmostOneD* report = nullptr);

// Slicing of Q_i: `block_basis` spans the chosen block of the separating
// decomposition of the left and right algebras, and `isometry` maps
// C^left_dim (x) C^right_dim into it with left terms on the first factor.
struct Slicing {
    int i = 0;
    Mat block_basis;
    int left_dim = 1;
    int right_dim = 1;
    Mat isometry;
};

inline constexpr int64_t kDefaultBlockCap = 256;

// Term positions on the left / right of Q_i.
std::vector<int> left_terms(const Instance& inst, const CoarseGraining& grouping, const AlmostOneD& windows, int i);
std::vector<int> right_terms(const Instance& inst, const CoarseGraining& grouping, const AlmostOneD& windows, int i);

// Chooser receives the group index and the candidate slicings.
using SliceChooser = std::function<int(int i, const std::vector<Slicing>& candidates)>;

std::vector<Slicing> slice_candidates(const Instance& inst, const CoarseGraining& grouping, int i,
                                      int64_t block_cap = kDefaultBlockCap, uint64_t seed = kAlgebraSeed);
Slicing slice_backbone_particle(const Instance& inst, const CoarseGraining& grouping, int i,
                                const SliceChooser& chooser, int64_t block_cap = kDefaultBlockCap,
                                uint64_t seed = kAlgebraSeed);

// Empty when the slicing is valid, otherwise the reason.
std::string check_slicing(const Instance& inst, const CoarseGraining& grouping, const Slicing& s,
                          int64_t block_cap = kDefaultBlockCap, double tol = 1e-7);

// (U^dag (x) I) M (U (x) I) with U acting on the factors `slots`
// (ascending) of factor_dims; the result has those slots merged into one
// factor of dimension U.cols() at the position of the first slot.
Mat conjugate_slots(const Mat& M, const Dims& factor_dims, const std::vector<int>& slots, const Mat& U);

// Where a fused particle came from.
struct FusedOrigin {
    int component = -1;
    int window = -1;    // >= 0: F_window = R_window (x) L_{next}
    int particle = -1;  // otherwise the residual particle id
    int right_dim = 1;  // F split as right_dim x left_dim
    int left_dim = 1;
};

struct FusedInstance {
    Instance instance;
    std::vector<FusedOrigin> origin;  // by fused particle id
};

// Rewrites every term of the groupings on (fused window qudit, V particles).
// Throws InputError when a term ends up more than 2-local or is not carried
// by the tensor form of the slicings.
FusedInstance fuse_and_reduce(const Instance& inst, const std::vector<CoarseGraining>& groupings,
                              const std::vector<std::vector<Slicing>>& slicings, double tol = 1e-7);

}  // namespace clh
