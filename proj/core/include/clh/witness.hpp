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
#include <string>
#include <vector>

#include "clh/model.hpp"
#include "clh/oracle.hpp"
#include "clh/structure.hpp"
#include "json.hpp"

namespace clh {

// Restriction of a star center to one block, split into one particle per
// slot. Slots are keyed by the neighbor a term reaches (-1 for 1-local
// terms), ascending; slot 0 stays on the center and the others are appended
// as new particles in order.
struct StarStep {
    int particle = 0;
    Mat basis;  // d x prod(slot_dims), orthonormal columns
    std::vector<int> slot_dims;
};

struct Clh2Witness {
    std::vector<StarStep> steps;
};

struct Clh32Witness {
    std::vector<ElimStep> steps;
    std::vector<CoarseGraining> groupings;     // one per residual component
    std::vector<std::vector<Slicing>> slicings;  // per grouping, by group index
    Clh2Witness fused;
};

enum class Verdict { witness, unsat, budget };

const char* verdict_name(Verdict v);

struct ProveOptions {
    // probes above 2^16 dims are slow; larger components are left unguided
    OracleConfig oracle{int64_t{1} << 12, int64_t{1} << 16};
    int64_t block_cap = kDefaultBlockCap;
    int64_t budget = kDefaultSearchBudget;
    int group_size = 2;
    bool skip_elimination = false;
    // Build the structural witness even when the oracle reports UNSAT. Used to
    // produce candidate witnesses for soundness testing.
    bool ignore_oracle = false;
    uint64_t seed = kAlgebraSeed;
};

struct Prove2Result {
    Verdict verdict = Verdict::witness;
    Clh2Witness witness;
    std::string message;
};

struct Prove32Result {
    Verdict verdict = Verdict::witness;
    Clh32Witness witness;
    std::string message;
};

struct VerifyResult {
    bool accepted = false;
    std::string reason;
};

struct VerifyOptions {
    int64_t block_cap = kDefaultBlockCap;
    int64_t dense_cap = int64_t{1} << 12;  // per final component
    double tol = 1e-7;
};

// Slot keys of the terms on q in canonical order.
std::vector<int> star_slots(const Instance& inst, int q);
// Restricts and splits; throws InputError with the reason on failure.
Instance apply_star_step(const Instance& inst, const StarStep& step, double tol = 1e-7);

Prove2Result prove_2local(const Instance& inst, const ProveOptions& opt = {});
VerifyResult verify_2local(const Instance& inst, const Clh2Witness& w, const VerifyOptions& opt = {});

Prove32Result prove_3local_qubits(const Instance& inst, const ProveOptions& opt = {});
VerifyResult verify_3local_qubits(const Instance& inst, const Clh32Witness& w, const VerifyOptions& opt = {});

nlohmann::json witness_to_json(const Clh2Witness& w);
Clh2Witness clh2_witness_from_json(const nlohmann::json& j);
nlohmann::json witness_to_json(const Clh32Witness& w);
Clh32Witness clh32_witness_from_json(const nlohmann::json& j);

}  // namespace clh
