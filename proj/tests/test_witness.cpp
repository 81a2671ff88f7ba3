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


#include "clh/witness.hpp"

#include <random>

#include "gtest/gtest.h"

#include "clh/errors.hpp"
#include "clh/instances.hpp"
#include "clh/operators.hpp"
#include "clh/oracle.hpp"

using namespace clh;

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

Instance one_edge(const std::vector<Mat>& terms) {
    Instance inst;
    inst.dims = {2, 2};
    inst.k = 2;
    int id = 0;
    for (const auto& M : terms) inst.terms.push_back({id++, {0, 1}, M});
    return inst;
}

Instance pendant_chain(uint64_t seed) {
    ChainConfig ch;
    ch.L = 10;
    ch.style = ChainStyle::pendants;
    ch.pendants = 3;
    ch.seed = seed;
    return gen_chain(ch);
}

}  // namespace

TEST(prove_2local, classical_round_trip) {
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        ClassicalConfig cfg;
        cfg.n = 6;
        cfg.m = 7;
        cfg.k = 2;
        cfg.seed = seed;
        Instance inst = gen_classical(cfg);
        auto r = prove_2local(inst);
        ASSERT_EQ(r.verdict, Verdict::witness) << r.message;
        auto v = verify_2local(inst, r.witness);
        EXPECT_TRUE(v.accepted) << v.reason;
    }
}

TEST(prove_2local, trivially_satisfiable_edge) {
    Instance inst = one_edge({projector_of(ket(4, 0)), projector_of(ket(4, 3))});
    auto r = prove_2local(inst);
    ASSERT_EQ(r.verdict, Verdict::witness);
    EXPECT_TRUE(r.witness.steps.empty());
    EXPECT_TRUE(verify_2local(inst, r.witness).accepted);
}

TEST(prove_2local, contradiction_is_unsat) {
    Mat P = projector_of(ket(4, 1) + ket(4, 2));
    Instance inst = one_edge({P, Mat::Identity(4, 4) - P});
    EXPECT_EQ(prove_2local(inst).verdict, Verdict::unsat);
    EXPECT_FALSE(verify_2local(inst, Clh2Witness{}).accepted);
}

TEST(prove_2local, stars_and_graphs) {
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        Instance star = gen_two_local(star_config(4, seed));
        auto r = prove_2local(star);
        ASSERT_EQ(r.verdict, Verdict::witness) << r.message;
        EXPECT_TRUE(verify_2local(star, r.witness).accepted);

        TwoLocalConfig tl;
        tl.num_vertices = 6;
        tl.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 4}};
        tl.seed = seed;
        Instance g = gen_two_local(tl);
        auto rg = prove_2local(g);
        ASSERT_EQ(rg.verdict, Verdict::witness) << rg.message;
        EXPECT_TRUE(verify_2local(g, rg.witness).accepted);
    }
}

TEST(verify_2local, corrupted_basis_is_rejected) {
    int tested = 0;
    for (uint64_t seed = 1; seed <= 8 && tested < 2; ++seed) {
        Instance star = gen_two_local(star_config(4, seed));
        auto r = prove_2local(star);
        if (r.witness.steps.empty()) continue;
        ++tested;
        auto bad = r.witness;
        std::mt19937_64 rng(seed);
        Mat& B = bad.steps[0].basis;
        B = random_unitary(static_cast<int>(B.rows()), rng) * B;
        auto v = verify_2local(star, bad);
        EXPECT_FALSE(v.accepted);
        EXPECT_TRUE(starts_with(v.reason, "block not invariant")) << v.reason;
    }
    EXPECT_EQ(tested, 2);
}

TEST(verify_2local, unsat_instances_reject_candidate_witnesses) {
    ProveOptions opt;
    opt.ignore_oracle = true;
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        Instance star = gen_two_local(star_config(3, seed, false));
        ASSERT_EQ(common_kernel_dim(star), 0);
        auto r = prove_2local(star, opt);
        EXPECT_FALSE(verify_2local(star, r.witness).accepted);
    }
}

TEST(prove_3local_qubits, classical_full_elimination) {
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        ClassicalConfig cfg;
        cfg.n = 8;
        cfg.m = 10;
        cfg.seed = seed;
        Instance inst = gen_classical(cfg);
        auto r = prove_3local_qubits(inst);
        ASSERT_EQ(r.verdict, Verdict::witness) << r.message;
        EXPECT_EQ(r.witness.steps.size(), 8u);
        EXPECT_TRUE(verify_3local_qubits(inst, r.witness).accepted);

        cfg.satisfiable = false;
        EXPECT_EQ(prove_3local_qubits(gen_classical(cfg)).verdict, Verdict::unsat);
    }
}

TEST(prove_3local_qubits, chains_round_trip) {
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        ChainConfig ch;
        ch.L = 10;
        ch.seed = seed;
        ch.pendants = 2;
        Instance inst = gen_chain(ch);
        auto r = prove_3local_qubits(inst);
        ASSERT_EQ(r.verdict, Verdict::witness) << r.message;
        EXPECT_FALSE(r.witness.groupings.empty());
        EXPECT_TRUE(verify_3local_qubits(inst, r.witness).accepted);

        ProveOptions skip;
        skip.skip_elimination = true;
        Instance p = pendant_chain(seed);
        auto rp = prove_3local_qubits(p, skip);
        ASSERT_EQ(rp.verdict, Verdict::witness) << rp.message;
        EXPECT_TRUE(verify_3local_qubits(p, rp.witness).accepted);
    }
}

TEST(prove_3local_qubits, contradicting_chain_is_unsat) {
    ChainConfig ch;
    ch.L = 8;
    ch.contradiction = true;
    EXPECT_EQ(prove_3local_qubits(gen_chain(ch)).verdict, Verdict::unsat);
}

TEST(prove_3local_qubits, rejects_other_classes) {
    EXPECT_THROW(prove_3local_qubits(qutrit_chain()), InputError);
    EXPECT_THROW(prove_3local_qubits(gen_toric(2).instance), InputError);
}

TEST(verify_3local_qubits, broken_grouping_is_rejected) {
    ProveOptions skip;
    skip.skip_elimination = true;
    Instance inst = pendant_chain(2);
    auto r = prove_3local_qubits(inst, skip);
    ASSERT_EQ(r.verdict, Verdict::witness) << r.message;
    auto& G = r.witness.groupings.at(0);
    ASSERT_GE(G.Q.size(), 3u);
    int from = -1;
    for (int j = 0; j < static_cast<int>(G.V.size()); ++j)
        if (!G.V[j].empty()) from = j;
    ASSERT_GE(from, 0);
    int to = from >= 2 ? 0 : static_cast<int>(G.V.size()) - 1;
    auto bad = r.witness;
    auto& B = bad.groupings[0];
    B.V[to].push_back(B.V[from].back());
    B.V[from].pop_back();
    auto v = verify_3local_qubits(inst, bad);
    EXPECT_FALSE(v.accepted);
    EXPECT_NE(v.reason.find("spans 3 windows"), std::string::npos) << v.reason;
}

TEST(verify_3local_qubits, corrupted_slicing_is_rejected) {
    ChainConfig ch;
    ch.L = 10;
    Instance inst = gen_chain(ch);
    auto r = prove_3local_qubits(inst);
    ASSERT_EQ(r.verdict, Verdict::witness);
    ASSERT_FALSE(r.witness.slicings.empty());
    auto bad = r.witness;
    Slicing& s = bad.slicings[0][0];
    std::mt19937_64 rng(5);
    s.isometry = random_unitary(static_cast<int>(s.isometry.rows()), rng) * s.isometry;
    auto v = verify_3local_qubits(inst, bad);
    EXPECT_FALSE(v.accepted);
    EXPECT_TRUE(starts_with(v.reason, "slicing invalid")) << v.reason;
}

TEST(witness, json_round_trip) {
    ChainConfig ch;
    ch.L = 10;
    ch.pendants = 1;
    Instance inst = gen_chain(ch);
    auto r = prove_3local_qubits(inst);
    ASSERT_EQ(r.verdict, Verdict::witness);
    auto back = clh32_witness_from_json(nlohmann::json::parse(witness_to_json(r.witness).dump()));
    EXPECT_TRUE(verify_3local_qubits(inst, back).accepted);
    EXPECT_EQ(witness_to_json(back), witness_to_json(r.witness));

    Instance star = gen_two_local(star_config(4, 1));
    auto r2 = prove_2local(star);
    auto back2 = clh2_witness_from_json(nlohmann::json::parse(witness_to_json(r2.witness).dump()));
    EXPECT_TRUE(verify_2local(star, back2).accepted);
    EXPECT_THROW(clh2_witness_from_json(witness_to_json(r.witness)), InputError);
}

TEST(prove_3local_qubits, long_chain) {
    ChainConfig ch;
    ch.L = 120;
    Instance inst = gen_chain(ch);
    ProveOptions opt;
    opt.group_size = 3;
    auto r = prove_3local_qubits(inst, opt);
    ASSERT_EQ(r.verdict, Verdict::witness) << r.message;
    EXPECT_TRUE(verify_3local_qubits(inst, r.witness).accepted);

    // groups of 20 qubits exceed the represented-block cap
    opt.group_size = 20;
    EXPECT_EQ(prove_3local_qubits(inst, opt).verdict, Verdict::budget);
}
