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


#include "clh/circuit.hpp"

#include <random>
#include <set>

#include "gtest/gtest.h"

#include "clh/instances.hpp"
#include "clh/operators.hpp"

using namespace clh;

namespace {

void expect_disjoint_layers(const Circuit& c) {
    for (const auto& layer : c.layers) {
        std::set<int> in, out;
        for (const auto& g : layer) {
            for (int w : g.inputs) EXPECT_TRUE(in.insert(w).second) << "wire " << w << " used twice";
            for (int w : g.outputs) EXPECT_TRUE(out.insert(w).second) << "wire " << w << " used twice";
        }
    }
}

}  // namespace

TEST(emit_circuit, classical_is_one_layer_of_single_qubit_gates) {
    ClassicalConfig cfg;
    cfg.n = 6;
    cfg.m = 6;
    Instance inst = gen_classical(cfg);
    auto r = prove_3local_qubits(inst);
    ASSERT_EQ(r.verdict, Verdict::witness);
    Circuit c = emit_circuit(inst, r.witness);
    ASSERT_EQ(c.layers.size(), 1u);
    for (const auto& g : c.layers[0]) {
        EXPECT_EQ(g.outputs.size(), 1u);
        EXPECT_LE(g.inputs.size(), 1u);
    }
    auto chk = verify_circuit(inst, c);
    EXPECT_TRUE(chk.ok) << chk.reason;
}

TEST(emit_circuit, chain_is_constant_depth) {
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        ChainConfig ch;
        ch.L = 8;
        ch.seed = seed;
        ch.pendants = 2;
        Instance inst = gen_chain(ch);
        ProveOptions opt;
        opt.group_size = 3;
        opt.skip_elimination = true;
        auto r = prove_3local_qubits(inst, opt);
        ASSERT_EQ(r.verdict, Verdict::witness) << r.message;
        Circuit c = emit_circuit(inst, r.witness);
        expect_disjoint_layers(c);
        auto chk = verify_circuit(inst, c, 1e-8);
        EXPECT_TRUE(chk.ok) << chk.reason;
        EXPECT_LE(chk.layers, 3);
        EXPECT_GE(chk.layers, 2);
        EXPECT_LE(chk.max_gate_dim, 256);
        EXPECT_GE(chk.ground_columns, 1);
    }
}

TEST(emit_circuit, disjoint_edges_need_one_layer) {
    TwoLocalConfig tl;
    tl.num_vertices = 6;
    tl.edges = {{0, 1}, {2, 3}, {4, 5}};
    Instance inst = gen_two_local(tl);
    auto r = prove_2local(inst);
    ASSERT_EQ(r.verdict, Verdict::witness);
    Circuit c = emit_circuit(inst, r.witness);
    EXPECT_EQ(c.layers.size(), 1u);
    EXPECT_TRUE(verify_circuit(inst, c).ok);
}

TEST(emit_circuit, stars_use_two_layers) {
    int with_steps = 0;
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        Instance inst = gen_two_local(star_config(4, seed));
        auto r = prove_2local(inst);
        ASSERT_EQ(r.verdict, Verdict::witness);
        Circuit c = emit_circuit(inst, r.witness);
        expect_disjoint_layers(c);
        auto chk = verify_circuit(inst, c, 1e-8);
        EXPECT_TRUE(chk.ok) << chk.reason;
        if (!r.witness.steps.empty()) {
            ++with_steps;
            EXPECT_EQ(chk.layers, 2);
        }
    }
    EXPECT_GT(with_steps, 0);
}

TEST(verify_circuit, corrupted_gate_fails) {
    Instance inst = gen_two_local(star_config(4, 1));
    auto r = prove_2local(inst);
    Circuit c = emit_circuit(inst, r.witness);
    ASSERT_FALSE(c.layers.empty());
    Gate* target = nullptr;
    for (auto& layer : c.layers)
        for (auto& g : layer)
            if (g.matrix.rows() > 1 && (!target || g.matrix.rows() > target->matrix.rows())) target = &g;
    ASSERT_NE(target, nullptr);
    std::mt19937_64 rng(11);
    target->matrix = random_unitary(static_cast<int>(target->matrix.rows()), rng) * target->matrix;
    EXPECT_FALSE(verify_circuit(inst, c).ok);
}

TEST(verify_circuit, empty_circuit_on_diagonal_instance) {
    ClassicalConfig cfg;
    cfg.n = 5;
    cfg.m = 5;
    cfg.rotate = false;
    Instance inst = gen_classical(cfg);
    Circuit c;
    c.num_physical = inst.num_particles();
    for (int p = 0; p < inst.num_particles(); ++p) {
        c.wire_dims[p] = inst.dims[p];
        c.inputs.push_back(p);
    }
    auto chk = verify_circuit(inst, c);
    EXPECT_TRUE(chk.ok) << chk.reason;
    EXPECT_EQ(chk.layers, 0);
    EXPECT_EQ(chk.columns, 32);

    Instance rotated = gen_classical(ClassicalConfig{5, 5, 3, 2, 1, true, true, 1});
    EXPECT_FALSE(verify_circuit(rotated, c).ok);
}

TEST(circuit, json_round_trip) {
    ChainConfig ch;
    ch.L = 8;
    Instance inst = gen_chain(ch);
    auto r = prove_3local_qubits(inst);
    ASSERT_EQ(r.verdict, Verdict::witness);
    Circuit c = emit_circuit(inst, r.witness);
    Circuit back = circuit_from_json(nlohmann::json::parse(circuit_to_json(c).dump()));
    EXPECT_EQ(circuit_to_json(back), circuit_to_json(c));
    EXPECT_TRUE(verify_circuit(inst, back).ok);
}
