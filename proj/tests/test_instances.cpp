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


#include "clh/instances.hpp"

#include <set>

#include "gtest/gtest.h"

#include "clh/algebra.hpp"
#include "clh/errors.hpp"
#include "clh/operators.hpp"
#include "clh/oracle.hpp"
#include "clh/structure.hpp"

using namespace clh;

TEST(gen_toric, two_by_two) {
    auto t = gen_toric(2);
    EXPECT_EQ(t.instance.num_particles(), 8);
    EXPECT_EQ(t.instance.terms.size(), 8u);
    EXPECT_EQ(t.instance.max_support(), 4);
    EXPECT_TRUE(validate(t.instance).empty());
    EXPECT_EQ(common_kernel_dim(t.instance), 4);
}

TEST(gen_toric, three_by_three_overlaps) {
    auto t = gen_toric(3);
    EXPECT_EQ(t.instance.num_particles(), 18);
    EXPECT_EQ(t.instance.terms.size(), 18u);
    EXPECT_TRUE(validate(t.instance).empty());
    for (const auto& v : t.vertices)
        for (const auto& p : t.plaquettes) {
            std::set<int> a(v.begin(), v.end()), b(p.begin(), p.end());
            int shared = 0;
            for (int x : a) shared += b.count(x);
            EXPECT_TRUE(shared == 0 || shared == 2);
        }
}

TEST(pair_toric, keeps_the_kernel) {
    Instance paired = pair_toric(gen_toric(2));
    EXPECT_EQ(paired.dims, (Dims{4, 4, 4, 4}));
    EXPECT_EQ(paired.max_support(), 3);
    EXPECT_TRUE(validate(paired).empty());
    EXPECT_EQ(common_kernel_dim(paired), 4);
}

TEST(gen_classical, planted_and_contradicted) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        ClassicalConfig cfg;
        cfg.seed = seed;
        cfg.n = 7;
        cfg.m = 9;
        Instance sat = gen_classical(cfg);
        EXPECT_TRUE(validate(sat).empty());
        EXPECT_TRUE(is_frustration_free(sat));
        cfg.satisfiable = false;
        Instance unsat = gen_classical(cfg);
        EXPECT_TRUE(validate(unsat).empty());
        EXPECT_FALSE(is_frustration_free(unsat));
    }
}

TEST(gen_chain, shapes) {
    ChainConfig ch;
    ch.L = 1;
    EXPECT_EQ(gen_chain(ch).terms.size(), 1u);
    for (auto style : {ChainStyle::cluster, ChainStyle::diagonal, ChainStyle::pendants}) {
        ch.L = 6;
        ch.style = style;
        ch.pendants = 2;
        Instance inst = gen_chain(ch);
        EXPECT_TRUE(validate(inst).empty());
        EXPECT_TRUE(is_frustration_free(inst));
        EXPECT_EQ(find_backbone(inst).path.length(), 6);
        ch.contradiction = true;
        EXPECT_FALSE(is_frustration_free(gen_chain(ch)));
        ch.contradiction = false;
    }
    ch.L = 0;
    EXPECT_THROW(gen_chain(ch), InputError);
}

TEST(gen_chain, cluster_interior_qubits) {
    ChainConfig ch;
    ch.L = 5;
    Instance inst = gen_chain(ch);
    for (int q = 2; q <= 4; ++q) {
        EXPECT_FALSE(is_separable(inst, q).separable) << q;
        EXPECT_FALSE(find_crowns(inst, q).empty()) << q;
        EXPECT_FALSE(butterfly_connected(inst, q).connected) << q;
    }
}

TEST(named_examples, ex1_ex2_and_qutrit_chain) {
    auto all = gen_named_examples();
    for (const auto& [name, inst] : all) EXPECT_TRUE(validate(inst).empty()) << name;

    const Instance& ex2 = all.at("ex2");
    for (int q = 0; q < 4; ++q) EXPECT_FALSE(is_separable(ex2, q).separable);
    EXPECT_EQ(common_kernel_dim(ex2), 1);

    const Instance& chain = all.at("qutrit_chain");
    auto crit = critical_subspaces(chain, chain.terms[1], 0);
    ASSERT_EQ(crit.size(), 1u);
    Vec target = (ket(3, 0) + ket(3, 1)) / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(target.dot(crit[0].vector)), 1.0, 1e-8);

    auto b = butterflies(all.at("ex1"), 0);
    EXPECT_EQ(b.size(), 2u);
}

TEST(separability_configs, generators_hold_their_premises) {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        Instance bf = gen_butterfly_config(seed);
        if (!bf.dims.empty()) {
            EXPECT_TRUE(validate(bf).empty());
            EXPECT_TRUE(butterfly_connected(bf, 0).connected);
        }
        Instance lr = gen_left_right_config(seed % 2 ? 2 : 3, seed);
        EXPECT_TRUE(validate(lr).empty());
        EXPECT_TRUE(left_right_partition(lr, 0).has_value());
        Instance fan = gen_qutrit_fan(seed);
        if (!fan.dims.empty()) {
            EXPECT_EQ(fan.dims[0], 3);
            EXPECT_TRUE(validate(fan).empty());
            EXPECT_GE(longest_path_on(fan, 0, 5).length(), 5);
        }
    }
}

TEST(gen_planar_qutrit, patterns) {
    for (const char* pattern : {"none", "strip", "single", "period:3"}) {
        auto fx = gen_planar_qutrit(4, 5, pattern, 2);
        EXPECT_TRUE(validate(fx.instance).empty()) << pattern;
        int op = 0;
        for (const auto& f : fx.embedding.faces) op += f.op;
        EXPECT_EQ(op, static_cast<int>(fx.instance.terms.size())) << pattern;
    }
    EXPECT_THROW(gen_planar_qutrit(4, 4, "zigzag", 1), InputError);
}

TEST(generate_family, deterministic_and_checked) {
    nlohmann::json p = {{"n", 6}, {"m", 6}};
    auto a = instance_to_json(generate_family("classical", p, 3));
    auto b = instance_to_json(generate_family("classical", p, 3));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, instance_to_json(generate_family("classical", p, 4)));
    EXPECT_THROW(generate_family("nope", {}, 1), InputError);
    EXPECT_THROW(generate_family("chain", {{"style", "spiral"}}, 1), InputError);
    PlanarEmbedding emb;
    Instance w = generate_family("wheel", {{"spokes", 5}}, 1, &emb);
    EXPECT_EQ(emb.faces.size(), 6u);
    EXPECT_EQ(w.num_particles(), 6);
}
