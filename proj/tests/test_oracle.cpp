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


#include "clh/oracle.hpp"

#include "gtest/gtest.h"

#include "clh/algebra.hpp"
#include "clh/errors.hpp"
#include "clh/instances.hpp"
#include "clh/operators.hpp"

using namespace clh;

namespace {

Instance all_ones(int n) {
    Instance inst;
    inst.dims.assign(n, 2);
    inst.k = 1;
    for (int i = 0; i < n; ++i) inst.terms.push_back({i, {i}, projector_of(ket(2, 1))});
    return inst;
}

Instance contradiction() {
    Instance inst;
    inst.dims = {2, 2};
    inst.k = 2;
    Mat P = projector_of(ket(4, 0) + ket(4, 3));
    inst.terms.push_back({0, {0, 1}, P});
    inst.terms.push_back({1, {0, 1}, Mat::Identity(4, 4) - P});
    return inst;
}

// Number of basis configurations annihilated by every (diagonal) term.
int64_t count_assignments(const Instance& inst) {
    int64_t D = dim_product(inst.dims);
    int64_t count = 0;
    for (int64_t x = 0; x < D; ++x) {
        std::vector<int> digit(inst.dims.size());
        int64_t r = x;
        for (int p = inst.num_particles() - 1; p >= 0; --p) {
            digit[p] = static_cast<int>(r % inst.dims[p]);
            r /= inst.dims[p];
        }
        bool ok = true;
        for (const auto& t : inst.terms) {
            int64_t idx = 0;
            for (int p : t.support) idx = idx * inst.dims[p] + digit[p];
            if (std::abs(t.matrix(idx, idx)) > 0.5) {
                ok = false;
                break;
            }
        }
        count += ok;
    }
    return count;
}

}  // namespace

TEST(common_kernel_dim, examples) {
    EXPECT_EQ(common_kernel_dim(all_ones(5)), 1);
    EXPECT_EQ(common_kernel_dim(gen_toric(2).instance), 4);
    EXPECT_EQ(common_kernel_dim(contradiction()), 0);
}

TEST(common_kernel_dim, classical_matches_enumeration) {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        ClassicalConfig cfg;
        cfg.n = 7;
        cfg.m = 7;
        cfg.d = seed % 2 ? 2 : 3;
        cfg.rank = 2;
        cfg.rotate = false;
        cfg.seed = seed;
        Instance inst = gen_classical(cfg);
        EXPECT_EQ(common_kernel_dim(inst), count_assignments(inst)) << "seed " << seed;
    }
}

TEST(common_kernel_dim, dense_and_matrix_free_agree) {
    std::vector<Instance> fixtures{gen_toric(2).instance, pair_toric(gen_toric(2)), example_ex1(), example_ex2(),
                                   qutrit_chain()};
    for (uint64_t s = 1; s <= 3; ++s) {
        ChainConfig ch;
        ch.L = 6;
        ch.seed = s;
        fixtures.push_back(gen_chain(ch));
        fixtures.push_back(gen_two_local(star_config(3, s)));
    }
    for (const auto& inst : fixtures) {
        auto a = kernel_dim_dense(inst, 1 << 12);
        auto b = kernel_dim_matrix_free(inst, 1 << 20, 99);
        EXPECT_EQ(a.dim, b.dim);
        EXPECT_LE(a.residual, 1e-9);
    }
}

TEST(common_kernel_dim, caps) {
    OracleConfig cfg;
    cfg.dense_cap = 16;
    cfg.matrix_free_cap = 16;
    EXPECT_THROW(common_kernel_dim(gen_toric(2).instance, cfg), CapExceeded);
    EXPECT_THROW(kernel_dim_dense(gen_toric(2).instance, 16), CapExceeded);
}

TEST(common_kernel_dim, components_multiply) {
    Instance inst = all_ones(3);
    inst.dims.push_back(2);
    inst.dims.push_back(3);
    EXPECT_EQ(common_kernel_dim(inst), 6);
}

TEST(is_frustration_free, examples) {
    EXPECT_TRUE(is_frustration_free(all_ones(4)));
    EXPECT_TRUE(is_frustration_free(pair_toric(gen_toric(2))));
    EXPECT_FALSE(is_frustration_free(contradiction()));
    EXPECT_TRUE(probe_null_state(all_ones(4)));
    EXPECT_FALSE(probe_null_state(contradiction()));
}

TEST(ground_energy, examples) {
    EXPECT_NEAR(ground_energy(all_ones(4)), 0.0, 1e-9);
    EXPECT_NEAR(ground_energy(contradiction()), 1.0, 1e-9);
    EXPECT_NEAR(ground_energy(gen_toric(2).instance), 0.0, 1e-9);
}

TEST(kernel_basis, spans_the_kernel) {
    Instance inst = gen_toric(2).instance;
    Mat K = kernel_basis(inst);
    ASSERT_EQ(K.cols(), 4);
    EXPECT_LT(max_abs(K.adjoint() * K - Mat::Identity(4, 4)), 1e-9);
    EXPECT_LT(max_abs(apply_complement_product(inst, K) - K), 1e-9);
}

TEST(topological_order_check, toric_and_control) {
    Instance paired = pair_toric(gen_toric(2));
    auto t = topological_order_check(paired, 1);
    EXPECT_EQ(t.ground_dim, 4);
    EXPECT_LE(t.max_deviation, 1e-8);
    auto c = topological_order_check(classical_degenerate_control(), 1);
    EXPECT_EQ(c.ground_dim, 2);
    EXPECT_GE(c.max_deviation, 0.5);
    EXPECT_THROW(topological_order_check(all_ones(3), 1), InputError);
}

TEST(oracle, sector_additivity) {
    for (uint64_t s = 1; s <= 4; ++s) {
        Instance inst = gen_two_local(star_config(3, s));
        auto sep = is_separable(inst, 0);
        if (!sep.separable) continue;
        int64_t total = 0;
        for (const auto& piece : sep.pieces) total += common_kernel_dim(restrict_particle(inst, 0, piece));
        EXPECT_EQ(total, common_kernel_dim(inst)) << "seed " << s;
    }
}
