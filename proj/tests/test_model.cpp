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


#include "clh/model.hpp"

#include <random>

#include "gtest/gtest.h"

#include "clh/errors.hpp"
#include "clh/instances.hpp"
#include "clh/operators.hpp"

using namespace clh;

namespace {

Instance two_qubits() {
    Instance inst;
    inst.dims = {2, 2};
    inst.k = 2;
    return inst;
}

Mat P0() { return projector_of(ket(2, 0)); }
Mat P1() { return projector_of(ket(2, 1)); }

}  // namespace

TEST(validate, anticommuting_paulis) {
    Instance inst;
    inst.dims = {2, 2, 2};
    inst.k = 2;
    inst.terms.push_back({0, {0, 1}, minus_projector(pauli_string("ZZ"))});
    inst.terms.push_back({1, {0, 2}, minus_projector(pauli_string("XI"))});
    auto v = validate(inst);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, "commutation");
    EXPECT_EQ(v[0].term_ids, (std::vector<int>{0, 1}));
}

TEST(validate, empty_and_toric) {
    Instance empty;
    empty.dims = {2};
    EXPECT_TRUE(validate(empty).empty());
    EXPECT_TRUE(validate(gen_toric(2).instance).empty());
    EXPECT_TRUE(validate(pair_toric(gen_toric(2))).empty());
}

TEST(validate, shape_and_projector) {
    Instance inst = two_qubits();
    inst.terms.push_back({0, {0, 1}, pauli_string("ZZ")});
    auto v = validate(inst);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].kind, "projector");

    inst.terms[0] = {0, {0}, kron(P0(), P0())};
    v = validate(inst);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].kind, "support");

    inst.k = 1;
    inst.terms[0] = {0, {0, 1}, kron(P0(), P0())};
    v = validate(inst);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].kind, "locality");
}

TEST(normalize, drops_trivial_factor) {
    Instance inst = two_qubits();
    inst.terms.push_back({0, {0, 1}, kron(Mat::Identity(2, 2), P1())});
    auto r = normalize(inst);
    ASSERT_EQ(r.instance.terms.size(), 1u);
    EXPECT_EQ(r.instance.terms[0].support, (std::vector<int>{1}));
    EXPECT_LT(max_abs(r.instance.terms[0].matrix - P1()), 1e-12);
    EXPECT_FALSE(r.unsatisfiable);
}

TEST(normalize, keeps_product_and_deletes_zero) {
    Instance inst = two_qubits();
    inst.terms.push_back({0, {0, 1}, kron(P0(), P1())});
    inst.terms.push_back({1, {0, 1}, Mat::Zero(4, 4)});
    auto r = normalize(inst);
    ASSERT_EQ(r.instance.terms.size(), 1u);
    EXPECT_EQ(r.instance.terms[0].support, (std::vector<int>{0, 1}));
    EXPECT_LT(max_abs(r.instance.terms[0].matrix - kron(P0(), P1())), 1e-12);
}

TEST(normalize, identity_term_is_unsatisfiable) {
    Instance inst = two_qubits();
    inst.terms.push_back({0, {0, 1}, Mat::Identity(4, 4)});
    auto r = normalize(inst);
    EXPECT_TRUE(r.unsatisfiable);
    EXPECT_TRUE(r.instance.has_contradiction());
}

TEST(normalize, compaction_removes_unit_particles) {
    Instance inst;
    inst.dims = {2, 1, 2};
    inst.terms.push_back({0, {0, 2}, kron(P0(), P1())});
    auto r = normalize(inst);
    EXPECT_EQ(r.remap, (std::vector<int>{0, -1, 1}));
    EXPECT_EQ(r.instance.dims, (Dims{2, 2}));
    EXPECT_EQ(r.instance.terms[0].support, (std::vector<int>{0, 1}));
    auto keep = normalize(inst, false);
    EXPECT_EQ(keep.instance.dims, inst.dims);
}

TEST(restrict_particle, classical_to_zero) {
    Instance inst;
    inst.dims = {2, 2, 2};
    inst.terms.push_back({0, {0, 1}, kron(P0(), P1())});
    inst.terms.push_back({1, {0, 2}, kron(P1(), P1()) + kron(P0(), P0())});
    Mat b = ket(2, 0);
    Instance r = restrict_particle(inst, 0, b);
    EXPECT_EQ(r.dims[0], 1);
    ASSERT_EQ(r.terms.size(), 2u);
    for (const auto& t : r.terms) {
        EXPECT_EQ(t.support.size(), 1u);
        Mat off = t.matrix;
        off.diagonal().setZero();
        EXPECT_LT(max_abs(off), 1e-12);
    }
}

TEST(restrict_particle, full_basis_is_a_rotation) {
    std::mt19937_64 rng(7);
    ClassicalConfig cfg;
    cfg.n = 4;
    cfg.m = 4;
    cfg.k = 2;
    Instance inst = gen_classical(cfg);
    Mat U = random_unitary(2, rng);
    Instance r = restrict_particle(inst, 1, U);
    ASSERT_EQ(r.terms.size(), inst.terms.size());
    for (size_t i = 0; i < r.terms.size(); ++i) {
        const auto& t = inst.terms[i];
        auto it = std::find(t.support.begin(), t.support.end(), 1);
        if (it == t.support.end()) {
            EXPECT_LT(max_abs(r.terms[i].matrix - t.matrix), 1e-12);
            continue;
        }
        Mat rot = t.support[0] == 1 ? kron(U, Mat::Identity(2, 2)) : kron(Mat::Identity(2, 2), U);
        EXPECT_LT(max_abs(rot.adjoint() * t.matrix * rot - r.terms[i].matrix), 1e-10);
    }
}

TEST(restrict_particle, critical_subspace_drops_dependence) {
    Instance inst = critical_operator(true);
    Instance r = restrict_particle(inst, 0, ket(3, 2));
    ASSERT_EQ(r.terms.size(), 1u);
    EXPECT_EQ(r.terms[0].support, (std::vector<int>{1}));
    Mat plus = projector_of(ket(2, 0) + ket(2, 1));
    EXPECT_LT(max_abs(r.terms[0].matrix - plus), 1e-12);

    Mat b01(3, 2);
    b01 << 1, 0, 0, 1, 0, 0;
    r = restrict_particle(inst, 0, b01);
    ASSERT_EQ(r.terms.size(), 1u);
    EXPECT_EQ(r.terms[0].support, (std::vector<int>{1}));
    EXPECT_LT(max_abs(r.terms[0].matrix - P0()), 1e-12);
}

TEST(restrict_particle, rejects_non_invariant_subspace) {
    Instance inst = critical_operator(false);
    Vec v = (ket(3, 0) + ket(3, 1)) / std::sqrt(2.0);
    EXPECT_THROW(restrict_particle(inst, 0, v), InputError);
    Mat bad = Mat::Ones(3, 1);
    EXPECT_THROW(restrict_particle(inst, 0, bad), InputError);
}

TEST(model, components) {
    Instance inst;
    inst.dims = {2, 2, 2, 2};
    inst.terms.push_back({0, {0, 1}, kron(P0(), P1())});
    inst.terms.push_back({1, {3}, P1()});
    auto comps = particle_components(inst);
    ASSERT_EQ(comps.size(), 3u);
    EXPECT_EQ(comps[0], (std::vector<int>{0, 1}));
    EXPECT_EQ(comps[1], (std::vector<int>{2}));
    EXPECT_EQ(comps[2], (std::vector<int>{3}));
}

TEST(model, json_round_trip_is_exact) {
    Instance inst = example_ex2();
    Instance back = instance_from_json(nlohmann::json::parse(instance_to_json(inst).dump()));
    ASSERT_EQ(back.terms.size(), inst.terms.size());
    EXPECT_EQ(back.dims, inst.dims);
    for (size_t i = 0; i < inst.terms.size(); ++i) {
        EXPECT_EQ(back.terms[i].support, inst.terms[i].support);
        EXPECT_EQ(max_abs(back.terms[i].matrix - inst.terms[i].matrix), 0.0);
    }
}

TEST(model, json_sorts_supports_and_rejects_garbage) {
    Instance inst = two_qubits();
    inst.terms.push_back({0, {0, 1}, kron(P0(), P1())});
    auto j = instance_to_json(inst);
    j["terms"][0]["support"] = {1, 0};
    Instance back = instance_from_json(j);
    EXPECT_EQ(back.terms[0].support, (std::vector<int>{0, 1}));
    EXPECT_LT(max_abs(back.terms[0].matrix - kron(P1(), P0())), 1e-15);

    EXPECT_THROW(instance_from_json(nlohmann::json::parse("[1,2]")), InputError);
    j["terms"][0]["support"] = {0, 0};
    EXPECT_THROW(instance_from_json(j), InputError);
    j["terms"][0]["support"] = {0, 5};
    EXPECT_THROW(instance_from_json(j), InputError);
}
