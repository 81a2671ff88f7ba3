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

#include "clh/algebra.hpp"

#include <random>

#include "gtest/gtest.h"

#include "clh/errors.hpp"
#include "clh/operators.hpp"

using namespace clh;

namespace {

Mat diag3(double a, double b, double c) {
    Mat m = Mat::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

Vec plus2() { return (ket(2, 0) + ket(2, 1)) / std::sqrt(2.0); }

// sum_i |i><i|_q (x) Pi_i with q a qutrit and Pi_i on one qubit.
Instance critical_operator(const Mat& P0, const Mat& P1, const Mat& P2) {
    Instance inst;
    inst.dims = {3, 2};
    inst.k = 2;
    Mat H = kron(diag3(1, 0, 0), P0) + kron(diag3(0, 1, 0), P1) + kron(diag3(0, 0, 1), P2);
    inst.terms.push_back({0, {0, 1}, H});
    return inst;
}

bool same_span(const MatrixAlgebra& a, const MatrixAlgebra& b) {
    if (a.dim() != b.dim()) return false;
    for (const Mat& x : a.basis)
        if (!b.contains(x)) return false;
    return true;
}

}  // namespace

TEST(generate_algebra, examples) {
    EXPECT_EQ(generate_algebra({pauli('X')}).dim(), 2);
    EXPECT_EQ(generate_algebra({pauli('X'), pauli('Z')}).dim(), 4);
    Mat e01 = Mat::Zero(3, 3);
    e01(0, 1) = 1;
    auto a = generate_algebra({e01});
    EXPECT_EQ(a.dim(), 5);
    EXPECT_TRUE(a.contains(diag3(1, 0, 0)));
    EXPECT_TRUE(a.contains(diag3(0, 1, 0)));
    EXPECT_TRUE(a.contains(Mat::Identity(3, 3)));
}

TEST(generate_algebra, closed_under_products_and_adjoint) {
    std::mt19937_64 rng(4);
    Mat U = random_unitary(4, rng);
    auto a = generate_algebra({U * kron(pauli('X'), pauli('I')) * U.adjoint(), U * kron(pauli('Z'), pauli('Z')) * U.adjoint()});
    for (const Mat& x : a.basis) {
        EXPECT_TRUE(a.contains(x.adjoint()));
        for (const Mat& y : a.basis) EXPECT_TRUE(a.contains(x * y));
    }
}

TEST(induced_algebra, critical_operators) {
    Instance inst;
    inst.dims = {3, 2, 2};
    Vec v01 = (ket(3, 0) + ket(3, 1)) / std::sqrt(2.0);
    Mat Pb = projector_of(ket(2, 0)), Pc = projector_of(plus2());
    Mat H2 = kron(kron(projector_of(v01), Mat::Identity(2, 2) - Pb), Pc);
    inst.terms.push_back({2, {0, 1, 2}, H2});
    auto a = induced_algebra(inst, inst.terms[0], 0);
    EXPECT_EQ(a.dim(), 2);
    EXPECT_TRUE(a.contains(projector_of(v01)));

    auto indep = critical_operator(projector_of(ket(2, 0)), projector_of(ket(2, 1)), projector_of(plus2()));
    auto d = induced_algebra(indep, indep.terms[0], 0);
    EXPECT_EQ(d.dim(), 3);
    EXPECT_TRUE(d.contains(diag3(1, 0, 0)));

    Instance triv;
    triv.dims = {2, 2};
    triv.terms.push_back({0, {0, 1}, kron(Mat::Identity(2, 2), projector_of(ket(2, 1)))});
    EXPECT_EQ(induced_algebra(triv, triv.terms[0], 0).dim(), 1);
    EXPECT_THROW(induced_algebra(triv, LocalTerm{1, {1}, Pb}, 0), InputError);
}

TEST(induced_algebra, independent_of_schmidt_recombination) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        Mat U = random_unitary(8, rng);
        Mat D = Mat::Zero(8, 8);
        D(0, 0) = D(3, 3) = 1;
        Mat H = U * D * U.adjoint();
        auto pairs = operator_schmidt(H, {{2, 2, 2}, {1}});
        int r = static_cast<int>(pairs.size());
        Mat R(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) R(i, j) = cplx(nd(rng), nd(rng));
        std::vector<Mat> mixed;
        for (int i = 0; i < r; ++i) {
            Mat m = Mat::Zero(2, 2);
            for (int j = 0; j < r; ++j) m += R(i, j) * pairs[j].A;
            mixed.push_back(m);
        }
        EXPECT_TRUE(same_span(generate_algebra(mixed), induced_algebra(H, {2, 2, 2}, 1)));
    }
}

TEST(center, examples) {
    EXPECT_EQ(center(full_algebra(3)).dim(), 1);
    auto diag = generate_algebra({diag3(1, 0, 0), diag3(0, 1, 0)});
    EXPECT_EQ(center(diag).dim(), 3);
    Mat e = Mat::Zero(3, 3);
    e(1, 2) = 1;
    auto mixed = generate_algebra({e});
    ASSERT_EQ(mixed.dim(), 5);
    EXPECT_EQ(center(mixed).dim(), 2);
}

TEST(central_decomposition, examples) {
    auto full = central_decomposition(full_algebra(3));
    ASSERT_EQ(full.blocks.size(), 1u);
    EXPECT_TRUE(full.irreducible[0]);

    auto diag = central_decomposition(generate_algebra({diag3(1, 0, 0), diag3(0, 1, 0)}));
    ASSERT_EQ(diag.blocks.size(), 3u);
    for (const Mat& V : diag.block_bases) EXPECT_EQ(V.cols(), 1);

    auto inst = critical_operator(projector_of(ket(2, 0)), projector_of(ket(2, 0)), projector_of(plus2()));
    auto cd = central_decomposition(induced_algebra(inst, inst.terms[0], 0));
    ASSERT_EQ(cd.blocks.size(), 2u);
    EXPECT_LT(max_abs(cd.decomposition.projectors[0] - diag3(1, 1, 0)), 1e-9);
    EXPECT_LT(max_abs(cd.decomposition.projectors[1] - diag3(0, 0, 1)), 1e-9);
    EXPECT_FALSE(cd.irreducible[0]);
    EXPECT_TRUE(cd.irreducible[1]);
}

TEST(block_tensor_factorization, examples) {
    auto f = block_tensor_factorization(full_algebra(3));
    EXPECT_EQ(f.factor_dims, (Dims{3, 1}));

    auto a = generate_algebra({kron(pauli('X'), pauli('I')), kron(pauli('Z'), pauli('I'))});
    auto g = block_tensor_factorization(a);
    EXPECT_EQ(g.factor_dims, (Dims{2, 2}));
    EXPECT_LT(slot_residual(a, g.basis, g.factor_dims, 0), 1e-9);
    EXPECT_LT(max_abs(g.basis.adjoint() * g.basis - Mat::Identity(4, 4)), 1e-9);

    // Left factor algebra of an entangled rank-1 projector, in a rotated frame.
    std::mt19937_64 rng(2);
    Mat U = random_unitary(4, rng);
    Vec psi = (ket(4, 0) + 2.0 * ket(4, 3)) / std::sqrt(5.0);
    auto left = induced_algebra(projector_of(psi), {2, 2}, 0);
    std::vector<Mat> rotated;
    for (const Mat& b : left.basis) rotated.push_back(U * kron(b, Mat::Identity(2, 2)) * U.adjoint());
    auto ra = generate_algebra(rotated);
    auto h = block_tensor_factorization(ra);
    EXPECT_EQ(h.factor_dims, (Dims{2, 2}));
    EXPECT_LT(slot_residual(ra, h.basis, h.factor_dims, 0), 1e-9);

    auto bad = generate_algebra({diag3(1, 0, 0)});
    EXPECT_THROW(block_tensor_factorization(bad), InputError);
}

TEST(separating_decomposition, examples) {
    auto A = generate_algebra({kron(pauli('X'), pauli('I')), kron(pauli('Z'), pauli('I'))});
    auto B = generate_algebra({kron(pauli('I'), pauli('X')), kron(pauli('I'), pauli('Z'))});
    auto s = separating_decomposition({A, B});
    ASSERT_EQ(s.blocks.size(), 1u);
    EXPECT_EQ(s.blocks[0].factor_dims, (Dims{2, 2, 1}));

    auto Z1 = generate_algebra({kron(pauli('Z'), pauli('I'))});
    auto Z2 = generate_algebra({kron(pauli('I'), pauli('Z'))});
    auto t = separating_decomposition({Z1, Z2});
    ASSERT_EQ(t.blocks.size(), 4u);
    for (auto& b : t.blocks) EXPECT_EQ(b.factor_dims, (Dims{1, 1, 1}));
    Mat sum = Mat::Zero(4, 4);
    for (auto& P : t.decomposition.projectors) {
        sum += P;
        EXPECT_LT(max_abs(P - P.diagonal().asDiagonal().toDenseMatrix()), 1e-9);
    }
    EXPECT_LT(max_abs(sum - Mat::Identity(4, 4)), 1e-9);

    auto u = separating_decomposition({full_algebra(4)});
    ASSERT_EQ(u.blocks.size(), 1u);
    EXPECT_EQ(u.blocks[0].factor_dims, (Dims{4, 1}));

    EXPECT_THROW(separating_decomposition({generate_algebra({pauli('X')}), generate_algebra({pauli('Z')})}), InputError);
}

TEST(separating_decomposition, random_commuting_pairs) {
    // A = U (M_2 (x) I_2 (+) C) U^dag and its commutant-side partner.
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        Mat U = random_unitary(5, rng);
        auto lift = [&](const Mat& x4, double c) {
            Mat m = Mat::Zero(5, 5);
            m.topLeftCorner(4, 4) = x4;
            m(4, 4) = c;
            return Mat(U * m * U.adjoint());
        };
        auto A = generate_algebra({lift(kron(pauli('X'), pauli('I')), 0), lift(kron(pauli('Z'), pauli('I')), 0)});
        auto B = generate_algebra({lift(kron(pauli('I'), pauli('Y')), 0), lift(kron(pauli('I'), pauli('X')), 0)});
        auto s = separating_decomposition({A, B});
        ASSERT_EQ(s.blocks.size(), 2u);
        for (auto& b : s.blocks) {
            EXPECT_LT(slot_residual(A, b.basis, b.factor_dims, 0), 1e-8);
            EXPECT_LT(slot_residual(B, b.basis, b.factor_dims, 1), 1e-8);
        }
    }
}

TEST(is_separable, examples) {
    Instance ghz;
    ghz.dims = {2, 2, 2};
    ghz.terms.push_back({0, {0, 1, 2}, projector_of((ket(8, 0) + ket(8, 7)) / std::sqrt(2.0))});
    auto r = is_separable(ghz, 0);
    EXPECT_FALSE(r.separable);
    EXPECT_EQ(r.joint_dim, 4);

    Instance empty;
    empty.dims = {2, 3};
    auto e = is_separable(empty, 1);
    EXPECT_TRUE(e.separable);
    ASSERT_EQ(e.pieces.size(), 3u);
    EXPECT_LT(max_abs(e.pieces[2] - ket(3, 2)), 0.5);

    Instance classical;
    classical.dims = {2, 2};
    classical.terms.push_back({0, {0, 1}, kron(projector_of(ket(2, 1)), projector_of(ket(2, 0)))});
    auto c = is_separable(classical, 0);
    EXPECT_TRUE(c.separable);
    ASSERT_EQ(c.pieces.size(), 2u);
    for (auto& P : c.decomposition.projectors) {
        Mat E = embed_on_support(P, {0}, {0, 1}, classical.dims);
        EXPECT_LT(max_abs(E * classical.terms[0].matrix - classical.terms[0].matrix * E), 1e-9);
    }
}

TEST(critical_subspaces, qutrit_cases) {
    auto degenerate = critical_operator(projector_of(ket(2, 0)), projector_of(ket(2, 0)), projector_of(plus2()));
    auto cs = critical_subspaces(degenerate, degenerate.terms[0], 0);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_GT(std::abs(cs[0].vector.dot(ket(3, 2))), 1 - 1e-8);

    auto indep = critical_operator(projector_of(ket(2, 0)), projector_of(ket(2, 1)), projector_of(plus2()));
    auto ci = critical_subspaces(indep, indep.terms[0], 0);
    ASSERT_EQ(ci.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_GT(std::abs(ci[i].vector.dot(ket(3, i))), 1 - 1e-8);

    Instance irr;
    irr.dims = {2, 2};
    irr.terms.push_back({0, {0, 1}, projector_of((ket(4, 0) + ket(4, 3)) / std::sqrt(2.0))});
    EXPECT_TRUE(critical_subspaces(irr, irr.terms[0], 0).empty());
}
