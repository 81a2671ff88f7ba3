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

#include "clh/tensor_core.hpp"

#include <random>

#include "gtest/gtest.h"

#include "clh/errors.hpp"
#include "clh/operators.hpp"

using namespace clh;

namespace {

Mat reconstruct(const std::vector<SchmidtPair>& pairs) {
    Mat M = Mat::Zero(pairs[0].A.rows() * pairs[0].B.rows(), pairs[0].A.cols() * pairs[0].B.cols());
    for (const auto& p : pairs) M += kron(p.A, p.B);
    return M;
}

Mat random_hermitian(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = cplx(nd(rng), nd(rng));
    return (g + g.adjoint()) / 2.0;
}

// Direct index arithmetic: result(r, c) is M(rs, cs) when the rest digits agree.
Mat naive_embed(const Mat& M, const std::vector<int>& support, const std::vector<int>& target, const Dims& dims) {
    Dims td;
    for (int p : target) td.push_back(dims[p]);
    int64_t D = dim_product(td);
    auto digits = [&](int64_t x) {
        std::vector<int> out(td.size());
        for (int i = static_cast<int>(td.size()) - 1; i >= 0; --i) {
            out[i] = static_cast<int>(x % td[i]);
            x /= td[i];
        }
        return out;
    };
    Mat R = Mat::Zero(D, D);
    for (int64_t r = 0; r < D; ++r)
        for (int64_t c = 0; c < D; ++c) {
            auto dr = digits(r), dc = digits(c);
            bool ok = true;
            int64_t sr = 0, sc = 0;
            for (size_t t = 0; t < target.size(); ++t) {
                auto it = std::find(support.begin(), support.end(), target[t]);
                if (it == support.end()) {
                    ok = ok && dr[t] == dc[t];
                }
            }
            if (!ok) continue;
            for (int p : support) {
                size_t t = std::find(target.begin(), target.end(), p) - target.begin();
                sr = sr * dims[p] + dr[t];
                sc = sc * dims[p] + dc[t];
            }
            R(r, c) = M(sr, sc);
        }
    return R;
}

}  // namespace

TEST(operator_schmidt, zz_is_one_pair) {
    auto pairs = operator_schmidt(pauli_string("ZZ"), {{2, 2}, {0}});
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_LT(max_abs(reconstruct(pairs) - pauli_string("ZZ")), 1e-12);
    cplx c = pairs[0].A(0, 0);
    EXPECT_LT(max_abs(pairs[0].A - c * pauli('Z')), 1e-12);
}

TEST(operator_schmidt, controlled_z_has_two_pairs) {
    Mat P0 = projector_of(ket(2, 0)), P1 = projector_of(ket(2, 1));
    Mat M = kron(P0, pauli('I')) + kron(P1, pauli('Z'));
    auto pairs = operator_schmidt(M, {{2, 2}, {0}});
    ASSERT_EQ(pairs.size(), 2u);
    std::vector<Mat> span{pairs[0].A, pairs[1].A, P0, P1};
    EXPECT_EQ(hs_orthonormalize(span).size(), 2u);
}

TEST(operator_schmidt, ghz_projector_has_four_pairs) {
    Vec g = (ket(8, 0) + ket(8, 7)) / std::sqrt(2.0);
    Mat M = projector_of(g);
    auto pairs = operator_schmidt(M, {{2, 2, 2}, {0}});
    EXPECT_EQ(pairs.size(), 4u);
    std::vector<Mat> lefts;
    for (auto& p : pairs) lefts.push_back(p.A);
    EXPECT_EQ(hs_orthonormalize(lefts).size(), 4u);
    EXPECT_LT(max_abs(reconstruct(pairs) - M), 1e-12);
}

TEST(operator_schmidt, swap_has_four_pairs_either_side) {
    Mat S = Mat::Zero(4, 4);
    S(0, 0) = S(3, 3) = S(1, 2) = S(2, 1) = 1;
    EXPECT_EQ(operator_schmidt(S, {{2, 2}, {0}}).size(), 4u);
    EXPECT_EQ(operator_schmidt(S, {{2, 2}, {1}}).size(), 4u);
}

TEST(operator_schmidt, random_reconstruction) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> nf(2, 4), df(2, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        int k = nf(rng);
        Dims fd(k);
        for (auto& d : fd) d = df(rng);
        if (dim_product(fd) > 81) fd.resize(2);
        k = static_cast<int>(fd.size());
        std::vector<int> left;
        for (int f = 0; f < k; ++f)
            if (rng() % 2) left.push_back(f);
        if (left.empty()) left.push_back(0);
        if (static_cast<int>(left.size()) == k) left.pop_back();
        Mat M = random_hermitian(static_cast<int>(dim_product(fd)), rng);
        auto pairs = operator_schmidt(M, {fd, left}, 1e-9);
        std::vector<int> perm = left, rest;
        for (int f = 0; f < k; ++f)
            if (std::find(left.begin(), left.end(), f) == left.end()) perm.push_back(f);
        Mat Mp = permute_factors(M, fd, perm);
        ASSERT_LT(spectral_norm(reconstruct(pairs) - Mp), 1e-9) << "trial " << trial;
    }
}

TEST(operator_schmidt, errors) {
    EXPECT_THROW(operator_schmidt(Mat::Identity(3, 3), {{2, 2}, {0}}), InputError);
    EXPECT_THROW(operator_schmidt(Mat::Identity(4, 4), {{2, 2}, {0, 1}}), InputError);
    Mat bad = Mat::Identity(4, 4);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(operator_schmidt(bad, {{2, 2}, {0}}), InputError);
}

TEST(hermitian_eigensystem, examples) {
    auto z = hermitian_eigensystem(pauli('Z'));
    EXPECT_NEAR(z.values(0), -1, 1e-12);
    EXPECT_NEAR(z.values(1), 1, 1e-12);
    auto id = hermitian_eigensystem(Mat::Identity(3, 3));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(id.values(i), 1, 1e-12);
    EXPECT_LT(max_abs(id.vectors.adjoint() * id.vectors - Mat::Identity(3, 3)), 1e-12);
    Vec plus = (ket(2, 0) + ket(2, 1)) / std::sqrt(2.0);
    Vec minus = (ket(2, 0) - ket(2, 1)) / std::sqrt(2.0);
    auto p = hermitian_eigensystem(projector_of(plus));
    EXPECT_NEAR(p.values(0), 0, 1e-12);
    EXPECT_NEAR(std::abs(p.vectors.col(0).dot(minus)), 1, 1e-12);
    EXPECT_NEAR(std::abs(p.vectors.col(1).dot(plus)), 1, 1e-12);
    Mat nh = Mat::Zero(2, 2);
    nh(0, 1) = 1;
    EXPECT_THROW(hermitian_eigensystem(nh), InputError);
}

TEST(hs_orthonormalize, examples) {
    Mat I = Mat::Identity(2, 2);
    auto a = hs_orthonormalize({I, I});
    ASSERT_EQ(a.size(), 1u);
    EXPECT_NEAR(hs_norm(a[0]), 1, 1e-12);
    EXPECT_EQ(hs_orthonormalize({I, pauli('Z')}).size(), 2u);
    EXPECT_EQ(hs_orthonormalize({pauli('X'), pauli('Y'), pauli('X') + pauli('Y')}).size(), 2u);
    EXPECT_TRUE(hs_orthonormalize({}).empty());
    EXPECT_NEAR(hs_norm(Mat::Identity(5, 5)), 1, 1e-12);
}

TEST(embed_on_support, examples) {
    Dims dims{2, 2, 2};
    EXPECT_EQ(max_abs(embed_on_support(pauli('X'), {0}, {0, 1}, dims) - pauli_string("XI")), 0);
    Mat M = pauli('Y');
    EXPECT_EQ(max_abs(embed_on_support(M, {1}, {0, 1}, dims) - kron(pauli('I'), M)), 0);
    std::mt19937_64 rng(3);
    Mat A = random_hermitian(4, rng);
    Mat direct = embed_on_support(A, {0, 2}, {0, 1, 2}, dims);
    EXPECT_EQ(max_abs(direct - naive_embed(A, {0, 2}, {0, 1, 2}, dims)), 0);
    EXPECT_THROW(embed_on_support(A, {0, 2}, {0, 1}, dims), InputError);
    EXPECT_THROW(embed_on_support(pauli('X'), {0, 1}, {0, 1}, dims), InputError);
}

TEST(embed_on_support, composition_is_exact) {
    std::mt19937_64 rng(5);
    Dims dims{2, 3, 2, 2};
    for (int trial = 0; trial < 50; ++trial) {
        Mat A = random_hermitian(6, rng);
        Mat direct = embed_on_support(A, {1, 3}, {0, 1, 2, 3}, dims);
        Mat step = embed_on_support(embed_on_support(A, {1, 3}, {1, 2, 3}, dims), {1, 2, 3}, {0, 1, 2, 3}, dims);
        EXPECT_EQ(max_abs(direct - step), 0);
        Mat shuffled = embed_on_support(A, {1, 3}, {3, 1, 0}, dims);
        EXPECT_EQ(max_abs(shuffled - naive_embed(A, {1, 3}, {3, 1, 0}, dims)), 0);
    }
}

TEST(tensor_core, apply_on_wires_matches_embedding) {
    std::mt19937_64 rng(8);
    Dims dims{2, 3, 2};
    Mat op = random_hermitian(4, rng);
    Mat X = random_hermitian(12, rng);
    Mat full = embed_on_support(op, {2, 0}, {0, 1, 2}, dims);
    EXPECT_LT(max_abs(apply_on_wires(X, dims, op, {2, 0}) - full * X), 1e-12);
}

TEST(tensor_core, partial_average_inverts_embedding) {
    std::mt19937_64 rng(9);
    Mat B = random_hermitian(3, rng);
    Mat M = kron(Mat::Identity(2, 2), B);
    EXPECT_LT(max_abs(partial_average(M, {2, 3}, {1}) - B), 1e-12);
}

TEST(tensor_core, ranks_and_spaces) {
    Mat M = Mat::Zero(3, 3);
    M(0, 0) = 1;
    M(1, 1) = 1e-12;
    EXPECT_EQ(numerical_rank(M), 1);
    EXPECT_EQ(orthonormal_range(M).cols(), 1);
    EXPECT_EQ(null_space(M).cols(), 2);
    EXPECT_EQ(numerical_rank(Mat::Zero(2, 2)), 0);
}
