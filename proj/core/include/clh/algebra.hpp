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
#include <vector>

#include "clh/model.hpp"

namespace clh {

inline constexpr uint64_t kAlgebraSeed = 0x5eed0a1bULL;

// A dagger-closed unital algebra on C^ambient_dim, stored as a
// Hilbert-Schmidt orthonormal basis. `generators` is kept when known; the
// center computation only needs to commute with it.
struct MatrixAlgebra {
    int64_t ambient_dim = 0;
    std::vector<Mat> basis;
    std::vector<Mat> generators;

    int dim() const { return static_cast<int>(basis.size()); }
    bool contains(const Mat& M, double tol = 1e-7) const;
};

struct DirectSumDecomposition {
    std::vector<Mat> projectors;
};

// Columns of `basis` span the block and are ordered as the multi-index of
// factor_dims, first factor slowest. basis^dag a basis has the promised
// tensor form for the algebras it was built from.
struct BlockFactorization {
    int block = 0;
    Dims factor_dims;
    Mat basis;
    double residual = 0;
};

struct CriticalSubspace {
    int particle = 0;
    Vec vector;
};

MatrixAlgebra generate_algebra(const std::vector<Mat>& generators, double tol = kDefaultTol);
MatrixAlgebra scalar_algebra(int64_t dim);
MatrixAlgebra full_algebra(int64_t dim);

// Algebra generated by the left operator-Schmidt factors of M across slot
// `pos` of factor_dims.
MatrixAlgebra induced_algebra(const Mat& M, const Dims& factor_dims, int pos, double tol = kDefaultTol);
MatrixAlgebra induced_algebra(const Instance& inst, const LocalTerm& term, int particle);

MatrixAlgebra joint_induced_algebra(const Instance& inst, int particle);

MatrixAlgebra center(const MatrixAlgebra& alg, double tol = kDefaultTol);

struct CentralDecomposition {
    DirectSumDecomposition decomposition;
    std::vector<Mat> block_bases;  // D x rank, orthonormal
    std::vector<MatrixAlgebra> blocks;  // in block coordinates
    std::vector<bool> irreducible;
};

CentralDecomposition central_decomposition(const MatrixAlgebra& alg, uint64_t seed = kAlgebraSeed,
                                           double tol = kDefaultTol);

// `alg` must be a factor (trivial center). Returns factor_dims = (d1, d2)
// with alg ~ L(C^d1) (x) I(C^d2) in the returned basis.
BlockFactorization block_tensor_factorization(const MatrixAlgebra& alg, uint64_t seed = kAlgebraSeed,
                                              double tol = kDefaultTol);

struct SeparatingDecomposition {
    DirectSumDecomposition decomposition;
    // factor_dims = (n_1, ..., n_k, rest) for k input algebras.
    std::vector<BlockFactorization> blocks;
};

SeparatingDecomposition separating_decomposition(const std::vector<MatrixAlgebra>& algs,
                                                 uint64_t seed = kAlgebraSeed, double tol = kDefaultTol);

// Residual of basis^dag a basis against I (x) .. (x) X (x) .. (x) I with X on
// slot `slot`, maximized over the algebra basis.
double slot_residual(const MatrixAlgebra& alg, const Mat& basis, const Dims& factor_dims, int slot);

struct SeparabilityResult {
    bool separable = false;
    int joint_dim = 0;
    DirectSumDecomposition decomposition;
    std::vector<Mat> pieces;  // d x dim(piece), orthonormal columns
};

// Finest decomposition of the particle preserved by every term on it.
SeparabilityResult is_separable(const Instance& inst, int particle, uint64_t seed = kAlgebraSeed);

std::vector<CriticalSubspace> critical_subspaces(const Instance& inst, const LocalTerm& term, int particle,
                                                 uint64_t seed = kAlgebraSeed);
std::vector<Vec> critical_vectors(const MatrixAlgebra& alg, uint64_t seed = kAlgebraSeed);

// Maximum Frobenius norm of [a, b] over generators (or bases) of the two.
double algebra_commutator(const MatrixAlgebra& a, const MatrixAlgebra& b);

}  // namespace clh
