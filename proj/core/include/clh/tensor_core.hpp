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

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace clh {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Dims = std::vector<int>;

inline constexpr double kDefaultTol = 1e-9;

int64_t dim_product(const Dims& dims);

struct BipartiteCut {
    Dims factor_dims;
    std::vector<int> left_factors;
};

struct SchmidtPair {
    Mat A;  // acts on the left factors, in ascending factor order
    Mat B;  // acts on the remaining factors, in ascending factor order
};

// M = sum_i A_i (x) B_i after moving the left factors to the front. Pairs are
// ordered by descending singular value; the ones below tol * sigma_max are
// discarded.
std::vector<SchmidtPair> operator_schmidt(const Mat& M, const BipartiteCut& cut,
                                          double tol = kDefaultTol);

struct EigenSystem {
    RVec values;  // ascending
    Mat vectors;  // orthonormal columns
};

EigenSystem hermitian_eigensystem(const Mat& M, double tol = kDefaultTol);

// <X, Y> = trace(X^dag Y) / rows, so the identity has unit norm.
cplx hs_inner(const Mat& X, const Mat& Y);
double hs_norm(const Mat& X);

std::vector<Mat> hs_orthonormalize(const std::vector<Mat>& mats, double tol = kDefaultTol);

// Lift M acting on `support` to `target` (a superset, any order). Identity on
// the extra particles. dims is indexed by particle id.
Mat embed_on_support(const Mat& M, const std::vector<int>& support,
                     const std::vector<int>& target, const Dims& dims);

// Reorder the tensor factors of an operator: factor i of the result is factor
// perm[i] of the input.
Mat permute_factors(const Mat& M, const Dims& factor_dims, const std::vector<int>& perm);

// Index map for permute_factors: result index -> input index.
std::vector<int64_t> permutation_index_map(const Dims& factor_dims,
                                           const std::vector<int>& perm);

Mat kron(const Mat& A, const Mat& B);

double max_abs(const Mat& M);
double spectral_norm(const Mat& M);

// Singular values >= tol * sigma_max count toward the rank.
int numerical_rank(const Mat& M, double tol = kDefaultTol);

// Orthonormal basis of the column space / null space at relative tolerance.
Mat orthonormal_range(const Mat& M, double tol = kDefaultTol);
Mat null_space(const Mat& M, double tol = kDefaultTol);

// Apply `op` to the tensor factors `wires` of every column of `X`, whose rows
// are indexed by the tensor product of `wire_dims` (first factor slowest).
Mat apply_on_wires(const Mat& X, const Dims& wire_dims, const Mat& op,
                   const std::vector<int>& wires);

// rows[a][e] = linear index of the basis state with configuration a on
// `wires` and configuration e on the remaining factors (both first factor
// slowest).
std::vector<std::vector<int64_t>> wire_row_groups(const Dims& wire_dims, const std::vector<int>& wires);

// Partial trace over the factors not listed in `keep`, divided by their
// total dimension.
Mat partial_average(const Mat& M, const Dims& factor_dims, const std::vector<int>& keep);

bool all_finite(const Mat& M);

}  // namespace clh
