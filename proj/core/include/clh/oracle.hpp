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

namespace clh {

struct OracleConfig {
    int64_t dense_cap = int64_t{1} << 12;
    int64_t matrix_free_cap = int64_t{1} << 20;
    uint64_t seed = 20260;
    double certify_tol = 1e-8;
};

struct KernelResult {
    int64_t dim = 0;
    double residual = 0;  // idempotence (dense) or certification (matrix-free) residual
    std::string route;    // "dense", "matrix_free", "trivial"
};

// Rank of prod_i (I - H_i) by building it column block by column block.
// The rank is read off the trace and certified by the idempotence residual.
KernelResult kernel_dim_dense(const Instance& inst, int64_t cap);

// Randomized range finder on the same product; two independent draws must
// agree and the range must be certified invariant.
KernelResult kernel_dim_matrix_free(const Instance& inst, int64_t cap, uint64_t seed,
                                    double certify_tol = 1e-8);

// Factorizes over connected components, then picks the dense route when the
// component fits the dense cap and the matrix-free route otherwise.
int64_t common_kernel_dim(const Instance& inst, const OracleConfig& cfg = {});
bool is_frustration_free(const Instance& inst, const OracleConfig& cfg = {});

// Applies the complement product to a few Gaussian probes. A zero product is
// detected exactly; a nonzero one is missed with negligible probability.
// Cheaper than a kernel dimension when only satisfiability matters.
bool probe_null_state(const Instance& inst, const OracleConfig& cfg = {}, int probes = 8);

// Smallest eigenvalue of sum_i H_i, summed over connected components.
double ground_energy(const Instance& inst, const OracleConfig& cfg = {});

// Orthonormal basis of the common kernel of the whole instance (D x k).
Mat kernel_basis(const Instance& inst, const OracleConfig& cfg = {});

// (I - H_i) applied for every term, in descending term order, to the
// columns of X. Rows of X index the full product space.
Mat apply_complement_product(const Instance& inst, const Mat& X);

struct TopoReport {
    int64_t ground_dim = 0;
    int region_size = 0;
    int64_t observables = 0;
    double max_deviation = 0;
    std::vector<int> worst_region;
};

// For every region of at most r particles and every matrix unit O on it,
// measures || G^dag O G - tr(G^dag O G)/k * I ||_2 with G a kernel basis.
TopoReport topological_order_check(const Instance& inst, int r, const OracleConfig& cfg = {});

}  // namespace clh
