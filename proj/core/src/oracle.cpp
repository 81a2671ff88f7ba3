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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "clh/errors.hpp"

namespace clh {

namespace {

std::vector<int> descending_id_order(const Instance& inst) {
    std::vector<int> order(inst.terms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return inst.terms[a].id > inst.terms[b].id; });
    return order;
}

Mat gaussian_columns(int64_t rows, int64_t cols, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Mat O(rows, cols);
    for (int64_t c = 0; c < cols; ++c) {
        for (int64_t r = 0; r < rows; ++r) O(r, c) = cplx(nd(rng), nd(rng));
        O.col(c).normalize();
    }
    return O;
}

Mat apply_hamiltonian(const Instance& inst, const Mat& X) {
    Mat Y = Mat::Zero(X.rows(), X.cols());
    for (const auto& t : inst.terms) {
        if (t.support.empty()) {
            Y += t.matrix(0, 0) * X;
            continue;
        }
        Y += apply_on_wires(X, inst.dims, t.matrix, t.support);
    }
    return Y;
}

struct Range {
    Mat Q;
    int64_t rank = 0;
};

constexpr int64_t kMatrixFreeEntryCap = int64_t{1} << 23;

// Orthonormal basis of the range of the complement product from one draw.
Range range_finder(const Instance& inst, uint64_t seed) {
    int64_t D = dim_product(inst.dims);
    int64_t k = std::min<int64_t>(16, D);
    for (;;) {
        Mat O = gaussian_columns(D, k, seed);
        Mat Y = apply_complement_product(inst, O);
        Mat G = Y.adjoint() * Y;
        Eigen::SelfAdjointEigenSolver<Mat> es((G + G.adjoint()) / 2.0);
        // Gaussian probes keep the nonzero spectrum far above roundoff
        double top = k > 0 ? std::max(1.0, es.eigenvalues()(k - 1)) : 1.0;
        std::vector<int> keep;
        for (int64_t i = 0; i < k; ++i)
            if (es.eigenvalues()(i) > 1e-10 * top) keep.push_back(static_cast<int>(i));
        int64_t r = static_cast<int64_t>(keep.size());
        if (r > k - 8 && k < D) {
            k = std::min(2 * k, D);
            // a few dense D x k work matrices are alive at once
            if (D * k > kMatrixFreeEntryCap)
                throw CapExceeded("matrix-free oracle: kernel too large for the column budget (" + std::to_string(D) +
                                  " x " + std::to_string(k) + ")");
            continue;
        }
        Mat Q(D, r);
        for (int64_t j = 0; j < r; ++j) Q.col(j) = Y * es.eigenvectors().col(keep[j]) / std::sqrt(es.eigenvalues()(keep[j]));
        if (r > 0) {
            Eigen::HouseholderQR<Mat> qr(Q);
            Q = qr.householderQ() * Mat::Identity(D, r);
        }
        return {Q, r};
    }
}

std::vector<std::pair<Instance, int64_t>> split_components(const Instance& inst, int64_t* free_factor) {
    auto comps = particle_components(inst);
    std::vector<int> comp_of(inst.num_particles());
    for (size_t c = 0; c < comps.size(); ++c)
        for (int p : comps[c]) comp_of[p] = static_cast<int>(c);
    std::vector<std::vector<int>> terms(comps.size());
    for (int i = 0; i < static_cast<int>(inst.terms.size()); ++i)
        if (!inst.terms[i].support.empty()) terms[comp_of[inst.terms[i].support[0]]].push_back(i);
    std::vector<std::pair<Instance, int64_t>> out;
    long double free = 1;
    for (size_t c = 0; c < comps.size(); ++c) {
        if (terms[c].empty()) {
            for (int p : comps[c]) free *= inst.dims[p];
            continue;
        }
        Instance sub = sub_instance(inst, comps[c], terms[c]);
        int64_t D = dim_product(sub.dims);
        out.emplace_back(std::move(sub), D);
    }
    if (free > static_cast<long double>(std::numeric_limits<int64_t>::max() / 2))
        throw CapExceeded("kernel dimension overflows a 64-bit integer");
    *free_factor = static_cast<int64_t>(free);
    return out;
}

}  // namespace

Mat apply_complement_product(const Instance& inst, const Mat& X) {
    Mat Y = X;
    for (int i : descending_id_order(inst)) {
        const auto& t = inst.terms[i];
        if (t.support.empty()) {
            Y -= t.matrix(0, 0) * Y;
            continue;
        }
        Y -= apply_on_wires(Y, inst.dims, t.matrix, t.support);
    }
    return Y;
}

KernelResult kernel_dim_dense(const Instance& inst, int64_t cap) {
    int64_t D = dim_product(inst.dims);
    if (D > cap) throw CapExceeded("dense oracle: dimension " + std::to_string(D) + " exceeds cap " + std::to_string(cap));
    const int64_t block = std::min<int64_t>(D, 256);
    double trace = 0, res2 = 0;
    for (int64_t c0 = 0; c0 < D; c0 += block) {
        int64_t b = std::min(block, D - c0);
        Mat E = Mat::Zero(D, b);
        for (int64_t j = 0; j < b; ++j) E(c0 + j, j) = 1.0;
        Mat P = apply_complement_product(inst, E);
        for (int64_t j = 0; j < b; ++j) trace += P(c0 + j, j).real();
        Mat PP = apply_complement_product(inst, P);
        res2 += (PP - P).squaredNorm();
    }
    KernelResult r;
    r.route = "dense";
    r.residual = std::sqrt(res2);
    r.dim = std::llround(trace);
    if (std::abs(trace - static_cast<double>(r.dim)) > 1e-6 || r.residual > 1e-6)
        throw NumericalError("dense oracle: product of complements is not a projector (residual " +
                             std::to_string(r.residual) + "); terms may not commute");
    return r;
}

KernelResult kernel_dim_matrix_free(const Instance& inst, int64_t cap, uint64_t seed, double certify_tol) {
    int64_t D = dim_product(inst.dims);
    if (D > cap) throw CapExceeded("matrix-free oracle: dimension " + std::to_string(D) + " exceeds cap " + std::to_string(cap));
    Range a = range_finder(inst, seed);
    Range b = range_finder(inst, seed ^ 0x9e3779b97f4a7c15ULL);
    if (a.rank != b.rank)
        throw NumericalError("matrix-free oracle: independent draws disagree (" + std::to_string(a.rank) + " vs " +
                             std::to_string(b.rank) + ")");
    KernelResult r;
    r.route = "matrix_free";
    r.dim = a.rank;
    if (a.rank > 0) r.residual = (apply_complement_product(inst, a.Q) - a.Q).norm();
    if (r.residual > certify_tol)
        throw NumericalError("matrix-free oracle: range not certified (residual " + std::to_string(r.residual) + ")");
    return r;
}

int64_t common_kernel_dim(const Instance& inst, const OracleConfig& cfg) {
    if (inst.has_contradiction()) return 0;
    int64_t result = 1;
    auto parts = split_components(inst, &result);
    for (auto& [sub, D] : parts) {
        int64_t k;
        if (D <= cfg.dense_cap)
            k = kernel_dim_dense(sub, cfg.dense_cap).dim;
        else
            k = kernel_dim_matrix_free(sub, cfg.matrix_free_cap, cfg.seed, cfg.certify_tol).dim;
        if (k == 0) return 0;
        if (result > std::numeric_limits<int64_t>::max() / k) throw CapExceeded("kernel dimension overflows a 64-bit integer");
        result *= k;
    }
    return result;
}

bool is_frustration_free(const Instance& inst, const OracleConfig& cfg) { return common_kernel_dim(inst, cfg) > 0; }

bool probe_null_state(const Instance& inst, const OracleConfig& cfg, int probes) {
    if (inst.has_contradiction()) return false;
    int64_t unused = 1;
    for (auto& [sub, D] : split_components(inst, &unused)) {
        if (D > cfg.matrix_free_cap)
            throw CapExceeded("probe oracle: dimension " + std::to_string(D) + " exceeds cap " +
                              std::to_string(cfg.matrix_free_cap));
        Mat O = gaussian_columns(D, probes, cfg.seed);
        Mat Y = apply_complement_product(sub, O);
        double scale = O.norm();
        if (Y.norm() <= 1e-8 * scale) return false;
        if ((apply_complement_product(sub, Y) - Y).norm() > 1e-6 * scale)
            throw NumericalError("probe oracle: product of complements is not a projector; terms may not commute");
    }
    return true;
}

double ground_energy(const Instance& inst, const OracleConfig& cfg) {
    double total = 0;
    for (const auto& t : inst.terms)
        if (t.support.empty()) total += t.matrix(0, 0).real();
    int64_t unused = 1;
    for (auto& [sub, D] : split_components(inst, &unused)) {
        if (D > cfg.dense_cap)
            throw CapExceeded("ground_energy: dimension " + std::to_string(D) + " exceeds cap " + std::to_string(cfg.dense_cap));
        if (D <= 512) {
            Mat H = apply_hamiltonian(sub, Mat::Identity(D, D));
            Eigen::SelfAdjointEigenSolver<Mat> es((H + H.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
            total += es.eigenvalues()(0);
            continue;
        }
        // Lanczos with full reorthogonalization.
        int64_t m = std::min<int64_t>(D, 200);
        Mat V(D, m);
        V.col(0) = gaussian_columns(D, 1, cfg.seed);
        std::vector<double> alpha, beta;
        int64_t used = 0;
        for (int64_t j = 0; j < m; ++j) {
            used = j + 1;
            Vec w = apply_hamiltonian(sub, V.col(j));
            double a = V.col(j).dot(w).real();
            alpha.push_back(a);
            for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
            double b = w.norm();
            if (j + 1 == m || b < 1e-10) break;
            beta.push_back(b);
            V.col(j + 1) = w / b;
        }
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(used, used);
        for (int64_t i = 0; i < used; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < used) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
        total += es.eigenvalues()(0);
    }
    return total;
}

Mat kernel_basis(const Instance& inst, const OracleConfig& cfg) {
    int64_t D = dim_product(inst.dims);
    if (D > cfg.dense_cap)
        throw CapExceeded("kernel_basis: dimension " + std::to_string(D) + " exceeds cap " + std::to_string(cfg.dense_cap));
    Range a = range_finder(inst, cfg.seed);
    if (a.rank > 0) {
        double res = (apply_complement_product(inst, a.Q) - a.Q).norm();
        if (res > cfg.certify_tol) throw NumericalError("kernel_basis: range not certified");
    }
    return a.Q;
}

TopoReport topological_order_check(const Instance& inst, int r, const OracleConfig& cfg) {
    if (r < 1) throw InputError("topological_order_check: region size must be >= 1");
    Mat G = kernel_basis(inst, cfg);
    int64_t k = G.cols();
    if (k < 2) throw InputError("topological_order_check: ground space is nondegenerate (dimension " + std::to_string(k) + ")");
    TopoReport rep;
    rep.ground_dim = k;
    rep.region_size = r;
    int n = inst.num_particles();
    std::vector<int> region;
    auto visit = [&](const std::vector<int>& R) {
        auto rows = wire_row_groups(inst.dims, R);
        std::vector<Mat> Ga(rows.size());
        for (size_t a = 0; a < rows.size(); ++a) {
            Ga[a].resize(static_cast<int64_t>(rows[a].size()), k);
            for (size_t e = 0; e < rows[a].size(); ++e) Ga[a].row(e) = G.row(rows[a][e]);
        }
        for (size_t a = 0; a < rows.size(); ++a)
            for (size_t b = 0; b < rows.size(); ++b) {
                Mat M = Ga[a].adjoint() * Ga[b];
                cplx c = M.trace() / static_cast<double>(k);
                double dev = spectral_norm(M - c * Mat::Identity(k, k));
                ++rep.observables;
                if (dev > rep.max_deviation) {
                    rep.max_deviation = dev;
                    rep.worst_region = R;
                }
            }
    };
    // Regions in lexicographic order of their particle lists.
    std::function<void(int)> rec = [&](int start) {
        if (!region.empty()) visit(region);
        if (static_cast<int>(region.size()) == r) return;
        for (int p = start; p < n; ++p) {
            region.push_back(p);
            rec(p + 1);
            region.pop_back();
        }
    };
    rec(0);
    return rep;
}

}  // namespace clh
