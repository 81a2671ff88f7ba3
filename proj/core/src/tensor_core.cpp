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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clh/errors.hpp"

namespace clh {

namespace {

std::vector<int64_t> strides_of(const Dims& dims) {
    std::vector<int64_t> s(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
    return s;
}

// Linear offsets (within a larger product space with the given strides) of
// every configuration of the listed positions, first listed position slowest.
std::vector<int64_t> offsets_for(const std::vector<int>& positions, const Dims& dims,
                                 const std::vector<int64_t>& strides) {
    std::vector<int64_t> out{0};
    for (int p : positions) {
        std::vector<int64_t> next;
        next.reserve(out.size() * dims[p]);
        for (int64_t base : out)
            for (int v = 0; v < dims[p]; ++v) next.push_back(base + v * strides[p]);
        out.swap(next);
    }
    return out;
}

Eigen::BDCSVD<Mat> svd_of(const Mat& M, unsigned options) { return Eigen::BDCSVD<Mat>(M, options); }

}  // namespace

int64_t dim_product(const Dims& dims) {
    // saturates so that cap checks stay meaningful on large instances
    int64_t p = 1;
    for (int d : dims) {
        if (d > 0 && p > std::numeric_limits<int64_t>::max() / d) return std::numeric_limits<int64_t>::max();
        p *= d;
    }
    return p;
}

bool all_finite(const Mat& M) { return M.allFinite(); }

double max_abs(const Mat& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

double spectral_norm(const Mat& M) {
    if (M.size() == 0) return 0.0;
    return svd_of(M, 0).singularValues()(0);
}

Mat kron(const Mat& A, const Mat& B) {
    Mat R(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            R.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return R;
}

std::vector<int64_t> permutation_index_map(const Dims& factor_dims, const std::vector<int>& perm) {
    if (perm.size() != factor_dims.size()) throw InputError("permutation size mismatch");
    std::vector<int> seen(perm.size(), 0);
    for (int p : perm) {
        if (p < 0 || p >= static_cast<int>(perm.size()) || seen[p]++) throw InputError("invalid permutation");
    }
    auto in_strides = strides_of(factor_dims);
    std::vector<int> positions(perm.begin(), perm.end());
    return offsets_for(positions, factor_dims, in_strides);
}

Mat permute_factors(const Mat& M, const Dims& factor_dims, const std::vector<int>& perm) {
    int64_t D = dim_product(factor_dims);
    if (M.rows() != D || M.cols() != D) throw InputError("permute_factors: dimension mismatch");
    auto map = permutation_index_map(factor_dims, perm);
    Mat R(D, D);
    for (int64_t c = 0; c < D; ++c)
        for (int64_t r = 0; r < D; ++r) R(r, c) = M(map[r], map[c]);
    return R;
}

std::vector<SchmidtPair> operator_schmidt(const Mat& M, const BipartiteCut& cut, double tol) {
    const Dims& fd = cut.factor_dims;
    int64_t D = dim_product(fd);
    if (M.rows() != D || M.cols() != D) throw InputError("operator_schmidt: dimension mismatch");
    if (!all_finite(M)) throw InputError("operator_schmidt: non-finite entries");
    std::vector<int> left = cut.left_factors;
    std::sort(left.begin(), left.end());
    left.erase(std::unique(left.begin(), left.end()), left.end());
    if (left.empty() || left.size() >= fd.size()) throw InputError("operator_schmidt: left factors must be a nonempty proper subset");
    for (int f : left)
        if (f < 0 || f >= static_cast<int>(fd.size())) throw InputError("operator_schmidt: factor index out of range");
    std::vector<int> perm = left;
    for (int f = 0; f < static_cast<int>(fd.size()); ++f)
        if (!std::binary_search(left.begin(), left.end(), f)) perm.push_back(f);
    Mat P = permute_factors(M, fd, perm);
    int64_t dL = 1;
    for (int f : left) dL *= fd[f];
    int64_t dR = D / dL;
    Mat R(dL * dL, dR * dR);
    for (int64_t iL = 0; iL < dL; ++iL)
        for (int64_t jL = 0; jL < dL; ++jL)
            for (int64_t iR = 0; iR < dR; ++iR)
                for (int64_t jR = 0; jR < dR; ++jR) R(iL * dL + jL, iR * dR + jR) = P(iL * dR + iR, jL * dR + jR);
    auto svd = svd_of(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    std::vector<SchmidtPair> out;
    if (s.size() == 0 || s(0) == 0.0) return out;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) < tol * s(0)) break;
        double w = std::sqrt(s(k));
        SchmidtPair p{Mat(dL, dL), Mat(dR, dR)};
        for (int64_t i = 0; i < dL; ++i)
            for (int64_t j = 0; j < dL; ++j) p.A(i, j) = w * svd.matrixU()(i * dL + j, k);
        for (int64_t i = 0; i < dR; ++i)
            for (int64_t j = 0; j < dR; ++j) p.B(i, j) = w * std::conj(svd.matrixV()(i * dR + j, k));
        out.push_back(std::move(p));
    }
    return out;
}

EigenSystem hermitian_eigensystem(const Mat& M, double tol) {
    if (M.rows() != M.cols()) throw InputError("hermitian_eigensystem: matrix not square");
    double scale = std::max(1.0, max_abs(M));
    if (max_abs(M - M.adjoint()) > tol * scale) throw InputError("hermitian_eigensystem: matrix not Hermitian");
    Mat H = (M + M.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    return {es.eigenvalues(), es.eigenvectors()};
}

cplx hs_inner(const Mat& X, const Mat& Y) {
    if (X.rows() == 0) return 0.0;
    return (X.adjoint() * Y).trace() / static_cast<double>(X.rows());
}

double hs_norm(const Mat& X) {
    if (X.rows() == 0) return 0.0;
    return X.norm() / std::sqrt(static_cast<double>(X.rows()));
}

std::vector<Mat> hs_orthonormalize(const std::vector<Mat>& mats, double tol) {
    std::vector<Mat> out;
    for (const Mat& X : mats) {
        if (!out.empty() && (X.rows() != out[0].rows() || X.cols() != out[0].cols()))
            throw InputError("hs_orthonormalize: dimension mismatch");
        double n0 = hs_norm(X);
        Mat v = X;
        for (int pass = 0; pass < 2; ++pass)
            for (const Mat& q : out) v -= hs_inner(q, v) * q;
        double n = hs_norm(v);
        if (n <= tol * std::max(1.0, n0)) continue;
        out.push_back(v / n);
    }
    return out;
}

Mat embed_on_support(const Mat& M, const std::vector<int>& support, const std::vector<int>& target,
                     const Dims& dims) {
    std::vector<int> spos, rpos;
    Dims tdims;
    for (int p : target) {
        if (p < 0 || p >= static_cast<int>(dims.size())) throw InputError("embed_on_support: particle out of range");
        tdims.push_back(dims[p]);
    }
    for (int p : support) {
        auto it = std::find(target.begin(), target.end(), p);
        if (it == target.end()) throw InputError("embed_on_support: support not contained in target");
        spos.push_back(static_cast<int>(it - target.begin()));
    }
    for (int t = 0; t < static_cast<int>(target.size()); ++t)
        if (std::find(spos.begin(), spos.end(), t) == spos.end()) rpos.push_back(t);
    auto st = strides_of(tdims);
    auto so = offsets_for(spos, tdims, st);
    auto ro = offsets_for(rpos, tdims, st);
    int64_t ds = static_cast<int64_t>(so.size());
    if (M.rows() != ds || M.cols() != ds) throw InputError("embed_on_support: matrix does not match support dims");
    int64_t D = dim_product(tdims);
    Mat R = Mat::Zero(D, D);
    for (int64_t e : ro)
        for (int64_t b = 0; b < ds; ++b)
            for (int64_t a = 0; a < ds; ++a) R(so[a] + e, so[b] + e) = M(a, b);
    return R;
}

Mat apply_on_wires(const Mat& X, const Dims& wire_dims, const Mat& op, const std::vector<int>& wires) {
    int64_t D = dim_product(wire_dims);
    if (X.rows() != D) throw InputError("apply_on_wires: row dimension mismatch");
    std::vector<int> rest;
    for (int w = 0; w < static_cast<int>(wire_dims.size()); ++w)
        if (std::find(wires.begin(), wires.end(), w) == wires.end()) rest.push_back(w);
    auto st = strides_of(wire_dims);
    auto wo = offsets_for(wires, wire_dims, st);
    auto ro = offsets_for(rest, wire_dims, st);
    int64_t dw = static_cast<int64_t>(wo.size());
    if (op.rows() != dw || op.cols() != dw) throw InputError("apply_on_wires: operator does not match wires");
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    // row-major copies keep the gathered rows contiguous
    RowMat Xr = X;
    RowMat Yr(D, X.cols());
    RowMat G(dw, X.cols()), H(dw, X.cols());
    for (int64_t e : ro) {
        for (int64_t b = 0; b < dw; ++b) G.row(b) = Xr.row(wo[b] + e);
        H.noalias() = op * G;
        for (int64_t a = 0; a < dw; ++a) Yr.row(wo[a] + e) = H.row(a);
    }
    return Yr;
}

std::vector<std::vector<int64_t>> wire_row_groups(const Dims& wire_dims, const std::vector<int>& wires) {
    std::vector<int> rest;
    for (int w = 0; w < static_cast<int>(wire_dims.size()); ++w)
        if (std::find(wires.begin(), wires.end(), w) == wires.end()) rest.push_back(w);
    auto st = strides_of(wire_dims);
    auto wo = offsets_for(wires, wire_dims, st);
    auto ro = offsets_for(rest, wire_dims, st);
    std::vector<std::vector<int64_t>> out(wo.size(), std::vector<int64_t>(ro.size()));
    for (size_t a = 0; a < wo.size(); ++a)
        for (size_t e = 0; e < ro.size(); ++e) out[a][e] = wo[a] + ro[e];
    return out;
}

Mat partial_average(const Mat& M, const Dims& factor_dims, const std::vector<int>& keep) {
    int64_t D = dim_product(factor_dims);
    if (M.rows() != D || M.cols() != D) throw InputError("partial_average: dimension mismatch");
    std::vector<int> rest;
    for (int f = 0; f < static_cast<int>(factor_dims.size()); ++f)
        if (std::find(keep.begin(), keep.end(), f) == keep.end()) rest.push_back(f);
    auto st = strides_of(factor_dims);
    auto ko = offsets_for(keep, factor_dims, st);
    auto ro = offsets_for(rest, factor_dims, st);
    int64_t dk = static_cast<int64_t>(ko.size());
    Mat R = Mat::Zero(dk, dk);
    for (int64_t e : ro)
        for (int64_t b = 0; b < dk; ++b)
            for (int64_t a = 0; a < dk; ++a) R(a, b) += M(ko[a] + e, ko[b] + e);
    return R / static_cast<double>(ro.size());
}

int numerical_rank(const Mat& M, double tol) {
    if (M.size() == 0) return 0;
    auto s = svd_of(M, 0).singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    while (r < s.size() && s(r) >= tol * s(0)) ++r;
    return r;
}

Mat orthonormal_range(const Mat& M, double tol) {
    if (M.size() == 0) return Mat(M.rows(), 0);
    auto svd = svd_of(M, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    int r = 0;
    if (s.size() > 0 && s(0) > 0.0)
        while (r < s.size() && s(r) >= tol * s(0)) ++r;
    return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& M, double tol) {
    if (M.rows() == 0) return Mat::Identity(M.cols(), M.cols());
    auto svd = svd_of(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int r = 0;
    if (s.size() > 0 && s(0) > 0.0)
        while (r < s.size() && s(r) >= tol * s(0)) ++r;
    return svd.matrixV().rightCols(M.cols() - r);
}

}  // namespace clh
