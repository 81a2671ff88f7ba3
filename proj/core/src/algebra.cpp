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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "clh/errors.hpp"

namespace clh {

namespace {

constexpr int64_t kMaxAlgebraEntries = int64_t{1} << 27;

Vec vec_of(const Mat& M) { return Eigen::Map<const Vec>(M.data(), M.size()); }

Mat mat_of(const Vec& v, int64_t D) { return Eigen::Map<const Mat>(v.data(), D, D); }

// Growing orthonormal column basis with relative-residual rejection.
class ColumnBasis {
   public:
    ColumnBasis(int64_t rows, double tol) : rows_(rows), tol_(tol), B_(rows, 8) {}

    // Rejects v when its residual is below tol * scale; scale defaults to |v|.
    bool add(Vec v, double scale = -1) {
        double n0 = scale >= 0 ? scale : v.norm();
        if (n0 == 0.0 || v.norm() == 0.0) return false;
        for (int pass = 0; pass < 2 && n_ > 0; ++pass) v -= B_.leftCols(n_) * (B_.leftCols(n_).adjoint() * v);
        double n = v.norm();
        if (n <= tol_ * n0) return false;
        if (n_ == B_.cols()) {
            if (rows_ * B_.cols() * 2 > kMaxAlgebraEntries)
                throw CapExceeded("algebra closure exceeds the memory budget (ambient dimension " +
                                  std::to_string(static_cast<int64_t>(std::llround(std::sqrt(rows_)))) + ")");
            B_.conservativeResize(Eigen::NoChange, B_.cols() * 2);
        }
        B_.col(n_++) = v / n;
        return true;
    }

    int size() const { return n_; }
    Vec col(int i) const { return B_.col(i); }

   private:
    int64_t rows_;
    double tol_;
    Mat B_;
    int n_ = 0;
};

std::vector<Mat> normalized_generators(const std::vector<Mat>& gens) {
    std::vector<Mat> out;
    for (const Mat& g : gens) {
        double n = hs_norm(g);
        if (n == 0.0 || !std::isfinite(n)) continue;
        out.push_back(g / n);
        if (max_abs(g - g.adjoint()) > 1e-12 * std::max(1.0, max_abs(g))) out.push_back(g.adjoint() / n);
    }
    return out;
}

Mat random_hermitian_element(const std::vector<Mat>& basis, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat h = Mat::Zero(basis[0].rows(), basis[0].cols());
    const cplx I(0, 1);
    for (const Mat& b : basis) {
        h += nd(rng) * (b + b.adjoint()) / 2.0;
        h += nd(rng) * (b - b.adjoint()) / (2.0 * I);
    }
    return (h + h.adjoint()) / 2.0;
}

Mat random_element(const std::vector<Mat>& basis, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat a = Mat::Zero(basis[0].rows(), basis[0].cols());
    for (const Mat& b : basis) a += cplx(nd(rng), nd(rng)) * b;
    return a;
}

// Orthonormal eigenvector groups of a Hermitian matrix, split at gaps.
std::vector<Mat> eigen_groups(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const RVec& ev = es.eigenvalues();
    int64_t D = ev.size();
    double spread = D ? ev(D - 1) - ev(0) : 0;
    double gap = 1e-6 * std::max(1.0, spread);
    std::vector<Mat> out;
    int64_t start = 0;
    for (int64_t i = 1; i <= D; ++i) {
        if (i == D || ev(i) - ev(i - 1) > gap) {
            out.push_back(es.eigenvectors().middleCols(start, i - start));
            start = i;
        }
    }
    return out;
}

bool same_projectors(const std::vector<Mat>& a, const std::vector<Mat>& b) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const Mat& x : a) {
        Mat P = x * x.adjoint();
        bool found = false;
        for (size_t j = 0; j < b.size() && !found; ++j) {
            if (used[j] || b[j].cols() != x.cols()) continue;
            if (max_abs(P - b[j] * b[j].adjoint()) <= 1e-6) found = used[j] = true;
        }
        if (!found) return false;
    }
    return true;
}

// Deterministic block order: first basis index where the projector has weight,
// then larger diagonal weight first, then rank.
void sort_blocks(std::vector<Mat>& blocks) {
    auto key = [](const Mat& V) {
        Mat P = V * V.adjoint();
        int64_t first = 0;
        while (first < P.rows() && P(first, first).real() < 1e-6) ++first;
        double w = first < P.rows() ? P(first, first).real() : 0.0;
        return std::make_tuple(first, -std::round(w * 1e6), V.cols());
    };
    std::stable_sort(blocks.begin(), blocks.end(), [&](const Mat& a, const Mat& b) { return key(a) < key(b); });
}

Mat slot_embed(const Mat& X, const Dims& fd, int slot) {
    int64_t before = 1, after = 1;
    for (int i = 0; i < slot; ++i) before *= fd[i];
    for (int i = slot + 1; i < static_cast<int>(fd.size()); ++i) after *= fd[i];
    return kron(kron(Mat::Identity(before, before), X), Mat::Identity(after, after));
}

MatrixAlgebra image_algebra(const MatrixAlgebra& alg, const Mat& V) {
    MatrixAlgebra out;
    out.ambient_dim = V.cols();
    ColumnBasis cb(out.ambient_dim * out.ambient_dim, 1e-9);
    for (const Mat& b : alg.basis) cb.add(vec_of(V.adjoint() * b * V), hs_norm(b) * std::sqrt(static_cast<double>(V.cols())));
    double s = std::sqrt(static_cast<double>(out.ambient_dim));
    for (int i = 0; i < cb.size(); ++i) out.basis.push_back(mat_of(cb.col(i), out.ambient_dim) * s);
    for (const Mat& g : alg.generators) out.generators.push_back(V.adjoint() * g * V);
    return out;
}

}  // namespace

bool MatrixAlgebra::contains(const Mat& M, double tol) const {
    if (M.rows() != ambient_dim || M.cols() != ambient_dim) return false;
    Mat r = M;
    for (const Mat& b : basis) r -= hs_inner(b, r) * b;
    return hs_norm(r) <= tol * std::max(1.0, hs_norm(M));
}

MatrixAlgebra scalar_algebra(int64_t dim) {
    MatrixAlgebra a;
    a.ambient_dim = dim;
    a.basis.push_back(Mat::Identity(dim, dim));
    return a;
}

MatrixAlgebra full_algebra(int64_t dim) {
    MatrixAlgebra a;
    a.ambient_dim = dim;
    double s = std::sqrt(static_cast<double>(dim));
    for (int64_t i = 0; i < dim; ++i)
        for (int64_t j = 0; j < dim; ++j) {
            Mat E = Mat::Zero(dim, dim);
            E(i, j) = s;
            a.basis.push_back(E);
            if (i == j || i + 1 == j) a.generators.push_back(E);
        }
    return a;
}

MatrixAlgebra generate_algebra(const std::vector<Mat>& generators, double tol) {
    if (generators.empty()) throw InputError("generate_algebra: no generators");
    int64_t D = generators[0].rows();
    for (const Mat& g : generators)
        if (g.rows() != D || g.cols() != D) throw InputError("generate_algebra: generators differ in dimension");
    std::vector<Mat> G = normalized_generators(generators);
    ColumnBasis cb(D * D, tol);
    std::vector<Mat> queue;
    Mat I = Mat::Identity(D, D);
    if (cb.add(vec_of(I))) queue.push_back(I);
    for (const Mat& g : G)
        if (cb.add(vec_of(g))) queue.push_back(g);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        for (const Mat& g : G) {
            Mat y = queue[qi] * g;
            // Products of nilpotents are rounding noise; judge them against the factors' scale.
            double scale = queue[qi].norm() * g.norm();
            if (cb.add(vec_of(y), scale)) queue.push_back(y / hs_norm(y));
        }
        if (cb.size() == D * D) break;
    }
    MatrixAlgebra a;
    a.ambient_dim = D;
    double s = std::sqrt(static_cast<double>(D));
    for (int i = 0; i < cb.size(); ++i) a.basis.push_back(mat_of(cb.col(i), D) * s);
    a.generators = G;
    return a;
}

MatrixAlgebra induced_algebra(const Mat& M, const Dims& factor_dims, int pos, double tol) {
    int64_t d = factor_dims.at(pos);
    std::vector<Mat> gens;
    if (factor_dims.size() == 1) {
        gens.push_back(M);
    } else {
        for (auto& pr : operator_schmidt(M, BipartiteCut{factor_dims, {pos}}, tol)) gens.push_back(pr.A);
    }
    if (gens.empty()) return scalar_algebra(d);
    return generate_algebra(gens, tol);
}

MatrixAlgebra induced_algebra(const Instance& inst, const LocalTerm& term, int particle) {
    auto it = std::find(term.support.begin(), term.support.end(), particle);
    if (it == term.support.end()) throw InputError("induced_algebra: particle not in the term's support");
    Dims fd;
    for (int p : term.support) fd.push_back(inst.dims[p]);
    return induced_algebra(term.matrix, fd, static_cast<int>(it - term.support.begin()), inst.tol);
}

MatrixAlgebra joint_induced_algebra(const Instance& inst, int particle) {
    int64_t d = inst.dims.at(particle);
    std::vector<Mat> gens;
    for (int ti : inst.terms_on(particle)) {
        const auto& t = inst.terms[ti];
        int pos = static_cast<int>(std::find(t.support.begin(), t.support.end(), particle) - t.support.begin());
        Dims fd;
        for (int p : t.support) fd.push_back(inst.dims[p]);
        if (fd.size() == 1) {
            gens.push_back(t.matrix);
            continue;
        }
        for (auto& pr : operator_schmidt(t.matrix, BipartiteCut{fd, {pos}}, inst.tol)) gens.push_back(pr.A);
    }
    if (gens.empty()) return scalar_algebra(d);
    return generate_algebra(gens, inst.tol);
}

MatrixAlgebra center(const MatrixAlgebra& alg, double tol) {
    (void)tol;
    int64_t D = alg.ambient_dim;
    int m = alg.dim();
    std::vector<Mat> gens = normalized_generators(alg.generators.empty() ? alg.basis : alg.generators);
    Mat K = Mat::Zero(m, m);
    Mat C(D * D, m);
    for (const Mat& g : gens) {
        for (int i = 0; i < m; ++i) C.col(i) = vec_of(alg.basis[i] * g - g * alg.basis[i]);
        K += C.adjoint() * C;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es((K + K.adjoint()) / 2.0);
    double top = m ? es.eigenvalues()(m - 1) : 0;
    double thr = std::max(1e-12 * top, 1e-20 * static_cast<double>(D));
    MatrixAlgebra z;
    z.ambient_dim = D;
    for (int i = 0; i < m; ++i) {
        if (es.eigenvalues()(i) > thr) break;
        Mat c = Mat::Zero(D, D);
        for (int j = 0; j < m; ++j) c += es.eigenvectors()(j, i) * alg.basis[j];
        z.basis.push_back(c);
    }
    z.generators = z.basis;
    return z;
}

CentralDecomposition central_decomposition(const MatrixAlgebra& alg, uint64_t seed, double tol) {
    int64_t D = alg.ambient_dim;
    MatrixAlgebra z = center(alg, tol);
    std::vector<Mat> groups;
    if (z.dim() <= 1) {
        groups.push_back(Mat::Identity(D, D));
    } else {
        std::mt19937_64 rng1(seed), rng2(seed + 0x51ed);
        groups = eigen_groups(random_hermitian_element(z.basis, rng1));
        auto check = eigen_groups(random_hermitian_element(z.basis, rng2));
        if (!same_projectors(groups, check))
            throw NumericalError("central_decomposition: block structure differs between two draws");
        if (static_cast<int>(groups.size()) != z.dim())
            throw NumericalError("central_decomposition: number of blocks does not match the center dimension");
        sort_blocks(groups);
    }
    CentralDecomposition out;
    for (const Mat& V : groups) {
        out.decomposition.projectors.push_back(V * V.adjoint());
        out.block_bases.push_back(V);
        out.blocks.push_back(image_algebra(alg, V));
        int64_t r = V.cols();
        out.irreducible.push_back(out.blocks.back().dim() == r * r);
    }
    return out;
}

double slot_residual(const MatrixAlgebra& alg, const Mat& basis, const Dims& factor_dims, int slot) {
    double worst = 0;
    for (const Mat& b : alg.basis) {
        Mat Y = basis.adjoint() * b * basis;
        Mat X = partial_average(Y, factor_dims, {slot});
        worst = std::max(worst, hs_norm(Y - slot_embed(X, factor_dims, slot)));
    }
    return worst;
}

BlockFactorization block_tensor_factorization(const MatrixAlgebra& alg, uint64_t seed, double tol) {
    (void)tol;
    int64_t r = alg.ambient_dim;
    int64_t dim = alg.dim();
    int64_t n = std::llround(std::sqrt(static_cast<double>(dim)));
    if (n * n != dim || r % n != 0)
        throw InputError("block_tensor_factorization: algebra dimension " + std::to_string(dim) +
                         " is not compatible with block rank " + std::to_string(r));
    int64_t m = r / n;
    BlockFactorization f;
    f.factor_dims = {static_cast<int>(n), static_cast<int>(m)};
    if (n == 1) {
        f.basis = Mat::Identity(r, r);
        return f;
    }
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::mt19937_64 rng(seed + 7919 * attempt);
        auto groups = eigen_groups(random_hermitian_element(alg.basis, rng));
        if (static_cast<int64_t>(groups.size()) != n) continue;
        bool sizes_ok = true;
        for (const Mat& g : groups) sizes_ok = sizes_ok && g.cols() == m;
        if (!sizes_ok) continue;
        Mat a = random_element(alg.basis, rng);
        Mat V(r, r);
        V.leftCols(m) = groups[0];
        bool ok = true;
        for (int64_t i = 1; i < n && ok; ++i) {
            Mat X = groups[i] * (groups[i].adjoint() * a * groups[0]);
            double c = X.norm() / std::sqrt(static_cast<double>(m));
            if (c < 1e-6) {
                ok = false;
                break;
            }
            V.middleCols(i * m, m) = X / c;
        }
        if (!ok) continue;
        double res = slot_residual(alg, V, f.factor_dims, 0);
        if (res > 1e-7) continue;
        f.basis = V;
        f.residual = res;
        return f;
    }
    throw NumericalError("block_tensor_factorization: no consistent matrix units found");
}

double algebra_commutator(const MatrixAlgebra& a, const MatrixAlgebra& b) {
    auto ga = normalized_generators(a.generators.empty() ? a.basis : a.generators);
    auto gb = normalized_generators(b.generators.empty() ? b.basis : b.generators);
    double worst = 0;
    for (const Mat& x : ga)
        for (const Mat& y : gb) worst = std::max(worst, hs_norm(x * y - y * x));
    return worst;
}

SeparatingDecomposition separating_decomposition(const std::vector<MatrixAlgebra>& algs, uint64_t seed, double tol) {
    if (algs.empty()) throw InputError("separating_decomposition: no algebras");
    int64_t D = algs[0].ambient_dim;
    for (const auto& a : algs)
        if (a.ambient_dim != D) throw InputError("separating_decomposition: algebras differ in ambient dimension");
    for (size_t i = 0; i < algs.size(); ++i)
        for (size_t j = i + 1; j < algs.size(); ++j)
            if (algebra_commutator(algs[i], algs[j]) > 1e-7)
                throw InputError("separating_decomposition: algebras " + std::to_string(i) + " and " + std::to_string(j) +
                                 " do not commute");
    // Joint refinement of the central projectors.
    std::vector<Mat> atoms{Mat::Identity(D, D)};
    for (const auto& a : algs) {
        auto cd = central_decomposition(a, seed, tol);
        if (cd.block_bases.size() == 1) continue;
        std::vector<Mat> next;
        for (const Mat& W : atoms)
            for (const Mat& B : cd.block_bases) {
                Mat M = W.adjoint() * B;
                Mat P = M * M.adjoint();
                Eigen::SelfAdjointEigenSolver<Mat> es((P + P.adjoint()) / 2.0);
                std::vector<int> keep;
                for (int i = 0; i < es.eigenvalues().size(); ++i)
                    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
                if (keep.empty()) continue;
                Mat U(W.cols(), static_cast<int64_t>(keep.size()));
                for (size_t c = 0; c < keep.size(); ++c) U.col(c) = es.eigenvectors().col(keep[c]);
                next.push_back(W * U);
            }
        atoms = std::move(next);
    }
    sort_blocks(atoms);
    SeparatingDecomposition out;
    for (size_t ai = 0; ai < atoms.size(); ++ai) {
        Mat V = atoms[ai];
        Dims prefix;
        int64_t pre = 1, rest = V.cols();
        for (size_t j = 0; j < algs.size(); ++j) {
            Dims fd = prefix;
            fd.push_back(static_cast<int>(rest));
            MatrixAlgebra local;
            local.ambient_dim = rest;
            std::vector<Mat> imgs;
            for (const Mat& b : algs[j].basis) imgs.push_back(partial_average(V.adjoint() * b * V, fd, {static_cast<int>(prefix.size())}));
            auto ortho = hs_orthonormalize(imgs, 1e-9);
            local.basis = ortho;
            for (const Mat& g : algs[j].generators)
                local.generators.push_back(partial_average(V.adjoint() * g * V, fd, {static_cast<int>(prefix.size())}));
            auto f = block_tensor_factorization(local, seed + 31 * j, tol);
            V = V * kron(Mat::Identity(pre, pre), f.basis);
            prefix.push_back(f.factor_dims[0]);
            pre *= f.factor_dims[0];
            rest = f.factor_dims[1];
        }
        BlockFactorization bf;
        bf.block = static_cast<int>(ai);
        bf.factor_dims = prefix;
        bf.factor_dims.push_back(static_cast<int>(rest));
        bf.basis = V;
        for (size_t j = 0; j < algs.size(); ++j)
            bf.residual = std::max(bf.residual, slot_residual(algs[j], V, bf.factor_dims, static_cast<int>(j)));
        if (bf.residual > 1e-6)
            throw NumericalError("separating_decomposition: factorization residual " + std::to_string(bf.residual));
        out.decomposition.projectors.push_back(atoms[ai] * atoms[ai].adjoint());
        out.blocks.push_back(std::move(bf));
    }
    return out;
}

SeparabilityResult is_separable(const Instance& inst, int particle, uint64_t seed) {
    SeparabilityResult res;
    int64_t d = inst.dims.at(particle);
    if (inst.terms_on(particle).empty()) {
        res.separable = d > 1;
        res.joint_dim = 1;
        for (int64_t i = 0; i < d; ++i) {
            Mat v = Mat::Zero(d, 1);
            v(i, 0) = 1.0;
            res.pieces.push_back(v);
            res.decomposition.projectors.push_back(v * v.adjoint());
        }
        return res;
    }
    MatrixAlgebra J = joint_induced_algebra(inst, particle);
    res.joint_dim = J.dim();
    res.separable = J.dim() < d * d;
    if (!res.separable) {
        res.pieces.push_back(Mat::Identity(d, d));
        res.decomposition.projectors.push_back(Mat::Identity(d, d));
        return res;
    }
    auto cd = central_decomposition(J, seed, inst.tol);
    for (size_t a = 0; a < cd.blocks.size(); ++a) {
        auto f = block_tensor_factorization(cd.blocks[a], seed + a, inst.tol);
        Mat full = cd.block_bases[a] * f.basis;
        int n = f.factor_dims[0], m = f.factor_dims[1];
        for (int k = 0; k < m; ++k) {
            Mat piece(d, n);
            for (int i = 0; i < n; ++i) piece.col(i) = full.col(i * m + k);
            res.decomposition.projectors.push_back(piece * piece.adjoint());
            res.pieces.push_back(piece);
        }
    }
    return res;
}

std::vector<Vec> critical_vectors(const MatrixAlgebra& alg, uint64_t seed) {
    auto cd = central_decomposition(alg, seed);
    std::vector<Vec> out;
    if (cd.block_bases.size() < 2) return out;
    for (const Mat& V : cd.block_bases) {
        if (V.cols() != 1) continue;
        Vec v = V.col(0);
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < v.size(); ++i)
            if (std::abs(v(i)) > std::abs(v(best)) + 1e-12) best = i;
        v *= std::conj(v(best)) / std::abs(v(best));
        out.push_back(v);
    }
    return out;
}

std::vector<CriticalSubspace> critical_subspaces(const Instance& inst, const LocalTerm& term, int particle,
                                                 uint64_t seed) {
    std::vector<CriticalSubspace> out;
    for (auto& v : critical_vectors(induced_algebra(inst, term, particle), seed)) out.push_back({particle, v});
    return out;
}

}  // namespace clh
