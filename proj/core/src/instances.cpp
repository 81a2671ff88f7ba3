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

#include "clh/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "clh/algebra.hpp"
#include "clh/errors.hpp"
#include "clh/operators.hpp"
#include "clh/oracle.hpp"
#include "clh/structure.hpp"

namespace clh {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Mat diag_projector(int64_t D, const std::vector<int64_t>& indices) {
    Mat P = Mat::Zero(D, D);
    for (int64_t i : indices) P(i, i) = 1.0;
    return P;
}

Mat product_of(const std::vector<Mat>& U, const std::vector<int>& support) {
    Mat out = Mat::Identity(1, 1);
    for (int p : support) out = kron(out, U[p]);
    return out;
}

std::vector<Mat> random_rotations(const Dims& dims, std::mt19937_64& rng, bool rotate) {
    std::vector<Mat> U;
    for (int d : dims) U.push_back(rotate ? random_unitary(d, rng) : Mat::Identity(d, d));
    return U;
}

// Random orthogonal projector of the given rank.
Mat random_projector(int D, int rank, std::mt19937_64& rng) {
    if (rank <= 0) return Mat::Zero(D, D);
    if (rank >= D) return Mat::Identity(D, D);
    Mat Q = random_unitary(D, rng).leftCols(rank);
    return Q * Q.adjoint();
}

int64_t config_index(const Dims& dims, const std::vector<int>& digits) {
    int64_t idx = 0;
    for (size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + digits[i];
    return idx;
}

LocalTerm make_term(int id, std::vector<int> support, Mat M) { return LocalTerm{id, std::move(support), std::move(M)}; }

// Qutrit Weyl operator X^a Z^b.
Mat weyl3(int a, int b) {
    const cplx w = std::polar(1.0, 2 * M_PI / 3);
    Mat X = Mat::Zero(3, 3), Z = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
        X((i + 1) % 3, i) = 1.0;
        Z(i, i) = std::pow(w, i);
    }
    Mat out = Mat::Identity(3, 3);
    for (int i = 0; i < a; ++i) out = out * X;
    for (int i = 0; i < b; ++i) out = out * Z;
    return out;
}

// Projector onto the eigenvalue-lambda space of an order-3 unitary K with K^3 = I.
Mat eigen_projector3(const Mat& K, int k) {
    const cplx lam = std::polar(1.0, 2 * M_PI * k / 3);
    Mat I = Mat::Identity(K.rows(), K.cols());
    return (I + std::conj(lam) * K + std::conj(lam * lam) * K * K) / 3.0;
}

// Instances whose particles carry hidden direct sums of tensor products with
// one slot per incident term. Terms act on their own slots only, so they
// commute by construction.
struct SlotDesign {
    std::vector<std::vector<int>> supports;
    // blocks[p][alpha][k] = slot dimension of the k-th incident term of p
    std::vector<std::vector<std::vector<int>>> blocks;
};

Instance slot_instance(const SlotDesign& design, bool satisfiable, std::mt19937_64& rng) {
    int n = static_cast<int>(design.blocks.size());
    std::vector<std::vector<int>> incident(n);
    for (size_t t = 0; t < design.supports.size(); ++t)
        for (int p : design.supports[t]) incident[p].push_back(static_cast<int>(t));
    Instance inst;
    for (int p = 0; p < n; ++p) {
        int d = 0;
        for (const auto& blk : design.blocks[p]) {
            int N = 1;
            for (int s : blk) N *= s;
            d += N;
        }
        inst.dims.push_back(d);
        inst.labels.push_back("p" + std::to_string(p));
    }
    // decode[p][i] = (block, slot digits) of basis index i
    std::vector<std::vector<std::pair<int, std::vector<int>>>> decode(n);
    for (int p = 0; p < n; ++p) {
        for (size_t a = 0; a < design.blocks[p].size(); ++a) {
            const auto& blk = design.blocks[p][a];
            int N = 1;
            for (int s : blk) N *= s;
            for (int i = 0; i < N; ++i) {
                std::vector<int> digits(blk.size());
                int r = i;
                for (int k = static_cast<int>(blk.size()) - 1; k >= 0; --k) {
                    digits[k] = r % blk[k];
                    r /= blk[k];
                }
                decode[p].push_back({static_cast<int>(a), digits});
            }
        }
    }
    std::vector<int> planted(n);
    for (int p = 0; p < n; ++p) planted[p] = uniform(rng, 0, static_cast<int>(design.blocks[p].size()) - 1);
    auto U = random_rotations(inst.dims, rng, true);
    for (size_t t = 0; t < design.supports.size(); ++t) {
        const auto& S = design.supports[t];
        std::vector<int> slot_of(S.size());
        for (size_t j = 0; j < S.size(); ++j)
            slot_of[j] = static_cast<int>(std::find(incident[S[j]].begin(), incident[S[j]].end(), static_cast<int>(t)) -
                                          incident[S[j]].begin());
        // one random projector per block combination
        std::map<std::vector<int>, Mat> h;
        std::function<void(size_t, std::vector<int>&)> draw = [&](size_t j, std::vector<int>& combo) {
            if (j == S.size()) {
                int N = 1;
                bool is_planted = true;
                for (size_t k = 0; k < S.size(); ++k) {
                    N *= design.blocks[S[k]][combo[k]][slot_of[k]];
                    if (combo[k] != planted[S[k]]) is_planted = false;
                }
                int rank = (satisfiable && is_planted) ? uniform(rng, 0, N - 1) : uniform(rng, 0, N);
                h[combo] = random_projector(N, rank, rng);
                return;
            }
            for (int a = 0; a < static_cast<int>(design.blocks[S[j]].size()); ++a) {
                combo.push_back(a);
                draw(j + 1, combo);
                combo.pop_back();
            }
        };
        std::vector<int> combo;
        draw(0, combo);
        Dims sd;
        for (int p : S) sd.push_back(inst.dims[p]);
        int64_t D = dim_product(sd);
        Mat H = Mat::Zero(D, D);
        std::vector<int> ri(S.size()), ci(S.size());
        for (int64_t r = 0; r < D; ++r) {
            int64_t x = r;
            for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
                ri[k] = static_cast<int>(x % sd[k]);
                x /= sd[k];
            }
            for (int64_t c = 0; c < D; ++c) {
                int64_t y = c;
                for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
                    ci[k] = static_cast<int>(y % sd[k]);
                    y /= sd[k];
                }
                bool ok = true;
                std::vector<int> blocks(S.size());
                int64_t hr = 0, hc = 0;
                for (size_t k = 0; k < S.size() && ok; ++k) {
                    const auto& [ba, da] = decode[S[k]][ri[k]];
                    const auto& [bb, db] = decode[S[k]][ci[k]];
                    if (ba != bb) {
                        ok = false;
                        break;
                    }
                    for (size_t s = 0; s < da.size(); ++s)
                        if (static_cast<int>(s) != slot_of[k] && da[s] != db[s]) ok = false;
                    int n_slot = design.blocks[S[k]][ba][slot_of[k]];
                    hr = hr * n_slot + da[slot_of[k]];
                    hc = hc * n_slot + db[slot_of[k]];
                    blocks[k] = ba;
                }
                if (ok) H(r, c) = h[blocks](hr, hc);
            }
        }
        Mat R = product_of(U, S);
        Mat M = R * H * R.adjoint();
        inst.terms.push_back(make_term(static_cast<int>(t), S, (M + M.adjoint()) / 2.0));
    }
    inst.k = 0;
    for (const auto& t : inst.terms) inst.k = std::max(inst.k, static_cast<int>(t.support.size()));
    return normalize(inst, false).instance;
}

// Block structure with slot dims in [1, max_slot] for `deg` incident terms,
// total dimension in [min_dim, max_dim].
std::vector<std::vector<int>> random_blocks(int deg, int max_blocks, int max_slot, int min_dim, int max_dim,
                                            std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        int b = uniform(rng, 1, max_blocks);
        std::vector<std::vector<int>> blocks;
        int d = 0;
        for (int a = 0; a < b; ++a) {
            std::vector<int> blk;
            int N = 1;
            for (int k = 0; k < deg; ++k) {
                blk.push_back(uniform(rng, 1, max_slot));
                N *= blk.back();
            }
            d += N;
            blocks.push_back(blk);
        }
        if (d >= min_dim && d <= max_dim) return blocks;
    }
    return {std::vector<int>(deg, 1), std::vector<int>(deg, 1)};
}

// Block structure of exactly dimension d (d <= 3): each block's size goes to
// one randomly chosen incident term.
std::vector<std::vector<int>> blocks_of_dim(int d, int deg, std::mt19937_64& rng) {
    std::vector<int> sizes;
    int left = d;
    while (left > 0) {
        int s = uniform(rng, 1, left);
        sizes.push_back(s);
        left -= s;
    }
    std::vector<std::vector<int>> blocks;
    for (int s : sizes) {
        std::vector<int> blk(deg, 1);
        blk[uniform(rng, 0, deg - 1)] = s;
        blocks.push_back(blk);
    }
    return blocks;
}

Instance classical_on_faces(const Dims& dims, const std::vector<std::vector<int>>& supports, std::mt19937_64& rng) {
    Instance inst;
    inst.dims = dims;
    for (size_t p = 0; p < dims.size(); ++p) inst.labels.push_back("q" + std::to_string(p));
    std::vector<int> plant;
    for (int d : dims) plant.push_back(uniform(rng, 0, d - 1));
    auto U = random_rotations(dims, rng, true);
    for (size_t t = 0; t < supports.size(); ++t) {
        const auto& S = supports[t];
        Dims sd;
        std::vector<int> pd;
        for (int p : S) {
            sd.push_back(dims[p]);
            pd.push_back(plant[p]);
        }
        int64_t D = dim_product(sd);
        int64_t avoid = config_index(sd, pd);
        int64_t pick;
        do {
            pick = std::uniform_int_distribution<int64_t>(0, D - 1)(rng);
        } while (pick == avoid);
        Mat R = product_of(U, S);
        Mat M = R * diag_projector(D, {pick}) * R.adjoint();
        inst.terms.push_back(make_term(static_cast<int>(t), S, (M + M.adjoint()) / 2.0));
    }
    inst.k = 3;
    return inst;
}

}  // namespace

ToricInstance gen_toric(int n) {
    if (n < 2) throw InputError("gen_toric: n must be at least 2");
    ToricInstance out;
    out.n = n;
    auto h = [n](int x, int y) { return 2 * ((((y % n) + n) % n) * n + (((x % n) + n) % n)); };
    auto v = [n](int x, int y) { return 2 * ((((y % n) + n) % n) * n + (((x % n) + n) % n)) + 1; };
    Instance& inst = out.instance;
    inst.dims.assign(2 * n * n, 2);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            inst.labels.push_back("h" + std::to_string(x) + "_" + std::to_string(y));
            inst.labels.push_back("v" + std::to_string(x) + "_" + std::to_string(y));
        }
    Mat XXXX = minus_projector(pauli_string("XXXX"));
    Mat ZZZZ = minus_projector(pauli_string("ZZZZ"));
    int id = 0;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            std::array<int, 4> s{h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)};
            std::sort(s.begin(), s.end());
            out.vertices.push_back(s);
            inst.terms.push_back(make_term(id++, {s.begin(), s.end()}, XXXX));
        }
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            std::array<int, 4> s{h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)};
            std::sort(s.begin(), s.end());
            out.plaquettes.push_back(s);
            out.pairs.push_back({h(x, y + 1), v(x + 1, y)});
            inst.terms.push_back(make_term(id++, {s.begin(), s.end()}, ZZZZ));
        }
    inst.k = 4;
    return out;
}

Instance pair_toric(const ToricInstance& toric) {
    const Instance& q = toric.instance;
    std::vector<int> owner(q.num_particles(), -1);
    for (size_t i = 0; i < toric.pairs.size(); ++i)
        for (int e : toric.pairs[i]) owner[e] = static_cast<int>(i);
    for (int o : owner)
        if (o < 0) throw InputError("pair_toric: pairs do not cover every qubit");
    Instance out;
    out.dims.assign(toric.pairs.size(), 4);
    for (size_t i = 0; i < toric.pairs.size(); ++i) out.labels.push_back("pair" + std::to_string(i));
    out.k = 3;
    out.tol = q.tol;
    for (const auto& t : q.terms) {
        std::set<int> qudits;
        for (int e : t.support) qudits.insert(owner[e]);
        std::vector<int> target;
        for (int u : qudits) {
            target.push_back(toric.pairs[u][0]);
            target.push_back(toric.pairs[u][1]);
        }
        Mat M = embed_on_support(t.matrix, t.support, target, q.dims);
        out.terms.push_back(make_term(t.id, {qudits.begin(), qudits.end()}, M));
    }
    return out;
}

Instance gen_classical(const ClassicalConfig& cfg) {
    if (cfg.n < cfg.k || cfg.k < 1 || cfg.d < 2 || cfg.m < 0) throw InputError("gen_classical: bad size parameters");
    int64_t D = 1;
    for (int i = 0; i < cfg.k; ++i) D *= cfg.d;
    if (cfg.rank < 1 || cfg.rank > D) throw InputError("gen_classical: rank out of range");
    if (cfg.satisfiable && cfg.rank >= D)
        throw InputError("gen_classical: a satisfiable planting is impossible at full rank");
    std::mt19937_64 rng(cfg.seed);
    Instance inst;
    inst.dims.assign(cfg.n, cfg.d);
    for (int p = 0; p < cfg.n; ++p) inst.labels.push_back("x" + std::to_string(p));
    inst.k = cfg.k;
    std::vector<int> plant(cfg.n);
    for (int& x : plant) x = uniform(rng, 0, cfg.d - 1);
    auto U = random_rotations(inst.dims, rng, cfg.rotate);
    Dims sd(cfg.k, cfg.d);
    std::vector<int> all(cfg.n);
    std::iota(all.begin(), all.end(), 0);
    auto add = [&](const std::vector<int>& S, const std::vector<int64_t>& configs) {
        Mat R = product_of(U, S);
        Mat M = R * diag_projector(D, configs) * R.adjoint();
        inst.terms.push_back(make_term(static_cast<int>(inst.terms.size()), S, (M + M.adjoint()) / 2.0));
    };
    std::vector<int> first;
    for (int t = 0; t < cfg.m; ++t) {
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<int> S(all.begin(), all.begin() + cfg.k);
        std::sort(S.begin(), S.end());
        if (t == 0) first = S;
        std::vector<int> pd;
        for (int p : S) pd.push_back(plant[p]);
        int64_t avoid = config_index(sd, pd);
        std::vector<int64_t> pool;
        for (int64_t c = 0; c < D; ++c)
            if (c != avoid) pool.push_back(c);
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(std::min<int64_t>(cfg.rank, static_cast<int64_t>(pool.size())));
        add(S, pool);
    }
    if (!cfg.satisfiable) {
        if (first.empty()) {
            first.assign(all.begin(), all.begin() + cfg.k);
            std::sort(first.begin(), first.end());
        }
        // cover every configuration of one subset, `rank` per term
        std::vector<int64_t> order(D);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (int64_t c = 0; c < D; c += cfg.rank) {
            std::vector<int64_t> chunk(order.begin() + c, order.begin() + std::min<int64_t>(D, c + cfg.rank));
            add(first, chunk);
        }
    }
    return normalize(inst, false).instance;
}

Instance gen_chain(const ChainConfig& cfg) {
    if (cfg.L < 1) throw InputError("gen_chain: L must be at least 1");
    std::mt19937_64 rng(cfg.seed);
    int nb = cfg.L + 2;
    int np = cfg.style == ChainStyle::pendants ? cfg.pendants
             : cfg.style == ChainStyle::cluster ? std::min(cfg.pendants, 2)
                                                : 0;
    Instance inst;
    inst.dims.assign(nb + np, 2);
    for (int p = 0; p < nb; ++p) inst.labels.push_back("b" + std::to_string(p));
    for (int p = 0; p < np; ++p) inst.labels.push_back("v" + std::to_string(p));
    inst.k = 3;
    if (cfg.style == ChainStyle::cluster) {
        Mat K = pauli_string("ZXZ");
        Mat I = Mat::Identity(8, 8);
        for (int t = 0; t < cfg.L; ++t) {
            double s = uniform(rng, 0, 1) ? 1.0 : -1.0;
            inst.terms.push_back(make_term(t, {t, t + 1, t + 2}, (I - s * K) / 2.0));
        }
        // interior pendants cannot commute with the chain; the ends take Z
        Mat ZX = pauli_string("ZX");
        Mat I4 = Mat::Identity(4, 4);
        for (int k = 0; k < np; ++k) {
            double s = uniform(rng, 0, 1) ? 1.0 : -1.0;
            int end = k == 0 ? 0 : nb - 1;
            inst.terms.push_back(make_term(static_cast<int>(inst.terms.size()), {end, nb + k}, (I4 - s * ZX) / 2.0));
        }
        if (cfg.contradiction) {
            int j = cfg.L / 2;
            Mat C = I - inst.terms[j].matrix;
            inst.terms.push_back(make_term(static_cast<int>(inst.terms.size()), {j, j + 1, j + 2}, C));
        }
        return inst;
    }
    std::vector<int> plant(nb + np);
    for (int& x : plant) x = uniform(rng, 0, 1);
    auto U = random_rotations(inst.dims, rng, true);
    auto add = [&](const std::vector<int>& S) {
        int64_t D = int64_t{1} << S.size();
        std::vector<int> pd;
        for (int p : S) pd.push_back(plant[p]);
        int64_t avoid = config_index(Dims(S.size(), 2), pd);
        int64_t pick;
        do {
            pick = std::uniform_int_distribution<int64_t>(0, D - 1)(rng);
        } while (pick == avoid);
        Mat R = product_of(U, S);
        Mat M = R * diag_projector(D, {pick}) * R.adjoint();
        inst.terms.push_back(make_term(static_cast<int>(inst.terms.size()), S, (M + M.adjoint()) / 2.0));
    };
    for (int t = 0; t < cfg.L; ++t) add({t, t + 1, t + 2});
    for (int k = 0; k < np; ++k) {
        // pendant on two consecutive backbone qubits away from the ends
        int lo = nb > 4 ? 1 : 0;
        int hi = nb > 4 ? nb - 3 : nb - 2;
        int a = uniform(rng, lo, std::max(lo, hi));
        add({a, a + 1, nb + k});
    }
    if (cfg.contradiction) {
        const auto& t0 = inst.terms[cfg.L / 2];
        Mat C = Mat::Identity(t0.matrix.rows(), t0.matrix.cols()) - t0.matrix;
        inst.terms.push_back(make_term(static_cast<int>(inst.terms.size()), t0.support, C));
    }
    return inst;
}

Instance gen_two_local(const TwoLocalConfig& cfg) {
    if (cfg.num_vertices < 1) throw InputError("gen_two_local: need at least one vertex");
    std::mt19937_64 rng(cfg.seed);
    SlotDesign design;
    std::vector<int> deg(cfg.num_vertices, 0);
    std::set<std::array<int, 2>> seen;
    for (auto e : cfg.edges) {
        if (e[0] == e[1] || e[0] < 0 || e[1] < 0 || e[0] >= cfg.num_vertices || e[1] >= cfg.num_vertices)
            throw InputError("gen_two_local: bad edge");
        if (e[0] > e[1]) std::swap(e[0], e[1]);
        if (!seen.insert(e).second) throw InputError("gen_two_local: repeated edge");
        design.supports.push_back({e[0], e[1]});
        ++deg[e[0]];
        ++deg[e[1]];
    }
    for (int v = 0; v < cfg.num_vertices; ++v) {
        if (deg[v] == 0) {
            design.blocks.push_back({{}, {}});
            continue;
        }
        int max_dim = deg[v] >= 3 ? 8 : 4;
        design.blocks.push_back(random_blocks(deg[v], cfg.max_blocks, 2, 2, max_dim, rng));
    }
    Instance inst = slot_instance(design, true, rng);
    if (!cfg.satisfiable && !inst.terms.empty()) {
        const auto& t0 = inst.terms.front();
        Mat C = Mat::Identity(t0.matrix.rows(), t0.matrix.cols()) - t0.matrix;
        inst.terms.push_back(make_term(static_cast<int>(design.supports.size()), t0.support, C));
    }
    inst.k = 2;
    return inst;
}

TwoLocalConfig star_config(int leaves, uint64_t seed, bool satisfiable) {
    TwoLocalConfig cfg;
    cfg.num_vertices = leaves + 1;
    cfg.edges.clear();
    for (int i = 1; i <= leaves; ++i) cfg.edges.push_back({0, i});
    cfg.seed = seed;
    cfg.satisfiable = satisfiable;
    return cfg;
}

Instance example_ex1() {
    Instance inst;
    inst.dims.assign(5, 2);
    inst.labels = {"q", "p", "a", "b", "c"};
    inst.k = 3;
    Mat P0 = projector_of(ket(2, 0)), P1 = projector_of(ket(2, 1));
    Vec plus = (ket(2, 0) + ket(2, 1)) / std::sqrt(2.0), minus = (ket(2, 0) - ket(2, 1)) / std::sqrt(2.0);
    Mat Pp = projector_of(plus), Pm = projector_of(minus);
    Mat H1 = kron(kron(P0, Pp), P1) + kron(kron(P1, P1), P0);
    Mat H2 = kron(kron(P0, Pm), P1);
    Mat H3 = kron(P1, P1);
    inst.terms.push_back(make_term(1, {0, 1, 2}, H1));
    inst.terms.push_back(make_term(2, {0, 1, 3}, H2));
    inst.terms.push_back(make_term(3, {0, 4}, H3));
    return inst;
}

Instance example_ex2(std::vector<std::string>* log) {
    // four 3-qubit Pauli stabilizers, one per 3-subset of 4 qubits
    const char letters[3] = {'X', 'Y', 'Z'};
    auto symplectic_commute = [](const std::string& a, const std::string& b) {
        int anti = 0;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != 'I' && b[i] != 'I' && a[i] != b[i]) ++anti;
        return anti % 2 == 0;
    };
    std::vector<std::vector<std::string>> per_term(4);
    for (int t = 0; t < 4; ++t)
        for (int c = 0; c < 27; ++c) {
            std::string s(4, 'I');
            int x = c, k = 0;
            for (int q = 0; q < 4; ++q) {
                if (q == t) continue;
                s[q] = letters[(x / (k == 0 ? 9 : (k == 1 ? 3 : 1))) % 3];
                ++k;
            }
            per_term[t].push_back(s);
        }
    int tried = 0;
    for (const auto& a : per_term[0])
        for (const auto& b : per_term[1]) {
            if (!symplectic_commute(a, b)) continue;
            for (const auto& c : per_term[2]) {
                if (!symplectic_commute(a, c) || !symplectic_commute(b, c)) continue;
                for (const auto& d : per_term[3]) {
                    if (!symplectic_commute(a, d) || !symplectic_commute(b, d) || !symplectic_commute(c, d)) continue;
                    std::array<std::string, 4> ps{a, b, c, d};
                    bool varied = true;
                    for (int q = 0; q < 4 && varied; ++q) {
                        std::set<char> seen;
                        for (const auto& p : ps)
                            if (p[q] != 'I') seen.insert(p[q]);
                        varied = seen.size() >= 2;
                    }
                    if (!varied) continue;
                    ++tried;
                    for (int signs = 0; signs < 16; ++signs) {
                        Instance inst;
                        inst.dims.assign(4, 2);
                        inst.labels = {"q1", "q2", "q3", "q4"};
                        inst.k = 3;
                        for (int t = 0; t < 4; ++t) {
                            std::string reduced;
                            std::vector<int> sup;
                            for (int q = 0; q < 4; ++q)
                                if (ps[t][q] != 'I') {
                                    reduced += ps[t][q];
                                    sup.push_back(q);
                                }
                            double s = (signs >> t) & 1 ? -1.0 : 1.0;
                            Mat P = pauli_string(reduced);
                            Mat I = Mat::Identity(P.rows(), P.cols());
                            inst.terms.push_back(make_term(t + 1, sup, (I - s * P) / 2.0));
                        }
                        if (common_kernel_dim(inst) == 0) continue;
                        bool all_nonsep = true;
                        for (int q = 0; q < 4 && all_nonsep; ++q) all_nonsep = !is_separable(inst, q).separable;
                        if (log)
                            log->push_back(a + " " + b + " " + c + " " + d + " signs=" + std::to_string(signs) +
                                           (all_nonsep ? " accepted" : " rejected: separable qubit"));
                        if (all_nonsep) return inst;
                        break;
                    }
                }
            }
        }
    throw NumericalError("example_ex2: no realization found after " + std::to_string(tried) + " candidates");
}

Instance qutrit_chain() {
    Instance inst;
    inst.dims = {3, 2, 2, 2, 2, 2};
    inst.labels = {"q", "a", "b", "c", "d", "e"};
    inst.k = 3;
    Mat Pi = projector_of(ket(2, 0));
    Mat Pc = Mat::Identity(2, 2) - Pi;
    Mat Q0 = projector_of(ket(3, 0)), Q2 = projector_of(ket(3, 2));
    Mat Q01 = projector_of(ket(3, 0) + ket(3, 1)), Q12 = projector_of(ket(3, 1) + ket(3, 2));
    inst.terms.push_back(make_term(1, {0, 1, 2}, kron(kron(Q0, Pi), Pi)));
    inst.terms.push_back(make_term(2, {0, 2, 3}, kron(kron(Q01, Pc), Pi)));
    inst.terms.push_back(make_term(3, {0, 3, 4}, kron(kron(Q12, Pc), Pi)));
    inst.terms.push_back(make_term(4, {0, 4, 5}, kron(kron(Q2, Pc), Pi)));
    return inst;
}

Instance critical_operator(bool degenerate) {
    Instance inst;
    inst.dims = {3, 2};
    inst.labels = {"q", "a"};
    inst.k = 2;
    Mat Pi0 = projector_of(ket(2, 0));
    Mat Pi1 = degenerate ? Pi0 : projector_of(ket(2, 1));
    Mat Pi2 = projector_of(ket(2, 0) + ket(2, 1));
    Mat H = kron(projector_of(ket(3, 0)), Pi0) + kron(projector_of(ket(3, 1)), Pi1) + kron(projector_of(ket(3, 2)), Pi2);
    inst.terms.push_back(make_term(0, {0, 1}, H));
    return inst;
}

Instance classical_degenerate_control() {
    Instance inst;
    inst.dims = {2, 2, 2};
    inst.labels = {"a", "b", "c"};
    inst.k = 1;
    Mat P1 = projector_of(ket(2, 1));
    inst.terms.push_back(make_term(0, {0}, P1));
    inst.terms.push_back(make_term(1, {1}, P1));
    return inst;
}

std::map<std::string, Instance> gen_named_examples() {
    return {{"ex1", example_ex1()},
            {"ex2", example_ex2()},
            {"qutrit_chain", qutrit_chain()},
            {"critical_independent", critical_operator(false)},
            {"critical_degenerate", critical_operator(true)},
            {"classical_control", classical_degenerate_control()}};
}

namespace {

// q = 0 plus 2-4 terms sum_i |b_i><b_i|_q (x) P_i in one basis of q. Terms
// meeting only at q get random P_i; a term borrowing a qubit from an earlier
// term is diagonal there, as is the lender.
Instance draw_butterfly(std::mt19937_64& rng) {
    int num_terms = uniform(rng, 2, 4);
    std::vector<std::vector<int>> supports;
    std::vector<bool> diagonal;
    int next = 1;
    for (int t = 0; t < num_terms; ++t) {
        std::vector<int> s{0};
        int fresh = uniform(rng, 1, 2);
        for (int k = 0; k < fresh; ++k) s.push_back(next++);
        diagonal.push_back(false);
        if (t > 0 && uniform(rng, 0, 3) == 0) {
            int lender = uniform(rng, 0, t - 1);
            if (supports[lender].size() < 3 && s.size() < 3) {
                s.push_back(supports[lender][1]);
                diagonal[lender] = diagonal[t] = true;
            }
        }
        std::sort(s.begin(), s.end());
        supports.push_back(s);
    }
    Instance inst;
    inst.dims.assign(next, 2);
    for (int p = 0; p < next; ++p) inst.labels.push_back("q" + std::to_string(p));
    inst.k = 3;
    int b = uniform(rng, 0, 1);
    Vec basis[2][2] = {{ket(2, 0), ket(2, 1)},
                       {(ket(2, 0) + ket(2, 1)) / std::sqrt(2.0), (ket(2, 0) - ket(2, 1)) / std::sqrt(2.0)}};
    for (int t = 0; t < num_terms; ++t) {
        const auto& S = supports[t];
        int R = 1 << (S.size() - 1);
        Mat H = Mat::Zero(2 * R, 2 * R);
        for (int i = 0; i < 2; ++i) {
            Mat P;
            if (diagonal[t]) {
                std::vector<int64_t> picks;
                for (int64_t c = 0; c < R; ++c)
                    if (uniform(rng, 0, 1)) picks.push_back(c);
                P = diag_projector(R, picks);
            } else {
                P = random_projector(R, uniform(rng, 0, R), rng);
            }
            H += kron(projector_of(basis[b][i]), P);
        }
        inst.terms.push_back(make_term(t, S, (H + H.adjoint()) / 2.0));
    }
    return normalize(inst, false).instance;
}

}  // namespace

Instance gen_butterfly_config(uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        Instance inst = draw_butterfly(rng);
        if (!validate(inst).empty()) continue;
        if (inst.terms_on(0).size() < 2 || !butterfly_connected(inst, 0).connected) continue;
        return inst;
    }
    return Instance{};
}

Instance gen_left_right_config(int d, uint64_t seed) {
    if (d < 2 || d > 3) throw InputError("gen_left_right_config: d must be 2 or 3");
    std::mt19937_64 rng(seed);
    // left: (0,1,2), (0,1,3); right: (0,4,5), (0,5,6)
    for (int attempt = 0; attempt < 100; ++attempt) {
        SlotDesign design;
        design.supports = {{0, 1, 2}, {0, 1, 3}, {0, 4, 5}, {0, 5, 6}};
        design.blocks.push_back(blocks_of_dim(d, 4, rng));
        std::vector<int> deg{4, 2, 1, 1, 1, 2, 1};
        for (int p = 1; p < 7; ++p) design.blocks.push_back(random_blocks(deg[p], 2, 2, 2, 4, rng));
        Instance inst = slot_instance(design, uniform(rng, 0, 1) == 1, rng);
        if (inst.dims[0] == d && left_right_partition(inst, 0)) return inst;
    }
    throw NumericalError("gen_left_right_config: no partitioned draw found");
}

Instance gen_qutrit_fan(uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Weyl stabilizers S_i = A_i (x) P_i (x) Q_i on (q, a_i, a_{i+1})
    auto commute = [](const std::array<int, 6>& x, const std::array<int, 6>& y, const std::array<int, 3>& sx,
                      const std::array<int, 3>& sy) {
        // symplectic form summed over shared particles
        int total = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (sx[i] == sy[j]) total += x[2 * i] * y[2 * j + 1] - x[2 * i + 1] * y[2 * j];
        return ((total % 3) + 3) % 3 == 0;
    };
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<std::array<int, 6>> ops;
        std::vector<std::array<int, 3>> sups;
        bool ok = true;
        for (int i = 0; i < 5 && ok; ++i) {
            std::array<int, 3> s{0, i + 1, i + 2};
            bool placed = false;
            for (int draw = 0; draw < 400 && !placed; ++draw) {
                std::array<int, 6> x;
                for (int& e : x) e = uniform(rng, 0, 2);
                if ((x[0] | x[1]) == 0 || (x[2] | x[3]) == 0 || (x[4] | x[5]) == 0) continue;
                bool all = true;
                for (size_t k = 0; k < ops.size() && all; ++k) all = commute(x, ops[k], s, sups[k]);
                if (!all) continue;
                ops.push_back(x);
                sups.push_back(s);
                placed = true;
            }
            ok = placed;
        }
        if (!ok) continue;
        Instance inst;
        inst.dims.assign(7, 3);
        inst.labels = {"q", "a1", "a2", "a3", "a4", "a5", "a6"};
        inst.k = 3;
        for (int i = 0; i < 5; ++i) {
            const auto& x = ops[i];
            Mat K = kron(kron(weyl3(x[0], x[1]), weyl3(x[2], x[3])), weyl3(x[4], x[5]));
            Mat K3 = K * K * K;
            cplx c = K3(0, 0);
            K *= std::pow(c, -1.0 / 3.0);
            if (max_abs(K * K * K - Mat::Identity(27, 27)) > 1e-9) {
                // pick the cube root that makes K^3 = I
                for (int r = 0; r < 3; ++r) {
                    Mat Kr = K * std::polar(1.0, 2 * M_PI * r / 3);
                    if (max_abs(Kr * Kr * Kr - Mat::Identity(27, 27)) <= 1e-9) {
                        K = Kr;
                        break;
                    }
                }
            }
            Mat H = Mat::Identity(27, 27) - eigen_projector3(K, uniform(rng, 0, 2));
            inst.terms.push_back(make_term(i, {0, i + 1, i + 2}, (H + H.adjoint()) / 2.0));
        }
        inst = normalize(inst, false).instance;
        OperatorPath path;
        for (int i = 0; i < 5; ++i) path.terms.push_back(i);
        if (is_operator_path(inst, path, 0)) return inst;
    }
    return Instance{};
}

namespace {

PlanarFixture fixture_from_faces(const Dims& dims, const std::vector<Point>& coords,
                                 const std::vector<std::vector<int>>& faces, int infinite_face,
                                 const std::vector<int>& op_faces, std::mt19937_64& rng) {
    std::vector<std::vector<int>> supports;
    for (int f : op_faces) {
        auto s = faces[f];
        std::sort(s.begin(), s.end());
        supports.push_back(s);
    }
    PlanarFixture fx;
    fx.instance = classical_on_faces(dims, supports, rng);
    fx.embedding = build_embedding(fx.instance, coords, faces, infinite_face);
    return fx;
}

}  // namespace

PlanarFixture gen_planar_qutrit(int rows, int cols, const std::string& noop_pattern, uint64_t seed) {
    if (rows < 2 || cols < 2) throw InputError("gen_planar_qutrit: need at least a 2 x 2 grid of vertices");
    std::mt19937_64 rng(seed);
    auto vid = [cols](int r, int c) { return r * cols + c; };
    std::vector<Point> coords;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) coords.push_back({Rational(c), Rational(r)});
    std::vector<std::vector<int>> faces;
    std::vector<int> outer;
    for (int c = 0; c < cols; ++c) outer.push_back(vid(0, c));
    for (int r = 1; r < rows; ++r) outer.push_back(vid(r, cols - 1));
    for (int c = cols - 2; c >= 0; --c) outer.push_back(vid(rows - 1, c));
    for (int r = rows - 2; r >= 1; --r) outer.push_back(vid(r, 0));
    faces.push_back(outer);
    std::vector<std::array<int, 3>> cell;  // (r, c, half) per finite face
    for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c + 1 < cols; ++c) {
            faces.push_back({vid(r, c), vid(r, c + 1), vid(r + 1, c + 1)});
            cell.push_back({r, c, 0});
            faces.push_back({vid(r, c), vid(r + 1, c + 1), vid(r + 1, c)});
            cell.push_back({r, c, 1});
        }
    int period = 0;
    if (noop_pattern.rfind("period:", 0) == 0) {
        period = std::stoi(noop_pattern.substr(7));
        if (period < 1) throw InputError("gen_planar_qutrit: period must be positive");
    } else if (noop_pattern != "none" && noop_pattern != "all" && noop_pattern != "strip" &&
               noop_pattern != "single") {
        throw InputError("gen_planar_qutrit: unknown noop pattern " + noop_pattern);
    }
    std::vector<int> op;
    for (size_t f = 1; f < faces.size(); ++f) {
        const auto& [r, c, half] = cell[f - 1];
        bool is_op = true;
        if (noop_pattern == "all") is_op = false;
        if (noop_pattern == "strip") is_op = r % 2 == 0;
        if (noop_pattern == "single") is_op = f == 1;
        if (period > 0) is_op = !(r % period == 0 && c % period == 0 && half == 0);
        if (is_op) op.push_back(static_cast<int>(f));
    }
    PlanarFixture fx = fixture_from_faces(Dims(rows * cols, 3), coords, faces, 0, op, rng);
    // a vertex with six op faces around it would have to be separable
    for (int v = 0; v < rows * cols; ++v) {
        int count = 0;
        for (const auto& f : fx.embedding.faces)
            if (f.op && std::find(f.cycle.begin(), f.cycle.end(), v) != f.cycle.end()) ++count;
        if (count >= 6) {
            fx.relaxed = "degree-6 vertices with all-op surroundings; terms are classical so every particle is separable";
            break;
        }
    }
    return fx;
}

PlanarFixture gen_qutrit_cluster_strip(int L, uint64_t seed) {
    if (L < 1) throw InputError("gen_qutrit_cluster_strip: L must be at least 1");
    std::mt19937_64 rng(seed);
    int n = L + 2;
    PlanarFixture fx;
    Instance& inst = fx.instance;
    inst.dims.assign(n, 3);
    for (int p = 0; p < n; ++p) inst.labels.push_back("t" + std::to_string(p));
    inst.k = 3;
    Mat Z = weyl3(0, 1), X = weyl3(1, 0);
    Mat K = kron(kron(Z, X), Z);
    Mat I = Mat::Identity(27, 27);
    for (int t = 0; t < L; ++t) {
        Mat H = I - eigen_projector3(K, uniform(rng, 0, 2));
        inst.terms.push_back(make_term(t, {t, t + 1, t + 2}, (H + H.adjoint()) / 2.0));
    }
    std::vector<Point> coords;
    for (int t = 0; t < n; ++t) coords.push_back({Rational(t), Rational(t % 2)});
    std::vector<std::vector<int>> faces;
    std::vector<int> outer;
    for (int t = 0; t < n; t += 2) outer.push_back(t);
    for (int t = (n - 1) % 2 == 1 ? n - 1 : n - 2; t >= 1; t -= 2) outer.push_back(t);
    faces.push_back(outer);
    for (int t = 0; t < L; ++t) faces.push_back({t, t + 1, t + 2});
    fx.embedding = build_embedding(inst, coords, faces, 0);
    return fx;
}

PlanarFixture gen_polyhedron(const std::string& name, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> faces;
    int n = 0;
    auto bipyramid = [&](int k) {
        n = k + 2;
        for (int i = 0; i < k; ++i) {
            faces.push_back({i, (i + 1) % k, k});
            faces.push_back({i, (i + 1) % k, k + 1});
        }
    };
    if (name == "tetrahedron") {
        n = 4;
        faces = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    } else if (name == "octahedron" || name == "bipyramid4") {
        bipyramid(4);
    } else if (name == "bipyramid3") {
        bipyramid(3);
    } else if (name == "bipyramid5") {
        bipyramid(5);
    } else if (name == "icosahedron") {
        n = 12;
        for (int i = 0; i < 5; ++i) {
            int u = 1 + i, u1 = 1 + (i + 1) % 5, l = 6 + i, l1 = 6 + (i + 1) % 5;
            faces.push_back({0, u, u1});
            faces.push_back({11, l, l1});
            faces.push_back({u, u1, l});
            faces.push_back({u1, l1, l});
        }
    } else {
        throw InputError("gen_polyhedron: unknown polyhedron " + name);
    }
    auto coords = tutte_coordinates(n, faces, 0);
    std::vector<int> op(faces.size() - 1);
    std::iota(op.begin(), op.end(), 1);
    return fixture_from_faces(Dims(n, 3), coords, faces, 0, op, rng);
}

PlanarFixture gen_wheel(int spokes, uint64_t seed) {
    if (spokes < 3) throw InputError("gen_wheel: need at least 3 spokes");
    std::mt19937_64 rng(seed);
    // hub 0 at the origin, rim 1..spokes on a convex polygon with rational points
    std::vector<Point> coords{{0, 0}};
    for (int i = 0; i < spokes; ++i) {
        double a = 2 * M_PI * i / spokes;
        coords.push_back({Rational(static_cast<int64_t>(std::lround(1000 * std::cos(a))), 100),
                          Rational(static_cast<int64_t>(std::lround(1000 * std::sin(a))), 100)});
    }
    std::vector<std::vector<int>> faces;
    std::vector<int> rim;
    for (int i = 0; i < spokes; ++i) rim.push_back(1 + i);
    faces.push_back(rim);
    for (int i = 0; i < spokes; ++i) faces.push_back({0, 1 + i, 1 + (i + 1) % spokes});
    std::vector<int> op(spokes);
    std::iota(op.begin(), op.end(), 1);
    return fixture_from_faces(Dims(spokes + 1, 3), coords, faces, 0, op, rng);
}

Instance generate_family(const std::string& family, const nlohmann::json& params, uint64_t seed,
                         PlanarEmbedding* embedding) {
    auto geti = [&](const char* key, int def) { return params.contains(key) ? params.at(key).get<int>() : def; };
    auto getb = [&](const char* key, bool def) { return params.contains(key) ? params.at(key).get<bool>() : def; };
    auto gets = [&](const char* key, const std::string& def) {
        return params.contains(key) ? params.at(key).get<std::string>() : def;
    };
    auto with_embedding = [&](PlanarFixture fx) {
        if (embedding) *embedding = fx.embedding;
        return fx.instance;
    };
    try {
        if (family == "toric") return gen_toric(geti("n", 2)).instance;
        if (family == "toric_paired") return pair_toric(gen_toric(geti("n", 2)));
        if (family == "classical") {
            ClassicalConfig c;
            c.n = geti("n", c.n);
            c.m = geti("m", c.m);
            c.k = geti("k", c.k);
            c.d = geti("d", c.d);
            c.rank = geti("rank", c.rank);
            c.satisfiable = getb("satisfiable", c.satisfiable);
            c.rotate = getb("rotate", c.rotate);
            c.seed = seed;
            return gen_classical(c);
        }
        if (family == "chain") {
            ChainConfig c;
            c.L = geti("L", c.L);
            std::string style = gets("style", "cluster");
            if (style == "cluster")
                c.style = ChainStyle::cluster;
            else if (style == "diagonal")
                c.style = ChainStyle::diagonal;
            else if (style == "pendants")
                c.style = ChainStyle::pendants;
            else
                throw InputError("gen: unknown chain style " + style);
            c.pendants = geti("pendants", c.pendants);
            c.contradiction = getb("contradiction", c.contradiction);
            c.seed = seed;
            return gen_chain(c);
        }
        if (family == "two_local") {
            TwoLocalConfig c;
            c.num_vertices = geti("num_vertices", c.num_vertices);
            if (params.contains("edges")) c.edges = params.at("edges").get<std::vector<std::array<int, 2>>>();
            c.max_blocks = geti("max_blocks", c.max_blocks);
            c.satisfiable = getb("satisfiable", c.satisfiable);
            c.seed = seed;
            return gen_two_local(c);
        }
        if (family == "star") return gen_two_local(star_config(geti("leaves", 3), seed, getb("satisfiable", true)));
        if (family == "named") {
            auto all = gen_named_examples();
            auto it = all.find(gets("name", "ex1"));
            if (it == all.end()) throw InputError("gen: unknown named example");
            return it->second;
        }
        if (family == "butterfly") return gen_butterfly_config(seed);
        if (family == "left_right") return gen_left_right_config(geti("d", 3), seed);
        if (family == "qutrit_fan") return gen_qutrit_fan(seed);
        if (family == "planar_qutrit")
            return with_embedding(gen_planar_qutrit(geti("rows", 3), geti("cols", 3), gets("pattern", "none"), seed));
        if (family == "qutrit_strip") return with_embedding(gen_qutrit_cluster_strip(geti("L", 4), seed));
        if (family == "polyhedron") return with_embedding(gen_polyhedron(gets("name", "icosahedron"), seed));
        if (family == "wheel") return with_embedding(gen_wheel(geti("spokes", 6), seed));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("gen: bad parameters: ") + e.what());
    }
    throw InputError("gen: unknown family " + family);
}

}  // namespace clh
