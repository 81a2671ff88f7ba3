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

#include "clh/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "clh/errors.hpp"

namespace clh {

namespace {

const LocalTerm& term_by_id(const Instance& inst, int id) {
    for (const auto& t : inst.terms)
        if (t.id == id) return t;
    throw InputError("unknown term id " + std::to_string(id));
}

int overlap(const std::vector<int>& a, const std::vector<int>& b, int skip = -1) {
    int c = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            if (a[i] != skip) ++c;
            ++i, ++j;
        }
    }
    return c;
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// Ids of the terms on the particle, ascending.
std::vector<int> term_ids_on(const Instance& inst, int particle) {
    std::vector<int> ids;
    for (int pos : inst.terms_on(particle)) ids.push_back(inst.terms[pos].id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

int required_overlap(int dist, bool on) {
    int r = std::max(0, 3 - dist);
    if (on) r = std::max(0, r - 1);
    return r;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> groups_of(UnionFind& uf, const std::vector<int>& items) {
    std::map<int, std::vector<int>> by_root;
    for (int x : items) by_root[uf.find(x)].push_back(x);
    std::vector<std::vector<int>> out;
    for (auto& kv : by_root) {
        std::sort(kv.second.begin(), kv.second.end());
        out.push_back(kv.second);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void path_search(const Instance& inst, int particle, std::vector<int>& path, const std::vector<int>& pool,
                 int max_length, const std::function<void(const std::vector<int>&)>& visit) {
    visit(path);
    if (static_cast<int>(path.size()) >= max_length) return;
    for (int id : pool) {
        if (contains(path, id)) continue;
        const auto& s = term_by_id(inst, id).support;
        bool ok = true;
        int L = static_cast<int>(path.size());
        for (int i = 0; i < L && ok; ++i)
            ok = overlap(s, term_by_id(inst, path[i]).support, particle) == required_overlap(L - i, true);
        if (!ok) continue;
        path.push_back(id);
        path_search(inst, particle, path, pool, max_length, visit);
        path.pop_back();
    }
}

Dims support_dims_of(const Instance& inst, const std::vector<int>& support) {
    Dims d;
    for (int p : support) d.push_back(inst.dims[p]);
    return d;
}

}  // namespace

InteractionGraph build_graph(const Instance& inst) {
    InteractionGraph g;
    g.num_vertices = inst.num_particles();
    std::vector<std::set<int>> adj(g.num_vertices);
    UnionFind uf(g.num_vertices);
    std::vector<int> touched;
    for (const auto& t : inst.terms) {
        g.hyperedges.push_back(t.support);
        for (int a : t.support) {
            touched.push_back(a);
            for (int b : t.support)
                if (a != b) adj[a].insert(b);
            uf.unite(a, t.support[0]);
        }
    }
    for (const auto& s : adj) g.adjacency.emplace_back(s.begin(), s.end());
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    g.components = groups_of(uf, touched);
    return g;
}

bool is_operator_path(const Instance& inst, const OperatorPath& path, int on) {
    int L = path.length();
    if (L == 0) return false;
    if (path.closed && L < 4) return false;
    std::set<int> distinct(path.terms.begin(), path.terms.end());
    if (static_cast<int>(distinct.size()) != L) return false;
    std::vector<const std::vector<int>*> sup;
    for (int id : path.terms) {
        const auto& s = term_by_id(inst, id).support;
        if (on >= 0 && !std::binary_search(s.begin(), s.end(), on)) return false;
        sup.push_back(&s);
    }
    for (int i = 0; i < L; ++i)
        for (int k = i + 1; k < L; ++k) {
            int dist = k - i;
            if (path.closed) dist = std::min(dist, L - dist);
            if (overlap(*sup[i], *sup[k], on) != required_overlap(dist, on >= 0)) return false;
        }
    return true;
}

std::vector<std::array<int, 2>> butterflies(const Instance& inst, int particle) {
    auto ids = term_ids_on(inst, particle);
    std::vector<std::array<int, 2>> out;
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j)
            if (overlap(term_by_id(inst, ids[i]).support, term_by_id(inst, ids[j]).support, particle) == 0)
                out.push_back({ids[i], ids[j]});
    return out;
}

ButterflyConnectivity butterfly_connected(const Instance& inst, int particle) {
    auto ids = term_ids_on(inst, particle);
    std::map<int, int> index;
    for (size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);
    UnionFind uf(static_cast<int>(ids.size()));
    for (const auto& b : butterflies(inst, particle)) uf.unite(index[b[0]], index[b[1]]);
    std::vector<int> all(ids.size());
    std::iota(all.begin(), all.end(), 0);
    ButterflyConnectivity out;
    for (auto& comp : groups_of(uf, all)) {
        std::vector<int> c;
        for (int i : comp) c.push_back(ids[i]);
        out.components.push_back(c);
    }
    out.connected = out.components.size() <= 1;
    return out;
}

std::optional<std::pair<std::vector<int>, std::vector<int>>> left_right_partition(const Instance& inst,
                                                                                  int particle) {
    auto ids = term_ids_on(inst, particle);
    if (ids.size() < 2) return std::nullopt;
    UnionFind uf(static_cast<int>(ids.size()));
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j)
            if (overlap(term_by_id(inst, ids[i]).support, term_by_id(inst, ids[j]).support, particle) > 0)
                uf.unite(static_cast<int>(i), static_cast<int>(j));
    std::vector<int> all(ids.size());
    std::iota(all.begin(), all.end(), 0);
    auto comps = groups_of(uf, all);
    if (comps.size() < 2) return std::nullopt;
    std::vector<int> left, right;
    for (int i : comps[0]) left.push_back(ids[i]);
    for (size_t c = 1; c < comps.size(); ++c)
        for (int i : comps[c]) right.push_back(ids[i]);
    std::sort(right.begin(), right.end());
    return std::make_pair(left, right);
}

std::vector<OperatorPath> paths_on(const Instance& inst, int particle, int length) {
    std::vector<OperatorPath> out;
    auto pool = term_ids_on(inst, particle);
    std::vector<int> path;
    path_search(inst, particle, path, pool, length, [&](const std::vector<int>& p) {
        if (static_cast<int>(p.size()) != length) return;
        if (length > 1 && p.front() > p.back()) return;
        out.push_back({p, false});
    });
    return out;
}

std::vector<std::array<int, 3>> find_crowns(const Instance& inst, int particle) {
    std::vector<std::array<int, 3>> out;
    for (const auto& p : paths_on(inst, particle, 3)) {
        std::set<int> others;
        bool three_local = true;
        for (int id : p.terms) {
            const auto& s = term_by_id(inst, id).support;
            if (s.size() != 3) three_local = false;
            for (int x : s)
                if (x != particle) others.insert(x);
        }
        if (three_local && others.size() == 4) out.push_back({p.terms[0], p.terms[1], p.terms[2]});
    }
    return out;
}

OperatorPath longest_path_on(const Instance& inst, int particle, int max_length) {
    OperatorPath best;
    auto pool = term_ids_on(inst, particle);
    std::vector<int> path;
    path_search(inst, particle, path, pool, max_length, [&](const std::vector<int>& p) {
        if (p.size() > best.terms.size()) best.terms = p;
    });
    return best;
}

int first_block(const Instance&, int, const std::vector<Mat>&) { return 0; }

EliminationResult eliminate_separable(const Instance& inst, const BlockChooser& chooser, uint64_t seed) {
    EliminationResult res;
    res.residual = inst;
    std::set<int> work;
    for (int p = 0; p < inst.num_particles(); ++p) work.insert(p);
    while (!work.empty()) {
        int p = *work.begin();
        work.erase(work.begin());
        const Instance& cur = res.residual;
        if (cur.dims[p] < 2) continue;
        auto sep = is_separable(cur, p, seed);
        if (!sep.separable) continue;
        int idx = chooser(cur, p, sep.pieces);
        if (idx < 0 || idx >= static_cast<int>(sep.pieces.size()))
            throw InputError("eliminate_separable: chooser picked block " + std::to_string(idx) + " of " +
                             std::to_string(sep.pieces.size()) + " for particle " + std::to_string(p));
        std::set<int> neighbors{p};
        for (int pos : cur.terms_on(p))
            for (int q : cur.terms[pos].support) neighbors.insert(q);
        Mat basis = sep.pieces[idx];
        res.residual = restrict_particle(cur, p, basis);
        res.log.push_back({p, basis});
        work.insert(neighbors.begin(), neighbors.end());
    }
    return res;
}

std::vector<int> path_particles(const Instance& inst, const OperatorPath& path) {
    std::map<int, std::pair<int, int>> span;
    for (int i = 0; i < path.length(); ++i)
        for (int p : term_by_id(inst, path.terms[i]).support) {
            auto it = span.find(p);
            if (it == span.end())
                span[p] = {i, i};
            else
                it->second.second = i;
        }
    std::vector<std::array<int, 3>> keyed;
    for (const auto& [p, s] : span) keyed.push_back({s.first, s.second, p});
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> out;
    for (const auto& k : keyed) out.push_back(k[2]);
    return out;
}

Backbone find_backbone(const Instance& inst, int64_t budget) {
    std::vector<int> ids;
    for (const auto& t : inst.terms)
        if (!t.support.empty()) ids.push_back(t.id);
    std::sort(ids.begin(), ids.end());
    if (ids.empty()) throw InputError("find_backbone: empty instance");
    std::map<int, const std::vector<int>*> sup;
    for (const auto& t : inst.terms) sup[t.id] = &t.support;
    std::map<int, std::vector<int>> next;
    for (int a : ids)
        for (int b : ids)
            if (a != b && overlap(*sup[a], *sup[b]) == 2) next[a].push_back(b);

    Backbone best;
    std::vector<int> occ(inst.num_particles(), 0);
    std::vector<int> path;
    int64_t nodes = 0;
    bool exhausted = false;
    const int total = static_cast<int>(ids.size());

    std::function<void()> dfs = [&]() {
        if (path.size() > best.path.terms.size()) best.path.terms = path;
        if (static_cast<int>(best.path.terms.size()) == total) return;
        int L = static_cast<int>(path.size());
        int last = path.back();
        for (int t : next[last]) {
            if (exhausted || static_cast<int>(best.path.terms.size()) == total) return;
            if (++nodes > budget) {
                exhausted = true;
                return;
            }
            if (contains(path, t)) continue;
            const auto& s = *sup[t];
            if (L >= 2 && overlap(s, *sup[path[L - 2]]) != 1) continue;
            bool ok = true;
            for (int x : s) {
                int older = occ[x] - (std::binary_search(sup[last]->begin(), sup[last]->end(), x) ? 1 : 0) -
                            (L >= 2 && std::binary_search(sup[path[L - 2]]->begin(), sup[path[L - 2]]->end(), x) ? 1 : 0);
                if (older > 0) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            path.push_back(t);
            for (int x : s) ++occ[x];
            dfs();
            for (int x : s) --occ[x];
            path.pop_back();
        }
    };
    for (int start : ids) {
        if (exhausted || static_cast<int>(best.path.terms.size()) == total) break;
        path = {start};
        for (int x : *sup[start]) ++occ[x];
        dfs();
        for (int x : *sup[start]) --occ[x];
    }
    best.nodes = nodes;
    best.budget_exhausted = exhausted;
    OperatorPath closed = best.path;
    closed.closed = true;
    best.path.closed = is_operator_path(inst, closed);
    best.qubits = path_particles(inst, best.path);
    return best;
}

int CoarseGraining::num_windows() const {
    int M = static_cast<int>(Q.size());
    if (closed) return M;
    return std::max(1, M - 1);
}

std::vector<int> CoarseGraining::window_groups(int j) const {
    int M = static_cast<int>(Q.size());
    if (closed) return {j, (j + 1) % M};
    if (M == 1) return {0};
    return {j, j + 1};
}

AlmostOneD check_almost_1d(const Instance& inst, const CoarseGraining& grouping) {
    AlmostOneD rep;
    rep.term_window.assign(inst.terms.size(), -1);
    int W = grouping.num_windows();
    if (grouping.Q.empty()) {
        rep.ok = false;
        rep.message = "grouping has no Q sets";
        return rep;
    }
    if (static_cast<int>(grouping.V.size()) != W) {
        rep.ok = false;
        rep.message = "grouping has " + std::to_string(grouping.V.size()) + " V sets for " + std::to_string(W) +
                      " windows";
        return rep;
    }
    // where[p] = (0, i) for Q_i, (1, j) for V_j
    std::map<int, std::pair<int, int>> where;
    auto place = [&](int p, int kind, int idx) {
        if (p < 0 || p >= inst.num_particles()) {
            rep.ok = false;
            rep.message = "grouping names unknown particle " + std::to_string(p);
            return;
        }
        if (!where.emplace(p, std::make_pair(kind, idx)).second) {
            rep.ok = false;
            rep.message = "particle " + std::to_string(p) + " appears twice in the grouping";
        }
    };
    for (size_t i = 0; i < grouping.Q.size(); ++i)
        for (int p : grouping.Q[i]) place(p, 0, static_cast<int>(i));
    for (size_t j = 0; j < grouping.V.size(); ++j)
        for (int p : grouping.V[j]) place(p, 1, static_cast<int>(j));
    if (!rep.ok) return rep;
    for (size_t pos = 0; pos < inst.terms.size(); ++pos) {
        const auto& t = inst.terms[pos];
        bool any = false, all = true;
        for (int p : t.support) {
            if (where.count(p))
                any = true;
            else
                all = false;
        }
        if (!any) continue;
        if (!all) {
            rep.ok = false;
            rep.term = t.id;
            rep.message = "term " + std::to_string(t.id) + " leaves the grouping";
            return rep;
        }
        for (int j = 0; j < W; ++j) {
            auto gs = grouping.window_groups(j);
            bool inside = std::all_of(t.support.begin(), t.support.end(), [&](int p) {
                auto [kind, idx] = where[p];
                return kind == 0 ? contains(gs, idx) : idx == j;
            });
            if (inside) {
                rep.term_window[pos] = j;
                break;
            }
        }
        if (rep.term_window[pos] < 0) {
            rep.ok = false;
            rep.term = t.id;
            rep.message = "term " + std::to_string(t.id) + " spans 3 windows";
            return rep;
        }
    }
    return rep;
}

CoarseGraining coarse_grain(const Instance& inst, const Backbone& backbone, int g, AlmostOneD* report) {
    if (g < 1) throw InputError("coarse_grain: group size must be positive");
    if (backbone.path.terms.empty()) throw InputError("coarse_grain: empty backbone");
    const auto& A = backbone.qubits;
    CoarseGraining cg;
    int n = static_cast<int>(A.size());
    if (n < 3 * g) {
        cg.Q.push_back(A);
    } else {
        int M = n / g;
        for (int i = 0; i < M; ++i) {
            int lo = i * g, hi = (i == M - 1) ? n : lo + g;
            cg.Q.emplace_back(A.begin() + lo, A.begin() + hi);
        }
    }
    cg.closed = backbone.path.closed && cg.Q.size() >= 3;
    int W = cg.num_windows();
    cg.V.assign(W, {});

    std::map<int, int> group_of;
    for (size_t i = 0; i < cg.Q.size(); ++i)
        for (int p : cg.Q[i]) group_of[p] = static_cast<int>(i);
    // the component of the backbone
    auto graph = build_graph(inst);
    std::vector<int> component;
    for (const auto& c : graph.components)
        if (contains(c, A.front())) component = c;
    std::map<int, int> window_of;
    std::vector<int> deferred;
    for (int p : component) {
        if (group_of.count(p)) continue;
        std::set<int> contacts;
        for (int pos : inst.terms_on(p))
            for (int x : inst.terms[pos].support)
                if (group_of.count(x)) contacts.insert(group_of[x]);
        if (contacts.empty()) {
            deferred.push_back(p);
            continue;
        }
        int chosen = -1;
        for (int j = 0; j < W && chosen < 0; ++j) {
            auto gs = cg.window_groups(j);
            if (std::all_of(contacts.begin(), contacts.end(), [&](int c) { return contains(gs, c); })) chosen = j;
        }
        window_of[p] = chosen < 0 ? 0 : chosen;
    }
    bool changed = true;
    while (changed && !deferred.empty()) {
        changed = false;
        for (auto it = deferred.begin(); it != deferred.end();) {
            int found = -1;
            for (int pos : inst.terms_on(*it))
                for (int x : inst.terms[pos].support)
                    if (window_of.count(x)) found = window_of[x];
            if (found >= 0) {
                window_of[*it] = found;
                it = deferred.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    for (int p : deferred) window_of[p] = 0;
    for (const auto& [p, j] : window_of) cg.V[j].push_back(p);
    AlmostOneD rep = check_almost_1d(inst, cg);
    if (report) {
        *report = rep;
    } else if (!rep.ok) {
        throw InputError("coarse_grain: " + rep.message);
    }
    return cg;
}

namespace {

// Terms touching group i, split by side.
void side_terms(const Instance& inst, const CoarseGraining& grouping, const AlmostOneD& windows, int i,
                std::vector<int>* left, std::vector<int>* right) {
    const auto& members = grouping.Q.at(i);
    for (size_t pos = 0; pos < inst.terms.size(); ++pos) {
        const auto& s = inst.terms[pos].support;
        bool touches = std::any_of(s.begin(), s.end(), [&](int p) { return contains(members, p); });
        if (!touches) continue;
        int w = windows.term_window[pos];
        if (w < 0) continue;
        if (w == i) {
            if (right) right->push_back(static_cast<int>(pos));
        } else {
            if (left) left->push_back(static_cast<int>(pos));
        }
    }
}

// Operator-Schmidt parts of a term across (members of a group | rest). The
// first matrix acts on the full group in member order; the second on the rest
// of the term's support, ascending.
std::vector<std::pair<Mat, Mat>> group_parts(const Instance& inst, const LocalTerm& t, const std::vector<int>& members,
                                             std::vector<int>* rest_support) {
    std::vector<int> inside, left_pos;
    rest_support->clear();
    for (size_t k = 0; k < t.support.size(); ++k) {
        if (contains(members, t.support[k])) {
            inside.push_back(t.support[k]);
            left_pos.push_back(static_cast<int>(k));
        } else {
            rest_support->push_back(t.support[k]);
        }
    }
    std::vector<std::pair<Mat, Mat>> out;
    if (inside.empty()) return out;
    if (rest_support->empty()) {
        out.push_back({embed_on_support(t.matrix, inside, members, inst.dims), Mat::Identity(1, 1)});
        return out;
    }
    auto pairs = operator_schmidt(t.matrix, BipartiteCut{support_dims_of(inst, t.support), left_pos}, 1e-13);
    for (auto& pr : pairs) out.push_back({embed_on_support(pr.A, inside, members, inst.dims), pr.B});
    return out;
}

MatrixAlgebra side_algebra(const Instance& inst, const std::vector<int>& positions, const std::vector<int>& members,
                           int64_t D) {
    std::vector<Mat> gens;
    for (int pos : positions) {
        std::vector<int> rest;
        for (auto& pr : group_parts(inst, inst.terms[pos], members, &rest)) gens.push_back(pr.first);
    }
    if (gens.empty()) return scalar_algebra(D);
    return generate_algebra(gens, inst.tol);
}

int64_t group_dim(const Instance& inst, const std::vector<int>& members) {
    int64_t D = 1;
    for (int p : members) D *= inst.dims.at(p);
    return D;
}

}  // namespace

std::vector<int> left_terms(const Instance& inst, const CoarseGraining& grouping, const AlmostOneD& windows, int i) {
    std::vector<int> out;
    side_terms(inst, grouping, windows, i, &out, nullptr);
    return out;
}

std::vector<int> right_terms(const Instance& inst, const CoarseGraining& grouping, const AlmostOneD& windows, int i) {
    std::vector<int> out;
    side_terms(inst, grouping, windows, i, nullptr, &out);
    return out;
}

std::vector<Slicing> slice_candidates(const Instance& inst, const CoarseGraining& grouping, int i, int64_t block_cap,
                                      uint64_t seed) {
    AlmostOneD windows = check_almost_1d(inst, grouping);
    if (!windows.ok) throw InputError("slice: " + windows.message);
    const auto& members = grouping.Q.at(i);
    int64_t D = group_dim(inst, members);
    if (D > block_cap)
        throw CapExceeded("slice: Q_" + std::to_string(i) + " has dimension " + std::to_string(D) +
                          " above the block cap " + std::to_string(block_cap));
    std::vector<int> lt, rt;
    side_terms(inst, grouping, windows, i, &lt, &rt);
    MatrixAlgebra left = side_algebra(inst, lt, members, D);
    MatrixAlgebra right = side_algebra(inst, rt, members, D);
    auto sd = separating_decomposition({left, right}, seed, inst.tol);
    std::vector<Slicing> out;
    for (const auto& b : sd.blocks) {
        Slicing s;
        s.i = i;
        s.block_basis = b.basis;
        s.left_dim = b.factor_dims[0];
        s.right_dim = b.factor_dims[1];
        int rest = b.factor_dims[2];
        s.isometry.resize(D, s.left_dim * s.right_dim);
        for (int a = 0; a < s.left_dim; ++a)
            for (int c = 0; c < s.right_dim; ++c)
                s.isometry.col(a * s.right_dim + c) = b.basis.col((a * s.right_dim + c) * rest);
        out.push_back(std::move(s));
    }
    return out;
}

Slicing slice_backbone_particle(const Instance& inst, const CoarseGraining& grouping, int i,
                                const SliceChooser& chooser, int64_t block_cap, uint64_t seed) {
    auto cands = slice_candidates(inst, grouping, i, block_cap, seed);
    int idx = chooser(i, cands);
    if (idx < 0 || idx >= static_cast<int>(cands.size()))
        throw InputError("slice: chooser picked block " + std::to_string(idx) + " of " + std::to_string(cands.size()));
    return cands[idx];
}

std::string check_slicing(const Instance& inst, const CoarseGraining& grouping, const Slicing& s, int64_t block_cap,
                          double tol) {
    if (s.i < 0 || s.i >= static_cast<int>(grouping.Q.size())) return "slicing invalid: group index out of range";
    const auto& members = grouping.Q[s.i];
    int64_t D = group_dim(inst, members);
    if (D > block_cap) return "slicing invalid: Q_" + std::to_string(s.i) + " exceeds the block cap";
    int64_t m = static_cast<int64_t>(s.left_dim) * s.right_dim;
    if (s.left_dim < 1 || s.right_dim < 1 || s.isometry.rows() != D || s.isometry.cols() != m)
        return "slicing invalid: isometry has wrong shape";
    if (s.block_basis.rows() != D || s.block_basis.cols() < m) return "slicing invalid: block basis has wrong shape";
    if (!all_finite(s.isometry) || !all_finite(s.block_basis)) return "slicing invalid: non-finite entries";
    const Mat& B = s.block_basis;
    const Mat& U = s.isometry;
    if (max_abs(B.adjoint() * B - Mat::Identity(B.cols(), B.cols())) > tol)
        return "slicing invalid: block basis is not orthonormal";
    if (max_abs(U.adjoint() * U - Mat::Identity(m, m)) > tol) return "slicing invalid: isometry is not orthonormal";
    if (max_abs(U - B * (B.adjoint() * U)) > tol) return "slicing invalid: isometry leaves the block";
    AlmostOneD windows = check_almost_1d(inst, grouping);
    if (!windows.ok) return windows.message;
    std::vector<int> lt, rt;
    side_terms(inst, grouping, windows, s.i, &lt, &rt);
    Mat PB = B * B.adjoint();
    Mat PU = U * U.adjoint();
    for (int side = 0; side < 2; ++side) {
        for (int pos : side == 0 ? lt : rt) {
            const auto& t = inst.terms[pos];
            std::vector<int> rest;
            auto parts = group_parts(inst, t, members, &rest);
            for (const auto& pr : parts) {
                double scale = std::max(1.0, max_abs(pr.first));
                if (max_abs(PB * pr.first - pr.first * PB) > tol * scale)
                    return "block not invariant under term " + std::to_string(t.id);
                if (max_abs(PU * pr.first - pr.first * PU) > tol * scale)
                    return "slicing invalid: isometry range not invariant under term " + std::to_string(t.id);
                Mat K = U.adjoint() * pr.first * U;
                if (!acts_trivially_on(K, {s.left_dim, s.right_dim}, side == 0 ? 1 : 0, tol))
                    return "slicing invalid: term " + std::to_string(t.id) + " is not carried by the " +
                           (side == 0 ? "left" : "right") + " factor";
            }
        }
    }
    return "";
}

Mat conjugate_slots(const Mat& M, const Dims& factor_dims, const std::vector<int>& slots, const Mat& U) {
    int n = static_cast<int>(factor_dims.size());
    std::vector<int> perm = slots, rest;
    for (int k = 0; k < n; ++k)
        if (!contains(slots, k)) rest.push_back(k);
    perm.insert(perm.end(), rest.begin(), rest.end());
    Mat P = permute_factors(M, factor_dims, perm);
    int64_t R = 1;
    for (int k : rest) R *= factor_dims[k];
    Mat J = kron(U, Mat::Identity(R, R));
    Mat K = J.adjoint() * P * J;
    // move the merged factor back to the position of the first slot
    Dims fd{static_cast<int>(U.cols())};
    for (int k : rest) fd.push_back(factor_dims[k]);
    int before = 0;
    for (int k : rest)
        if (k < slots.front()) ++before;
    std::vector<int> back;
    for (int k = 1; k <= before; ++k) back.push_back(k);
    back.push_back(0);
    for (int k = before + 1; k < static_cast<int>(fd.size()); ++k) back.push_back(k);
    return permute_factors(K, fd, back);
}

namespace {

// Term restricted by the isometries of the listed groups. Factor order of the
// result: one factor per group (dimension of its isometry), then the term's
// other particles ascending.
Mat restrict_on_groups(const Instance& inst, const LocalTerm& t, const std::vector<const std::vector<int>*>& groups,
                       const std::vector<const Mat*>& isos, size_t k, const std::vector<int>& support, const Mat& M,
                       std::vector<int>* rest_out) {
    if (k == groups.size()) {
        *rest_out = support;
        return M;
    }
    LocalTerm sub{t.id, support, M};
    std::vector<int> rest;
    auto parts = group_parts(inst, sub, *groups[k], &rest);
    const Mat& U = *isos[k];
    if (parts.empty()) {
        std::vector<int> r;
        Mat inner = restrict_on_groups(inst, t, groups, isos, k + 1, support, M, &r);
        *rest_out = r;
        return kron(Mat::Identity(U.cols(), U.cols()), inner);
    }
    Mat out;
    for (const auto& pr : parts) {
        std::vector<int> r;
        Mat inner = restrict_on_groups(inst, t, groups, isos, k + 1, rest, pr.second, &r);
        *rest_out = r;
        Mat term = kron(U.adjoint() * pr.first * U, inner);
        if (out.size() == 0)
            out = term;
        else
            out += term;
    }
    return out;
}

}  // namespace

FusedInstance fuse_and_reduce(const Instance& inst, const std::vector<CoarseGraining>& groupings,
                              const std::vector<std::vector<Slicing>>& slicings, double tol) {
    if (groupings.size() != slicings.size()) throw InputError("fuse: one slicing list per grouping is required");
    FusedInstance out;
    Instance& F = out.instance;
    F.k = 2;
    F.tol = inst.tol;
    std::vector<AlmostOneD> windows;
    std::vector<std::vector<int>> window_id(groupings.size());
    for (size_t c = 0; c < groupings.size(); ++c) {
        const auto& G = groupings[c];
        auto rep = check_almost_1d(inst, G);
        if (!rep.ok) throw InputError("fuse: " + rep.message);
        windows.push_back(rep);
        if (slicings[c].size() != G.Q.size()) throw InputError("fuse: missing slicings");
        for (size_t i = 0; i < G.Q.size(); ++i)
            if (slicings[c][i].i != static_cast<int>(i)) throw InputError("fuse: slicings out of order");
        for (int j = 0; j < G.num_windows(); ++j) {
            auto gs = G.window_groups(j);
            FusedOrigin o;
            o.component = static_cast<int>(c);
            o.window = j;
            o.right_dim = slicings[c][gs[0]].right_dim;
            o.left_dim = gs.size() > 1 ? slicings[c][gs[1]].left_dim : 1;
            window_id[c].push_back(static_cast<int>(out.origin.size()));
            out.origin.push_back(o);
            F.dims.push_back(o.right_dim * o.left_dim);
            F.labels.push_back("F" + std::to_string(c) + "_" + std::to_string(j));
        }
    }
    std::map<int, int> v_id;
    std::vector<int> v_particles;
    for (const auto& G : groupings)
        for (const auto& V : G.V) v_particles.insert(v_particles.end(), V.begin(), V.end());
    std::sort(v_particles.begin(), v_particles.end());
    for (int p : v_particles) {
        if (v_id.count(p)) throw InputError("fuse: particle " + std::to_string(p) + " is in two groupings");
        v_id[p] = static_cast<int>(out.origin.size());
        FusedOrigin o;
        o.particle = p;
        out.origin.push_back(o);
        F.dims.push_back(inst.dims[p]);
        F.labels.push_back(p < static_cast<int>(inst.labels.size()) ? inst.labels[p] : "p" + std::to_string(p));
    }

    for (size_t pos = 0; pos < inst.terms.size(); ++pos) {
        const auto& t = inst.terms[pos];
        if (t.support.empty()) {
            F.terms.push_back(t);
            continue;
        }
        int c = -1;
        for (size_t k = 0; k < groupings.size(); ++k)
            if (windows[k].term_window[pos] >= 0) c = static_cast<int>(k);
        if (c < 0) throw InputError("fuse: term " + std::to_string(t.id) + " is outside every grouping");
        const auto& G = groupings[c];
        int j = windows[c].term_window[pos];
        auto gs = G.window_groups(j);
        std::vector<const std::vector<int>*> groups;
        std::vector<const Mat*> isos;
        Dims fd;
        for (int g : gs) {
            groups.push_back(&G.Q[g]);
            isos.push_back(&slicings[c][g].isometry);
            fd.push_back(slicings[c][g].left_dim);
            fd.push_back(slicings[c][g].right_dim);
        }
        std::vector<int> rest;
        Mat K = restrict_on_groups(inst, t, groups, isos, 0, t.support, t.matrix, &rest);
        for (int p : rest) fd.push_back(inst.dims[p]);
        // trivial on L of the first group and R of the second
        std::vector<int> drop{0};
        if (gs.size() > 1) drop.push_back(3);
        for (int slot : drop)
            if (!acts_trivially_on(K, fd, slot, tol))
                throw InputError("fuse: term " + std::to_string(t.id) + " is not carried by the fused qudit");
        std::vector<int> keep;
        for (int k = 0; k < static_cast<int>(fd.size()); ++k)
            if (!contains(drop, k)) keep.push_back(k);
        Mat T = partial_average(K, fd, keep);
        LocalTerm nt;
        nt.id = t.id;
        nt.support.push_back(window_id[c][j]);
        for (int p : rest) {
            auto it = v_id.find(p);
            if (it == v_id.end()) throw InputError("fuse: particle " + std::to_string(p) + " is not in a V set");
            nt.support.push_back(it->second);
        }
        nt.matrix = (T + T.adjoint()) / 2.0;
        F.terms.push_back(std::move(nt));
    }
    F = normalize(F, false).instance;
    for (const auto& t : F.terms)
        if (t.support.size() > 2)
            throw InputError("fuse: term " + std::to_string(t.id) + " is " + std::to_string(t.support.size()) +
                             "-local after fusing");
    return out;
}

}  // namespace clh
