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


#include "clh/witness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "clh/algebra.hpp"
#include "clh/errors.hpp"
#include "clh/tensor_core.hpp"

namespace clh {

namespace {

struct UnsatSignal {
    std::string message;
};

// 1 when a common null state exists, 0 when none does, -1 beyond the caps.
int64_t oracle_kernel(const Instance& inst, const OracleConfig& cfg) {
    try {
        return probe_null_state(inst, cfg) ? 1 : 0;
    } catch (const CapExceeded&) {
        return -1;
    }
}

Dims dims_of(const Instance& inst, const std::vector<int>& support) {
    Dims fd;
    for (int p : support) fd.push_back(inst.dims[p]);
    return fd;
}

// Sorts the support and permutes the factors of the matrix to match.
LocalTerm sorted_term(int id, const std::vector<int>& support, const Dims& fd, const Mat& M) {
    std::vector<int> order(support.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return support[a] < support[b]; });
    LocalTerm t;
    t.id = id;
    for (int i : order) t.support.push_back(support[i]);
    t.matrix = std::is_sorted(support.begin(), support.end()) ? M : permute_factors(M, fd, order);
    return t;
}

// Replaces the particles of a group by one particle (at members[0]) living
// on the range of the isometry.
Instance restrict_group(const Instance& inst, const std::vector<int>& members, const Mat& iso) {
    std::set<int> mem(members.begin(), members.end());
    Instance out = inst;
    out.terms.clear();
    int head = members[0];
    for (const auto& t : inst.terms) {
        std::vector<int> others;
        for (int p : t.support)
            if (!mem.count(p)) others.push_back(p);
        if (others.size() == t.support.size()) {
            out.terms.push_back(t);
            continue;
        }
        std::vector<int> target = members;
        target.insert(target.end(), others.begin(), others.end());
        Mat M = embed_term(inst, t, target);
        std::vector<int> slots(members.size());
        std::iota(slots.begin(), slots.end(), 0);
        Mat K = conjugate_slots(M, dims_of(inst, target), slots, iso);
        std::vector<int> support{head};
        support.insert(support.end(), others.begin(), others.end());
        Dims fd{static_cast<int>(iso.cols())};
        for (int p : others) fd.push_back(inst.dims[p]);
        out.terms.push_back(sorted_term(t.id, support, fd, K));
    }
    for (int p : members) out.dims[p] = 1;
    out.dims[head] = static_cast<int>(iso.cols());
    return normalize(out, false).instance;
}

int slot_key(const LocalTerm& t, int q) {
    if (t.support.size() == 1) return -1;
    return t.support[0] == q ? t.support[1] : t.support[0];
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::witness:
            return "witness";
        case Verdict::unsat:
            return "unsat";
        case Verdict::budget:
            return "budget";
    }
    return "?";
}

std::vector<int> star_slots(const Instance& inst, int q) {
    std::set<int> keys;
    for (int i : inst.terms_on(q)) {
        const auto& t = inst.terms[i];
        if (t.support.size() > 2) throw InputError("term " + std::to_string(t.id) + " is not 2-local");
        keys.insert(slot_key(t, q));
    }
    return {keys.begin(), keys.end()};
}

Instance apply_star_step(const Instance& inst, const StarStep& step, double tol) {
    int q = step.particle;
    if (q < 0 || q >= inst.num_particles()) throw InputError("star step: particle out of range");
    auto keys = star_slots(inst, q);
    if (step.slot_dims.size() != keys.size())
        throw InputError("star step: particle " + std::to_string(q) + " has " + std::to_string(keys.size()) +
                         " slots, witness gives " + std::to_string(step.slot_dims.size()));
    int64_t m = 1;
    for (int s : step.slot_dims) {
        if (s < 1) throw InputError("star step: slot dimensions must be positive");
        m *= s;
    }
    if (step.basis.rows() != inst.dims[q] || step.basis.cols() != m)
        throw InputError("star step: basis shape does not match the slot dimensions");
    Instance r;
    try {
        r = restrict_particle(inst, q, step.basis);
    } catch (const InputError& e) {
        throw InputError(std::string("block not invariant: ") + e.what());
    }
    int n = r.num_particles();
    std::vector<int> slot_particle(keys.size());
    for (size_t s = 0; s < keys.size(); ++s) slot_particle[s] = s == 0 ? q : n + static_cast<int>(s) - 1;
    Instance out = r;
    out.dims[q] = step.slot_dims[0];
    for (size_t s = 1; s < keys.size(); ++s) {
        out.dims.push_back(step.slot_dims[s]);
        out.labels.push_back((q < static_cast<int>(r.labels.size()) ? r.labels[q] : "p" + std::to_string(q)) + "." +
                             std::to_string(s));
    }
    for (auto& t : out.terms) {
        auto it = std::find(t.support.begin(), t.support.end(), q);
        if (it == t.support.end()) continue;
        int pos = static_cast<int>(it - t.support.begin());
        int key = slot_key(t, q);
        int s = static_cast<int>(std::find(keys.begin(), keys.end(), key) - keys.begin());
        if (s == static_cast<int>(keys.size())) throw InputError("star step: term outside the slots");
        Dims fd;
        for (int j = 0; j < static_cast<int>(t.support.size()); ++j) {
            if (j == pos)
                fd.insert(fd.end(), step.slot_dims.begin(), step.slot_dims.end());
            else
                fd.push_back(r.dims[t.support[j]]);
        }
        int k = static_cast<int>(keys.size());
        std::vector<int> keep;
        for (int j = 0; j < static_cast<int>(fd.size()); ++j) {
            bool is_q_slot = j >= pos && j < pos + k;
            if (is_q_slot && j != pos + s) {
                if (!acts_trivially_on(t.matrix, fd, j, tol))
                    throw InputError("term " + std::to_string(t.id) + " is not carried by slot " + std::to_string(s) +
                                     " of particle " + std::to_string(q));
                continue;
            }
            keep.push_back(j);
        }
        Mat M = partial_average(t.matrix, fd, keep);
        std::vector<int> support;
        Dims nd;
        for (int j = 0; j < static_cast<int>(t.support.size()); ++j) {
            support.push_back(j == pos ? slot_particle[s] : t.support[j]);
            nd.push_back(out.dims[support.back()]);
        }
        t = sorted_term(t.id, support, nd, (M + M.adjoint()) / 2.0);
    }
    return normalize(out, false).instance;
}

Prove2Result prove_2local(const Instance& inst, const ProveOptions& opt) {
    Instance cur = normalize(inst, false).instance;
    if (cur.max_support() > 2) throw InputError("prove_2local: instance is not 2-local");
    Prove2Result res;
    if (!opt.ignore_oracle && oracle_kernel(cur, opt.oracle) == 0) {
        res.verdict = Verdict::unsat;
        res.message = "oracle: no common null state";
        return res;
    }
    for (;;) {
        int q = -1;
        for (int p = 0; p < cur.num_particles() && q < 0; ++p)
            if (star_slots(cur, p).size() >= 2) q = p;
        if (q < 0) break;
        auto keys = star_slots(cur, q);
        std::vector<MatrixAlgebra> algs;
        for (int key : keys) {
            std::vector<Mat> gens;
            for (int i : cur.terms_on(q))
                if (slot_key(cur.terms[i], q) == key) {
                    auto a = induced_algebra(cur, cur.terms[i], q);
                    gens.insert(gens.end(), a.basis.begin(), a.basis.end());
                }
            algs.push_back(generate_algebra(gens));
        }
        auto sep = separating_decomposition(algs, opt.seed);
        std::vector<StarStep> cands;
        for (const auto& b : sep.blocks) {
            StarStep st;
            st.particle = q;
            st.slot_dims.assign(b.factor_dims.begin(), b.factor_dims.begin() + keys.size());
            int rest = b.factor_dims.back();
            int64_t m = 1;
            for (int s : st.slot_dims) m *= s;
            st.basis.resize(cur.dims[q], m);
            for (int64_t a = 0; a < m; ++a) st.basis.col(a) = b.basis.col(a * rest);
            cands.push_back(std::move(st));
        }
        int chosen = -1, unknown = -1;
        Instance next;
        for (size_t c = 0; c < cands.size() && chosen < 0; ++c) {
            Instance t = apply_star_step(cur, cands[c]);
            int64_t k = opt.ignore_oracle ? 1 : oracle_kernel(t, opt.oracle);
            if (k > 0) {
                chosen = static_cast<int>(c);
                next = std::move(t);
            } else if (k < 0 && unknown < 0) {
                unknown = static_cast<int>(c);
            }
        }
        if (chosen < 0 && unknown >= 0) {
            chosen = unknown;
            next = apply_star_step(cur, cands[chosen]);
        }
        if (chosen < 0) {
            res.verdict = Verdict::unsat;
            res.message = "oracle: no block of particle " + std::to_string(q) + " keeps a common null state";
            return res;
        }
        res.witness.steps.push_back(cands[chosen]);
        cur = std::move(next);
    }
    return res;
}

VerifyResult verify_2local(const Instance& inst, const Clh2Witness& w, const VerifyOptions& opt) {
    auto reject = [](std::string why) { return VerifyResult{false, std::move(why)}; };
    try {
        Instance cur = normalize(inst, false).instance;
        if (cur.max_support() > 2) return reject("instance is not 2-local");
        for (const auto& step : w.steps) {
            try {
                cur = apply_star_step(cur, step, opt.tol);
            } catch (const InputError& e) {
                return reject(e.what());
            }
        }
        for (const auto& t : cur.terms)
            if (t.support.empty()) return reject("term " + std::to_string(t.id) + " reduced to the identity");
        for (int p = 0; p < cur.num_particles(); ++p)
            if (star_slots(cur, p).size() > 1)
                return reject("final instance is not a disjoint-edge set (particle " + std::to_string(p) + ")");
        for (const auto& comp : particle_components(cur)) {
            std::vector<int> idx;
            for (int i = 0; i < static_cast<int>(cur.terms.size()); ++i)
                if (std::binary_search(comp.begin(), comp.end(), cur.terms[i].support[0])) idx.push_back(i);
            if (idx.empty()) continue;
            Instance sub = sub_instance(cur, comp, idx);
            if (dim_product(sub.dims) > opt.dense_cap) return reject("final component exceeds the dense cap");
            if (kernel_dim_dense(sub, opt.dense_cap).dim == 0)
                return reject("final component at particle " + std::to_string(comp[0]) + " has no common null state");
        }
    } catch (const std::exception& e) {
        return reject(std::string("malformed witness: ") + e.what());
    }
    return {true, ""};
}

Prove32Result prove_3local_qubits(const Instance& inst, const ProveOptions& opt) {
    Instance cur = normalize(inst, false).instance;
    if (cur.max_support() > 3) throw InputError("prove: instance is more than 3-local");
    for (int d : cur.dims)
        if (d > 2) throw InputError("prove: the 3-local prover handles qubits only");
    Prove32Result res;
    auto fail = [&](Verdict v, std::string msg) {
        res.verdict = v;
        res.message = std::move(msg);
        res.witness = {};
        return res;
    };
    if (!opt.ignore_oracle && oracle_kernel(cur, opt.oracle) == 0)
        return fail(Verdict::unsat, "oracle: no common null state");

    Instance R = cur;
    if (!opt.skip_elimination) {
        BlockChooser chooser = [&](const Instance& c, int p, const std::vector<Mat>& pieces) -> int {
            if (opt.ignore_oracle) return 0;
            int unknown = -1;
            for (size_t i = 0; i < pieces.size(); ++i) {
                int64_t k = oracle_kernel(restrict_particle(c, p, pieces[i]), opt.oracle);
                if (k > 0) return static_cast<int>(i);
                if (k < 0 && unknown < 0) unknown = static_cast<int>(i);
            }
            if (unknown >= 0) return unknown;
            throw UnsatSignal{"oracle: no piece of particle " + std::to_string(p) + " keeps a common null state"};
        };
        try {
            auto e = eliminate_separable(cur, chooser, opt.seed);
            R = std::move(e.residual);
            res.witness.steps = std::move(e.log);
        } catch (const UnsatSignal& u) {
            return fail(Verdict::unsat, u.message);
        }
    }

    Instance Rcur = R;
    for (const auto& comp : particle_components(R)) {
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(R.terms.size()); ++i)
            if (!R.terms[i].support.empty() &&
                std::binary_search(comp.begin(), comp.end(), R.terms[i].support[0]))
                idx.push_back(i);
        if (idx.empty()) continue;
        Instance sub = sub_instance(R, comp, idx);
        Backbone bb = find_backbone(sub, opt.budget);
        AlmostOneD rep;
        CoarseGraining G = coarse_grain(sub, bb, opt.group_size, &rep);
        if (!rep.ok)
            return fail(Verdict::budget, "no almost-1D grouping: " + rep.message +
                                             (bb.budget_exhausted ? " (search budget exhausted)" : ""));
        for (auto& grp : G.Q)
            for (int& p : grp) p = comp[p];
        for (auto& grp : G.V)
            for (int& p : grp) p = comp[p];
        std::vector<Slicing> sl;
        for (int i = 0; i < static_cast<int>(G.Q.size()); ++i) {
            std::vector<Slicing> cands;
            try {
                cands = slice_candidates(R, G, i, opt.block_cap, opt.seed);
            } catch (const CapExceeded& e) {
                return fail(Verdict::budget, e.what());
            }
            int chosen = -1, unknown = -1;
            for (size_t c = 0; c < cands.size() && chosen < 0; ++c) {
                if (opt.ignore_oracle) {
                    chosen = 0;
                    break;
                }
                int64_t k = oracle_kernel(restrict_group(Rcur, G.Q[i], cands[c].isometry), opt.oracle);
                if (k > 0)
                    chosen = static_cast<int>(c);
                else if (k < 0 && unknown < 0)
                    unknown = static_cast<int>(c);
            }
            if (chosen < 0) chosen = unknown;
            if (chosen < 0)
                return fail(Verdict::unsat, "oracle: no block of Q_" + std::to_string(i) + " keeps a common null state");
            Rcur = restrict_group(Rcur, G.Q[i], cands[chosen].isometry);
            sl.push_back(cands[chosen]);
        }
        res.witness.groupings.push_back(std::move(G));
        res.witness.slicings.push_back(std::move(sl));
    }

    FusedInstance fused;
    try {
        fused = fuse_and_reduce(R, res.witness.groupings, res.witness.slicings);
    } catch (const InputError& e) {
        return fail(Verdict::budget, std::string("fusing failed: ") + e.what());
    }
    auto p2 = prove_2local(fused.instance, opt);
    if (p2.verdict != Verdict::witness) return fail(p2.verdict, p2.message);
    res.witness.fused = std::move(p2.witness);
    return res;
}

VerifyResult verify_3local_qubits(const Instance& inst, const Clh32Witness& w, const VerifyOptions& opt) {
    auto reject = [](std::string why) { return VerifyResult{false, std::move(why)}; };
    try {
        Instance cur = normalize(inst, false).instance;
        if (cur.max_support() > 3) return reject("instance is more than 3-local");
        for (int d : cur.dims)
            if (d > 2) return reject("instance is not a qubit instance");
        for (const auto& step : w.steps) {
            if (step.particle < 0 || step.particle >= cur.num_particles())
                return reject("elimination step particle out of range");
            try {
                cur = restrict_particle(cur, step.particle, step.basis);
            } catch (const InputError& e) {
                return reject(std::string("block not invariant: ") + e.what());
            }
        }
        if (w.groupings.size() != w.slicings.size()) return reject("one slicing list per grouping is required");
        std::set<int> used;
        for (const auto& G : w.groupings) {
            for (const auto* lists : {&G.Q, &G.V})
                for (const auto& grp : *lists)
                    for (int p : grp) {
                        if (p < 0 || p >= cur.num_particles()) return reject("grouping particle out of range");
                        if (!used.insert(p).second)
                            return reject("particle " + std::to_string(p) + " appears twice in the groupings");
                    }
            auto rep = check_almost_1d(cur, G);
            if (!rep.ok) return reject(rep.message);
        }
        for (size_t c = 0; c < w.groupings.size(); ++c) {
            const auto& G = w.groupings[c];
            if (w.slicings[c].size() != G.Q.size()) return reject("one slicing per group is required");
            for (size_t i = 0; i < G.Q.size(); ++i) {
                const auto& s = w.slicings[c][i];
                if (s.i != static_cast<int>(i)) return reject("slicings out of order");
                std::string why = check_slicing(cur, G, s, opt.block_cap, opt.tol);
                if (!why.empty()) return reject(why);
            }
        }
        FusedInstance fused;
        try {
            fused = fuse_and_reduce(cur, w.groupings, w.slicings, opt.tol);
        } catch (const InputError& e) {
            return reject(e.what());
        }
        return verify_2local(fused.instance, w.fused, opt);
    } catch (const std::exception& e) {
        return reject(std::string("malformed witness: ") + e.what());
    }
}

nlohmann::json witness_to_json(const Clh2Witness& w) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : w.steps)
        steps.push_back({{"particle", s.particle}, {"basis", matrix_to_json(s.basis)}, {"slot_dims", s.slot_dims}});
    return {{"version", 1}, {"kind", "clh2"}, {"steps", steps}};
}

Clh2Witness clh2_witness_from_json(const nlohmann::json& j) {
    try {
        if (j.value("kind", "clh2") != "clh2") throw InputError("witness: expected kind clh2");
        Clh2Witness w;
        for (const auto& s : j.at("steps")) {
            StarStep st;
            st.particle = s.at("particle").get<int>();
            st.basis = matrix_from_json(s.at("basis"));
            st.slot_dims = s.at("slot_dims").get<std::vector<int>>();
            w.steps.push_back(std::move(st));
        }
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("witness: ") + e.what());
    }
}

nlohmann::json witness_to_json(const Clh32Witness& w) {
    nlohmann::json steps = nlohmann::json::array(), grouping = nlohmann::json::array(),
                   slicings = nlohmann::json::array();
    for (const auto& s : w.steps) steps.push_back({{"particle", s.particle}, {"basis", matrix_to_json(s.basis)}});
    for (size_t c = 0; c < w.groupings.size(); ++c) {
        const auto& G = w.groupings[c];
        grouping.push_back({{"Q", G.Q}, {"V", G.V}, {"closed", G.closed}});
        for (const auto& s : w.slicings[c])
            slicings.push_back({{"component", c},
                                {"i", s.i},
                                {"block_basis", matrix_to_json(s.block_basis)},
                                {"left_dims", s.left_dim},
                                {"right_dims", s.right_dim},
                                {"isometry", matrix_to_json(s.isometry)}});
    }
    return {{"version", 1},     {"kind", "clh32"},       {"steps", steps},
            {"grouping", grouping}, {"slicings", slicings}, {"fused_witness", witness_to_json(w.fused)}};
}

Clh32Witness clh32_witness_from_json(const nlohmann::json& j) {
    try {
        if (j.value("kind", "clh32") != "clh32") throw InputError("witness: expected kind clh32");
        Clh32Witness w;
        for (const auto& s : j.at("steps"))
            w.steps.push_back({s.at("particle").get<int>(), matrix_from_json(s.at("basis"))});
        for (const auto& g : j.at("grouping")) {
            CoarseGraining G;
            G.Q = g.at("Q").get<std::vector<std::vector<int>>>();
            G.V = g.at("V").get<std::vector<std::vector<int>>>();
            G.closed = g.value("closed", false);
            w.groupings.push_back(std::move(G));
        }
        w.slicings.resize(w.groupings.size());
        for (const auto& s : j.at("slicings")) {
            size_t c = s.at("component").get<size_t>();
            if (c >= w.slicings.size()) throw InputError("witness: slicing component out of range");
            Slicing sl;
            sl.i = s.at("i").get<int>();
            sl.block_basis = matrix_from_json(s.at("block_basis"));
            sl.left_dim = s.at("left_dims").get<int>();
            sl.right_dim = s.at("right_dims").get<int>();
            sl.isometry = matrix_from_json(s.at("isometry"));
            w.slicings[c].push_back(std::move(sl));
        }
        w.fused = clh2_witness_from_json(j.at("fused_witness"));
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("witness: ") + e.what());
    }
}

}  // namespace clh
