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


#include "clh/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "clh/errors.hpp"
#include "clh/tensor_core.hpp"

namespace clh {

namespace {

struct Emitter {
    Circuit c;
    int next_wire = 0;
    int64_t gate_cap = 256;
    std::vector<Gate> layer[3];

    int fresh(int dim) {
        c.wire_dims[next_wire] = dim;
        return next_wire++;
    }

    void add(int l, std::vector<int> in, std::vector<int> out, Mat M) {
        int64_t rows = M.rows(), cols = M.cols();
        if (std::max(rows, cols) > gate_cap)
            throw CapExceeded("circuit: gate of dimension " + std::to_string(std::max(rows, cols)) + " exceeds cap " +
                              std::to_string(gate_cap));
        Gate g;
        g.inputs = std::move(in);
        g.outputs = std::move(out);
        g.matrix = std::move(M);
        g.ancillas = rows > cols ? static_cast<int>(std::ceil(std::log2(static_cast<double>(rows) / cols) - 1e-9)) : 0;
        layer[l].push_back(std::move(g));
    }

    // Drops dimension-1 wires.
    std::vector<int> nontrivial(const std::vector<int>& ws) const {
        std::vector<int> out;
        for (int w : ws)
            if (c.wire_dims.at(w) > 1) out.push_back(w);
        return out;
    }

    void finish() {
        for (auto& l : layer)
            if (!l.empty()) c.layers.push_back(std::move(l));
        std::set<int> produced, needed;
        for (const auto& l : c.layers)
            for (const auto& g : l) {
                for (int w : g.inputs)
                    if (!produced.count(w)) needed.insert(w);
                produced.insert(g.outputs.begin(), g.outputs.end());
            }
        for (int p = 0; p < c.num_physical; ++p)
            if (!produced.count(p) && c.wire_dims.at(p) > 1) needed.insert(p);
        c.inputs.assign(needed.begin(), needed.end());
    }
};

Mat common_eigenbasis(const Instance& sub, std::mt19937_64& rng) {
    std::vector<int> all(sub.num_particles());
    for (int i = 0; i < sub.num_particles(); ++i) all[i] = i;
    int64_t D = dim_product(sub.dims);
    Mat H = Mat::Zero(D, D);
    std::uniform_real_distribution<double> coef(1.0, 2.0);
    for (const auto& t : sub.terms) H += coef(rng) * embed_term(sub, t, all);
    Eigen::SelfAdjointEigenSolver<Mat> es((H + H.adjoint()) / 2.0);
    return es.eigenvectors();
}

// Layers 1 and 2 for a 2-local instance F and its witness. wires_of(x) are
// the circuit wires carrying particle x of F, first slowest.
void emit_2local(const Instance& F0, const Clh2Witness& w, const std::function<std::vector<int>(int)>& wires_of,
                 Emitter& em, uint64_t seed) {
    Instance S = normalize(F0, false).instance;
    std::vector<std::vector<int>> wmap(S.num_particles());
    for (int x = 0; x < S.num_particles(); ++x) wmap[x] = em.nontrivial(wires_of(x));
    for (const auto& step : w.steps) {
        int n = S.num_particles();
        int k = static_cast<int>(star_slots(S, step.particle).size());
        S = apply_star_step(S, step);
        std::vector<int> slot_particle{step.particle};
        for (int s = 1; s < k; ++s) slot_particle.push_back(n + s - 1);
        wmap.resize(S.num_particles());
        std::vector<int> slot_wires, in;
        for (int s = 0; s < k; ++s) {
            slot_wires.push_back(em.fresh(step.slot_dims[s]));
            if (step.slot_dims[s] > 1) in.push_back(slot_wires.back());
        }
        em.add(1, in, wmap[step.particle], step.basis);
        for (int s = 0; s < k; ++s) wmap[slot_particle[s]] = em.nontrivial({slot_wires[s]});
    }
    std::mt19937_64 rng(seed);
    for (const auto& comp : particle_components(S)) {
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(S.terms.size()); ++i)
            if (!S.terms[i].support.empty() &&
                std::binary_search(comp.begin(), comp.end(), S.terms[i].support[0]))
                idx.push_back(i);
        if (idx.empty()) continue;
        Instance sub = sub_instance(S, comp, idx);
        int64_t D = dim_product(sub.dims);
        if (D > em.gate_cap)
            throw CapExceeded("circuit: final component of dimension " + std::to_string(D) + " exceeds the gate cap");
        std::vector<int> in, out;
        for (int x : comp) {
            if (S.dims[x] > 1) in.push_back(em.fresh(S.dims[x]));
            out.insert(out.end(), wmap[x].begin(), wmap[x].end());
        }
        em.add(0, in, out, common_eigenbasis(sub, rng));
    }
}

}  // namespace

Circuit emit_circuit(const Instance& inst, const Clh2Witness& w, const CircuitOptions& opt) {
    Instance cur = normalize(inst, false).instance;
    Emitter em;
    em.gate_cap = opt.gate_cap;
    em.c.num_physical = cur.num_particles();
    for (int p = 0; p < cur.num_particles(); ++p) em.fresh(cur.dims[p]);
    emit_2local(cur, w, [](int x) { return std::vector<int>{x}; }, em, opt.seed);
    em.finish();
    return em.c;
}

Circuit emit_circuit(const Instance& inst, const Clh32Witness& w, const CircuitOptions& opt) {
    Instance cur = normalize(inst, false).instance;
    int n = cur.num_particles();
    Emitter em;
    em.gate_cap = opt.gate_cap;
    em.c.num_physical = n;
    for (int p = 0; p < n; ++p) em.fresh(cur.dims[p]);
    std::vector<Mat> B(n);
    for (int p = 0; p < n; ++p) B[p] = Mat::Identity(cur.dims[p], cur.dims[p]);
    for (const auto& step : w.steps) {
        cur = restrict_particle(cur, step.particle, step.basis);
        B[step.particle] = B[step.particle] * step.basis;
    }
    for (int p = 0; p < n; ++p) {
        if (B[p].cols() == B[p].rows()) continue;
        if (B[p].cols() != 1) throw InputError("circuit: partially restricted particles are not supported");
        em.add(0, {}, {p}, B[p]);
    }
    FusedInstance fused = fuse_and_reduce(cur, w.groupings, w.slicings);
    std::vector<std::vector<int>> lw(w.groupings.size()), rw(w.groupings.size());
    for (size_t c = 0; c < w.groupings.size(); ++c)
        for (const auto& s : w.slicings[c]) {
            lw[c].push_back(em.fresh(s.left_dim));
            rw[c].push_back(em.fresh(s.right_dim));
        }
    auto wires_of = [&](int x) -> std::vector<int> {
        const auto& o = fused.origin[x];
        if (o.window < 0) return {o.particle};
        auto gs = w.groupings[o.component].window_groups(o.window);
        std::vector<int> out{rw[o.component][gs[0]]};
        if (gs.size() > 1) out.push_back(lw[o.component][gs[1]]);
        return out;
    };
    emit_2local(fused.instance, w.fused, wires_of, em, opt.seed);
    for (size_t c = 0; c < w.groupings.size(); ++c)
        for (size_t i = 0; i < w.groupings[c].Q.size(); ++i)
            em.add(2, em.nontrivial({lw[c][i], rw[c][i]}), w.groupings[c].Q[i], w.slicings[c][i].isometry);
    em.finish();
    return em.c;
}

namespace {

// Rows of X indexed by wires `from` (first slowest), reordered to `to`.
Mat reorder_rows(const Mat& X, const std::vector<int>& from, const std::vector<int>& to,
                 const std::map<int, int>& dims) {
    if (from == to) return X;
    Dims fd;
    for (int w : from) fd.push_back(dims.at(w));
    std::vector<int64_t> stride(from.size());
    int64_t s = 1;
    for (int i = static_cast<int>(from.size()) - 1; i >= 0; --i) {
        stride[i] = s;
        s *= fd[i];
    }
    std::vector<int64_t> tstride, tdim;
    for (int w : to) {
        int i = static_cast<int>(std::find(from.begin(), from.end(), w) - from.begin());
        tstride.push_back(stride[i]);
        tdim.push_back(fd[i]);
    }
    Mat Y(X.rows(), X.cols());
    std::vector<int64_t> digit(to.size(), 0);
    int64_t src = 0;
    for (int64_t r = 0; r < X.rows(); ++r) {
        Y.row(r) = X.row(src);
        for (int i = static_cast<int>(to.size()) - 1; i >= 0; --i) {
            if (++digit[i] < tdim[i]) {
                src += tstride[i];
                break;
            }
            src -= (tdim[i] - 1) * tstride[i];
            digit[i] = 0;
        }
    }
    return Y;
}

}  // namespace

CircuitCheck verify_circuit(const Instance& inst0, const Circuit& c, double tol, int64_t dense_cap, int64_t gate_cap) {
    CircuitCheck out;
    out.layers = static_cast<int>(c.layers.size());
    auto fail = [&](std::string why) {
        out.ok = false;
        out.reason = std::move(why);
        return out;
    };
    Instance inst = normalize(inst0, false).instance;
    int n = inst.num_particles();
    if (c.num_physical != n) return fail("circuit has the wrong number of physical wires");
    if (c.layers.size() > 3) return fail("circuit has more than 3 layers");
    auto dim_of = [&](int w) -> int64_t {
        auto it = c.wire_dims.find(w);
        if (it == c.wire_dims.end()) throw InputError("circuit: unknown wire " + std::to_string(w));
        return it->second;
    };
    std::set<int> live(c.inputs.begin(), c.inputs.end());
    if (live.size() != c.inputs.size()) return fail("repeated input wire");
    try {
        for (size_t l = 0; l < c.layers.size(); ++l) {
            std::set<int> touched;
            for (const auto& g : c.layers[l]) {
                int64_t rows = 1, cols = 1;
                for (int w : g.inputs) cols *= dim_of(w);
                for (int w : g.outputs) rows *= dim_of(w);
                if (g.matrix.rows() != rows || g.matrix.cols() != cols) return fail("gate matrix has the wrong shape");
                out.max_gate_dim = std::max(out.max_gate_dim, std::max(rows, cols));
                if (std::max(rows, cols) > gate_cap) return fail("gate exceeds the gate cap");
                if (!all_finite(g.matrix) || max_abs(g.matrix.adjoint() * g.matrix - Mat::Identity(cols, cols)) > tol)
                    return fail("gate in layer " + std::to_string(l + 1) + " is not an isometry");
                std::set<int> mine(g.inputs.begin(), g.inputs.end());
                mine.insert(g.outputs.begin(), g.outputs.end());
                for (int w : mine)
                    if (!touched.insert(w).second)
                        return fail("gates in layer " + std::to_string(l + 1) + " overlap on wire " + std::to_string(w));
                for (int w : g.inputs)
                    if (!live.erase(w)) return fail("gate consumes a wire that is not live");
            }
            // outputs after all inputs of the layer are consumed
            std::set<int> seen;
            for (const auto& g : c.layers[l])
                for (int w : g.outputs) {
                    if (!seen.insert(w).second) return fail("gates in one layer produce the same wire");
                    if (!live.insert(w).second) return fail("gate produces a live wire");
                }
        }
        for (int p = 0; p < n; ++p)
            if (dim_of(p) != inst.dims[p]) return fail("physical wire has the wrong dimension");
        std::set<int> want;
        for (int p = 0; p < n; ++p)
            if (inst.dims[p] > 1) want.insert(p);
        std::set<int> got;
        for (int w : live)
            if (dim_of(w) > 1) got.insert(w);
        if (got != want) return fail("circuit does not end on the physical wires");
    } catch (const InputError& e) {
        return fail(e.what());
    }
    int64_t Dphys = dim_product(inst.dims), Din = 1;
    if (Dphys > dense_cap) throw CapExceeded("verify_circuit: dimension " + std::to_string(Dphys) + " exceeds cap");
    for (int w : c.inputs) Din *= dim_of(w);
    if (Din > Dphys) return fail("label register is larger than the physical space");
    out.columns = Din;
    std::vector<int> phys;
    for (int p = 0; p < n; ++p) phys.push_back(p);
    const int64_t batch = 64;
    for (int64_t c0 = 0; c0 < Din; c0 += batch) {
        int64_t b = std::min(batch, Din - c0);
        Mat X = Mat::Zero(Din, b);
        for (int64_t j = 0; j < b; ++j) X(c0 + j, j) = 1.0;
        std::vector<int> order = c.inputs;
        for (const auto& layer : c.layers)
            for (const auto& g : layer) {
                std::vector<int> rest, to = g.inputs;
                for (int w : order)
                    if (std::find(g.inputs.begin(), g.inputs.end(), w) == g.inputs.end()) rest.push_back(w);
                to.insert(to.end(), rest.begin(), rest.end());
                X = reorder_rows(X, order, to, c.wire_dims);
                int64_t in = g.matrix.cols(), out_dim = g.matrix.rows();
                int64_t rdim = X.rows() / in;
                Mat Y(out_dim * rdim, b);
                for (int64_t j = 0; j < b; ++j) {
                    Eigen::Map<const Mat> xin(X.col(j).data(), rdim, in);
                    Eigen::Map<Mat> yout(Y.col(j).data(), rdim, out_dim);
                    yout.noalias() = xin * g.matrix.transpose();
                }
                X = std::move(Y);
                order = g.outputs;
                order.insert(order.end(), rest.begin(), rest.end());
            }
        // dimension-1 wires carry no index
        std::vector<int> kept;
        for (int w : order)
            if (dim_of(w) > 1) kept.push_back(w);
        std::vector<int> target;
        for (int p : phys)
            if (inst.dims[p] > 1) target.push_back(p);
        X = reorder_rows(X, kept, target, c.wire_dims);
        std::vector<bool> ground(b, true);
        for (const auto& t : inst.terms) {
            Mat HX;
            if (t.support.empty())
                HX = t.matrix(0, 0) * X;
            else
                HX = apply_on_wires(X, inst.dims, t.matrix, t.support);
            for (int64_t j = 0; j < b; ++j) {
                cplx lam = X.col(j).dot(HX.col(j));
                out.residual = std::max(out.residual, (HX.col(j) - lam * X.col(j)).norm());
                if (std::abs(lam) > 1e-6) ground[j] = false;
            }
        }
        for (bool g : ground) out.ground_columns += g;
    }
    if (out.residual > tol) return fail("a column is not a common eigenvector (residual " + std::to_string(out.residual) + ")");
    out.ok = true;
    return out;
}

nlohmann::json circuit_to_json(const Circuit& c) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : c.layers) {
        nlohmann::json gates = nlohmann::json::array();
        for (const auto& g : l) {
            std::set<int> support(g.inputs.begin(), g.inputs.end());
            support.insert(g.outputs.begin(), g.outputs.end());
            gates.push_back({{"support", std::vector<int>(support.begin(), support.end())},
                             {"inputs", g.inputs},
                             {"outputs", g.outputs},
                             {"matrix", matrix_to_json(g.matrix)},
                             {"ancillas", g.ancillas}});
        }
        layers.push_back(gates);
    }
    nlohmann::json wires = nlohmann::json::array();
    for (const auto& [w, d] : c.wire_dims) wires.push_back({w, d});
    return {{"version", 1}, {"num_physical", c.num_physical}, {"wires", wires}, {"inputs", c.inputs}, {"layers", layers}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
    try {
        Circuit c;
        c.num_physical = j.at("num_physical").get<int>();
        for (const auto& w : j.at("wires")) c.wire_dims[w.at(0).get<int>()] = w.at(1).get<int>();
        c.inputs = j.at("inputs").get<std::vector<int>>();
        for (const auto& l : j.at("layers")) {
            std::vector<Gate> gates;
            for (const auto& g : l) {
                Gate gate;
                gate.inputs = g.at("inputs").get<std::vector<int>>();
                gate.outputs = g.at("outputs").get<std::vector<int>>();
                gate.matrix = matrix_from_json(g.at("matrix"));
                gate.ancillas = g.value("ancillas", 0);
                gates.push_back(std::move(gate));
            }
            c.layers.push_back(std::move(gates));
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("circuit: ") + e.what());
    }
}

}  // namespace clh
