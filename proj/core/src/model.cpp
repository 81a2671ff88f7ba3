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

#include "clh/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "clh/errors.hpp"

namespace clh {

int Instance::max_support() const {
    int m = 0;
    for (const auto& t : terms) m = std::max(m, static_cast<int>(t.support.size()));
    return m;
}

int Instance::max_dim() const {
    int m = 0;
    for (int d : dims) m = std::max(m, d);
    return m;
}

std::vector<int> Instance::terms_on(int p) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(terms.size()); ++i)
        if (std::binary_search(terms[i].support.begin(), terms[i].support.end(), p)) out.push_back(i);
    return out;
}

bool Instance::has_contradiction() const {
    for (const auto& t : terms)
        if (t.support.empty() && t.matrix.size() == 1 && std::abs(t.matrix(0, 0) - 1.0) <= 0.5) return true;
    return false;
}

std::vector<int> support_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> u;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
}

Mat embed_term(const Instance& inst, const LocalTerm& t, const std::vector<int>& target) {
    return embed_on_support(t.matrix, t.support, target, inst.dims);
}

double commutator_norm(const Instance& inst, const LocalTerm& a, const LocalTerm& b) {
    std::vector<int> common;
    std::set_intersection(a.support.begin(), a.support.end(), b.support.begin(), b.support.end(),
                          std::back_inserter(common));
    if (common.empty()) return 0.0;
    auto u = support_union(a.support, b.support);
    Dims udims;
    for (int p : u) udims.push_back(inst.dims[p]);
    std::vector<int> wires;
    for (int p : a.support) wires.push_back(static_cast<int>(std::lower_bound(u.begin(), u.end(), p) - u.begin()));
    Mat EB = embed_term(inst, b, u);
    Mat X = apply_on_wires(EB, udims, a.matrix, wires);  // A B
    return (X - X.adjoint()).norm();
}

namespace {

Dims support_dims(const Instance& inst, const std::vector<int>& support) {
    Dims d;
    for (int p : support) d.push_back(inst.dims[p]);
    return d;
}

bool term_shape_ok(const Instance& inst, const LocalTerm& t, std::string* why) {
    for (size_t i = 0; i < t.support.size(); ++i) {
        if (t.support[i] < 0 || t.support[i] >= inst.num_particles()) {
            *why = "particle out of range";
            return false;
        }
        if (i > 0 && t.support[i] <= t.support[i - 1]) {
            *why = "support not strictly ascending";
            return false;
        }
    }
    int64_t D = dim_product(support_dims(inst, t.support));
    if (t.matrix.rows() != D || t.matrix.cols() != D) {
        *why = "matrix does not match support dimensions";
        return false;
    }
    if (!all_finite(t.matrix)) {
        *why = "non-finite matrix entries";
        return false;
    }
    return true;
}

}  // namespace

std::vector<Violation> validate(const Instance& inst) {
    std::vector<Violation> out;
    for (int p = 0; p < inst.num_particles(); ++p)
        if (inst.dims[p] < 1) out.push_back({"dims", {}, 0, "particle " + std::to_string(p) + " has dimension < 1"});
    std::vector<bool> shape_ok(inst.terms.size());
    for (size_t i = 0; i < inst.terms.size(); ++i) {
        const auto& t = inst.terms[i];
        std::string why;
        shape_ok[i] = term_shape_ok(inst, t, &why);
        if (!shape_ok[i]) {
            out.push_back({"support", {t.id}, 0, why});
            continue;
        }
        if (static_cast<int>(t.support.size()) > inst.k)
            out.push_back({"locality", {t.id}, static_cast<double>(t.support.size()),
                           "support size exceeds k = " + std::to_string(inst.k)});
        double h = (t.matrix - t.matrix.adjoint()).norm();
        if (h > inst.tol) out.push_back({"hermitian", {t.id}, h, "term is not Hermitian"});
        double pr = (t.matrix * t.matrix - t.matrix).norm();
        if (pr > inst.tol) out.push_back({"projector", {t.id}, pr, "term is not a projector"});
    }
    std::set<std::pair<int, int>> pairs;
    for (int p = 0; p < inst.num_particles(); ++p) {
        auto on = inst.terms_on(p);
        for (size_t a = 0; a < on.size(); ++a)
            for (size_t b = a + 1; b < on.size(); ++b) pairs.insert({on[a], on[b]});
    }
    for (auto [a, b] : pairs) {
        if (!shape_ok[a] || !shape_ok[b]) continue;
        double c = commutator_norm(inst, inst.terms[a], inst.terms[b]);
        if (c > inst.tol)
            out.push_back({"commutation", {inst.terms[a].id, inst.terms[b].id}, c, "terms do not commute"});
    }
    return out;
}

bool acts_trivially_on(const Mat& M, const Dims& factor_dims, int pos, double tol) {
    if (factor_dims[pos] == 1) return true;
    double scale = std::max(1.0, max_abs(M));
    if (factor_dims.size() == 1) {
        cplx c = M.trace() / static_cast<double>(M.rows());
        return max_abs(M - c * Mat::Identity(M.rows(), M.cols())) <= tol * scale;
    }
    auto pairs = operator_schmidt(M, BipartiteCut{factor_dims, {pos}}, tol);
    std::vector<Mat> gens{Mat::Identity(factor_dims[pos], factor_dims[pos])};
    for (auto& pr : pairs) gens.push_back(pr.A);
    return hs_orthonormalize(gens, tol).size() == 1;
}

NormalizeResult normalize(const Instance& inst, bool compact) {
    NormalizeResult res;
    Instance out = inst;
    out.terms.clear();
    for (const auto& t0 : inst.terms) {
        LocalTerm t = t0;
        double scale = std::max(1.0, max_abs(t.matrix));
        if (max_abs(t.matrix) <= inst.tol * scale) continue;
        bool changed = true;
        while (changed && !t.support.empty()) {
            changed = false;
            Dims fd = support_dims(inst, t.support);
            for (int pos = 0; pos < static_cast<int>(t.support.size()); ++pos) {
                if (!acts_trivially_on(t.matrix, fd, pos, inst.tol)) continue;
                std::vector<int> keep;
                for (int j = 0; j < static_cast<int>(fd.size()); ++j)
                    if (j != pos) keep.push_back(j);
                if (fd[pos] != 1) t.matrix = partial_average(t.matrix, fd, keep);
                t.support.erase(t.support.begin() + pos);
                changed = true;
                break;
            }
        }
        if (t.support.empty()) {
            cplx c = t.matrix.size() == 1 ? t.matrix(0, 0) : cplx(0);
            if (std::abs(c) <= 10 * inst.tol) continue;
            if (std::abs(c - 1.0) > 10 * inst.tol)
                throw InputError("normalize: term " + std::to_string(t.id) + " reduces to a non-projector scalar");
            t.matrix = Mat::Identity(1, 1);
            res.unsatisfiable = true;
        }
        out.terms.push_back(std::move(t));
    }
    res.remap.resize(inst.num_particles());
    std::iota(res.remap.begin(), res.remap.end(), 0);
    if (compact) {
        Instance c = out;
        c.dims.clear();
        c.labels.clear();
        int next = 0;
        for (int p = 0; p < inst.num_particles(); ++p) {
            if (inst.dims[p] == 1) {
                res.remap[p] = -1;
                continue;
            }
            res.remap[p] = next++;
            c.dims.push_back(inst.dims[p]);
            if (p < static_cast<int>(inst.labels.size())) c.labels.push_back(inst.labels[p]);
        }
        for (auto& t : c.terms)
            for (auto& p : t.support) p = res.remap[p];
        out = std::move(c);
    }
    res.instance = std::move(out);
    return res;
}

Instance restrict_particle(const Instance& inst, int particle, const Mat& basis) {
    if (particle < 0 || particle >= inst.num_particles()) throw InputError("restrict_particle: particle out of range");
    int d = inst.dims[particle];
    int m = static_cast<int>(basis.cols());
    if (basis.rows() != d || m < 1 || m > d) throw InputError("restrict_particle: basis has wrong shape");
    if (!all_finite(basis)) throw InputError("restrict_particle: non-finite basis");
    double tol = std::max(inst.tol, 1e-12);
    if (max_abs(basis.adjoint() * basis - Mat::Identity(m, m)) > 10 * tol)
        throw InputError("restrict_particle: basis is not orthonormal");
    Instance out = inst;
    std::vector<int> touched;
    for (size_t i = 0; i < out.terms.size(); ++i) {
        auto& t = out.terms[i];
        auto it = std::lower_bound(t.support.begin(), t.support.end(), particle);
        if (it == t.support.end() || *it != particle) continue;
        int pos = static_cast<int>(it - t.support.begin());
        int64_t before = 1, after = 1;
        for (int j = 0; j < pos; ++j) before *= inst.dims[t.support[j]];
        for (int j = pos + 1; j < static_cast<int>(t.support.size()); ++j) after *= inst.dims[t.support[j]];
        Mat J = kron(kron(Mat::Identity(before, before), basis), Mat::Identity(after, after));
        Mat H = J.adjoint() * t.matrix * J;
        double scale = std::max(1.0, max_abs(H));
        if ((H * H - H).norm() > 10 * tol * scale || (H - H.adjoint()).norm() > 10 * tol * scale)
            throw InputError("restrict_particle: restriction of term " + std::to_string(t.id) +
                             " is not a projector (subspace not preserved)");
        t.matrix = (H + H.adjoint()) / 2.0;
        touched.push_back(static_cast<int>(i));
    }
    out.dims[particle] = m;
    for (int i : touched)
        for (int j = 0; j < static_cast<int>(out.terms.size()); ++j) {
            if (j == i || (j < i && std::binary_search(touched.begin(), touched.end(), j))) continue;
            double c = commutator_norm(out, out.terms[i], out.terms[j]);
            if (c > 10 * tol)
                throw InputError("restrict_particle: restricted terms " + std::to_string(out.terms[i].id) + " and " +
                                 std::to_string(out.terms[j].id) + " do not commute");
        }
    return normalize(out, false).instance;
}

Instance sub_instance(const Instance& inst, const std::vector<int>& particles,
                      const std::vector<int>& term_indices) {
    Instance out;
    out.k = inst.k;
    out.tol = inst.tol;
    std::map<int, int> index;
    for (int p : particles) {
        index[p] = static_cast<int>(out.dims.size());
        out.dims.push_back(inst.dims[p]);
        if (p < static_cast<int>(inst.labels.size())) out.labels.push_back(inst.labels[p]);
    }
    for (int ti : term_indices) {
        LocalTerm t = inst.terms[ti];
        for (auto& p : t.support) {
            auto it = index.find(p);
            if (it == index.end()) throw InputError("sub_instance: term leaves the particle set");
            p = it->second;
        }
        out.terms.push_back(std::move(t));
    }
    return out;
}

std::vector<std::vector<int>> particle_components(const Instance& inst) {
    int n = inst.num_particles();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& t : inst.terms)
        for (size_t i = 1; i < t.support.size(); ++i) {
            int a = find(t.support[0]), b = find(t.support[i]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::map<int, std::vector<int>> groups;
    for (int p = 0; p < n; ++p) groups[find(p)].push_back(p);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

Mat support_projector(const Mat& psd, double tol) {
    auto es = hermitian_eigensystem(psd, tol);
    double top = es.values.size() ? std::max(std::abs(es.values(0)), std::abs(es.values(es.values.size() - 1))) : 0;
    Mat P = Mat::Zero(psd.rows(), psd.cols());
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        if (es.values(i) > tol * std::max(1.0, top)) P += es.vectors.col(i) * es.vectors.col(i).adjoint();
    return P;
}

nlohmann::json matrix_to_json(const Mat& M) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            re.push_back(M(r, c).real());
            im.push_back(M(r, c).imag());
        }
    return {{"rows", M.rows()}, {"cols", M.cols()}, {"re", re}, {"im", im}};
}

Mat matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("re"))
        throw InputError("matrix: expected {rows, cols, re, im}");
    int64_t rows = j.at("rows").get<int64_t>(), cols = j.at("cols").get<int64_t>();
    if (rows < 0 || cols < 0) throw InputError("matrix: negative shape");
    const auto& re = j.at("re");
    if (!re.is_array() || static_cast<int64_t>(re.size()) != rows * cols) throw InputError("matrix: re has wrong length");
    bool has_im = j.contains("im");
    if (has_im && (!j.at("im").is_array() || static_cast<int64_t>(j.at("im").size()) != rows * cols))
        throw InputError("matrix: im has wrong length");
    Mat M(rows, cols);
    for (int64_t r = 0; r < rows; ++r)
        for (int64_t c = 0; c < cols; ++c) {
            double x = re[r * cols + c].get<double>();
            double y = has_im ? j.at("im")[r * cols + c].get<double>() : 0.0;
            M(r, c) = cplx(x, y);
        }
    if (!all_finite(M)) throw InputError("matrix: non-finite entries");
    return M;
}

nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["version"] = 1;
    j["dims"] = inst.dims;
    if (!inst.labels.empty()) j["labels"] = inst.labels;
    j["k"] = inst.k;
    j["tol"] = inst.tol;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : inst.terms)
        terms.push_back({{"id", t.id}, {"support", t.support}, {"matrix", matrix_to_json(t.matrix)}});
    j["terms"] = terms;
    return j;
}

Instance instance_from_json(const nlohmann::json& j) {
    try {
        Instance inst;
        if (!j.is_object()) throw InputError("instance: expected a JSON object");
        if (j.contains("version") && j.at("version").get<int>() != 1) throw InputError("instance: unsupported version");
        inst.dims = j.at("dims").get<Dims>();
        if (inst.dims.empty()) throw InputError("instance: dims must be nonempty");
        for (int d : inst.dims)
            if (d < 2) throw InputError("instance: every dimension must be >= 2");
        if (j.contains("labels")) inst.labels = j.at("labels").get<std::vector<std::string>>();
        if (j.contains("tol")) inst.tol = j.at("tol").get<double>();
        if (!(inst.tol >= 0)) throw InputError("instance: tol must be nonnegative");
        for (const auto& jt : j.at("terms")) {
            LocalTerm t;
            t.id = jt.at("id").get<int>();
            t.support = jt.at("support").get<std::vector<int>>();
            t.matrix = matrix_from_json(jt.at("matrix"));
            for (int p : t.support)
                if (p < 0 || p >= static_cast<int>(inst.dims.size())) throw InputError("instance: support out of range");
            std::vector<int> perm(t.support.size());
            std::iota(perm.begin(), perm.end(), 0);
            std::sort(perm.begin(), perm.end(), [&](int a, int b) { return t.support[a] < t.support[b]; });
            for (size_t i = 1; i < perm.size(); ++i)
                if (t.support[perm[i]] == t.support[perm[i - 1]]) throw InputError("instance: repeated particle in support");
            Dims fd;
            for (int p : t.support) fd.push_back(inst.dims[p]);
            if (t.matrix.rows() != dim_product(fd) || t.matrix.cols() != dim_product(fd))
                throw InputError("instance: term " + std::to_string(t.id) + " matrix does not match its support");
            if (!std::is_sorted(t.support.begin(), t.support.end())) {
                t.matrix = permute_factors(t.matrix, fd, perm);
                std::sort(t.support.begin(), t.support.end());
            }
            inst.terms.push_back(std::move(t));
        }
        std::set<int> ids;
        for (const auto& t : inst.terms)
            if (!ids.insert(t.id).second) throw InputError("instance: duplicate term id " + std::to_string(t.id));
        inst.k = j.contains("k") ? j.at("k").get<int>() : std::max(1, inst.max_support());
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("instance: ") + e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << instance_to_json(inst).dump(1) << "\n";
}

}  // namespace clh
