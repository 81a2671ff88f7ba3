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

#include "clh/qutrit_geom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "clh/errors.hpp"

namespace clh {

namespace {

using Edge = std::array<int, 2>;

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

Rational cross(const Point& a, const Point& b, const Point& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// Closed segments ab and cd share a point.
bool segments_meet(const Point& a, const Point& b, const Point& c, const Point& d) {
    int o1 = sign(cross(a, b, c)), o2 = sign(cross(a, b, d));
    int o3 = sign(cross(c, d, a)), o4 = sign(cross(c, d, b));
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

Rational polygon_area2(const std::vector<Point>& pts, const std::vector<int>& cycle) {
    Rational s = 0;
    for (size_t i = 0; i < cycle.size(); ++i) {
        const Point& p = pts[cycle[i]];
        const Point& q = pts[cycle[(i + 1) % cycle.size()]];
        s += p.x * q.y - q.x * p.y;
    }
    return s;
}

std::vector<std::vector<int>> faces_by_vertex(const PlanarEmbedding& emb) {
    std::vector<std::vector<int>> out(emb.vertices.size());
    for (const auto& f : emb.faces) {
        if (f.id == emb.infinite_face) continue;
        for (int v : f.cycle) out[v].push_back(f.id);
    }
    return out;
}

// Boundary cycle of a set of counterclockwise triangles, or an error message.
std::string boundary_cycle(const std::vector<std::array<int, 3>>& tris, std::vector<int>* cycle) {
    std::set<Edge> directed;
    for (const auto& t : tris)
        for (int i = 0; i < 3; ++i) directed.insert({t[i], t[(i + 1) % 3]});
    std::map<int, int> next;
    size_t count = 0;
    for (const auto& e : directed) {
        if (directed.count({e[1], e[0]})) continue;
        if (next.count(e[0])) return "boundary is pinched at vertex " + std::to_string(e[0]);
        next[e[0]] = e[1];
        ++count;
    }
    cycle->clear();
    if (next.empty()) return "region has no boundary";
    int start = next.begin()->first;
    int v = start;
    do {
        cycle->push_back(v);
        auto it = next.find(v);
        if (it == next.end()) return "boundary is not closed";
        v = it->second;
    } while (v != start && cycle->size() <= count);
    if (cycle->size() != count) return "boundary has more than one cycle";
    return "";
}

Rational parse_rational(const nlohmann::json& j) {
    if (j.is_array() && j.size() == 2) {
        auto part = [](const nlohmann::json& x) {
            if (x.is_string()) return boost::multiprecision::cpp_int(x.get<std::string>());
            return boost::multiprecision::cpp_int(x.get<int64_t>());
        };
        auto den = part(j[1]);
        if (den == 0) throw InputError("embedding: zero denominator");
        return Rational(part(j[0]), den);
    }
    if (j.is_number_integer()) return Rational(j.get<int64_t>());
    throw InputError("embedding: coordinates must be [num, den]");
}

nlohmann::json rational_json(const Rational& r) {
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    auto limit = boost::multiprecision::cpp_int(std::numeric_limits<int64_t>::max());
    if (abs(num) <= limit && den <= limit)
        return nlohmann::json::array({static_cast<int64_t>(num), static_cast<int64_t>(den)});
    return nlohmann::json::array({num.str(), den.str()});
}

}  // namespace

std::vector<std::array<int, 2>> PlanarEmbedding::edges() const {
    std::set<Edge> out;
    for (const auto& f : faces)
        for (size_t i = 0; i < f.cycle.size(); ++i) out.insert(make_edge(f.cycle[i], f.cycle[(i + 1) % f.cycle.size()]));
    return {out.begin(), out.end()};
}

PlanarEmbedding build_embedding(const Instance& inst, const std::vector<Point>& coords,
                                const std::vector<std::vector<int>>& faces, int infinite_face) {
    int n = inst.num_particles();
    if (static_cast<int>(coords.size()) != n)
        throw InputError("embedding: expected " + std::to_string(n) + " vertices, got " +
                         std::to_string(coords.size()));
    if (infinite_face < 0 || infinite_face >= static_cast<int>(faces.size()))
        throw InputError("embedding: infinite face id out of range");
    PlanarEmbedding emb;
    emb.vertices = coords;
    emb.infinite_face = infinite_face;
    std::map<Edge, int> edge_faces;
    std::vector<bool> used(n, false);
    Rational finite_area2 = 0;
    for (size_t f = 0; f < faces.size(); ++f) {
        Face face;
        face.id = static_cast<int>(f);
        face.cycle = faces[f];
        if (face.cycle.size() < 3) throw InputError("embedding: face " + std::to_string(f) + " has fewer than 3 vertices");
        std::set<int> distinct(face.cycle.begin(), face.cycle.end());
        if (distinct.size() != face.cycle.size())
            throw InputError("embedding: face " + std::to_string(f) + " repeats a vertex");
        for (int v : face.cycle) {
            if (v < 0 || v >= n) throw InputError("embedding: face " + std::to_string(f) + " has an unknown vertex");
            used[v] = true;
        }
        if (face.id != infinite_face) {
            if (face.cycle.size() != 3)
                throw InputError("embedding: finite face " + std::to_string(f) + " is not a triangle");
            Rational a2 = cross(coords[face.cycle[0]], coords[face.cycle[1]], coords[face.cycle[2]]);
            if (a2 == 0) throw InputError("embedding: face " + std::to_string(f) + " is degenerate");
            if (a2 < 0) std::reverse(face.cycle.begin(), face.cycle.end());
            finite_area2 += abs(a2);
        }
        for (size_t i = 0; i < face.cycle.size(); ++i)
            ++edge_faces[make_edge(face.cycle[i], face.cycle[(i + 1) % face.cycle.size()])];
        emb.faces.push_back(face);
    }
    for (int v = 0; v < n; ++v)
        if (!used[v]) throw InputError("embedding: vertex " + std::to_string(v) + " lies on no face");
    for (const auto& [e, c] : edge_faces)
        if (c != 2)
            throw InputError("embedding: edge (" + std::to_string(e[0]) + "," + std::to_string(e[1]) + ") lies on " +
                             std::to_string(c) + " faces");
    std::vector<Edge> edges;
    for (const auto& kv : edge_faces) edges.push_back(kv.first);
    for (size_t i = 0; i < edges.size(); ++i) {
        for (size_t j = i + 1; j < edges.size(); ++j) {
            const Edge& e = edges[i];
            const Edge& g = edges[j];
            std::set<int> ends{e[0], e[1], g[0], g[1]};
            if (ends.size() == 4) {
                if (segments_meet(coords[e[0]], coords[e[1]], coords[g[0]], coords[g[1]]))
                    throw InputError("embedding: edges (" + std::to_string(e[0]) + "," + std::to_string(e[1]) +
                                     ") and (" + std::to_string(g[0]) + "," + std::to_string(g[1]) + ") cross");
            } else {
                int shared = (e[0] == g[0] || e[0] == g[1]) ? e[0] : e[1];
                int a = e[0] == shared ? e[1] : e[0];
                int b = g[0] == shared ? g[1] : g[0];
                const Point& s = coords[shared];
                if (sign(cross(s, coords[a], coords[b])) == 0) {
                    Rational dot = (coords[a].x - s.x) * (coords[b].x - s.x) + (coords[a].y - s.y) * (coords[b].y - s.y);
                    if (dot > 0) throw InputError("embedding: edges overlap at vertex " + std::to_string(shared));
                }
            }
        }
    }
    int64_t V = n, E = static_cast<int64_t>(edges.size()), F = static_cast<int64_t>(faces.size());
    if (V - E + F != 2) throw InputError("embedding: Euler characteristic is " + std::to_string(V - E + F));
    Rational outer2 = abs(polygon_area2(coords, faces[infinite_face]));
    if (outer2 != finite_area2) throw InputError("embedding: finite faces do not tile the outer boundary");

    for (const auto& t : inst.terms) {
        if (t.support.empty()) continue;
        if (t.support.size() > 3)
            throw InputError("embedding: term " + std::to_string(t.id) + " is more than 3-local");
        int found = -1;
        for (const auto& f : emb.faces) {
            if (f.id == infinite_face) continue;
            bool all = std::all_of(t.support.begin(), t.support.end(), [&](int p) {
                return std::find(f.cycle.begin(), f.cycle.end(), p) != f.cycle.end();
            });
            if (all) {
                found = f.id;
                break;
            }
        }
        if (found < 0) throw InputError("embedding: no op face for term " + std::to_string(t.id));
        emb.faces[found].op = true;
        emb.faces[found].terms.push_back(t.id);
    }
    return emb;
}

std::vector<Point> tutte_coordinates(int num_vertices, const std::vector<std::vector<int>>& faces, int outer_face) {
    const auto& outer = faces.at(outer_face);
    if (outer.size() != 3) throw InputError("tutte: outer face must be a triangle");
    std::vector<std::set<int>> nbr(num_vertices);
    for (const auto& f : faces)
        for (size_t i = 0; i < f.size(); ++i) {
            int a = f[i], b = f[(i + 1) % f.size()];
            nbr[a].insert(b);
            nbr[b].insert(a);
        }
    std::vector<Point> pts(num_vertices);
    std::vector<int> index(num_vertices, -1);
    Point pin[3] = {{0, 0}, {12, 0}, {0, 12}};
    for (int i = 0; i < 3; ++i) pts[outer[i]] = pin[i];
    std::vector<int> inner;
    for (int v = 0; v < num_vertices; ++v)
        if (std::find(outer.begin(), outer.end(), v) == outer.end()) {
            index[v] = static_cast<int>(inner.size());
            inner.push_back(v);
        }
    int m = static_cast<int>(inner.size());
    // deg(v) p_v - sum_{inner nbrs} p_u = sum_{outer nbrs} p_u
    std::vector<std::vector<Rational>> A(m, std::vector<Rational>(m + 2, 0));
    for (int r = 0; r < m; ++r) {
        int v = inner[r];
        A[r][r] = static_cast<int>(nbr[v].size());
        for (int u : nbr[v]) {
            if (index[u] >= 0) {
                A[r][index[u]] -= 1;
            } else {
                A[r][m] += pts[u].x;
                A[r][m + 1] += pts[u].y;
            }
        }
    }
    for (int c = 0; c < m; ++c) {
        int piv = c;
        while (piv < m && A[piv][c] == 0) ++piv;
        if (piv == m) throw InputError("tutte: singular system");
        std::swap(A[piv], A[c]);
        for (int r = 0; r < m; ++r) {
            if (r == c || A[r][c] == 0) continue;
            Rational f = A[r][c] / A[c][c];
            for (int k = c; k < m + 2; ++k) A[r][k] -= f * A[c][k];
        }
    }
    for (int r = 0; r < m; ++r) {
        pts[inner[r]].x = A[r][m] / A[r][r];
        pts[inner[r]].y = A[r][m + 1] / A[r][r];
    }
    return pts;
}

std::vector<std::vector<int>> dual_graph(const PlanarEmbedding& emb) {
    std::map<Edge, std::vector<int>> owners;
    for (const auto& f : emb.faces)
        for (size_t i = 0; i < f.cycle.size(); ++i)
            owners[make_edge(f.cycle[i], f.cycle[(i + 1) % f.cycle.size()])].push_back(f.id);
    std::vector<std::set<int>> adj(emb.faces.size());
    for (const auto& [e, fs] : owners)
        for (int a : fs)
            for (int b : fs)
                if (a != b) adj[a].insert(b);
    std::vector<std::vector<int>> out;
    for (const auto& s : adj) out.emplace_back(s.begin(), s.end());
    return out;
}

std::vector<int> dual_distances(const PlanarEmbedding& emb, const std::vector<int>& sources) {
    auto adj = dual_graph(emb);
    std::vector<int> dist(emb.faces.size(), -1);
    std::deque<int> queue;
    for (int s : sources) {
        if (dist[s] < 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop_front();
        for (int g : adj[f])
            if (dist[g] < 0) {
                dist[g] = dist[f] + 1;
                queue.push_back(g);
            }
    }
    return dist;
}

Tessellation tessellation_of(const PlanarEmbedding& emb, std::vector<int> faces) {
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    std::vector<std::array<int, 3>> tris;
    for (int f : faces) {
        const Face& face = emb.faces.at(f);
        if (f == emb.infinite_face || face.cycle.size() != 3) throw InputError("tessellation: face " + std::to_string(f) + " is not finite");
        if (!face.op) throw InputError("tessellation: face " + std::to_string(f) + " is noop");
        tris.push_back({face.cycle[0], face.cycle[1], face.cycle[2]});
    }
    Tessellation t;
    t.faces = faces;
    std::string err = boundary_cycle(tris, &t.boundary);
    if (!err.empty()) throw InputError("tessellation: " + err);
    t.boundary_edges = static_cast<int>(t.boundary.size());
    return t;
}

int TessellationTrace::max_boundary_edges() const {
    int m = 0;
    for (const auto& s : steps) m = std::max(m, s.boundary_edges);
    return m;
}

TessellationTrace tessellate(const PlanarEmbedding& emb, int w, int eta, const TessellateOptions& opt) {
    if (w < 0 || w >= static_cast<int>(emb.faces.size()) || w == emb.infinite_face || !emb.faces[w].op)
        throw InputError("tessellate: start face must be an op face");
    TessellationTrace trace;
    std::vector<int> noop;
    for (const auto& f : emb.faces)
        if (!f.op) noop.push_back(f.id);
    auto from_w = dual_distances(emb, {w});
    for (int f : noop)
        if (from_w[f] >= 0 && (trace.premise_distance < 0 || from_w[f] < trace.premise_distance))
            trace.premise_distance = from_w[f];
    if (opt.check_premise && trace.premise_distance >= 0 && trace.premise_distance <= eta)
        throw InputError("tessellate: noop face within dual distance " + std::to_string(trace.premise_distance) +
                         " <= eta = " + std::to_string(eta));

    auto incident = faces_by_vertex(emb);
    std::set<int> T{w};
    Tessellation cur = tessellation_of(emb, {w});
    trace.steps.push_back({-1, {w}, cur.boundary_edges, 1});
    int steps = opt.until_failure ? static_cast<int>(emb.faces.size()) : std::max(1, eta / 5);
    Tessellation prev = cur;
    int last = -1;
    for (int i = 2; i <= steps; ++i) {
        std::set<int> external(cur.boundary.begin(), cur.boundary.end());
        int v = -1;
        if (last < 0) {
            v = *std::min_element(cur.boundary.begin(), cur.boundary.end());
        } else {
            auto it = std::find(prev.boundary.begin(), prev.boundary.end(), last);
            size_t pos = static_cast<size_t>(it - prev.boundary.begin());
            for (size_t k = 1; k < prev.boundary.size(); ++k) {
                int c = prev.boundary[(pos + k) % prev.boundary.size()];
                if (external.count(c)) {
                    v = c;
                    break;
                }
            }
            if (v < 0) v = *external.begin();
        }
        std::vector<int> added;
        bool blocked = false;
        for (int f : incident[v]) {
            if (T.count(f)) continue;
            if (!emb.faces[f].op) blocked = true;
            added.push_back(f);
        }
        // a vertex on the outer boundary also touches the infinite face
        const auto& inf = emb.faces[emb.infinite_face].cycle;
        if (std::find(inf.begin(), inf.end(), v) != inf.end()) blocked = true;
        if (blocked) {
            trace.failed = true;
            trace.failing_vertex = v;
            trace.failure = "cannot close an operator path on vertex " + std::to_string(v) + " (noop face)";
            break;
        }
        std::vector<int> next(T.begin(), T.end());
        next.insert(next.end(), added.begin(), added.end());
        Tessellation t;
        try {
            t = tessellation_of(emb, next);
        } catch (const InputError& e) {
            trace.failed = true;
            trace.failing_vertex = v;
            trace.failure = e.what();
            break;
        }
        std::sort(added.begin(), added.end());
        T.insert(added.begin(), added.end());
        prev = cur;
        cur = t;
        last = v;
        trace.steps.push_back({v, added, t.boundary_edges, static_cast<int>(T.size())});
    }
    return trace;
}

EulerStats euler_stats(const std::vector<std::array<int, 3>>& triangles, bool closed) {
    if (triangles.empty()) throw InputError("euler: empty tessellation");
    std::set<int> verts;
    std::set<Edge> edges;
    std::map<int, std::vector<int>> by_vertex;
    for (size_t i = 0; i < triangles.size(); ++i) {
        const auto& t = triangles[i];
        for (int k = 0; k < 3; ++k) {
            verts.insert(t[k]);
            edges.insert(make_edge(t[k], t[(k + 1) % 3]));
            by_vertex[t[k]].push_back(static_cast<int>(i));
        }
    }
    // connectivity through shared vertices
    std::vector<bool> seen(triangles.size(), false);
    std::deque<int> queue{0};
    seen[0] = true;
    size_t reached = 1;
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        for (int v : triangles[i])
            for (int j : by_vertex[v])
                if (!seen[j]) {
                    seen[j] = true;
                    ++reached;
                    queue.push_back(j);
                }
    }
    if (reached != triangles.size()) throw InputError("euler: tessellation is disconnected");
    EulerStats s;
    s.V = static_cast<int64_t>(verts.size());
    s.E = static_cast<int64_t>(edges.size());
    s.F = static_cast<int64_t>(triangles.size()) + (closed ? 0 : 1);
    s.a = Rational(2 * s.E, s.F);
    s.b = Rational(2 * s.E, s.V);
    s.chi = Rational(s.V - s.E + s.F);
    s.lhs = (s.a - 2) * (s.b - 2);
    s.rhs = 4 * (1 - Rational(2, s.F)) * (1 - Rational(2, s.V));
    return s;
}

EulerStats euler_stats(const PlanarEmbedding& emb, const Tessellation& t) {
    std::vector<std::array<int, 3>> tris;
    for (int f : t.faces) {
        const auto& c = emb.faces.at(f).cycle;
        tris.push_back({c[0], c[1], c[2]});
    }
    return euler_stats(tris, false);
}

std::vector<std::array<int, 3>> random_triangulated_polygon(int faces, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::array<int, 3>> tris{{0, 1, 2}};
    std::vector<int> boundary{0, 1, 2};
    std::set<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
    int next_vertex = 3;
    while (static_cast<int>(tris.size()) < faces) {
        size_t m = boundary.size();
        size_t i = std::uniform_int_distribution<size_t>(0, m - 1)(rng);
        bool ear = m > 3 && std::uniform_int_distribution<int>(0, 2)(rng) == 0;
        if (ear) {
            int u = boundary[i], v = boundary[(i + 1) % m], w = boundary[(i + 2) % m];
            if (!edges.count(make_edge(u, w))) {
                tris.push_back({u, v, w});
                edges.insert(make_edge(u, w));
                boundary.erase(boundary.begin() + static_cast<std::ptrdiff_t>((i + 1) % m));
                continue;
            }
        }
        int u = boundary[i], v = boundary[(i + 1) % m];
        int x = next_vertex++;
        tris.push_back({u, x, v});
        edges.insert(make_edge(u, x));
        edges.insert(make_edge(x, v));
        boundary.insert(boundary.begin() + static_cast<std::ptrdiff_t>(i + 1), x);
    }
    return tris;
}

DegreeAudit degree_audit(const Instance& inst) {
    DegreeAudit out;
    auto g = build_graph(inst);
    for (int v = 0; v < g.num_vertices; ++v) {
        out.max_degree = std::max(out.max_degree, g.degree(v));
        if (g.degree(v) >= 6) out.high_degree.push_back(v);
        if (longest_path_on(inst, v, 5).length() >= 5) out.long_paths.push_back(v);
    }
    return out;
}

HoleAudit hole_density_audit(const PlanarEmbedding& emb, int eta) {
    HoleAudit out;
    std::vector<int> noop;
    for (const auto& f : emb.faces)
        if (!f.op) noop.push_back(f.id);
    auto dist = dual_distances(emb, noop);
    out.distance.assign(emb.faces.size(), -1);
    for (const auto& f : emb.faces) {
        if (!f.op) continue;
        out.distance[f.id] = dist[f.id];
        out.max_distance = std::max(out.max_distance, dist[f.id]);
        if (dist[f.id] < 0 || dist[f.id] > eta) out.violations.push_back(f.id);
    }
    return out;
}

EliminationResult eliminate_separable_qutrits(const Instance& inst, const BlockChooser& chooser) {
    for (int d : inst.dims)
        if (d > 3) throw InputError("qutrit elimination: particle dimension exceeds 3");
    return eliminate_separable(inst, chooser);
}

std::string rational_string(const Rational& r) {
    auto den = boost::multiprecision::denominator(r);
    if (den == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

nlohmann::json embedding_to_json(const PlanarEmbedding& emb) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (size_t v = 0; v < emb.vertices.size(); ++v)
        j["vertices"].push_back({{"id", v}, {"x", rational_json(emb.vertices[v].x)}, {"y", rational_json(emb.vertices[v].y)}});
    j["faces"] = nlohmann::json::array();
    for (const auto& f : emb.faces) {
        nlohmann::json jf{{"id", f.id}, {"cycle", f.cycle}, {"label", f.op ? "op" : "noop"}};
        if (f.op) jf["terms"] = f.terms;
        j["faces"].push_back(jf);
    }
    j["infinite_face"] = emb.infinite_face;
    return j;
}

PlanarEmbedding embedding_from_json(const Instance& inst, const nlohmann::json& j) {
    try {
        std::vector<Point> pts(j.at("vertices").size());
        std::vector<bool> seen(pts.size(), false);
        for (const auto& jv : j.at("vertices")) {
            size_t id = jv.at("id").get<size_t>();
            if (id >= pts.size() || seen[id]) throw InputError("embedding: bad vertex id");
            seen[id] = true;
            pts[id] = {parse_rational(jv.at("x")), parse_rational(jv.at("y"))};
        }
        std::vector<std::vector<int>> faces(j.at("faces").size());
        std::vector<std::string> labels(faces.size());
        for (const auto& jf : j.at("faces")) {
            size_t id = jf.at("id").get<size_t>();
            if (id >= faces.size()) throw InputError("embedding: bad face id");
            faces[id] = jf.at("cycle").get<std::vector<int>>();
            labels[id] = jf.value("label", "");
        }
        PlanarEmbedding emb = build_embedding(inst, pts, faces, j.at("infinite_face").get<int>());
        for (size_t f = 0; f < faces.size(); ++f) {
            if (labels[f].empty()) continue;
            if ((labels[f] == "op") != emb.faces[f].op)
                throw InputError("embedding: face " + std::to_string(f) + " label disagrees with the term list");
        }
        return emb;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("embedding: ") + e.what());
    }
}

std::string embedding_svg(const PlanarEmbedding& emb) {
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    std::vector<std::array<double, 2>> p;
    for (const auto& v : emb.vertices) {
        double x = v.x.convert_to<double>(), y = v.y.convert_to<double>();
        p.push_back({x, y});
        minx = std::min(minx, x), maxx = std::max(maxx, x);
        miny = std::min(miny, y), maxy = std::max(maxy, y);
    }
    double span = std::max({maxx - minx, maxy - miny, 1e-9});
    double scale = 480.0 / span;
    auto X = [&](int v) { return 10 + (p[v][0] - minx) * scale; };
    auto Y = [&](int v) { return 490 - (p[v][1] - miny) * scale; };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\">\n";
    for (const auto& f : emb.faces) {
        if (f.id == emb.infinite_face) continue;
        os << "<polygon points=\"";
        for (int v : f.cycle) os << X(v) << "," << Y(v) << " ";
        os << "\" fill=\"" << (f.op ? "#9ecae1" : "white") << "\" stroke=\"black\"/>\n";
    }
    for (size_t v = 0; v < p.size(); ++v)
        os << "<circle cx=\"" << X(static_cast<int>(v)) << "\" cy=\"" << Y(static_cast<int>(v)) << "\" r=\"3\"/>\n";
    os << "</svg>\n";
    return os.str();
}

double min_angle_degrees(const PlanarEmbedding& emb) {
    double best = 180;
    for (const auto& f : emb.faces) {
        if (f.id == emb.infinite_face) continue;
        for (int k = 0; k < 3; ++k) {
            const Point& a = emb.vertices[f.cycle[k]];
            const Point& b = emb.vertices[f.cycle[(k + 1) % 3]];
            const Point& c = emb.vertices[f.cycle[(k + 2) % 3]];
            double ux = (b.x - a.x).convert_to<double>(), uy = (b.y - a.y).convert_to<double>();
            double vx = (c.x - a.x).convert_to<double>(), vy = (c.y - a.y).convert_to<double>();
            double ang = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy) * 180.0 / M_PI;
            best = std::min(best, ang);
        }
    }
    return best;
}

double edge_length_ratio(const PlanarEmbedding& emb) {
    double lo = 1e300, hi = 0;
    for (const auto& e : emb.edges()) {
        double dx = (emb.vertices[e[0]].x - emb.vertices[e[1]].x).convert_to<double>();
        double dy = (emb.vertices[e[0]].y - emb.vertices[e[1]].y).convert_to<double>();
        double len = std::hypot(dx, dy);
        lo = std::min(lo, len);
        hi = std::max(hi, len);
    }
    return lo > 0 ? hi / lo : 0;
}

}  // namespace clh
