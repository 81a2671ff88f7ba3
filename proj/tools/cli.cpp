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


#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "clh/algebra.hpp"
#include "clh/circuit.hpp"
#include "clh/errors.hpp"
#include "clh/instances.hpp"
#include "clh/model.hpp"
#include "clh/oracle.hpp"
#include "clh/qutrit_geom.hpp"
#include "clh/structure.hpp"
#include "clh/witness.hpp"
#include "json.hpp"

namespace clh::cli {

namespace {

using nlohmann::json;

struct Config {
    double tol = -1;  // < 0: keep the instance tolerance
    uint64_t seed = 1;
    int64_t dense_cap = int64_t{1} << 12;
    int64_t block_cap = kDefaultBlockCap;
    int64_t gate_cap = 256;
    int64_t budget = kDefaultSearchBudget;
    std::string out;
    bool strict = false;
    int threads = 1;
};

struct Rejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    f << text;
}

Instance load(const std::string& path, const Config& cfg, json* raw = nullptr) {
    json j = read_json(path);
    Instance inst = instance_from_json(j);
    if (cfg.tol >= 0) inst.tol = cfg.tol;
    if (raw) *raw = std::move(j);
    return inst;
}

Instance load_valid(const std::string& path, const Config& cfg, json* raw = nullptr) {
    Instance inst = load(path, cfg, raw);
    auto v = validate(inst);
    if (!v.empty()) throw InputError(path + ": invalid instance: " + v.front().message);
    return inst;
}

PlanarEmbedding load_embedding(const Instance& inst, const json& raw, const std::string& embedding_path) {
    if (!embedding_path.empty()) return embedding_from_json(inst, read_json(embedding_path));
    if (!raw.contains("embedding")) throw InputError("no embedding: pass --embedding or use a planar fixture");
    return embedding_from_json(inst, raw.at("embedding"));
}

OracleConfig oracle_config(const Config& cfg) {
    OracleConfig oc;
    oc.dense_cap = cfg.dense_cap;
    oc.seed = cfg.seed;
    return oc;
}

json violations_json(const std::vector<Violation>& vs) {
    json a = json::array();
    for (const auto& v : vs)
        a.push_back({{"kind", v.kind}, {"terms", v.term_ids}, {"norm", v.norm}, {"message", v.message}});
    return a;
}

// Report and exit code of one subcommand.
struct Outcome {
    json report = json::object();
    int code = kOk;
    std::string summary;
    std::vector<std::string> warnings;
};

Outcome cmd_validate(const std::string& path, const Config& cfg) {
    Instance inst = load(path, cfg);
    Outcome o;
    auto vs = validate(inst);
    Instance tight = inst;
    tight.tol = inst.tol * 1e-2;
    for (const auto& v : validate(tight))
        if (v.norm <= inst.tol) o.warnings.push_back(v.kind + " residual " + std::to_string(v.norm) + " near tolerance");
    o.report = {{"valid", vs.empty()}, {"violations", violations_json(vs)}};
    o.code = vs.empty() ? kOk : kRejected;
    o.summary = vs.empty() ? "valid" : std::to_string(vs.size()) + " violation(s): " + vs.front().message;
    return o;
}

Outcome cmd_normalize(const std::string& path, bool keep_ids, const Config& cfg) {
    Instance inst = load_valid(path, cfg);
    auto r = normalize(inst, !keep_ids);
    Outcome o;
    json j = instance_to_json(r.instance);
    if (cfg.out.empty()) {
        o.report = j;
    } else {
        write_text(cfg.out, j.dump(1) + "\n");
        o.report = {{"particles", r.instance.num_particles()},
                    {"terms", r.instance.terms.size()},
                    {"unsatisfiable", r.unsatisfiable},
                    {"remap", r.remap}};
    }
    o.code = r.unsatisfiable ? kRejected : kOk;
    o.summary = std::to_string(r.instance.num_particles()) + " particles, " + std::to_string(r.instance.terms.size()) +
                " terms" + (r.unsatisfiable ? ", unsatisfiable" : "");
    return o;
}

Outcome cmd_analyze(const std::string& path, int only, const Config& cfg) {
    Instance inst = load_valid(path, cfg);
    Outcome o;
    auto g = build_graph(inst);
    json edges = json::array();
    for (int v = 0; v < g.num_vertices; ++v)
        for (int u : g.adjacency[v])
            if (v < u) edges.push_back({v, u});
    o.report["graph"] = {{"vertices", g.num_vertices}, {"edges", edges}, {"components", g.components}};
    json parts = json::array();
    int separable = 0;
    for (int p = 0; p < inst.num_particles(); ++p) {
        if (only >= 0 && p != only) continue;
        json jp = {{"particle", p}, {"dim", inst.dims[p]}};
        json tids = json::array();
        for (int t : inst.terms_on(p)) tids.push_back(inst.terms[t].id);
        jp["terms"] = tids;
        auto s = is_separable(inst, p, cfg.seed);
        separable += s.separable;
        jp["separable"] = s.separable;
        jp["joint_dim"] = s.joint_dim;
        json pieces = json::array();
        for (const auto& m : s.pieces) pieces.push_back(m.cols());
        jp["pieces"] = pieces;
        jp["butterflies"] = butterflies(inst, p);
        auto bc = butterfly_connected(inst, p);
        jp["butterfly_connected"] = bc.connected;
        jp["butterfly_components"] = bc.components;
        auto lr = left_right_partition(inst, p);
        jp["left_right"] = lr ? json{lr->first, lr->second} : json(nullptr);
        jp["crowns"] = find_crowns(inst, p);
        parts.push_back(std::move(jp));
    }
    o.report["particles"] = parts;
    auto bb = find_backbone(inst, cfg.budget);
    json path_ids = json::array();
    for (int t : bb.path.terms) path_ids.push_back(inst.terms[t].id);
    o.report["backbone"] = {{"terms", path_ids},
                            {"qubits", bb.qubits},
                            {"closed", bb.path.closed},
                            {"nodes", bb.nodes},
                            {"budget_exhausted", bb.budget_exhausted}};
    o.summary = std::to_string(separable) + " separable particle(s), backbone length " +
                std::to_string(bb.path.length());
    if (bb.budget_exhausted) {
        o.code = kCapExceeded;
        o.summary += " (search budget exhausted)";
    }
    return o;
}

ProveOptions prove_options(const Config& cfg, int group_size) {
    ProveOptions opt;
    opt.oracle = oracle_config(cfg);
    opt.block_cap = cfg.block_cap;
    opt.budget = cfg.budget;
    if (group_size > 0) opt.group_size = group_size;
    return opt;
}

std::string pick_mode(const Instance& inst, const std::string& mode) {
    if (mode == "2local" || mode == "3local") return mode;
    if (mode != "auto") throw InputError("unknown mode " + mode);
    if (inst.max_support() <= 2) return "2local";
    if (inst.max_support() <= 3 && inst.max_dim() <= 2) return "3local";
    throw InputError("no protocol for this instance class (need 2-local, or 3-local on qubits)");
}

int verdict_code(Verdict v) {
    switch (v) {
        case Verdict::witness: return kOk;
        case Verdict::unsat: return kRejected;
        case Verdict::budget: return kCapExceeded;
    }
    return kMalformed;
}

Outcome cmd_prove(const std::string& path, const std::string& mode_in, int group_size, const Config& cfg) {
    Instance inst = load_valid(path, cfg);
    std::string mode = pick_mode(inst, mode_in);
    auto opt = prove_options(cfg, group_size);
    Outcome o;
    Verdict v;
    std::string message;
    json w;
    if (mode == "2local") {
        auto r = prove_2local(inst, opt);
        v = r.verdict, message = r.message, w = witness_to_json(r.witness);
    } else {
        auto r = prove_3local_qubits(inst, opt);
        v = r.verdict, message = r.message, w = witness_to_json(r.witness);
    }
    o.report = {{"verdict", verdict_name(v)}, {"mode", mode}, {"message", message}};
    if (v == Verdict::witness) {
        if (cfg.out.empty())
            o.report["witness"] = w;
        else
            write_text(cfg.out, w.dump(1) + "\n");
    }
    o.code = verdict_code(v);
    o.summary = std::string(verdict_name(v)) + (message.empty() ? "" : ": " + message);
    return o;
}

VerifyOptions verify_options(const Config& cfg) {
    VerifyOptions vo;
    vo.block_cap = cfg.block_cap;
    vo.dense_cap = cfg.dense_cap;
    if (cfg.tol >= 0) vo.tol = cfg.tol;
    return vo;
}

Outcome cmd_verify(const std::string& path, const std::string& witness_path, const Config& cfg) {
    Instance inst = load_valid(path, cfg);
    json jw = read_json(witness_path);
    std::string kind = jw.is_object() ? jw.value("kind", "") : "";
    VerifyResult r;
    if (kind == "clh2")
        r = verify_2local(inst, clh2_witness_from_json(jw), verify_options(cfg));
    else if (kind == "clh32")
        r = verify_3local_qubits(inst, clh32_witness_from_json(jw), verify_options(cfg));
    else
        throw InputError(witness_path + ": unknown witness kind");
    Outcome o;
    o.report = {{"accepted", r.accepted}, {"reason", r.reason}, {"kind", kind}};
    o.code = r.accepted ? kOk : kRejected;
    o.summary = r.accepted ? "accepted" : "rejected: " + r.reason;
    return o;
}

Outcome cmd_oracle(const std::string& path, int topo, const Config& cfg) {
    Instance inst = load_valid(path, cfg);
    auto oc = oracle_config(cfg);
    Outcome o;
    KernelResult kr;
    int64_t D = dim_product(inst.dims);
    if (inst.has_contradiction())
        kr = {0, 0, "trivial"};
    else if (D <= oc.dense_cap)
        kr = kernel_dim_dense(inst, oc.dense_cap);
    else
        kr = kernel_dim_matrix_free(inst, oc.matrix_free_cap, oc.seed, oc.certify_tol);
    o.report = {{"kernel_dim", kr.dim},
                {"route", kr.route},
                {"residual", kr.residual},
                {"frustration_free", kr.dim > 0},
                {"ground_energy", kr.dim > 0 ? 0.0 : ground_energy(inst, oc)}};
    if (kr.residual > 1e-10) o.warnings.push_back("oracle residual " + std::to_string(kr.residual));
    if (topo > 0) {
        auto t = topological_order_check(inst, topo, oc);
        o.report["topological_order"] = {{"ground_dim", t.ground_dim},
                                         {"region_size", t.region_size},
                                         {"observables", t.observables},
                                         {"max_deviation", t.max_deviation},
                                         {"worst_region", t.worst_region}};
    }
    o.code = kr.dim > 0 ? kOk : kRejected;
    o.summary = "kernel dimension " + std::to_string(kr.dim) + " (" + kr.route + ")";
    return o;
}

Outcome cmd_circuit(const std::string& path, const std::string& witness_path, int group_size, const Config& cfg) {
    Instance inst = load_valid(path, cfg);
    CircuitOptions co;
    co.gate_cap = cfg.gate_cap;
    co.seed = cfg.seed;
    Circuit c;
    std::string kind;
    if (!witness_path.empty()) {
        json jw = read_json(witness_path);
        kind = jw.is_object() ? jw.value("kind", "") : "";
        if (kind == "clh2")
            c = emit_circuit(inst, clh2_witness_from_json(jw), co);
        else if (kind == "clh32")
            c = emit_circuit(inst, clh32_witness_from_json(jw), co);
        else
            throw InputError(witness_path + ": unknown witness kind");
    } else {
        std::string mode = pick_mode(inst, "auto");
        auto opt = prove_options(cfg, group_size);
        Verdict v;
        if (mode == "2local") {
            auto r = prove_2local(inst, opt);
            v = r.verdict;
            if (v == Verdict::witness) c = emit_circuit(inst, r.witness, co);
        } else {
            auto r = prove_3local_qubits(inst, opt);
            v = r.verdict;
            if (v == Verdict::witness) c = emit_circuit(inst, r.witness, co);
        }
        if (v != Verdict::witness) {
            Outcome o;
            o.report = {{"verdict", verdict_name(v)}};
            o.code = verdict_code(v);
            o.summary = std::string("no circuit: ") + verdict_name(v);
            return o;
        }
    }
    double tol = cfg.tol >= 0 ? cfg.tol : 1e-8;
    auto chk = verify_circuit(inst, c, tol, cfg.dense_cap, cfg.gate_cap);
    Outcome o;
    o.report = {{"ok", chk.ok},
                {"reason", chk.reason},
                {"layers", chk.layers},
                {"max_gate_dim", chk.max_gate_dim},
                {"residual", chk.residual},
                {"columns", chk.columns},
                {"ground_columns", chk.ground_columns}};
    if (cfg.out.empty())
        o.report["circuit"] = circuit_to_json(c);
    else
        write_text(cfg.out, circuit_to_json(c).dump(1) + "\n");
    if (chk.ok && chk.residual > tol * 1e-2) o.warnings.push_back("circuit residual " + std::to_string(chk.residual));
    o.code = chk.ok ? kOk : kRejected;
    o.summary = chk.ok ? std::to_string(chk.layers) + " layer(s), residual " + std::to_string(chk.residual)
                       : "circuit rejected: " + chk.reason;
    return o;
}

json euler_json(const EulerStats& e) {
    return {{"V", e.V},
            {"E", e.E},
            {"F", e.F},
            {"a", rational_string(e.a)},
            {"b", rational_string(e.b)},
            {"chi", rational_string(e.chi)},
            {"lhs", rational_string(e.lhs)},
            {"rhs", rational_string(e.rhs)},
            {"identity", e.identity_holds() ? "exact" : "fails"}};
}

std::string euler_line(const EulerStats& e) {
    return "a=" + rational_string(e.a) + " b=" + rational_string(e.b) +
           " identity=" + (e.identity_holds() ? "exact" : "fails");
}

std::vector<int> op_faces(const PlanarEmbedding& emb) {
    std::vector<int> f;
    for (const auto& face : emb.faces)
        if (face.op) f.push_back(face.id);
    return f;
}

json trace_json(const TessellationTrace& tr) {
    json steps = json::array();
    for (const auto& s : tr.steps)
        steps.push_back({{"vertex", s.vertex},
                         {"added", s.added},
                         {"boundary_edges", s.boundary_edges},
                         {"faces", s.num_faces}});
    return {{"steps", steps},
            {"failed", tr.failed},
            {"failing_vertex", tr.failing_vertex},
            {"failure", tr.failure},
            {"premise_distance", tr.premise_distance},
            {"max_boundary_edges", tr.max_boundary_edges()}};
}

struct GeomArgs {
    std::string action, path, embedding;
    int face = -1;
    int eta = 5;
    bool until_failure = false;
    bool svg = false;
};

Outcome cmd_geom(const GeomArgs& a, const Config& cfg) {
    json raw;
    Outcome o;
    if (a.action == "euler") {
        raw = read_json(a.path);
        if (raw.is_object() && raw.contains("triangles")) {
            auto tris = raw.at("triangles").get<std::vector<std::array<int, 3>>>();
            auto e = euler_stats(tris, raw.value("closed", false));
            o.report = euler_json(e);
            o.summary = euler_line(e);
            o.code = e.identity_holds() ? kOk : kRejected;
            return o;
        }
    }
    Instance inst = load_valid(a.path, cfg, &raw);
    PlanarEmbedding emb = load_embedding(inst, raw, a.embedding);
    if (a.action == "embedding") {
        auto dual = dual_graph(emb);
        int64_t dual_edges = 0;
        for (const auto& nb : dual) dual_edges += nb.size();
        auto deg = degree_audit(inst);
        o.report = {{"vertices", emb.vertices.size()},
                    {"faces", emb.faces.size()},
                    {"op_faces", op_faces(emb).size()},
                    {"edges", emb.edges().size()},
                    {"dual_edges", dual_edges / 2},
                    {"min_angle_degrees", min_angle_degrees(emb)},
                    {"edge_length_ratio", edge_length_ratio(emb)},
                    {"max_degree", deg.max_degree},
                    {"high_degree", deg.high_degree},
                    {"long_paths", deg.long_paths}};
        if (a.svg) {
            if (cfg.out.empty()) throw InputError("--svg needs --out");
            write_text(cfg.out, embedding_svg(emb));
        } else if (!cfg.out.empty()) {
            write_text(cfg.out, embedding_to_json(emb).dump(1) + "\n");
        }
        o.summary = "embedding ok, max degree " + std::to_string(deg.max_degree);
        return o;
    }
    if (a.action == "tessellate") {
        if (a.face < 0) throw InputError("tessellate needs --face");
        TessellateOptions opt;
        opt.until_failure = a.until_failure;
        auto tr = tessellate(emb, a.face, a.eta, opt);
        o.report = trace_json(tr);
        if (!tr.steps.empty()) {
            std::vector<int> faces;
            for (const auto& s : tr.steps) faces.insert(faces.end(), s.added.begin(), s.added.end());
            o.report["euler"] = euler_json(euler_stats(emb, tessellation_of(emb, faces)));
        }
        o.summary = std::to_string(tr.steps.size()) + " step(s), max a-hat " + std::to_string(tr.max_boundary_edges()) +
                    (tr.failed ? ", failed at vertex " + std::to_string(tr.failing_vertex) : "");
        return o;
    }
    if (a.action == "euler") {
        auto e = euler_stats(emb, tessellation_of(emb, op_faces(emb)));
        o.report = euler_json(e);
        o.summary = euler_line(e);
        o.code = e.identity_holds() ? kOk : kRejected;
        return o;
    }
    if (a.action == "audit") {
        auto h = hole_density_audit(emb, a.eta);
        auto deg = degree_audit(inst);
        o.report = {{"distance", h.distance},
                    {"max_distance", h.max_distance},
                    {"violations", h.violations},
                    {"max_degree", deg.max_degree},
                    {"high_degree", deg.high_degree},
                    {"long_paths", deg.long_paths}};
        o.code = h.violations.empty() ? kOk : kRejected;
        o.summary = "max hole distance " + std::to_string(h.max_distance) + ", " +
                    std::to_string(h.violations.size()) + " violation(s)";
        return o;
    }
    throw InputError("unknown geom action " + a.action);
}

Outcome cmd_gen(const std::string& family, const std::string& params, const Config& cfg) {
    json p = json::object();
    if (!params.empty()) {
        try {
            p = json::parse(params);
        } catch (const json::exception& e) {
            throw InputError(std::string("--params: ") + e.what());
        }
    }
    PlanarEmbedding emb;
    emb.infinite_face = -1;
    Instance inst = generate_family(family, p, cfg.seed, &emb);
    if (inst.dims.empty()) throw CapExceeded("gen: generator found no configuration for this seed");
    json j = instance_to_json(inst);
    if (emb.infinite_face >= 0 && !emb.faces.empty()) j["embedding"] = embedding_to_json(emb);
    Outcome o;
    if (cfg.out.empty()) {
        o.report = j;
    } else {
        write_text(cfg.out, j.dump(1) + "\n");
        o.report = {{"family", family}, {"particles", inst.num_particles()}, {"terms", inst.terms.size()}};
    }
    o.summary = family + ": " + std::to_string(inst.num_particles()) + " particles, " +
                std::to_string(inst.terms.size()) + " terms";
    return o;
}

void add_common(CLI::App* app, Config& cfg) {
    app->add_option("--tol", cfg.tol, "numerical tolerance override");
    app->add_option("--seed", cfg.seed, "random seed");
    app->add_option("--dense-cap", cfg.dense_cap, "largest dimension handled densely")->check(CLI::PositiveNumber);
    app->add_option("--block-cap", cfg.block_cap, "largest represented block")->check(CLI::PositiveNumber);
    app->add_option("--gate-cap", cfg.gate_cap, "largest gate dimension")->check(CLI::PositiveNumber);
    app->add_option("--budget", cfg.budget, "backbone search budget")->check(CLI::PositiveNumber);
    app->add_option("--out", cfg.out, "output path");
    app->add_flag("--strict", cfg.strict, "treat tolerance warnings as failures");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    if (const char* t = std::getenv("CLH_KIT_THREADS")) {
        int n = std::atoi(t);
        cfg.threads = n > 0 ? n : 1;
    }
    Eigen::setNbThreads(cfg.threads);

    CLI::App app{"commuting local Hamiltonian toolkit", "clh-kit"};
    app.require_subcommand(1);
    std::string path, second, mode = "auto", params;
    int particle = -1, group_size = 0, topo = 0;
    bool keep_ids = false;
    GeomArgs geom;

    auto* validate_cmd = app.add_subcommand("validate", "check projector, locality and commutation constraints");
    validate_cmd->add_option("instance", path)->required();
    auto* normalize_cmd = app.add_subcommand("normalize", "drop trivial factors and zero terms");
    normalize_cmd->add_option("instance", path)->required();
    normalize_cmd->add_flag("--keep-ids", keep_ids, "keep particle ids (no compaction)");
    auto* analyze_cmd = app.add_subcommand("analyze", "separability, butterfly and backbone report");
    analyze_cmd->add_option("instance", path)->required();
    analyze_cmd->add_option("--particle", particle, "report one particle only");
    auto* prove_cmd = app.add_subcommand("prove", "build a witness");
    prove_cmd->add_option("instance", path)->required();
    prove_cmd->add_option("--mode", mode, "auto, 2local or 3local");
    prove_cmd->add_option("--group-size", group_size, "backbone group size")->check(CLI::PositiveNumber);
    auto* verify_cmd = app.add_subcommand("verify", "check a witness");
    verify_cmd->add_option("instance", path)->required();
    verify_cmd->add_option("witness", second)->required();
    auto* oracle_cmd = app.add_subcommand("oracle", "common kernel dimension and ground energy");
    oracle_cmd->add_option("instance", path)->required();
    oracle_cmd->add_option("--topo", topo, "topological order check with this region size");
    auto* circuit_cmd = app.add_subcommand("circuit", "emit and check a diagonalizing circuit");
    circuit_cmd->add_option("instance", path)->required();
    circuit_cmd->add_option("witness", second, "witness file; proved on the fly when absent");
    circuit_cmd->add_option("--group-size", group_size, "backbone group size")->check(CLI::PositiveNumber);
    auto* geom_cmd = app.add_subcommand("geom", "planar embedding checks");
    geom_cmd->add_option("action", geom.action, "embedding, tessellate, euler or audit")
        ->required()
        ->check(CLI::IsMember({"embedding", "tessellate", "euler", "audit"}));
    geom_cmd->add_option("input", geom.path)->required();
    geom_cmd->add_option("--embedding", geom.embedding, "embedding file (default: the fixture's own)");
    geom_cmd->add_option("--face", geom.face, "start face for tessellate");
    geom_cmd->add_option("--eta", geom.eta, "tessellation radius / audited distance");
    geom_cmd->add_flag("--until-failure", geom.until_failure, "run tessellate until a step fails");
    geom_cmd->add_flag("--svg", geom.svg, "write an SVG drawing to --out");
    auto* gen_cmd = app.add_subcommand("gen", "generate a fixture");
    gen_cmd->add_option("family", path)->required();
    gen_cmd->add_option("--params", params, "JSON object of generator parameters");

    for (auto* sub : app.get_subcommands({})) add_common(sub, cfg);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? kOk : kMalformed;
    }

    try {
        Outcome o;
        if (validate_cmd->parsed())
            o = cmd_validate(path, cfg);
        else if (normalize_cmd->parsed())
            o = cmd_normalize(path, keep_ids, cfg);
        else if (analyze_cmd->parsed())
            o = cmd_analyze(path, particle, cfg);
        else if (prove_cmd->parsed())
            o = cmd_prove(path, mode, group_size, cfg);
        else if (verify_cmd->parsed())
            o = cmd_verify(path, second, cfg);
        else if (oracle_cmd->parsed())
            o = cmd_oracle(path, topo, cfg);
        else if (circuit_cmd->parsed())
            o = cmd_circuit(path, second, group_size, cfg);
        else if (geom_cmd->parsed())
            o = cmd_geom(geom, cfg);
        else
            o = cmd_gen(path, params, cfg);
        if (!o.warnings.empty()) {
            if (o.report.is_object()) o.report["warnings"] = o.warnings;
            for (const auto& w : o.warnings) err << "warning: " << w << "\n";
            if (cfg.strict && o.code == kOk) o.code = kRejected;
        }
        out << o.report.dump(1) << "\n";
        if (!o.summary.empty()) err << o.summary << "\n";
        return o.code;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kMalformed;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kMalformed;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kCapExceeded;
    }
}

}  // namespace clh::cli
