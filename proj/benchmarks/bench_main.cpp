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


#include <benchmark/benchmark.h>

#include "clh/algebra.hpp"
#include "clh/circuit.hpp"
#include "clh/instances.hpp"
#include "clh/oracle.hpp"
#include "clh/qutrit_geom.hpp"
#include "clh/witness.hpp"

using namespace clh;

static void BM_kernel_dense_toric(benchmark::State& state) {
    Instance inst = gen_toric(2).instance;
    for (auto _ : state) benchmark::DoNotOptimize(kernel_dim_dense(inst, 1 << 12).dim);
}
BENCHMARK(BM_kernel_dense_toric)->Unit(benchmark::kMillisecond);

static void BM_kernel_matrix_free_toric(benchmark::State& state) {
    Instance inst = gen_toric(2).instance;
    for (auto _ : state) benchmark::DoNotOptimize(kernel_dim_matrix_free(inst, 1 << 20, 7).dim);
}
BENCHMARK(BM_kernel_matrix_free_toric)->Unit(benchmark::kMillisecond);

static void BM_probe_chain(benchmark::State& state) {
    ChainConfig ch;
    ch.L = static_cast<int>(state.range(0));
    Instance inst = gen_chain(ch);
    for (auto _ : state) benchmark::DoNotOptimize(probe_null_state(inst));
}
BENCHMARK(BM_probe_chain)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_is_separable_star(benchmark::State& state) {
    Instance inst = gen_two_local(star_config(static_cast<int>(state.range(0)), 1));
    for (auto _ : state) benchmark::DoNotOptimize(is_separable(inst, 0).separable);
}
BENCHMARK(BM_is_separable_star)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_prove_verify_chain(benchmark::State& state) {
    ChainConfig ch;
    ch.L = static_cast<int>(state.range(0));
    Instance inst = gen_chain(ch);
    for (auto _ : state) {
        auto r = prove_3local_qubits(inst);
        benchmark::DoNotOptimize(verify_3local_qubits(inst, r.witness).accepted);
    }
}
BENCHMARK(BM_prove_verify_chain)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_circuit_star(benchmark::State& state) {
    Instance inst = gen_two_local(star_config(4, 1));
    auto w = prove_2local(inst).witness;
    for (auto _ : state) {
        Circuit c = emit_circuit(inst, w);
        benchmark::DoNotOptimize(verify_circuit(inst, c).ok);
    }
}
BENCHMARK(BM_circuit_star)->Unit(benchmark::kMillisecond);

static void BM_euler_polygons(benchmark::State& state) {
    uint64_t seed = 1;
    for (auto _ : state) {
        auto tris = random_triangulated_polygon(static_cast<int>(state.range(0)), seed++);
        benchmark::DoNotOptimize(euler_stats(tris).identity_holds());
    }
}
BENCHMARK(BM_euler_polygons)->Arg(20)->Arg(200);

static void BM_tessellate_icosahedron(benchmark::State& state) {
    auto fx = gen_polyhedron("icosahedron", 1);
    TessellateOptions opt;
    opt.check_premise = false;
    opt.until_failure = true;
    int w = fx.embedding.faces[1].id;
    for (auto _ : state) benchmark::DoNotOptimize(tessellate(fx.embedding, w, 5, opt).steps.size());
}
BENCHMARK(BM_tessellate_icosahedron);

BENCHMARK_MAIN();
