#include "stokes/assembly.hpp"
#include "stokes/solver.hpp"
#include "stokes/validation.hpp"

#include <benchmark/benchmark.h>

using namespace stokes;

namespace {

void BM_AssembleViscous(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TriMesh mesh = build_rect_mesh(2.0, 1.0, 2 * n, n);
  const DofMap dm = build_taylor_hood(mesh, partition_boundary(mesh, {3, 4}));
  for (auto _ : state) {
    SparseMat a = assemble_viscous(mesh, dm, 1.0);
    benchmark::DoNotOptimize(a);
  }
  state.SetItemsProcessed(state.iterations() * mesh.n_triangles());
}

void BM_SolveChannel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChannelParams params;
  const TriMesh mesh = build_rect_mesh(params.L, params.H, 2 * n, n);
  const BoundaryPartition part = partition_boundary(mesh, {3, 4});
  const TractionField g = [&](const Vec2&, const Vec2& normal, int tag) {
    const double p = tag == 1 ? params.p_in : params.p_out;
    return Vec2(-p * normal.x(), -p * normal.y());
  };
  for (auto _ : state) {
    Solution sol = solve({mesh, part, params.mu, nullptr, g, nullptr});
    benchmark::DoNotOptimize(sol.u);
  }
}

void BM_BoundaryQuadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TriMesh mesh = build_rect_mesh(2.0, 1.0, 2 * n, n);
  for (auto _ : state) {
    auto pts = boundary_quadrature(mesh, mesh.boundary_tag_set(), 3);
    benchmark::DoNotOptimize(pts);
  }
}

}  // namespace

BENCHMARK(BM_AssembleViscous)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_SolveChannel)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundaryQuadrature)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
