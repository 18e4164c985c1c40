// Microbenchmarks for the updating kernels on synthetic sparse instances.
// Run: ./svdup_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <cmath>

#include "svdup/svdup.hpp"

using namespace svdup;

namespace {

SparseMatrix synthetic_sparse(index_t m, index_t n, double density, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Triplet> triples;
    triples.reserve(static_cast<std::size_t>(static_cast<double>(m * n) * density * 1.1));
    for (index_t i = 0; i < m; ++i) {
        // Row scaling gives a decaying spectrum, closer to term-document data
        // than flat iid noise.
        const double row_scale = 1.0 + 8.0 * std::exp(-3.0 * static_cast<double>(i) / static_cast<double>(m));
        for (index_t j = 0; j < n; ++j)
            if (rng.uniform() < density) triples.push_back({i, j, row_scale * rng.gaussian()});
    }
    return csr_from_coo(triples, m, n);
}

struct Instance {
    SparseMatrix a;
    UpdateProblem problem;
};

Instance make_instance(index_t m, index_t n, index_t k, double density) {
    Instance inst;
    inst.a = synthetic_sparse(m, n, density, 12345);
    auto [base, update] = split_rows(inst.a, (m + 1) / 2);
    inst.problem.base_svd = topk_svd(make_operator(base), k, 1e-10, 1);
    inst.problem.base = std::move(base);
    inst.problem.update = std::move(update);
    inst.problem.direction = UpdateDirection::Rows;
    return inst;
}

}  // namespace

static void BM_Matvec(benchmark::State& state) {
    const index_t n = state.range(0);
    const SparseMatrix a = synthetic_sparse(n, n / 2, 0.02, 7);
    std::vector<double> x(static_cast<std::size_t>(a.ncols), 1.0);
    std::vector<double> y(static_cast<std::size_t>(a.nrows));
    for (auto _ : state) {
        matvec(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * a.nnz());
}
BENCHMARK(BM_Matvec)->Arg(1000)->Arg(4000)->Arg(16000);

static void BM_GklBidiagonalize(benchmark::State& state) {
    const index_t steps = state.range(0);
    const SparseMatrix a = synthetic_sparse(4000, 1000, 0.01, 11);
    const LinearOperator op = make_operator(a);
    for (auto _ : state) {
        BidiagonalFactors f = gkl_bidiagonalize(op, steps, 3);
        benchmark::DoNotOptimize(f.alpha.data());
    }
}
BENCHMARK(BM_GklBidiagonalize)->Arg(20)->Arg(60);

static void BM_RrsvdBasic(benchmark::State& state) {
    const index_t k = state.range(0);
    static Instance inst = make_instance(3000, 800, 32, 0.01);
    const ProjectionBasis z = build_z_basic(inst.problem.base_svd, inst.problem.update.nrows);
    RrSettings settings;
    settings.tol = 1e-6;
    settings.max_steps = 128;  // the synthetic spectrum is clustered
    settings.seed = 5;
    for (auto _ : state) {
        auto [svd, ritz] = rr_svd_rows(inst.problem, z, k, settings);
        benchmark::DoNotOptimize(svd.s.data());
    }
}
BENCHMARK(BM_RrsvdBasic)->Arg(8)->Arg(16)->Arg(32);

static void BM_RrsvdEnhanced(benchmark::State& state) {
    const index_t k = state.range(0);
    static Instance inst = make_instance(3000, 800, 32, 0.01);
    SequenceConfig cfg;
    cfg.k = k;
    cfg.seed = 5;
    cfg.lanczos_tol = 1e-6;
    cfg.lanczos_cap = 128;
    cfg.method = UpdateMethod::RrsvdEnhanced;
    for (auto _ : state) {
        auto [svd, report] = run_update(inst.problem, cfg, false);
        benchmark::DoNotOptimize(svd.s.data());
    }
}
BENCHMARK(BM_RrsvdEnhanced)->Arg(8)->Arg(16);

static void BM_ZhaSimon(benchmark::State& state) {
    // Far smaller instance: the inner dense SVD is cubic in the update size,
    // which is exactly the cost profile the projection updaters avoid.
    const index_t k = state.range(0);
    static Instance inst = make_instance(600, 300, 32, 0.02);
    SequenceConfig cfg;
    cfg.k = k;
    cfg.seed = 5;
    cfg.method = UpdateMethod::ZhaSimon;
    for (auto _ : state) {
        auto [svd, report] = run_update(inst.problem, cfg, false);
        benchmark::DoNotOptimize(svd.s.data());
    }
}
BENCHMARK(BM_ZhaSimon)->Arg(8)->Arg(16);

static void BM_DeflatedBlockCg(benchmark::State& state) {
    const index_t cols = state.range(0);
    static Instance inst = make_instance(3000, 800, 32, 0.01);
    const SparseMatrix& b = inst.problem.base;
    const double sigma1 = estimate_sigma1(inst.problem, 12, 3);
    const double lambda = 1.01 * sigma1 * sigma1;
    Rng rng(17);
    DenseMatrix rhs(b.nrows, cols);
    for (double& v : rhs.data) v = rng.gaussian();
    project_out(inst.problem.base_svd.u, rhs);
    CgSettings settings;
    for (auto _ : state) {
        CgResult r = deflated_block_cg(b, inst.problem.base_svd.u, lambda, rhs, settings);
        benchmark::DoNotOptimize(r.x.data.data());
    }
}
BENCHMARK(BM_DeflatedBlockCg)->Arg(8)->Arg(32);

BENCHMARK_MAIN();
