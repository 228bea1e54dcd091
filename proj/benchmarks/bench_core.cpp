// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "rbgreedy/experiment.hpp"
#include "rbgreedy/mesh.hpp"
#include "rbgreedy/sweep.hpp"

namespace {

using namespace rbgreedy;

// Shared fixture: one model, one training set, one space trained out to the
// basis-size cap so every benchmark can truncate to its N.
struct Shared {
    AffineModel model;
    TrainingSet xi;
    RBSpace space;
    Eigen::VectorXd mu;

    Shared() {
        const Mesh mesh = build_unit_square_mesh(21);
        model = assemble_thermal_block(mesh);
        Rng rng(90001);
        xi = sample_training_set(model.box, 2000, rng);
        GreedyConfig cfg;
        cfg.strategy = Strategy::ClassicalGreedy;
        cfg.tol = 1e-12; // unreachable; the cap decides the final size
        cfg.n_train = xi.size();
        cfg.n_max = 60;
        cfg.threads = 1;
        GreedyResult res = classical_greedy(model, xi, cfg);
        space = std::move(res.space);
        Rng mu_rng(7);
        mu = Eigen::VectorXd::NullaryExpr(model.box.dim(), [&](Eigen::Index i) {
            return mu_rng.uniform(model.box.lo[i], model.box.hi[i]);
        });
    }
};

const Shared& shared() {
    static const Shared s;
    return s;
}

void BM_truth_solve(benchmark::State& state) {
    const Shared& s = shared();
    for (auto _ : state) {
        const TruthSolution sol = truth_solve(s.model, s.mu);
        benchmark::DoNotOptimize(sol.coefficients.data());
    }
}
BENCHMARK(BM_truth_solve)->Unit(benchmark::kMillisecond);

void BM_rb_solve(benchmark::State& state) {
    const Shared& s = shared();
    const OnlineSystem online = truncate(s.space.online, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const RBSolution sol = rb_solve(online, s.mu);
        benchmark::DoNotOptimize(sol.coefficients.data());
    }
}
BENCHMARK(BM_rb_solve)->Arg(10)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_error_estimate(benchmark::State& state) {
    const Shared& s = shared();
    const OnlineSystem online = truncate(s.space.online, static_cast<int>(state.range(0)));
    const RBSolution sol = rb_solve(online, s.mu);
    for (auto _ : state) {
        const ErrorEstimate est = error_estimate(online, s.mu, sol);
        benchmark::DoNotOptimize(est.value);
    }
}
BENCHMARK(BM_error_estimate)->Arg(10)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_estimator_sweep(benchmark::State& state) {
    const Shared& s = shared();
    const OnlineSystem online = truncate(s.space.online, static_cast<int>(state.range(0)));
    std::vector<int> ids(s.xi.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<double> deltas(ids.size());
    for (auto _ : state) {
        estimator_sweep(online, s.xi.points(), ids, deltas, 1);
        benchmark::DoNotOptimize(deltas.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ids.size()));
}
BENCHMARK(BM_estimator_sweep)->Arg(10)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
