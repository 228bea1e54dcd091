// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rbgreedy/experiment.hpp"
#include "rbgreedy/mesh.hpp"

namespace {

void print_row(const rbgreedy::RunRow& row) {
    std::printf("%-6s tol=%.1e seed=%llu N=%-3d est_evals=%-12lld wall=%8.0f ms max_h1=%.3e%s\n",
                rbgreedy::to_string(row.strategy).c_str(), row.tol,
                static_cast<unsigned long long>(row.seed), row.n_final,
                static_cast<long long>(row.est_evals), row.wall_ms, row.max_h1_err,
                row.converged ? "" : "  [hit n_max]");
    std::fflush(stdout);
}

int run_command(const std::string& config_path, const std::string& out_override, int threads) {
    rbgreedy::ExperimentConfig cfg = rbgreedy::load_config_json(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (threads >= 0) cfg.threads = threads;
    if (cfg.out_dir.empty())
        throw std::runtime_error("run: no output directory (set out_dir in the config or pass --out)");

    const rbgreedy::ExperimentReport report = rbgreedy::run_experiment(cfg, print_row);
    rbgreedy::emit_reports(report, cfg.out_dir);
    std::cout << '\n' << rbgreedy::format_range_table(report);
    std::cout << "\nwrote " << cfg.out_dir << "/{summary.csv,convergence.csv,meta.json}\n";
    return 0;
}

struct DemoOptions {
    std::string strategy = "cg";
    double tol = 1e-3;
    int n_train = 2000;
    std::uint64_t seed = 0;
    std::uint64_t train_seed = 90001;
    int n_per_side = 21;
    int n_test = 200;
    int k_damp = 20;
    int c_m = 20;
    int m_sample = 0;
    int n_tr_small = 0;
    int n_max = 200;
    int threads = 0;
    std::string out_dir;
};

int demo_command(const DemoOptions& opt) {
    const rbgreedy::Mesh mesh = rbgreedy::build_unit_square_mesh(opt.n_per_side);
    const rbgreedy::AffineModel model = rbgreedy::assemble_thermal_block(mesh);
    rbgreedy::Rng rng(opt.train_seed);
    const rbgreedy::TrainingSet xi = rbgreedy::sample_training_set(model.box, opt.n_train, rng);

    rbgreedy::GreedyConfig gc;
    gc.strategy = rbgreedy::strategy_from_string(opt.strategy);
    gc.tol = opt.tol;
    gc.n_train = opt.n_train;
    gc.seed = opt.seed;
    gc.k_damp = opt.k_damp;
    gc.c_m = opt.c_m;
    gc.m_sample = opt.m_sample > 0 ? opt.m_sample : std::max(1, opt.n_train / 20);
    gc.n_tr_small = opt.n_tr_small > 0 ? opt.n_tr_small : std::max(1, opt.n_train / 20);
    gc.n_max = opt.n_max;
    gc.threads = opt.threads;

    std::printf("mesh %dx%d (%d free dof), train %d points, %s at tol %.1e, seed %llu\n",
                opt.n_per_side, opt.n_per_side, model.n_dof, opt.n_train,
                opt.strategy.c_str(), opt.tol, static_cast<unsigned long long>(opt.seed));
    const rbgreedy::GreedyResult res = rbgreedy::run_strategy(model, xi, gc);

    std::printf("%6s %8s %10s %14s %14s\n", "N", "scan", "max_est", "cum_evals", "wall_ms");
    for (const rbgreedy::IterationRecord& it : res.trace.iterations)
        std::printf("%6d %8d %10.3e %14lld %14.1f\n", it.n_basis, it.scan_size, it.max_delta,
                    static_cast<long long>(it.cum_est_evals), it.wall_ms);

    std::printf("\nfinal: N=%d converged=%s final_scan_max=%.3e est_evals=%lld truth_solves=%lld "
                "wall=%.1f ms\n",
                res.trace.n_final, res.trace.converged ? "yes" : "no", res.trace.final_scan_max,
                static_cast<long long>(res.trace.est_evals),
                static_cast<long long>(res.trace.truth_solves), res.trace.wall_ms);
    if (opt.n_test > 0) {
        const rbgreedy::TestErrors te =
            rbgreedy::evaluate_test_error(res.space, model, opt.n_test, 90002);
        std::printf("test errors over %d fresh points: max_h1=%.3e mean_h1=%.3e\n", opt.n_test,
                    te.max_h1, te.mean_h1);
    }

    if (!opt.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(opt.out_dir);
        std::ofstream out(fs::path(opt.out_dir) / "trace.csv");
        if (!out) throw std::runtime_error("demo: cannot write trace.csv");
        out << "n,scan_size,max_delta,cum_est_evals,wall_ms\n";
        for (const rbgreedy::IterationRecord& it : res.trace.iterations) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%lld,%.17g\n", it.n_basis, it.scan_size,
                          it.max_delta, static_cast<long long>(it.cum_est_evals), it.wall_ms);
            out << buf;
        }
        std::cout << "wrote " << opt.out_dir << "/trace.csv\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reduced basis greedy training toolkit"};
    app.set_version_flag("--version", rbgreedy::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    int run_threads = -1;
    CLI::App* run = app.add_subcommand("run", "run the full benchmark grid from a JSON config");
    run->add_option("--config", config_path, "JSON config path")->required();
    run->add_option("--out", out_override, "output directory (overrides out_dir in the config)");
    run->add_option("--threads", run_threads, "worker threads (0 = hardware concurrency)");

    DemoOptions demo_opt;
    CLI::App* demo = app.add_subcommand("demo", "run one training strategy and print its trace");
    demo->add_option("--strategy", demo_opt.strategy,
                     "one of cg, tsd, ae, sts, h-tsd, h-ae (default cg)");
    demo->add_option("--tol", demo_opt.tol, "target max error estimate (default 1e-3)");
    demo->add_option("--n-train", demo_opt.n_train, "training set size (default 2000)");
    demo->add_option("--seed", demo_opt.seed, "strategy seed (default 0)");
    demo->add_option("--train-seed", demo_opt.train_seed, "training sample seed (default 90001)");
    demo->add_option("--mesh", demo_opt.n_per_side, "cells per side, multiple of 3 (default 21)");
    demo->add_option("--n-test", demo_opt.n_test, "fresh test points for the error report (default 200)");
    demo->add_option("--k-damp", demo_opt.k_damp, "surrogate damping factor (default 20)");
    demo->add_option("--c-m", demo_opt.c_m, "surrogate size factor (default 20)");
    demo->add_option("--m-sample", demo_opt.m_sample, "working-set size (default n/20)");
    demo->add_option("--n-tr-small", demo_opt.n_tr_small, "first-subset size (default n/20)");
    demo->add_option("--n-max", demo_opt.n_max, "basis size cap (default 200)");
    demo->add_option("--threads", demo_opt.threads, "worker threads (0 = hardware concurrency)");
    demo->add_option("--out", demo_opt.out_dir, "directory for trace.csv (optional)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, out_override, run_threads);
        if (demo->parsed()) return demo_command(demo_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
