// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rbgreedy/greedy.hpp"

namespace rbgreedy {

inline constexpr const char* kVersion = "0.1.0";

struct TuningConfig {
    int k_damp = 20;
    int c_m = 20;
    int m_sample = 0;   // 0 = n_train / 20 (at least 1)
    int n_tr_small = 0; // 0 = n_train / 20 (at least 1)
};

struct ExperimentConfig {
    int n_per_side = 21;
    int n_train = 20000;
    std::uint64_t train_seed = 90001; // one shared training set per experiment
    int n_test = 1000;
    std::uint64_t test_seed = 90002;  // test sample drawn from a disjoint stream
    std::vector<double> tol_list{1e-3};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    std::vector<Strategy> strategies{Strategy::ClassicalGreedy,     Strategy::TrainingSetDecomposition,
                                     Strategy::AdaptiveEnriching,   Strategy::SurrogateTrainingSet,
                                     Strategy::HybridTsd,           Strategy::HybridAe};
    TuningConfig tuning;
    std::string out_dir;
    int threads = 0;
    int n_max = 200;

    void validate() const;
    int effective_m_sample() const;
    int effective_n_tr_small() const;
};

// Parses the JSON config (mesh.n_per_side, train.n, test.n, tol_list, seeds,
// strategies, tuning.{k_damp,c_m,m_sample,n_tr_small}, out_dir; optional
// train.seed, test.seed, threads, n_max). Throws std::runtime_error with a
// readable message on malformed input.
ExperimentConfig load_config_json(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

struct RunRow {
    Strategy strategy = Strategy::ClassicalGreedy;
    double tol = 0;
    std::uint64_t seed = 0;
    int k_damp = 0;
    int c_m = 0;
    int m_sample = 0;
    int n_tr_small = 0;
    int n_final = 0;
    double wall_ms = 0;
    std::int64_t est_evals = 0;
    std::int64_t truth_solves = 0;
    double max_h1_err = 0;
    double mean_h1_err = 0;
    double exit_max_delta = 0; // post-hoc max estimate over the full training set
    bool converged = true;     // in-memory flag; not part of the CSV schema
};

struct ConvergenceRow {
    Strategy strategy = Strategy::ClassicalGreedy;
    std::uint64_t seed = 0;
    int n = 0;
    double max_delta = 0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RunRow> rows;
    // Scan-by-scan maxima from each (strategy, seed)'s run at the smallest
    // tolerance in the grid (the longest decay curve).
    std::vector<ConvergenceRow> convergence;
};

struct TestErrors {
    double max_h1 = 0;
    double mean_h1 = 0;
};

// Fresh uniform test sample; exact H1 errors of the reduced solution against
// truth solves. Works for an empty space (errors of the zero surrogate).
TestErrors evaluate_test_error(const RBSpace& space, const AffineModel& model,
                               int n_test, std::uint64_t seed);

// Full strategy x tolerance x seed grid over one shared training set.
// Classical greedy is deterministic apart from its first pick, so it runs
// once (first seed) per tolerance; every other strategy runs all seeds.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::function<void(const RunRow&)>& on_row = {});

// Writes summary.csv, convergence.csv, and meta.json into out_dir.
void emit_reports(const ExperimentReport& report, const std::string& out_dir);

// Per-(strategy, tolerance) [min, max] ranges of basis size, estimator
// evaluations, wall time relative to classical greedy, and max test error.
std::string format_range_table(const ExperimentReport& report);

inline constexpr const char* kSummaryHeader =
    "strategy,tol,seed,k_damp,c_m,m_sample,n_tr_small,n_final,wall_ms,"
    "est_evals,truth_solves,max_h1_err,mean_h1_err,exit_max_delta";
inline constexpr const char* kConvergenceHeader = "strategy,seed,n,max_delta";

} // namespace rbgreedy
