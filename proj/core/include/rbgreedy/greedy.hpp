// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rbgreedy/rb_space.hpp"
#include "rbgreedy/training_set.hpp"

namespace rbgreedy {

enum class Strategy {
    ClassicalGreedy,        // exhaustive scan each iteration
    TrainingSetDecomposition, // geometric partition, classical greedy per subset
    AdaptiveEnriching,      // fixed-size working set, truncate-and-replenish
    SurrogateTrainingSet,   // full scans alternating with damped surrogate sweeps
    HybridTsd,              // partition + surrogate sweeps per subset
    HybridAe                // working set + surrogate sweeps per round
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct GreedyConfig {
    Strategy strategy = Strategy::ClassicalGreedy;
    double tol = 1e-3;
    int n_train = 0;        // must match the training set size
    std::uint64_t seed = 0;
    int n_tr_small = 0;     // first-subset size (tsd, h-tsd)
    int m_sample = 0;       // working-set size (ae, h-ae)
    int c_m = 20;           // surrogate size factor (sts, hybrids)
    int k_damp = 20;        // damping factor (sts, hybrids)
    int n_max = 200;        // hard cap on the basis size
    int threads = 0;        // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument on bad settings
};

// One record per scan (or per scan-free initial pick): basis size when the
// estimates were computed, the chosen id (-1 when the scan only certified),
// the max estimate seen, and cumulative work counters.
struct IterationRecord {
    int n_basis = 0;
    int chosen_id = -1;
    double max_delta = 0;
    int scan_size = 0;
    std::int64_t cum_est_evals = 0;
    double wall_ms = 0;
};

// One record per outer round of the surrogate-sweep strategies.
struct OuterRecord {
    int ell = 0;
    double e_ell = 0;
    int sur_size = 0;
};

struct GreedyTrace {
    std::vector<IterationRecord> iterations;
    std::vector<OuterRecord> outer;
    int n_final = 0;
    bool converged = false;
    double final_scan_max = 0;    // max estimate of the last certifying scan
    std::int64_t est_evals = 0;
    std::int64_t truth_solves = 0;
    std::int64_t clamped = 0;
    int redundant_skipped = 0;
    double wall_ms = 0;
};

struct GreedyResult {
    RBSpace space;
    GreedyTrace trace;
};

// Geometric partition of the set: sizes n_tr_small, 2*n_tr_small, ... with the
// last subset completing the whole set. Membership is a seeded shuffle; ids
// are preserved. A ratio below 2 yields the full set unshuffled.
std::vector<TrainingSet> tsd_partition(const TrainingSet& xi, int n_tr_small, Rng& rng);

// Surrogate set selection: ids whose estimates sit nearest to m_level
// equi-spaced levels between tol and the current max estimate (lowest id on
// ties, duplicates merged). Empty when every estimate is below tol.
std::vector<int> smm_select(const std::vector<std::pair<int, double>>& estimates,
                            double tol, int m_level);

// ceil(n_train / m_sample): scan batches needed to cover the set once.
int ae_safety_budget(int n_train, int m_sample);

GreedyResult classical_greedy(const AffineModel& model, const TrainingSet& xi,
                              const GreedyConfig& cfg);
GreedyResult tsd_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg);
GreedyResult ae_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg);
GreedyResult sts_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg);
GreedyResult h_tsd_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg);
GreedyResult h_ae_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg);

// Dispatch on cfg.strategy.
GreedyResult run_strategy(const AffineModel& model, const TrainingSet& xi,
                          const GreedyConfig& cfg);

} // namespace rbgreedy
