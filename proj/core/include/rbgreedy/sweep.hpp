// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <span>

#include "rbgreedy/rb_space.hpp"

namespace rbgreedy {

struct SweepStats {
    std::int64_t evaluated = 0;
    std::int64_t clamped = 0; // estimates whose squared dual norm went negative past round-off
};

// Evaluates the error estimate at the selected columns of `points`, writing
// deltas[j] for ids[j]. Points are processed in fixed-size chunks whose
// reduced solves and Gramian contractions run as small dense batches; the
// chunk partition does not depend on `threads`, so results are identical for
// any thread count.
SweepStats estimator_sweep(const OnlineSystem& online, const Eigen::MatrixXd& points,
                           std::span<const int> ids, std::span<double> deltas, int threads);

// Max estimate over the selected columns (reporting helper).
double sweep_max(const OnlineSystem& online, const Eigen::MatrixXd& points,
                 std::span<const int> ids, int threads);

// Chunked parallel loop over [0, n): fn(begin, end) on disjoint ranges.
void parallel_chunks(int n, int chunk, int threads, const std::function<void(int, int)>& fn);

} // namespace rbgreedy
