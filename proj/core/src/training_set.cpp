// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include "rbgreedy/training_set.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rbgreedy {

TrainingSet::TrainingSet(Eigen::MatrixXd points, std::vector<int> ids)
    : points_(std::move(points)), ids_(std::move(ids)) {
    if (static_cast<int>(ids_.size()) != points_.cols())
        throw std::invalid_argument("TrainingSet: ids/points size mismatch");
    active_.assign(ids_.size(), 1);
}

int TrainingSet::active_count() const {
    return static_cast<int>(std::count(active_.begin(), active_.end(), std::uint8_t{1}));
}

TrainingSet sample_training_set(const ParameterBox& box, int n, Rng& rng) {
    if (n <= 0) throw std::invalid_argument("sample_training_set: n must be positive");
    const int p = box.dim();
    Eigen::MatrixXd pts(p, n);
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < p; ++d)
            pts(d, i) = rng.uniform(box.lo[d], box.hi[d]);
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return TrainingSet(std::move(pts), std::move(ids));
}

} // namespace rbgreedy
