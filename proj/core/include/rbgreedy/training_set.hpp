// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <vector>

#include "rbgreedy/model.hpp"
#include "rbgreedy/rng.hpp"

namespace rbgreedy {

// Finite sample of the parameter domain. Points carry stable integer ids so
// subsets keep their identity relative to the parent set; the active mask
// only ever flips on -> off.
class TrainingSet {
public:
    TrainingSet() = default;
    TrainingSet(Eigen::MatrixXd points, std::vector<int> ids);

    int size() const { return static_cast<int>(points_.cols()); }
    int dim() const { return static_cast<int>(points_.rows()); }
    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::MatrixXd::ConstColXpr point(int i) const { return points_.col(i); }
    int id(int i) const { return ids_[i]; }
    const std::vector<int>& ids() const { return ids_; }

    bool active(int i) const { return active_[i] != 0; }
    void deactivate(int i) { active_[i] = 0; }
    int active_count() const;

private:
    Eigen::MatrixXd points_; // dim x size, column per point
    std::vector<int> ids_;
    std::vector<std::uint8_t> active_;
};

// n i.i.d. uniform draws from the box; ids 0..n-1. Coordinates are drawn
// point-major so the stream is reproducible from the seed alone.
TrainingSet sample_training_set(const ParameterBox& box, int n, Rng& rng);

} // namespace rbgreedy
