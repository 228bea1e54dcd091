// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

namespace rbgreedy {

// Uniform P1 triangulation of the unit square split into a 3x3 grid of
// coefficient blocks. Homogeneous Dirichlet nodes (top edge) carry no degree
// of freedom; every other node maps to one.
struct Mesh {
    int n_per_side = 0;
    Eigen::Matrix2Xd nodes;                     // column = vertex coordinates
    std::vector<std::array<int, 3>> triangles;  // vertex ids, CCW
    std::vector<int> triangle_block;            // 0..8, row-major from bottom-left
    std::vector<std::array<int, 2>> base_edges; // bottom-boundary edges (flux side)
    std::vector<int> node_dof;                  // -1 on the Dirichlet boundary
    int n_free = 0;

    int n_nodes() const { return static_cast<int>(nodes.cols()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
};

// n_per_side must be a positive multiple of 3 so element edges align with the
// block boundaries.
Mesh build_unit_square_mesh(int n_per_side);

} // namespace rbgreedy
