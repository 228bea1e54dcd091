// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include "rbgreedy/mesh.hpp"

#include <stdexcept>

namespace rbgreedy {

Mesh build_unit_square_mesh(int n_per_side) {
    if (n_per_side <= 0 || n_per_side % 3 != 0)
        throw std::invalid_argument("build_unit_square_mesh: n_per_side must be a positive multiple of 3");

    const int n = n_per_side;
    const int nn = n + 1;
    const double h = 1.0 / n;

    Mesh mesh;
    mesh.n_per_side = n;
    mesh.nodes.resize(2, nn * nn);
    for (int j = 0; j < nn; ++j)
        for (int i = 0; i < nn; ++i)
            mesh.nodes.col(j * nn + i) << i * h, j * h;

    auto vid = [nn](int i, int j) { return j * nn + i; };

    mesh.triangles.reserve(2 * n * n);
    mesh.triangle_block.reserve(2 * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            mesh.triangles.push_back({a, b, d});
            mesh.triangles.push_back({b, c, d});
            // Blocks are n/3 cells wide; the cell position decides the block.
            const int bi = i / (n / 3);
            const int bj = j / (n / 3);
            const int block = bj * 3 + bi;
            mesh.triangle_block.push_back(block);
            mesh.triangle_block.push_back(block);
        }
    }

    mesh.base_edges.reserve(n);
    for (int i = 0; i < n; ++i)
        mesh.base_edges.push_back({vid(i, 0), vid(i + 1, 0)});

    // Top edge is the Dirichlet boundary; everything else is free.
    mesh.node_dof.assign(nn * nn, -1);
    int dof = 0;
    for (int j = 0; j < nn; ++j)
        for (int i = 0; i < nn; ++i)
            if (j != n) mesh.node_dof[vid(i, j)] = dof++;
    mesh.n_free = dof;

    return mesh;
}

} // namespace rbgreedy
