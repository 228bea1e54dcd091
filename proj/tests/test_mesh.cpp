// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <set>

#include "rbgreedy/mesh.hpp"

using namespace rbgreedy;

TEST_SUITE("mesh") {

TEST_CASE("counts at the smallest admissible resolution") {
    const Mesh m = build_unit_square_mesh(3);
    CHECK(m.n_nodes() == 16);
    CHECK(m.n_triangles() == 18);
    CHECK(static_cast<int>(m.base_edges.size()) == 3);
    CHECK(m.n_free == 12); // 16 nodes minus the 4 on the top boundary
}

TEST_CASE("counts at the default resolution") {
    const Mesh m = build_unit_square_mesh(21);
    CHECK(m.n_nodes() == 484);
    CHECK(m.n_triangles() == 882);
    CHECK(m.n_free == 462);
}

TEST_CASE("invalid resolutions are rejected") {
    CHECK_THROWS_AS(build_unit_square_mesh(4), std::invalid_argument);
    CHECK_THROWS_AS(build_unit_square_mesh(0), std::invalid_argument);
    CHECK_THROWS_AS(build_unit_square_mesh(-3), std::invalid_argument);
}

TEST_CASE("triangles are counter-clockwise and tile the square") {
    const Mesh m = build_unit_square_mesh(9);
    double area = 0;
    for (const auto& tri : m.triangles) {
        const Eigen::Vector2d a = m.nodes.col(tri[0]);
        const Eigen::Vector2d b = m.nodes.col(tri[1]);
        const Eigen::Vector2d c = m.nodes.col(tri[2]);
        const double twice = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
        CHECK(twice > 0);
        area += 0.5 * twice;
    }
    CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("block labels follow the 3x3 layout from the bottom-left") {
    const Mesh m = build_unit_square_mesh(9);
    std::array<int, 9> per_block{};
    for (int t = 0; t < m.n_triangles(); ++t) {
        const int b = m.triangle_block[t];
        REQUIRE(b >= 0);
        REQUIRE(b < 9);
        ++per_block[b];
        const auto& tri = m.triangles[t];
        const Eigen::Vector2d c =
            (m.nodes.col(tri[0]) + m.nodes.col(tri[1]) + m.nodes.col(tri[2])) / 3.0;
        const int bi = static_cast<int>(c.x() * 3.0);
        const int bj = static_cast<int>(c.y() * 3.0);
        CHECK(b == bj * 3 + bi);
    }
    for (const int count : per_block) CHECK(count == 2 * 3 * 3); // (9/3)^2 cells * 2
}

TEST_CASE("bottom boundary edges cover y = 0 with total length 1") {
    const Mesh m = build_unit_square_mesh(6);
    double len = 0;
    for (const auto& e : m.base_edges) {
        CHECK(m.nodes(1, e[0]) == 0.0);
        CHECK(m.nodes(1, e[1]) == 0.0);
        len += (m.nodes.col(e[1]) - m.nodes.col(e[0])).norm();
    }
    CHECK(len == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(static_cast<int>(m.base_edges.size()) == 6);
}

TEST_CASE("top boundary carries the essential condition, the rest is free") {
    const Mesh m = build_unit_square_mesh(6);
    std::set<int> seen;
    for (int i = 0; i < m.n_nodes(); ++i) {
        if (m.nodes(1, i) == 1.0) {
            CHECK(m.node_dof[i] == -1);
        } else {
            REQUIRE(m.node_dof[i] >= 0);
            CHECK(m.node_dof[i] < m.n_free);
            CHECK(seen.insert(m.node_dof[i]).second);
        }
    }
    CHECK(static_cast<int>(seen.size()) == m.n_free);
}

} // TEST_SUITE
