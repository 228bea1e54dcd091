// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "rbgreedy/model.hpp"
#include "rbgreedy/training_set.hpp"

using namespace rbgreedy;

namespace {

Eigen::VectorXd random_mu(const ParameterBox& box, Rng& rng) {
    Eigen::VectorXd mu(box.dim());
    for (int i = 0; i < box.dim(); ++i) mu[i] = rng.uniform(box.lo[i], box.hi[i]);
    return mu;
}

// Conductivity field induced by mu: block-constant over the 3x3 layout.
oracles::CoeffFn block_coeff(const Eigen::VectorXd& mu) {
    return [mu](double x, double y) {
        const int bi = static_cast<int>(x * 3.0);
        const int bj = static_cast<int>(y * 3.0);
        return mu[bj * 3 + bi];
    };
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("random number stream is deterministic and in range") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == b.unit());
    }
    Rng c(7);
    int seen[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 2000; ++i) {
        const int k = c.index(5);
        REQUIRE(k >= 0);
        REQUIRE(k < 5);
        ++seen[k];
    }
    for (const int s : seen) CHECK(s > 300); // roughly uniform
    CHECK_THROWS_AS(c.index(0), std::invalid_argument);
    CHECK_THROWS_AS(c.index(-3), std::invalid_argument);
    const double lo = 0.1, hi = 10.0;
    for (int i = 0; i < 100; ++i) {
        const double v = c.uniform(lo, hi);
        CHECK(v >= lo);
        CHECK(v < hi);
    }
}

TEST_CASE("affine assembly matches an independent dense assembly") {
    const Mesh mesh = build_unit_square_mesh(6);
    const AffineModel model = assemble_thermal_block(mesh);
    REQUIRE(model.qa() == 9);
    REQUIRE(model.qf() == 1);
    REQUIRE(model.n_dof == mesh.n_free);

    Rng rng(11);
    for (int trial = 0; trial < 3; ++trial) {
        const Eigen::VectorXd mu = random_mu(model.box, rng);
        const Eigen::MatrixXd ref =
            oracles::free_block(mesh, oracles::stiffness_full(mesh, block_coeff(mu)));
        const Eigen::MatrixXd got = oracles::dense_a(model, mu);
        CHECK((got - ref).norm() <= 1e-13 * ref.norm());
    }

    const Eigen::MatrixXd mass_ref = oracles::free_block(mesh, oracles::mass_full(mesh));
    CHECK((Eigen::MatrixXd(model.mass) - mass_ref).norm() <= 1e-13 * mass_ref.norm());

    const Eigen::VectorXd load_ref = oracles::free_vec(mesh, oracles::base_load_full(mesh));
    CHECK((model.f_ops[0] - load_ref).norm() <= 1e-13 * load_ref.norm());
    CHECK(model.f_ops[0].sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((model.output_vec - model.f_ops[0]).norm() == 0.0);

    // The reference inner product is the operator at unit conductivity.
    Eigen::MatrixXd x_sum = Eigen::MatrixXd::Zero(model.n_dof, model.n_dof);
    for (const auto& a : model.a_ops) x_sum += Eigen::MatrixXd(a);
    CHECK((Eigen::MatrixXd(model.x_gram) - x_sum).norm() == 0.0);
}

TEST_CASE("uniform conductivity has the linear-profile solution") {
    const Mesh mesh = build_unit_square_mesh(9);
    const AffineModel model = assemble_thermal_block(mesh);

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(9);
    const TruthSolution sol = truth_solve(model, ones);
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        if (mesh.node_dof[i] < 0) continue;
        CHECK(sol.coefficients[mesh.node_dof[i]] ==
              doctest::Approx(1.0 - mesh.nodes(1, i)).epsilon(1e-11));
    }
    CHECK(output_functional(model, sol.coefficients) == doctest::Approx(1.0).epsilon(1e-11));

    const TruthSolution half = truth_solve(model, 2.0 * ones);
    CHECK(output_functional(model, half.coefficients) == doctest::Approx(0.5).epsilon(1e-11));
    CHECK((half.coefficients - 0.5 * sol.coefficients).norm() <= 1e-11);
}

TEST_CASE("truth solve satisfies the assembled system and compliance") {
    const Mesh mesh = build_unit_square_mesh(9);
    const AffineModel model = assemble_thermal_block(mesh);
    Rng rng(21);
    for (int trial = 0; trial < 3; ++trial) {
        const Eigen::VectorXd mu = random_mu(model.box, rng);
        const TruthSolution sol = truth_solve(model, mu);
        const Eigen::VectorXd f = oracles::dense_f(model, mu);
        const Eigen::VectorXd res = f - oracles::dense_a(model, mu) * sol.coefficients;
        CHECK(res.norm() <= 1e-10 * f.norm());
        // Output through the load functional equals the energy (compliance).
        const double s = output_functional(model, sol.coefficients);
        const double energy =
            sol.coefficients.dot(oracles::dense_a(model, mu) * sol.coefficients);
        CHECK(s == doctest::Approx(energy).epsilon(1e-10));
    }
    CHECK_THROWS_AS(truth_solve(model, Eigen::VectorXd::Constant(9, 0.01)),
                    std::invalid_argument);
    CHECK_THROWS_AS(truth_solve(model, Eigen::VectorXd::Ones(4)), std::invalid_argument);
}

TEST_CASE("norms and the cached inner-product solve agree with dense references") {
    const Mesh mesh = build_unit_square_mesh(6);
    const AffineModel model = assemble_thermal_block(mesh);
    Rng rng(31);
    Eigen::VectorXd v(model.n_dof), w(model.n_dof);
    for (int i = 0; i < model.n_dof; ++i) {
        v[i] = rng.uniform(-1, 1);
        w[i] = rng.uniform(-1, 1);
    }
    const Eigen::MatrixXd x = Eigen::MatrixXd(model.x_gram);
    const Eigen::MatrixXd m = Eigen::MatrixXd(model.mass);
    CHECK(x_inner(model, v, w) == doctest::Approx(v.dot(x * w)).epsilon(1e-12));
    CHECK(x_norm(model, v) == doctest::Approx(std::sqrt(v.dot(x * v))).epsilon(1e-12));
    const double h1sq = v.dot(x * v) + v.dot(m * v);
    CHECK(h1_norm(model, v) == doctest::Approx(std::sqrt(h1sq)).epsilon(1e-12));

    const Eigen::VectorXd z = riesz_solve(model, v);
    CHECK((x * z - v).norm() <= 1e-10 * v.norm());
}

TEST_CASE("coercivity lower bound is positive and below the exact constant") {
    const Mesh mesh = build_unit_square_mesh(6);
    const AffineModel model = assemble_thermal_block(mesh);
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::VectorXd mu = random_mu(model.box, rng);
        const double lb = coercivity_lower_bound(model, mu);
        CHECK(lb == doctest::Approx(mu.minCoeff()).epsilon(1e-15));
        const double exact = oracles::min_generalized_eig(model, mu);
        CHECK(lb > 0.0);
        CHECK(lb <= exact * (1.0 + 1e-10));
    }
    // Unit conductivity: the operator equals the inner product, constant = 1.
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(9);
    CHECK(coercivity_lower_bound(model, ones) == 1.0);
    CHECK(oracles::min_generalized_eig(model, ones) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(coercivity_lower_bound(model, Eigen::VectorXd::Zero(9)),
                    std::invalid_argument);
}

TEST_CASE("parameter sampling is uniform over the box and reproducible") {
    const Mesh mesh = build_unit_square_mesh(3);
    const AffineModel model = assemble_thermal_block(mesh);
    Rng rng(90001);
    const TrainingSet xi = sample_training_set(model.box, 2000, rng);
    REQUIRE(xi.size() == 2000);
    REQUIRE(xi.dim() == 9);
    for (int i = 0; i < xi.size(); ++i) {
        CHECK(xi.id(i) == i);
        CHECK(model.box.contains(xi.point(i)));
    }
    const double mean = xi.points().mean();
    CHECK(mean == doctest::Approx(0.5 * (0.1 + 10.0)).epsilon(0.03));

    Rng rng2(90001);
    const TrainingSet xi2 = sample_training_set(model.box, 2000, rng2);
    CHECK((xi.points() - xi2.points()).norm() == 0.0);

    Rng rng3(90002);
    const TrainingSet xi3 = sample_training_set(model.box, 2000, rng3);
    CHECK((xi.points() - xi3.points()).norm() > 0.0);
}

} // TEST_SUITE
