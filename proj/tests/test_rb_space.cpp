// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "rbgreedy/rb_space.hpp"
#include "rbgreedy/training_set.hpp"

using namespace rbgreedy;

namespace {

struct Fixture {
    Mesh mesh = build_unit_square_mesh(9);
    AffineModel model = assemble_thermal_block(mesh);
    std::vector<Eigen::VectorXd> mus;

    Fixture() {
        Rng rng(77);
        for (int k = 0; k < 8; ++k) {
            Eigen::VectorXd mu(9);
            for (int i = 0; i < 9; ++i) mu[i] = rng.uniform(0.1, 10.0);
            mus.push_back(mu);
        }
    }

    RBSpace grown(int n) const {
        RBSpace space = make_rb_space(model);
        for (int k = 0; k < n; ++k) REQUIRE(augment_basis(space, truth_solve(model, mus[k])));
        return space;
    }
};

} // namespace

TEST_SUITE("rb_space") {

TEST_CASE("empty space already certifies the full solution norm") {
    const Fixture fx;
    const RBSpace space = make_rb_space(fx.model);
    CHECK(space.n() == 0);
    const oracles::DenseRiesz riesz(fx.model);
    const RBSolution zero{fx.mus[0], Eigen::VectorXd::Zero(0)};
    const ErrorEstimate est = error_estimate(space, fx.mus[0], zero);
    const double ref = riesz.dual_norm(fx.model, fx.mus[0], Eigen::VectorXd::Zero(fx.model.n_dof));
    CHECK(est.residual_dual_norm == doctest::Approx(ref).epsilon(1e-10));
    CHECK(est.alpha_lb == doctest::Approx(fx.mus[0].minCoeff()).epsilon(1e-15));
    CHECK(est.value == doctest::Approx(ref / fx.mus[0].minCoeff()).epsilon(1e-10));
    CHECK_THROWS_AS(rb_solve(space, fx.mus[0]), std::invalid_argument);
    CHECK(lift(space, zero).norm() == 0.0);
}

TEST_CASE("basis columns stay orthonormal in the problem inner product") {
    const Fixture fx;
    const RBSpace space = fx.grown(8);
    const Eigen::MatrixXd x = Eigen::MatrixXd(fx.model.x_gram);
    const Eigen::MatrixXd gram = space.basis.transpose() * x * space.basis;
    CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((space.basis_x - x * space.basis).norm() <= 1e-12 * space.basis_x.norm());
}

TEST_CASE("re-adding a selected snapshot is rejected and changes nothing") {
    const Fixture fx;
    RBSpace space = fx.grown(4);
    const Eigen::MatrixXd basis_before = space.basis;
    CHECK_FALSE(augment_basis(space, truth_solve(fx.model, fx.mus[2])));
    CHECK(space.n() == 4);
    CHECK((space.basis - basis_before).norm() == 0.0);
}

TEST_CASE("reduced solve agrees with a dense Galerkin projection") {
    const Fixture fx;
    const RBSpace space = fx.grown(5);
    Rng rng(5);
    for (int trial = 0; trial < 4; ++trial) {
        Eigen::VectorXd mu(9);
        for (int i = 0; i < 9; ++i) mu[i] = rng.uniform(0.1, 10.0);
        const Eigen::MatrixXd an =
            space.basis.transpose() * oracles::dense_a(fx.model, mu) * space.basis;
        const Eigen::VectorXd fn = space.basis.transpose() * oracles::dense_f(fx.model, mu);
        const Eigen::VectorXd ref = an.llt().solve(fn);
        const RBSolution sol = rb_solve(space, mu);
        CHECK((sol.coefficients - ref).norm() <= 1e-12 * (ref.norm() + 1.0));

        // Lifting preserves the coefficient norm (orthonormal basis).
        const Eigen::VectorXd u = lift(space, sol);
        CHECK(x_norm(fx.model, u) ==
              doctest::Approx(sol.coefficients.norm()).epsilon(1e-10));
        CHECK(rb_output(space.online, sol) ==
              doctest::Approx(fx.model.output_vec.dot(u)).epsilon(1e-10));
    }
}

TEST_CASE("snapshot parameters are reproduced to round-off") {
    const Fixture fx;
    const RBSpace space = fx.grown(5);
    const RBSolution zero{fx.mus[0], Eigen::VectorXd::Zero(0)};
    for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd& mu = fx.mus[k];
        const RBSolution sol = rb_solve(space, mu);
        const ErrorEstimate est = error_estimate(space, mu, sol);
        const ErrorEstimate base =
            error_estimate(make_rb_space(fx.model), mu, RBSolution{mu, Eigen::VectorXd::Zero(0)});
        // The expanded form cancels to ~sqrt(machine eps) relative round-off.
        CHECK(est.value <= 1e-7 * base.value);
        const TrueError te = true_error(space, mu, sol);
        const double unorm = x_norm(fx.model, truth_solve(fx.model, mu).coefficients);
        CHECK(te.x_err <= 1e-9 * unorm);
    }
}

TEST_CASE("expanded estimator equals the direct residual oracle") {
    const Fixture fx;
    const oracles::DenseRiesz riesz(fx.model);
    Rng rng(13);
    for (const int n : {1, 4, 8}) {
        const RBSpace space = fx.grown(n);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd mu(9);
            for (int i = 0; i < 9; ++i) mu[i] = rng.uniform(0.1, 10.0);
            const RBSolution sol = rb_solve(space, mu);
            const double ref = riesz.dual_norm(fx.model, mu, lift(space, sol));
            const ErrorEstimate est = error_estimate(space, mu, sol);
            CHECK(est.residual_dual_norm == doctest::Approx(ref).epsilon(1e-8));
            CHECK(est.value == doctest::Approx(ref / mu.minCoeff()).epsilon(1e-8));
        }
    }
}

TEST_CASE("estimate bounds the exact error on random parameters") {
    const Fixture fx;
    const RBSpace space = fx.grown(6);
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd mu(9);
        for (int i = 0; i < 9; ++i) mu[i] = rng.uniform(0.1, 10.0);
        const RBSolution sol = rb_solve(space, mu);
        const ErrorEstimate est = error_estimate(space, mu, sol);
        const TrueError te = true_error(space, mu, sol);
        CHECK(te.x_err <= est.value * (1.0 + 1e-8));
        CHECK(te.h1_err >= te.x_err * (1.0 - 1e-12)); // H1 adds the L2 part
    }
}

TEST_CASE("incrementally extended Gramians match their definitions") {
    const Fixture fx;
    const RBSpace space = fx.grown(6);
    const OnlineSystem& os = space.online;
    const int qa = os.qa;

    // gram_ll(k, l) is the X inner product of the stored representers.
    const Eigen::MatrixXd x = Eigen::MatrixXd(fx.model.x_gram);
    const Eigen::MatrixXd ref_ll = space.riesz_a.transpose() * x * space.riesz_a;
    CHECK((os.gram_ll - ref_ll).cwiseAbs().maxCoeff() <= 1e-12 * ref_ll.cwiseAbs().maxCoeff());

    const Eigen::MatrixXd ref_cl = space.riesz_f.transpose() * x * space.riesz_a;
    CHECK((os.gram_cl - ref_cl).cwiseAbs().maxCoeff() <= 1e-12 * ref_cl.cwiseAbs().maxCoeff());

    const Eigen::MatrixXd ref_cc = space.riesz_f.transpose() * x * space.riesz_f;
    CHECK((os.gram_cc - ref_cc).cwiseAbs().maxCoeff() <= 1e-12 * ref_cc.cwiseAbs().maxCoeff());

    // Representers solve X c = A_q xi_i at the flat index i*qa + q.
    for (int i = 0; i < os.n; ++i)
        for (int q = 0; q < qa; ++q) {
            const Eigen::VectorXd rhs = fx.model.a_ops[q] * space.basis.col(i);
            const Eigen::VectorXd lhs = x * space.riesz_a.col(i * qa + q);
            CHECK((lhs - rhs).norm() <= 1e-10 * (rhs.norm() + 1e-30));
        }

    // Reduced operators are the projected sparse operators.
    for (int q = 0; q < qa; ++q) {
        const Eigen::MatrixXd ref =
            space.basis.transpose() * fx.model.a_ops[q] * space.basis;
        CHECK((os.reduced_a[q] - ref).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("truncation keeps the leading blocks and reproduces the smaller space") {
    const Fixture fx;
    const RBSpace full = fx.grown(6);
    const RBSpace small = fx.grown(3);
    const OnlineSystem cut = truncate(full.online, 3);
    CHECK(cut.n == 3);
    Rng rng(19);
    Eigen::VectorXd mu(9);
    for (int i = 0; i < 9; ++i) mu[i] = rng.uniform(0.1, 10.0);

    const RBSolution a = rb_solve(cut, mu);
    const RBSolution b = rb_solve(small.online, mu);
    CHECK((a.coefficients - b.coefficients).norm() <= 1e-12);
    const ErrorEstimate ea = error_estimate(cut, mu, a);
    const ErrorEstimate eb = error_estimate(small.online, mu, b);
    CHECK(ea.value == doctest::Approx(eb.value).epsilon(1e-12));

    CHECK_THROWS_AS(truncate(full.online, 7), std::invalid_argument);
    const OnlineSystem zero = truncate(full.online, 0);
    const ErrorEstimate e0 = error_estimate(zero, mu, RBSolution{mu, Eigen::VectorXd::Zero(0)});
    CHECK(e0.value > 0.0);
}

TEST_CASE("online data carries no truth-sized state") {
    const Fixture fx;
    const RBSpace space = fx.grown(4);
    const OnlineSystem os = space.online; // plain copy, no truth arrays behind it
    const int qa = os.qa;
    CHECK(os.n == 4);
    for (const auto& m : os.reduced_a) {
        CHECK(m.rows() == 4);
        CHECK(m.cols() == 4);
    }
    CHECK(os.gram_ll.rows() == 4 * qa);
    CHECK(os.gram_ll.cols() == 4 * qa);
    CHECK(os.gram_cl.cols() == 4 * qa);
    Rng rng(23);
    Eigen::VectorXd mu(9);
    for (int i = 0; i < 9; ++i) mu[i] = rng.uniform(0.1, 10.0);
    const RBSolution sol = rb_solve(os, mu);
    const ErrorEstimate est = error_estimate(os, mu, sol);
    const ErrorEstimate ref = error_estimate(space, mu, rb_solve(space, mu));
    CHECK(est.value == ref.value);
}

} // TEST_SUITE
