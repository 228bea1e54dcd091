// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <vector>

#include "rbgreedy/model.hpp"

namespace rbgreedy {

// Everything the online stage may touch. No member scales with the truth
// dimension: solves and error estimates built from this stay cheap no matter
// how fine the underlying mesh is.
//
// Riesz-Gramian blocks follow the flat index k = i*qa + q for basis vector i
// and operator q, so growing the basis appends rows/columns instead of
// interleaving them.
struct OnlineSystem {
    int n = 0;  // current basis size
    int qa = 0;
    int qf = 0;
    std::vector<Eigen::MatrixXd> reduced_a; // qa matrices, n x n
    std::vector<Eigen::VectorXd> reduced_f; // qf vectors, length n
    Eigen::VectorXd reduced_output;         // length n
    Eigen::MatrixXd gram_cc;                // qf x qf
    Eigen::MatrixXd gram_cl;                // qf x (qa*n)
    Eigen::MatrixXd gram_ll;                // (qa*n) x (qa*n)
    ThetaFn theta_a;
    ThetaFn theta_f;
};

struct RBSolution {
    Eigen::VectorXd mu;
    Eigen::VectorXd coefficients; // length = basis size at solve time
};

struct ErrorEstimate {
    double value = 0;              // dual norm / coercivity lower bound
    double residual_dual_norm = 0;
    double alpha_lb = 0;
    double clamped = 0;            // magnitude of any negative round-off zeroed out
};

// Reduced space: the online block plus the truth-level data needed to grow it
// and to lift solutions back to the full space.
struct RBSpace {
    const AffineModel* model = nullptr;
    OnlineSystem online;
    Eigen::MatrixXd basis;       // n_dof x n, X-orthonormal columns
    Eigen::MatrixXd basis_x;     // X * basis, cached for Gram-Schmidt
    Eigen::MatrixXd riesz_f;     // n_dof x qf, representers of the load terms
    Eigen::MatrixXd riesz_a;     // n_dof x (qa*n), representers of A_q * basis_i
    std::vector<Eigen::VectorXd> snapshot_mu;

    int n() const { return online.n; }
};

// Empty space over the model; precomputes the load representers so the N = 0
// estimate (dual norm of f over alpha) is available immediately.
RBSpace make_rb_space(const AffineModel& model);

// X-orthonormalizes the snapshot against the basis (modified Gram-Schmidt,
// two passes) and extends every reduced block incrementally. Returns false
// and leaves the space untouched when the snapshot is numerically dependent
// (post-projection norm below 1e-10 of the original).
bool augment_basis(RBSpace& space, const TruthSolution& snapshot);

// Galerkin solve in the reduced space. Requires n >= 1.
RBSolution rb_solve(const OnlineSystem& online, const Eigen::VectorXd& mu);
inline RBSolution rb_solve(const RBSpace& space, const Eigen::VectorXd& mu) {
    return rb_solve(space.online, mu);
}

// Residual dual norm over the coercivity lower bound; certified upper bound
// on the X-norm error of the reduced solution. Works at n = 0 with an empty
// coefficient vector (bounds the full solution norm).
ErrorEstimate error_estimate(const OnlineSystem& online, const Eigen::VectorXd& mu,
                             const RBSolution& solution);
inline ErrorEstimate error_estimate(const RBSpace& space, const Eigen::VectorXd& mu,
                                    const RBSolution& solution) {
    return error_estimate(space.online, mu, solution);
}

double coercivity_lower_bound(const OnlineSystem& online, const Eigen::VectorXd& mu);

// Truth-space representation of a reduced solution.
Eigen::VectorXd lift(const RBSpace& space, const RBSolution& solution);

double rb_output(const OnlineSystem& online, const RBSolution& solution);

struct TrueError {
    double x_err = 0;
    double h1_err = 0;
};

// Exact error of the reduced solution against a fresh truth solve.
TrueError true_error(const RBSpace& space, const Eigen::VectorXd& mu,
                     const RBSolution& solution);

// Leading m-dimensional subsystem (copies the relevant blocks).
OnlineSystem truncate(const OnlineSystem& online, int m);

} // namespace rbgreedy
