// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <vector>

#include "rbgreedy/mesh.hpp"
#include "rbgreedy/rng.hpp"

namespace rbgreedy {

using ThetaFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Axis-aligned parameter domain.
struct ParameterBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Eigen::VectorXd& mu) const;
};

struct XSolver; // cached factorization of the X inner-product matrix

// Affinely decomposed full-order model: a(w, v; mu) = sum_q theta_a_q(mu) a_q(w, v),
// f(v; mu) = sum_q theta_f_q(mu) f_q(v), all operators restricted to free DoFs.
struct AffineModel {
    int n_dof = 0;
    std::vector<Eigen::SparseMatrix<double>> a_ops;
    std::vector<Eigen::VectorXd> f_ops;
    Eigen::VectorXd output_vec;            // discrete output functional
    Eigen::SparseMatrix<double> x_gram;    // X inner-product matrix (= sum of a_ops)
    Eigen::SparseMatrix<double> mass;      // L2 mass matrix, for the H1 norm
    ParameterBox box;
    ThetaFn theta_a;
    ThetaFn theta_f;
    std::shared_ptr<const XSolver> x_solver;

    int qa() const { return static_cast<int>(a_ops.size()); }
    int qf() const { return static_cast<int>(f_ops.size()); }
};

struct TruthSolution {
    Eigen::VectorXd mu;
    Eigen::VectorXd coefficients; // free-DoF nodal values
};

// Nine-block heat-conduction model on the given mesh: conductivity mu_q on
// block q, zero Dirichlet data on top, unit inflow on the bottom boundary,
// output = integral of the trace over the bottom boundary.
AffineModel assemble_thermal_block(const Mesh& mesh);

// Direct sparse solve of the assembled system at mu. Throws if mu is outside
// the parameter box or the factorization fails.
TruthSolution truth_solve(const AffineModel& model, const Eigen::VectorXd& mu);

double output_functional(const AffineModel& model, const Eigen::VectorXd& coefficients);

double x_inner(const AffineModel& model, const Eigen::VectorXd& v, const Eigen::VectorXd& w);
double x_norm(const AffineModel& model, const Eigen::VectorXd& v);
double h1_norm(const AffineModel& model, const Eigen::VectorXd& v);

// Solves X z = rhs with the cached factorization.
Eigen::VectorXd riesz_solve(const AffineModel& model, const Eigen::VectorXd& rhs);

// min_q theta_a_q(mu); a coercivity lower bound because X equals the sum of
// the a_q operators. Throws if any coefficient is nonpositive.
double coercivity_lower_bound(const AffineModel& model, const Eigen::VectorXd& mu);

} // namespace rbgreedy
