// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include "rbgreedy/model.hpp"

#include <Eigen/SparseCholesky>

#include <stdexcept>
#include <vector>

namespace rbgreedy {

struct XSolver {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

bool ParameterBox::contains(const Eigen::VectorXd& mu) const {
    if (mu.size() != lo.size()) return false;
    return (mu.array() >= lo.array()).all() && (mu.array() <= hi.array()).all();
}

namespace {

// P1 stiffness on one triangle: K_ij = (b_i b_j + c_i c_j) / (4A).
void element_stiffness(const Eigen::Matrix2Xd& nodes, const std::array<int, 3>& tri,
                       Eigen::Matrix3d& ke, double& area) {
    const Eigen::Vector2d p0 = nodes.col(tri[0]);
    const Eigen::Vector2d p1 = nodes.col(tri[1]);
    const Eigen::Vector2d p2 = nodes.col(tri[2]);
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    area = 0.5 * std::abs(det);
    Eigen::Vector3d b, c;
    b << p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y();
    c << p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x();
    ke = (b * b.transpose() + c * c.transpose()) / (4.0 * area);
}

} // namespace

AffineModel assemble_thermal_block(const Mesh& mesh) {
    constexpr int kBlocks = 9;
    AffineModel model;
    model.n_dof = mesh.n_free;

    std::vector<std::vector<Eigen::Triplet<double>>> a_trip(kBlocks);
    std::vector<Eigen::Triplet<double>> m_trip;

    Eigen::Matrix3d ke;
    Eigen::Matrix3d me_unit;
    me_unit << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    double area = 0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        element_stiffness(mesh.nodes, tri, ke, area);
        const Eigen::Matrix3d me = (area / 12.0) * me_unit;
        const int block = mesh.triangle_block[t];
        for (int r = 0; r < 3; ++r) {
            const int dr = mesh.node_dof[tri[r]];
            if (dr < 0) continue;
            for (int s = 0; s < 3; ++s) {
                const int ds = mesh.node_dof[tri[s]];
                if (ds < 0) continue;
                a_trip[block].emplace_back(dr, ds, ke(r, s));
                m_trip.emplace_back(dr, ds, me(r, s));
            }
        }
    }

    model.a_ops.resize(kBlocks);
    for (int q = 0; q < kBlocks; ++q) {
        model.a_ops[q].resize(mesh.n_free, mesh.n_free);
        model.a_ops[q].setFromTriplets(a_trip[q].begin(), a_trip[q].end());
        model.a_ops[q].makeCompressed();
    }
    model.mass.resize(mesh.n_free, mesh.n_free);
    model.mass.setFromTriplets(m_trip.begin(), m_trip.end());
    model.mass.makeCompressed();

    model.x_gram = model.a_ops[0];
    for (int q = 1; q < kBlocks; ++q) model.x_gram += model.a_ops[q];
    model.x_gram.makeCompressed();

    // Unit inflow along the bottom boundary: edge-wise trapezoid quadrature of
    // the traces, exact for P1. The output functional is the same integral.
    Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.n_free);
    for (const auto& edge : mesh.base_edges) {
        const double len = (mesh.nodes.col(edge[0]) - mesh.nodes.col(edge[1])).norm();
        for (const int v : edge) {
            const int d = mesh.node_dof[v];
            if (d >= 0) load[d] += 0.5 * len;
        }
    }
    model.f_ops = {load};
    model.output_vec = load;

    model.box.lo = Eigen::VectorXd::Constant(kBlocks, 0.1);
    model.box.hi = Eigen::VectorXd::Constant(kBlocks, 10.0);
    model.theta_a = [](const Eigen::VectorXd& mu) { return mu; };
    model.theta_f = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Ones(1); };

    auto solver = std::make_shared<XSolver>();
    solver->ldlt.compute(model.x_gram);
    if (solver->ldlt.info() != Eigen::Success)
        throw std::runtime_error("assemble_thermal_block: X factorization failed");
    model.x_solver = std::move(solver);

    return model;
}

TruthSolution truth_solve(const AffineModel& model, const Eigen::VectorXd& mu) {
    if (!model.box.contains(mu))
        throw std::invalid_argument("truth_solve: parameter outside the domain");
    const Eigen::VectorXd ta = model.theta_a(mu);
    Eigen::SparseMatrix<double> a = ta[0] * model.a_ops[0];
    for (int q = 1; q < model.qa(); ++q) a += ta[q] * model.a_ops[q];
    const Eigen::VectorXd tf = model.theta_f(mu);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(model.n_dof);
    for (int q = 0; q < model.qf(); ++q) rhs += tf[q] * model.f_ops[q];

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("truth_solve: factorization failed");
    TruthSolution sol;
    sol.mu = mu;
    sol.coefficients = ldlt.solve(rhs);
    return sol;
}

double output_functional(const AffineModel& model, const Eigen::VectorXd& coefficients) {
    return model.output_vec.dot(coefficients);
}

double x_inner(const AffineModel& model, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    return v.dot(model.x_gram * w);
}

double x_norm(const AffineModel& model, const Eigen::VectorXd& v) {
    return std::sqrt(std::max(0.0, x_inner(model, v, v)));
}

double h1_norm(const AffineModel& model, const Eigen::VectorXd& v) {
    const double seminorm2 = x_inner(model, v, v);
    const double l2norm2 = v.dot(model.mass * v);
    return std::sqrt(std::max(0.0, seminorm2 + l2norm2));
}

Eigen::VectorXd riesz_solve(const AffineModel& model, const Eigen::VectorXd& rhs) {
    return model.x_solver->ldlt.solve(rhs);
}

double coercivity_lower_bound(const AffineModel& model, const Eigen::VectorXd& mu) {
    const double alpha = model.theta_a(mu).minCoeff();
    if (alpha <= 0)
        throw std::invalid_argument("coercivity_lower_bound: nonpositive coefficient");
    return alpha;
}

} // namespace rbgreedy
