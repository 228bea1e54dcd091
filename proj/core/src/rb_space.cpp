// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include "rbgreedy/rb_space.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace rbgreedy {

RBSpace make_rb_space(const AffineModel& model) {
    RBSpace space;
    space.model = &model;

    OnlineSystem& os = space.online;
    os.n = 0;
    os.qa = model.qa();
    os.qf = model.qf();
    os.reduced_a.assign(os.qa, Eigen::MatrixXd(0, 0));
    os.reduced_f.assign(os.qf, Eigen::VectorXd(0));
    os.reduced_output.resize(0);
    os.gram_cl.resize(os.qf, 0);
    os.gram_ll.resize(0, 0);
    os.theta_a = model.theta_a;
    os.theta_f = model.theta_f;

    space.basis.resize(model.n_dof, 0);
    space.basis_x.resize(model.n_dof, 0);
    space.riesz_a.resize(model.n_dof, 0);

    space.riesz_f.resize(model.n_dof, os.qf);
    for (int p = 0; p < os.qf; ++p)
        space.riesz_f.col(p) = riesz_solve(model, model.f_ops[p]);
    os.gram_cc.resize(os.qf, os.qf);
    for (int p = 0; p < os.qf; ++p)
        for (int q = 0; q < os.qf; ++q)
            os.gram_cc(p, q) = space.riesz_f.col(p).dot(model.f_ops[q]);

    return space;
}

bool augment_basis(RBSpace& space, const TruthSolution& snapshot) {
    const AffineModel& model = *space.model;
    if (snapshot.coefficients.size() != model.n_dof)
        throw std::invalid_argument("augment_basis: snapshot dimension mismatch");

    OnlineSystem& os = space.online;
    const int n = os.n;
    const int qa = os.qa;
    const int qf = os.qf;

    Eigen::VectorXd v = snapshot.coefficients;
    const double nrm0 = x_norm(model, v);
    if (!(nrm0 > 0)) return false;
    for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < n; ++j)
            v -= space.basis_x.col(j).dot(v) * space.basis.col(j);
    const double nrm = x_norm(model, v);
    if (nrm < 1e-10 * nrm0) return false;
    const Eigen::VectorXd xi = v / nrm;

    Eigen::MatrixXd t(model.n_dof, qa);
    for (int q = 0; q < qa; ++q) t.col(q) = model.a_ops[q] * xi;

    space.basis.conservativeResize(Eigen::NoChange, n + 1);
    space.basis.col(n) = xi;
    space.basis_x.conservativeResize(Eigen::NoChange, n + 1);
    space.basis_x.col(n) = t.rowwise().sum(); // X = sum of the a_ops
    space.snapshot_mu.push_back(snapshot.mu);

    for (int q = 0; q < qa; ++q) {
        os.reduced_a[q].conservativeResize(n + 1, n + 1);
        const Eigen::VectorXd col = space.basis.transpose() * t.col(q);
        os.reduced_a[q].col(n) = col;
        os.reduced_a[q].row(n) = col.transpose();
    }
    for (int p = 0; p < qf; ++p) {
        os.reduced_f[p].conservativeResize(n + 1);
        os.reduced_f[p][n] = model.f_ops[p].dot(xi);
    }
    os.reduced_output.conservativeResize(n + 1);
    os.reduced_output[n] = model.output_vec.dot(xi);

    space.riesz_a.conservativeResize(Eigen::NoChange, (n + 1) * qa);
    for (int q = 0; q < qa; ++q)
        space.riesz_a.col(n * qa + q) = riesz_solve(model, t.col(q));

    // (C_p, L_new_q)_X and (L_k, L_new_q)_X reduce to dots with t because
    // X * L_new_q = t_q up to solver round-off.
    os.gram_cl.conservativeResize(Eigen::NoChange, (n + 1) * qa);
    for (int p = 0; p < qf; ++p)
        for (int q = 0; q < qa; ++q)
            os.gram_cl(p, n * qa + q) = space.riesz_f.col(p).dot(t.col(q));

    os.gram_ll.conservativeResize((n + 1) * qa, (n + 1) * qa);
    const Eigen::MatrixXd cross = space.riesz_a.transpose() * t; // ((n+1)qa) x qa
    os.gram_ll.block(0, n * qa, (n + 1) * qa, qa) = cross;
    os.gram_ll.block(n * qa, 0, qa, n * qa) = cross.topRows(n * qa).transpose();

    os.n = n + 1;
    return true;
}

RBSolution rb_solve(const OnlineSystem& os, const Eigen::VectorXd& mu) {
    if (os.n < 1) throw std::invalid_argument("rb_solve: empty basis");
    const Eigen::VectorXd ta = os.theta_a(mu);
    const Eigen::VectorXd tf = os.theta_f(mu);
    Eigen::MatrixXd a = ta[0] * os.reduced_a[0];
    for (int q = 1; q < os.qa; ++q) a.noalias() += ta[q] * os.reduced_a[q];
    Eigen::VectorXd f = tf[0] * os.reduced_f[0];
    for (int p = 1; p < os.qf; ++p) f.noalias() += tf[p] * os.reduced_f[p];

    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("rb_solve: reduced system not positive definite");
    RBSolution sol;
    sol.mu = mu;
    sol.coefficients = llt.solve(f);
    return sol;
}

double coercivity_lower_bound(const OnlineSystem& os, const Eigen::VectorXd& mu) {
    const double alpha = os.theta_a(mu).minCoeff();
    if (alpha <= 0)
        throw std::invalid_argument("coercivity_lower_bound: nonpositive coefficient");
    return alpha;
}

ErrorEstimate error_estimate(const OnlineSystem& os, const Eigen::VectorXd& mu,
                             const RBSolution& sol) {
    const int n = static_cast<int>(sol.coefficients.size());
    if (n != os.n) throw std::logic_error("error_estimate: solution size does not match the basis");
    const Eigen::VectorXd ta = os.theta_a(mu);
    const Eigen::VectorXd tf = os.theta_f(mu);

    Eigen::VectorXd w(n * os.qa);
    for (int i = 0; i < n; ++i)
        for (int q = 0; q < os.qa; ++q)
            w[i * os.qa + q] = ta[q] * sol.coefficients[i];

    const double cc = tf.dot(os.gram_cc * tf);
    double dual2 = cc;
    if (n > 0) {
        dual2 += w.dot(os.gram_ll * w);
        dual2 -= 2.0 * tf.dot(os.gram_cl * w);
    }

    ErrorEstimate est;
    if (dual2 < 0) {
        est.clamped = -dual2;
        dual2 = 0;
    }
    est.residual_dual_norm = std::sqrt(dual2);
    est.alpha_lb = coercivity_lower_bound(os, mu);
    est.value = est.residual_dual_norm / est.alpha_lb;
    return est;
}

Eigen::VectorXd lift(const RBSpace& space, const RBSolution& sol) {
    const int k = static_cast<int>(sol.coefficients.size());
    if (k > space.n()) throw std::logic_error("lift: solution larger than the basis");
    if (k == 0) return Eigen::VectorXd::Zero(space.model->n_dof);
    return space.basis.leftCols(k) * sol.coefficients;
}

double rb_output(const OnlineSystem& os, const RBSolution& sol) {
    const int k = static_cast<int>(sol.coefficients.size());
    return os.reduced_output.head(k).dot(sol.coefficients);
}

TrueError true_error(const RBSpace& space, const Eigen::VectorXd& mu, const RBSolution& sol) {
    const TruthSolution truth = truth_solve(*space.model, mu);
    const Eigen::VectorXd diff = truth.coefficients - lift(space, sol);
    TrueError err;
    err.x_err = x_norm(*space.model, diff);
    err.h1_err = h1_norm(*space.model, diff);
    return err;
}

OnlineSystem truncate(const OnlineSystem& os, int m) {
    if (m < 0 || m > os.n) throw std::invalid_argument("truncate: bad subsystem size");
    OnlineSystem out;
    out.n = m;
    out.qa = os.qa;
    out.qf = os.qf;
    out.reduced_a.reserve(os.qa);
    for (const auto& a : os.reduced_a) out.reduced_a.push_back(a.topLeftCorner(m, m));
    out.reduced_f.reserve(os.qf);
    for (const auto& f : os.reduced_f) out.reduced_f.push_back(f.head(m));
    out.reduced_output = os.reduced_output.head(m);
    out.gram_cc = os.gram_cc;
    out.gram_cl = os.gram_cl.leftCols(m * os.qa);
    out.gram_ll = os.gram_ll.topLeftCorner(m * os.qa, m * os.qa);
    out.theta_a = os.theta_a;
    out.theta_f = os.theta_f;
    return out;
}

} // namespace rbgreedy
