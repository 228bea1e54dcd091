// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include "rbgreedy/sweep.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rbgreedy {

void parallel_chunks(int n, int chunk, int threads, const std::function<void(int, int)>& fn) {
    if (n <= 0) return;
    if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const int n_chunks = (n + chunk - 1) / chunk;
    threads = std::min(threads, n_chunks);
    if (threads <= 1) {
        for (int c = 0; c < n_chunks; ++c) fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (;;) {
            const int c = next.fetch_add(1);
            if (c >= n_chunks) return;
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

SweepStats estimator_sweep(const OnlineSystem& os, const Eigen::MatrixXd& points,
                           std::span<const int> ids, std::span<double> deltas, int threads) {
    if (deltas.size() != ids.size())
        throw std::invalid_argument("estimator_sweep: output size mismatch");
    SweepStats stats;
    stats.evaluated = static_cast<std::int64_t>(ids.size());
    if (ids.empty()) return stats;

    const int n = os.n;
    const int qa = os.qa;
    const int qf = os.qf;

    // Shared read-only packs: reduced operators flattened so each chunk's
    // system assembly is one dense product.
    Eigen::MatrixXd ra(n * n, qa);
    for (int q = 0; q < qa; ++q)
        ra.col(q) = Eigen::Map<const Eigen::VectorXd>(os.reduced_a[q].data(), n * n);
    Eigen::MatrixXd rf(n, qf);
    for (int p = 0; p < qf; ++p) rf.col(p) = os.reduced_f[p];

    // Larger bases get smaller batches to keep the per-chunk assembly buffer
    // modest. The batch size never depends on the thread count, so sweep
    // results are identical for any `threads`.
    const int chunk = n <= 100 ? 128 : 32;

    std::atomic<std::int64_t> clamped{0};
    std::atomic<bool> bad_alpha{false};
    std::atomic<bool> not_spd{false};

    parallel_chunks(static_cast<int>(ids.size()), chunk, threads, [&](int begin, int end) {
        const int m = end - begin;
        Eigen::MatrixXd tha(qa, m);
        Eigen::MatrixXd thf(qf, m);
        for (int k = 0; k < m; ++k) {
            const auto mu = points.col(ids[begin + k]);
            tha.col(k) = os.theta_a(mu);
            thf.col(k) = os.theta_f(mu);
        }

        Eigen::RowVectorXd quad = Eigen::RowVectorXd::Zero(m);
        Eigen::RowVectorXd cross = Eigen::RowVectorXd::Zero(m);
        if (n > 0) {
            Eigen::MatrixXd ab(n * n, m);
            ab.noalias() = ra * tha;
            Eigen::MatrixXd fb(n, m);
            fb.noalias() = rf * thf;

            Eigen::MatrixXd w(n * qa, m);
            Eigen::MatrixXd sys(n, n);
            Eigen::VectorXd c(n);
            Eigen::LLT<Eigen::MatrixXd> llt(n);
            for (int k = 0; k < m; ++k) {
                sys = Eigen::Map<const Eigen::MatrixXd>(ab.col(k).data(), n, n);
                llt.compute(sys);
                if (llt.info() != Eigen::Success) {
                    not_spd.store(true);
                    return;
                }
                c = llt.solve(fb.col(k));
                for (int i = 0; i < n; ++i)
                    w.col(k).segment(i * qa, qa) = tha.col(k) * c[i];
            }

            Eigen::MatrixXd y(n * qa, m);
            y.noalias() = os.gram_ll * w;
            quad = (w.array() * y.array()).colwise().sum().matrix();
            Eigen::MatrixXd clw(qf, m);
            clw.noalias() = os.gram_cl * w;
            cross = (thf.array() * clw.array()).colwise().sum().matrix();
        }

        std::int64_t local_clamped = 0;
        for (int k = 0; k < m; ++k) {
            const double cc = thf.col(k).dot(os.gram_cc * thf.col(k));
            double dual2 = cc + quad[k] - 2.0 * cross[k];
            if (dual2 < 0) {
                if (-dual2 > 1e-8 * cc) ++local_clamped;
                dual2 = 0;
            }
            const double alpha = tha.col(k).minCoeff();
            if (alpha <= 0) {
                bad_alpha.store(true);
                return;
            }
            deltas[begin + k] = std::sqrt(dual2) / alpha;
        }
        if (local_clamped > 0) clamped.fetch_add(local_clamped);
    });

    if (bad_alpha.load())
        throw std::invalid_argument("estimator_sweep: nonpositive coercivity coefficient");
    if (not_spd.load())
        throw std::runtime_error("estimator_sweep: reduced system not positive definite");
    stats.clamped = clamped.load();
    return stats;
}

double sweep_max(const OnlineSystem& os, const Eigen::MatrixXd& points,
                 std::span<const int> ids, int threads) {
    if (ids.empty()) return 0;
    std::vector<double> deltas(ids.size());
    estimator_sweep(os, points, ids, deltas, threads);
    return *std::max_element(deltas.begin(), deltas.end());
}

} // namespace rbgreedy
