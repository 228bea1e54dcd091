// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include "rbgreedy/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

#include "rbgreedy/sweep.hpp"

namespace rbgreedy {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::ClassicalGreedy: return "cg";
        case Strategy::TrainingSetDecomposition: return "tsd";
        case Strategy::AdaptiveEnriching: return "ae";
        case Strategy::SurrogateTrainingSet: return "sts";
        case Strategy::HybridTsd: return "h-tsd";
        case Strategy::HybridAe: return "h-ae";
    }
    throw std::logic_error("to_string: unknown strategy");
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "cg") return Strategy::ClassicalGreedy;
    if (name == "tsd") return Strategy::TrainingSetDecomposition;
    if (name == "ae") return Strategy::AdaptiveEnriching;
    if (name == "sts") return Strategy::SurrogateTrainingSet;
    if (name == "h-tsd") return Strategy::HybridTsd;
    if (name == "h-ae") return Strategy::HybridAe;
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

void GreedyConfig::validate() const {
    if (!(tol > 0)) throw std::invalid_argument("GreedyConfig: tol must be positive");
    if (n_train < 1) throw std::invalid_argument("GreedyConfig: n_train must be positive");
    if (n_max < 1) throw std::invalid_argument("GreedyConfig: n_max must be positive");
    if (threads < 0) throw std::invalid_argument("GreedyConfig: threads must be nonnegative");

    const bool needs_partition = strategy == Strategy::TrainingSetDecomposition ||
                                 strategy == Strategy::HybridTsd;
    const bool needs_working_set = strategy == Strategy::AdaptiveEnriching ||
                                   strategy == Strategy::HybridAe;
    const bool needs_surrogate = strategy == Strategy::SurrogateTrainingSet ||
                                 strategy == Strategy::HybridTsd ||
                                 strategy == Strategy::HybridAe;
    if (needs_partition && (n_tr_small < 1 || n_tr_small > n_train))
        throw std::invalid_argument("GreedyConfig: n_tr_small must be in [1, n_train]");
    if (needs_working_set && (m_sample < 1 || m_sample > n_train))
        throw std::invalid_argument("GreedyConfig: m_sample must be in [1, n_train]");
    if (needs_surrogate && (c_m < 1 || k_damp < 1))
        throw std::invalid_argument("GreedyConfig: c_m and k_damp must be positive");
}

int ae_safety_budget(int n_train, int m_sample) {
    if (n_train < 1 || m_sample < 1 || m_sample > n_train)
        throw std::invalid_argument("ae_safety_budget: need 1 <= m_sample <= n_train");
    return (n_train + m_sample - 1) / m_sample;
}

std::vector<TrainingSet> tsd_partition(const TrainingSet& xi, int n_tr_small, Rng& rng) {
    const int n = xi.size();
    if (n_tr_small < 1 || n_tr_small > n)
        throw std::invalid_argument("tsd_partition: n_tr_small must be in [1, size]");

    // Largest j with n_tr_small * 2^j <= n; below 2x the partition is the
    // whole set and no shuffle happens (keeps the degenerate case identical
    // to a plain run under the same seed).
    int j_count = 0;
    while ((static_cast<std::int64_t>(n_tr_small) << (j_count + 1)) <= n) ++j_count;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> sizes;
    if (j_count <= 1) {
        sizes.push_back(n);
    } else {
        for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
        int used = 0;
        for (int j = 1; j < j_count; ++j) {
            const int sz = n_tr_small << (j - 1);
            sizes.push_back(sz);
            used += sz;
        }
        sizes.push_back(n - used);
    }

    std::vector<TrainingSet> subsets;
    subsets.reserve(sizes.size());
    int pos = 0;
    for (const int sz : sizes) {
        Eigen::MatrixXd pts(xi.dim(), sz);
        std::vector<int> ids(sz);
        for (int k = 0; k < sz; ++k) {
            const int src = order[pos + k];
            pts.col(k) = xi.point(src);
            ids[k] = xi.id(src);
        }
        subsets.emplace_back(std::move(pts), std::move(ids));
        pos += sz;
    }
    return subsets;
}

std::vector<int> smm_select(const std::vector<std::pair<int, double>>& estimates,
                            double tol, int m_level) {
    if (estimates.empty()) throw std::invalid_argument("smm_select: empty estimate set");
    if (m_level < 1) throw std::invalid_argument("smm_select: m_level must be positive");
    if (!(tol > 0)) throw std::invalid_argument("smm_select: tol must be positive");

    double dmax = estimates.front().second;
    for (const auto& [id, d] : estimates) dmax = std::max(dmax, d);
    if (dmax < tol) return {};

    std::vector<std::pair<double, int>> sorted;
    sorted.reserve(estimates.size());
    for (const auto& [id, d] : estimates) sorted.emplace_back(d, id);
    std::sort(sorted.begin(), sorted.end());

    // First entry of the run holding `value` (lowest id among equal values).
    const auto run_first = [&](double value) {
        return std::lower_bound(sorted.begin(), sorted.end(), std::make_pair(value, INT_MIN));
    };

    std::vector<int> picked;
    picked.reserve(m_level);
    for (int m = 0; m < m_level; ++m) {
        const double nu = tol + (dmax - tol) * static_cast<double>(m) / m_level;
        const auto right = std::lower_bound(
            sorted.begin(), sorted.end(), nu,
            [](const std::pair<double, int>& p, double v) { return p.first < v; });
        int best_id;
        if (right == sorted.begin()) {
            best_id = right->second;
        } else if (right == sorted.end()) {
            best_id = run_first(std::prev(right)->first)->second;
        } else {
            const auto left = run_first(std::prev(right)->first);
            const double dl = nu - left->first;
            const double dr = right->first - nu;
            if (dl < dr) best_id = left->second;
            else if (dr < dl) best_id = right->second;
            else best_id = std::min(left->second, right->second);
        }
        picked.push_back(best_id);
    }
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    return picked;
}

namespace {

using Clock = std::chrono::steady_clock;

class Driver {
public:
    Driver(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg)
        : model_(model), xi_(xi), cfg_(cfg), rng_(cfg.seed), space_(make_rb_space(model)),
          selected_(xi.size(), 0), last_delta_(xi.size(), 0.0), t0_(Clock::now()) {
        cfg_.validate();
        if (cfg_.n_train != xi.size())
            throw std::invalid_argument("GreedyConfig: n_train does not match the training set size");
        for (int i = 0; i < xi.size(); ++i)
            if (xi.id(i) != i)
                throw std::invalid_argument("strategies run on a master set with ids 0..n-1");
    }

    void run() {
        switch (cfg_.strategy) {
            case Strategy::ClassicalGreedy: run_cg(); break;
            case Strategy::TrainingSetDecomposition: run_tsd(); break;
            case Strategy::AdaptiveEnriching: run_ae(); break;
            case Strategy::SurrogateTrainingSet: run_sts(); break;
            case Strategy::HybridTsd: run_h_tsd(); break;
            case Strategy::HybridAe: run_h_ae(); break;
        }
    }

    GreedyResult finish() {
        trace_.n_final = space_.n();
        trace_.converged = converged_;
        trace_.final_scan_max = final_scan_max_;
        trace_.est_evals = est_evals_;
        trace_.truth_solves = truth_solves_;
        trace_.clamped = clamped_;
        trace_.redundant_skipped = redundant_;
        trace_.wall_ms = elapsed_ms();
        return {std::move(space_), std::move(trace_)};
    }

private:
    struct ScanOutcome {
        double max_delta = 0;
        int size = 0;
    };

    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - t0_).count();
    }

    std::vector<int> active_of(const std::vector<int>& ids) const {
        std::vector<int> out;
        out.reserve(ids.size());
        for (const int id : ids)
            if (xi_.active(id)) out.push_back(id);
        return out;
    }

    std::vector<int> all_active() const {
        std::vector<int> out;
        out.reserve(xi_.size());
        for (int i = 0; i < xi_.size(); ++i)
            if (xi_.active(i)) out.push_back(i);
        return out;
    }

    // Estimates every id (all must be active), refreshing last_delta_.
    // `estimates` (when given) collects (id, delta) for not-yet-selected ids.
    ScanOutcome scan(const std::vector<int>& ids,
                     std::vector<std::pair<int, double>>* estimates = nullptr) {
        deltas_.resize(ids.size());
        const SweepStats stats =
            estimator_sweep(space_.online, xi_.points(), ids, deltas_, cfg_.threads);
        est_evals_ += stats.evaluated;
        clamped_ += stats.clamped;

        ScanOutcome out;
        out.size = static_cast<int>(ids.size());
        if (estimates) {
            estimates->clear();
            estimates->reserve(ids.size());
        }
        for (size_t k = 0; k < ids.size(); ++k) {
            const int id = ids[k];
            const double d = deltas_[k];
            last_delta_[id] = d;
            out.max_delta = std::max(out.max_delta, d);
            if (estimates && !selected_[id]) estimates->emplace_back(id, d);
        }
        return out;
    }

    void record(int n_at_scan, int chosen, double max_delta, int scan_size) {
        trace_.iterations.push_back(
            {n_at_scan, chosen, max_delta, scan_size, est_evals_, elapsed_ms()});
    }

    void outer_record(int ell, double e_ell, int sur_size) {
        trace_.outer.push_back({ell, e_ell, sur_size});
    }

    // Truth solve + basis extension. On numerical dependence the point is
    // retired (deactivated) instead of selected.
    bool augment(int id) {
        ++truth_solves_;
        const TruthSolution snapshot = truth_solve(model_, xi_.point(id));
        if (!augment_basis(space_, snapshot)) {
            ++redundant_;
            xi_.deactivate(id);
            return false;
        }
        selected_[id] = 1;
        return true;
    }

    // Walks active not-selected ids with estimate > min_delta in decreasing
    // order (lowest id on ties) until one augments. -1 when none do.
    int select_and_augment_above(const std::vector<int>& ids, double min_delta) {
        for (;;) {
            if (space_.n() >= cfg_.n_max) {
                aborted_ = true;
                return -1;
            }
            double best = min_delta;
            int best_id = -1;
            for (const int id : ids) {
                if (!xi_.active(id) || selected_[id]) continue;
                const double d = last_delta_[id];
                if (d > best || (d == best && best_id >= 0 && id < best_id)) {
                    best = d;
                    best_id = id;
                }
            }
            if (best_id < 0) return -1;
            if (augment(best_id)) return best_id;
        }
    }

    void initial_pick(const std::vector<int>& candidates) {
        const std::vector<int> ids = active_of(candidates);
        if (ids.empty()) throw std::invalid_argument("greedy: empty candidate set for the initial pick");
        const int id = ids[rng_.index(static_cast<int>(ids.size()))];
        if (!augment(id))
            throw std::runtime_error("greedy: initial snapshot is numerically zero");
        record(0, id, 0.0, 0);
    }

    // Classical loop over one id set; resumable (keeps the current space).
    void cg_on(const std::vector<int>& subset) {
        if (space_.n() == 0) initial_pick(subset);
        while (!aborted_) {
            const std::vector<int> ids = active_of(subset);
            if (ids.empty()) {
                final_scan_max_ = 0;
                break;
            }
            const int n_before = space_.n();
            const ScanOutcome out = scan(ids);
            final_scan_max_ = out.max_delta;
            if (out.max_delta <= cfg_.tol) {
                record(n_before, -1, out.max_delta, out.size);
                break;
            }
            const int chosen = select_and_augment_above(ids, cfg_.tol);
            record(n_before, chosen, out.max_delta, out.size);
            // chosen < 0: every above-tolerance candidate was redundant and
            // got retired; rescan what remains.
        }
    }

    // One surrogate-informed round sequence over one id set; resumable.
    void sts_on(const std::vector<int>& subset) {
        if (space_.n() == 0) initial_pick(subset);
        int ell = 0;
        double e_ell = 2 * cfg_.tol;
        std::vector<std::pair<int, double>> estimates;
        while (!aborted_ && e_ell > cfg_.tol) {
            ++ell;
            const std::vector<int> ids = active_of(subset);
            if (ids.empty()) {
                e_ell = 0;
                final_scan_max_ = 0;
                break;
            }
            const int n_before = space_.n();
            const ScanOutcome out = scan(ids, &estimates);
            e_ell = out.max_delta;
            final_scan_max_ = e_ell;
            if (e_ell <= cfg_.tol) {
                record(n_before, -1, e_ell, out.size);
                outer_record(ell, e_ell, 0);
                break;
            }
            const int chosen = select_and_augment_above(ids, cfg_.tol);
            record(n_before, chosen, e_ell, out.size);
            if (chosen < 0) {
                outer_record(ell, e_ell, 0);
                continue;
            }
            std::erase_if(estimates, [&](const std::pair<int, double>& p) {
                return selected_[p.first] || !xi_.active(p.first);
            });
            std::vector<int> sur;
            if (!estimates.empty())
                sur = smm_select(estimates, cfg_.tol, cfg_.c_m * (ell + 1));
            outer_record(ell, e_ell, static_cast<int>(sur.size()));
            inner_surrogate_loop(sur, e_ell, ell);
        }
    }

    // Damped multi-step sweep over the surrogate set.
    void inner_surrogate_loop(const std::vector<int>& sur, double e_ell, int ell) {
        if (sur.empty()) return;
        const double damp = 1.0 / (static_cast<double>(cfg_.k_damp) * (ell + 1));
        double eps = e_ell;
        while (!aborted_ && eps > cfg_.tol && eps / e_ell > damp) {
            const std::vector<int> ids = active_of(sur);
            if (ids.empty()) break;
            const int n_before = space_.n();
            const ScanOutcome out = scan(ids);
            eps = out.max_delta;
            if (eps <= cfg_.tol || eps / e_ell <= damp) {
                record(n_before, -1, eps, out.size);
                break;
            }
            const int chosen = select_and_augment_above(ids, cfg_.tol);
            record(n_before, chosen, eps, out.size);
        }
    }

    void run_cg() {
        std::vector<int> everything(xi_.size());
        std::iota(everything.begin(), everything.end(), 0);
        cg_on(everything);
        converged_ = !aborted_;
    }

    void run_tsd() {
        const std::vector<TrainingSet> subsets = tsd_partition(xi_, cfg_.n_tr_small, rng_);
        for (const TrainingSet& sub : subsets) {
            if (aborted_) break;
            cg_on(sub.ids());
        }
        converged_ = !aborted_;
    }

    void run_sts() {
        std::vector<int> everything(xi_.size());
        std::iota(everything.begin(), everything.end(), 0);
        sts_on(everything);
        converged_ = !aborted_;
    }

    void run_h_tsd() {
        const std::vector<TrainingSet> subsets = tsd_partition(xi_, cfg_.n_tr_small, rng_);
        for (const TrainingSet& sub : subsets) {
            if (aborted_) break;
            sts_on(sub.ids());
        }
        converged_ = !aborted_;
    }

    // Draws k fresh ids from the pool (swap-pop keeps draws O(1)).
    void draw_into(std::vector<int>& cur, std::vector<int>& pool, int k) {
        for (int i = 0; i < k && !pool.empty(); ++i) {
            const int j = rng_.index(static_cast<int>(pool.size()));
            cur.push_back(pool[j]);
            pool[j] = pool.back();
            pool.pop_back();
        }
    }

    // Removes retired and below-tolerance members of the working set.
    // Returns {truncated_below, removed_redundant}.
    std::pair<int, int> truncate_working_set(std::vector<int>& cur) {
        int below = 0;
        int redundant = 0;
        std::erase_if(cur, [&](const int id) {
            if (!xi_.active(id)) {
                ++redundant;
                return true;
            }
            if (last_delta_[id] < cfg_.tol) {
                xi_.deactivate(id);
                ++below;
                return true;
            }
            return false;
        });
        return {below, redundant};
    }

    void run_ae() {
        const int n = xi_.size();
        const int m = cfg_.m_sample;
        const int n_safe = ae_safety_budget(n, m);

        std::vector<int> cur;
        std::vector<int> pool;
        if (m == n) {
            cur.resize(n);
            std::iota(cur.begin(), cur.end(), 0);
        } else {
            pool.resize(n);
            std::iota(pool.begin(), pool.end(), 0);
            draw_into(cur, pool, m);
        }
        initial_pick(cur);

        int safe = 0;
        int r = n;
        double eps = 2 * cfg_.tol;
        while (!aborted_ && (eps > cfg_.tol || safe <= n_safe) && r > 0) {
            if (cur.empty()) {
                if (pool.empty()) break;
                draw_into(cur, pool, m);
                continue;
            }
            const int n_before = space_.n();
            const ScanOutcome out = scan(cur);
            eps = out.max_delta;
            final_scan_max_ = eps;
            int chosen = -1;
            if (eps > cfg_.tol) chosen = select_and_augment_above(cur, cfg_.tol);
            record(n_before, chosen, eps, out.size);

            const auto [below, redundant] = truncate_working_set(cur);
            r -= below + redundant;
            if (below == m) ++safe;
            if (static_cast<int>(cur.size()) < m) draw_into(cur, pool, m - static_cast<int>(cur.size()));
        }
        converged_ = !aborted_ && (r <= 0 || (eps <= cfg_.tol && safe > n_safe));
    }

    void run_h_ae() {
        const int n = xi_.size();
        const int m = cfg_.m_sample;
        const int n_safe = ae_safety_budget(n, m);

        std::vector<int> cur;
        std::vector<int> pool;
        if (m == n) {
            cur.resize(n);
            std::iota(cur.begin(), cur.end(), 0);
        } else {
            pool.resize(n);
            std::iota(pool.begin(), pool.end(), 0);
            draw_into(cur, pool, m);
        }
        initial_pick(all_active());

        int safe = 0;
        int ell = 1;
        int r = n;
        double e_ell = 2 * cfg_.tol;
        std::vector<std::pair<int, double>> estimates;
        while (!aborted_ && (e_ell > cfg_.tol || safe <= n_safe) && r > 0) {
            if (cur.empty()) {
                if (pool.empty()) break;
                draw_into(cur, pool, m);
                continue;
            }
            const int n_before = space_.n();
            const ScanOutcome out = scan(cur, &estimates);
            e_ell = out.max_delta;
            final_scan_max_ = e_ell;
            int chosen = -1;
            if (e_ell > cfg_.tol) chosen = select_and_augment_above(cur, cfg_.tol);
            record(n_before, chosen, e_ell, out.size);
            if (chosen >= 0) {
                std::erase_if(estimates, [&](const std::pair<int, double>& p) {
                    return selected_[p.first] || !xi_.active(p.first);
                });
                std::vector<int> sur;
                if (!estimates.empty())
                    sur = smm_select(estimates, cfg_.tol, cfg_.c_m * (ell + 1));
                outer_record(ell, e_ell, static_cast<int>(sur.size()));
                inner_surrogate_loop(sur, e_ell, ell);
            } else {
                outer_record(ell, e_ell, 0);
            }

            const auto [below, redundant] = truncate_working_set(cur);
            r -= below + redundant;
            if (below == m) {
                ++safe;
                ell = 1;
            } else {
                ++ell;
            }
            if (static_cast<int>(cur.size()) < m) draw_into(cur, pool, m - static_cast<int>(cur.size()));
        }
        converged_ = !aborted_ && (r <= 0 || (e_ell <= cfg_.tol && safe > n_safe));
    }

    const AffineModel& model_;
    TrainingSet xi_; // private copy; the active mask tracks retirements
    GreedyConfig cfg_;
    Rng rng_;
    RBSpace space_;
    GreedyTrace trace_;
    std::vector<std::uint8_t> selected_;
    std::vector<double> last_delta_;
    std::vector<double> deltas_;
    std::int64_t est_evals_ = 0;
    std::int64_t truth_solves_ = 0;
    std::int64_t clamped_ = 0;
    int redundant_ = 0;
    bool aborted_ = false;
    bool converged_ = false;
    double final_scan_max_ = 0;
    Clock::time_point t0_;
};

GreedyResult run_with(Strategy s, const AffineModel& model, const TrainingSet& xi,
                      GreedyConfig cfg) {
    cfg.strategy = s;
    Driver driver(model, xi, cfg);
    driver.run();
    return driver.finish();
}

} // namespace

GreedyResult classical_greedy(const AffineModel& model, const TrainingSet& xi,
                              const GreedyConfig& cfg) {
    return run_with(Strategy::ClassicalGreedy, model, xi, cfg);
}

GreedyResult tsd_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg) {
    return run_with(Strategy::TrainingSetDecomposition, model, xi, cfg);
}

GreedyResult ae_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg) {
    return run_with(Strategy::AdaptiveEnriching, model, xi, cfg);
}

GreedyResult sts_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg) {
    return run_with(Strategy::SurrogateTrainingSet, model, xi, cfg);
}

GreedyResult h_tsd_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg) {
    return run_with(Strategy::HybridTsd, model, xi, cfg);
}

GreedyResult h_ae_cg(const AffineModel& model, const TrainingSet& xi, const GreedyConfig& cfg) {
    return run_with(Strategy::HybridAe, model, xi, cfg);
}

GreedyResult run_strategy(const AffineModel& model, const TrainingSet& xi,
                          const GreedyConfig& cfg) {
    return run_with(cfg.strategy, model, xi, cfg);
}

} // namespace rbgreedy
