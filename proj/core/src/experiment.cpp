// Copyright (c) the rbgreedy authors
// SPDX-License-Identifier: Apache-2.0

#include "rbgreedy/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "rbgreedy/mesh.hpp"
#include "rbgreedy/sweep.hpp"
#include "rbgreedy/training_set.hpp"

namespace rbgreedy {

namespace {

// Shortest decimal form that round-trips a double exactly.
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct TestCache {
    Eigen::MatrixXd points;             // dim x n_test
    std::vector<Eigen::VectorXd> truth; // free-DoF coefficients per point
};

TestCache build_test_cache(const AffineModel& model, int n_test, std::uint64_t seed) {
    Rng rng(seed);
    const TrainingSet sample = sample_training_set(model.box, n_test, rng);
    TestCache cache;
    cache.points = sample.points();
    cache.truth.reserve(n_test);
    for (int i = 0; i < n_test; ++i)
        cache.truth.push_back(truth_solve(model, sample.point(i)).coefficients);
    return cache;
}

TestErrors errors_against_cache(const RBSpace& space, const AffineModel& model,
                                const TestCache& cache) {
    const int n_test = static_cast<int>(cache.points.cols());
    TestErrors errs;
    for (int i = 0; i < n_test; ++i) {
        Eigen::VectorXd diff = cache.truth[i];
        if (space.n() > 0) {
            const RBSolution sol = rb_solve(space, cache.points.col(i));
            diff -= lift(space, sol);
        }
        const double e = h1_norm(model, diff);
        errs.max_h1 = std::max(errs.max_h1, e);
        errs.mean_h1 += e;
    }
    if (n_test > 0) errs.mean_h1 /= n_test;
    return errs;
}

} // namespace

void ExperimentConfig::validate() const {
    if (n_per_side < 3 || n_per_side % 3 != 0)
        throw std::invalid_argument("config: mesh.n_per_side must be a positive multiple of 3");
    if (n_train < 1) throw std::invalid_argument("config: train.n must be positive");
    if (n_test < 0) throw std::invalid_argument("config: test.n must be nonnegative");
    if (tol_list.empty()) throw std::invalid_argument("config: tol_list must not be empty");
    for (const double tol : tol_list)
        if (!(tol > 0)) throw std::invalid_argument("config: every tolerance must be positive");
    if (seeds.empty()) throw std::invalid_argument("config: seeds must not be empty");
    if (strategies.empty()) throw std::invalid_argument("config: strategies must not be empty");
    if (threads < 0) throw std::invalid_argument("config: threads must be nonnegative");
    if (n_max < 1) throw std::invalid_argument("config: n_max must be positive");
    if (tuning.k_damp < 1 || tuning.c_m < 1)
        throw std::invalid_argument("config: tuning.k_damp and tuning.c_m must be positive");
    if (tuning.m_sample < 0 || tuning.m_sample > n_train)
        throw std::invalid_argument("config: tuning.m_sample must be in [0, train.n]");
    if (tuning.n_tr_small < 0 || tuning.n_tr_small > n_train)
        throw std::invalid_argument("config: tuning.n_tr_small must be in [0, train.n]");
}

int ExperimentConfig::effective_m_sample() const {
    return tuning.m_sample > 0 ? tuning.m_sample : std::max(1, n_train / 20);
}

int ExperimentConfig::effective_n_tr_small() const {
    return tuning.n_tr_small > 0 ? tuning.n_tr_small : std::max(1, n_train / 20);
}

ExperimentConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (j.contains("mesh")) cfg.n_per_side = j.at("mesh").value("n_per_side", cfg.n_per_side);
        if (j.contains("train")) {
            const auto& t = j.at("train");
            cfg.n_train = t.value("n", cfg.n_train);
            cfg.train_seed = t.value("seed", cfg.train_seed);
        }
        if (j.contains("test")) {
            const auto& t = j.at("test");
            cfg.n_test = t.value("n", cfg.n_test);
            cfg.test_seed = t.value("seed", cfg.test_seed);
        }
        if (j.contains("tol_list")) cfg.tol_list = j.at("tol_list").get<std::vector<double>>();
        if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("strategies")) {
            cfg.strategies.clear();
            for (const auto& s : j.at("strategies"))
                cfg.strategies.push_back(strategy_from_string(s.get<std::string>()));
        }
        if (j.contains("tuning")) {
            const auto& t = j.at("tuning");
            cfg.tuning.k_damp = t.value("k_damp", cfg.tuning.k_damp);
            cfg.tuning.c_m = t.value("c_m", cfg.tuning.c_m);
            cfg.tuning.m_sample = t.value("m_sample", cfg.tuning.m_sample);
            cfg.tuning.n_tr_small = t.value("n_tr_small", cfg.tuning.n_tr_small);
        }
        if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
        cfg.threads = j.value("threads", cfg.threads);
        cfg.n_max = j.value("n_max", cfg.n_max);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

TestErrors evaluate_test_error(const RBSpace& space, const AffineModel& model,
                               int n_test, std::uint64_t seed) {
    if (n_test < 1) throw std::invalid_argument("evaluate_test_error: n_test must be positive");
    const TestCache cache = build_test_cache(model, n_test, seed);
    return errors_against_cache(space, model, cache);
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::function<void(const RunRow&)>& on_row) {
    config.validate();

    ExperimentReport report;
    report.config = config;

    const Mesh mesh = build_unit_square_mesh(config.n_per_side);
    const AffineModel model = assemble_thermal_block(mesh);

    Rng train_rng(config.train_seed);
    const TrainingSet xi = sample_training_set(model.box, config.n_train, train_rng);
    std::vector<int> everything(xi.size());
    std::iota(everything.begin(), everything.end(), 0);

    TestCache cache;
    if (config.n_test > 0) cache = build_test_cache(model, config.n_test, config.test_seed);

    const double min_tol = *std::min_element(config.tol_list.begin(), config.tol_list.end());

    for (const double tol : config.tol_list) {
        for (const Strategy strategy : config.strategies) {
            // The scan sequence of the exhaustive strategy depends on the seed
            // only through the first pick, which the first scan overrides; one
            // run represents them all.
            const std::size_t n_seeds =
                strategy == Strategy::ClassicalGreedy ? 1 : config.seeds.size();
            for (std::size_t si = 0; si < n_seeds; ++si) {
                GreedyConfig gc;
                gc.strategy = strategy;
                gc.tol = tol;
                gc.n_train = config.n_train;
                gc.seed = config.seeds[si];
                gc.n_tr_small = config.effective_n_tr_small();
                gc.m_sample = config.effective_m_sample();
                gc.c_m = config.tuning.c_m;
                gc.k_damp = config.tuning.k_damp;
                gc.n_max = config.n_max;
                gc.threads = config.threads;

                const GreedyResult res = run_strategy(model, xi, gc);

                RunRow row;
                row.strategy = strategy;
                row.tol = tol;
                row.seed = gc.seed;
                row.k_damp = gc.k_damp;
                row.c_m = gc.c_m;
                row.m_sample = gc.m_sample;
                row.n_tr_small = gc.n_tr_small;
                row.n_final = res.trace.n_final;
                row.wall_ms = res.trace.wall_ms;
                row.est_evals = res.trace.est_evals;
                row.truth_solves = res.trace.truth_solves;
                row.converged = res.trace.converged;
                if (config.n_test > 0) {
                    const TestErrors te = errors_against_cache(res.space, model, cache);
                    row.max_h1_err = te.max_h1;
                    row.mean_h1_err = te.mean_h1;
                }
                // Post-hoc certificate over the full set; not part of the
                // strategy's own work counters.
                row.exit_max_delta =
                    sweep_max(res.space.online, xi.points(), everything, config.threads);

                report.rows.push_back(row);
                if (on_row) on_row(row);

                if (tol == min_tol) {
                    for (const IterationRecord& it : res.trace.iterations)
                        if (it.scan_size > 0)
                            report.convergence.push_back({strategy, gc.seed, it.n_basis, it.max_delta});
                }
            }
        }
    }
    return report;
}

void emit_reports(const ExperimentReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {
        std::ofstream out(fs::path(out_dir) / "summary.csv");
        if (!out) throw std::runtime_error("emit_reports: cannot write summary.csv");
        out << kSummaryHeader << '\n';
        for (const RunRow& r : report.rows) {
            out << to_string(r.strategy) << ',' << fmt_double(r.tol) << ',' << r.seed << ','
                << r.k_damp << ',' << r.c_m << ',' << r.m_sample << ',' << r.n_tr_small << ','
                << r.n_final << ',' << fmt_double(r.wall_ms) << ',' << r.est_evals << ','
                << r.truth_solves << ',' << fmt_double(r.max_h1_err) << ','
                << fmt_double(r.mean_h1_err) << ',' << fmt_double(r.exit_max_delta) << '\n';
        }
    }

    {
        std::ofstream out(fs::path(out_dir) / "convergence.csv");
        if (!out) throw std::runtime_error("emit_reports: cannot write convergence.csv");
        out << kConvergenceHeader << '\n';
        for (const ConvergenceRow& r : report.convergence)
            out << to_string(r.strategy) << ',' << r.seed << ',' << r.n << ','
                << fmt_double(r.max_delta) << '\n';
    }

    {
        nlohmann::ordered_json j;
        j["version"] = kVersion;
        const ExperimentConfig& c = report.config;
        j["config"] = {
            {"mesh", {{"n_per_side", c.n_per_side}}},
            {"train", {{"n", c.n_train}, {"seed", c.train_seed}}},
            {"test", {{"n", c.n_test}, {"seed", c.test_seed}}},
            {"tol_list", c.tol_list},
            {"seeds", c.seeds},
            {"strategies", [&] {
                 std::vector<std::string> names;
                 for (const Strategy s : c.strategies) names.push_back(to_string(s));
                 return names;
             }()},
            {"tuning",
             {{"k_damp", c.tuning.k_damp},
              {"c_m", c.tuning.c_m},
              {"m_sample", c.effective_m_sample()},
              {"n_tr_small", c.effective_n_tr_small()}}},
            {"threads", c.threads},
            {"n_max", c.n_max},
        };
        j["environment"] = {
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"hardware_threads", std::thread::hardware_concurrency()},
        };
        nlohmann::ordered_json unconverged = nlohmann::ordered_json::array();
        for (const RunRow& r : report.rows)
            if (!r.converged)
                unconverged.push_back({{"strategy", to_string(r.strategy)},
                                       {"tol", r.tol},
                                       {"seed", r.seed}});
        j["unconverged"] = unconverged;

        std::ofstream out(fs::path(out_dir) / "meta.json");
        if (!out) throw std::runtime_error("emit_reports: cannot write meta.json");
        out << j.dump(2) << '\n';
    }
}

std::string format_range_table(const ExperimentReport& report) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-6s  %-9s  %-11s  %-23s  %-19s  %s\n", "strat",
                  "tol", "N", "est_evals", "rel_time", "max_h1_err");
    os << line;

    for (const double tol : report.config.tol_list) {
        double cg_wall = 0;
        for (const RunRow& r : report.rows)
            if (r.strategy == Strategy::ClassicalGreedy && r.tol == tol) {
                cg_wall = r.wall_ms;
                break;
            }
        for (const Strategy s : report.config.strategies) {
            int n_lo = 0, n_hi = 0;
            std::int64_t ev_lo = 0, ev_hi = 0;
            double t_lo = 0, t_hi = 0, err_hi = 0;
            bool any = false;
            for (const RunRow& r : report.rows) {
                if (r.strategy != s || r.tol != tol) continue;
                if (!any) {
                    n_lo = n_hi = r.n_final;
                    ev_lo = ev_hi = r.est_evals;
                    t_lo = t_hi = r.wall_ms;
                    err_hi = r.max_h1_err;
                    any = true;
                } else {
                    n_lo = std::min(n_lo, r.n_final);
                    n_hi = std::max(n_hi, r.n_final);
                    ev_lo = std::min(ev_lo, r.est_evals);
                    ev_hi = std::max(ev_hi, r.est_evals);
                    t_lo = std::min(t_lo, r.wall_ms);
                    t_hi = std::max(t_hi, r.wall_ms);
                    err_hi = std::max(err_hi, r.max_h1_err);
                }
            }
            if (!any) continue;
            char rel[40];
            if (cg_wall > 0)
                std::snprintf(rel, sizeof rel, "[%.3f,%.3f]", t_lo / cg_wall, t_hi / cg_wall);
            else
                std::snprintf(rel, sizeof rel, "n/a");
            std::snprintf(line, sizeof line,
                          "%-6s  %-9.1e  [%3d,%3d]   [%10lld,%10lld]  %-19s  %.3e\n",
                          to_string(s).c_str(), tol, n_lo, n_hi,
                          static_cast<long long>(ev_lo), static_cast<long long>(ev_hi), rel,
                          err_hi);
            os << line;
        }
    }
    return os.str();
}

} // namespace rbgreedy
