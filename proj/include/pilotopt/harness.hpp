// SPDX-License-Identifier: Apache-2.0
//
// pilotopt - pilot assignment optimization toolkit for multi-cell massive MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Experiment orchestration: sweeps over (K, M, seed), per-solver run records,
// and the CSV exports behind the convergence-CDF and scaling studies. A spec
// file plus seed list fully determines every emitted number except wall_time.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pilotopt/io.hpp"
#include "pilotopt/solvers.hpp"
#include "pilotopt/topology.hpp"

namespace pilotopt {

struct SolverSpec {
    std::string name;  // rpa | expa | ga | skga | pkga
    GAConfig config;
    int parallelism = 1;              // pkga only
    std::uint64_t expa_limit = 1'000'000;  // expa only
};

struct ExperimentSpec {
    Scenario scenario;
    std::vector<SolverSpec> solvers;
    std::vector<std::uint64_t> seeds;
    std::vector<int> sweep_users;     // optional K sweep
    std::vector<int> sweep_antennas;  // optional M sweep
    std::string outputs;

    void validate() const {
        if (solvers.empty()) throw std::invalid_argument("experiment: solver list is empty");
        if (seeds.empty()) throw std::invalid_argument("experiment: seed list is empty");
        Scenario probe = scenario;
        for (int k : sweep_users) {
            probe.users_per_cell = k;
            probe.validate();
        }
        for (int m : sweep_antennas) {
            probe.antennas = m;
            probe.validate();
        }
        scenario.validate();
    }
};

// One row per (solver, seed, sweep point). Infeasible exhaustive runs are
// recorded with skipped = true instead of failing the experiment.
struct RunRecord {
    std::string solver_name;
    std::uint64_t seed = 0;
    int cells = 0;
    int users_per_cell = 0;
    int antennas = 0;
    int clusters = 0;
    int population_size = 0;
    int generations = 0;
    double best_objective = 0.0;
    double wall_time = 0.0;
    std::uint64_t evaluations = 0;
    bool skipped = false;
};

inline SolveResult dispatch_solver(const FadingTensor& beta, const SolverSpec& solver,
                                   std::uint64_t seed) {
    GAConfig cfg = solver.config;
    cfg.seed = seed;
    if (solver.name == "rpa") return solve_rpa(beta, seed, cfg.fitness_mode);
    if (solver.name == "expa") return solve_expa(beta, solver.expa_limit, cfg.fitness_mode);
    if (solver.name == "ga") return solve_ga(beta, cfg);
    if (solver.name == "skga") return solve_sk_ga(beta, cfg);
    if (solver.name == "pkga") return solve_pk_ga(beta, cfg, solver.parallelism);
    throw std::invalid_argument("unknown solver: " + solver.name);
}

// Runs every (sweep point, seed, solver) combination. jobs > 1 distributes
// (sweep point, seed) pairs over worker threads; records land in
// deterministic slots so the output is independent of scheduling.
inline std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, int jobs = 1) {
    spec.validate();
    const std::vector<int> users =
        spec.sweep_users.empty() ? std::vector<int>{spec.scenario.users_per_cell} : spec.sweep_users;
    const std::vector<int> antennas =
        spec.sweep_antennas.empty() ? std::vector<int>{spec.scenario.antennas}
                                    : spec.sweep_antennas;

    struct Point {
        int users;
        int antennas;
        std::uint64_t seed;
    };
    std::vector<Point> points;
    for (int k : users)
        for (int m : antennas)
            for (std::uint64_t s : spec.seeds) points.push_back({k, m, s});

    std::vector<RunRecord> records(points.size() * spec.solvers.size());
    auto run_point = [&](std::size_t pi) {
        const Point& pt = points[pi];
        Scenario scn = spec.scenario;
        scn.users_per_cell = pt.users;
        scn.antennas = pt.antennas;
        scn.seed = pt.seed;
        const Instance inst = generate_instance(scn);
        for (std::size_t si = 0; si < spec.solvers.size(); ++si) {
            const SolverSpec& solver = spec.solvers[si];
            RunRecord rec;
            rec.solver_name = solver.name;
            rec.seed = pt.seed;
            rec.cells = scn.cells;
            rec.users_per_cell = scn.users_per_cell;
            rec.antennas = scn.antennas;
            const bool ga_family =
                solver.name == "ga" || solver.name == "skga" || solver.name == "pkga";
            rec.clusters = ga_family ? solver.config.cluster_count : 0;
            rec.population_size = ga_family ? solver.config.population_size : 0;
            rec.generations = ga_family ? solver.config.generations : 0;
            try {
                const SolveResult res = dispatch_solver(inst.beta, solver, pt.seed);
                rec.best_objective = res.best_objective;
                rec.wall_time = res.wall_time;
                rec.evaluations = res.evaluations;
            } catch (const InfeasibleError&) {
                rec.skipped = true;
                rec.best_objective = std::numeric_limits<double>::quiet_NaN();
            }
            records[pi * spec.solvers.size() + si] = std::move(rec);
        }
    };

    if (jobs <= 1) {
        for (std::size_t pi = 0; pi < points.size(); ++pi) run_point(pi);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), points.size());
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t pi = next.fetch_add(1);
                    if (pi >= points.size()) break;
                    run_point(pi);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    return records;
}

// ---- records CSV ----------------------------------------------------------

inline void write_records_csv(std::ostream& os, std::span<const RunRecord> records) {
    os << "solver,seed,L,K,M,C,N,T,best_objective,wall_time,evaluations,skipped\n";
    for (const auto& r : records) {
        os << r.solver_name << ',' << r.seed << ',' << r.cells << ',' << r.users_per_cell << ','
           << r.antennas << ',' << r.clusters << ',' << r.population_size << ','
           << r.generations << ',' << detail::format_full(r.best_objective) << ','
           << detail::format_full(r.wall_time) << ',' << r.evaluations << ','
           << (r.skipped ? 1 : 0) << '\n';
    }
}

inline std::vector<RunRecord> read_records_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("records csv: missing header");
    std::vector<RunRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 12) throw std::runtime_error("records csv: bad row: " + line);
        RunRecord r;
        r.solver_name = f[0];
        r.seed = std::stoull(f[1]);
        r.cells = std::stoi(f[2]);
        r.users_per_cell = std::stoi(f[3]);
        r.antennas = std::stoi(f[4]);
        r.clusters = std::stoi(f[5]);
        r.population_size = std::stoi(f[6]);
        r.generations = std::stoi(f[7]);
        r.best_objective = std::stod(f[8]);
        r.wall_time = std::stod(f[9]);
        r.evaluations = std::stoull(f[10]);
        r.skipped = std::stoi(f[11]) != 0;
        records.push_back(std::move(r));
    }
    return records;
}

// ---- derived exports -------------------------------------------------------

// Empirical CDF of best objectives per solver: columns "solver,value,cdf"
// with levels i/n over the sorted values. Requires at least two unskipped
// samples per solver.
inline void export_cdf(std::ostream& os, std::span<const RunRecord> records) {
    std::map<std::string, std::vector<double>> by_solver;
    for (const auto& r : records)
        if (!r.skipped) by_solver[r.solver_name].push_back(r.best_objective);
    if (by_solver.empty()) throw std::invalid_argument("export_cdf: no samples");
    os << "solver,value,cdf\n";
    for (auto& [solver, values] : by_solver) {
        if (values.size() < 2)
            throw std::invalid_argument("export_cdf: fewer than 2 samples for " + solver);
        std::sort(values.begin(), values.end());
        const auto n = static_cast<double>(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            os << solver << ',' << detail::format_full(values[i]) << ','
               << detail::format_full(static_cast<double>(i + 1) / n) << '\n';
    }
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    if (v.size() % 2 == 1) return v[mid];
    return 0.5 * (v[mid - 1] + v[mid]);
}

// Median wall time and evaluation count per (solver, M, K) over seeds:
// columns "solver,M,K,median_wall_time,median_evaluations". Skipped runs
// (infeasible exhaustive points) are left out.
inline void export_scaling(std::ostream& os, std::span<const RunRecord> records) {
    std::map<std::tuple<std::string, int, int>, std::pair<std::vector<double>, std::vector<double>>>
        groups;
    for (const auto& r : records) {
        if (r.skipped) continue;
        auto& [times, evals] = groups[{r.solver_name, r.antennas, r.users_per_cell}];
        times.push_back(r.wall_time);
        evals.push_back(static_cast<double>(r.evaluations));
    }
    os << "solver,M,K,median_wall_time,median_evaluations\n";
    for (auto& [key, data] : groups) {
        os << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
           << detail::format_full(median(data.first)) << ','
           << detail::format_full(median(data.second)) << '\n';
    }
}

// ---- experiment spec JSON --------------------------------------------------

inline SolverSpec solver_spec_from_json(const nlohmann::json& j) {
    SolverSpec s;
    s.name = j.at("name").get<std::string>();
    if (j.contains("config")) s.config = ga_config_from_json(j.at("config"));
    s.parallelism = j.value("parallelism", 1);
    s.expa_limit = j.value("expa_limit", s.expa_limit);
    return s;
}

inline nlohmann::json solver_spec_to_json(const SolverSpec& s) {
    return {{"name", s.name},
            {"config", ga_config_to_json(s.config)},
            {"parallelism", s.parallelism},
            {"expa_limit", s.expa_limit}};
}

inline ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
    ExperimentSpec spec;
    if (j.contains("scenario")) spec.scenario = scenario_from_json(j.at("scenario"));
    for (const auto& sj : j.at("solvers")) spec.solvers.push_back(solver_spec_from_json(sj));
    spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("sweep")) {
        const auto& sweep = j.at("sweep");
        if (sweep.contains("K")) spec.sweep_users = sweep.at("K").get<std::vector<int>>();
        if (sweep.contains("M")) spec.sweep_antennas = sweep.at("M").get<std::vector<int>>();
    }
    spec.outputs = j.value("outputs", std::string{});
    spec.validate();
    return spec;
}

inline nlohmann::json experiment_spec_to_json(const ExperimentSpec& spec) {
    nlohmann::json solvers = nlohmann::json::array();
    for (const auto& s : spec.solvers) solvers.push_back(solver_spec_to_json(s));
    nlohmann::json j = {{"scenario", scenario_to_json(spec.scenario)},
                        {"solvers", std::move(solvers)},
                        {"seeds", spec.seeds},
                        {"outputs", spec.outputs}};
    if (!spec.sweep_users.empty() || !spec.sweep_antennas.empty()) {
        nlohmann::json sweep;
        if (!spec.sweep_users.empty()) sweep["K"] = spec.sweep_users;
        if (!spec.sweep_antennas.empty()) sweep["M"] = spec.sweep_antennas;
        j["sweep"] = std::move(sweep);
    }
    return j;
}

}  // namespace pilotopt
