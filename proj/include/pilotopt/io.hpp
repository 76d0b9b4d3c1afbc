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
// File formats: scenario JSON, fading-tensor CSV, assignment CSV, SE-report
// CSV, solve-result JSON and history CSV. Floating-point values in CSV files
// are written with max_digits10 precision so parsing them back reproduces
// the in-memory values exactly.

#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pilotopt/encoding.hpp"
#include "pilotopt/metrics.hpp"
#include "pilotopt/solvers.hpp"
#include "pilotopt/topology.hpp"

namespace pilotopt {

namespace detail {

// Round-trip exact formatting for doubles.
inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Display formatting: 12 significant digits.
inline std::string format_display(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace detail

// ---- Scenario JSON -------------------------------------------------------

inline nlohmann::json scenario_to_json(const Scenario& s) {
    return {
        {"L", s.cells},
        {"K", s.users_per_cell},
        {"M", s.antennas},
        {"cell_radius", s.cell_radius},
        {"alpha", s.alpha},
        {"shadow_sigma_db", s.shadow_sigma_db},
        {"min_dist", s.min_dist},
        {"noise_power", s.noise_power},
        {"tau_p", s.tau_p},
        {"tau_c", s.tau_c},
        {"seed", s.seed},
    };
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    s.cells = j.value("L", s.cells);
    s.users_per_cell = j.value("K", s.users_per_cell);
    s.antennas = j.value("M", s.antennas);
    s.cell_radius = j.value("cell_radius", s.cell_radius);
    s.alpha = j.value("alpha", s.alpha);
    s.shadow_sigma_db = j.value("shadow_sigma_db", s.shadow_sigma_db);
    s.min_dist = j.value("min_dist", s.min_dist);
    s.noise_power = j.value("noise_power", s.noise_power);
    s.tau_p = j.value("tau_p", s.tau_p);
    s.tau_c = j.value("tau_c", s.tau_c);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
}

// ---- GAConfig JSON -------------------------------------------------------

inline nlohmann::json ga_config_to_json(const GAConfig& c) {
    return {
        {"population_size", c.population_size},
        {"generations", c.generations},
        {"crossover_prob", c.crossover_prob},
        {"mutation_prob", c.mutation_prob},
        {"elite_count", c.elite_count},
        {"cluster_count", c.cluster_count},
        {"recluster_period", c.recluster_period},
        {"fitness_mode", to_string(c.fitness_mode)},
        {"seed", c.seed},
    };
}

inline GAConfig ga_config_from_json(const nlohmann::json& j) {
    GAConfig c;
    c.population_size = j.value("population_size", c.population_size);
    c.generations = j.value("generations", c.generations);
    c.crossover_prob = j.value("crossover_prob", c.crossover_prob);
    c.mutation_prob = j.value("mutation_prob", c.mutation_prob);
    c.elite_count = j.value("elite_count", c.elite_count);
    c.cluster_count = j.value("cluster_count", c.cluster_count);
    c.recluster_period = j.value("recluster_period", c.recluster_period);
    if (j.contains("fitness_mode"))
        c.fitness_mode = fitness_mode_from_string(j.at("fitness_mode").get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

// ---- FadingTensor CSV ----------------------------------------------------
// Header line "L,K", then one row "i,j,k,beta" per entry, full precision.

inline void write_fading_csv(std::ostream& os, const FadingTensor& beta) {
    os << beta.cells() << ',' << beta.users_per_cell() << '\n';
    for (int i = 0; i < beta.cells(); ++i)
        for (int j = 0; j < beta.cells(); ++j)
            for (int k = 0; k < beta.users_per_cell(); ++k)
                os << i << ',' << j << ',' << k << ',' << detail::format_full(beta(i, j, k))
                   << '\n';
}

inline FadingTensor read_fading_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("fading csv: missing header");
    const auto header = detail::split_csv_line(line);
    if (header.size() != 2) throw std::runtime_error("fading csv: header must be 'L,K'");
    FadingTensor beta(std::stoi(header[0]), std::stoi(header[1]));
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 4) throw std::runtime_error("fading csv: bad row: " + line);
        beta(std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2])) = std::stod(f[3]);
    }
    return beta;
}

// ---- PilotAssignment CSV -------------------------------------------------
// One row per cell, comma-separated pilot indices.

inline void write_assignment_csv(std::ostream& os, const PilotAssignment& a) {
    for (int j = 0; j < a.cells(); ++j) {
        const auto row = a.row(j);
        for (int u = 0; u < a.pilots(); ++u) os << (u ? "," : "") << row[u];
        os << '\n';
    }
}

inline PilotAssignment read_assignment_csv(std::istream& is) {
    std::vector<std::vector<int>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<int> row;
        for (const auto& f : detail::split_csv_line(line)) row.push_back(std::stoi(f));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("assignment csv: no rows");
    PilotAssignment a(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int j = 0; j < a.cells(); ++j) {
        if (static_cast<int>(rows[j].size()) != a.pilots())
            throw std::runtime_error("assignment csv: ragged rows");
        for (int u = 0; u < a.pilots(); ++u) a.set_pilot(j, u, rows[j][u]);
    }
    if (!a.rows_are_permutations()) throw std::runtime_error("assignment csv: rows not permutations");
    return a;
}

// ---- SeReport CSV --------------------------------------------------------
// Rows "cell,pilot,user,se" and footer "sum,,,<value>".

inline void write_se_report_csv(std::ostream& os, const SeReport& report,
                                const PilotAssignment& assignment) {
    for (int i = 0; i < report.cells; ++i)
        for (int u = 0; u < report.users_per_cell; ++u)
            os << i << ',' << assignment.pilot(i, u) << ',' << u << ','
               << detail::format_full(report.se(i, u)) << '\n';
    os << "sum,,," << detail::format_full(report.sum_se) << '\n';
}

// ---- SolveResult JSON / history CSV --------------------------------------

inline nlohmann::json solve_result_to_json(const SolveResult& r) {
    nlohmann::json best = nlohmann::json::array();
    for (int j = 0; j < r.best.cells(); ++j) {
        nlohmann::json row = nlohmann::json::array();
        for (int u = 0; u < r.best.pilots(); ++u) row.push_back(r.best.pilot(j, u));
        best.push_back(std::move(row));
    }
    return {
        {"solver_name", r.solver_name},
        {"seed", r.seed},
        {"best", std::move(best)},
        {"best_objective", r.best_objective},
        {"history", r.history},
        {"evaluations", r.evaluations},
        {"wall_time", r.wall_time},
    };
}

inline SolveResult solve_result_from_json(const nlohmann::json& j) {
    SolveResult r;
    r.solver_name = j.at("solver_name").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto& best = j.at("best");
    const int cells = static_cast<int>(best.size());
    const int pilots = static_cast<int>(best.at(0).size());
    r.best = PilotAssignment(cells, pilots);
    for (int jj = 0; jj < cells; ++jj)
        for (int u = 0; u < pilots; ++u) r.best.set_pilot(jj, u, best[jj][u].get<int>());
    r.best_objective = j.at("best_objective").get<double>();
    r.history = j.at("history").get<std::vector<double>>();
    r.evaluations = j.at("evaluations").get<std::uint64_t>();
    r.wall_time = j.at("wall_time").get<double>();
    return r;
}

// Rows "generation,best_objective"; generation 0 is the initial population.
inline void write_history_csv(std::ostream& os, const SolveResult& r) {
    os << "generation,best_objective\n";
    for (std::size_t g = 0; g < r.history.size(); ++g)
        os << g << ',' << detail::format_full(r.history[g]) << '\n';
}

}  // namespace pilotopt
