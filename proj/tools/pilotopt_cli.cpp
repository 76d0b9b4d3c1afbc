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
// Command-line front end.
//
//   pilotopt solve --solver skga --cells 16 --users 20 --seed 7
//   pilotopt bench --spec spec.json --out results/
//   pilotopt cdf   --records results/records.csv --out results/cdf.csv
//   pilotopt space --cells 16 --users 60
//   pilotopt gen   --cells 4 --users 8 --seed 3 --out scenario_dir/

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pilotopt/pilotopt.hpp"

namespace {

struct ScenarioOpts {
    pilotopt::Scenario scenario;

    void attach(CLI::App* cmd) {
        cmd->add_option("--cells", scenario.cells, "Number of cells L");
        cmd->add_option("--users", scenario.users_per_cell, "Users (and pilots) per cell K");
        cmd->add_option("--antennas", scenario.antennas, "BS antennas M");
        cmd->add_option("--seed", scenario.seed, "Root RNG seed");
    }
};

struct SolveOpts {
    ScenarioOpts scn;
    pilotopt::GAConfig config;
    std::string solver = "skga";
    std::string fitness = "sumse";
    int parallelism = 1;
    std::string out;

    void attach(CLI::App* cmd) {
        scn.attach(cmd);
        cmd->add_option("--solver", solver, "rpa | expa | ga | skga | pkga")->required();
        cmd->add_option("--clusters", config.cluster_count, "K-means cluster count C");
        cmd->add_option("--pop", config.population_size, "GA population size N");
        cmd->add_option("--gens", config.generations, "GA generations T");
        cmd->add_option("--pc", config.crossover_prob, "Crossover probability");
        cmd->add_option("--pm", config.mutation_prob, "Mutation probability");
        cmd->add_option("--elite", config.elite_count, "Elites copied per generation");
        cmd->add_option("--recluster", config.recluster_period, "Generations between re-clusterings");
        cmd->add_option("--parallelism", parallelism, "Island workers for pkga");
        cmd->add_option("--fitness", fitness, "sumse | interference");
        cmd->add_option("--out", out, "Directory for result.json and history.csv");
    }
};

int run_solve(const SolveOpts& opts) {
    pilotopt::Scenario scenario = opts.scn.scenario;
    scenario.validate();
    const pilotopt::Instance inst = pilotopt::generate_instance(scenario);

    pilotopt::SolverSpec spec;
    spec.name = opts.solver;
    spec.config = opts.config;
    spec.config.fitness_mode = pilotopt::fitness_mode_from_string(opts.fitness);
    spec.parallelism = opts.parallelism;
    const pilotopt::SolveResult result =
        pilotopt::dispatch_solver(inst.beta, spec, scenario.seed);

    std::cout << "objective " << pilotopt::detail::format_display(result.best_objective) << '\n';
    pilotopt::write_assignment_csv(std::cout, result.best);

    if (!opts.out.empty()) {
        std::filesystem::create_directories(opts.out);
        std::ofstream rj(std::filesystem::path(opts.out) / "result.json");
        rj << pilotopt::solve_result_to_json(result).dump(2) << '\n';
        std::ofstream hc(std::filesystem::path(opts.out) / "history.csv");
        pilotopt::write_history_csv(hc, result);
    }
    return 0;
}

int run_bench(const std::string& spec_path, const std::string& out, int jobs) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot open spec file: " + spec_path);
    nlohmann::json j;
    in >> j;
    pilotopt::ExperimentSpec spec = pilotopt::experiment_spec_from_json(j);
    const std::string out_dir = out.empty() ? spec.outputs : out;
    if (out_dir.empty()) throw std::runtime_error("bench: no output directory (--out or spec.outputs)");

    const auto records = pilotopt::run_experiment(spec, jobs);
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream os(std::filesystem::path(out_dir) / "records.csv");
        pilotopt::write_records_csv(os, records);
    }
    {
        std::ofstream os(std::filesystem::path(out_dir) / "cdf.csv");
        pilotopt::export_cdf(os, records);
    }
    {
        std::ofstream os(std::filesystem::path(out_dir) / "scaling.csv");
        pilotopt::export_scaling(os, records);
    }
    std::cout << "wrote " << records.size() << " records to " << out_dir << '\n';
    return 0;
}

int run_cdf(const std::string& records_path, const std::string& out) {
    std::ifstream in(records_path);
    if (!in) throw std::runtime_error("cannot open records file: " + records_path);
    const auto records = pilotopt::read_records_csv(in);
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open output file: " + out);
    pilotopt::export_cdf(os, records);
    return 0;
}

int run_gen(const ScenarioOpts& opts, const std::string& out) {
    pilotopt::Scenario scenario = opts.scenario;
    scenario.validate();
    const pilotopt::Instance inst = pilotopt::generate_instance(scenario);
    std::filesystem::create_directories(out);
    {
        std::ofstream os(std::filesystem::path(out) / "scenario.json");
        os << pilotopt::scenario_to_json(scenario).dump(2) << '\n';
    }
    {
        std::ofstream os(std::filesystem::path(out) / "fading.csv");
        pilotopt::write_fading_csv(os, inst.beta);
    }
    std::cout << "wrote scenario.json and fading.csv to " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pilot assignment optimization for multi-cell massive MIMO"};
    app.require_subcommand(1);

    SolveOpts solve_opts;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Run one solver on a generated scenario");
    solve_opts.attach(solve_cmd);

    std::string bench_spec, bench_out;
    int bench_jobs = 1;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run an experiment spec and export CSVs");
    bench_cmd->add_option("--spec", bench_spec, "Experiment spec JSON")->required();
    bench_cmd->add_option("--out", bench_out, "Output directory");
    bench_cmd->add_option("--jobs", bench_jobs, "Concurrent (sweep point, seed) workers");

    std::string cdf_records, cdf_out;
    CLI::App* cdf_cmd = app.add_subcommand("cdf", "Export the best-objective CDF of a records file");
    cdf_cmd->add_option("--records", cdf_records, "records.csv input")->required();
    cdf_cmd->add_option("--out", cdf_out, "cdf.csv output")->required();

    int space_cells = 16, space_users = 60;
    CLI::App* space_cmd = app.add_subcommand("space", "Print the exact canonical search-space size");
    space_cmd->add_option("--cells", space_cells, "Number of cells L");
    space_cmd->add_option("--users", space_users, "Users (pilots) per cell K");

    ScenarioOpts gen_opts;
    std::string gen_out;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Emit scenario.json and fading.csv");
    gen_opts.attach(gen_cmd);
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return run_solve(solve_opts);
        if (bench_cmd->parsed()) return run_bench(bench_spec, bench_out, bench_jobs);
        if (cdf_cmd->parsed()) return run_cdf(cdf_records, cdf_out);
        if (space_cmd->parsed()) {
            std::cout << pilotopt::search_space_size(space_cells, space_users).str() << '\n';
            return 0;
        }
        if (gen_cmd->parsed()) return run_gen(gen_opts, gen_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
