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
// The five pilot-assignment strategies: random (rpa), exhaustive (expa),
// generational GA (ga), and the K-means-clustered GA in sequential (skga)
// and parallel (pkga) form. All maximize the sum-SE objective (or the
// negated cluster-interference score) over canonical assignments.
//
// Determinism contract: every solver is a pure function of (tensor, config,
// seed). The clustered solvers give each island, each generation, its own
// RNG substream derived from (seed, generation, island), so skga and pkga
// produce bitwise-identical results for every parallelism degree.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pilotopt/encoding.hpp"
#include "pilotopt/kmeans.hpp"
#include "pilotopt/metrics.hpp"
#include "pilotopt/topology.hpp"

namespace pilotopt {

// Thrown by solve_expa when the canonical search space exceeds the
// enumeration limit.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolveResult {
    PilotAssignment best;
    double best_objective = 0.0;
    std::vector<double> history;  // best fitness of the population, initial + per generation
    std::uint64_t evaluations = 0;
    double wall_time = 0.0;  // seconds
    std::string solver_name;
    std::uint64_t seed = 0;
};

// Fitness of a chromosome under the configured mode. Pure and reentrant;
// island workers evaluate through one shared instance.
class FitnessEvaluator {
public:
    explicit FitnessEvaluator(const FadingTensor& beta, FitnessMode mode = FitnessMode::SumSe,
                              double se_cap = kDefaultSeCap)
        : beta_(&beta), mode_(mode), se_cap_(se_cap) {}

    double operator()(const PilotAssignment& a) const {
        if (mode_ == FitnessMode::SumSe) return objective(*beta_, a, se_cap_);
        return -copilot_interference(*beta_, a);
    }

private:
    const FadingTensor* beta_;
    FitnessMode mode_;
    double se_cap_;
};

namespace detail {

class WallClock {
public:
    WallClock() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// One generational step of an island: rank members, copy min(E, n) elites,
// fill the remaining slots with roulette-selected parents recombined by PMX
// and perturbed by swap mutation, then re-evaluate every slot. Offspring
// overwrite exactly the member slots, so concurrent islands write disjoint
// ranges. Returns the number of fitness evaluations (= island size).
inline std::uint64_t evolve_island(const FitnessEvaluator& evaluate, const GAConfig& cfg,
                                   std::span<const std::size_t> members,
                                   const std::vector<PilotAssignment>& pop,
                                   const std::vector<double>& fit,
                                   std::vector<PilotAssignment>& next_pop,
                                   std::vector<double>& next_fit, RngStream& rng) {
    const std::size_t n = members.size();
    std::vector<double> local_fit(n);
    for (std::size_t t = 0; t < n; ++t) local_fit[t] = fit[members[t]];

    // Rank by fitness (desc), member index (asc) for deterministic ties.
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        if (local_fit[a] != local_fit[b]) return local_fit[a] > local_fit[b];
        return members[a] < members[b];
    });

    const std::size_t elite_n = std::min<std::size_t>(static_cast<std::size_t>(cfg.elite_count), n);
    std::vector<PilotAssignment> offspring;
    offspring.reserve(n);
    for (std::size_t e = 0; e < elite_n; ++e) offspring.push_back(pop[members[rank[e]]]);

    while (offspring.size() < n) {
        const auto parents = roulette_select(local_fit, 2, rng);
        auto [child_a, child_b] = pmx_crossover(pop[members[parents[0]]],
                                                pop[members[parents[1]]],
                                                cfg.crossover_prob, rng);
        offspring.push_back(swap_mutation(child_a, cfg.mutation_prob, rng));
        if (offspring.size() < n)
            offspring.push_back(swap_mutation(child_b, cfg.mutation_prob, rng));
    }

    for (std::size_t t = 0; t < n; ++t) {
        next_fit[members[t]] = evaluate(offspring[t]);
        next_pop[members[t]] = std::move(offspring[t]);
    }
    return n;
}

inline std::size_t best_index(std::span<const double> fit) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < fit.size(); ++i)
        if (fit[i] > fit[best]) best = i;
    return best;
}

// Shared driver for ga / skga / pkga. clustered = false runs the whole
// population as a single island, which makes solve_ga and solve_sk_ga with
// C = 1 consume identical RNG streams and return identical results.
// parallelism <= 1 evolves islands inline; otherwise min(P, C) workers pull
// island indices from an atomic counter.
inline SolveResult run_ga(const FadingTensor& beta, const GAConfig& cfg, bool clustered,
                          int parallelism, std::string solver_name) {
    cfg.validate();
    if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
    const WallClock clock;
    const int cells = beta.cells();
    const int pilots = beta.users_per_cell();
    const auto n = static_cast<std::size_t>(cfg.population_size);
    const FitnessEvaluator evaluate(beta, cfg.fitness_mode);

    SolveResult result;
    result.solver_name = std::move(solver_name);
    result.seed = cfg.seed;

    std::vector<PilotAssignment> pop;
    pop.reserve(n);
    std::vector<double> fit(n);
    {
        RngStream init_rng(derive_seed(cfg.seed, "init"));
        for (std::size_t i = 0; i < n; ++i) {
            pop.push_back(random_assignment(cells, pilots, init_rng));
            fit[i] = evaluate(pop.back());
        }
        result.evaluations += n;
    }

    std::size_t best = best_index(fit);
    result.best = pop[best];
    result.best_objective = fit[best];
    result.history.push_back(fit[best]);

    std::vector<std::vector<std::size_t>> islands;
    if (!clustered) {
        islands.emplace_back(n);
        std::iota(islands[0].begin(), islands[0].end(), std::size_t{0});
    }

    std::vector<PilotAssignment> next_pop(n);
    std::vector<double> next_fit(n);
    for (int g = 0; g < cfg.generations; ++g) {
        if (clustered && g % cfg.recluster_period == 0) {
            RngStream cluster_rng(derive_seed(cfg.seed, "cluster", static_cast<std::uint64_t>(g)));
            islands = partition_population(pop, fit, cfg.cluster_count, cluster_rng);
        }

        std::vector<std::uint64_t> island_evals(islands.size(), 0);
        auto evolve_one = [&](std::size_t c) {
            RngStream island_rng(
                derive_seed(cfg.seed, "evolve", static_cast<std::uint64_t>(g), c));
            island_evals[c] =
                evolve_island(evaluate, cfg, islands[c], pop, fit, next_pop, next_fit, island_rng);
        };

        const auto workers =
            std::min<std::size_t>(static_cast<std::size_t>(parallelism), islands.size());
        if (workers <= 1) {
            for (std::size_t c = 0; c < islands.size(); ++c) evolve_one(c);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (;;) {
                        const std::size_t c = next.fetch_add(1);
                        if (c >= islands.size()) break;
                        evolve_one(c);
                    }
                });
            }
            for (auto& t : pool) t.join();
        }

        for (std::uint64_t e : island_evals) result.evaluations += e;
        pop.swap(next_pop);
        fit.swap(next_fit);

        const std::size_t gen_best = best_index(fit);
        if (fit[gen_best] > result.best_objective) {
            result.best = pop[gen_best];
            result.best_objective = fit[gen_best];
        }
        result.history.push_back(fit[gen_best]);
    }

    result.wall_time = clock.seconds();
    return result;
}

}  // namespace detail

// Random pilot assignment baseline: one canonical draw, evaluated once. The
// draw comes from the same "init" substream the GA population starts from,
// so a GA with the same seed contains this baseline individual.
inline SolveResult solve_rpa(const FadingTensor& beta, std::uint64_t seed,
                             FitnessMode mode = FitnessMode::SumSe) {
    const detail::WallClock clock;
    RngStream rng(derive_seed(seed, "init"));
    SolveResult result;
    result.solver_name = "rpa";
    result.seed = seed;
    result.best = random_assignment(beta.cells(), beta.users_per_cell(), rng);
    result.best_objective = FitnessEvaluator(beta, mode)(result.best);
    result.history = {result.best_objective};
    result.evaluations = 1;
    result.wall_time = clock.seconds();
    return result;
}

// Exhaustive search over all canonical assignments in lexicographic order
// (rows 1..L-1, last row varies fastest). Ties break toward the
// lexicographically smallest assignment. Throws InfeasibleError when the
// space exceeds `limit`.
inline SolveResult solve_expa(const FadingTensor& beta, std::uint64_t limit = 1'000'000,
                              FitnessMode mode = FitnessMode::SumSe) {
    const detail::WallClock clock;
    const int cells = beta.cells();
    const int pilots = beta.users_per_cell();
    const BigInt space = search_space_size(cells, pilots);
    if (space > BigInt(limit))
        throw InfeasibleError("solve_expa: search space " + space.str() +
                              " exceeds enumeration limit " + std::to_string(limit));

    const FitnessEvaluator evaluate(beta, mode);
    SolveResult result;
    result.solver_name = "expa";
    result.seed = 0;

    PilotAssignment current(cells, pilots);
    for (;;) {
        const double value = evaluate(current);
        ++result.evaluations;
        if (result.evaluations == 1 || value > result.best_objective) {
            result.best = current;
            result.best_objective = value;
        }
        // Odometer advance: bump the last row; on wrap (back to identity)
        // carry into the previous row. Row 0 stays canonical.
        int row = cells - 1;
        while (row >= 1) {
            auto r = current.row(row);
            if (std::next_permutation(r.begin(), r.end())) break;
            --row;
        }
        if (row < 1) break;
    }

    result.history = {result.best_objective};
    result.wall_time = clock.seconds();
    return result;
}

// Generational GA with elitism, roulette selection, PMX crossover, and swap
// mutation over canonical assignments.
inline SolveResult solve_ga(const FadingTensor& beta, const GAConfig& cfg) {
    return detail::run_ga(beta, cfg, /*clustered=*/false, /*parallelism=*/1, "ga");
}

// Sequential K-means GA: every recluster_period generations the population is
// re-partitioned into cluster_count islands by k-means over fitness; islands
// evolve independently (selection, crossover, mutation and elitism are local)
// and merge back each generation.
inline SolveResult solve_sk_ga(const FadingTensor& beta, const GAConfig& cfg) {
    return detail::run_ga(beta, cfg, /*clustered=*/true, /*parallelism=*/1, "skga");
}

// Parallel K-means GA: identical algorithm to solve_sk_ga with island
// evolution distributed over up to `parallelism` workers. Results are
// bitwise-identical for every parallelism degree, including 1.
inline SolveResult solve_pk_ga(const FadingTensor& beta, const GAConfig& cfg, int parallelism) {
    return detail::run_ga(beta, cfg, /*clustered=*/true, parallelism, "pkga");
}

}  // namespace pilotopt
