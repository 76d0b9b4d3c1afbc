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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pilotopt/solvers.hpp"

using namespace pilotopt;

namespace {

FadingTensor random_tensor(int cells, int users, std::uint64_t seed) {
    FadingTensor beta(cells, users);
    RngStream rng(seed);
    for (double& b : beta.flat()) b = 0.05 + rng.next_double();
    return beta;
}

// Test-local exhaustive enumerator for two-cell systems, independent of
// solve_expa's odometer.
double brute_force_optimum_2cell(const FadingTensor& beta) {
    const int k = beta.users_per_cell();
    std::vector<int> row(k);
    std::iota(row.begin(), row.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        PilotAssignment a(2, k);
        for (int u = 0; u < k; ++u) a.set_pilot(1, u, row[u]);
        best = std::max(best, objective(beta, a));
    } while (std::next_permutation(row.begin(), row.end()));
    return best;
}

GAConfig small_config(int population, int generations, std::uint64_t seed) {
    GAConfig cfg;
    cfg.population_size = population;
    cfg.generations = generations;
    cfg.seed = seed;
    return cfg;
}

void require_non_decreasing(const std::vector<double>& history) {
    for (std::size_t i = 1; i < history.size(); ++i) REQUIRE(history[i] >= history[i - 1]);
}

}  // namespace

TEST_CASE("rpa on a single cell scores the capped objective", "[solvers]") {
    const FadingTensor beta(1, 5, 0.3);
    const SolveResult result = solve_rpa(beta, 123);
    REQUIRE(result.best_objective == 5.0 * kDefaultSeCap);
    REQUIRE(result.evaluations == 1);
    REQUIRE(result.history == std::vector<double>{result.best_objective});

    const SolveResult again = solve_rpa(beta, 123);
    REQUIRE(again.best == result.best);
    REQUIRE(again.best_objective == result.best_objective);
}

TEST_CASE("rpa never beats the exhaustive optimum", "[solvers]") {
    const FadingTensor beta = random_tensor(2, 3, 50);
    const SolveResult optimum = solve_expa(beta);
    double mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const SolveResult r = solve_rpa(beta, seed);
        REQUIRE(r.best_objective <= optimum.best_objective + 1e-12);
        mean += r.best_objective;
    }
    REQUIRE(mean / 100.0 <= optimum.best_objective);
}

TEST_CASE("expa enumerates exactly the canonical space", "[solvers]") {
    REQUIRE(solve_expa(random_tensor(2, 2, 1)).evaluations == 2);
    REQUIRE(solve_expa(random_tensor(3, 3, 2)).evaluations == 36);
    REQUIRE(solve_expa(random_tensor(1, 4, 3)).evaluations == 1);
}

TEST_CASE("expa finds the hand-checked pairing on the crafted tensor", "[solvers]") {
    FadingTensor beta(2, 2);
    beta(0, 0, 0) = 1.0;
    beta(0, 0, 1) = 0.8;
    beta(1, 1, 0) = 1.0;
    beta(1, 1, 1) = 1.0;
    beta(0, 1, 0) = 0.5;
    beta(0, 1, 1) = 0.1;
    beta(1, 0, 0) = 0.3;
    beta(1, 0, 1) = 0.2;
    const SolveResult result = solve_expa(beta);
    // swapped second row pairs strong own-signals with weak cross-gains
    REQUIRE(result.best.pilot(1, 0) == 1);
    REQUIRE(result.best.pilot(1, 1) == 0);
}

TEST_CASE("expa agrees with an independent enumerator", "[solvers]") {
    const FadingTensor beta = random_tensor(2, 4, 60);
    const SolveResult result = solve_expa(beta);
    REQUIRE(result.best_objective ==
            Catch::Approx(brute_force_optimum_2cell(beta)).epsilon(1e-13));
    REQUIRE(result.evaluations == 24);
}

TEST_CASE("expa breaks ties toward the lexicographically smallest assignment", "[solvers]") {
    const FadingTensor uniform(3, 2, 0.5);  // every assignment scores the same
    const SolveResult result = solve_expa(uniform);
    REQUIRE(result.best == PilotAssignment(3, 2));
}

TEST_CASE("expa refuses oversized spaces", "[solvers]") {
    const FadingTensor beta = random_tensor(3, 4, 70);  // 24^2 = 576
    REQUIRE_THROWS_AS(solve_expa(beta, 100), InfeasibleError);
    REQUIRE(solve_expa(beta, 576).evaluations == 576);
}

TEST_CASE("ga with zero generations reports the best initial individual", "[solvers]") {
    const FadingTensor beta = random_tensor(3, 4, 80);
    const GAConfig cfg = small_config(20, 0, 5);
    const SolveResult result = solve_ga(beta, cfg);
    REQUIRE(result.evaluations == 20);
    REQUIRE(result.history.size() == 1);

    // replay the init substream
    RngStream init(derive_seed(5, "init"));
    double best = -1.0;
    for (int i = 0; i < 20; ++i)
        best = std::max(best, objective(beta, random_assignment(3, 4, init)));
    REQUIRE(result.best_objective == best);
}

TEST_CASE("ga accounting and monotone history", "[solvers]") {
    const FadingTensor beta = random_tensor(3, 4, 90);
    const GAConfig cfg = small_config(30, 12, 6);
    const SolveResult result = solve_ga(beta, cfg);
    REQUIRE(result.evaluations == 30ULL * 13ULL);  // N * (T + 1)
    REQUIRE(result.history.size() == 13);
    require_non_decreasing(result.history);
    REQUIRE(result.best_objective == result.history.back());
    REQUIRE(result.best.is_canonical());
    REQUIRE(result.solver_name == "ga");
}

TEST_CASE("ga matches the exhaustive optimum on small instances", "[solvers]") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const FadingTensor beta = random_tensor(2, 3, 100 + seed);
        const double optimum = solve_expa(beta).best_objective;
        GAConfig cfg = small_config(30, 30, seed);
        const SolveResult result = solve_ga(beta, cfg);
        if (std::fabs(result.best_objective - optimum) <= 1e-9 * std::fabs(optimum)) ++hits;
        require_non_decreasing(result.history);
    }
    REQUIRE(hits >= 9);
}

TEST_CASE("max over 50 ga seeds equals the optimum", "[solvers]") {
    const FadingTensor beta = random_tensor(3, 3, 111);  // space 36
    const double optimum = solve_expa(beta).best_objective;
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
        best = std::max(best, solve_ga(beta, small_config(20, 10, seed)).best_objective);
    REQUIRE(best == Catch::Approx(optimum).epsilon(1e-12));
}

TEST_CASE("ga dominates the rpa baseline drawn from the same stream", "[solvers]") {
    const FadingTensor beta = random_tensor(4, 5, 120);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const SolveResult baseline = solve_rpa(beta, seed);
        const SolveResult evolved = solve_ga(beta, small_config(25, 8, seed));
        REQUIRE(evolved.best_objective >= baseline.best_objective);
    }
}

TEST_CASE("skga with one cluster degenerates to the plain ga", "[solvers]") {
    const FadingTensor beta = random_tensor(3, 4, 130);
    GAConfig cfg = small_config(24, 15, 9);
    cfg.cluster_count = 1;
    const SolveResult ga = solve_ga(beta, cfg);
    const SolveResult sk = solve_sk_ga(beta, cfg);
    REQUIRE(sk.best == ga.best);
    REQUIRE(sk.best_objective == ga.best_objective);
    REQUIRE(sk.history == ga.history);
    REQUIRE(sk.evaluations == ga.evaluations);
}

TEST_CASE("skga matches the exhaustive optimum on small instances", "[solvers]") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const FadingTensor beta = random_tensor(2, 3, 140 + seed);
        const double optimum = solve_expa(beta).best_objective;
        GAConfig cfg = small_config(30, 30, seed);
        const SolveResult result = solve_sk_ga(beta, cfg);
        if (std::fabs(result.best_objective - optimum) <= 1e-9 * std::fabs(optimum)) ++hits;
        require_non_decreasing(result.history);
        REQUIRE(result.evaluations == 30ULL * 31ULL);
    }
    REQUIRE(hits >= 9);
}

TEST_CASE("pkga output is independent of the parallelism degree", "[solvers]") {
    const FadingTensor beta = random_tensor(4, 6, 150);
    GAConfig cfg = small_config(40, 10, 77);
    cfg.cluster_count = 4;
    const SolveResult sk = solve_sk_ga(beta, cfg);
    for (int parallelism : {1, 2, 8}) {
        const SolveResult pk = solve_pk_ga(beta, cfg, parallelism);
        REQUIRE(pk.best == sk.best);
        REQUIRE(pk.best_objective == sk.best_objective);
        REQUIRE(pk.history == sk.history);
        REQUIRE(pk.evaluations == sk.evaluations);
    }
    REQUIRE_THROWS_AS(solve_pk_ga(beta, cfg, 0), std::invalid_argument);
}

TEST_CASE("cluster-interference mode maximizes the negated score", "[solvers]") {
    const FadingTensor beta = random_tensor(3, 4, 160);
    GAConfig cfg = small_config(30, 20, 3);
    cfg.fitness_mode = FitnessMode::ClusterInterference;
    const SolveResult evolved = solve_sk_ga(beta, cfg);
    const SolveResult baseline = solve_rpa(beta, 3, FitnessMode::ClusterInterference);
    REQUIRE(evolved.best_objective >= baseline.best_objective);
    REQUIRE(evolved.best_objective == -copilot_interference(beta, evolved.best));
    require_non_decreasing(evolved.history);
}

TEST_CASE("solver configs are validated", "[solvers]") {
    const FadingTensor beta = random_tensor(2, 3, 170);
    GAConfig bad = small_config(10, 5, 1);
    bad.elite_count = 10;
    REQUIRE_THROWS_AS(solve_ga(beta, bad), std::invalid_argument);
    bad = small_config(10, 5, 1);
    bad.cluster_count = 11;
    REQUIRE_THROWS_AS(solve_sk_ga(beta, bad), std::invalid_argument);
    bad = small_config(10, 5, 1);
    bad.crossover_prob = 1.5;
    REQUIRE_THROWS_AS(solve_ga(beta, bad), std::invalid_argument);
}
