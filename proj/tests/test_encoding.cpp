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

#include <cmath>
#include <string>
#include <vector>

#include "pilotopt/encoding.hpp"
#include "pilotopt/metrics.hpp"

using namespace pilotopt;

namespace {

// Independent decimal-digit big integer, used only as an oracle for
// search_space_size. Digits are little-endian base 10.
std::vector<int> digits_mul_small(std::vector<int> digits, int factor) {
    int carry = 0;
    for (int& d : digits) {
        const int v = d * factor + carry;
        d = v % 10;
        carry = v / 10;
    }
    while (carry > 0) {
        digits.push_back(carry % 10);
        carry /= 10;
    }
    return digits;
}

std::vector<int> digits_mul(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    int carry = 0;
    for (int& d : out) {
        const int v = d + carry;
        d = v % 10;
        carry = v / 10;
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

std::string factorial_power_string(int k, int exponent) {
    std::vector<int> factorial{1};
    for (int i = 2; i <= k; ++i) factorial = digits_mul_small(factorial, i);
    std::vector<int> result{1};
    for (int e = 0; e < exponent; ++e) result = digits_mul(result, factorial);
    std::string s;
    for (auto it = result.rbegin(); it != result.rend(); ++it) s += static_cast<char>('0' + *it);
    return s;
}

PilotAssignment from_rows(const std::vector<std::vector<int>>& rows) {
    PilotAssignment a(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (std::size_t j = 0; j < rows.size(); ++j)
        for (std::size_t u = 0; u < rows[j].size(); ++u)
            a.set_pilot(static_cast<int>(j), static_cast<int>(u), rows[j][u]);
    return a;
}

FadingTensor random_tensor(int cells, int users, std::uint64_t seed) {
    FadingTensor beta(cells, users);
    RngStream rng(seed);
    for (double& b : beta.flat()) b = 0.05 + rng.next_double();
    return beta;
}

}  // namespace

TEST_CASE("random assignments are canonical permutations", "[encoding]") {
    RngStream rng(3);
    const PilotAssignment one = random_assignment(1, 5, rng);
    for (int u = 0; u < 5; ++u) REQUIRE(one.pilot(0, u) == u);

    for (int trial = 0; trial < 200; ++trial) {
        const PilotAssignment a = random_assignment(4, 7, rng);
        REQUIRE(a.is_canonical());
        REQUIRE(a.rows_are_permutations());
    }
}

TEST_CASE("second row of a 2x2 draw is identity about half the time", "[encoding]") {
    RngStream rng(17);
    const int n = 10000;
    int identity_count = 0;
    for (int t = 0; t < n; ++t) {
        const PilotAssignment a = random_assignment(2, 2, rng);
        if (a.pilot(1, 0) == 0) ++identity_count;
    }
    const double se = std::sqrt(0.25 * n);
    REQUIRE(std::fabs(identity_count - n / 2.0) < 3.0 * se);
}

TEST_CASE("search space size matches factorial powers", "[encoding]") {
    REQUIRE(search_space_size(2, 3) == 6);
    REQUIRE(search_space_size(3, 3) == 36);
    REQUIRE(search_space_size(1, 10) == 1);

    // against an independent factorial for L = 2
    std::uint64_t factorial = 1;
    for (int k = 1; k <= 10; ++k) {
        factorial *= static_cast<std::uint64_t>(k);
        REQUIRE(search_space_size(2, k) == BigInt(factorial));
    }
}

TEST_CASE("the 16-cell 60-user space matches an independent big integer", "[encoding]") {
    const std::string value = search_space_size(16, 60).str();
    REQUIRE(value == factorial_power_string(60, 15));

    // log-factorial cross-check: digit count and leading digits
    const double log10_value = 15.0 * std::lgamma(61.0) / std::log(10.0);
    REQUIRE(value.size() == static_cast<std::size_t>(std::floor(log10_value)) + 1);
    const double mantissa = std::pow(10.0, log10_value - std::floor(log10_value));
    const std::string leading = std::to_string(static_cast<long long>(std::round(mantissa * 1e7)));
    REQUIRE(value.substr(0, 8) == leading);
}

TEST_CASE("pmx rows reproduce the hand-traced mapping", "[encoding]") {
    const std::vector<int> a{0, 1, 2, 3, 4};
    const std::vector<int> b{4, 3, 2, 1, 0};
    std::vector<int> child_a(5), child_b(5);
    pmx_rows(a, b, 1, 3, child_a, child_b);
    REQUIRE(child_a == std::vector<int>{0, 3, 2, 1, 4});
    REQUIRE(child_b == std::vector<int>{4, 1, 2, 3, 0});
}

TEST_CASE("pmx crossover keeps parents on identical input or zero rate", "[encoding]") {
    RngStream rng(8);
    const PilotAssignment p = random_assignment(3, 6, rng);
    auto [c1, c2] = pmx_crossover(p, p, 1.0, rng);
    REQUIRE(c1 == p);
    REQUIRE(c2 == p);

    const PilotAssignment q = random_assignment(3, 6, rng);
    auto [d1, d2] = pmx_crossover(p, q, 0.0, rng);
    REQUIRE(d1 == p);
    REQUIRE(d2 == q);

    const PilotAssignment r = random_assignment(2, 6, rng);
    REQUIRE_THROWS_AS(pmx_crossover(p, r, 0.5, rng), std::invalid_argument);
}

TEST_CASE("swap mutation honors the rate and closure", "[encoding]") {
    RngStream rng(21);
    const PilotAssignment x = random_assignment(3, 8, rng);
    REQUIRE(swap_mutation(x, 0.0, rng) == x);

    // K = 2, p_m = 1: always a permutation, both outcomes reachable
    const PilotAssignment tiny = random_assignment(2, 2, rng);
    bool saw_swapped = false, saw_restored = false;
    for (int t = 0; t < 64; ++t) {
        const PilotAssignment m = swap_mutation(tiny, 1.0, rng);
        REQUIRE(m.rows_are_permutations());
        if (m == tiny)
            saw_restored = true;
        else
            saw_swapped = true;
    }
    REQUIRE(saw_swapped);
    REQUIRE(saw_restored);
}

TEST_CASE("swap events follow the binomial expectation", "[encoding]") {
    RngStream rng(33);
    const double pm = 0.02;
    const int cells = 3, pilots = 10, trials = 10000;
    const PilotAssignment x = random_assignment(cells, pilots, rng);
    int events = 0;
    for (int t = 0; t < trials; ++t) swap_mutation(x, pm, rng, &events);
    const double genes = static_cast<double>(trials) * (cells - 1) * pilots;
    const double expected = pm * genes;
    const double se = std::sqrt(genes * pm * (1.0 - pm));
    REQUIRE(std::fabs(events - expected) < 3.0 * se);
}

TEST_CASE("roulette selection handles degenerate wheels", "[encoding]") {
    RngStream rng(44);
    const std::vector<double> single{3.0};
    for (int t = 0; t < 10; ++t) REQUIRE(roulette_select(single, 1, rng)[0] == 0);

    // shifted weights {delta, 2 + delta}: the low-fitness individual is
    // selected with probability ~ 5e-10
    const std::vector<double> two{1.0, 3.0};
    int low_picks = 0;
    for (int t = 0; t < 10000; ++t) low_picks += roulette_select(two, 1, rng)[0] == 0 ? 1 : 0;
    REQUIRE(low_picks <= 2);

    REQUIRE_THROWS_AS(roulette_select(std::vector<double>{}, 1, rng), std::invalid_argument);
    REQUIRE_THROWS_AS(roulette_select(std::vector<double>{1.0, std::nan("")}, 1, rng),
                      std::invalid_argument);
}

TEST_CASE("equal fitness selects uniformly", "[encoding]") {
    RngStream rng(4711);
    const std::vector<double> flat(4, 2.5);
    std::vector<int> counts(4, 0);
    const int n = 10000;
    for (int t = 0; t < n; ++t) ++counts[roulette_select(flat, 1, rng)[0]];
    double chi_sq = 0.0;
    for (int c : counts) chi_sq += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
    REQUIRE(chi_sq < 16.27);  // chi^2_{3, 0.999}
}

TEST_CASE("operator chains preserve the chromosome invariants", "[encoding]") {
    RngStream rng(555);
    PilotAssignment a = random_assignment(4, 6, rng);
    PilotAssignment b = random_assignment(4, 6, rng);
    for (int step = 0; step < 1000; ++step) {
        auto [c1, c2] = pmx_crossover(a, b, 0.9, rng);
        a = swap_mutation(c1, 0.1, rng);
        b = swap_mutation(c2, 0.1, rng);
        REQUIRE(a.is_canonical());
        REQUIRE(b.is_canonical());
    }
}

TEST_CASE("canonicalization preserves the objective", "[encoding]") {
    const FadingTensor beta = random_tensor(3, 5, 808);
    RngStream rng(909);
    for (int t = 0; t < 20; ++t) {
        // build a non-canonical assignment by relabeling all rows of a
        // canonical one through a random pilot permutation
        const PilotAssignment canonical = random_assignment(3, 5, rng);
        PilotAssignment relabel_source = random_assignment(2, 5, rng);
        const auto sigma = relabel_source.row(1);
        PilotAssignment shuffled = canonical;
        for (int j = 0; j < canonical.cells(); ++j)
            for (int u = 0; u < canonical.pilots(); ++u)
                shuffled.set_pilot(j, u, sigma[canonical.pilot(j, u)]);

        const PilotAssignment restored = canonicalized(shuffled);
        REQUIRE(restored.is_canonical());
        REQUIRE(objective(beta, shuffled) == objective(beta, restored));
        REQUIRE(restored == canonical);
    }
}

TEST_CASE("assignment ordering is row-major lexicographic", "[encoding]") {
    const PilotAssignment a = from_rows({{0, 1}, {0, 1}});
    const PilotAssignment b = from_rows({{0, 1}, {1, 0}});
    REQUIRE(a < b);
}
