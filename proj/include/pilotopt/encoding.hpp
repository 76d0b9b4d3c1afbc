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
// Chromosome representation for pilot assignments and the permutation-safe
// genetic operators (PMX crossover, swap mutation, roulette selection).

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pilotopt/rng.hpp"

namespace pilotopt {

using BigInt = boost::multiprecision::cpp_int;

enum class FitnessMode {
    SumSe,                // maximize system sum spectral efficiency
    ClusterInterference,  // maximize negated co-pilot cluster interference
};

inline std::string to_string(FitnessMode mode) {
    return mode == FitnessMode::SumSe ? "sum-se" : "cluster-interference";
}

inline FitnessMode fitness_mode_from_string(const std::string& s) {
    if (s == "sum-se" || s == "sumse") return FitnessMode::SumSe;
    if (s == "cluster-interference" || s == "interference")
        return FitnessMode::ClusterInterference;
    throw std::invalid_argument("unknown fitness mode: " + s);
}

// Evolutionary hyperparameters. Defaults mirror the standard benchmark setup
// (population 120, 20 generations, p_c = 0.9, p_m = 0.02, 5 clusters,
// re-clustering every 3 generations, 2 elites).
struct GAConfig {
    int population_size = 120;
    int generations = 20;
    double crossover_prob = 0.9;
    double mutation_prob = 0.02;
    int elite_count = 2;
    int cluster_count = 5;
    int recluster_period = 3;
    FitnessMode fitness_mode = FitnessMode::SumSe;
    std::uint64_t seed = 1;

    void validate() const {
        if (population_size < 1) throw std::invalid_argument("population_size must be >= 1");
        if (generations < 0) throw std::invalid_argument("generations must be >= 0");
        if (crossover_prob < 0.0 || crossover_prob > 1.0)
            throw std::invalid_argument("crossover_prob must be in [0, 1]");
        if (mutation_prob < 0.0 || mutation_prob > 1.0)
            throw std::invalid_argument("mutation_prob must be in [0, 1]");
        if (elite_count < 1 || elite_count >= population_size)
            throw std::invalid_argument("elite_count must satisfy 1 <= E < N");
        if (cluster_count < 1 || cluster_count > population_size)
            throw std::invalid_argument("cluster_count must satisfy 1 <= C <= N");
        if (recluster_period < 1) throw std::invalid_argument("recluster_period must be >= 1");
    }
};

// One pilot assignment for the whole system: row j maps user u of cell j to a
// pilot index. Every row is a permutation of {0..K-1}; the canonical form
// keeps row 0 as the identity, which removes the global pilot-relabeling
// symmetry and shrinks the search space to exactly (K!)^(L-1).
class PilotAssignment {
public:
    PilotAssignment() = default;

    // Identity assignment: user u holds pilot u in every cell.
    PilotAssignment(int cells, int pilots) : cells_(cells), pilots_(pilots) {
        if (cells < 1 || pilots < 1)
            throw std::invalid_argument("PilotAssignment needs cells >= 1 and pilots >= 1");
        data_.resize(static_cast<std::size_t>(cells) * pilots);
        for (int j = 0; j < cells; ++j)
            std::iota(row(j).begin(), row(j).end(), 0);
    }

    int cells() const { return cells_; }
    int pilots() const { return pilots_; }

    int pilot(int cell, int user) const {
        return data_[static_cast<std::size_t>(cell) * pilots_ + user];
    }
    void set_pilot(int cell, int user, int p) {
        data_[static_cast<std::size_t>(cell) * pilots_ + user] = p;
    }

    std::span<const int> row(int cell) const {
        return {data_.data() + static_cast<std::size_t>(cell) * pilots_,
                static_cast<std::size_t>(pilots_)};
    }
    std::span<int> row(int cell) {
        return {data_.data() + static_cast<std::size_t>(cell) * pilots_,
                static_cast<std::size_t>(pilots_)};
    }

    const std::vector<int>& flat() const { return data_; }

    bool rows_are_permutations() const {
        std::vector<char> seen(pilots_);
        for (int j = 0; j < cells_; ++j) {
            std::fill(seen.begin(), seen.end(), 0);
            for (int p : row(j)) {
                if (p < 0 || p >= pilots_ || seen[p]) return false;
                seen[p] = 1;
            }
        }
        return true;
    }

    bool is_canonical() const {
        if (cells_ < 1) return false;
        for (int u = 0; u < pilots_; ++u)
            if (pilot(0, u) != u) return false;
        return rows_are_permutations();
    }

    // holders[j * K + p] = user of cell j currently holding pilot p.
    std::vector<int> pilot_holders() const {
        std::vector<int> holders(data_.size());
        for (int j = 0; j < cells_; ++j)
            for (int u = 0; u < pilots_; ++u)
                holders[static_cast<std::size_t>(j) * pilots_ + pilot(j, u)] = u;
        return holders;
    }

    // Lexicographic order on (shape, row-major contents); used for
    // reproducible tie-breaking in the exhaustive solver.
    auto operator<=>(const PilotAssignment&) const = default;

private:
    int cells_ = 0;
    int pilots_ = 0;
    std::vector<int> data_;
};

// Canonical random assignment: row 0 identity, remaining rows independent
// uniform permutations (inside-out Fisher-Yates).
inline PilotAssignment random_assignment(int cells, int pilots, RngStream& rng) {
    PilotAssignment a(cells, pilots);
    for (int j = 1; j < cells; ++j) {
        auto r = a.row(j);
        for (int i = pilots - 1; i >= 1; --i) {
            const auto k = static_cast<int>(rng.next_index(static_cast<std::size_t>(i) + 1));
            std::swap(r[i], r[k]);
        }
    }
    return a;
}

// Exact size of the canonical search space, (K!)^(L-1).
inline BigInt search_space_size(int cells, int pilots) {
    if (cells < 1 || pilots < 1)
        throw std::invalid_argument("search_space_size needs cells >= 1 and pilots >= 1");
    BigInt f = 1;
    for (int i = 2; i <= pilots; ++i) f *= i;
    return boost::multiprecision::pow(f, static_cast<unsigned>(cells - 1));
}

// Applies the global pilot relabeling that maps row 0 back to the identity.
// The relabeling preserves the pilot-sharing pattern, hence the objective.
inline PilotAssignment canonicalized(const PilotAssignment& a) {
    std::vector<int> relabel(a.pilots());
    for (int u = 0; u < a.pilots(); ++u) relabel[a.pilot(0, u)] = u;
    PilotAssignment out = a;
    for (int j = 0; j < a.cells(); ++j)
        for (int u = 0; u < a.pilots(); ++u)
            out.set_pilot(j, u, relabel[a.pilot(j, u)]);
    return out;
}

// Partially-mapped crossover of one row pair with explicit cut points
// [cut_lo, cut_hi). child_a inherits the segment of b (and vice versa);
// positions outside the segment keep the other parent's gene, chased through
// the segment mapping until it is conflict-free.
inline void pmx_rows(std::span<const int> a, std::span<const int> b,
                     int cut_lo, int cut_hi,
                     std::span<int> child_a, std::span<int> child_b) {
    const int k = static_cast<int>(a.size());
    auto fill = [k, cut_lo, cut_hi](std::span<const int> outside, std::span<const int> segment,
                                    std::span<int> child) {
        std::vector<int> seg_pos(k, -1);
        for (int i = cut_lo; i < cut_hi; ++i) {
            child[i] = segment[i];
            seg_pos[segment[i]] = i;
        }
        for (int i = 0; i < k; ++i) {
            if (i >= cut_lo && i < cut_hi) continue;
            int v = outside[i];
            while (seg_pos[v] != -1) v = outside[seg_pos[v]];
            child[i] = v;
        }
    };
    fill(a, b, child_a);
    fill(b, a, child_b);
}

// Chromosome-level PMX. One crossover coin is tossed per pair; when it fires,
// every non-canonical row is recombined with its own pair of cut points.
// Row 0 stays the identity in both children.
inline std::pair<PilotAssignment, PilotAssignment> pmx_crossover(
    const PilotAssignment& a, const PilotAssignment& b,
    double crossover_prob, RngStream& rng) {
    if (a.cells() != b.cells() || a.pilots() != b.pilots())
        throw std::invalid_argument("pmx_crossover: parents differ in shape");
    PilotAssignment child_a = a;
    PilotAssignment child_b = b;
    if (rng.next_double() >= crossover_prob) return {std::move(child_a), std::move(child_b)};
    const int k = a.pilots();
    for (int j = 1; j < a.cells(); ++j) {
        const auto c1 = static_cast<int>(rng.next_index(static_cast<std::size_t>(k) + 1));
        const auto c2 = static_cast<int>(rng.next_index(static_cast<std::size_t>(k) + 1));
        pmx_rows(a.row(j), b.row(j), std::min(c1, c2), std::max(c1, c2),
                 child_a.row(j), child_b.row(j));
    }
    return {std::move(child_a), std::move(child_b)};
}

// Per-gene swap mutation on the non-canonical rows: each position fires with
// probability mutation_prob and is swapped with a uniformly chosen position
// of the same row (possibly itself). Permutations are closed under swaps.
// swap_events, when given, counts how many times the mutation coin fired.
inline PilotAssignment swap_mutation(const PilotAssignment& x, double mutation_prob,
                                     RngStream& rng, int* swap_events = nullptr) {
    PilotAssignment out = x;
    const int k = x.pilots();
    for (int j = 1; j < x.cells(); ++j) {
        auto r = out.row(j);
        for (int g = 0; g < k; ++g) {
            if (rng.next_double() < mutation_prob) {
                const auto partner = static_cast<int>(rng.next_index(static_cast<std::size_t>(k)));
                std::swap(r[g], r[partner]);
                if (swap_events) ++*swap_events;
            }
        }
    }
    return out;
}

// Roulette-wheel selection over fitness values to MAXIMIZE. Weights are
// min-shifted with a small floor, delta = 1e-9 of the fitness range, so
// negative fitness is handled and the wheel never has zero total weight
// unless all values are equal, in which case selection is uniform.
inline std::vector<std::size_t> roulette_select(std::span<const double> fitness,
                                                std::size_t count, RngStream& rng) {
    const std::size_t n = fitness.size();
    if (n == 0) throw std::invalid_argument("roulette_select: empty population");
    double lo = fitness[0], hi = fitness[0];
    for (double f : fitness) {
        if (!std::isfinite(f)) throw std::invalid_argument("roulette_select: non-finite fitness");
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    const double delta = 1e-9 * (hi - lo);
    std::vector<double> cumulative(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += fitness[i] - lo + delta;
        cumulative[i] = total;
    }
    std::vector<std::size_t> picks(count);
    for (std::size_t c = 0; c < count; ++c) {
        if (total <= 0.0) {
            picks[c] = rng.next_index(n);
            continue;
        }
        const double u = rng.next_double() * total;
        picks[c] = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (picks[c] >= n) picks[c] = n - 1;  // guards u == total edge
    }
    return picks;
}

}  // namespace pilotopt
