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
// Lloyd's k-means with k-means++ seeding, used to partition GA populations
// into subpopulations by fitness.

#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pilotopt/encoding.hpp"
#include "pilotopt/rng.hpp"

namespace pilotopt {

struct ClusterModel {
    std::vector<std::vector<double>> centroids;  // C x d
    std::vector<int> labels;                     // per point, in {0..C-1}
    double inertia = 0.0;                        // total within-cluster squared distance
    std::vector<double> inertia_history;         // one entry per Lloyd iteration
};

namespace detail {

inline double dist_sq(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace detail

// Lloyd iterations from k-means++ seeding. Stops when the largest centroid
// movement drops below tol or after max_iter iterations. Empty clusters are
// repaired by stealing the point farthest from its centroid (only from
// clusters that keep at least one member), so no cluster ever ends empty.
inline ClusterModel kmeans(const std::vector<std::vector<double>>& points, int cluster_count,
                           RngStream& rng, int max_iter = 100, double tol = 1e-6) {
    const std::size_t n = points.size();
    if (cluster_count < 1) throw std::invalid_argument("kmeans: cluster_count must be >= 1");
    if (n < static_cast<std::size_t>(cluster_count))
        throw std::invalid_argument("kmeans: fewer points than clusters");
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("kmeans: ragged point dimensions");

    ClusterModel model;
    model.centroids.reserve(cluster_count);

    // k-means++ seeding: first centroid uniform, the rest proportional to the
    // squared distance from the nearest chosen centroid.
    model.centroids.push_back(points[rng.next_index(n)]);
    std::vector<double> d_sq(n);
    for (std::size_t i = 0; i < n; ++i)
        d_sq[i] = detail::dist_sq(points[i], model.centroids[0]);
    while (static_cast<int>(model.centroids.size()) < cluster_count) {
        double total = 0.0;
        for (double d : d_sq) total += d;
        std::size_t pick;
        if (total <= 0.0) {
            pick = rng.next_index(n);  // all remaining points coincide with centroids
        } else {
            const double u = rng.next_double() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d_sq[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        model.centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i)
            d_sq[i] = std::min(d_sq[i], detail::dist_sq(points[i], model.centroids.back()));
    }

    model.labels.assign(n, 0);
    std::vector<std::size_t> counts(cluster_count);
    std::vector<double> point_cost(n);

    for (int iter = 0; iter < max_iter; ++iter) {
        // Assignment step; ties go to the lowest cluster index.
        std::fill(counts.begin(), counts.end(), 0);
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = detail::dist_sq(points[i], model.centroids[0]);
            for (int c = 1; c < cluster_count; ++c) {
                const double d = detail::dist_sq(points[i], model.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            model.labels[i] = best;
            point_cost[i] = best_d;
            ++counts[best];
            inertia += best_d;
        }

        // Empty-cluster repair: hand each empty cluster the globally farthest
        // point whose donor cluster retains at least one member.
        for (int c = 0; c < cluster_count; ++c) {
            if (counts[c] != 0) continue;
            std::size_t steal = n;
            double worst = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[model.labels[i]] < 2) continue;
                if (point_cost[i] > worst) {
                    worst = point_cost[i];
                    steal = i;
                }
            }
            if (steal == n) throw std::runtime_error("kmeans: unable to repair empty cluster");
            --counts[model.labels[steal]];
            model.labels[steal] = c;
            counts[c] = 1;
            inertia -= point_cost[steal];
            point_cost[steal] = 0.0;
            model.centroids[c] = points[steal];
        }

        assert(model.inertia_history.empty() ||
               inertia <= model.inertia_history.back() * (1.0 + 1e-12) + 1e-12);
        model.inertia_history.push_back(inertia);

        // Update step: centroids move to the member means.
        std::vector<std::vector<double>> next(cluster_count, std::vector<double>(dim, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < dim; ++d)
                next[model.labels[i]][d] += points[i][d];
        double max_move_sq = 0.0;
        for (int c = 0; c < cluster_count; ++c) {
            for (std::size_t d = 0; d < dim; ++d) next[c][d] /= static_cast<double>(counts[c]);
            max_move_sq = std::max(max_move_sq, detail::dist_sq(next[c], model.centroids[c]));
            model.centroids[c] = std::move(next[c]);
        }
        if (std::sqrt(max_move_sq) < tol) break;
    }

    model.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        model.inertia += detail::dist_sq(points[i], model.centroids[model.labels[i]]);
    return model;
}

// Splits a GA population into cluster_count islands by clustering the scalar
// fitness values (feature dimension 1). Returns ascending member indices per
// island; islands are pairwise disjoint, cover the population, and are all
// non-empty.
inline std::vector<std::vector<std::size_t>> partition_population(
    const std::vector<PilotAssignment>& population, std::span<const double> fitness,
    int cluster_count, RngStream& rng) {
    if (population.size() != fitness.size())
        throw std::invalid_argument("partition_population: fitness size mismatch");
    if (population.size() < static_cast<std::size_t>(cluster_count))
        throw std::invalid_argument("partition_population: population smaller than cluster count");

    std::vector<std::vector<double>> features(fitness.size());
    for (std::size_t i = 0; i < fitness.size(); ++i) features[i] = {fitness[i]};
    const ClusterModel model = kmeans(features, cluster_count, rng);

    std::vector<std::vector<std::size_t>> islands(cluster_count);
    for (std::size_t i = 0; i < model.labels.size(); ++i)
        islands[model.labels[i]].push_back(i);
    return islands;
}

}  // namespace pilotopt
