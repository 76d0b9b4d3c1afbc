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
// Quality measures for pilot assignments: the large-antenna-limit SINR and
// spectral efficiency, the finite-antenna Monte-Carlo SINR, the sum-rate
// objective maximized by all solvers, and the cluster-interference metric.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pilotopt/encoding.hpp"
#include "pilotopt/topology.hpp"

namespace pilotopt {

// Spectral efficiency assigned to interference-free users (empty SINR
// denominator), keeping objectives finite and totally ordered.
inline constexpr double kDefaultSeCap = 30.0;  // bits/s/Hz

namespace detail {

inline void check_metric_args(const FadingTensor& beta, const PilotAssignment& assignment,
                              int cell, int pilot) {
    if (assignment.cells() != beta.cells() || assignment.pilots() != beta.users_per_cell())
        throw std::invalid_argument("assignment shape does not match fading tensor");
    if (cell < 0 || cell >= beta.cells()) throw std::out_of_range("cell index out of range");
    if (pilot < 0 || pilot >= beta.users_per_cell()) throw std::out_of_range("pilot index out of range");
}

// Limit SINR for the user of `cell` holding `pilot`, given the per-cell
// holders of that pilot. Infinite when no other cell interferes.
inline double limit_sinr(const FadingTensor& beta, std::span<const int> holders,
                         int cell, int pilot) {
    const int pilots = beta.users_per_cell();
    const int own_user = holders[static_cast<std::size_t>(cell) * pilots + pilot];
    const double own = beta(cell, cell, own_user);
    double interference = 0.0;
    for (int j = 0; j < beta.cells(); ++j) {
        if (j == cell) continue;
        const int v = holders[static_cast<std::size_t>(j) * pilots + pilot];
        const double cross = beta(cell, j, v);
        interference += cross * cross;
    }
    if (interference == 0.0) return std::numeric_limits<double>::infinity();
    return own * own / interference;
}

}  // namespace detail

// Large-antenna-limit uplink SINR of the user holding `pilot` in `cell`:
// beta_own^2 over the sum of squared cross-cell betas of the co-pilot users.
// Returns +infinity when the denominator is empty (single-cell systems).
inline double asymptotic_sinr(const FadingTensor& beta, const PilotAssignment& assignment,
                              int cell, int pilot) {
    detail::check_metric_args(beta, assignment, cell, pilot);
    const auto holders = assignment.pilot_holders();
    return detail::limit_sinr(beta, holders, cell, pilot);
}

// Uplink spectral efficiency log2(1 + SINR); infinite SINR maps to se_cap.
inline double user_se(const FadingTensor& beta, const PilotAssignment& assignment,
                      int cell, int pilot, double se_cap = kDefaultSeCap) {
    const double sinr = asymptotic_sinr(beta, assignment, cell, pilot);
    if (std::isinf(sinr)) return se_cap;
    return std::log2(1.0 + sinr);
}

// Per-user spectral efficiencies and their total, indexed by (cell, user).
struct SeReport {
    int cells = 0;
    int users_per_cell = 0;
    std::vector<double> per_user_se;  // cell-major
    double sum_se = 0.0;

    double se(int cell, int user) const {
        return per_user_se[static_cast<std::size_t>(cell) * users_per_cell + user];
    }
};

inline SeReport sum_se(const FadingTensor& beta, const PilotAssignment& assignment,
                       double se_cap = kDefaultSeCap) {
    if (assignment.cells() != beta.cells() || assignment.pilots() != beta.users_per_cell())
        throw std::invalid_argument("assignment shape does not match fading tensor");
    const auto holders = assignment.pilot_holders();
    SeReport report;
    report.cells = beta.cells();
    report.users_per_cell = beta.users_per_cell();
    report.per_user_se.resize(static_cast<std::size_t>(report.cells) * report.users_per_cell);
    for (int i = 0; i < report.cells; ++i) {
        for (int u = 0; u < report.users_per_cell; ++u) {
            const int p = assignment.pilot(i, u);
            const double sinr = detail::limit_sinr(beta, holders, i, p);
            const double se = std::isinf(sinr) ? se_cap : std::log2(1.0 + sinr);
            report.per_user_se[static_cast<std::size_t>(i) * report.users_per_cell + u] = se;
            report.sum_se += se;
        }
    }
    return report;
}

// Sum-rate objective; the quantity every solver maximizes.
inline double objective(const FadingTensor& beta, const PilotAssignment& assignment,
                        double se_cap = kDefaultSeCap) {
    return sum_se(beta, assignment, se_cap).sum_se;
}

// Finite-antenna Monte-Carlo SINR: mean over `trials` of
// |h_s^H h_s|^2 / (sum_l |h_l^H h_l|^2 + sigma^2 M^2), with h = g sqrt(beta)
// drawn fresh per trial. The M^2 normalization of the noise term makes the
// estimate converge to asymptotic_sinr as M grows.
inline double finite_m_sinr(const FadingTensor& beta, const PilotAssignment& assignment,
                            int cell, int pilot, int antennas, double noise_power,
                            int trials, RngStream& rng) {
    detail::check_metric_args(beta, assignment, cell, pilot);
    if (antennas < 1) throw std::invalid_argument("finite_m_sinr: antennas must be >= 1");
    if (trials < 1) throw std::invalid_argument("finite_m_sinr: trials must be >= 1");

    const auto holders = assignment.pilot_holders();
    const int pilots = beta.users_per_cell();
    const int own_user = holders[static_cast<std::size_t>(cell) * pilots + pilot];
    const double beta_own = beta(cell, cell, own_user);
    std::vector<double> beta_cross;
    for (int j = 0; j < beta.cells(); ++j) {
        if (j == cell) continue;
        beta_cross.push_back(beta(cell, j, holders[static_cast<std::size_t>(j) * pilots + pilot]));
    }
    if (beta_cross.empty() && noise_power == 0.0)
        return std::numeric_limits<double>::infinity();

    const double m = static_cast<double>(antennas);
    auto norm_sq = [](const ChannelVector& g) {
        double s = 0.0;
        for (const auto& e : g) s += std::norm(e);
        return s;
    };
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double own_power = beta_own * norm_sq(small_scale_fading(antennas, rng));
        double den = noise_power * m * m;
        for (double bc : beta_cross) {
            const double cross_power = bc * norm_sq(small_scale_fading(antennas, rng));
            den += cross_power * cross_power;
        }
        mean += own_power * own_power / den;
    }
    return mean / trials;
}

// Assignment of every user to one of C clusters.
struct UserClustering {
    int cells = 0;
    int users_per_cell = 0;
    int cluster_count = 0;
    std::vector<int> cluster_of;  // cell-major, values in {0..C-1}

    int cluster(int cell, int user) const {
        return cluster_of[static_cast<std::size_t>(cell) * users_per_cell + user];
    }
    void set_cluster(int cell, int user, int c) {
        cluster_of[static_cast<std::size_t>(cell) * users_per_cell + user] = c;
    }
};

// Inter-cluster interference from large-scale fading: for every unordered
// cluster pair (c, c') with serving base stations i and j, the cross-to-own
// ratio of average betas seen at both BSs,
//   |mean_{k in c'} beta(i<-k) / mean_{k in c} beta(i<-k)|
// + |mean_{k in c} beta(j<-k) / mean_{k in c'} beta(j<-k)|,
// summed over all pairs. Symmetric under swapping (c, i) with (c', j).
inline double cluster_interference(const FadingTensor& beta, const UserClustering& clustering,
                                   std::span<const int> serving_cell) {
    if (clustering.cells != beta.cells() || clustering.users_per_cell != beta.users_per_cell())
        throw std::invalid_argument("clustering shape does not match fading tensor");
    const int c_count = clustering.cluster_count;
    if (c_count < 1) throw std::invalid_argument("cluster_interference: no clusters");
    if (static_cast<int>(serving_cell.size()) != c_count)
        throw std::invalid_argument("cluster_interference: serving map size mismatch");
    for (int bs : serving_cell)
        if (bs < 0 || bs >= beta.cells())
            throw std::out_of_range("cluster_interference: serving cell out of range");

    // Gather cluster members once.
    std::vector<std::vector<std::pair<int, int>>> members(c_count);
    for (int j = 0; j < clustering.cells; ++j) {
        for (int u = 0; u < clustering.users_per_cell; ++u) {
            const int c = clustering.cluster(j, u);
            if (c < 0 || c >= c_count)
                throw std::out_of_range("cluster_interference: cluster id out of range");
            members[c].emplace_back(j, u);
        }
    }
    for (int c = 0; c < c_count; ++c)
        if (members[c].empty())
            throw std::invalid_argument("cluster_interference: empty cluster");

    auto mean_beta_at = [&](int bs, int c) {
        double s = 0.0;
        for (auto [j, u] : members[c]) s += beta(bs, j, u);
        return s / static_cast<double>(members[c].size());
    };

    double total = 0.0;
    for (int c = 0; c < c_count; ++c) {
        for (int cp = c + 1; cp < c_count; ++cp) {
            const int i = serving_cell[c];
            const int j = serving_cell[cp];
            const double own_i = mean_beta_at(i, c);
            const double own_j = mean_beta_at(j, cp);
            if (own_i == 0.0 || own_j == 0.0)
                throw std::domain_error("cluster_interference: zero own-signal average");
            total += std::fabs(mean_beta_at(i, cp) / own_i);
            total += std::fabs(mean_beta_at(j, c) / own_j);
        }
    }
    return total;
}

// Cluster-interference score of a pilot assignment: for each pilot, the
// co-pilot users across cells are treated as singleton clusters served by
// their own cells and scored with cluster_interference; pilots are summed.
// Used as the negated fitness in FitnessMode::ClusterInterference.
inline double copilot_interference(const FadingTensor& beta, const PilotAssignment& assignment) {
    if (assignment.cells() != beta.cells() || assignment.pilots() != beta.users_per_cell())
        throw std::invalid_argument("assignment shape does not match fading tensor");
    const auto holders = assignment.pilot_holders();
    const int cells = beta.cells();
    const int pilots = beta.users_per_cell();
    double total = 0.0;
    for (int p = 0; p < pilots; ++p) {
        for (int i = 0; i < cells; ++i) {
            const int ui = holders[static_cast<std::size_t>(i) * pilots + p];
            for (int j = i + 1; j < cells; ++j) {
                const int uj = holders[static_cast<std::size_t>(j) * pilots + p];
                total += std::fabs(beta(i, j, uj) / beta(i, i, ui));
                total += std::fabs(beta(j, i, ui) / beta(j, j, uj));
            }
        }
    }
    return total;
}

}  // namespace pilotopt
