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
// Multi-cell geometry and channel generation: hexagonal cell grids, uniform
// user drops, log-normal/path-loss large-scale fading and i.i.d. complex
// Gaussian small-scale fading. All generators are pure functions of their
// inputs and an explicit RNG stream.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pilotopt/rng.hpp"

namespace pilotopt {

// Static system description. users_per_cell doubles as the number of
// orthogonal pilots; tau_p/tau_c are carried as metadata only and never
// enter the spectral-efficiency computation.
struct Scenario {
    int cells = 16;           // L
    int users_per_cell = 20;  // K, also the pilot count
    int antennas = 128;       // M
    double cell_radius = 500.0;       // hexagon circumradius, meters
    double alpha = 3.8;               // path-loss exponent
    double shadow_sigma_db = 8.0;     // log-normal shadowing std-dev, dB
    double min_dist = 35.0;           // minimum user-BS distance, meters
    double noise_power = 1.0;         // sigma^2, normalized
    int tau_p = 20;                   // pilot length in symbols (metadata)
    int tau_c = 200;                  // coherence length in symbols (metadata)
    std::uint64_t seed = 1;

    void validate() const {
        if (cells < 1) throw std::invalid_argument("scenario: cells must be >= 1");
        if (users_per_cell < 1) throw std::invalid_argument("scenario: users_per_cell must be >= 1");
        if (antennas < 1) throw std::invalid_argument("scenario: antennas must be >= 1");
        if (!(min_dist > 0.0) || !(min_dist < cell_radius))
            throw std::invalid_argument("scenario: need 0 < min_dist < cell_radius");
        if (!(alpha > 0.0)) throw std::invalid_argument("scenario: alpha must be > 0");
        if (shadow_sigma_db < 0.0)
            throw std::invalid_argument("scenario: shadow_sigma_db must be >= 0");
    }
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Vec2 a, Vec2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class HexLayout {
    Auto,    // Spiral when the count fills whole rings, Rows otherwise
    Rows,    // row-by-row fill of a near-square patch
    Spiral,  // center cell plus concentric rings
};

// Cell centers on a pointy-top hexagonal lattice. Neighboring centers are
// sqrt(3) * cell_radius apart.
struct CellGrid {
    std::vector<Vec2> centers;
    std::string layout;  // "rows" or "spiral"
    double cell_radius = 0.0;
};

// Planar user positions; positions[j * K + u] is user u of cell j.
struct UserDrop {
    int cells = 0;
    int users_per_cell = 0;
    std::vector<Vec2> positions;

    Vec2 position(int cell, int user) const {
        return positions[static_cast<std::size_t>(cell) * users_per_cell + user];
    }
};

// Large-scale fading coefficients beta[i][j][k]: gain between BS i and user k
// of cell j. Strictly positive and finite for any valid drop.
class FadingTensor {
public:
    FadingTensor() = default;
    FadingTensor(int cells, int users_per_cell, double value = 0.0)
        : cells_(cells), users_(users_per_cell),
          beta_(static_cast<std::size_t>(cells) * cells * users_per_cell, value) {
        if (cells < 1 || users_per_cell < 1)
            throw std::invalid_argument("FadingTensor needs cells >= 1 and users_per_cell >= 1");
    }

    int cells() const { return cells_; }
    int users_per_cell() const { return users_; }

    double operator()(int bs, int cell, int user) const {
        return beta_[(static_cast<std::size_t>(bs) * cells_ + cell) * users_ + user];
    }
    double& operator()(int bs, int cell, int user) {
        return beta_[(static_cast<std::size_t>(bs) * cells_ + cell) * users_ + user];
    }

    const std::vector<double>& flat() const { return beta_; }
    std::vector<double>& flat() { return beta_; }

private:
    int cells_ = 0;
    int users_ = 0;
    std::vector<double> beta_;
};

using ChannelVector = std::vector<std::complex<double>>;

inline double hex_inradius(double circumradius) {
    return std::sqrt(3.0) / 2.0 * circumradius;
}

// Point-in-hexagon test for a pointy-top hexagon of given circumradius.
inline bool point_in_hexagon(Vec2 p, Vec2 center, double circumradius) {
    const double x = std::fabs(p.x - center.x);
    const double y = std::fabs(p.y - center.y);
    if (x > hex_inradius(circumradius)) return false;
    return y <= circumradius - x / std::sqrt(3.0);
}

namespace detail {

// Rings around the origin fill completely at the centered hexagonal numbers
// 1, 7, 19, 37, ...
inline bool fills_whole_rings(int cells) {
    for (int ring = 0, total = 1; total <= cells; ++ring, total += 6 * ring)
        if (total == cells) return true;
    return false;
}

inline Vec2 axial_to_plane(int q, int r, double circumradius) {
    const double w = std::sqrt(3.0) * circumradius;
    return {w * (q + 0.5 * r), 1.5 * circumradius * r};
}

}  // namespace detail

// Deterministic hexagon centers for `cells` cells. Auto layout places whole
// rings as a spiral around the origin (7 -> center plus 6-ring) and falls
// back to a row-by-row near-square patch otherwise (16 -> 4x4).
inline CellGrid build_hex_grid(int cells, double cell_radius,
                               HexLayout layout = HexLayout::Auto) {
    if (cells < 1) throw std::invalid_argument("build_hex_grid: cells must be >= 1");
    if (!(cell_radius > 0.0)) throw std::invalid_argument("build_hex_grid: radius must be > 0");
    if (layout == HexLayout::Auto)
        layout = detail::fills_whole_rings(cells) ? HexLayout::Spiral : HexLayout::Rows;

    CellGrid grid;
    grid.cell_radius = cell_radius;
    grid.centers.reserve(cells);

    if (layout == HexLayout::Spiral) {
        grid.layout = "spiral";
        // Axial-coordinate neighbor steps, pointy-top orientation.
        static constexpr int dq[6] = {+1, +1, 0, -1, -1, 0};
        static constexpr int dr[6] = {0, -1, -1, 0, +1, +1};
        grid.centers.push_back({0.0, 0.0});
        for (int ring = 1; static_cast<int>(grid.centers.size()) < cells; ++ring) {
            int q = -ring, r = ring;  // start on the south-west corner of the ring
            for (int side = 0; side < 6 && static_cast<int>(grid.centers.size()) < cells; ++side) {
                for (int step = 0; step < ring; ++step) {
                    if (static_cast<int>(grid.centers.size()) >= cells) break;
                    grid.centers.push_back(detail::axial_to_plane(q, r, cell_radius));
                    q += dq[side];
                    r += dr[side];
                }
            }
        }
    } else {
        grid.layout = "rows";
        const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cells))));
        const double w = std::sqrt(3.0) * cell_radius;
        for (int idx = 0; idx < cells; ++idx) {
            const int row = idx / cols;
            const int col = idx % cols;
            grid.centers.push_back({w * (col + 0.5 * (row % 2)), 1.5 * cell_radius * row});
        }
    }
    return grid;
}

// Uniform rejection sampling inside each serving hexagon, resampling until
// the user is at least min_dist away from its BS.
inline UserDrop drop_users(const Scenario& scenario, const CellGrid& grid, RngStream& rng) {
    scenario.validate();
    if (static_cast<int>(grid.centers.size()) != scenario.cells)
        throw std::invalid_argument("drop_users: grid size does not match scenario");
    if (scenario.min_dist >= hex_inradius(grid.cell_radius))
        throw std::invalid_argument("drop_users: min_dist >= hexagon inradius, placement impossible");

    const double R = grid.cell_radius;
    const double half_width = hex_inradius(R);
    UserDrop drop;
    drop.cells = scenario.cells;
    drop.users_per_cell = scenario.users_per_cell;
    drop.positions.reserve(static_cast<std::size_t>(scenario.cells) * scenario.users_per_cell);
    for (int j = 0; j < scenario.cells; ++j) {
        const Vec2 c = grid.centers[j];
        for (int u = 0; u < scenario.users_per_cell; ++u) {
            Vec2 p;
            do {
                p.x = c.x + (2.0 * rng.next_double() - 1.0) * half_width;
                p.y = c.y + (2.0 * rng.next_double() - 1.0) * R;
            } while (!point_in_hexagon(p, c, R) || distance(p, c) < scenario.min_dist);
            drop.positions.push_back(p);
        }
    }
    return drop;
}

// beta[i][j][k] = z / d^alpha with z = 10^(N(0, sigma_dB^2) / 10) and d the
// BS i to user (j, k) distance. With shadow_sigma_db = 0 this reduces to
// beta = d^(-alpha) exactly.
inline FadingTensor large_scale_fading(const Scenario& scenario, const CellGrid& grid,
                                       const UserDrop& drop, RngStream& rng) {
    scenario.validate();
    if (static_cast<int>(grid.centers.size()) != scenario.cells ||
        drop.cells != scenario.cells || drop.users_per_cell != scenario.users_per_cell)
        throw std::invalid_argument("large_scale_fading: inconsistent scenario/grid/drop shapes");

    FadingTensor beta(scenario.cells, scenario.users_per_cell);
    for (int i = 0; i < scenario.cells; ++i) {
        for (int j = 0; j < scenario.cells; ++j) {
            for (int k = 0; k < scenario.users_per_cell; ++k) {
                const double d = distance(grid.centers[i], drop.position(j, k));
                const double shadow_db = rng.next_gaussian() * scenario.shadow_sigma_db;
                const double z = std::pow(10.0, shadow_db / 10.0);
                beta(i, j, k) = z / std::pow(d, scenario.alpha);
            }
        }
    }
    return beta;
}

// Unit-variance circularly-symmetric complex Gaussian channel of length M;
// real and imaginary parts each have variance 1/2.
inline ChannelVector small_scale_fading(int antennas, RngStream& rng) {
    if (antennas < 1) throw std::invalid_argument("small_scale_fading: antennas must be >= 1");
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    ChannelVector g(antennas);
    for (auto& entry : g) {
        const double re = rng.next_gaussian() * kInvSqrt2;
        const double im = rng.next_gaussian() * kInvSqrt2;
        entry = {re, im};
    }
    return g;
}

// End-to-end generated instance with the named RNG substreams "drop" and
// "shadowing" split from the scenario seed.
struct Instance {
    CellGrid grid;
    UserDrop drop;
    FadingTensor beta;
};

inline Instance generate_instance(const Scenario& scenario, HexLayout layout = HexLayout::Auto) {
    Instance inst;
    inst.grid = build_hex_grid(scenario.cells, scenario.cell_radius, layout);
    RngStream drop_rng(derive_seed(scenario.seed, "drop"));
    inst.drop = drop_users(scenario, inst.grid, drop_rng);
    RngStream shadow_rng(derive_seed(scenario.seed, "shadowing"));
    inst.beta = large_scale_fading(scenario, inst.grid, inst.drop, shadow_rng);
    return inst;
}

}  // namespace pilotopt
