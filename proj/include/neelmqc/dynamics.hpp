// Copyright 2026 The neelmqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Tunneling doublet, MQC wave packets and coherent Neel-vector dynamics.

#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eig.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "spinops.hpp"

namespace neelmqc {

// Doublet states whose AF weight falls below this get flagged.
inline constexpr double kAfDominanceThreshold = 0.5;

struct DoubletReport {
    double E0 = 0.0;
    double E1 = 0.0;
    double delta = 0.0;  // E1 - E0, rad/ms
    double t_max = 0.0;  // pi / delta, ms
    // <up|psi0>, <down|psi0>, <up|psi1>, <down|psi1>
    double up0 = 0.0;
    double down0 = 0.0;
    double up1 = 0.0;
    double down1 = 0.0;
    double nz_matrix_element = 0.0;  // <psi0|N_z|psi1>
    std::array<double, 2> af_weight{};

    bool af_dominant() const {
        return af_weight[0] >= kAfDominanceThreshold && af_weight[1] >= kAfDominanceThreshold;
    }
};

inline DoubletReport doublet_analysis(const EigenDecomposition& decomp) {
    if (decomp.dimension() < 4) throw ConfigurationError("doublet analysis needs at least two spins");
    const int n = spin_count(decomp.dimension());
    if (n % 2 != 0) throw ConfigurationError("doublet analysis needs an even chain");
    const BasisIndex up = neel_up_index(n);
    const BasisIndex down = neel_down_index(n);
    const auto& v0 = decomp.vectors[0];
    const auto& v1 = decomp.vectors[1];

    DoubletReport r;
    r.E0 = decomp.values[0];
    r.E1 = decomp.values[1];
    r.delta = r.E1 - r.E0;
    r.t_max = (r.delta > 0.0) ? std::numbers::pi / r.delta : std::numeric_limits<double>::infinity();
    r.up0 = v0[up];
    r.down0 = v0[down];
    r.up1 = v1[up];
    r.down1 = v1[down];
    r.af_weight = {r.up0 * r.up0 + r.down0 * r.down0, r.up1 * r.up1 + r.down1 * r.down1};
    const StateVector psi0 = decomp.state(0);
    const StateVector psi1 = decomp.state(1);
    r.nz_matrix_element = inner(psi0, apply_neel(SiteAxis::Z, psi1)).real();
    return r;
}

struct WavePackets {
    StateVector down;  // (psi0 + psi1)/sqrt2
    StateVector up;    // (psi0 - psi1)/sqrt2
};

inline WavePackets wave_packets(const EigenDecomposition& decomp) {
    if (decomp.dimension() < 2) throw ConfigurationError("wave packets need a doublet");
    const std::size_t dim = decomp.dimension();
    WavePackets w{StateVector(dim), StateVector(dim)};
    constexpr double h = 1.0 / std::numbers::sqrt2;
    for (std::size_t k = 0; k < dim; ++k) {
        w.down[k] = h * (decomp.vectors[0][k] + decomp.vectors[1][k]);
        w.up[k] = h * (decomp.vectors[0][k] - decomp.vectors[1][k]);
    }
    return w;
}

struct TraceSeries {
    std::vector<double> times;
    std::vector<double> nx;
    std::vector<double> ny;
    std::vector<double> nz;
    std::vector<double> energy;

    std::size_t size() const { return times.size(); }

    void reserve(std::size_t n) {
        times.reserve(n);
        nx.reserve(n);
        ny.reserve(n);
        nz.reserve(n);
        energy.reserve(n);
    }
};

// n points evenly spaced over [t0, t1] inclusive.
inline std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
    if (n < 2) throw ArgumentError("a grid needs at least two points");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

inline TraceSeries coherent_trace(const EigenDecomposition& decomp, std::span<const Amplitude> initial,
                                  std::span<const double> times) {
    const auto c0 = decomp.coefficients(initial);
    TraceSeries out;
    out.reserve(times.size());
    std::vector<Amplitude> c(c0.size());
    for (double t : times) {
        double energy = 0.0;
        for (std::size_t n = 0; n < c0.size(); ++n) {
            c[n] = c0[n] * std::polar(1.0, -decomp.values[n] * t);
            energy += std::norm(c0[n]) * decomp.values[n];
        }
        const StateVector s = decomp.synthesize(c);
        out.times.push_back(t);
        out.nx.push_back(neel_expectation(SiteAxis::X, s));
        out.ny.push_back(neel_expectation(SiteAxis::Y, s));
        out.nz.push_back(neel_expectation(SiteAxis::Z, s));
        out.energy.push_back(energy);
    }
    return out;
}

// P_up(t) = |<psi_up| exp(-i H0 t) |psi_down>|^2
inline std::vector<double> transition_probability(const EigenDecomposition& decomp,
                                                  std::span<const double> times) {
    const WavePackets w = wave_packets(decomp);
    std::vector<double> p;
    p.reserve(times.size());
    for (double t : times) p.push_back(std::norm(inner(w.up, propagate(decomp, w.down, t))));
    return p;
}

struct ScanRow {
    double d = 0.0;
    double J = 0.0;
    Anisotropy c;
    double E0 = 0.0;
    double E1 = 0.0;
    double delta = 0.0;
    double t_max = 0.0;  // ms
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::vector<std::string> warnings;
};

inline constexpr double kValidatedDMin = 6.8;
inline constexpr double kValidatedDMax = 9.4;

inline ScanRow scan_point(const ChainGeometry& g) {
    const ChainModel m = build_hamiltonian(g);
    const EigenDecomposition e = diagonalize(m.h0);
    ScanRow row;
    row.d = g.d;
    row.J = m.J;
    row.c = m.c;
    row.E0 = e.values[0];
    row.E1 = e.values[1];
    row.delta = row.E1 - row.E0;
    row.t_max = std::numbers::pi / row.delta;
    return row;
}

// One build + diagonalization per grid point; rows come back ordered by d.
inline ScanResult period_scan(double d_min, double d_max, int steps, const ChainGeometry& base = {},
                              unsigned workers = 0) {
    if (steps < 2) throw ArgumentError("period scan needs at least 2 steps");
    if (!(d_min < d_max)) throw ArgumentError("period scan needs d_min < d_max");
    ScanResult result;
    if (d_min < kValidatedDMin - 1e-12 || d_max > kValidatedDMax + 1e-12) {
        result.warnings.push_back("scan range extends outside the validated window [6.8, 9.4] angstrom");
    }
    const auto grid = uniform_grid(d_min, d_max, static_cast<std::size_t>(steps));
    result.rows.resize(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        ChainGeometry g = base;
        g.d = grid[i];
        result.rows[i] = scan_point(g);
    });
    return result;
}

}  // namespace neelmqc
