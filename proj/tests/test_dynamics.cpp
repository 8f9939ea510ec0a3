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

#include "neelmqc/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "neelmqc/model.hpp"
#include "test_util.hpp"

using namespace neelmqc;

namespace {

struct Chain {
    ChainModel model = build_hamiltonian(ChainGeometry{});
    EigenDecomposition decomp = diagonalize(model.h0);
};

const Chain& chain() {
    static const Chain c;
    return c;
}

}  // namespace

TEST(Dynamics, DoubletAtSevenAngstrom) {
    const DoubletReport d = doublet_analysis(chain().decomp);
    EXPECT_NEAR(d.up0, 0.57, 0.02);
    EXPECT_NEAR(d.down0, 0.57, 0.02);
    EXPECT_NEAR(-d.up1, 0.63, 0.02);
    EXPECT_NEAR(d.down1, 0.63, 0.02);
    EXPECT_NEAR(d.nz_matrix_element, -0.83, 0.02);
    EXPECT_NEAR(d.t_max, 300.0, 30.0);
    EXPECT_DOUBLE_EQ(d.t_max, std::numbers::pi / d.delta);
    EXPECT_GT(d.delta, 0.0);
    EXPECT_GT(d.af_weight[0], 0.65);
    EXPECT_GT(d.af_weight[1], 0.65);
    EXPECT_TRUE(d.af_dominant());
}

TEST(Dynamics, ParityKillsDiagonalNeelZ) {
    const auto& e = chain().decomp;
    for (std::size_t n = 0; n < e.dimension(); ++n) {
        const bool degenerate = (n > 0 && std::abs(e.values[n] - e.values[n - 1]) < 1e-9) ||
                                (n + 1 < e.dimension() && std::abs(e.values[n + 1] - e.values[n]) < 1e-9);
        if (degenerate) {
            continue;
        }
        const StateVector psi = e.state(n);
        EXPECT_NEAR(neel_expectation(SiteAxis::Z, psi), 0.0, 1e-10) << "n = " << n;
    }
}

TEST(Dynamics, WavePackets) {
    const auto& e = chain().decomp;
    const WavePackets w = wave_packets(e);
    EXPECT_NEAR(norm_squared(w.down), 1.0, 1e-12);
    EXPECT_NEAR(norm_squared(w.up), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(inner(w.down, w.up)), 0.0, 1e-12);

    const double nz = neel_expectation(SiteAxis::Z, w.down);
    EXPECT_NEAR(nz, doublet_analysis(e).nz_matrix_element, 1e-10);
    EXPECT_NEAR(nz, -0.83, 0.02);
    EXPECT_NEAR(neel_expectation(SiteAxis::Z, w.up), -nz, 1e-10);
    EXPECT_NEAR(expectation(w.down, chain().model.h0.apply(w.down)), 0.5 * (e.values[0] + e.values[1]), 1e-12);

    // Global spin flip exchanges the packets up to sign.
    StateVector flipped(w.down.size());
    for (std::size_t k = 0; k < w.down.size(); ++k) flipped[flip_all(k, 8)] = w.down[k];
    const double plus = testutil::max_abs_diff(flipped, w.up);
    StateVector minus_up = w.up;
    for (auto& a : minus_up) a = -a;
    const double minus = testutil::max_abs_diff(flipped, minus_up);
    EXPECT_LT(std::min(plus, minus), 1e-10);
}

TEST(Dynamics, CoherentTraceFollowsCosineLaw) {
    const auto& e = chain().decomp;
    const DoubletReport d = doublet_analysis(e);
    const auto times = uniform_grid(0.0, 4.0 * d.t_max, 801);
    const TraceSeries tr = coherent_trace(e, wave_packets(e).down, times);
    ASSERT_EQ(tr.size(), times.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        worst = std::max(worst, std::abs(tr.nz[i] - d.nz_matrix_element * std::cos(std::numbers::pi * tr.times[i] / d.t_max)));
        EXPECT_NEAR(tr.nx[i], 0.0, 1e-10);
        EXPECT_NEAR(tr.ny[i], 0.0, 1e-10);
        EXPECT_NEAR(tr.energy[i], tr.energy[0], 1e-10 * std::abs(tr.energy[0]));
        if (i > 0) {
            EXPECT_GT(tr.times[i], tr.times[i - 1]);
        }
    }
    EXPECT_LT(worst, 0.02);
}

TEST(Dynamics, ClassicalNeelStateSitsAboveTheDoublet) {
    const auto& e = chain().decomp;
    const DoubletReport d = doublet_analysis(e);
    const StateVector down = basis_state(8, neel_down_index(8));
    const auto times = uniform_grid(0.0, 4.0 * d.t_max, 801);
    const TraceSeries tr = coherent_trace(e, down, times);
    EXPECT_NEAR(tr.nz[0], -1.0, 1e-12);
    EXPECT_NEAR(tr.energy[0], -0.353, 0.01);
    EXPECT_GT(tr.energy[0], d.E1);
    // The doublet still carries about 72% of the weight, so nz does swing.
    // Reference values from an independent Kronecker-product evaluation.
    EXPECT_NEAR(d.down0 * d.down0 + d.down1 * d.down1, 0.72184, 1e-4);
    double swing = 0.0;
    for (double nz : tr.nz) swing = std::max(swing, std::abs(nz - tr.nz[0]));
    EXPECT_NEAR(swing, 1.76691, 1e-4);
    EXPECT_NEAR(tr.nz[200], 0.61011, 1e-4);
}

TEST(Dynamics, TransitionProbability) {
    const auto& e = chain().decomp;
    const DoubletReport d = doublet_analysis(e);
    const std::vector<double> t{0.0, 0.5 * d.t_max, d.t_max};
    const auto p = transition_probability(e, t);
    EXPECT_NEAR(p[0], 0.0, 1e-12);
    EXPECT_NEAR(p[1], 0.5, 1e-9);
    EXPECT_NEAR(p[2], 1.0, 1e-9);

    // P_up + P_down = 1 while the state stays in the doublet span.
    const WavePackets w = wave_packets(e);
    for (double time : uniform_grid(0.0, 2.0 * d.t_max, 41)) {
        const StateVector s = propagate(e, w.down, time);
        const double total = std::norm(inner(w.up, s)) + std::norm(inner(w.down, s));
        EXPECT_LE(total, 1.0 + 1e-12);
        EXPECT_NEAR(total, 1.0, 1e-6);
        const double law = std::pow(std::sin(std::numbers::pi * time / (2.0 * d.t_max)), 2);
        EXPECT_NEAR(std::norm(inner(w.up, s)), law, 1e-6);
    }
}

TEST(Dynamics, PeriodScanShape) {
    const ScanResult scan = period_scan(kValidatedDMin, kValidatedDMax, 27, {}, 2);
    ASSERT_EQ(scan.rows.size(), 27u);
    EXPECT_TRUE(scan.warnings.empty());
    for (std::size_t i = 1; i < scan.rows.size(); ++i) {
        EXPECT_GT(scan.rows[i].d, scan.rows[i - 1].d);
        EXPECT_GT(scan.rows[i].t_max, scan.rows[i - 1].t_max);
    }
    // log(Tmax) is convex or linear in d.
    for (std::size_t i = 1; i + 1 < scan.rows.size(); ++i) {
        const double a = std::log(scan.rows[i - 1].t_max);
        const double b = std::log(scan.rows[i].t_max);
        const double c = std::log(scan.rows[i + 1].t_max);
        EXPECT_GE(c - 2.0 * b + a, -0.05 * std::abs(c - b));
    }
    // Row at d = 7 matches the direct analysis.
    const ScanRow& row = scan.rows[2];
    EXPECT_NEAR(row.d, 7.0, 1e-12);
    const DoubletReport d = doublet_analysis(chain().decomp);
    EXPECT_NEAR(row.delta, d.delta, 1e-12);
    EXPECT_NEAR(row.t_max, d.t_max, 1e-6);
    EXPECT_NEAR(row.J, chain().model.J, 1e-15);
}

TEST(Dynamics, PeriodScanArguments) {
    EXPECT_THROW(period_scan(6.8, 9.4, 1), ArgumentError);
    EXPECT_THROW(period_scan(9.4, 6.8, 5), ArgumentError);
    const ScanResult wide = period_scan(6.0, 7.0, 2, {4, 7.0, 2.17});
    EXPECT_EQ(wide.rows.size(), 2u);
    EXPECT_FALSE(wide.warnings.empty());
}

TEST(Dynamics, ScanIndependentOfWorkerCount) {
    const ChainGeometry small{6, 7.0, 2.17};
    const auto a = period_scan(7.0, 8.0, 6, small, 1);
    const auto b = period_scan(7.0, 8.0, 6, small, 3);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].d, b.rows[i].d);
        EXPECT_EQ(a.rows[i].E0, b.rows[i].E0);
        EXPECT_EQ(a.rows[i].t_max, b.rows[i].t_max);
    }
}
