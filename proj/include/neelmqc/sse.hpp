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

// Stochastic Schrodinger trajectories of the chain in a fluctuating surface
// field, and their ensemble averages.
//
// The residual coupling is H_r = -gamma hbar B(t) . I_total with a uniform
// white-noise field normalized by <<B_mu(t) B_nu(t')>> = delta_mu,nu
// delta(t - t') / (gamma^2 tau). Discretized with a field held constant over
// each step dt, B(t_n) = R_n / (|gamma| sqrt(tau dt)), so the generator seen
// by the state is b_n . I_total with b_n = sign * R_n / sqrt(tau dt) in rad/ms:
// gamma cancels and only its sign survives.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "dynamics.hpp"
#include "eig.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "spinops.hpp"

namespace neelmqc {

// -gamma / |gamma| for 129Xe.
inline constexpr double kFieldSign = PhysicalConstants::gamma_factor < 0.0 ? 1.0 : -1.0;

inline constexpr double kMaxStepDrift = 1e-3;

struct NoiseConfig {
    double tau = 2500.0;   // single-spin relaxation time, ms
    double dt = 0.05;      // base step, ms
    std::uint64_t seed = 1;
    bool enable_z = false;
    int n_traj = 20;
    double t_end = 1200.0;  // ms
    int stride = 40;        // base steps between records
    int refine_level = 0;   // each base step split into 2^refine_level substeps
    double noise_scale = 1.0;  // 0 switches the environment off
    unsigned workers = 0;      // 0 = NEELMQC_THREADS / hardware

    void validate() const {
        if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
        if (!(dt > 0.0) || dt > tau / 100.0) throw ArgumentError("dt must satisfy 0 < dt <= tau/100");
        if (n_traj < 1) throw ArgumentError("n_traj must be >= 1");
        if (!(t_end > 0.0)) throw ArgumentError("t_end must be positive");
        if (stride < 1) throw ArgumentError("stride must be >= 1");
        if (refine_level < 0 || refine_level > 16) throw ArgumentError("refine_level must be in [0, 16]");
        if (!(noise_scale >= 0.0)) throw ArgumentError("noise_scale must be non-negative");
    }

    std::uint64_t substeps() const { return std::uint64_t{1} << refine_level; }
    double fine_dt() const { return dt / static_cast<double>(substeps()); }
    std::uint64_t base_steps() const { return static_cast<std::uint64_t>(std::llround(t_end / dt)); }
    std::uint64_t total_steps() const { return base_steps() * substeps(); }
    std::uint64_t record_every() const { return static_cast<std::uint64_t>(stride) * substeps(); }

    // Per-axis field amplitude sqrt(1/(tau dt)) at the fine step, rad/ms.
    double field_amplitude() const { return noise_scale * std::sqrt(1.0 / (tau * fine_dt())); }
};

struct FieldSample {
    double bx = 0.0;
    double by = 0.0;
    double bz = 0.0;
};

inline FieldSample sample_field(NoiseStream& stream, const NoiseConfig& cfg) {
    const NormalTriple r = stream.next(cfg.enable_z);
    const double a = kFieldSign * cfg.field_amplitude();
    return {a * r.x, a * r.y, cfg.enable_z ? a * r.z : 0.0};
}

// Classical RK4 for i dy/dt = (H0 + b . I_total) y with b frozen over the step.
class SseStepper {
public:
    explicit SseStepper(const ChainModel& model)
        : model_(&model), n_(spin_count(model.dimension())), k1_(model.dimension()), k2_(k1_.size()),
          k3_(k1_.size()), k4_(k1_.size()), tmp_(k1_.size()) {}

    // Advances s in place and renormalizes; returns the removed norm drift
    // |1 - ||s||| measured before renormalization.
    double step(const FieldSample& b, std::span<Amplitude> s, double dt) {
        derivative(b, s, k1_);
        axpy(s, 0.5 * dt, k1_, tmp_);
        derivative(b, tmp_, k2_);
        axpy(s, 0.5 * dt, k2_, tmp_);
        derivative(b, tmp_, k3_);
        axpy(s, dt, k3_, tmp_);
        derivative(b, tmp_, k4_);
        const double w = dt / 6.0;
        for (std::size_t k = 0; k < s.size(); ++k) s[k] += w * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);
        const double norm = std::sqrt(norm_squared(s));
        const double drift = std::abs(1.0 - norm);
        if (drift > kMaxStepDrift) {
            throw StepSizeError("norm drift " + std::to_string(drift) + " in one step of " + std::to_string(dt) +
                                " ms; use a smaller dt");
        }
        for (auto& a : s) a /= norm;
        return drift;
    }

    // out = (H0 + b . I_total) s
    void apply_generator(const FieldSample& b, std::span<const Amplitude> s, std::span<Amplitude> out) const {
        model_->h0_sparse.apply(s, out);
        const Amplitude lower{0.5 * b.bx, 0.5 * b.by};  // from m = +1/2
        const Amplitude raise{0.5 * b.bx, -0.5 * b.by}; // from m = -1/2
        const bool has_xy = b.bx != 0.0 || b.by != 0.0;
        const std::size_t dim = s.size();
        for (std::size_t k = 0; k < dim; ++k) {
            const Amplitude a = s[k];
            if (b.bz != 0.0) out[k] += b.bz * 0.5 * (2 * std::popcount(static_cast<BasisIndex>(k)) - n_) * a;
            if (!has_xy) continue;
            for (int bit = 0; bit < n_; ++bit) {
                const std::size_t mask = std::size_t{1} << bit;
                out[k ^ mask] += ((k & mask) ? lower : raise) * a;
            }
        }
    }

private:
    void derivative(const FieldSample& b, std::span<const Amplitude> s, std::span<Amplitude> out) const {
        apply_generator(b, s, out);
        for (auto& a : out) a = Amplitude{a.imag(), -a.real()};  // -i * a
    }

    static void axpy(std::span<const Amplitude> s, double h, std::span<const Amplitude> k,
                     std::span<Amplitude> out) {
        for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + h * k[i];
    }

    const ChainModel* model_;
    int n_;
    StateVector k1_, k2_, k3_, k4_, tmp_;
};

inline StateVector sse_step(const ChainModel& model, const FieldSample& field, std::span<const Amplitude> s,
                            double dt) {
    SseStepper stepper(model);
    StateVector out(s.begin(), s.end());
    stepper.step(field, out, dt);
    return out;
}

// Steps `state` through cfg.total_steps() fine steps of trajectory r, calling
// record(time_ms, state) at t = 0 and every cfg.record_every() steps. Returns
// the largest per-step norm drift.
template <typename Recorder>
double integrate_trajectory(const ChainModel& model, StateVector& state, const NoiseConfig& cfg,
                            std::uint32_t r, Recorder&& record) {
    NoiseStream stream(cfg.seed, r, cfg.refine_level);
    SseStepper stepper(model);
    const double h = cfg.fine_dt();
    const std::uint64_t total = cfg.total_steps();
    const std::uint64_t every = cfg.record_every();
    double max_drift = 0.0;
    record(0.0, std::span<const Amplitude>(state));
    for (std::uint64_t n = 1; n <= total; ++n) {
        const FieldSample b = sample_field(stream, cfg);
        max_drift = std::max(max_drift, stepper.step(b, state, h));
        if (n % every == 0) record(static_cast<double>(n) * h, std::span<const Amplitude>(state));
    }
    return max_drift;
}

struct TrajectoryRecord {
    std::uint32_t index = 0;
    TraceSeries trace;
    double max_norm_drift = 0.0;
};

inline TrajectoryRecord run_trajectory_from(const ChainModel& model, StateVector initial, const NoiseConfig& cfg,
                                            std::uint32_t r) {
    cfg.validate();
    TrajectoryRecord rec;
    rec.index = r;
    rec.trace.reserve(cfg.base_steps() / cfg.stride + 1);
    StateVector hs(model.dimension());
    rec.max_norm_drift = integrate_trajectory(model, initial, cfg, r, [&](double t, std::span<const Amplitude> s) {
        model.h0_sparse.apply(s, hs);
        rec.trace.times.push_back(t);
        rec.trace.nx.push_back(neel_expectation(SiteAxis::X, s));
        rec.trace.ny.push_back(neel_expectation(SiteAxis::Y, s));
        rec.trace.nz.push_back(neel_expectation(SiteAxis::Z, s));
        rec.trace.energy.push_back(expectation(s, hs));
    });
    return rec;
}

// Trajectory r started from the MQC wave packet psi_down.
inline TrajectoryRecord run_trajectory(const ChainModel& model, const EigenDecomposition& decomp,
                                       const NoiseConfig& cfg, std::uint32_t r) {
    return run_trajectory_from(model, wave_packets(decomp).down, cfg, r);
}

struct EnsembleResult {
    std::vector<double> times;
    std::vector<double> nnx;
    std::vector<double> nny;
    std::vector<double> nnz;
    std::vector<double> energy;
    std::vector<double> energy_variance;  // inter-trajectory, per time point
    int n_traj = 0;
    double max_norm_drift = 0.0;
};

// Arithmetic mean over cfg.n_traj trajectories; trajectory r draws its noise
// from (cfg.seed, r), and sums run in index order, so the result does not
// depend on the number of workers.
inline EnsembleResult run_ensemble_from(const ChainModel& model, const StateVector& initial, const NoiseConfig& cfg) {
    cfg.validate();
    std::vector<TrajectoryRecord> records(static_cast<std::size_t>(cfg.n_traj));
    parallel_for(records.size(), cfg.workers, [&](std::size_t r) {
        records[r] = run_trajectory_from(model, initial, cfg, static_cast<std::uint32_t>(r));
    });

    EnsembleResult out;
    out.n_traj = cfg.n_traj;
    out.times = records.front().trace.times;
    const std::size_t points = out.times.size();
    out.nnx.assign(points, 0.0);
    out.nny.assign(points, 0.0);
    out.nnz.assign(points, 0.0);
    out.energy.assign(points, 0.0);
    out.energy_variance.assign(points, 0.0);
    for (const auto& rec : records) {
        for (std::size_t i = 0; i < points; ++i) {
            out.nnx[i] += rec.trace.nx[i];
            out.nny[i] += rec.trace.ny[i];
            out.nnz[i] += rec.trace.nz[i];
            out.energy[i] += rec.trace.energy[i];
        }
        out.max_norm_drift = std::max(out.max_norm_drift, rec.max_norm_drift);
    }
    const double inv = 1.0 / cfg.n_traj;
    for (std::size_t i = 0; i < points; ++i) {
        out.nnx[i] *= inv;
        out.nny[i] *= inv;
        out.nnz[i] *= inv;
        out.energy[i] *= inv;
    }
    if (cfg.n_traj > 1) {
        for (const auto& rec : records)
            for (std::size_t i = 0; i < points; ++i) {
                const double dev = rec.trace.energy[i] - out.energy[i];
                out.energy_variance[i] += dev * dev;
            }
        for (auto& v : out.energy_variance) v /= (cfg.n_traj - 1);
    }
    return out;
}

inline EnsembleResult run_ensemble(const ChainModel& model, const EigenDecomposition& decomp, const NoiseConfig& cfg) {
    return run_ensemble_from(model, wave_packets(decomp).down, cfg);
}

struct RelaxationMeasurement {
    double rate = 0.0;  // 1/ms
    std::vector<double> times;
    std::vector<double> polarization;  // <<2 I_z>>
};

// Single spin with H0 = 0 started in |+1/2>: fits the decay rate of <<2 I_z>>.
inline RelaxationMeasurement single_spin_relaxation(const NoiseConfig& cfg) {
    cfg.validate();
    const ChainModel spin = make_model(ChainGeometry{1, 1.0, 1.0}, 0.0, Anisotropy{});
    const StateVector up = basis_state(1, 1);
    std::vector<std::vector<double>> series(static_cast<std::size_t>(cfg.n_traj));
    std::vector<std::vector<double>> times(series.size());
    parallel_for(series.size(), cfg.workers, [&](std::size_t r) {
        StateVector s = up;
        integrate_trajectory(spin, s, cfg, static_cast<std::uint32_t>(r), [&](double t, std::span<const Amplitude> st) {
            times[r].push_back(t);
            series[r].push_back(std::norm(st[1]) - std::norm(st[0]));
        });
    });
    RelaxationMeasurement m;
    m.times = times.front();
    m.polarization.assign(m.times.size(), 0.0);
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.size(); ++i) m.polarization[i] += s[i];
    for (auto& p : m.polarization) p /= cfg.n_traj;
    m.rate = fit_exponential_rate(m.polarization, m.times, 100.0 / cfg.tau);
    return m;
}

}  // namespace neelmqc
