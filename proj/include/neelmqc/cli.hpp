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

// Command-line front end: subcommands spectrum, scan, evolve, ensemble, fit
// and validate. Exit codes: 0 success, 2 usage, 3 numerical, 4 validation.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "csv.hpp"
#include "dynamics.hpp"
#include "eig.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "sse.hpp"

namespace neelmqc {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumerical = 3, kExitValidation = 4 };

inline const std::vector<std::string> kScanHeader{"d_angstrom", "J_rad_per_ms", "cx", "cy", "cz", "E0", "E1",
                                                  "delta_rad_per_ms", "Tmax_s"};
inline const std::vector<std::string> kEvolveHeader{"t_ms", "nx", "ny", "nz", "energy_rad_per_ms"};
inline const std::vector<std::string> kEnsembleHeader{"t_ms", "nnx", "nny", "nnz", "energy_rad_per_ms",
                                                      "heating_ratio"};

struct RunConfig {
    std::string subcommand;
    ChainGeometry geometry;
    // noise
    double tau_s = 2.5;
    double dt_ms = 0.05;
    std::uint64_t seed = 1;
    int ntraj = 20;
    double t_end_ms = 1200.0;
    bool enable_z = false;
    int stride = 40;
    bool zero_noise = false;
    bool check_dt = false;
    // scan grid
    double d_min = kValidatedDMin;
    double d_max = kValidatedDMax;
    int steps = 27;
    // evolve grid
    int points = 600;
    // spectrum
    double temperature_k = 4.0;
    // fit inputs
    std::string ensemble_csv;
    std::string reference_csv;
    // output
    std::string out;
    std::string format = "text";

    void validate() const {
        geometry.validate();
        if (geometry.n_spins > kDefaultSpinCap)
            throw ResourceError("n = " + std::to_string(geometry.n_spins) + " exceeds the cap of " +
                                std::to_string(kDefaultSpinCap));
        if (format != "text" && format != "kv") throw ArgumentError("--format must be text or kv");
        if (subcommand == "scan") {
            if (steps < 2) throw ArgumentError("--steps must be >= 2");
            if (!(d_min > 0.0) || !(d_min < d_max)) throw ArgumentError("need 0 < d_min < d_max");
        }
        if (subcommand == "evolve") {
            if (points < 2) throw ArgumentError("--points must be >= 2");
            if (!(t_end_ms > 0.0)) throw ArgumentError("--t-end-ms must be positive");
        }
        if (subcommand == "ensemble" || subcommand == "validate") noise().validate();
        if (subcommand == "spectrum" && !(temperature_k > 0.0)) throw ArgumentError("--temperature must be positive");
        if (subcommand == "fit" && ensemble_csv.empty()) throw ArgumentError("fit needs --ensemble");
    }

    NoiseConfig noise() const {
        NoiseConfig c;
        c.tau = tau_s * 1e3;
        c.dt = dt_ms;
        c.seed = seed;
        c.enable_z = enable_z;
        c.n_traj = ntraj;
        c.t_end = t_end_ms;
        c.stride = stride;
        c.noise_scale = zero_noise ? 0.0 : 1.0;
        return c;
    }

    // Every setting, defaults included, as one line of key=value pairs.
    std::string describe() const {
        const auto f = [](double v) { return format_number(v); };
        std::ostringstream o;
        o << "subcommand=" << subcommand << " n=" << geometry.n_spins << " d=" << f(geometry.d)
          << " r0=" << f(geometry.r0) << " tau_s=" << f(tau_s) << " dt_ms=" << f(dt_ms) << " seed=" << seed
          << " ntraj=" << ntraj << " t_end_ms=" << f(t_end_ms) << " enable_z=" << enable_z << " stride=" << stride
          << " zero_noise=" << zero_noise << " check_dt=" << check_dt << " d_min=" << f(d_min)
          << " d_max=" << f(d_max) << " steps=" << steps << " points=" << points
          << " temperature_k=" << f(temperature_k) << " ensemble=" << (ensemble_csv.empty() ? "-" : ensemble_csv)
          << " reference=" << (reference_csv.empty() ? "-" : reference_csv)
          << " out=" << (out.empty() ? "-" : out) << " format=" << format;
        return o.str();
    }

    std::string csv_banner() const { return std::string("neelmqc ") + kVersion + " config: " + describe(); }
};

// Ordered key/value report printed as aligned text or key=value lines.
class Report {
public:
    void add(std::string key, double value) { items_.emplace_back(std::move(key), format_number(value)); }
    void add(std::string key, std::string value) { items_.emplace_back(std::move(key), std::move(value)); }
    void add_int(std::string key, long long value) { items_.emplace_back(std::move(key), std::to_string(value)); }
    void add_bool(std::string key, bool value) { items_.emplace_back(std::move(key), value ? "true" : "false"); }

    std::string render(const std::string& format) const {
        std::ostringstream o;
        std::size_t width = 0;
        for (const auto& [k, v] : items_) width = std::max(width, k.size());
        for (const auto& [k, v] : items_) {
            if (format == "kv")
                o << k << '=' << v << '\n';
            else
                o << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
        }
        return o.str();
    }

    std::optional<std::string> get(const std::string& key) const {
        for (const auto& [k, v] : items_)
            if (k == key) return v;
        return std::nullopt;
    }

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

// Sends `content` to cfg.out (atomically) or to `fallback`.
inline void emit(const RunConfig& cfg, const std::string& content, std::ostream& fallback) {
    if (cfg.out.empty())
        fallback << content;
    else
        write_file_atomically(cfg.out, content);
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    const ChainModel m = build_hamiltonian(cfg.geometry);
    const EigenDecomposition e = diagonalize(m.h0);
    const DoubletReport d = doublet_analysis(e);

    Report r;
    r.add("n", static_cast<double>(cfg.geometry.n_spins));
    r.add("d_angstrom", cfg.geometry.d);
    r.add("r0_angstrom", cfg.geometry.r0);
    r.add("J_rad_per_ms", m.J);
    r.add("cx", m.c.cx);
    r.add("cy", m.c.cy);
    r.add("cz", m.c.cz);
    for (std::size_t n = 0; n < std::min<std::size_t>(4, e.values.size()); ++n)
        r.add("E" + std::to_string(n) + "_rad_per_ms", e.values[n]);
    r.add("delta_rad_per_ms", d.delta);
    r.add("Tmax_ms", d.t_max);
    r.add("Tmax_s", d.t_max * 1e-3);
    r.add("overlap_up_psi0", d.up0);
    r.add("overlap_down_psi0", d.down0);
    r.add("overlap_up_psi1", d.up1);
    r.add("overlap_down_psi1", d.down1);
    r.add("nz_psi0_psi1", d.nz_matrix_element);
    r.add("af_weight_psi0", d.af_weight[0]);
    r.add("af_weight_psi1", d.af_weight[1]);
    r.add_bool("af_dominant", d.af_dominant());
    r.add("classical_min_rad_per_ms", classical_energy(m, {0.0, 0.0, 1.0}));
    if (d.delta > 0.0) {
        const EnergyScales s = energy_scales_report(m, d.delta, cfg.temperature_k);
        r.add("temperature_k", cfg.temperature_k);
        r.add("delta_meV", s.delta_mev);
        r.add("barrier_meV", s.barrier_mev);
        r.add("thermal_meV", s.thermal_mev);
        r.add("chain_length_angstrom", s.chain_length);
        r.add("delta_over_thermal", s.delta_over_thermal);
        r.add("barrier_over_thermal", s.barrier_over_thermal);
        r.add("length_over_wavelength", s.length_over_wavelength);
    }
    emit(cfg, r.render(cfg.format), out);
    return kExitOk;
}

inline int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ScanResult scan = period_scan(cfg.d_min, cfg.d_max, cfg.steps, cfg.geometry);
    for (const auto& w : scan.warnings) err << "warning: " << w << '\n';
    std::ostringstream body;
    CsvWriter csv(body);
    csv.comment(cfg.csv_banner());
    csv.header(kScanHeader);
    for (const auto& row : scan.rows)
        csv.row({row.d, row.J, row.c.cx, row.c.cy, row.c.cz, row.E0, row.E1, row.delta, row.t_max * 1e-3});
    emit(cfg, body.str(), out);
    return kExitOk;
}

inline int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
    const ChainModel m = build_hamiltonian(cfg.geometry);
    const EigenDecomposition e = diagonalize(m.h0);
    const auto times = uniform_grid(0.0, cfg.t_end_ms, static_cast<std::size_t>(cfg.points));
    const TraceSeries tr = coherent_trace(e, wave_packets(e).down, times);
    std::ostringstream body;
    CsvWriter csv(body);
    csv.comment(cfg.csv_banner());
    csv.header(kEvolveHeader);
    for (std::size_t i = 0; i < tr.size(); ++i) csv.row({tr.times[i], tr.nx[i], tr.ny[i], tr.nz[i], tr.energy[i]});
    emit(cfg, body.str(), out);
    return kExitOk;
}

struct EnsembleSummary {
    EnsembleResult result;
    DampingFit damping;
    HeatingFit heating;
    std::vector<double> heating_ratio;
    double delta = 0.0;
};

inline EnsembleSummary summarize_ensemble(const ChainModel& m, const EigenDecomposition& e, const NoiseConfig& noise) {
    EnsembleSummary s;
    s.result = run_ensemble(m, e, noise);
    s.delta = e.values[1] - e.values[0];
    const TraceSeries ref = coherent_trace(e, wave_packets(e).down, s.result.times);
    s.damping = fit_damping(s.result.nnz, ref.nz, s.result.times);
    s.heating = fit_heating(s.result.energy, s.result.energy.front(), s.delta, s.result.times);
    s.heating_ratio = heating_ratio_series(s.result.energy, e.values[0], s.delta);
    return s;
}

inline constexpr double kDtConvergenceTolerance = 0.10;

inline int cmd_ensemble(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ChainModel m = build_hamiltonian(cfg.geometry);
    const EigenDecomposition e = diagonalize(m.h0);
    const NoiseConfig noise = cfg.noise();
    const EnsembleSummary s = summarize_ensemble(m, e, noise);

    std::ostringstream body;
    CsvWriter csv(body);
    csv.comment(cfg.csv_banner());
    csv.header(kEnsembleHeader);
    const auto& res = s.result;
    for (std::size_t i = 0; i < res.times.size(); ++i)
        csv.row({res.times[i], res.nnx[i], res.nny[i], res.nnz[i], res.energy[i], s.heating_ratio[i]});

    Report r;
    r.add("lambda_per_s", s.damping.lambda);
    r.add("damping_residual", s.damping.residual);
    r.add("w1_per_s", s.heating.w1);
    r.add("w2_per_s2", s.heating.w2);
    r.add("heating_residual", s.heating.residual);
    r.add_int("ntraj", res.n_traj);
    r.add("seed", std::to_string(cfg.seed));
    r.add("dt_ms", cfg.dt_ms);
    r.add("tau_s", cfg.tau_s);
    r.add("max_norm_drift", res.max_norm_drift);
    if (cfg.check_dt) {
        NoiseConfig half = noise;
        half.refine_level = 1;
        const EnsembleSummary h = summarize_ensemble(m, e, half);
        const double change =
            std::abs(h.damping.lambda - s.damping.lambda) / std::max(s.damping.lambda, 1e-12);
        r.add("lambda_half_dt_per_s", h.damping.lambda);
        r.add("dt_relative_change", change);
        r.add_bool("dt_converged", change < kDtConvergenceTolerance);
    }
    emit(cfg, body.str(), out);
    (cfg.out.empty() ? err : out) << r.render(cfg.format);
    return kExitOk;
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    const CsvTable ens = read_csv(cfg.ensemble_csv);
    ens.expect_header(kEnsembleHeader);
    if (ens.rows() < 2) throw CsvFormatError("ensemble CSV needs at least two rows");
    const auto& times = ens.column("t_ms");

    const ChainModel m = build_hamiltonian(cfg.geometry);
    const EigenDecomposition e = diagonalize(m.h0);
    std::vector<double> reference;
    if (!cfg.reference_csv.empty()) {
        const CsvTable ref = read_csv(cfg.reference_csv);
        ref.expect_header(kEvolveHeader);
        const auto& rt = ref.column("t_ms");
        if (rt.size() != times.size()) throw CsvFormatError("reference and ensemble have different row counts");
        for (std::size_t i = 0; i < rt.size(); ++i)
            if (std::abs(rt[i] - times[i]) > 1e-9 * std::max(1.0, std::abs(times[i])))
                throw CsvFormatError("reference time grid differs from the ensemble grid in column 't_ms'");
        reference = ref.column("nz");
    } else {
        reference = coherent_trace(e, wave_packets(e).down, times).nz;
    }
    const auto& energy = ens.column("energy_rad_per_ms");
    const DampingFit damping = fit_damping(ens.column("nnz"), reference, times);
    const HeatingFit heating = fit_heating(energy, energy.front(), e.values[1] - e.values[0], times);

    Report r;
    r.add("lambda_per_s", damping.lambda);
    r.add("damping_residual", damping.residual);
    r.add("w1_per_s", heating.w1);
    r.add("w2_per_s2", heating.w2);
    r.add("heating_residual", heating.residual);
    r.add_int("rows", static_cast<long long>(times.size()));
    emit(cfg, r.render(cfg.format), out);
    return kExitOk;
}

struct NoiseStatistics {
    double mean = 0.0;
    double variance = 0.0;
    double lag1 = 0.0;
    std::size_t draws = 0;
};

// Moments of the x-axis normals of trajectory 0.
inline NoiseStatistics measure_noise(std::uint64_t seed, std::size_t draws) {
    NoiseStream stream(seed, 0);
    std::vector<double> x(draws);
    for (auto& v : x) v = stream.next(false).x;
    NoiseStatistics s;
    s.draws = draws;
    for (double v : x) s.mean += v;
    s.mean /= static_cast<double>(draws);
    double cov = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double a = x[i] - s.mean;
        s.variance += a * a;
        if (i + 1 < draws) cov += a * (x[i + 1] - s.mean);
    }
    s.variance /= static_cast<double>(draws - 1);
    s.lag1 = cov / (static_cast<double>(draws - 1) * s.variance);
    return s;
}

inline constexpr double kValidationRateTolerance = 0.15;

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    NoiseConfig noise = cfg.noise();
    const RelaxationMeasurement m = single_spin_relaxation(noise);
    const double expected = 1.0 / noise.tau;
    const double ratio = m.rate / expected;

    const NoiseStatistics ns = measure_noise(cfg.seed, 1'000'000);
    const double bound = 5.0 / std::sqrt(static_cast<double>(ns.draws));
    const bool noise_ok = std::abs(ns.mean) < bound && std::abs(ns.variance - 1.0) < 0.01 && std::abs(ns.lag1) < bound;
    const bool rate_ok = cfg.zero_noise ? (m.rate < 0.01 * expected) : (std::abs(ratio - 1.0) <= kValidationRateTolerance);

    Report r;
    r.add("tau_ms", noise.tau);
    r.add("expected_rate_per_ms", expected);
    r.add("measured_rate_per_ms", m.rate);
    r.add("rate_ratio", ratio);
    r.add_int("ntraj", noise.n_traj);
    r.add_bool("zero_noise", cfg.zero_noise);
    r.add("noise_mean", ns.mean);
    r.add("noise_variance", ns.variance);
    r.add("noise_lag1_autocorrelation", ns.lag1);
    r.add_bool("noise_ok", noise_ok);
    r.add_bool("rate_ok", rate_ok);
    emit(cfg, r.render(cfg.format), out);
    return (noise_ok && rate_ok) ? kExitOk : kExitValidation;
}

inline void add_geometry_options(CLI::App* app, RunConfig& cfg) {
    app->add_option("--n", cfg.geometry.n_spins, "number of spins (even)")->capture_default_str();
    app->add_option("--d", cfg.geometry.d, "chain constant, angstrom")->capture_default_str();
    app->add_option("--r0", cfg.geometry.r0, "height above the surface, angstrom")->capture_default_str();
}

inline void add_noise_options(CLI::App* app, RunConfig& cfg) {
    app->add_option("--tau-s", cfg.tau_s, "single-spin relaxation time, s")->capture_default_str();
    app->add_option("--dt-ms", cfg.dt_ms, "integration step, ms")->capture_default_str();
    app->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    app->add_option("--ntraj", cfg.ntraj, "number of trajectories")->capture_default_str();
    app->add_option("--t-end-ms", cfg.t_end_ms, "simulated time, ms")->capture_default_str();
    app->add_option("--stride", cfg.stride, "steps between recorded points")->capture_default_str();
    app->add_flag("--enable-z", cfg.enable_z, "include the B_z I_z term");
    app->add_flag("--zero-noise", cfg.zero_noise, "switch the environment off");
}

inline void add_output_options(CLI::App* app, RunConfig& cfg) {
    app->add_option("--out", cfg.out, "output file (default: stdout)");
    app->add_option("--format", cfg.format, "summary format: text or kv")->capture_default_str();
}

// Parses argv and runs the selected subcommand.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Neel-vector coherence oscillations in a dipolar nuclear-spin chain"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* spectrum = app.add_subcommand("spectrum", "spectrum, tunneling doublet and energy scales");
    add_geometry_options(spectrum, cfg);
    spectrum->add_option("--temperature", cfg.temperature_k, "environment temperature, K")->capture_default_str();
    add_output_options(spectrum, cfg);

    auto* scan = app.add_subcommand("scan", "oscillation half-period versus chain constant (CSV)");
    add_geometry_options(scan, cfg);
    scan->add_option("--d-min", cfg.d_min, "first chain constant, angstrom")->capture_default_str();
    scan->add_option("--d-max", cfg.d_max, "last chain constant, angstrom")->capture_default_str();
    scan->add_option("--steps", cfg.steps, "grid points")->capture_default_str();
    add_output_options(scan, cfg);

    auto* evolve = app.add_subcommand("evolve", "coherent Neel-vector trace from psi_down (CSV)");
    add_geometry_options(evolve, cfg);
    evolve->add_option("--t-end-ms", cfg.t_end_ms, "trace length, ms")->capture_default_str();
    evolve->add_option("--points", cfg.points, "time points")->capture_default_str();
    add_output_options(evolve, cfg);

    auto* ensemble = app.add_subcommand("ensemble", "stochastic trajectory ensemble (CSV + fit summary)");
    add_geometry_options(ensemble, cfg);
    add_noise_options(ensemble, cfg);
    ensemble->add_flag("--check-dt", cfg.check_dt, "rerun at dt/2 and report the change in lambda");
    add_output_options(ensemble, cfg);

    auto* fit = app.add_subcommand("fit", "refit damping and heating from CSV files");
    add_geometry_options(fit, cfg);
    fit->add_option("--ensemble", cfg.ensemble_csv, "ensemble CSV")->required();
    fit->add_option("--reference", cfg.reference_csv, "coherent trace CSV (default: recomputed)");
    add_output_options(fit, cfg);

    auto* validate = app.add_subcommand("validate", "single-spin relaxation and noise statistics");
    add_noise_options(validate, cfg);
    add_output_options(validate, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "validate") {
        if (validate->count("--ntraj") == 0) cfg.ntraj = 200;
        if (validate->count("--t-end-ms") == 0) cfg.t_end_ms = 2.0 * cfg.tau_s * 1e3;
        cfg.stride = validate->count("--stride") ? cfg.stride : 200;
    }

    try {
        cfg.validate();
        if (cfg.subcommand == "spectrum") return cmd_spectrum(cfg, out);
        if (cfg.subcommand == "scan") return cmd_scan(cfg, out, err);
        if (cfg.subcommand == "evolve") return cmd_evolve(cfg, out);
        if (cfg.subcommand == "ensemble") return cmd_ensemble(cfg, out, err);
        if (cfg.subcommand == "fit") return cmd_fit(cfg, out);
        if (cfg.subcommand == "validate") return cmd_validate(cfg, out);
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigurationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CsvFormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace neelmqc
