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

// Envelope and heating fits for ensemble-averaged observables. Times come in
// as milliseconds; fitted rates are reported per second.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace neelmqc {

// Golden-section search for a minimum of f on [lo, hi] to absolute tolerance tol.
template <typename F>
double golden_section_minimize(F&& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Coarse scan of f over [lo, hi] followed by golden-section refinement of the
// best cell. Returns the minimizer; `at_upper_edge` reports a boundary hit.
template <typename F>
double bracketed_minimize(F&& f, double lo, double hi, double tol, bool* at_upper_edge = nullptr,
                          int coarse_points = 200) {
    std::size_t best = 0;
    double best_value = f(lo);
    const double h = (hi - lo) / coarse_points;
    for (int i = 1; i <= coarse_points; ++i) {
        const double v = f(lo + i * h);
        if (v < best_value) {
            best_value = v;
            best = static_cast<std::size_t>(i);
        }
    }
    const double a = std::max(lo, lo + (static_cast<double>(best) - 1.0) * h);
    const double b = std::min(hi, lo + (static_cast<double>(best) + 1.0) * h);
    const double x = golden_section_minimize(f, a, b, tol);
    if (at_upper_edge) *at_upper_edge = (hi - x) <= 2.0 * tol;
    return x;
}

inline constexpr double kDampingUpperBound = 100.0;  // 1/s
inline constexpr double kDampingTolerance = 1e-4;    // 1/s

struct DampingFit {
    double lambda = 0.0;    // 1/s
    double residual = 0.0;  // RMS misfit
    std::vector<double> reference;
};

namespace detail {

inline void check_series(std::size_t a, std::size_t b, std::size_t t, const char* what) {
    if (a != t || b != t) throw ArgumentError(std::string(what) + ": series lengths differ");
    if (t == 0) throw ArgumentError(std::string(what) + ": empty series");
}

}  // namespace detail

// Fits ensemble(t) ~ exp(-lambda t) reference(t) over lambda >= 0.
inline DampingFit fit_damping(std::span<const double> ensemble_nz, std::span<const double> reference_nz,
                              std::span<const double> times_ms) {
    detail::check_series(ensemble_nz.size(), reference_nz.size(), times_ms.size(), "fit_damping");
    auto objective = [&](double lambda) {
        double acc = 0.0;
        for (std::size_t i = 0; i < times_ms.size(); ++i) {
            const double r = ensemble_nz[i] - std::exp(-lambda * times_ms[i] * 1e-3) * reference_nz[i];
            acc += r * r;
        }
        return acc;
    };
    double hi = kDampingUpperBound;
    bool at_edge = false;
    double lambda = bracketed_minimize(objective, 0.0, hi, kDampingTolerance, &at_edge);
    for (int expansion = 0; at_edge && expansion < 4; ++expansion) {
        const double lo = hi;
        hi *= 10.0;
        lambda = bracketed_minimize(objective, lo, hi, kDampingTolerance, &at_edge);
    }
    if (at_edge) throw FitQualityError("damping fit ran into the upper bracket edge");
    DampingFit fit;
    fit.lambda = lambda;
    fit.residual = std::sqrt(objective(lambda) / static_cast<double>(times_ms.size()));
    fit.reference.assign(reference_nz.begin(), reference_nz.end());
    return fit;
}

struct HeatingFit {
    double w1 = 0.0;  // 1/s
    double w2 = 0.0;  // 1/s^2
    double residual = 0.0;
};

// Least squares of (E(t) - e_ref)/delta = w1 t - w2 t^2, t in seconds.
inline HeatingFit fit_heating(std::span<const double> energy, double e_ref, double delta,
                              std::span<const double> times_ms) {
    if (!(delta > 0.0)) throw ArgumentError("fit_heating needs delta > 0");
    detail::check_series(energy.size(), times_ms.size(), times_ms.size(), "fit_heating");
    // Regressors a = t, b = -t^2.
    double saa = 0.0, sab = 0.0, sbb = 0.0, say = 0.0, sby = 0.0;
    for (std::size_t i = 0; i < energy.size(); ++i) {
        const double t = times_ms[i] * 1e-3;
        const double a = t;
        const double b = -t * t;
        const double y = (energy[i] - e_ref) / delta;
        saa += a * a;
        sab += a * b;
        sbb += b * b;
        say += a * y;
        sby += b * y;
    }
    const double det = saa * sbb - sab * sab;
    if (!(std::abs(det) > 1e-12 * saa * sbb)) throw FitQualityError("heating fit: singular normal matrix");
    HeatingFit fit;
    fit.w1 = (sbb * say - sab * sby) / det;
    fit.w2 = (saa * sby - sab * say) / det;
    double acc = 0.0;
    for (std::size_t i = 0; i < energy.size(); ++i) {
        const double t = times_ms[i] * 1e-3;
        const double r = (energy[i] - e_ref) / delta - (fit.w1 * t - fit.w2 * t * t);
        acc += r * r;
    }
    fit.residual = std::sqrt(acc / static_cast<double>(energy.size()));
    return fit;
}

// (E(t) - e0) / delta
inline std::vector<double> heating_ratio_series(std::span<const double> energy, double e0, double delta) {
    if (!(delta > 0.0)) throw ArgumentError("heating_ratio_series needs delta > 0");
    std::vector<double> out;
    out.reserve(energy.size());
    for (double e : energy) out.push_back((e - e0) / delta);
    return out;
}

// Fits y(t) ~ exp(-k t) with k >= 0 in 1/ms.
inline double fit_exponential_rate(std::span<const double> y, std::span<const double> times_ms,
                                   double upper_rate) {
    detail::check_series(y.size(), times_ms.size(), times_ms.size(), "fit_exponential_rate");
    auto objective = [&](double k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double r = y[i] - std::exp(-k * times_ms[i]);
            acc += r * r;
        }
        return acc;
    };
    bool at_edge = false;
    const double k = bracketed_minimize(objective, 0.0, upper_rate, upper_rate * 1e-9, &at_edge);
    if (at_edge) throw FitQualityError("exponential fit ran into the upper bracket edge");
    return k;
}

}  // namespace neelmqc
