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

// Dense real-symmetric eigensolver: Householder reduction to tridiagonal
// form, then QL iteration with implicit Wilkinson shifts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "spinops.hpp"

namespace neelmqc {

struct EigenDecomposition {
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // vectors[n] is psi_n

    std::size_t dimension() const { return values.size(); }

    StateVector state(std::size_t n) const {
        return StateVector(vectors[n].begin(), vectors[n].end());
    }

    // <psi_n | s> for every n
    std::vector<Amplitude> coefficients(std::span<const Amplitude> s) const {
        std::vector<Amplitude> c(values.size());
        for (std::size_t n = 0; n < values.size(); ++n) {
            Amplitude acc{0.0, 0.0};
            const auto& v = vectors[n];
            for (std::size_t k = 0; k < s.size(); ++k) acc += v[k] * s[k];
            c[n] = acc;
        }
        return c;
    }

    StateVector synthesize(std::span<const Amplitude> coeffs) const {
        StateVector s(values.size(), Amplitude{0.0, 0.0});
        for (std::size_t n = 0; n < coeffs.size(); ++n) {
            const Amplitude c = coeffs[n];
            if (c == Amplitude{0.0, 0.0}) continue;
            const auto& v = vectors[n];
            for (std::size_t k = 0; k < s.size(); ++k) s[k] += c * v[k];
        }
        return s;
    }
};

namespace detail {

// Householder reduction of the symmetric matrix a (row-major, in place).
// On return a holds the orthogonal transform Q, diag the diagonal and
// offdiag[i] the (i, i-1) subdiagonal element (offdiag[0] = 0).
inline void householder_tridiagonalize(DenseMatrix& a, std::vector<double>& diag,
                                       std::vector<double>& offdiag) {
    const std::size_t n = a.size();
    diag.assign(n, 0.0);
    offdiag.assign(n, 0.0);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                offdiag[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                offdiag[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    offdiag[j] = g / h;
                    f += offdiag[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    offdiag[j] = g = offdiag[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k) a(j, k) -= (f * offdiag[k] + g * a(i, k));
                }
            }
        } else {
            offdiag[i] = a(i, l);
        }
        diag[i] = h;
    }
    diag[0] = 0.0;
    offdiag[0] = 0.0;
    // Accumulate the transforms.
    for (std::size_t i = 0; i < n; ++i) {
        if (diag[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
            }
        }
        diag[i] = a(i, i);
        a(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

// QL iteration on the tridiagonal (diag, offdiag); z accumulates rotations
// (columns are eigenvectors on return). Throws once max_iterations is spent.
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& offdiag,
                           DenseMatrix& z, std::size_t max_iterations) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) offdiag[i - 1] = offdiag[i];
    offdiag[n - 1] = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::size_t iterations = 0;

    for (std::size_t l = 0; l < n; ++l) {
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(offdiag[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iterations > max_iterations) {
                double residual = 0.0;
                for (std::size_t k = 0; k + 1 < n; ++k) residual = std::max(residual, std::abs(offdiag[k]));
                throw NumericalError("QL iteration did not converge after " +
                                     std::to_string(max_iterations) +
                                     " iterations; largest off-diagonal " + std::to_string(residual));
            }
            double g = (diag[l + 1] - diag[l]) / (2.0 * offdiag[l]);
            double r = std::hypot(g, 1.0);
            g = diag[m] - diag[l] + offdiag[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (std::size_t ii = m; ii-- > l;) {
                double f = s * offdiag[ii];
                const double b = c * offdiag[ii];
                offdiag[ii + 1] = r = std::hypot(f, g);
                if (r == 0.0) {
                    diag[ii + 1] -= p;
                    offdiag[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[ii + 1] - p;
                r = (diag[ii] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[ii + 1] = g + p;
                g = c * r - b;
                for (std::size_t k = 0; k < n; ++k) {
                    f = z(k, ii + 1);
                    z(k, ii + 1) = s * z(k, ii) + c * f;
                    z(k, ii) = c * z(k, ii) - s * f;
                }
            }
            if (underflow) continue;
            diag[l] -= p;
            offdiag[l] = g;
            offdiag[m] = 0.0;
        } while (m != l);
    }
}

inline void fix_phase(std::vector<double>& v, std::optional<BasisIndex> anchor) {
    double ref = 0.0;
    if (anchor && *anchor < v.size() && std::abs(v[*anchor]) >= 1e-12) {
        ref = v[*anchor];
    } else {
        std::size_t best = 0;
        for (std::size_t k = 1; k < v.size(); ++k)
            if (std::abs(v[k]) > std::abs(v[best])) best = k;
        ref = v.empty() ? 0.0 : v[best];
    }
    if (ref < 0.0)
        for (double& x : v) x = -x;
}

}  // namespace detail

// Default phase anchor: the |down> AF state when the dimension is 2^N.
inline std::optional<BasisIndex> default_phase_anchor(std::size_t dim) {
    if (dim >= 2 && std::has_single_bit(dim)) return neel_down_index(std::countr_zero(dim));
    return std::nullopt;
}

// Full spectrum of a real symmetric matrix. Eigenvectors are phase-fixed so
// that their component on `anchor` is non-negative; when that component is
// below 1e-12 the largest-magnitude component is made positive instead.
inline EigenDecomposition diagonalize(const DenseMatrix& h, std::optional<BasisIndex> anchor) {
    const std::size_t n = h.size();
    const double scale = h.max_abs();
    if (h.asymmetry() > 1e-10 * scale)
        throw ArgumentError("diagonalize needs a symmetric matrix");

    EigenDecomposition out;
    if (n == 0) return out;

    DenseMatrix z = h;
    std::vector<double> diag, offdiag;
    detail::householder_tridiagonalize(z, diag, offdiag);
    detail::tridiagonal_ql(diag, offdiag, z, 30 * n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });

    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t idx : order) {
        out.values.push_back(diag[idx]);
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = z(k, idx);
        detail::fix_phase(v, anchor);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

inline EigenDecomposition diagonalize(const DenseMatrix& h) {
    return diagonalize(h, default_phase_anchor(h.size()));
}

// exp(-i H t) s, evaluated in the eigenbasis.
inline StateVector propagate(const EigenDecomposition& decomp, std::span<const Amplitude> s, double t) {
    auto c = decomp.coefficients(s);
    for (std::size_t n = 0; n < c.size(); ++n) c[n] *= std::polar(1.0, -decomp.values[n] * t);
    return decomp.synthesize(c);
}

}  // namespace neelmqc
