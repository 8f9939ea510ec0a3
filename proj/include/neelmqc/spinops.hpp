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

// Spin-1/2 chain operators on the product (Z) basis, applied matrix-free.
//
// Basis encoding: a basis index k in [0, 2^N) stores site i (1-based) in bit
// i-1. A set bit means m_i = +1/2, a clear bit means m_i = -1/2. With this
// encoding the two classical antiferromagnetic states are
//
//   |up>   : odd sites +1/2, even sites -1/2  (0b...0101 for N = 8: 0x55)
//   |down> : the bitwise complement of |up>   (0xAA for N = 8)
//
// I_y phase convention: <-1/2| I_y |+1/2> = +i/2, <+1/2| I_y |-1/2> = -i/2.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace neelmqc {

using Amplitude = std::complex<double>;
using StateVector = std::vector<Amplitude>;

enum class SiteAxis { X, Y, Z };

inline constexpr SiteAxis kAllAxes[] = {SiteAxis::X, SiteAxis::Y, SiteAxis::Z};

inline const char* axis_name(SiteAxis axis) {
    switch (axis) {
        case SiteAxis::X: return "x";
        case SiteAxis::Y: return "y";
        case SiteAxis::Z: return "z";
    }
    return "?";
}

using BasisIndex = std::uint64_t;

inline constexpr int kMaxBasisSpins = 30;

inline std::size_t basis_dimension(int n_spins) {
    if (n_spins < 1 || n_spins > kMaxBasisSpins) {
        throw ArgumentError("spin count must be in [1, " + std::to_string(kMaxBasisSpins) +
                            "], got " + std::to_string(n_spins));
    }
    return std::size_t{1} << n_spins;
}

// Number of sites encoded by a state of the given length.
inline int spin_count(std::size_t dimension) {
    if (dimension < 2 || !std::has_single_bit(dimension)) {
        throw ArgumentError("state length " + std::to_string(dimension) +
                            " is not 2^N for N >= 1");
    }
    return std::countr_zero(dimension);
}

// +1/2 or -1/2 for site (1-based) in basis state k.
inline double site_projection(BasisIndex k, int site) {
    return ((k >> (site - 1)) & 1u) ? 0.5 : -0.5;
}

inline BasisIndex neel_up_index(int n_spins) {
    BasisIndex k = 0;
    for (int b = 0; b < n_spins; b += 2) k |= BasisIndex{1} << b;
    return k;
}

inline BasisIndex neel_down_index(int n_spins) {
    const BasisIndex all = (BasisIndex{1} << n_spins) - 1;
    return all ^ neel_up_index(n_spins);
}

inline BasisIndex flip_all(BasisIndex k, int n_spins) {
    return k ^ ((BasisIndex{1} << n_spins) - 1);
}

inline StateVector basis_state(int n_spins, BasisIndex k) {
    StateVector s(basis_dimension(n_spins), Amplitude{0.0, 0.0});
    if (k >= s.size()) throw ArgumentError("basis index out of range");
    s[k] = 1.0;
    return s;
}

inline Amplitude inner(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    Amplitude acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

inline double norm_squared(std::span<const Amplitude> s) {
    double acc = 0.0;
    for (const auto& a : s) acc += std::norm(a);
    return acc;
}

inline void normalize(std::span<Amplitude> s) {
    const double n = std::sqrt(norm_squared(s));
    if (n == 0.0) throw NumericalError("cannot normalize a zero state");
    for (auto& a : s) a /= n;
}

namespace detail {

// out += weight * I_{site,axis} s, site is 1-based and already validated.
inline void accumulate_site(SiteAxis axis, int site, Amplitude weight,
                            std::span<const Amplitude> s, std::span<Amplitude> out) {
    const BasisIndex mask = BasisIndex{1} << (site - 1);
    const std::size_t dim = s.size();
    switch (axis) {
        case SiteAxis::Z:
            for (std::size_t k = 0; k < dim; ++k)
                out[k] += weight * ((k & mask) ? 0.5 : -0.5) * s[k];
            break;
        case SiteAxis::X:
            for (std::size_t k = 0; k < dim; ++k) out[k ^ mask] += weight * 0.5 * s[k];
            break;
        case SiteAxis::Y: {
            const Amplitude lower{0.0, 0.5};   // |+> -> |->
            const Amplitude raise{0.0, -0.5};  // |-> -> |+>
            for (std::size_t k = 0; k < dim; ++k)
                out[k ^ mask] += weight * ((k & mask) ? lower : raise) * s[k];
            break;
        }
    }
}

inline void check_site(int site, int n_spins) {
    if (site < 1 || site > n_spins) {
        throw ArgumentError("site " + std::to_string(site) + " outside [1, " +
                            std::to_string(n_spins) + "]");
    }
}

}  // namespace detail

// I_{site,axis} s with 1-based site.
inline StateVector apply_site(SiteAxis axis, int site, std::span<const Amplitude> s) {
    const int n = spin_count(s.size());
    detail::check_site(site, n);
    StateVector out(s.size(), Amplitude{0.0, 0.0});
    detail::accumulate_site(axis, site, 1.0, s, out);
    return out;
}

// (sum_i I_{i,axis}) s
inline StateVector apply_total_spin(SiteAxis axis, std::span<const Amplitude> s) {
    const int n = spin_count(s.size());
    StateVector out(s.size(), Amplitude{0.0, 0.0});
    if (axis == SiteAxis::Z) {
        for (std::size_t k = 0; k < s.size(); ++k) {
            const int ups = std::popcount(static_cast<BasisIndex>(k));
            out[k] = 0.5 * (2 * ups - n) * s[k];
        }
        return out;
    }
    for (int site = 1; site <= n; ++site) detail::accumulate_site(axis, site, 1.0, s, out);
    return out;
}

// Staggered magnetization N = sum_{odd} I_i - sum_{even} I_i, scaled by 2/N so
// that the classical AF states have N_z = +-1.
inline StateVector apply_neel(SiteAxis axis, std::span<const Amplitude> s) {
    const int n = spin_count(s.size());
    if (n % 2 != 0) {
        throw ConfigurationError("Neel operator needs an even number of sites, got " +
                                 std::to_string(n));
    }
    const double scale = 2.0 / n;
    StateVector out(s.size(), Amplitude{0.0, 0.0});
    for (int site = 1; site <= n; ++site) {
        const double sign = (site % 2 == 1) ? 1.0 : -1.0;
        detail::accumulate_site(axis, site, sign * scale, s, out);
    }
    return out;
}

// <s| O |s> for a Hermitian O already applied: returns Re <s|Os>.
inline double expectation(std::span<const Amplitude> s, std::span<const Amplitude> os) {
    return inner(s, os).real();
}

inline double neel_expectation(SiteAxis axis, std::span<const Amplitude> s) {
    return expectation(s, apply_neel(axis, s));
}

struct MatrixElement {
    BasisIndex row;
    BasisIndex col;
    double value;
};

// Nonzero elements of I_{i,axis} I_{i+1,axis} over the full 2^N basis. All
// are real, including YY where the two i/2 factors multiply out.
inline std::vector<MatrixElement> pair_coupling_matrix_elements(int n_spins, int i,
                                                                SiteAxis axis) {
    const std::size_t dim = basis_dimension(n_spins);
    if (i < 1 || i > n_spins - 1) {
        throw ArgumentError("bond " + std::to_string(i) + " outside [1, " +
                            std::to_string(n_spins - 1) + "]");
    }
    const BasisIndex a = BasisIndex{1} << (i - 1);
    const BasisIndex b = BasisIndex{1} << i;
    std::vector<MatrixElement> elements;
    elements.reserve(dim);
    for (BasisIndex k = 0; k < dim; ++k) {
        const bool up_a = k & a;
        const bool up_b = k & b;
        switch (axis) {
            case SiteAxis::Z:
                elements.push_back({k, k, (up_a == up_b) ? 0.25 : -0.25});
                break;
            case SiteAxis::X:
                elements.push_back({k ^ a ^ b, k, 0.25});
                break;
            case SiteAxis::Y:
                // (+-i/2)(+-i/2): antiparallel pair gives +1/4, parallel -1/4.
                elements.push_back({k ^ a ^ b, k, (up_a == up_b) ? -0.25 : 0.25});
                break;
        }
    }
    return elements;
}

}  // namespace neelmqc
