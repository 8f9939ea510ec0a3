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

// Dipolar antiferromagnetic spin chain above a magnetic surface.
//
// Axes: Z is normal to the surface, Y runs along the chain. Internal units
// are angstrom for lengths, milliseconds for time and rad/ms (hbar = 1) for
// energies. SI appears only in coupling_constant() and energy_scales_report().

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "spinops.hpp"

namespace neelmqc {

struct PhysicalConstants {
    static constexpr double mu0 = 4.0e-7 * std::numbers::pi;  // N/A^2
    static constexpr double muN = 5.0507837e-27;               // J/T
    static constexpr double hbar = 1.0545718e-34;              // J s
    static constexpr double kB = 1.380649e-23;                 // J/K
    static constexpr double gamma_factor = -1.54;              // 129Xe, units of muN/hbar
    static constexpr double eV = 1.602177e-19;                 // J
};

// Surface field correlation length used for the uniform-field check (angstrom).
inline constexpr double kEnvironmentWavelength = 400.0;

inline constexpr int kDefaultSpinCap = 12;

struct ChainGeometry {
    int n_spins = 8;
    double d = 7.0;    // chain constant
    double r0 = 2.17;  // height of the moments above the surface

    void validate() const {
        if (n_spins < 2 || n_spins % 2 != 0)
            throw ArgumentError("n_spins must be even and >= 2, got " + std::to_string(n_spins));
        if (!(d > 0.0)) throw ArgumentError("chain constant d must be positive");
        if (!(r0 > 0.0)) throw ArgumentError("atom radius r0 must be positive");
    }
};

struct Anisotropy {
    double cx = 1.0;
    double cy = 1.0;
    double cz = 1.0;

    double operator[](SiteAxis a) const {
        return a == SiteAxis::X ? cx : a == SiteAxis::Y ? cy : cz;
    }
};

// Image-dipole anisotropy with tan(alpha) = d / (2 r0).
inline Anisotropy anisotropy_coefficients(double d, double r0) {
    if (!(d > 0.0) || !(r0 > 0.0))
        throw ArgumentError("anisotropy_coefficients needs d > 0 and r0 > 0");
    const double alpha = std::atan(d / (2.0 * r0));
    const double s = std::sin(alpha);
    const double c = std::cos(alpha);
    const double s3 = s * s * s;
    return {1.0 - 2.0 * s3,
            -2.0 - 2.0 * s3 * (1.0 - 3.0 * s * s),
            1.0 + 2.0 * s3 * (1.0 - 3.0 * c * c)};
}

// J = mu0 hbar^2 gamma^2 / (4 pi d^3), returned in rad/ms.
inline double coupling_constant(double d) {
    if (!(d > 0.0)) throw ArgumentError("coupling_constant needs d > 0");
    using C = PhysicalConstants;
    const double gamma_hbar = C::gamma_factor * C::muN;  // gamma * hbar, J/T
    const double d_m = d * 1e-10;
    const double joules = C::mu0 * gamma_hbar * gamma_hbar / (4.0 * std::numbers::pi * d_m * d_m * d_m);
    return joules / C::hbar * 1e-3;
}

struct ChainModel {
    ChainGeometry geometry;
    double J = 0.0;
    Anisotropy c;
    DenseMatrix h0;
    SparseMatrix h0_sparse;

    int n_spins() const { return geometry.n_spins; }
    std::size_t dimension() const { return h0.size(); }
};

// H0 = J sum_i [cx XX + cy YY + cz ZZ] over the N-1 open-chain bonds.
inline DenseMatrix assemble_chain_hamiltonian(int n_spins, double J, const Anisotropy& c,
                                              int spin_cap = kDefaultSpinCap) {
    if (n_spins > spin_cap) {
        throw ResourceError("dense Hamiltonian for " + std::to_string(n_spins) +
                            " spins exceeds the cap of " + std::to_string(spin_cap));
    }
    DenseMatrix h(basis_dimension(n_spins));
    for (int bond = 1; bond < n_spins; ++bond) {
        for (SiteAxis axis : kAllAxes) {
            const double w = J * c[axis];
            for (const auto& e : pair_coupling_matrix_elements(n_spins, bond, axis))
                h(e.row, e.col) += w * e.value;
        }
    }
    return h;
}

inline ChainModel make_model(const ChainGeometry& g, double J, const Anisotropy& c,
                             int spin_cap = kDefaultSpinCap) {
    ChainModel m;
    m.geometry = g;
    m.J = J;
    m.c = c;
    m.h0 = assemble_chain_hamiltonian(g.n_spins, J, c, spin_cap);
    m.h0_sparse = SparseMatrix::from_dense(m.h0);
    return m;
}

inline ChainModel build_hamiltonian(const ChainGeometry& g, int spin_cap = kDefaultSpinCap) {
    g.validate();
    return make_model(g, coupling_constant(g.d), anisotropy_coefficients(g.d, g.r0), spin_cap);
}

// Classical AF energy for a unit Neel direction n.
inline double classical_energy(const ChainModel& m, const std::array<double, 3>& n) {
    const double len2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    if (std::abs(std::sqrt(len2) - 1.0) > 1e-9)
        throw ArgumentError("classical_energy needs a unit vector");
    return -m.J * (m.n_spins() - 1) * (m.c.cx * n[0] * n[0] + m.c.cy * n[1] * n[1] + m.c.cz * n[2] * n[2]) / 4.0;
}

// Barrier height in the X-Y plane as a function of the in-plane angle from X.
inline std::vector<double> barrier_profile(const ChainModel& m, std::span<const double> phi) {
    std::vector<double> out;
    out.reserve(phi.size());
    for (double p : phi) {
        const double cp = std::cos(p);
        const double sp = std::sin(p);
        out.push_back(-m.J * (m.n_spins() - 1) * (m.c.cx * cp * cp + m.c.cy * sp * sp) / 4.0);
    }
    return out;
}

inline double rad_per_ms_to_mev(double w) {
    using C = PhysicalConstants;
    return w * 1e3 * C::hbar / C::eV * 1e3;
}

struct EnergyScales {
    double delta_mev = 0.0;
    double barrier_mev = 0.0;  // V_B = E^A_max(pi/2)
    double thermal_mev = 0.0;  // k_B T
    double chain_length = 0.0; // angstrom
    // Both energy ratios << 1 justify a classical environment; the length
    // ratio << 1 justifies a field uniform over the chain.
    double delta_over_thermal = 0.0;
    double barrier_over_thermal = 0.0;
    double length_over_wavelength = 0.0;
};

inline EnergyScales energy_scales_report(const ChainModel& m, double delta, double temperature) {
    if (!(delta > 0.0)) throw ArgumentError("energy_scales_report needs delta > 0");
    if (!(temperature > 0.0)) throw ArgumentError("temperature must be positive");
    using C = PhysicalConstants;
    const double half_pi = std::numbers::pi / 2.0;
    EnergyScales r;
    r.delta_mev = rad_per_ms_to_mev(delta);
    r.barrier_mev = rad_per_ms_to_mev(barrier_profile(m, std::span<const double>(&half_pi, 1))[0]);
    r.thermal_mev = C::kB * temperature / C::eV * 1e3;
    r.chain_length = (m.n_spins() - 1) * m.geometry.d;
    r.delta_over_thermal = r.delta_mev / r.thermal_mev;
    r.barrier_over_thermal = r.barrier_mev / r.thermal_mev;
    r.length_over_wavelength = r.chain_length / kEnvironmentWavelength;
    return r;
}

}  // namespace neelmqc
