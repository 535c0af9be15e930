// The confined-limit model: eigenpairs of the radial operator
//   H_r = -(1/r^2) d/dr (r^2 d/dr) + V_c^eps(r),   V_c^eps(r) = eps^{-2} V_c((r-1)/eps),
// discretized through w = r u (which turns H_r into -w'' + V w with w(0) = 0),
// and the mixed-state limit dynamics whose components share one potential.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sphartree/evolution.hpp"
#include "sphartree/sht.hpp"

namespace sphartree {

struct RadialProblem {
    std::function<double(double)> V_c;    // profile in the stretched variable z
    std::string profile_name;
    double eps = 0.1;
    double r_max = 2.0;
    int n_r = 2000;
    bool superharmonic = true;            // V_c(z) >= C|z|^alpha, alpha > 2 (sampled)

    double confining_potential(double r) const {
        return V_c((r - 1.0) / eps) / (eps * eps);
    }
};

// Shipped profile V_c(z) = 1 + z^4 (alpha = 4).
RadialProblem make_quartic_problem(double eps, double r_max = 2.0, int n_r = 2000);

// V_c(z) = z^2: outside the super-harmonic assumption, kept as an exactly
// solvable oracle for the eigensolver (E_p = (2p+1)/eps^2).
RadialProblem make_harmonic_problem(double eps, double r_max = 2.0, int n_r = 2000);

struct RadialEigenbasis {
    double eps = 0.0;
    double h = 0.0;                       // uniform spacing, r_j = (j+1) h
    std::vector<double> r;                // interior nodes in (0, r_max)
    std::vector<double> energies;         // ascending
    std::vector<std::vector<double>> modes;    // u_p = w_p / r, orthonormal in r^2 dr
    std::vector<std::vector<double>> modes_w;  // w_p = r u_p, orthonormal in h*sum
    std::vector<bool> truncation_warning;      // E_p within 1% of the boundary barrier

    // <f, psi_p> in L^2(r^2 dr) by trapezoidal quadrature, f sampled on r.
    double overlap(const std::vector<double>& f, int p) const;
    // max_p ||T w_p - E_p w_p|| / (E_p ||w_p||) for the discrete matrix.
    double max_matrix_residual(const RadialProblem& prob) const;
};

RadialEigenbasis radial_eigensolve(const RadialProblem& prob, int n_modes);

struct ConfinedState {
    RadialEigenbasis basis;
    MixedState sphere_components;         // one omega_p per retained mode
    int retained_modes = 0;
    double discarded_mass = 0.0;          // relative, from the initial projection
    bool truncation_warning = false;      // discarded mass > 5%
};

// Separable initial data u0(r, sigma) = radial_profile(r) * sphere_part(sigma):
// omega_p(0) = <radial_profile, psi_p>_{r^2 dr} * sphere_part.
ConfinedState project_initial(const std::vector<double>& radial_profile,
                              const SpectralField& sphere_part,
                              const RadialEigenbasis& basis, int n_modes);

// Evolves the components by the shared-potential mixed-state flow and records
// the three conserved quantities: total mass, radial energy sum_p E_p ||w_p||^2,
// and the angular-plus-Hartree energy.
TrajectoryRecord evolve_limit(const ConfinedState& state0, double dt, double t_end,
                              int snapshot_every = 0);

// v(t, r_j, .) = sum_p e^{-i t E_p} omega_p(t) psi_p(r_j) as a sphere field.
SpectralField reconstruct_at(const RadialEigenbasis& basis, const MixedState& comps, double t,
                             int r_index);

// CSV with columns r, psi_0..psi_{P-1}; energies as JSON {"eps":..., "E":[...]}.
void write_basis_csv(const std::string& path, const RadialEigenbasis& basis,
                     const std::string& config_echo = "");
void write_energies_json(const std::string& path, const RadialEigenbasis& basis,
                         const std::string& config_echo = "");

}  // namespace sphartree
