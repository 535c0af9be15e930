// High-frequency instability construction: the sectoral harmonic
// psi_n = (x1 + i x2)^n, energy minimization on the rotation-equivariant
// subspace span{Y_{n+k}^n} at fixed L2 norm, the multiplier omega_n, and the
// two-solution separation experiment.
//
// Everything in this module lives in L^2_n, where fields are
// e^{i n phi} g(theta); densities are then axisymmetric, so the minimizer
// works on a one-dimensional Gauss-Legendre colatitude grid.

#pragma once

#include <vector>

#include "sphartree/sht.hpp"

namespace sphartree {

// Coefficients b_k of Y_{n+k}^n, 0 <= k <= K, constrained to sum|b_k|^2 = delta^2.
struct SectoralSubspaceField {
    int n = 1;
    int K = 1;
    double delta = 1.0;
    std::vector<cplx> b;

    double norm() const;
};

// Embed into a full coefficient array (requires L >= n + K).
SpectralField to_spectral(const SectoralSubspaceField& f, int L);

struct MinimizerResult {
    SectoralSubspaceField field;
    double omega = 0.0;              // Lagrange multiplier
    double energy = 0.0;             // ||grad u||^2 + (1/2) int G(rho) rho
    double overlap = 0.0;            // |<f, phi_n>| / (||f|| ||phi_n||)
    double euler_residual = 0.0;     // ||(-Lap + G(rho)) f - omega f|| on the subspace
    int iterations = 0;
    bool converged = false;
    std::vector<double> energy_history;   // accepted line-search energies
};

// Field proportional to Y_n^n whose spatial values are cos^n(latitude) e^{i n phi}.
SpectralField build_psi(int n, int L);

// ||psi_n||^2 = 4 pi (2n)!!/(2n+1)!!, as a running product.
double psi_norm_sq_exact(int n);

// Projected gradient descent on the delta-sphere of span{Y_{n+k}^n} for the
// energy ||grad u||^2 + (1/2) int G(|u|^2)|u|^2, with backtracking line
// search. Convergence is certified by the Euler residual dropping below
// 10 * tol * delta; running out of iterations yields an unconverged result.
MinimizerResult minimize_on_subspace(int n, int K, double delta, double tol, int max_iter);

// kappa_n = (1 - (log n)^{-1/2})^{1/2}; requires n >= 3.
double kappa_n(int n);

struct SeparationReport {
    int n = 0;
    double delta0 = 0.0;
    double kappa = 0.0;
    double omega = 0.0;
    double omega_prime = 0.0;
    double t_n = 0.0;
    double s0 = 0.0;                    // ||f_n - f'_n|| at t = 0
    double separation_analytic = 0.0;   // ||u_n - u'_n|| at t_n from e^{-i omega t} f
    double separation_solver = 0.0;     // same from evolve; NaN when solver unused
    double overlap = 0.0;
    int iterations = 0;
    bool solver_used = false;
};

std::string to_json(const SeparationReport& r, const std::string& config_echo = "");

// Minimize at delta0 and kappa_n*delta0, align phases so <f, phi_n> is real
// positive, and report the initial and time-t_n separations; with use_solver
// the t_n separation is cross-checked by evolving both data at L = n + K.
SeparationReport instability_experiment(int n, double delta0, int K, bool use_solver,
                                        double tol = 1e-9, int max_iter = 200000);

}  // namespace sphartree
