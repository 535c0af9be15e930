// Strang-split time integration of  i du/dt + Lap u = G(|u|^2) u  for single
// fields and for mixed states coupled through one shared potential built from
// the total density. Both sub-flows are exact: the linear phase is diagonal
// per degree and the potential is invariant under the nonlinear phase flow.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphartree/sht.hpp"

namespace sphartree {

struct MixedState {
    std::vector<SpectralField> components;   // share one bandlimit
    std::vector<int> labels;                 // mode indices p

    MixedState() = default;
    explicit MixedState(SpectralField u) {
        components.push_back(std::move(u));
        labels.push_back(0);
    }

    int bandlimit() const { return components.empty() ? 0 : components.front().L; }
    double total_mass() const;
    double component_mass(std::size_t p) const { return components[p].norm_sq(); }
};

struct DivergedError : std::runtime_error {
    std::size_t step;
    explicit DivergedError(std::size_t step_index)
        : std::runtime_error("state diverged (NaN/overflow) at step " +
                             std::to_string(step_index)),
          step(step_index) {}
};

// Per-step observable time series plus optional coefficient snapshots.
struct TrajectoryRecord {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<double> mass;          // total Q
    std::vector<double> energy;        // ||grad u||^2 + (1/2) int G(rho) rho
    std::vector<std::vector<double>> component_mass;  // [record][component]
    std::vector<double> radial_energy;                // confined runs only
    int snapshot_every = 0;
    std::vector<std::pair<std::size_t, MixedState>> snapshots;
    MixedState final_state;

    double mass_drift() const;     // max_t |Q - Q0| / Q0
    double energy_drift() const;   // max_t |E - E0|

    // step,t,mass,energy[,radial_energy],mass_0..mass_{P-1}; config_echo, if
    // nonempty, is embedded as a leading "# config ..." comment line.
    void write_csv(const std::string& path, const std::string& config_echo = "") const;
};

// Largest linear phase advance <= 0.5 rad per step.
double default_dt(int L);

SpectralField step_strang(const SpectralField& u, double dt);

TrajectoryRecord evolve(const SpectralField& u0, double dt, double t_end,
                        int snapshot_every = 0);

TrajectoryRecord evolve_mixed(const MixedState& state0, double dt, double t_end,
                              int snapshot_every = 0);

// Stepping only, no per-step observables; for callers that need just u(t_end).
SpectralField evolve_final_state(const SpectralField& u0, double dt, std::size_t n_steps);

// The potential V = G(sum_q |w_q|^2) all components share, on make_grid(L).
SpatialField shared_potential(const MixedState& state);

}  // namespace sphartree
