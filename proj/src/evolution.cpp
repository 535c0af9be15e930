#include "sphartree/evolution.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>

#include "sphartree/operators.hpp"

namespace sphartree {

namespace {

// One trajectory's working set: grid, transform plans, and scratch shared
// across steps.
class StrangStepper {
public:
    explicit StrangStepper(int L)
        : L_(L),
          grid_(make_grid(L)),
          plan_(detail::make_plan(grid_, L)),
          plan2_(detail::make_plan(grid_, 2 * L)) {}

    const SphereGrid& grid() const { return grid_; }

    void half_linear(MixedState& s, double dt) const {
        for (SpectralField& u : s.components)
            for (int l = 0; l <= L_; ++l) {
                const cplx ph = std::polar(1.0, -0.5 * dt * l * (l + 1.0));
                for (int m = -l; m <= l; ++m) u.at(l, m) *= ph;
            }
    }

    // u <- u exp(-i dt V), V = G(total density), recomputed once per call.
    void nonlinear(MixedState& s, double dt) {
        const std::size_t nv = static_cast<std::size_t>(grid_.n_lat) * grid_.n_lon;
        values_.assign(s.components.size(), {});
        rho_.assign(nv, 0.0);
        for (std::size_t p = 0; p < s.components.size(); ++p) {
            values_[p] = detail::synthesize(s.components[p], plan_);
            for (std::size_t i = 0; i < nv; ++i) rho_[i] += std::norm(values_[p].values[i]);
        }
        std::vector<cplx> half = detail::analyze_real(rho_, plan2_);
        for (int l = 0; l <= 2 * L_; ++l) {
            const double ml = 1.0 / (2.0 * l + 1.0);
            for (int m = 0; m <= l; ++m) half[detail::half_index(l, m)] *= ml;
        }
        const std::vector<double> pot = detail::synthesize_real(half, plan2_);
        phase_.resize(nv);
        for (std::size_t i = 0; i < nv; ++i) phase_[i] = std::polar(1.0, -dt * pot[i]);
        for (std::size_t p = 0; p < s.components.size(); ++p) {
            for (std::size_t i = 0; i < nv; ++i) values_[p].values[i] *= phase_[i];
            s.components[p] = detail::analyze(values_[p], plan_);
        }
    }

    void step(MixedState& s, double dt) {
        half_linear(s, dt);
        nonlinear(s, dt);
        half_linear(s, dt);
    }

    // Energy of the total density: sum_p ||grad w_p||^2 + (1/2) int G(rho) rho.
    double energy(const MixedState& s) {
        const std::size_t nv = static_cast<std::size_t>(grid_.n_lat) * grid_.n_lon;
        rho_.assign(nv, 0.0);
        double grad = 0.0;
        for (const SpectralField& u : s.components) {
            const SpatialField v = detail::synthesize(u, plan_);
            for (std::size_t i = 0; i < nv; ++i) rho_[i] += std::norm(v.values[i]);
            for (int l = 1; l <= L_; ++l) {
                const double lam = static_cast<double>(l) * (l + 1);
                for (int m = -l; m <= l; ++m) grad += lam * std::norm(u.at(l, m));
            }
        }
        const std::vector<cplx> half = detail::analyze_real(rho_, plan2_);
        return grad + 0.5 * detail::hartree_from_half(half, 2 * L_);
    }

private:
    int L_;
    SphereGrid grid_;
    detail::TransformPlan plan_, plan2_;
    std::vector<SpatialField> values_;
    std::vector<double> rho_;
    std::vector<cplx> phase_;
};

bool finite_state(const MixedState& s) {
    for (const SpectralField& u : s.components)
        for (const cplx& c : u.a)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

}  // namespace

double MixedState::total_mass() const {
    double s = 0.0;
    for (const SpectralField& u : components) s += u.norm_sq();
    return s;
}

double default_dt(int L) {
    const double lam_max = static_cast<double>(L) * (L + 1);
    return lam_max > 0.0 ? 0.5 / lam_max : 0.5;
}

SpectralField step_strang(const SpectralField& u, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("step_strang: dt must be > 0");
    StrangStepper stepper(u.L);
    MixedState s(u);
    stepper.step(s, dt);
    return s.components.front();
}

double TrajectoryRecord::mass_drift() const {
    if (mass.empty()) return 0.0;
    const double q0 = mass.front();
    double d = 0.0;
    for (double q : mass) d = std::max(d, std::abs(q - q0));
    return q0 != 0.0 ? d / q0 : d;
}

double TrajectoryRecord::energy_drift() const {
    if (energy.empty()) return 0.0;
    const double e0 = energy.front();
    double d = 0.0;
    for (double e : energy) d = std::max(d, std::abs(e - e0));
    return d;
}

void TrajectoryRecord::write_csv(const std::string& path, const std::string& config_echo) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    os.precision(17);
    if (!config_echo.empty()) os << "# config " << config_echo << "\n";
    os << "step,t,mass,energy";
    if (!radial_energy.empty()) os << ",radial_energy";
    const std::size_t ncomp = component_mass.empty() ? 0 : component_mass.front().size();
    for (std::size_t p = 0; p < ncomp; ++p) os << ",mass_" << p;
    os << "\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << i << ',' << times[i] << ',' << mass[i] << ',' << energy[i];
        if (!radial_energy.empty()) os << ',' << radial_energy[i];
        for (std::size_t p = 0; p < ncomp; ++p) os << ',' << component_mass[i][p];
        os << "\n";
    }
    if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

TrajectoryRecord evolve_mixed(const MixedState& state0, double dt, double t_end,
                              int snapshot_every) {
    if (dt <= 0.0) throw std::invalid_argument("evolve: dt must be > 0");
    if (t_end < 0.0) throw std::invalid_argument("evolve: t_end must be >= 0");
    if (state0.components.empty())
        throw std::invalid_argument("evolve: state has no components");
    for (const SpectralField& u : state0.components)
        if (u.L != state0.bandlimit())
            throw std::invalid_argument("evolve: components must share one bandlimit");

    StrangStepper stepper(state0.bandlimit());
    MixedState s = state0;
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(t_end / dt));

    TrajectoryRecord rec;
    rec.dt = dt;
    rec.snapshot_every = snapshot_every;
    auto record = [&](std::size_t step) {
        rec.times.push_back(step * dt);
        rec.mass.push_back(s.total_mass());
        rec.energy.push_back(stepper.energy(s));
        std::vector<double> cm(s.components.size());
        for (std::size_t p = 0; p < s.components.size(); ++p) cm[p] = s.component_mass(p);
        rec.component_mass.push_back(std::move(cm));
        if (snapshot_every > 0 && step % static_cast<std::size_t>(snapshot_every) == 0)
            rec.snapshots.emplace_back(step, s);
    };

    record(0);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        stepper.step(s, dt);
        if (!finite_state(s)) throw DivergedError(step);
        record(step);
    }
    rec.final_state = std::move(s);
    return rec;
}

TrajectoryRecord evolve(const SpectralField& u0, double dt, double t_end, int snapshot_every) {
    return evolve_mixed(MixedState(u0), dt, t_end, snapshot_every);
}

SpectralField evolve_final_state(const SpectralField& u0, double dt, std::size_t n_steps) {
    if (dt <= 0.0) throw std::invalid_argument("evolve: dt must be > 0");
    StrangStepper stepper(u0.L);
    MixedState s(u0);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        stepper.step(s, dt);
        if (!finite_state(s)) throw DivergedError(step);
    }
    return std::move(s.components.front());
}

SpatialField shared_potential(const MixedState& state) {
    const SphereGrid g = make_grid(state.bandlimit());
    const std::size_t nv = static_cast<std::size_t>(g.n_lat) * g.n_lon;
    std::vector<double> rho(nv, 0.0);
    for (const SpectralField& u : state.components) {
        const SpatialField v = synthesize(u, g);
        for (std::size_t i = 0; i < nv; ++i) rho[i] += std::norm(v.values[i]);
    }
    SpatialField dens(g);
    for (std::size_t i = 0; i < nv; ++i) dens.values[i] = rho[i];
    return poisson_potential(dens);
}

}  // namespace sphartree
