#include "sphartree/confinement.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>

#include <json.hpp>
#include <lapacke.h>

namespace sphartree {

namespace {

bool sampled_superharmonic(const std::function<double(double)>& V) {
    // V(z) >= C |z|^alpha with alpha > 2 for some C > 0, probed on a dyadic
    // ladder: require V(z)/z^2 to keep growing.
    double prev = 0.0;
    for (double z = 1.0; z <= 64.0; z *= 2.0) {
        const double q = std::min(V(z), V(-z)) / (z * z);
        if (q <= 1.25 * prev) return false;
        prev = q;
    }
    return true;
}

void validate(const RadialProblem& prob) {
    if (!(prob.eps > 0.0 && prob.eps <= 1.0))
        throw std::invalid_argument("radial problem: eps must be in (0, 1]");
    if (prob.r_max < 2.0) throw std::invalid_argument("radial problem: r_max must be >= 2");
    if (prob.n_r < 200) throw std::invalid_argument("radial problem: n_r must be >= 200");
}

}  // namespace

RadialProblem make_quartic_problem(double eps, double r_max, int n_r) {
    RadialProblem p;
    p.V_c = [](double z) { return 1.0 + z * z * z * z; };
    p.profile_name = "quartic";
    p.eps = eps;
    p.r_max = r_max;
    p.n_r = n_r;
    p.superharmonic = sampled_superharmonic(p.V_c);
    validate(p);
    return p;
}

RadialProblem make_harmonic_problem(double eps, double r_max, int n_r) {
    RadialProblem p;
    p.V_c = [](double z) { return z * z; };
    p.profile_name = "harmonic";
    p.eps = eps;
    p.r_max = r_max;
    p.n_r = n_r;
    p.superharmonic = sampled_superharmonic(p.V_c);
    validate(p);
    return p;
}

double RadialEigenbasis::overlap(const std::vector<double>& f, int p) const {
    if (f.size() != r.size())
        throw std::invalid_argument("overlap: profile not sampled on the basis grid");
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += f[j] * modes[p][j] * r[j] * r[j];
    return s * h;
}

double RadialEigenbasis::max_matrix_residual(const RadialProblem& prob) const {
    const int n = static_cast<int>(r.size());
    const double inv_h2 = 1.0 / (h * h);
    double worst = 0.0;
    for (std::size_t p = 0; p < energies.size(); ++p) {
        const std::vector<double>& w = modes_w[p];
        double rs = 0.0, ns = 0.0;
        for (int j = 0; j < n; ++j) {
            const double wl = j > 0 ? w[j - 1] : 0.0;
            const double wr = j + 1 < n ? w[j + 1] : 0.0;
            const double tw =
                (2.0 * w[j] - wl - wr) * inv_h2 + prob.confining_potential(r[j]) * w[j];
            const double res = tw - energies[p] * w[j];
            rs += res * res;
            ns += w[j] * w[j];
        }
        worst = std::max(worst, std::sqrt(rs / ns) / energies[p]);
    }
    return worst;
}

RadialEigenbasis radial_eigensolve(const RadialProblem& prob, int n_modes) {
    validate(prob);
    if (n_modes < 1) throw std::invalid_argument("radial_eigensolve: n_modes must be >= 1");
    if (n_modes > prob.n_r / 4)
        throw std::invalid_argument("radial_eigensolve: n_modes must be << n_r");

    const int n = prob.n_r;
    const double h = prob.r_max / (n + 1);

    RadialEigenbasis basis;
    basis.eps = prob.eps;
    basis.h = h;
    basis.r.resize(n);
    for (int j = 0; j < n; ++j) basis.r[j] = (j + 1) * h;

    std::vector<double> diag(n), off(n - 1, -1.0 / (h * h));
    for (int j = 0; j < n; ++j)
        diag[j] = 2.0 / (h * h) + prob.confining_potential(basis.r[j]);

    std::vector<double> w(n), z(static_cast<std::size_t>(n) * n_modes);
    std::vector<lapack_int> isuppz(2 * std::max(1, n_modes));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, n_modes, 0.0,
        &found, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || found != n_modes)
        throw std::runtime_error("radial_eigensolve: tridiagonal eigensolver failed");

    const double barrier = prob.confining_potential(basis.r.back());
    const double inv_sqrt_h = 1.0 / std::sqrt(h);
    basis.energies.assign(w.begin(), w.begin() + n_modes);
    basis.modes_w.resize(n_modes);
    basis.modes.resize(n_modes);
    basis.truncation_warning.resize(n_modes);
    for (int p = 0; p < n_modes; ++p) {
        std::vector<double>& wp = basis.modes_w[p];
        wp.assign(n, 0.0);
        // Sign convention: largest-magnitude entry positive.
        int jmax = 0;
        for (int j = 1; j < n; ++j)
            if (std::abs(z[static_cast<std::size_t>(p) * n + j]) >
                std::abs(z[static_cast<std::size_t>(p) * n + jmax]))
                jmax = j;
        const double sgn = z[static_cast<std::size_t>(p) * n + jmax] >= 0.0 ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j)
            wp[j] = sgn * z[static_cast<std::size_t>(p) * n + j] * inv_sqrt_h;
        std::vector<double>& up = basis.modes[p];
        up.assign(n, 0.0);
        for (int j = 0; j < n; ++j) up[j] = wp[j] / basis.r[j];
        basis.truncation_warning[p] = basis.energies[p] >= 0.99 * barrier;
    }
    return basis;
}

ConfinedState project_initial(const std::vector<double>& radial_profile,
                              const SpectralField& sphere_part,
                              const RadialEigenbasis& basis, int n_modes) {
    if (radial_profile.size() != basis.r.size())
        throw std::invalid_argument("project_initial: profile not sampled on the basis grid");
    if (n_modes < 1 || n_modes > static_cast<int>(basis.energies.size()))
        throw std::invalid_argument("project_initial: n_modes out of range");

    double profile_mass = 0.0;
    for (std::size_t j = 0; j < basis.r.size(); ++j)
        profile_mass += radial_profile[j] * radial_profile[j] * basis.r[j] * basis.r[j];
    profile_mass *= basis.h;

    ConfinedState state;
    state.basis = basis;
    state.retained_modes = n_modes;
    double captured = 0.0;
    for (int p = 0; p < n_modes; ++p) {
        const double ov = basis.overlap(radial_profile, p);
        captured += ov * ov;
        SpectralField comp = sphere_part;
        for (cplx& c : comp.a) c *= ov;
        state.sphere_components.components.push_back(std::move(comp));
        state.sphere_components.labels.push_back(p);
    }
    state.discarded_mass = profile_mass > 0.0 ? 1.0 - captured / profile_mass : 0.0;
    state.truncation_warning = state.discarded_mass > 0.05;
    return state;
}

TrajectoryRecord evolve_limit(const ConfinedState& state0, double dt, double t_end,
                              int snapshot_every) {
    TrajectoryRecord rec = evolve_mixed(state0.sphere_components, dt, t_end, snapshot_every);
    // Discrete (conslimit2): per-component masses weighted by the radial levels.
    rec.radial_energy.resize(rec.times.size());
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        double e = 0.0;
        for (int p = 0; p < state0.retained_modes; ++p)
            e += state0.basis.energies[p] * rec.component_mass[i][p];
        rec.radial_energy[i] = e;
    }
    return rec;
}

SpectralField reconstruct_at(const RadialEigenbasis& basis, const MixedState& comps, double t,
                             int r_index) {
    if (r_index < 0 || r_index >= static_cast<int>(basis.r.size()))
        throw std::invalid_argument("reconstruct_at: r_index out of range");
    SpectralField v(comps.bandlimit());
    for (std::size_t p = 0; p < comps.components.size(); ++p) {
        const cplx ph = std::polar(1.0, -t * basis.energies[p]) * basis.modes[p][r_index];
        for (std::size_t i = 0; i < v.a.size(); ++i) v.a[i] += ph * comps.components[p].a[i];
    }
    return v;
}

void write_basis_csv(const std::string& path, const RadialEigenbasis& basis,
                     const std::string& config_echo) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_basis_csv: cannot open " + path);
    os.precision(17);
    if (!config_echo.empty()) os << "# config " << config_echo << "\n";
    os << "r";
    for (std::size_t p = 0; p < basis.modes.size(); ++p) os << ",psi_" << p;
    os << "\n";
    for (std::size_t j = 0; j < basis.r.size(); ++j) {
        os << basis.r[j];
        for (std::size_t p = 0; p < basis.modes.size(); ++p) os << ',' << basis.modes[p][j];
        os << "\n";
    }
}

void write_energies_json(const std::string& path, const RadialEigenbasis& basis,
                         const std::string& config_echo) {
    nlohmann::json j;
    j["eps"] = basis.eps;
    j["E"] = basis.energies;
    if (!config_echo.empty()) j["config"] = nlohmann::json::parse(config_echo);
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_energies_json: cannot open " + path);
    os << j.dump(2) << "\n";
}

}  // namespace sphartree
