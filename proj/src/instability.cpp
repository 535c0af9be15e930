#include "sphartree/instability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "sphartree/evolution.hpp"

namespace sphartree {

namespace {

constexpr double kPi = std::numbers::pi;

// 1D colatitude engine for fields e^{i n phi} g(theta). The Gauss order is
// chosen so every quadrature below (densities of degree 2(n+K) against
// Legendre functions of the same degree) is exact.
class SectoralEngine {
public:
    SectoralEngine(int n, int K) : n_(n), K_(K), Ld_(2 * (n + K)) {
        const int order = 2 * (n + K) + 2;
        grid_ = make_offset_grid(order, 1, 0.0);
        const int nt = grid_.n_lat;
        pn_.assign(static_cast<std::size_t>(K + 1) * nt, 0.0);
        p0_.assign(static_cast<std::size_t>(Ld_ + 1) * nt, 0.0);
        std::vector<double> col(std::max(n + K + 1, Ld_ + 1));
        for (int i = 0; i < nt; ++i) {
            legendre_column(n, n + K, grid_.x[i], col.data());
            for (int k = 0; k <= K; ++k) pn_[static_cast<std::size_t>(k) * nt + i] = col[k];
            legendre_column(0, Ld_, grid_.x[i], col.data());
            for (int l = 0; l <= Ld_; ++l) p0_[static_cast<std::size_t>(l) * nt + i] = col[l];
        }
        g_.resize(nt);
        rho_.resize(nt);
        pot_.resize(nt);
        rho_hat_.resize(Ld_ + 1);
    }

    double lambda(int k) const {
        const double l = n_ + k;
        return l * (l + 1.0);
    }

    // Fills the cached g, rho, potential for the current coefficients.
    void refresh(const std::vector<cplx>& b) {
        const int nt = grid_.n_lat;
        for (int i = 0; i < nt; ++i) {
            cplx s = 0.0;
            for (int k = 0; k <= K_; ++k) s += b[k] * pn_[static_cast<std::size_t>(k) * nt + i];
            g_[i] = s;
            rho_[i] = std::norm(s);
        }
        for (int l = 0; l <= Ld_; ++l) {
            double s = 0.0;
            const double* pl = &p0_[static_cast<std::size_t>(l) * nt];
            for (int i = 0; i < nt; ++i) s += grid_.weight[i] * rho_[i] * pl[i];
            rho_hat_[l] = 2.0 * kPi * s;
        }
        for (int i = 0; i < nt; ++i) {
            double s = 0.0;
            for (int l = 0; l <= Ld_; ++l)
                s += rho_hat_[l] / (2.0 * l + 1.0) * p0_[static_cast<std::size_t>(l) * nt + i];
            pot_[i] = s;
        }
    }

    // int G(rho) rho over the sphere, from the cached state.
    double hartree() const {
        double s = 0.0;
        for (int i = 0; i < grid_.n_lat; ++i) s += grid_.weight[i] * pot_[i] * rho_[i];
        return 2.0 * kPi * s;
    }

    double dirichlet(const std::vector<cplx>& b) const {
        double s = 0.0;
        for (int k = 0; k <= K_; ++k) s += lambda(k) * std::norm(b[k]);
        return s;
    }

    double energy(const std::vector<cplx>& b) {
        refresh(b);
        return dirichlet(b) + 0.5 * hartree();
    }

    // dE/d(conj b_k) = lambda_k b_k + <G(rho) u, Y_{n+k}^n>; call refresh first.
    void gradient(const std::vector<cplx>& b, std::vector<cplx>& grad) const {
        const int nt = grid_.n_lat;
        grad.resize(K_ + 1);
        for (int k = 0; k <= K_; ++k) {
            cplx s = 0.0;
            const double* pk = &pn_[static_cast<std::size_t>(k) * nt];
            for (int i = 0; i < nt; ++i) s += grid_.weight[i] * pot_[i] * g_[i] * pk[i];
            grad[k] = lambda(k) * b[k] + 2.0 * kPi * s;
        }
    }

private:
    int n_, K_, Ld_;
    SphereGrid grid_;                 // only the latitude nodes/weights are used
    std::vector<double> pn_, p0_;
    std::vector<cplx> g_;
    std::vector<double> rho_, pot_, rho_hat_;
};

double norm_of(const std::vector<cplx>& b) {
    double s = 0.0;
    for (const cplx& c : b) s += std::norm(c);
    return std::sqrt(s);
}

void rescale_to(std::vector<cplx>& b, double delta) {
    const double nrm = norm_of(b);
    if (nrm == 0.0) throw std::runtime_error("minimizer iterate collapsed to zero");
    const double f = delta / nrm;
    for (cplx& c : b) c *= f;
}

// Rotate the global phase so that <f, phi_n> = b_0 (-1)^n delta is real positive.
void align_phase(SectoralSubspaceField& f) {
    cplx anchor = f.b[0];
    if (f.n % 2 != 0) anchor = -anchor;
    const double mag = std::abs(anchor);
    if (mag == 0.0) return;
    const cplx ph = std::conj(anchor) / mag;
    for (cplx& c : f.b) c *= ph;
}

}  // namespace

double SectoralSubspaceField::norm() const { return norm_of(b); }

SpectralField to_spectral(const SectoralSubspaceField& f, int L) {
    if (L < f.n + f.K)
        throw std::invalid_argument("to_spectral: bandlimit below n + K");
    SpectralField out(L);
    for (int k = 0; k <= f.K; ++k) out.at(f.n + k, f.n) = f.b[k];
    return out;
}

double psi_norm_sq_exact(int n) {
    if (n < 0) throw std::invalid_argument("psi_norm_sq_exact: n must be >= 0");
    double prod = 1.0;
    for (int k = 1; k <= n; ++k) prod *= (2.0 * k) / (2.0 * k + 1.0);
    return 4.0 * kPi * prod;
}

SpectralField build_psi(int n, int L) {
    if (n < 0) throw std::invalid_argument("build_psi: n must be >= 0");
    if (L < n) throw std::invalid_argument("build_psi: bandlimit below n");
    SpectralField f(L);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;   // absorbs Condon-Shortley
    f.at(n, n) = sign * std::sqrt(psi_norm_sq_exact(n));
    return f;
}

MinimizerResult minimize_on_subspace(int n, int K, double delta, double tol, int max_iter) {
    if (n < 1) throw std::invalid_argument("minimize_on_subspace: n must be >= 1");
    if (K < 1) throw std::invalid_argument("minimize_on_subspace: K must be >= 1");
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("minimize_on_subspace: delta must be in (0, 1]");
    if (tol <= 0.0) throw std::invalid_argument("minimize_on_subspace: tol must be > 0");

    SectoralEngine eng(n, K);
    std::vector<cplx> b(K + 1, cplx(0.0));
    b[0] = delta;   // the Dirichlet minimizer phi_n, up to phase

    const double s0 = 1.0 / (2.0 * (n + K) * (n + K + 1.0));
    const double s_cap = 200.0 * s0;
    double step = s0;

    MinimizerResult res;
    double energy = eng.energy(b);
    res.energy_history.push_back(energy);

    std::vector<cplx> grad, tangent(K + 1), trial(K + 1);
    double omega = 0.0, residual = 0.0;
    int iter = 0;
    bool converged = false;

    auto refresh_residual = [&]() {
        eng.refresh(b);
        eng.gradient(b, grad);
        double ip = 0.0;
        for (int k = 0; k <= K; ++k)
            ip += grad[k].real() * b[k].real() + grad[k].imag() * b[k].imag();
        omega = ip / (delta * delta);
        double rs = 0.0;
        for (int k = 0; k <= K; ++k) {
            tangent[k] = grad[k] - omega * b[k];
            rs += std::norm(tangent[k]);
        }
        residual = std::sqrt(rs);
    };

    // Phase 1: backtracking descent until the energy comparisons hit the
    // double-precision floor (or the certificate is already met).
    for (; iter < max_iter; ++iter) {
        refresh_residual();
        if (residual < 10.0 * tol * delta) {
            converged = true;
            break;
        }
        bool accepted = false;
        while (step > 1e-18 * s0) {
            for (int k = 0; k <= K; ++k) trial[k] = b[k] - step * tangent[k];
            rescale_to(trial, delta);
            const double e_trial = eng.energy(trial);
            if (e_trial < energy) {
                b = trial;
                energy = e_trial;
                res.energy_history.push_back(energy);
                step = std::min(step * 1.5, s_cap);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;   // energy differences at rounding level
    }

    // Phase 2: the same projected-gradient map at a fixed safe step, driven
    // by the Euler residual alone; the residual is immune to the energy
    // cancellation that stops phase 1 around 1e-6.
    if (!converged) {
        double s = s0;
        double best = residual;
        for (; iter < max_iter; ++iter) {
            for (int k = 0; k <= K; ++k) trial[k] = b[k] - s * tangent[k];
            rescale_to(trial, delta);
            b = trial;
            refresh_residual();
            if (residual < 10.0 * tol * delta) {
                converged = true;
                break;
            }
            if (residual > 2.0 * best) {
                s *= 0.5;
                if (s < 1e-6 * s0) break;
            }
            best = std::min(best, residual);
        }
        energy = eng.energy(b);
    }

    res.field.n = n;
    res.field.K = K;
    res.field.delta = delta;
    res.field.b = b;
    align_phase(res.field);
    res.omega = omega;
    res.energy = energy;
    res.overlap = std::abs(res.field.b[0]) / delta;
    res.euler_residual = residual;
    res.iterations = iter;
    res.converged = converged;
    return res;
}

double kappa_n(int n) {
    if (n < 3) throw std::invalid_argument("kappa_n: n must be >= 3 (log n > 1)");
    return std::sqrt(1.0 - 1.0 / std::sqrt(std::log(static_cast<double>(n))));
}

std::string to_json(const SeparationReport& r, const std::string& config_echo) {
    nlohmann::json j;
    j["n"] = r.n;
    j["delta0"] = r.delta0;
    j["kappa_n"] = r.kappa;
    j["omega"] = r.omega;
    j["omega_prime"] = r.omega_prime;
    j["t_n"] = r.t_n;
    j["s0"] = r.s0;
    j["separation_analytic"] = r.separation_analytic;
    if (r.solver_used)
        j["separation_solver"] = r.separation_solver;
    else
        j["separation_solver"] = nullptr;
    j["overlap"] = r.overlap;
    j["iterations"] = r.iterations;
    if (!config_echo.empty()) j["config"] = nlohmann::json::parse(config_echo);
    return j.dump(2);
}

SeparationReport instability_experiment(int n, double delta0, int K, bool use_solver,
                                        double tol, int max_iter) {
    if (n < 3) throw std::invalid_argument("instability_experiment: n must be >= 3");
    if (!(delta0 > 0.0 && delta0 <= 1.0))
        throw std::invalid_argument("instability_experiment: delta0 must be in (0, 1]");

    const double kappa = kappa_n(n);
    MinimizerResult r1 = minimize_on_subspace(n, K, delta0, tol, max_iter);
    MinimizerResult r2 = minimize_on_subspace(n, K, kappa * delta0, tol, max_iter);

    SeparationReport rep;
    rep.n = n;
    rep.delta0 = delta0;
    rep.kappa = kappa;
    rep.omega = r1.omega;
    rep.omega_prime = r2.omega;
    rep.overlap = r1.overlap;
    rep.iterations = std::max(r1.iterations, r2.iterations);

    const double dw = r1.omega - r2.omega;
    if (std::abs(dw) < 1e-12 * std::max(1.0, std::abs(r1.omega)))
        throw std::runtime_error("instability_experiment: omega_n degenerate, cannot form t_n");
    rep.t_n = kPi / dw;

    double s0sq = 0.0;
    for (int k = 0; k <= K; ++k) s0sq += std::norm(r1.field.b[k] - r2.field.b[k]);
    rep.s0 = std::sqrt(s0sq);

    const cplx z1 = std::polar(1.0, -r1.omega * rep.t_n);
    const cplx z2 = std::polar(1.0, -r2.omega * rep.t_n);
    double sep = 0.0;
    for (int k = 0; k <= K; ++k) sep += std::norm(z1 * r1.field.b[k] - z2 * r2.field.b[k]);
    rep.separation_analytic = std::sqrt(sep);

    rep.solver_used = use_solver;
    rep.separation_solver = std::numeric_limits<double>::quiet_NaN();
    if (use_solver) {
        const int L = n + K;
        const SpectralField u1 = to_spectral(r1.field, L);
        const SpectralField u2 = to_spectral(r2.field, L);
        const std::size_t n_steps =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(rep.t_n / default_dt(L))));
        const double dt = rep.t_n / static_cast<double>(n_steps);
        const SpectralField a = evolve_final_state(u1, dt, n_steps);
        const SpectralField c = evolve_final_state(u2, dt, n_steps);
        double s = 0.0;
        for (std::size_t i = 0; i < a.a.size(); ++i) s += std::norm(a.a[i] - c.a[i]);
        rep.separation_solver = std::sqrt(s);
    }
    return rep;
}

}  // namespace sphartree
