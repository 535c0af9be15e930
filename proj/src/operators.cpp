#include "sphartree/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sphartree {

double MultiplierSpec::at_degree(int l) const {
    const double lam = static_cast<double>(l) * (l + 1);
    switch (kind) {
        case MultiplierKind::laplacian: return -lam;
        case MultiplierKind::sobolev: return std::pow(1.0 + lam, 0.5 * s);
        case MultiplierKind::poisson: return 1.0 / (2.0 * l + 1.0);
    }
    return 0.0;
}

SpectralField apply_multiplier(const MultiplierSpec& spec, const SpectralField& f) {
    SpectralField out = f;
    for (int l = 0; l <= f.L; ++l) {
        const double ml = spec.at_degree(l);
        for (int m = -l; m <= l; ++m) out.at(l, m) *= ml;
    }
    return out;
}

SpatialField apply_poisson_spatial(const SpatialField& f, int analysis_bandlimit) {
    SpectralField coeffs = analyze(f, analysis_bandlimit);
    coeffs = apply_multiplier(MultiplierSpec::poisson(), coeffs);
    return synthesize(coeffs, f.grid);
}

SpatialField poisson_potential(const SpatialField& density) {
    double max_abs = 0.0, max_imag = 0.0;
    for (const cplx& z : density.values) {
        max_abs = std::max(max_abs, std::abs(z));
        max_imag = std::max(max_imag, std::abs(z.imag()));
    }
    if (max_imag > 1e-10 * std::max(1.0, max_abs))
        throw std::invalid_argument("poisson_potential: density is not real-valued");

    const SphereGrid& g = density.grid;
    const int Ld = 2 * g.bandlimit;
    std::vector<double> rho(density.values.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = density.values[i].real();

    std::vector<cplx> half = detail::analyze_real(rho, g, Ld);
    for (int l = 0; l <= Ld; ++l) {
        const double ml = 1.0 / (2.0 * l + 1.0);
        for (int m = 0; m <= l; ++m) half[detail::half_index(l, m)] *= ml;
    }
    const std::vector<double> pot = detail::synthesize_real(half, g, Ld);

    SpatialField out(g);
    for (std::size_t i = 0; i < pot.size(); ++i) out.values[i] = pot[i];
    return out;
}

SphereGrid make_oracle_grid(const SphereGrid& target, int gauss_order) {
    // Longitude count: a multiple of the target's, sampled at odd half-steps
    // (phi = (2i+1) pi / n_lon), so target and source longitudes never meet;
    // ~2.5 points per Gauss node balances the two error terms.
    const int mult = std::max(1, (5 * gauss_order / 2 + target.n_lon - 1) / target.n_lon);
    const int n_lon = mult * target.n_lon;
    return make_offset_grid(gauss_order, n_lon, 3.14159265358979323846 / n_lon);
}

SpatialField poisson_oracle(const SpatialField& density, const SphereGrid& offset_grid) {
    const SphereGrid& tg = density.grid;
    const SphereGrid& sg = offset_grid;

    // Resample the density onto the source grid through its spectrum.
    const SpectralField coeffs = analyze(density, tg.bandlimit);
    const SpatialField src = synthesize(coeffs, sg);

    // cos(phi_target - phi_source) reused across every ring pair.
    std::vector<double> cosdp(static_cast<std::size_t>(tg.n_lon) * sg.n_lon);
    for (int j = 0; j < tg.n_lon; ++j)
        for (int b = 0; b < sg.n_lon; ++b)
            cosdp[static_cast<std::size_t>(j) * sg.n_lon + b] = std::cos(tg.lon(j) - sg.lon(b));

    const double dphi_s = sg.lon_step();
    SpatialField out(tg);
    for (int i = 0; i < tg.n_lat; ++i) {
        const double ct = tg.x[i], st = tg.sin_colat[i];
        for (int j = 0; j < tg.n_lon; ++j) {
            const double* cd = &cosdp[static_cast<std::size_t>(j) * sg.n_lon];
            cplx acc = 0.0;
            for (int a = 0; a < sg.n_lat; ++a) {
                const double cc = ct * sg.x[a];
                const double ss = st * sg.sin_colat[a];
                const double w = sg.weight[a] * dphi_s;
                const cplx* row = &src.values[static_cast<std::size_t>(a) * sg.n_lon];
                for (int b = 0; b < sg.n_lon; ++b) {
                    // |x-y| = 2 sin(gamma/2) = sqrt(2 - 2 cos gamma)
                    const double dist = std::sqrt(std::max(0.0, 2.0 - 2.0 * (cc + ss * cd[b])));
                    if (dist < 1e-9)
                        throw std::invalid_argument(
                            "poisson_oracle: offset grid node coincides with a target node");
                    acc += w / dist * row[b];
                }
            }
            out.at(i, j) = acc / (4.0 * 3.14159265358979323846);
        }
    }
    return out;
}

namespace detail {

std::vector<cplx> density_half_spectrum(const std::vector<double>& rho, const SphereGrid& g,
                                        int Ld) {
    return analyze_real(rho, g, Ld);
}

double hartree_from_half(const std::vector<cplx>& half, int Ld) {
    double s = 0.0;
    for (int l = 0; l <= Ld; ++l) {
        const double ml = 1.0 / (2.0 * l + 1.0);
        s += ml * std::norm(half[half_index(l, 0)]);
        for (int m = 1; m <= l; ++m)
            s += 2.0 * ml * std::norm(half[half_index(l, m)]);
    }
    return s;
}

}  // namespace detail

double hartree_energy(const SpectralField& u, const SphereGrid& g) {
    const int Ld = 2 * u.L;
    const SpatialField v = synthesize(u, g);
    std::vector<double> rho(v.values.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(v.values[i]);
    const std::vector<cplx> half = detail::analyze_real(rho, g, Ld);
    return detail::hartree_from_half(half, Ld);
}

double hartree_energy(const SpectralField& u) {
    return hartree_energy(u, make_grid(u.L));
}

double total_energy(const SpectralField& u, const SphereGrid& g) {
    double grad = 0.0;
    for (int l = 1; l <= u.L; ++l) {
        const double lam = static_cast<double>(l) * (l + 1);
        for (int m = -l; m <= l; ++m) grad += lam * std::norm(u.at(l, m));
    }
    return grad + 0.5 * hartree_energy(u, g);
}

double total_energy(const SpectralField& u) {
    return total_energy(u, make_grid(u.L));
}

}  // namespace sphartree
