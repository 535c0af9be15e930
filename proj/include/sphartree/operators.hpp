// Spectral multiplier operators on the sphere: Laplace-Beltrami, Sobolev
// weights <grad>^s, and the Poisson operator G = (1 - 4 Lap)^{-1/2}, whose
// multiplier per degree is 1/(2l+1). A direct kernel-quadrature oracle for G
// backs the spectral route in tests; it never runs in evolution.

#pragma once

#include "sphartree/sht.hpp"

namespace sphartree {

enum class MultiplierKind { laplacian, sobolev, poisson };

struct MultiplierSpec {
    MultiplierKind kind = MultiplierKind::laplacian;
    double s = 0.0;   // sobolev exponent

    static MultiplierSpec laplacian() { return {MultiplierKind::laplacian, 0.0}; }
    static MultiplierSpec sobolev(double exponent) { return {MultiplierKind::sobolev, exponent}; }
    static MultiplierSpec poisson() { return {MultiplierKind::poisson, 0.0}; }

    // -l(l+1) | (1+l(l+1))^{s/2} | 1/(2l+1)
    double at_degree(int l) const;
};

// a_{l,m} <- mult(l) * a_{l,m}; bandlimit unchanged.
SpectralField apply_multiplier(const MultiplierSpec& spec, const SpectralField& f);

// G applied to a real density sampled on its grid: analyze at twice the
// grid's design bandlimit, multiply by 1/(2l+1), synthesize. Throws
// invalid_argument if the imaginary part exceeds 1e-10 relative.
SpatialField poisson_potential(const SpatialField& density);

// G on a complex field at an explicit analysis bandlimit (linear in the
// field; no realness requirement). The real-density entry point above and
// the quadrilinear functional both route through this.
SpatialField apply_poisson_spatial(const SpatialField& f, int analysis_bandlimit);

// Brute-force (1/4pi) int f(y)/|x-y| dsigma(y) with |x-y| = 2 sin(gamma/2),
// quadratured over offset_grid nodes; the density is resampled spectrally
// onto offset_grid first. With make_oracle_grid the measured max-norm error
// on smooth densities is ~5e-3 at Gauss order 64 and ~1.5e-3 at order 256.
// Validation only; never used in evolution.
SpatialField poisson_oracle(const SpatialField& density, const SphereGrid& offset_grid);

// Offset grid for the oracle: Gauss order `gauss_order` in colatitude and a
// longitude rule that is an odd-half-step refinement of the target's, so no
// source node can coincide with a target node.
SphereGrid make_oracle_grid(const SphereGrid& target, int gauss_order);

// sum |rho_hat|^2/(2l+1) with rho = analyze(|synthesize(u)|^2) at 2 u.L.
double hartree_energy(const SpectralField& u);
double hartree_energy(const SpectralField& u, const SphereGrid& g);

// E0 = sum l(l+1)|a|^2 + hartree/2.
double total_energy(const SpectralField& u);
double total_energy(const SpectralField& u, const SphereGrid& g);

namespace detail {

// Half-spectrum (m >= 0) analysis of a real density given as |values|^2 of a
// complex grid field, at bandlimit Ld.
std::vector<cplx> density_half_spectrum(const std::vector<double>& rho, const SphereGrid& g,
                                        int Ld);

// Hartree functional from a half-spectrum density.
double hartree_from_half(const std::vector<cplx>& half, int Ld);

}  // namespace detail

}  // namespace sphartree
