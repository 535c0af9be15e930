// Spherical-harmonic analysis/synthesis on Gauss-Legendre x equispaced grids.
//
// Conventions: orthonormal complex harmonics with Condon-Shortley phase,
//   Y_0^0 = 1/sqrt(4*pi),  Y_l^{-m} = (-1)^m conj(Y_l^m),
// so Parseval reads  ||f||_{L2}^2 = sum |a_{l,m}|^2.
// Associated Legendre values come from the fully normalized three-term
// recurrence with on-the-fly rescaling; stable for degrees beyond 2048.

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace sphartree {

using cplx = std::complex<double>;

// Gauss-Legendre colatitudes x equispaced longitudes, with quadrature weights.
// Sized by the dealiasing rule for cubic-type products: a grid built for
// bandlimit L integrates spherical polynomials of degree up to 3L exactly.
struct SphereGrid {
    int bandlimit = 0;   // the L this grid was sized for
    int n_lat = 0;
    int n_lon = 0;
    double lon_offset = 0.0;            // longitude of node j=0, radians
    std::vector<double> colat;          // colatitude from north pole, ascending
    std::vector<double> x;              // cos(colat), descending
    std::vector<double> sin_colat;      // sin(colat) > 0
    std::vector<double> weight;         // GL weights, sum = 2

    double lon_step() const;
    double lon(int j) const { return lon_offset + j * lon_step(); }

    // Largest integrand degree the quadrature handles exactly.
    int quadrature_degree() const;
    bool supports(int L) const { return L >= 0 && L <= quadrature_degree(); }
};

// Grid satisfying the dealiasing rule for bandlimit L:
//   n_lat >= ceil((3L+1)/2),  n_lon >= 3L+1.
// Nodes/weights from Newton iteration on Legendre polynomials (rel. 1e-14).
SphereGrid make_grid(int bandlimit);

// Grid with explicit Gauss order and longitude origin; used by the kernel
// quadrature oracle, which needs nodes disjoint from the target grid.
SphereGrid make_offset_grid(int gauss_order, int n_lon, double lon_offset);

// Coefficients a_{l,m} for 0 <= l <= L, -l <= m <= l, stored at l*l + l + m
// (l ascending, m ascending from -l; the SPH1 file order).
struct SpectralField {
    int L = 0;
    std::vector<cplx> a;

    SpectralField() : a(1) {}
    explicit SpectralField(int bandlimit);

    static std::size_t index(int l, int m) {
        return static_cast<std::size_t>(l) * l + l + m;
    }
    cplx& at(int l, int m) { return a[index(l, m)]; }
    const cplx& at(int l, int m) const { return a[index(l, m)]; }
    std::size_t size() const { return a.size(); }

    double norm_sq() const;   // sum |a_{l,m}|^2
    double norm() const;
};

// Complex samples at all (colat, lon) nodes, row-major [lat][lon].
struct SpatialField {
    SphereGrid grid;
    std::vector<cplx> values;

    SpatialField() = default;
    explicit SpatialField(const SphereGrid& g);

    cplx& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n_lon + j]; }
    const cplx& at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * grid.n_lon + j];
    }

    double integral_of_abs2() const;   // quadrature of |v|^2
    cplx integral() const;             // quadrature of v
};

// Pointwise evaluation sum a_{l,m} Y_l^m at every grid node.
SpatialField synthesize(const SpectralField& f, const SphereGrid& g);

// a_{l,m} = quadrature of v * conj(Y_l^m); exact for content bandlimited
// below the grid's dealiasing capacity.
SpectralField analyze(const SpatialField& v, int L);

// Normalized associated Legendre column: out[k] = Pbar_{m+k}^m(x), k=0..L-m,
// where Y_l^m(theta,phi) = Pbar_l^m(cos theta) e^{i m phi}.
void legendre_column(int m, int L, double x, double* out);

namespace detail {

// Half-spectrum layout for real fields: index (l,m), m >= 0, at l(l+1)/2 + m.
inline std::size_t half_index(int l, int m) {
    return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
}

// Precomputed tables for repeated transforms on one grid at one bandlimit:
// split-complex longitude phases (stacked so the longitude passes are single
// matrix products) and, when the footprint is moderate, the normalized
// Legendre values at the upper half of the latitude nodes.
struct TransformPlan {
    SphereGrid grid;
    int L = 0;
    // 2(L+1) x n_lon row-major: rows 0..L are cos(m phi_j), rows L+1..2L+1
    // are sin(m phi_j).
    std::vector<double> phase;
    std::vector<std::size_t> leg_offset;      // per-m block start (in values)
    std::vector<double> legendre;             // [m][half-node][l-m]; may be empty
    int n_half = 0;                           // latitude pairs incl. middle row

    const double* phase_re(int m) const { return &phase[static_cast<std::size_t>(m) * grid.n_lon]; }
    const double* phase_im(int m) const {
        return &phase[static_cast<std::size_t>(L + 1 + m) * grid.n_lon];
    }
    const double* column(int m, int i, std::vector<double>& scratch) const;
};

TransformPlan make_plan(const SphereGrid& g, int L, bool cache_legendre = true);

SpatialField synthesize(const SpectralField& f, const TransformPlan& plan);
SpectralField analyze(const SpatialField& v, const TransformPlan& plan);

// Analysis of a real field, m >= 0 only (a_{l,-m} = (-1)^m conj(a_{l,m})).
std::vector<cplx> analyze_real(const std::vector<double>& v, const TransformPlan& plan);
std::vector<cplx> analyze_real(const std::vector<double>& v, const SphereGrid& g, int L);

// Synthesis of a real field from its half-spectrum.
std::vector<double> synthesize_real(const std::vector<cplx>& half, const TransformPlan& plan);
std::vector<double> synthesize_real(const std::vector<cplx>& half, const SphereGrid& g, int L);

}  // namespace detail

// SPH1 coefficient snapshot: "SPH1", L (u32 LE), count (u32 LE), then
// little-endian f64 (re, im) pairs in storage order.
void write_sph1(const std::string& path, const SpectralField& f);
SpectralField read_sph1(const std::string& path);

}  // namespace sphartree
