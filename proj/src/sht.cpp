#include "sphartree/sht.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace sphartree {

namespace {

constexpr double kPi = std::numbers::pi;

// Legendre P_n(x) and P_n'(x) by the standard recurrence.
void legendre_pn(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) { p = 1.0; dp = 0.0; return; }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// Gauss-Legendre nodes (descending in x) and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi-style initial guess, then Newton to relative 1e-14.
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p, dp;
        for (int it = 0; it < 64; ++it) {
            legendre_pn(n, xi, p, dp);
            const double delta = p / dp;
            xi -= delta;
            if (std::abs(delta) <= 1e-15 * std::max(1.0, std::abs(xi))) break;
        }
        legendre_pn(n, xi, p, dp);
        x[i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        // Mirror node; keeps the grid exactly symmetric.
        x[n - 1 - i] = -xi;
        w[n - 1 - i] = w[i];
    }
    if (n % 2 == 1) x[half - 1] = 0.0;
}

void check_grid(const SphereGrid& g, int L, const char* op) {
    if (!g.supports(L))
        throw std::invalid_argument(std::string(op) + ": grid too small for bandlimit " +
                                    std::to_string(L));
}

}  // namespace

double SphereGrid::lon_step() const { return 2.0 * kPi / n_lon; }

int SphereGrid::quadrature_degree() const {
    return std::min(2 * n_lat - 1, n_lon - 1);
}

SphereGrid make_grid(int bandlimit) {
    if (bandlimit < 0) throw std::invalid_argument("make_grid: bandlimit must be >= 0");
    SphereGrid g;
    g.bandlimit = bandlimit;
    g.n_lat = (3 * bandlimit + 1 + 1) / 2;   // ceil((3L+1)/2)
    g.n_lon = 3 * bandlimit + 1;
    if (g.n_lat < 1) g.n_lat = 1;
    if (g.n_lon < 1) g.n_lon = 1;
    g.lon_offset = 0.0;
    gauss_legendre(g.n_lat, g.x, g.weight);
    g.colat.resize(g.n_lat);
    g.sin_colat.resize(g.n_lat);
    for (int i = 0; i < g.n_lat; ++i) {
        g.colat[i] = std::acos(g.x[i]);
        g.sin_colat[i] = std::sqrt(std::max(0.0, 1.0 - g.x[i] * g.x[i]));
    }
    return g;
}

SphereGrid make_offset_grid(int gauss_order, int n_lon, double lon_offset) {
    if (gauss_order < 1 || n_lon < 1)
        throw std::invalid_argument("make_offset_grid: orders must be >= 1");
    SphereGrid g;
    g.bandlimit = std::min((2 * gauss_order - 1) / 3, (n_lon - 1) / 3);
    g.n_lat = gauss_order;
    g.n_lon = n_lon;
    g.lon_offset = lon_offset;
    gauss_legendre(g.n_lat, g.x, g.weight);
    g.colat.resize(g.n_lat);
    g.sin_colat.resize(g.n_lat);
    for (int i = 0; i < g.n_lat; ++i) {
        g.colat[i] = std::acos(g.x[i]);
        g.sin_colat[i] = std::sqrt(std::max(0.0, 1.0 - g.x[i] * g.x[i]));
    }
    return g;
}

SpectralField::SpectralField(int bandlimit) : L(bandlimit) {
    if (bandlimit < 0) throw std::invalid_argument("SpectralField: bandlimit must be >= 0");
    a.assign(static_cast<std::size_t>(bandlimit + 1) * (bandlimit + 1), cplx(0.0));
}

double SpectralField::norm_sq() const {
    double s = 0.0;
    for (const cplx& c : a) s += std::norm(c);
    return s;
}

double SpectralField::norm() const { return std::sqrt(norm_sq()); }

SpatialField::SpatialField(const SphereGrid& g)
    : grid(g), values(static_cast<std::size_t>(g.n_lat) * g.n_lon, cplx(0.0)) {}

double SpatialField::integral_of_abs2() const {
    const double dphi = grid.lon_step();
    double s = 0.0;
    for (int i = 0; i < grid.n_lat; ++i) {
        double row = 0.0;
        for (int j = 0; j < grid.n_lon; ++j) row += std::norm(at(i, j));
        s += grid.weight[i] * row;
    }
    return s * dphi;
}

cplx SpatialField::integral() const {
    const double dphi = grid.lon_step();
    cplx s = 0.0;
    for (int i = 0; i < grid.n_lat; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < grid.n_lon; ++j) row += at(i, j);
        s += grid.weight[i] * row;
    }
    return s * dphi;
}

// ---------------------------------------------------------------------------
// Normalized associated Legendre recurrence with dynamic rescaling.
//
// Seed:  Pbar_m^m = (-1)^m sqrt((2m+1)/(4 pi)) sqrt((2m-1)!!/(2m)!!) sin^m
// built as a running product; the mantissa is rescaled by 2^900 whenever it
// drops below 2^-600, so sin^m never underflows before the upward recurrence
// brings values back into range.

namespace {
constexpr int kScaleExp = 900;
constexpr double kScaleUp = 0x1p900;
constexpr double kSeedFloor = 0x1p-600;
constexpr double kFoldCeil = 0x1p500;
constexpr double kFoldDown = 0x1p-900;

inline double descale(double mant, int scale) {
    if (scale == 0) return mant;
    return std::ldexp(mant, -kScaleExp * scale);
}
}  // namespace

void legendre_column(int m, int L, double x, double* out) {
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    const int count = L - m + 1;
    if (m > 0 && sx == 0.0) {
        std::fill(out, out + count, 0.0);
        return;
    }
    double p = std::sqrt(1.0 / (4.0 * kPi));
    int scale = 0;
    for (int i = 1; i <= m; ++i) {
        p *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * sx;
        if (std::abs(p) < kSeedFloor) {
            p *= kScaleUp;
            ++scale;
        }
    }
    out[0] = descale(p, scale);
    if (L == m) return;

    double pm1 = p;                                   // Pbar_m^m
    p = std::sqrt(2.0 * m + 3.0) * x * pm1;           // Pbar_{m+1}^m
    out[1] = descale(p, scale);
    double b_prev = 1.0 / std::sqrt((2.0 * m + 3.0)); // 1/a_{m+1,m}
    for (int l = m + 2; l <= L; ++l) {
        const double ll = static_cast<double>(l) * l;
        const double a = std::sqrt((4.0 * ll - 1.0) / (ll - static_cast<double>(m) * m));
        const double pn = a * (x * p - b_prev * pm1);
        pm1 = p;
        p = pn;
        b_prev = 1.0 / a;
        if (scale > 0 && std::abs(p) > kFoldCeil) {
            p *= kFoldDown;
            pm1 *= kFoldDown;
            --scale;
        }
        out[l - m] = descale(p, scale);
    }
}

// ---------------------------------------------------------------------------
// Transforms. Latitude pairs (i, n_lat-1-i) share one Legendre column through
// the parity Pbar_l^m(-x) = (-1)^{l+m} Pbar_l^m(x); with l = m + k that is
// parity in k, so even/odd sums are stride-2 loops over the column. The
// longitude phases are kept in split re/im tables so the inner loops stay
// plain real multiply-adds.

namespace detail {

namespace {
constexpr std::size_t kLegendreCacheBytes = 64u << 20;
}

const double* TransformPlan::column(int m, int i, std::vector<double>& scratch) const {
    if (!legendre.empty())
        return &legendre[(leg_offset[m] + static_cast<std::size_t>(i) * (L - m + 1))];
    legendre_column(m, L, grid.x[i], scratch.data());
    return scratch.data();
}

TransformPlan make_plan(const SphereGrid& g, int L, bool cache_legendre) {
    TransformPlan p;
    p.grid = g;
    p.L = L;
    p.n_half = (g.n_lat + 1) / 2;

    p.phase.resize(2 * static_cast<std::size_t>(L + 1) * g.n_lon);
    std::vector<cplx> roots(g.n_lon);
    for (int k = 0; k < g.n_lon; ++k)
        roots[k] = std::polar(1.0, 2.0 * 3.14159265358979323846 * k / g.n_lon);
    for (int m = 0; m <= L; ++m) {
        const cplx off = std::polar(1.0, m * g.lon_offset);
        double* re = &p.phase[static_cast<std::size_t>(m) * g.n_lon];
        double* im = &p.phase[static_cast<std::size_t>(L + 1 + m) * g.n_lon];
        for (int j = 0; j < g.n_lon; ++j) {
            const cplx t = off * roots[(static_cast<long long>(m) * j) % g.n_lon];
            re[j] = t.real();
            im[j] = t.imag();
        }
    }

    p.leg_offset.resize(L + 2, 0);
    for (int m = 0; m <= L; ++m)
        p.leg_offset[m + 1] =
            p.leg_offset[m] + static_cast<std::size_t>(p.n_half) * (L - m + 1);
    const std::size_t total = p.leg_offset[L + 1];
    if (cache_legendre && total * sizeof(double) <= kLegendreCacheBytes) {
        p.legendre.resize(total);
        for (int m = 0; m <= L; ++m)
            for (int i = 0; i < p.n_half; ++i)
                legendre_column(m, L, g.x[i],
                                &p.legendre[p.leg_offset[m] +
                                            static_cast<std::size_t>(i) * (L - m + 1)]);
    }
    return p;
}

SpatialField synthesize(const SpectralField& f, const TransformPlan& plan) {
    const SphereGrid& g = plan.grid;
    const int L = f.L;
    const int nlat = g.n_lat, nlon = g.n_lon;
    SpatialField out(g);

    // Fourier-in-longitude coefficients per latitude, split re/im;
    // gp holds m >= 0, gm holds m < 0 (with the (-1)^m phase folded in).
    const std::size_t gsz = static_cast<std::size_t>(nlat) * (L + 1);
    std::vector<double> gpre(gsz, 0.0), gpim(gsz, 0.0), gmre(gsz, 0.0), gmim(gsz, 0.0);
    std::vector<double> scratch(L + 1);
    std::vector<double> cpre(L + 1), cpim(L + 1), cmre(L + 1), cmim(L + 1);

    const int npair = nlat / 2;
    const bool mid = nlat % 2 == 1;
    for (int m = 0; m <= L; ++m) {
        const int len = L - m + 1;
        const double csign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int k = 0; k < len; ++k) {
            const cplx cp = f.at(m + k, m);
            cpre[k] = cp.real();
            cpim[k] = cp.imag();
            if (m > 0) {
                const cplx cm = csign * f.at(m + k, -m);
                cmre[k] = cm.real();
                cmim[k] = cm.imag();
            } else {
                cmre[k] = 0.0;
                cmim[k] = 0.0;
            }
        }
        for (int i = 0; i < npair + (mid ? 1 : 0); ++i) {
            const double* col = plan.column(m, i, scratch);
            double pere = 0, peim = 0, pore = 0, poim = 0;
            double mere = 0, meim = 0, more = 0, moim = 0;
            for (int k = 0; k < len; k += 2) {
                pere += cpre[k] * col[k];
                peim += cpim[k] * col[k];
                mere += cmre[k] * col[k];
                meim += cmim[k] * col[k];
            }
            for (int k = 1; k < len; k += 2) {
                pore += cpre[k] * col[k];
                poim += cpim[k] * col[k];
                more += cmre[k] * col[k];
                moim += cmim[k] * col[k];
            }
            const std::size_t a = static_cast<std::size_t>(i) * (L + 1) + m;
            if (mid && i == npair) {   // the equator row pairs with itself
                gpre[a] = pere + pore;
                gpim[a] = peim + poim;
                gmre[a] = mere + more;
                gmim[a] = meim + moim;
                continue;
            }
            const std::size_t b = static_cast<std::size_t>(nlat - 1 - i) * (L + 1) + m;
            gpre[a] = pere + pore;
            gpim[a] = peim + poim;
            gmre[a] = mere + more;
            gmim[a] = meim + moim;
            gpre[b] = pere - pore;
            gpim[b] = peim - poim;
            gmre[b] = mere - more;
            gmim[b] = meim - moim;
        }
    }

    // v(i,j) = sum_m gp e^{i m phi_j} + gm e^{-i m phi_j}. With the phase
    // rows stacked [cos; sin], the real and imaginary parts are each one
    // matrix product against regrouped coefficients.
    const int K2 = 2 * (L + 1);
    std::vector<double> pq(static_cast<std::size_t>(nlat) * K2);
    std::vector<double> rs(static_cast<std::size_t>(nlat) * K2);
    for (int i = 0; i < nlat; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * (L + 1);
        double* pqi = &pq[static_cast<std::size_t>(i) * K2];
        double* rsi = &rs[static_cast<std::size_t>(i) * K2];
        for (int m = 0; m <= L; ++m) {
            pqi[m] = gpre[base + m] + gmre[base + m];
            pqi[L + 1 + m] = gmim[base + m] - gpim[base + m];
            rsi[m] = gpim[base + m] + gmim[base + m];
            rsi[L + 1 + m] = gpre[base + m] - gmre[base + m];
        }
    }
    std::vector<double> rowre(static_cast<std::size_t>(nlat) * nlon);
    std::vector<double> rowim(static_cast<std::size_t>(nlat) * nlon);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, nlat, nlon, K2, 1.0, pq.data(),
                K2, plan.phase.data(), nlon, 0.0, rowre.data(), nlon);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, nlat, nlon, K2, 1.0, rs.data(),
                K2, plan.phase.data(), nlon, 0.0, rowim.data(), nlon);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = cplx(rowre[i], rowim[i]);
    return out;
}

SpectralField analyze(const SpatialField& v, const TransformPlan& plan) {
    const SphereGrid& g = plan.grid;
    const int L = plan.L;
    const int nlat = g.n_lat, nlon = g.n_lon;
    const double dphi = g.lon_step();
    SpectralField out(L);

    // F+-(i,m) = dphi sum_j v(i,j) e^{-+i m phi_j}: four families of dot
    // products, obtained from two matrix products against [cos; sin]^T.
    const int K2 = 2 * (L + 1);
    const std::size_t fsz = static_cast<std::size_t>(nlat) * (L + 1);
    std::vector<double> fpre(fsz), fpim(fsz), fmre(fsz), fmim(fsz);
    std::vector<double> u(static_cast<std::size_t>(nlat) * nlon);
    std::vector<double> w(static_cast<std::size_t>(nlat) * nlon);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        u[i] = v.values[i].real();
        w[i] = v.values[i].imag();
    }
    std::vector<double> ad(static_cast<std::size_t>(nlat) * K2);
    std::vector<double> cb(static_cast<std::size_t>(nlat) * K2);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, nlat, K2, nlon, 1.0, u.data(), nlon,
                plan.phase.data(), nlon, 0.0, ad.data(), K2);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, nlat, K2, nlon, 1.0, w.data(), nlon,
                plan.phase.data(), nlon, 0.0, cb.data(), K2);
    for (int i = 0; i < nlat; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * (L + 1);
        const double* adi = &ad[static_cast<std::size_t>(i) * K2];
        const double* cbi = &cb[static_cast<std::size_t>(i) * K2];
        for (int m = 0; m <= L; ++m) {
            const double A = adi[m], D = adi[L + 1 + m];
            const double C = cbi[m], B = cbi[L + 1 + m];
            fpre[base + m] = (A + B) * dphi;
            fpim[base + m] = (C - D) * dphi;
            fmre[base + m] = (A - B) * dphi;
            fmim[base + m] = (C + D) * dphi;
        }
    }

    std::vector<double> scratch(L + 1);
    std::vector<double> accp_re(L + 1), accp_im(L + 1), accm_re(L + 1), accm_im(L + 1);
    const int npair = nlat / 2;
    const bool mid = nlat % 2 == 1;
    for (int m = 0; m <= L; ++m) {
        const int len = L - m + 1;
        const double csign = (m % 2 == 0) ? 1.0 : -1.0;
        std::fill(accp_re.begin(), accp_re.begin() + len, 0.0);
        std::fill(accp_im.begin(), accp_im.begin() + len, 0.0);
        std::fill(accm_re.begin(), accm_re.begin() + len, 0.0);
        std::fill(accm_im.begin(), accm_im.begin() + len, 0.0);
        for (int i = 0; i < npair + (mid ? 1 : 0); ++i) {
            const double* col = plan.column(m, i, scratch);
            const std::size_t a = static_cast<std::size_t>(i) * (L + 1) + m;
            const double wi = g.weight[i];
            if (mid && i == npair) {
                const double cpre = wi * fpre[a], cpim = wi * fpim[a];
                const double cnre = wi * fmre[a], cnim = wi * fmim[a];
                for (int k = 0; k < len; ++k) {
                    accp_re[k] += cpre * col[k];
                    accp_im[k] += cpim * col[k];
                    accm_re[k] += cnre * col[k];
                    accm_im[k] += cnim * col[k];
                }
                continue;
            }
            const std::size_t b = static_cast<std::size_t>(nlat - 1 - i) * (L + 1) + m;
            const double pe_re = wi * (fpre[a] + fpre[b]), pe_im = wi * (fpim[a] + fpim[b]);
            const double po_re = wi * (fpre[a] - fpre[b]), po_im = wi * (fpim[a] - fpim[b]);
            const double ne_re = wi * (fmre[a] + fmre[b]), ne_im = wi * (fmim[a] + fmim[b]);
            const double no_re = wi * (fmre[a] - fmre[b]), no_im = wi * (fmim[a] - fmim[b]);
            for (int k = 0; k < len; k += 2) {
                accp_re[k] += pe_re * col[k];
                accp_im[k] += pe_im * col[k];
                accm_re[k] += ne_re * col[k];
                accm_im[k] += ne_im * col[k];
            }
            for (int k = 1; k < len; k += 2) {
                accp_re[k] += po_re * col[k];
                accp_im[k] += po_im * col[k];
                accm_re[k] += no_re * col[k];
                accm_im[k] += no_im * col[k];
            }
        }
        for (int k = 0; k < len; ++k) {
            out.at(m + k, m) = cplx(accp_re[k], accp_im[k]);
            if (m > 0) out.at(m + k, -m) = csign * cplx(accm_re[k], accm_im[k]);
        }
    }
    return out;
}

std::vector<cplx> analyze_real(const std::vector<double>& v, const TransformPlan& plan) {
    const SphereGrid& g = plan.grid;
    const int L = plan.L;
    const int nlat = g.n_lat, nlon = g.n_lon;
    const double dphi = g.lon_step();
    std::vector<cplx> out(half_index(L, L) + 1, cplx(0.0));

    const int K2 = 2 * (L + 1);
    const std::size_t fsz = static_cast<std::size_t>(nlat) * (L + 1);
    std::vector<double> fpre(fsz), fpim(fsz);
    std::vector<double> ad(static_cast<std::size_t>(nlat) * K2);
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, nlat, K2, nlon, 1.0, v.data(), nlon,
                plan.phase.data(), nlon, 0.0, ad.data(), K2);
    for (int i = 0; i < nlat; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * (L + 1);
        const double* adi = &ad[static_cast<std::size_t>(i) * K2];
        for (int m = 0; m <= L; ++m) {
            fpre[base + m] = adi[m] * dphi;
            fpim[base + m] = -adi[L + 1 + m] * dphi;
        }
    }

    std::vector<double> scratch(L + 1);
    std::vector<double> acc_re(L + 1), acc_im(L + 1);
    const int npair = nlat / 2;
    const bool mid = nlat % 2 == 1;
    for (int m = 0; m <= L; ++m) {
        const int len = L - m + 1;
        std::fill(acc_re.begin(), acc_re.begin() + len, 0.0);
        std::fill(acc_im.begin(), acc_im.begin() + len, 0.0);
        for (int i = 0; i < npair + (mid ? 1 : 0); ++i) {
            const double* col = plan.column(m, i, scratch);
            const std::size_t a = static_cast<std::size_t>(i) * (L + 1) + m;
            const double wi = g.weight[i];
            if (mid && i == npair) {
                const double cre = wi * fpre[a], cim = wi * fpim[a];
                for (int k = 0; k < len; ++k) {
                    acc_re[k] += cre * col[k];
                    acc_im[k] += cim * col[k];
                }
                continue;
            }
            const std::size_t b = static_cast<std::size_t>(nlat - 1 - i) * (L + 1) + m;
            const double pe_re = wi * (fpre[a] + fpre[b]), pe_im = wi * (fpim[a] + fpim[b]);
            const double po_re = wi * (fpre[a] - fpre[b]), po_im = wi * (fpim[a] - fpim[b]);
            for (int k = 0; k < len; k += 2) {
                acc_re[k] += pe_re * col[k];
                acc_im[k] += pe_im * col[k];
            }
            for (int k = 1; k < len; k += 2) {
                acc_re[k] += po_re * col[k];
                acc_im[k] += po_im * col[k];
            }
        }
        for (int k = 0; k < len; ++k)
            out[half_index(m + k, m)] = cplx(acc_re[k], acc_im[k]);
    }
    return out;
}

std::vector<double> synthesize_real(const std::vector<cplx>& half, const TransformPlan& plan) {
    const SphereGrid& g = plan.grid;
    const int L = plan.L;
    const int nlat = g.n_lat, nlon = g.n_lon;
    std::vector<double> out(static_cast<std::size_t>(nlat) * nlon, 0.0);

    const std::size_t gsz = static_cast<std::size_t>(nlat) * (L + 1);
    std::vector<double> gre(gsz, 0.0), gim(gsz, 0.0);
    std::vector<double> scratch(L + 1), cre(L + 1), cim(L + 1);
    const int npair = nlat / 2;
    const bool mid = nlat % 2 == 1;
    for (int m = 0; m <= L; ++m) {
        const int len = L - m + 1;
        for (int k = 0; k < len; ++k) {
            cre[k] = half[half_index(m + k, m)].real();
            cim[k] = half[half_index(m + k, m)].imag();
        }
        for (int i = 0; i < npair + (mid ? 1 : 0); ++i) {
            const double* col = plan.column(m, i, scratch);
            double ere = 0, eim = 0, ore = 0, oim = 0;
            for (int k = 0; k < len; k += 2) {
                ere += cre[k] * col[k];
                eim += cim[k] * col[k];
            }
            for (int k = 1; k < len; k += 2) {
                ore += cre[k] * col[k];
                oim += cim[k] * col[k];
            }
            const std::size_t a = static_cast<std::size_t>(i) * (L + 1) + m;
            if (mid && i == npair) {
                gre[a] = ere + ore;
                gim[a] = eim + oim;
                continue;
            }
            const std::size_t b = static_cast<std::size_t>(nlat - 1 - i) * (L + 1) + m;
            gre[a] = ere + ore;
            gim[a] = eim + oim;
            gre[b] = ere - ore;
            gim[b] = eim - oim;
        }
    }

    // v = g_0 + 2 Re sum_{m>0} g_m e^{i m phi}, as one matrix product.
    const int K2 = 2 * (L + 1);
    std::vector<double> pq(static_cast<std::size_t>(nlat) * K2);
    for (int i = 0; i < nlat; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * (L + 1);
        double* pqi = &pq[static_cast<std::size_t>(i) * K2];
        pqi[0] = gre[base];
        pqi[L + 1] = 0.0;
        for (int m = 1; m <= L; ++m) {
            pqi[m] = 2.0 * gre[base + m];
            pqi[L + 1 + m] = -2.0 * gim[base + m];
        }
    }
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, nlat, nlon, K2, 1.0, pq.data(),
                K2, plan.phase.data(), nlon, 0.0, out.data(), nlon);
    return out;
}

std::vector<cplx> analyze_real(const std::vector<double>& v, const SphereGrid& g, int L) {
    check_grid(g, L, "analyze_real");
    return analyze_real(v, make_plan(g, L, false));
}

std::vector<double> synthesize_real(const std::vector<cplx>& half, const SphereGrid& g, int L) {
    check_grid(g, L, "synthesize_real");
    return synthesize_real(half, make_plan(g, L, false));
}

}  // namespace detail

SpatialField synthesize(const SpectralField& f, const SphereGrid& g) {
    check_grid(g, f.L, "synthesize");
    return detail::synthesize(f, detail::make_plan(g, f.L, false));
}

SpectralField analyze(const SpatialField& v, int L) {
    check_grid(v.grid, L, "analyze");
    return detail::analyze(v, detail::make_plan(v.grid, L, false));
}

// ---------------------------------------------------------------------------
// SPH1 binary snapshots.

void write_sph1(const std::string& path, const SpectralField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_sph1: cannot open " + path);
    const char magic[4] = {'S', 'P', 'H', '1'};
    os.write(magic, 4);
    const std::uint32_t L = static_cast<std::uint32_t>(f.L);
    const std::uint32_t count = static_cast<std::uint32_t>(f.a.size());
    os.write(reinterpret_cast<const char*>(&L), 4);
    os.write(reinterpret_cast<const char*>(&count), 4);
    for (const cplx& c : f.a) {
        const double re = c.real(), im = c.imag();
        os.write(reinterpret_cast<const char*>(&re), 8);
        os.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!os) throw std::runtime_error("write_sph1: write failed for " + path);
}

SpectralField read_sph1(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_sph1: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SPH1", 4) != 0)
        throw std::runtime_error("read_sph1: bad magic in " + path);
    std::uint32_t L = 0, count = 0;
    is.read(reinterpret_cast<char*>(&L), 4);
    is.read(reinterpret_cast<char*>(&count), 4);
    if (!is) throw std::runtime_error("read_sph1: truncated header in " + path);
    SpectralField f(static_cast<int>(L));
    if (count != f.a.size())
        throw std::runtime_error("read_sph1: coefficient count mismatch in " + path);
    for (cplx& c : f.a) {
        double re = 0.0, im = 0.0;
        is.read(reinterpret_cast<char*>(&re), 8);
        is.read(reinterpret_cast<char*>(&im), 8);
        c = cplx(re, im);
    }
    if (!is) throw std::runtime_error("read_sph1: truncated data in " + path);
    return f;
}

}  // namespace sphartree
