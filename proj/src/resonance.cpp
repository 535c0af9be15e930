#include "sphartree/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "sphartree/operators.hpp"

namespace sphartree {

namespace {

// Integer square root (exact for the ranges used here).
long long isqrt_ll(long long v) {
    if (v < 0) return -1;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Solve n(n+1) = v over the nonnegative integers; -1 if none.
long long invert_eigenvalue(long long v) {
    if (v < 0) return -1;
    const long long s = isqrt_ll(4 * v + 1);
    if (s * s != 4 * v + 1) return -1;
    if ((s - 1) % 2 != 0) return -1;
    return (s - 1) / 2;
}

inline long long lam(long long n) { return n * (n + 1); }

int window_lo(int N) { return (N + 1) / 2; }   // ceil(N/2)
int window_hi(int N) { return 2 * N; }

}  // namespace

long long count_representations(long long M, int sigma, long long N) {
    if (N < 1) throw std::invalid_argument("count_representations: N must be >= 1");
    if (sigma != 1 && sigma != -1)
        throw std::invalid_argument("count_representations: sigma must be +-1");
    long long count = 0;
    for (long long k1 = N; k1 <= 2 * N; ++k1) {
        const long long k2sq = sigma > 0 ? M - k1 * k1 : k1 * k1 - M;
        if (k2sq < 0) continue;
        const long long k2 = isqrt_ll(k2sq);
        if (k2 * k2 == k2sq) ++count;
    }
    return count;
}

std::vector<std::array<int, 4>> enumerate_lambda(const ResonanceQuery& q) {
    std::vector<std::array<int, 4>> out;
    const int lo4 = window_lo(q.N[3]), hi4 = window_hi(q.N[3]);
    for (int n1 = window_lo(q.N[0]); n1 <= window_hi(q.N[0]); ++n1)
        for (int n2 = window_lo(q.N[1]); n2 <= window_hi(q.N[1]); ++n2)
            for (int n3 = window_lo(q.N[2]); n3 <= window_hi(q.N[2]); ++n3) {
                const long long v = lam(n1) - lam(n2) + lam(n3) - q.k;
                const long long n4 = invert_eigenvalue(v);
                if (n4 >= lo4 && n4 <= hi4)
                    out.push_back({n1, n2, n3, static_cast<int>(n4)});
            }
    return out;
}

std::vector<GrowthRow> lambda_growth_table(const std::vector<int>& Ns) {
    std::vector<GrowthRow> rows;
    for (int N : Ns) {
        const int lo = window_lo(N), hi = window_hi(N);
        // Histogram of n_i(n_i+1) + n_j(n_j+1) over window pairs; #Lambda(k)
        // is the cross-correlation of the histogram with itself at lag k.
        std::unordered_map<long long, long long> pair_sum;
        for (int a = lo; a <= hi; ++a)
            for (int b = lo; b <= hi; ++b) ++pair_sum[lam(a) + lam(b)];
        std::unordered_map<long long, long long> counts;
        for (const auto& [s13, c13] : pair_sum)
            for (const auto& [s24, c24] : pair_sum) counts[s13 - s24] += c13 * c24;
        GrowthRow row;
        row.N = N;
        for (const auto& [k, c] : counts)
            if (c > row.sup_count || (c == row.sup_count && k < row.argmax_k)) {
                row.sup_count = c;
                row.argmax_k = k;
            }
        rows.push_back(row);
    }
    return rows;
}

void write_growth_csv(const std::string& path, const std::vector<GrowthRow>& rows,
                      const std::string& config_echo) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_growth_csv: cannot open " + path);
    if (!config_echo.empty()) os << "# config " << config_echo << "\n";
    os << "N,sup_count,argmax_k\n";
    for (const GrowthRow& r : rows)
        os << r.N << ',' << r.sup_count << ',' << r.argmax_k << "\n";
}

cplx quadrilinear_I(const SpectralField& f1, const SpectralField& f2, const SpectralField& f3,
                    const SpectralField& f4) {
    const int L12 = f1.L + f2.L;
    const int degree = std::max(2 * L12, L12 + f3.L + f4.L);
    const SphereGrid g = make_grid((degree + 2) / 3);
    if (!g.supports(degree))
        throw std::invalid_argument("quadrilinear_I: grid too small for combined degrees");

    const SpatialField v1 = synthesize(f1, g);
    const SpatialField v2 = synthesize(f2, g);
    const SpatialField v3 = synthesize(f3, g);
    const SpatialField v4 = synthesize(f4, g);

    SpatialField prod(g);
    for (std::size_t i = 0; i < prod.values.size(); ++i)
        prod.values[i] = v1.values[i] * v2.values[i];
    const SpatialField pot = apply_poisson_spatial(prod, L12);

    const double dphi = g.lon_step();
    cplx acc = 0.0;
    for (int i = 0; i < g.n_lat; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < g.n_lon; ++j)
            row += pot.at(i, j) * v3.at(i, j) * v4.at(i, j);
        acc += g.weight[i] * row;
    }
    return acc * dphi;
}

}  // namespace sphartree
