// Computable diagnostics behind the quadrilinear estimate: the product
// integrals I(n1..n4) = int G(f1 f2) f3 f4, the resonance sets Lambda(k) of
// degree quadruples with sum eps_j n_j(n_j+1) = k (eps = +,-,+,-), and the
// brute-force two-squares representation count.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sphartree/sht.hpp"

namespace sphartree {

struct ResonanceQuery {
    std::array<int, 4> N{{1, 1, 1, 1}};   // dyadic bounds; window N_j/2 <= n_j <= 2 N_j
    long long k = 0;
};

// #{(k1,k2) in N^2 : N <= k1 <= 2N, k1^2 + sigma k2^2 = M}, sigma = +-1.
long long count_representations(long long M, int sigma, long long N);

// All (n1,n2,n3,n4) in the window with
// n1(n1+1) - n2(n2+1) + n3(n3+1) - n4(n4+1) = k, lexicographically ordered.
std::vector<std::array<int, 4>> enumerate_lambda(const ResonanceQuery& q);

struct GrowthRow {
    int N = 0;
    long long sup_count = 0;   // sup_k #Lambda(k) for the window N=(N,N,N,N)
    long long argmax_k = 0;
};

// sup_k #Lambda(k) per N, via pair-sum histograms (no quadruple loop).
std::vector<GrowthRow> lambda_growth_table(const std::vector<int>& Ns);

void write_growth_csv(const std::string& path, const std::vector<GrowthRow>& rows,
                      const std::string& config_echo = "");

// I = int G(f1 f2) f3 f4 dsigma (plain products, no conjugation), evaluated
// spectrally on a grid sized for the combined degrees.
cplx quadrilinear_I(const SpectralField& f1, const SpectralField& f2, const SpectralField& f3,
                    const SpectralField& f4);

}  // namespace sphartree
