// Deterministic test-field generators. All randomness flows from one 64-bit
// seed; Gaussians come from an explicit Box-Muller so outputs do not depend
// on the standard library's distribution internals.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sphartree/sht.hpp"

namespace sphartree {

class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    double uniform() {
        return (rng_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Complex field with Gaussian coefficients damped by exp(-(l/l_decay)^2) and
// truncated above l_support; normalized so ||u||^2 = mass.
inline SpectralField random_field(int L, std::uint64_t seed, double mass = 1.0,
                                  int l_support = -1, double l_decay = 0.0) {
    if (l_support < 0 || l_support > L) l_support = L;
    GaussianSource gauss(seed);
    SpectralField f(L);
    for (int l = 0; l <= l_support; ++l) {
        const double damp = l_decay > 0.0 ? std::exp(-(double(l) / l_decay) * (double(l) / l_decay)) : 1.0;
        for (int m = -l; m <= l; ++m)
            f.at(l, m) = damp * cplx(gauss.next(), gauss.next());
    }
    const double n2 = f.norm_sq();
    if (n2 > 0.0) {
        const double s = std::sqrt(mass / n2);
        for (cplx& c : f.a) c *= s;
    }
    return f;
}

// Real-valued field: a_{l,-m} = (-1)^m conj(a_{l,m}), a_{l,0} real.
inline SpectralField random_real_field(int L, std::uint64_t seed, double mass = 1.0,
                                       int l_support = -1, double l_decay = 0.0) {
    if (l_support < 0 || l_support > L) l_support = L;
    GaussianSource gauss(seed);
    SpectralField f(L);
    for (int l = 0; l <= l_support; ++l) {
        const double damp = l_decay > 0.0 ? std::exp(-(double(l) / l_decay) * (double(l) / l_decay)) : 1.0;
        f.at(l, 0) = damp * gauss.next();
        for (int m = 1; m <= l; ++m) {
            const cplx c = damp * cplx(gauss.next(), gauss.next());
            f.at(l, m) = c;
            f.at(l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(c);
        }
    }
    const double n2 = f.norm_sq();
    if (n2 > 0.0) {
        const double s = std::sqrt(mass / n2);
        for (cplx& c : f.a) c *= s;
    }
    return f;
}

}  // namespace sphartree
