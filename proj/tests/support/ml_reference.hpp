#pragma once

// Reference Mittag-Leffler evaluation in 120-decimal-digit arithmetic.
// Independent of the library implementation: plain power series, with the
// working precision sized to absorb the alternating-series cancellation.
// The series is usable wherever it converges within the term budget, i.e.
// for stretched magnitudes w = |z|^(1/p) up to ~60; beyond that the
// library's large-argument expansion only gets more accurate, so sampling
// oracles inside this domain still exercises both branches (the branch
// seam sits at w ~ 38).

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <stdexcept>

namespace mlref {

using big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>>;

inline big ml_series(const big& p, const big& r, const big& z, int max_terms = 12000) {
    big sum = 0;
    big zpow = 1;
    big maxmag = 0;
    const big tol("1e-80");
    bool decreasing = false;
    big prev = 0;
    for (int k = 0; k <= max_terms; ++k) {
        big term = zpow / boost::math::tgamma(p * k + r);
        sum += term;
        big m = abs(term);
        if (m > maxmag) maxmag = m;
        if (k > 0 && m < prev) decreasing = true;
        if (decreasing && m < tol * (maxmag + abs(sum))) return sum;
        prev = m;
        zpow *= z;
    }
    throw std::runtime_error("ml_series reference: term budget exhausted");
}

inline double ml_reference(double p, double r, double z) {
    return ml_series(big(p), big(r), big(z)).convert_to<double>();
}

/// Largest |z| (negative side) at which the reference series is trusted for
/// this p: stretched magnitude capped at 60 and the term budget respected.
inline double ml_reference_reach(double p) {
    double w = std::min(60.0, 11000.0 * p / 3.6);
    return std::pow(w, p);
}

}  // namespace mlref
