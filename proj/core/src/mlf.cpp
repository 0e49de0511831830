#include "fracdiff/mlf.hpp"

#include <quadmath.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fracdiff/errors.hpp"

namespace fracdiff {
namespace {

using quad = __float128;

constexpr double kPi = 3.14159265358979323846264338327950288;

// Lanczos g = 7, 9 coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7,
};

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double lanczos_positive(double x) {
    // valid for x >= 0.5
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i - 1.0);
    double t = x + 6.5;
    double lp = (x - 0.5) * std::log(t);
    if (lp < 300.0) return std::sqrt(2.0 * kPi) * std::pow(t, x - 0.5) * std::exp(-t) * a;
    // assemble in log space once pow(t, x-0.5) would overflow on its own
    return std::exp(lp - t + std::log(std::sqrt(2.0 * kPi) * a));
}

// ----- precision-parametrized primitives -------------------------------

template <class T>
struct Fp;

template <>
struct Fp<long double> {
    static long double exp(long double x) { return expl(x); }
    static long double log(long double x) { return logl(x); }
    static long double sin(long double x) { return sinl(x); }
    static long double cos(long double x) { return cosl(x); }
    static long double pow(long double a, long double b) { return powl(a, b); }
    static long double abs(long double x) { return fabsl(x); }
    static constexpr long double pi() { return 3.14159265358979323846264338327950288L; }
    static constexpr long double eps() { return 5.5e-20L; }
};

template <>
struct Fp<quad> {
    static quad exp(quad x) { return expq(x); }
    static quad log(quad x) { return logq(x); }
    static quad sin(quad x) { return sinq(x); }
    static quad cos(quad x) { return cosq(x); }
    static quad pow(quad a, quad b) { return powq(a, b); }
    static quad abs(quad x) { return fabsq(x); }
    static quad pi() { return M_PIq; }
    static constexpr quad eps() { return 1.93e-34Q; }
};

// log Gamma for x > 0, Stirling series with recurrence shift. Avoids the
// signgam globals of lgammal/lgammaq so concurrent callers never race.
template <class T>
T lgamma_pos(T x) {
    static const T kCoef[15] = {
        T(1) / 12,           -T(1) / 360,          T(1) / 1260,
        -T(1) / 1680,        T(1) / 1188,          -T(691) / 360360,
        T(1) / 156,          -T(3617) / 122400,    T(43867) / 244188,
        -T(174611) / 125400, T(854513) / 63756,    -T(236364091) / 1506960,
        T(8553103) / 3900,   -T(23749461029.0L) / 657720,
        T(8615841276005.0L) / 12460020,
    };
    const T half_log_two_pi = T(0.91893853320467274178032973640561764L);
    T shift = 0;
    T y = x;
    while (y < 30) {
        shift -= Fp<T>::log(y);
        y += 1;
    }
    T inv = 1 / y;
    T inv2 = inv * inv;
    T s = 0;
    T p = inv;
    for (int i = 0; i < 15; ++i) {
        s += kCoef[i] * p;
        p *= inv2;
    }
    return shift + (y - T(0.5)) * Fp<T>::log(y) - y + half_log_two_pi + s;
}

// 1/Gamma(y) as an entire function: reflection below 0.5 (exact zeros at
// the poles), plain exp(-lgamma) otherwise.
template <class T>
T inv_gamma(T y) {
    if (y >= T(0.5)) return Fp<T>::exp(-lgamma_pos<T>(y));
    T lg = lgamma_pos<T>(1 - y);
    if (lg > T(11000)) return 0;  // would underflow anyway
    return Fp<T>::sin(Fp<T>::pi() * y) * Fp<T>::exp(lg) / Fp<T>::pi();
}

template <class T>
T digamma_t(T x) {
    // x > 0 assumed shifted by caller when needed
    static const T kB[10] = {
        T(1) / 12,   -T(1) / 120,        T(1) / 252,  -T(1) / 240,
        T(1) / 132,  -T(691) / 32760,    T(1) / 12,   -T(3617) / 8160,
        T(43867) / 14364, -T(174611) / 6600,
    };
    T acc = 0;
    T y = x;
    while (y < 24) {
        acc -= 1 / y;
        y += 1;
    }
    T inv2 = 1 / (y * y);
    T s = 0;
    T p = inv2;
    for (int i = 0; i < 10; ++i) {
        s += kB[i] * p;
        p *= inv2;
    }
    return acc + Fp<T>::log(y) - T(0.5) / y - s;
}

// ----- per-(p, r) coefficient cache ------------------------------------

struct AsymCoef {
    long double inv_gamma;  // 1/Gamma(r - p k), carries the sin oscillation
    long double log_env;    // log of the envelope |1/Gamma| with sin removed
};

// Doubled-order series work with parameters P = 2^d p, R = s p + r. Keying
// the cache on (p, r, d, s) and forming the Gamma argument as
// p (2^d k + s) + r in 128-bit keeps every variant bit-consistent with its
// siblings; rounding R to double first would wreck the identity after the
// e^{|z|^{1/p}}-sized cancellation.
struct SeriesKey {
    uint64_t pb, rb;
    int d, s;
    bool operator==(const SeriesKey&) const = default;
};

struct SeriesKeyHash {
    size_t operator()(const SeriesKey& k) const noexcept {
        uint64_t h = k.pb * 0x9e3779b97f4a7c15ULL;
        h ^= k.rb + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= (uint64_t(k.d) << 32 | uint64_t(uint32_t(k.s))) + (h << 6);
        return std::hash<uint64_t>()(h);
    }
};

uint64_t bits_of(double x) {
    uint64_t b;
    std::memcpy(&b, &x, 8);
    return b;
}

const std::vector<quad>& series_coeffs(double p, double r, int d, int s, int count) {
    thread_local std::unordered_map<SeriesKey, std::vector<quad>, SeriesKeyHash> cache;
    auto& c = cache[SeriesKey{bits_of(p), bits_of(r), d, s}];
    while (static_cast<int>(c.size()) < count) {
        long long k = c.size();
        quad arg = quad(p) * quad((k << d) + s) + quad(r);
        c.push_back(inv_gamma<quad>(arg));
    }
    return c;
}

const std::vector<AsymCoef>& asym_coeffs(double p, double r, int count) {
    thread_local std::unordered_map<SeriesKey, std::vector<AsymCoef>, SeriesKeyHash> cache;
    auto& c = cache[SeriesKey{bits_of(p), bits_of(r), 0, 0}];
    while (static_cast<int>(c.size()) < count) {
        int k = static_cast<int>(c.size()) + 1;
        long double y = (long double)r - (long double)p * k;
        AsymCoef ac;
        ac.inv_gamma = inv_gamma<long double>(y);
        ac.log_env = (y >= 0.5L) ? -lgamma_pos<long double>(y)
                                 : lgamma_pos<long double>(1 - y) -
                                       logl(Fp<long double>::pi());
        c.push_back(ac);
    }
    return c;
}

// ----- series branch ----------------------------------------------------

struct SeriesResult {
    quad value = 0;
    bool converged = false;
};

// sum_{k>=0} z^k / Gamma(P k + R) in 128-bit arithmetic, P = 2^d p,
// R = s p + r.
SeriesResult ml_series_q(double p, double r, int d, int s, quad z, const MLEvalPolicy& pol) {
    const int cap = pol.max_series_terms;
    const auto& invg = series_coeffs(p, r, d, s, cap + 1);
    SeriesResult res;
    quad sum = 0;
    quad zpow = 1;
    quad maxmag = 0;
    quad prev = 0;
    bool decreasing = false;
    for (int k = 0; k <= cap; ++k) {
        quad term = zpow * invg[k];
        sum += term;
        quad m = fabsq(term);
        if (m > maxmag) maxmag = m;
        if (k > 0 && m < prev) decreasing = true;
        if (decreasing && m <= Fp<quad>::eps() * (maxmag + fabsq(sum))) {
            res.converged = true;
            break;
        }
        prev = m;
        zpow *= z;
        if (fabsq(zpow) > FLT128_MAX * 1e-120) break;  // give up before overflow
    }
    res.value = sum;
    return res;
}

// E_{P,R}(y) for y >= 0 with P = 2^d p, R = s p + r, doubling the order
// while the direct series would not fit the term budget:
//   E_{P,R}(y) = E_{2P,R}(y^2) + y E_{2P,P+R}(y^2),   all terms positive.
quad ml_nonneg_q(double p, double r, int d, int s, quad y, const MLEvalPolicy& pol) {
    const double p_eff = std::ldexp(p, d);
    double w_est = (y > 1) ? std::pow((double)y, 1.0 / p_eff) : 0.0;
    double terms_est = 3.6 * w_est / p_eff;
    if (terms_est > 0.92 * pol.max_series_terms && d < 4 && p_eff <= 6.0) {
        quad y2 = y * y;
        if (fabsq(y2) < FLT128_MAX * 1e-120) {
            return ml_nonneg_q(p, r, d + 1, s, y2, pol) +
                   y * ml_nonneg_q(p, r, d + 1, s + (1 << d), y2, pol);
        }
    }
    SeriesResult res = ml_series_q(p, r, d, s, y, pol);
    if (!res.converged)
        throw NumericalInstability("ml: series did not converge within term budget (p=" +
                                   std::to_string(p) + ", r=" + std::to_string(r) + ")");
    return res.value;
}

// Series-branch value for z = -x < 0. For small p one doubling step turns
// the violently alternating series into two positive-term series joined by
// a single guarded subtraction.
quad ml_neg_series_q(double p, double r, double x, const MLEvalPolicy& pol) {
    if (p < 0.3) {
        quad y = quad(x) * quad(x);
        quad a = ml_nonneg_q(p, r, 1, 0, y, pol);
        quad b = ml_nonneg_q(p, r, 1, 1, y, pol);
        return a - quad(x) * b;
    }
    SeriesResult res = ml_series_q(p, r, 0, 0, -quad(x), pol);
    if (!res.converged)
        throw NumericalInstability("ml: alternating series did not converge (p=" +
                                   std::to_string(p) + ", r=" + std::to_string(r) +
                                   ", z=" + std::to_string(-x) + ")");
    return res.value;
}

// ----- large-argument branch --------------------------------------------

// Oscillatory saddle contribution for p in [1, 2]:
//   (mult/p) Re[ w^{1-r} e^{w} ],  w = x^{1/p} e^{i pi/p},
// with mult = 2 for the conjugate pair (p > 1) and 1 on the real axis (p = 1).
long double saddle_term(double p, double r, long double x) {
    long double w = powl(x, 1.0L / (long double)p);
    long double phi = Fp<long double>::pi() / (long double)p;
    long double re = w * cosl(phi);
    if (re < -11350.0L) return 0.0L;
    long double mult = (p == 1.0) ? 1.0L : 2.0L;
    long double mag = (mult / (long double)p) * powl(w, 1.0L - (long double)r) * expl(re);
    return mag * cosl(w * sinl(phi) + phi * (1.0L - (long double)r));
}

// E_{p,r}(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(r - p k)  [+ saddle].
// Adaptive truncation: stop at the tolerance or at optimal truncation. The
// stopping logic works on the pole-free term envelope: raw |term| values
// dip spuriously whenever r - p k drifts within rounding of a Gamma pole.
long double ml_asymptotic(double p, double r, double x, const MLEvalPolicy& pol) {
    const int cap = std::max(pol.asymptotic_terms, 8);
    const auto& coef = asym_coeffs(p, r, cap);
    const long double lx = logl((long double)x);
    long double sum = 0;
    long double env_min = std::numeric_limits<long double>::max();
    for (int k = 1; k <= cap; ++k) {
        long double lenv = coef[k - 1].log_env - k * lx;
        if (k > 2 && lenv > env_min) break;  // past optimal truncation
        env_min = lenv < env_min ? lenv : env_min;
        long double t = expl(-k * lx) * coef[k - 1].inv_gamma;
        sum += (k % 2 == 1) ? t : -t;
        long double stop = (long double)pol.series_tol * 0.01L * fabsl(sum) + 1e-330L;
        if (lenv <= logl(stop)) break;
    }
    if (p >= 1.0) sum += saddle_term(p, r, x);
    return sum;
}

// ----- dispatch ----------------------------------------------------------

void validate_policy(const MLEvalPolicy& pol) {
    if (!(pol.series_tol > 0) || !(pol.series_switch > 0) || pol.max_series_terms < 10)
        throw std::domain_error("ml: invalid evaluation policy");
}

double seam_w(double p, const MLEvalPolicy& pol) {
    double p_eff = (p < 0.3) ? 2 * p : p;
    return std::min(pol.series_switch, 0.25 * pol.max_series_terms * p_eff);
}

double ml_dispatch(double p, double r, double z, const MLEvalPolicy& pol) {
    if (z == 0.0) return 1.0 / gamma_fn(r);

    // Exact special cases; these are also the large-argument limits the
    // algebraic expansion cannot represent (its terms all sit on poles).
    if (p == 1.0) {
        if (r == 1.0) return std::exp(z);
        if (r == 2.0 && std::abs(z) > 1e-4) return std::expm1(z) / z;
        if (r == 3.0 && std::abs(z) > 1e-2) return (std::expm1(z) - z) / (z * z);
    }
    if (p == 2.0 && z < 0.0) {
        double sq = std::sqrt(-z);
        if (r == 1.0) return std::cos(sq);
        if (r == 2.0 && sq > 1e-4) return std::sin(sq) / sq;
    }

    if (z > 0.0) return (double)ml_nonneg_q(p, r, 0, 0, quad(z), pol);

    const double x = -z;
    const double w = std::pow(x, 1.0 / p);
    const double ws = seam_w(p, pol);

    if (w > ws * 0.996 && w < ws * 1.004) {
        // Internal self-check right at the switchover.
        double a = (double)ml_neg_series_q(p, r, x, pol);
        double b = (double)ml_asymptotic(p, r, x, pol);
        double scale = std::max({std::abs(a), std::abs(b), 1e-280});
        if (std::abs(a - b) > 1e-6 * scale)
            throw NumericalInstability("ml: branch disagreement at switchover (p=" +
                                       std::to_string(p) + ", r=" + std::to_string(r) +
                                       ", z=" + std::to_string(z) + ")");
        return a;
    }
    if (w <= ws) return (double)ml_neg_series_q(p, r, x, pol);
    return (double)ml_asymptotic(p, r, x, pol);
}

}  // namespace

double gamma_fn(double x) {
    if (nonpositive_integer(x))
        throw std::domain_error("gamma_fn: pole at nonpositive integer x=" + std::to_string(x));
    if (x < 0.5) return kPi / (std::sin(kPi * x) * lanczos_positive(1.0 - x));
    return lanczos_positive(x);
}

double digamma_fn(double x) {
    if (nonpositive_integer(x))
        throw std::domain_error("digamma_fn: pole at nonpositive integer x=" + std::to_string(x));
    if (x < 0.5) return digamma_t<long double>(1.0L - (long double)x) - kPi / std::tan(kPi * x);
    return (double)digamma_t<long double>((long double)x);
}

double ml(double p, double r, double z, const MLEvalPolicy& pol) {
    validate_policy(pol);
    if (!(r > 0.0) || r > 8.0)
        throw std::domain_error("ml: r out of range (0, 8]: r=" + std::to_string(r));
    const double p_max = (z < 0.0) ? 2.0 : 12.0;
    if (!(p > 0.0) || p > p_max)
        throw std::domain_error("ml: p out of range: p=" + std::to_string(p) +
                                " (max " + std::to_string(p_max) + " for this sign of z)");
    return ml_dispatch(p, r, z, pol);
}

double ml_one_minus(double p, double z, const MLEvalPolicy& pol) {
    if (z < 0.0) throw std::domain_error("ml_one_minus: requires z >= 0");
    if (z == 0.0) return 0.0;
    if (z <= 0.5) return z * ml(p, p + 1.0, -z, pol);
    return 1.0 - ml(p, 1.0, -z, pol);
}

double ml_t_derivative(double p, double lambda, double t, int k, const MLEvalPolicy& pol) {
    if (!(t > 0.0)) throw std::domain_error("ml_t_derivative: requires t > 0");
    if (k != 1 && k != 2) throw std::domain_error("ml_t_derivative: k must be 1 or 2");
    if (lambda < 0.0) throw std::domain_error("ml_t_derivative: requires lambda >= 0");
    const double r = p - k + 1.0;
    if (!(r > 0.0))
        throw std::domain_error("ml_t_derivative: p - k + 1 must be positive");
    return -lambda * std::pow(t, p - k) * ml(p, r, -lambda * std::pow(t, p), pol);
}

std::pair<double, double> ml_param_grad(double p, double r, double z, const MLEvalPolicy& pol) {
    validate_policy(pol);
    if (!(p > 0.0) || p > 2.0 || !(r > 0.0) || r > 8.0)
        throw std::domain_error("ml_param_grad: parameters out of range");
    if (z > 0.0) throw std::domain_error("ml_param_grad: requires z <= 0");
    const double x = -z;
    // Direct (un-doubled) series only: gradient reach shrinks with p.
    double wmax = std::min(seam_w(p, pol), 0.25 * pol.max_series_terms * p);
    if (x > 0.0 && std::pow(x, 1.0 / p) > wmax)
        throw std::domain_error("ml_param_grad: asymptotic-range input unsupported");

    const int cap = pol.max_series_terms;
    const auto& invg = series_coeffs(p, r, 0, 0, cap + 1);
    quad zq = quad(z);
    quad zpow = 1;
    quad dp = 0, dr = 0, maxmag = 0;
    for (int k = 0; k <= cap; ++k) {
        quad arg = quad(p) * k + quad(r);
        quad psi = digamma_t<quad>(arg);
        quad base = zpow * invg[k];
        quad tr = -psi * base;
        quad tp = quad(k) * tr;
        dp += tp;
        dr += tr;
        quad m = fabsq(tp) + fabsq(tr);
        if (m > maxmag) maxmag = m;
        if (k > 2 && m <= Fp<quad>::eps() * (maxmag + fabsq(dp) + fabsq(dr))) break;
        zpow *= zq;
    }
    return {(double)dp, (double)dr};
}

double ml_branch_seam(double p, const MLEvalPolicy& pol) {
    validate_policy(pol);
    if (!(p > 0.0) || p > 2.0) throw std::domain_error("ml_branch_seam: p out of range");
    return std::pow(seam_w(p, pol), p);
}

}  // namespace fracdiff
