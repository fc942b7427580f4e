#include "shc/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "shc/errors.hpp"

namespace shc {
namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;

void require_positive_argument(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("Bessel argument must be finite and positive, got " + std::to_string(x));
}

bool is_integer(long double v) { return v == std::floor(v); }

// Returns k when order = k + 1/2 up to 1e-13, otherwise a sentinel.
int half_integer_index(double order) {
    const double shifted = order - 0.5;
    const double k = std::round(shifted);
    if (std::fabs(shifted - k) < 1e-13) return static_cast<int>(k);
    return 1 << 30;
}

long double series_ld(long double v, long double x) {
    if (v < 0 && is_integer(v)) {
        const long double r = series_ld(-v, x);
        return (static_cast<long long>(-v) % 2 == 0) ? r : -r;
    }
    const long double half = x / 2;
    const long double q = -half * half;
    long double term = std::pow(half, v) / std::tgamma(v + 1);
    long double sum = term;
    long double biggest = std::fabs(term);
    for (int k = 1; k < 1000; ++k) {
        term *= q / (static_cast<long double>(k) * (k + v));
        sum += term;
        biggest = std::fmax(biggest, std::fabs(term));
        if (k > half && std::fabs(term) <= 1e-22L * biggest) break;
    }
    return sum;
}

long double asymptotic_ld(long double v, long double x, int terms) {
    const long double mu = 4 * v * v;
    long double a = 1;
    long double p = 0;
    long double q = 0;
    long double xpow = 1;
    const long double xinv = 1 / x;
    for (int k = 0; k < 2 * terms; ++k) {
        if (k > 0) {
            const long double odd = 2 * k - 1;
            a *= (mu - odd * odd) / (8 * k);
        }
        const long double t = a * xpow;
        if (k % 2 == 0)
            p += ((k / 2) % 2 == 0) ? t : -t;
        else
            q += (((k - 1) / 2) % 2 == 0) ? t : -t;
        xpow *= xinv;
    }
    // cos/sin of (x - phase) expanded so that x itself is reduced exactly
    const long double phase = (v / 2 + 0.25L) * kPiL;
    const long double cx = std::cos(x), sx = std::sin(x);
    const long double cp = std::cos(phase), sp = std::sin(phase);
    const long double cw = cx * cp + sx * sp;
    const long double sw = sx * cp - cx * sp;
    return std::sqrt(2 / (kPiL * x)) * (p * cw - q * sw);
}

// Closed forms for orders -3/2, -1/2, 1/2, 3/2.
bool closed_form(int k, long double x, long double& out) {
    const long double env = std::sqrt(2 / (kPiL * x));
    const long double s = std::sin(x), c = std::cos(x);
    switch (k) {
        case 0: out = env * s; return true;
        case -1: out = env * c; return true;
        case 1:
            if (x < 1) return false;
            out = env * (s / x - c);
            return true;
        case -2:
            if (x < 1) return false;
            out = env * (-c / x - s);
            return true;
        default: return false;
    }
}

}  // namespace

void EvalRegime::validate() const {
    if (!(series_cutoff >= 8.0))
        throw DomainError("series_cutoff must be >= 8");
    if (asymptotic_terms < 1 || asymptotic_terms > 8)
        throw DomainError("asymptotic_terms must lie in [1, 8]");
}

double gamma_real(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
    if (x <= 0.0 && x == std::floor(x))
        throw DomainError("gamma: pole at non-positive integer " + std::to_string(x));
    return std::tgamma(x);
}

double bessel_j_series(double order, double x) {
    require_positive_argument(x);
    return static_cast<double>(series_ld(order, x));
}

double bessel_j_asymptotic(double order, double x, int terms) {
    require_positive_argument(x);
    if (terms < 1) throw DomainError("asymptotic expansion needs at least one term");
    return static_cast<double>(asymptotic_ld(order, x, terms));
}

long double bessel_j_ext(long double order, long double x, const EvalRegime& regime) {
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("Bessel argument must be finite and positive");
    if (!std::isfinite(order)) throw DomainError("Bessel order must be finite");
    regime.validate();
    if (regime.closed_forms) {
        long double out = 0;
        if (closed_form(half_integer_index(static_cast<double>(order)), x, out)) return out;
    }
    if (x < regime.series_cutoff) return series_ld(order, x);
    return asymptotic_ld(order, x, regime.asymptotic_terms);
}

double bessel_j(double order, double x, const EvalRegime& regime) {
    require_positive_argument(x);
    return static_cast<double>(bessel_j_ext(order, x, regime));
}

double bessel_j_prime(double order, double x, const EvalRegime& regime) {
    return 0.5 * (bessel_j(order - 1.0, x, regime) - bessel_j(order + 1.0, x, regime));
}

long double bessel_j_prime_ext(long double order, long double x, const EvalRegime& regime) {
    return (bessel_j_ext(order - 1, x, regime) - bessel_j_ext(order + 1, x, regime)) / 2;
}

double wronskian_residual(double order, double x) {
    if (!(order > 0.0 && order < 1.0)) throw DomainError("wronskian_residual: order must lie in (0,1)");
    require_positive_argument(x);
    const double w = bessel_j(order, x) * bessel_j_prime(-order, x) -
                     bessel_j_prime(order, x) * bessel_j(-order, x);
    return w + 2.0 * std::sin(order * std::numbers::pi) / (std::numbers::pi * x);
}

namespace {

double refine_zero(double order, double lo, double hi) {
    double flo = bessel_j(order, lo);
    const double fhi = bessel_j(order, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw ConvergenceError("bessel_zero: bracket lost its sign change");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = bessel_j(order, x);
        if (fx == 0.0) return x;
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        double next = x - fx / bessel_j_prime(order, x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::fabs(next - x);
        x = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * x ||
            hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * x)
            break;
    }
    if (std::fabs(bessel_j(order, x)) >= 1e-11)
        throw ConvergenceError("bessel_zero: residual above 1e-11 at order " + std::to_string(order));
    return x;
}

double mcmahon(double order, int n) {
    const double beta = (n + order / 2.0 - 0.25) * std::numbers::pi;
    const double mu = 4.0 * order * order;
    const double e = 8.0 * beta;
    return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

}  // namespace

double bessel_zero(double order, int n) {
    if (!(order > -1.0)) throw DomainError("bessel_zero: order must exceed -1");
    if (n < 1) throw DomainError("bessel_zero: index must be >= 1");
    if (std::fabs(order - 0.5) < 1e-13) return n * std::numbers::pi;
    if (std::fabs(order + 0.5) < 1e-13) return (n - 0.5) * std::numbers::pi;

    if (n > 3) {
        const double guess = mcmahon(order, n);
        double lo = guess - 0.75, hi = guess + 0.75;
        for (int widen = 0; widen < 8; ++widen) {
            if ((bessel_j(order, lo) > 0) != (bessel_j(order, hi) > 0)) return refine_zero(order, lo, hi);
            lo -= 0.1;
            hi += 0.1;
        }
        throw ConvergenceError("bessel_zero: no sign change near McMahon estimate");
    }

    // Low zeros: J_order is positive just right of 0 for order > -1; count sign changes.
    double x = 1e-6;
    double fprev = bessel_j(order, x);
    int found = 0;
    if (fprev <= 0.0) throw ConvergenceError("bessel_zero: first zero too close to the origin");
    constexpr double step = 0.05;
    while (x < 50.0) {
        const double next = x + step;
        const double f = bessel_j(order, next);
        if ((f > 0) != (fprev > 0)) {
            if (++found == n) return refine_zero(order, x, next);
        }
        x = next;
        fprev = f;
    }
    throw ConvergenceError("bessel_zero: scan exhausted");
}

bool product_upper_bound_check(double order, double x) {
    if (!(order > 0.0 && order < 1.0)) throw DomainError("product bound: order must lie in (0,1)");
    require_positive_argument(x);
    const double bound = std::sin(order * std::numbers::pi) / (order * std::numbers::pi);
    return bessel_j(order, x) * bessel_j(-order, x) < bound;
}

double bessel_product_integral(ProductKind kind, double order, double a, double alpha, double beta) {
    if (!(a > 0.0)) throw DomainError("product integral: scale must be positive");
    if (!(alpha >= 0.0 && beta > alpha)) throw DomainError("product integral: need 0 <= alpha < beta");
    const double v2a2 = order * order / (a * a);
    if (kind == ProductKind::same_order) {
        if (!(std::fabs(order) < 1.0 && order != 0.0))
            throw DomainError("same_order integral: |order| must lie in (0,1)");
        auto antideriv = [&](double t) {
            const double j = bessel_j(order, a * t);
            const double jp = bessel_j_prime(order, a * t);
            return 0.5 * ((t * t - v2a2) * j * j + t * t * jp * jp);
        };
        return antideriv(beta) - (alpha > 0.0 ? antideriv(alpha) : 0.0);
    }
    if (!(order > 0.0 && order < 1.0)) throw DomainError("cross_order integral: order must lie in (0,1)");
    auto antideriv = [&](double t) {
        const double jp = bessel_j(order, a * t), jm = bessel_j(-order, a * t);
        const double dp = bessel_j_prime(order, a * t), dm = bessel_j_prime(-order, a * t);
        return 0.5 * ((t * t - v2a2) * jp * jm + t * t * dp * dm);
    };
    if (alpha > 0.0) return antideriv(beta) - antideriv(alpha);
    return antideriv(beta) + order * std::sin(order * std::numbers::pi) / (std::numbers::pi * a * a);
}

}  // namespace shc
