#include "shc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <string>

#include "shc/errors.hpp"
#include "shc/parallel.hpp"
#include "shc/special_functions.hpp"

namespace shc {

const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

SpectralParameter SpectralParameter::make(double nu) {
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("nu must lie in (0,1), got " + std::to_string(nu));
    if (std::fabs(nu - 0.5) < 1e-10) nu = 0.5;
    SpectralParameter p;
    p.nu = nu;
    p.c_nu = nu * nu - 0.25;
    p.gamma_ratio = gamma_real(nu + 1.0) / gamma_real(1.0 - nu);
    p.odd_factor = (1.0 - 2.0 * nu) / (1.0 + 2.0 * nu);
    return p;
}

double SpectralParameter::k_factor(double E) const {
    return gamma_ratio * std::pow(std::sqrt(E) / 2.0, -2.0 * nu);
}

double characteristic(const SpectralParameter& param, Parity parity, double E) {
    if (!(E > 0.0)) throw DomainError("characteristic needs E > 0");
    const double s = std::sqrt(E);
    const double den = bessel_j(-param.nu, s);
    // within rounding of a zero of J_{-nu}
    if (std::fabs(den) <= 4 * std::numeric_limits<double>::epsilon() * std::max(s, 1.0) *
                                 std::sqrt(2.0 / (std::numbers::pi * s)))
        throw DomainError("characteristic: pole at a zero of J_{-nu}");
    const double h1 = param.k_factor(E) * bessel_j(param.nu, s) / den;
    const double h = parity == Parity::even ? h1 : param.odd_factor * h1;
    if (!std::isfinite(h)) throw DomainError("characteristic: pole at a zero of J_{-nu}");
    return h;
}

long double characteristic_ext(const SpectralParameter& param, Parity parity, long double E) {
    if (!(E > 0)) throw DomainError("characteristic needs E > 0");
    const long double s = std::sqrt(E);
    const long double den = bessel_j_ext(-param.nu, s);
    if (std::fabs(den) <= 4 * std::numeric_limits<long double>::epsilon() * std::max(s, 1.0L) *
                                 std::sqrt(2 / (std::numbers::pi_v<long double> * s)))
        throw DomainError("characteristic: pole at a zero of J_{-nu}");
    const long double k = param.gamma_ratio * std::pow(s / 2, -2.0L * param.nu);
    const long double h1 = k * bessel_j_ext(param.nu, s) / den;
    const long double h = parity == Parity::even ? h1 : param.odd_factor * h1;
    if (!std::isfinite(h)) throw DomainError("characteristic: pole at a zero of J_{-nu}");
    return h;
}

Bracket eigenvalue_bracket(const SpectralParameter& param, int n) {
    if (n < 1) throw DomainError("eigenvalue_bracket needs n >= 1");
    const double nu = param.nu;
    auto sq = [](double v) { return v * v; };
    if (n % 2 == 0) {
        const int m = n / 2;
        return {sq(bessel_zero(nu, m)), sq(bessel_zero(-nu, m + 1)), false};
    }
    const int m = (n - 1) / 2;
    if (param.is_half()) {
        const double v = sq(bessel_zero(-0.5, m + 1));
        return {v, v, true};
    }
    if (nu < 0.5) {
        const double lo = m == 0 ? 0.0 : sq(bessel_zero(nu, m));
        return {lo, sq(bessel_zero(-nu, m + 1)), false};
    }
    return {sq(bessel_zero(-nu, m + 1)), sq(bessel_zero(nu, m + 1)), false};
}

long double eigenvalue_ext(const SpectralParameter& param, int n) {
    if (n < 0) throw DomainError("eigenvalue index must be >= 0");
    if (n == 0) return 0;
    const Bracket br = eigenvalue_bracket(param, n);
    if (br.degenerate) {
        const long double root = (static_cast<long double>((n - 1) / 2) + 0.5L) * std::numbers::pi_v<long double>;
        return root * root;
    }
    const Parity parity = parity_of(n);
    const bool increasing = !(parity == Parity::odd && param.nu > 0.5);
    auto g = [&](long double E) { return characteristic_ext(param, parity, E) - 1; };

    long double lo = br.lo, hi = br.hi;
    long double glo = std::numeric_limits<long double>::quiet_NaN(), ghi = glo;
    // Past the 1e-12 relative width the loop keeps halving until the
    // interval is exhausted, so the residual is limited by rounding only.
    for (int steps = 0; steps < 200; ++steps) {
        const long double mid = (lo + hi) / 2;
        if (!(mid > lo && mid < hi)) break;
        const long double gm = g(mid);
        if (gm == 0) return mid;
        if ((gm < 0) == increasing) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    if (!(hi - lo <= 1e-12L * hi)) throw ConvergenceError("eigenvalue: bisection did not converge for n=" + std::to_string(n));
    if (std::isnan(glo)) return hi;
    if (std::isnan(ghi)) return lo;
    return std::fabs(glo) <= std::fabs(ghi) ? lo : hi;
}

double eigenvalue(const SpectralParameter& param, int n) { return static_cast<double>(eigenvalue_ext(param, n)); }

EigenCoefficients eigenfunction_coeffs(const SpectralParameter& param, int n, double lambda) {
    if (n < 1) throw DomainError("eigenfunction_coeffs needs n >= 1 (index 0 is the kernel profile)");
    const double k = param.k_factor(lambda);
    EigenCoefficients c;
    if (n % 2 == 0) {
        c.minus_nu_plus = c.minus_nu_minus = 1.0;
        c.nu_plus = c.nu_minus = -k;
    } else {
        c.minus_nu_plus = 1.0;
        c.minus_nu_minus = -1.0;
        c.nu_plus = -param.odd_factor * k;
        c.nu_minus = param.odd_factor * k;
    }
    return c;
}

double normalization(const SpectralParameter& param, int n, double lambda, const EigenCoefficients& coeffs) {
    const double nu = param.nu;
    if (n == 0) return std::sqrt(2.0 * (1.0 / (2.0 * nu + 2.0) + 1.0 / (2.0 - 2.0 * nu) - 1.0));
    const double a = std::sqrt(lambda);
    const double jp = bessel_j(nu, a), jm = bessel_j(-nu, a);
    const double dp = bessel_j_prime(nu, a), dm = bessel_j_prime(-nu, a);
    const double w = 1.0 - nu * nu / lambda;
    // psi^2 is even, so twice the (0,1) integral; coefficients on x > 0 are (-k, 1).
    const double k = -coeffs.nu_plus / coeffs.minus_nu_plus;
    const double s = coeffs.minus_nu_plus;
    const double same_minus = w * jm * jm + dm * dm;
    const double cross = w * jp * jm + dp * dm + 2.0 * nu * std::sin(nu * std::numbers::pi) / (std::numbers::pi * lambda);
    const double same_plus = w * jp * jp + dp * dp;
    const double a2 = s * s * (same_minus - 2.0 * k * cross + k * k * same_plus);
    if (!(a2 > 0.0)) throw ContractError("normalization: non-positive norm for n=" + std::to_string(n));
    return std::sqrt(a2);
}

double coefficient_residual(const SpectralParameter& param, const EigenRecord& rec) {
    if (rec.kernel()) return 0.0;
    const double nu = param.nu;
    const double d = param.d_nu(rec.lambda);
    const auto& c = rec.coeffs;
    auto rel = [](double r, double scale) { return std::fabs(r) / (scale > 0.0 ? scale : 1.0); };
    double worst = 0.0;
    const double r1 = c.nu_plus + d * (c.minus_nu_plus + 2.0 * nu * c.minus_nu_minus);
    worst = std::max(worst, rel(r1, std::fabs(c.nu_plus) + d * (std::fabs(c.minus_nu_plus) + 2.0 * nu * std::fabs(c.minus_nu_minus))));
    const double r2 = c.nu_minus + d * (c.minus_nu_minus + 2.0 * nu * c.minus_nu_plus);
    worst = std::max(worst, rel(r2, std::fabs(c.nu_minus) + d * (std::fabs(c.minus_nu_minus) + 2.0 * nu * std::fabs(c.minus_nu_plus))));
    if (!(param.is_half() && rec.parity == Parity::odd)) {
        const long double s = std::sqrt(rec.lambda_ext);
        const double jp = static_cast<double>(bessel_j_ext(nu, s));
        const double jm = static_cast<double>(bessel_j_ext(-nu, s));
        const double r4 = c.minus_nu_plus * jp * 2.0 * nu * d - c.minus_nu_minus * (jm - jp * d);
        worst = std::max(worst, rel(r4, std::fabs(jp * 2.0 * nu * d) + std::fabs(jm) + std::fabs(jp * d)));
        const double r5 = c.nu_plus * jp + c.minus_nu_plus * jm;
        worst = std::max(worst, rel(r5, std::fabs(c.nu_plus * jp) + std::fabs(c.minus_nu_plus * jm)));
    }
    return worst;
}

EigenRecord make_record(const SpectralParameter& param, int n) {
    EigenRecord rec;
    rec.index = n;
    rec.parity = parity_of(n);
    if (n == 0) {
        rec.bracket = {0.0, 0.0, true};
        rec.lambda = 0.0;
        rec.norm_a = normalization(param, 0, 0.0, rec.coeffs);
        return rec;
    }
    rec.bracket = eigenvalue_bracket(param, n);
    rec.lambda_ext = eigenvalue_ext(param, n);
    rec.lambda = static_cast<double>(rec.lambda_ext);
    rec.coeffs = eigenfunction_coeffs(param, n, rec.lambda);
    rec.norm_a = normalization(param, n, rec.lambda, rec.coeffs);
    return rec;
}

SpectralBasis::SpectralBasis(const SpectralParameter& param, int count, QuadratureConfig cfg)
    : param_(param), cfg_(cfg) {
    if (count < 1) throw DomainError("basis needs at least one mode");
    cfg_.validate();
    records_.resize(count);
    parallel_for(count, [&](int n) { records_[n] = make_record(param_, n); });
}

const EigenRecord& SpectralBasis::record(int n) const {
    if (n < 0 || n >= count()) throw DomainError("mode index " + std::to_string(n) + " outside the basis");
    return records_[n];
}

double eigenfunction_raw(const SpectralParameter& param, const EigenRecord& rec, double x) {
    const double ax = std::fabs(x);
    if (rec.kernel()) return std::pow(ax, param.nu + 0.5) - std::pow(ax, 0.5 - param.nu);
    const double a = std::sqrt(rec.lambda);
    const double root = std::sqrt(ax);
    const double cp = x > 0.0 ? rec.coeffs.nu_plus : rec.coeffs.nu_minus;
    const double cm = x > 0.0 ? rec.coeffs.minus_nu_plus : rec.coeffs.minus_nu_minus;
    return root * (cp * bessel_j(param.nu, a * ax) + cm * bessel_j(-param.nu, a * ax));
}

double eigenfunction_eval(const SpectralBasis& basis, int n, double x) {
    if (!(std::fabs(x) >= 1e-12)) throw DomainError("eigenfunction evaluation too close to the singular point");
    if (!(x > -1.0 - 1e-15 && x < 1.0 + 1e-15)) throw DomainError("eigenfunction evaluation outside (-1,1)");
    const auto& rec = basis.record(n);
    return eigenfunction_raw(basis.param(), rec, x) / rec.norm_a;
}

Eigen::MatrixXd gram_matrix(const SpectralBasis& basis, int upto) {
    if (upto < 1 || upto > basis.count()) throw DomainError("gram_matrix: upto outside basis");
    const auto region = IntervalUnion::whole();
    const auto& param = basis.param();
    Eigen::MatrixXd g(upto, upto);
    for (int m = 0; m < upto; ++m) {
        for (int n = m; n < upto; ++n) {
            const auto& rm = basis.record(m);
            const auto& rn = basis.record(n);
            const double scale = rm.norm_a * rn.norm_a;
            const double v = integrate_estimate(
                                 [&](double x) {
                                     return eigenfunction_raw(param, rm, x) * eigenfunction_raw(param, rn, x) / scale;
                                 },
                                 region, basis.quadrature())
                                 .value;
            g(m, n) = g(n, m) = v;
        }
    }
    return g;
}

double norm_squared_by_quadrature(const SpectralBasis& basis, int n) {
    const auto& rec = basis.record(n);
    return integrate_estimate(
               [&](double x) {
                   const double v = eigenfunction_raw(basis.param(), rec, x);
                   return v * v;
               },
               IntervalUnion::whole(), basis.quadrature())
        .value;
}

double ode_residual(const SpectralBasis& basis, int n, const std::vector<double>& grid) {
    const auto& rec = basis.record(n);
    const auto& param = basis.param();
    auto phi = [&](double x) { return eigenfunction_raw(param, rec, x) / rec.norm_a; };
    double worst = 0.0;
    for (double x : grid) {
        if (std::fabs(x) < 0.05 || std::fabs(x) > 1.0) throw DomainError("ode_residual grid must satisfy 0.05 <= |x| <= 1");
        const double h = std::min(1e-3, 0.004 * std::fabs(x));
        const double f0 = phi(x);
        const double d2 = (-phi(x + 2 * h) + 16.0 * phi(x + h) - 30.0 * f0 + 16.0 * phi(x - h) - phi(x - 2 * h)) /
                          (12.0 * h * h);
        const double r = -d2 + param.c_nu * f0 / (x * x) - rec.lambda * f0;
        worst = std::max(worst, std::fabs(r));
    }
    return worst / (1.0 + rec.lambda);
}

void write_spectrum_csv(const SpectralBasis& basis, std::ostream& out) {
    out << "n,parity,bracket_lo,bracket_hi,lambda,norm_a\n";
    out << std::setprecision(17);
    for (const auto& r : basis.records()) {
        out << r.index << ',' << to_string(r.parity) << ',' << r.bracket.lo << ',' << r.bracket.hi << ',' << r.lambda
            << ',' << r.norm_a << '\n';
    }
}

}  // namespace shc
