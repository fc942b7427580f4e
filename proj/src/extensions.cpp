#include "shc/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "shc/errors.hpp"
#include "shc/quadrature.hpp"

namespace shc {

BoundaryCoefficientsAB coeffs_to_alphabeta(const SpectralParameter& param, const SingularCoefficients& c) {
    const double up = param.nu + 0.5, down = 0.5 - param.nu;
    BoundaryCoefficientsAB ab;
    ab.alpha_plus = c.c1_plus + c.c2_plus;
    ab.alpha_minus = c.c1_minus + c.c2_minus;
    ab.beta_plus = up * c.c1_plus + down * c.c2_plus;
    ab.beta_minus = up * c.c1_minus + down * c.c2_minus;
    return ab;
}

SingularCoefficients alphabeta_to_coeffs(const SpectralParameter& param, const BoundaryCoefficientsAB& ab) {
    // [1 1; up down] has determinant down - up = -2 nu
    const double up = param.nu + 0.5, down = 0.5 - param.nu, det = -2.0 * param.nu;
    SingularCoefficients c;
    c.c1_plus = (down * ab.alpha_plus - ab.beta_plus) / det;
    c.c2_plus = (ab.beta_plus - up * ab.alpha_plus) / det;
    c.c1_minus = (down * ab.alpha_minus - ab.beta_minus) / det;
    c.c2_minus = (ab.beta_minus - up * ab.alpha_minus) / det;
    return c;
}

SingularCoefficients singular_coefficients(const SpectralParameter& param, const EigenRecord& rec) {
    if (rec.kernel()) return {1.0, -1.0, 1.0, -1.0};
    const double nu = param.nu;
    const double half_root = std::sqrt(rec.lambda) / 2.0;
    const double s1 = std::pow(half_root, nu) / std::tgamma(nu + 1.0);
    const double s2 = std::pow(half_root, -nu) / std::tgamma(1.0 - nu);
    return {rec.coeffs.nu_minus * s1, rec.coeffs.minus_nu_minus * s2, rec.coeffs.nu_plus * s1,
            rec.coeffs.minus_nu_plus * s2};
}

const Mat2& symplectic_form() {
    static const Mat2 e = (Mat2() << 0.0, -1.0, 1.0, 0.0).finished();
    return e;
}

int numerical_rank(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    const double scale = s.size() > 0 ? s(0) : 0.0;
    if (scale == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-10 * scale) ++r;
    return r;
}

double quadruple_identity_residual(const Mat42& n1, const Mat42& n2, const Mat42& n3, const Mat42& n4) {
    const Mat2& e = symplectic_form();
    const Eigen::Matrix4d r = n1 * e * n1.transpose() - n2 * e * n2.transpose() + n3 * e * n3.transpose() -
                              n4 * e * n4.transpose();
    return r.cwiseAbs().maxCoeff();
}

bool check_quadruple(const Mat42& n1, const Mat42& n2, const Mat42& n3, const Mat42& n4) {
    Eigen::Matrix<double, 4, 8> all;
    all << n1, n2, n3, n4;
    if (numerical_rank(all) != 4) return false;
    const double scale = std::max(1.0, all.cwiseAbs().maxCoeff());
    return quadruple_identity_residual(n1, n2, n3, n4) <= 1e-12 * scale * scale;
}

std::array<Mat42, 4> dirichlet_quadruple(const Mat2& m2, const Mat2& m3) {
    std::array<Mat42, 4> n;
    for (auto& m : n) m.setZero();
    n[0](0, 0) = 1.0;  // f(-1)
    n[1].block<2, 2>(1, 0) = m2;
    n[2].block<2, 2>(1, 0) = m3;
    n[3](3, 0) = 1.0;  // f(1)
    return n;
}

const char* to_string(ExtensionClass c) {
    switch (c) {
        case ExtensionClass::coupled: return "coupled";
        case ExtensionClass::decoupled: return "decoupled";
        default: return "invalid";
    }
}

namespace {

Vec2 dominant_row(const Mat2& m) {
    const Vec2 r0 = m.row(0).transpose(), r1 = m.row(1).transpose();
    return r0.cwiseAbs().maxCoeff() >= r1.cwiseAbs().maxCoeff() ? r0 : r1;
}

}  // namespace

ExtensionSpec classify_extension(const Mat2& m2, const Mat2& m3) {
    ExtensionSpec spec;
    spec.m2 = m2;
    spec.m3 = m3;
    if (!m2.allFinite() || !m3.allFinite()) {
        spec.classification = ExtensionClass::invalid;
        spec.reason = "non-finite entries";
        return spec;
    }
    Eigen::Matrix<double, 2, 4> both;
    both << m2, m3;
    if (numerical_rank(both) != 2) {
        spec.classification = ExtensionClass::invalid;
        spec.reason = "rank(M2 M3) != 2";
        return spec;
    }
    const double scale = std::max(1.0, both.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * scale * scale;
    const double d2 = m2.determinant(), d3 = m3.determinant();
    if (std::fabs(d2 - d3) > tol) {
        spec.classification = ExtensionClass::invalid;
        spec.reason = "det(M2) != det(M3)";
        return spec;
    }
    if (std::fabs(d2) <= tol && std::fabs(d3) <= tol) {
        spec.classification = ExtensionClass::decoupled;
        // M2 acts on (alpha-, -beta-)
        const Vec2 r2 = dominant_row(m2);
        spec.l_minus = Vec2(r2(0), -r2(1));
        spec.l_plus = dominant_row(m3);
        return spec;
    }
    spec.classification = ExtensionClass::coupled;
    Mat2 m = m2.inverse() * m3;
    // det(M) = det(M3)/det(M2) = 1 up to rounding; divide out the drift.
    const double det = m.determinant();
    if (det > 0.0) m /= std::sqrt(det);
    spec.m = m;
    return spec;
}

double transmission_residual(const ExtensionSpec& spec, const BoundaryCoefficientsAB& ab) {
    const Vec2 minus(ab.alpha_minus, -ab.beta_minus);
    const Vec2 plus(ab.alpha_plus, ab.beta_plus);
    switch (spec.classification) {
        case ExtensionClass::coupled: return (minus + spec.m * plus).cwiseAbs().maxCoeff();
        case ExtensionClass::decoupled:
            return std::max(std::fabs(spec.l_minus.dot(Vec2(ab.alpha_minus, ab.beta_minus))),
                            std::fabs(spec.l_plus.dot(plus)));
        default: throw DomainError("transmission_residual needs a valid extension");
    }
}

BoundaryCoefficientsAB coupled_completion(const Mat2& m, double alpha_plus, double beta_plus) {
    const Vec2 mp = m * Vec2(alpha_plus, beta_plus);
    BoundaryCoefficientsAB ab;
    ab.alpha_plus = alpha_plus;
    ab.beta_plus = beta_plus;
    ab.alpha_minus = -mp(0);
    ab.beta_minus = mp(1);
    return ab;
}

double boundary_quadratic_term(const BoundaryCoefficientsAB& ab) {
    return -ab.alpha_plus * ab.beta_plus - ab.alpha_minus * ab.beta_minus;
}

QuadraticRange sample_quadratic_term(const Mat2& m, int samples, unsigned seed) {
    if (samples < 1) throw DomainError("need at least one sample");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    QuadraticRange r;
    r.min = std::numeric_limits<double>::infinity();
    r.max = -r.min;
    for (int i = 0; i < samples; ++i) {
        const double t = angle(rng);
        const double q = boundary_quadratic_term(coupled_completion(m, std::cos(t), std::sin(t)));
        r.min = std::min(r.min, q);
        r.max = std::max(r.max, q);
    }
    r.samples = samples;
    return r;
}

IllposednessProfile illposedness_profile(double c, double eps, bool with_quadrature) {
    if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0,1]");
    if (!std::isfinite(c)) throw DomainError("c must be finite");
    IllposednessProfile p;
    p.c = c;
    p.eps = eps;
    const double e = eps;
    p.int_f2 = 1.0 / (4 * e * e * e + 18 * e * e + 26 * e + 12);
    p.int_f2_over_x2 = 1.0 / (2 * e + 6 * e * e + 4 * e * e * e);
    p.int_fprime2 = (2 * e + 1) / (8 * e * e + 8 * e);
    p.lhs = -p.int_fprime2 - c * p.int_f2_over_x2;
    p.rayleigh_quotient = p.lhs / p.int_f2;
    if (with_quadrature) {
        const IntervalUnion unit({{0.0, 1.0}});
        const double a = 0.5 + e;
        p.quad_f2 = integrate_estimate([&](double x) { const double f = std::pow(x, a) * (1 - x); return f * f; }, unit).value;
        p.quad_f2_over_x2 =
            integrate_estimate([&](double x) { return std::pow(x, 2 * a - 2) * (1 - x) * (1 - x); }, unit).value;
        p.quad_fprime2 = integrate_estimate(
                             [&](double x) {
                                 const double d = a * std::pow(x, a - 1) * (1 - x) - std::pow(x, a);
                                 return d * d;
                             },
                             unit)
                             .value;
    }
    return p;
}

}  // namespace shc
