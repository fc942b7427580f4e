#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "shc/errors.hpp"
#include "shc/quadrature.hpp"
#include "shc/special_functions.hpp"

using namespace shc;
using std::numbers::pi;

namespace {

double envelope(double x) { return std::sqrt(2.0 / (pi * x)); }

}  // namespace

TEST_CASE("gamma values and reflection") {
    CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
    CHECK(gamma_real(1.5) / gamma_real(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    for (double v : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double lhs = gamma_real(v) * gamma_real(1.0 - v);
        CHECK(std::fabs(lhs / (pi / std::sin(v * pi)) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(gamma_real(0.0), DomainError);
    CHECK_THROWS_AS(gamma_real(-3.0), DomainError);
    CHECK(gamma_real(-0.5) == doctest::Approx(-2.0 * std::sqrt(pi)).epsilon(1e-13));
}

TEST_CASE("bessel_j small examples") {
    CHECK(bessel_j(0.5, pi / 2) == doctest::Approx(2.0 / pi).epsilon(1e-14));
    CHECK(std::fabs(bessel_j(-0.5, pi / 2)) < 1e-15);
    const double ref = oracle::bessel_j(0.3, 1.0);
    CHECK(std::fabs(bessel_j(0.3, 1.0) - ref) < 1e-15);
    CHECK_THROWS_AS(bessel_j(0.3, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_j(0.3, -1.0), DomainError);
    EvalRegime bad;
    bad.series_cutoff = 4.0;
    CHECK_THROWS_AS(bessel_j(0.3, 1.0, bad), DomainError);
    bad = {};
    bad.asymptotic_terms = 9;
    CHECK_THROWS_AS(bessel_j(0.3, 1.0, bad), DomainError);
}

TEST_CASE("bessel_j agrees with 50-digit series") {
    for (double v : {-1.9, -0.7, -0.3, 0.1, 0.3, 0.6, 0.9, 1.6}) {
        for (double x : {0.01, 0.5, 3.0, 9.0, 15.0, 17.0, 25.0, 38.0}) {
            const double ref = oracle::bessel_j(v, x);
            CHECK(std::fabs(bessel_j(v, x) - ref) < 1e-12 * envelope(x) * (x < 1 ? 1 / std::pow(x, std::fabs(v)) : 1));
        }
    }
}

TEST_CASE("branches agree near the cutoff") {
    std::mt19937_64 rng(20241016);
    std::uniform_real_distribution<double> order(-0.99, 0.99);
    const EvalRegime regime;
    std::uniform_real_distribution<double> arg(0.9 * regime.series_cutoff, 1.1 * regime.series_cutoff);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double v = order(rng), x = arg(rng);
        const double diff = std::fabs(bessel_j_series(v, x) - bessel_j_asymptotic(v, x, regime.asymptotic_terms));
        worst = std::max(worst, diff / envelope(x));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("derivative") {
    const double ident = 0.5 * (bessel_j(-0.5, pi) - bessel_j(1.5, pi));
    CHECK(bessel_j_prime(0.5, pi) == doctest::Approx(ident).epsilon(1e-15));
    CHECK(bessel_j_prime(0.5, pi) == doctest::Approx(-std::sqrt(2.0) / pi).epsilon(1e-13));
    for (double v : {0.3, -0.3, 0.8}) {
        for (double x : {0.5, 2.0, 11.0, 30.0}) {
            const double h = 1e-6 * std::max(1.0, x);
            const double fd = (bessel_j(v, x + h) - bessel_j(v, x - h)) / (2 * h);
            CHECK(std::fabs(bessel_j_prime(v, x) - fd) < 1e-6 * std::max(std::fabs(fd), 1e-3));
        }
    }
    CHECK(std::fabs(bessel_j_prime(0.7, 1e4)) * 1e2 < 10.0);
}

TEST_CASE("wronskian") {
    CHECK(std::fabs(wronskian_residual(0.5, 1.0)) < 1e-15);
    CHECK(std::fabs(wronskian_residual(0.3, 5.0)) < 1e-10);
    CHECK(std::fabs(wronskian_residual(0.9, 0.01)) < 1e-7);
    for (double v : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (int i = 0; i <= 100; ++i) {
            const double x = std::pow(10.0, -2.0 + 5.0 * i / 100.0);
            CHECK(std::fabs(wronskian_residual(v, x)) < 1e-9 * (1 + 1 / x));
        }
    }
    CHECK_THROWS_AS(wronskian_residual(1.2, 1.0), DomainError);
}

TEST_CASE("zeros") {
    CHECK(bessel_zero(0.5, 3) == doctest::Approx(3 * pi).epsilon(1e-14));
    CHECK(bessel_zero(-0.5, 1) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(std::fabs(bessel_zero(0.3, 50) - pi * (50 + 0.15 - 0.25)) < 0.01);
    for (double v : {-0.9, -0.4, 0.2, 0.6, 0.95}) {
        double prev = 0.0;
        for (int n = 1; n <= 60; ++n) {
            const double z = bessel_zero(v, n);
            CHECK(z > prev);
            CHECK(std::fabs(bessel_j(v, z)) < 1e-11);
            prev = z;
        }
    }
    // first zeros against 50-digit series
    for (double v : {-0.7, 0.3}) {
        const double z = bessel_zero(v, 2);
        CHECK(std::fabs(oracle::bessel_j(v, z)) < 1e-14);
    }
    CHECK_THROWS_AS(bessel_zero(-1.0, 1), DomainError);
    CHECK_THROWS_AS(bessel_zero(0.3, 0), DomainError);
}

TEST_CASE("interlacing") {
    for (double v : {0.1, 0.3, 0.5, 0.6, 0.9}) {
        for (int n = 1; n <= 100; ++n) {
            const double a = bessel_zero(-v, n), b = bessel_zero(v, n), c = bessel_zero(-v, n + 1);
            CHECK(a < b);
            CHECK(b < c);
        }
    }
}

TEST_CASE("product bound") {
    CHECK(product_upper_bound_check(0.5, 1.0));
    CHECK(bessel_j(0.5, 1.0) * bessel_j(-0.5, 1.0) == doctest::Approx(std::sin(2.0) / pi).epsilon(1e-14));
    CHECK(product_upper_bound_check(0.3, 7.2));
    CHECK(product_upper_bound_check(0.99, 0.001));
    int failures = 0;
    for (int i = 0; i < 50; ++i) {
        const double v = 0.01 + 0.98 * i / 49.0;
        for (int k = 0; k < 50; ++k) {
            const double x = std::pow(10.0, -3.0 + 6.0 * k / 49.0);
            if (!product_upper_bound_check(v, x)) ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("closed-form product integrals") {
    const double j = bessel_j(0.5, pi), jp = bessel_j_prime(0.5, pi);
    const double expect = 0.5 * (j * j * (1 - 0.25 / (pi * pi)) + jp * jp);
    CHECK(bessel_product_integral(ProductKind::same_order, 0.5, pi, 0.0, 1.0) ==
          doctest::Approx(expect).epsilon(1e-14));

    auto reference = [](ProductKind kind, double v, double a, double lo, double hi) {
        const IntervalUnion piece({{lo, hi}});
        const double w = kind == ProductKind::same_order ? v : -v;
        return integrate([&](double x) { return x * bessel_j(v, a * x) * bessel_j(w, a * x); }, piece);
    };
    const double cross = bessel_product_integral(ProductKind::cross_order, 0.3, 1.0, 0.0, 1.0);
    CHECK(std::fabs(cross / reference(ProductKind::cross_order, 0.3, 1.0, 0.0, 1.0) - 1) < 1e-8);
    const double mid = bessel_product_integral(ProductKind::same_order, 0.3, 2.0, 0.25, 0.75);
    CHECK(std::fabs(mid / reference(ProductKind::same_order, 0.3, 2.0, 0.25, 0.75) - 1) < 1e-8);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (ProductKind kind : {ProductKind::same_order, ProductKind::cross_order}) {
        for (int draw = 0; draw < 25; ++draw) {
            double v = 0.02 + 0.96 * u(rng);
            if (kind == ProductKind::same_order && draw % 2 == 1) v = -v;
            const double a = 0.5 + 30.0 * u(rng);
            const double lo = draw % 3 == 0 ? 0.0 : 0.6 * u(rng);
            const double hi = lo + (1.0 - lo) * (0.1 + 0.9 * u(rng));
            const double closed = bessel_product_integral(kind, v, a, lo, hi);
            const double quad = reference(kind, v, a, lo, hi);
            CAPTURE(v);
            CAPTURE(a);
            CAPTURE(lo);
            CAPTURE(hi);
            CHECK(std::fabs(closed - quad) < 1e-8 * std::max(std::fabs(quad), 1e-3));
        }
    }
    CHECK_THROWS_AS(bessel_product_integral(ProductKind::cross_order, -0.3, 1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_product_integral(ProductKind::same_order, 0.3, 1.0, 0.5, 0.5), DomainError);
}
