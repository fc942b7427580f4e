#pragma once

namespace shc {

// Controls how bessel_j picks between the power series and the
// large-argument expansion.
struct EvalRegime {
    double series_cutoff = 16.0;
    int asymptotic_terms = 8;
    // Route half-integer orders through sin/cos closed forms.
    bool closed_forms = true;

    void validate() const;
};

double gamma_real(double x);

double bessel_j(double order, double x, const EvalRegime& regime = {});
double bessel_j_series(double order, double x);
double bessel_j_asymptotic(double order, double x, int terms);

double bessel_j_prime(double order, double x, const EvalRegime& regime = {});

// Same evaluation kept in long double; used where rounding the argument to
// double would dominate (eigenvalue certification near a zero of J).
long double bessel_j_ext(long double order, long double x, const EvalRegime& regime = {});
long double bessel_j_prime_ext(long double order, long double x, const EvalRegime& regime = {});

// (J_v J'_{-v} - J'_v J_{-v})(x) + 2 sin(v pi)/(pi x)
double wronskian_residual(double order, double x);

// n-th positive zero of J_order, order > -1.
double bessel_zero(double order, int n);

bool product_upper_bound_check(double order, double x);

enum class ProductKind { same_order, cross_order };

// Closed form of int_alpha^beta x J(ax) J(ax) dx.
// same_order integrates J_order^2 (order may be negative, |order| < 1);
// cross_order integrates J_order J_{-order} with order in (0,1).
double bessel_product_integral(ProductKind kind, double order, double a, double alpha,
                               double beta);

}  // namespace shc
