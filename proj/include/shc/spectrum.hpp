#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <vector>

#include "shc/quadrature.hpp"

namespace shc {

enum class Parity { even, odd };

inline Parity parity_of(int n) { return n % 2 == 0 ? Parity::even : Parity::odd; }
const char* to_string(Parity p);

struct SpectralParameter {
    double nu = 0.5;
    double c_nu = 0.0;
    double gamma_ratio = 0.5;
    double odd_factor = 0.0;

    // Validates nu in (0,1); values within 1e-10 of 1/2 snap to 1/2.
    static SpectralParameter make(double nu);

    bool is_half() const { return nu == 0.5; }
    // gamma_ratio * (sqrt(E)/2)^(-2 nu)
    double k_factor(double E) const;
    double d_nu(double E) const { return k_factor(E) / (1.0 + 2.0 * nu); }
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    bool degenerate = false;  // closed-form value lo == hi
};

// Coefficients of sqrt|x| J_{+-nu}(sqrt(lambda)|x|) on x > 0 (plus) and x < 0 (minus).
struct EigenCoefficients {
    double nu_plus = 0.0;
    double minus_nu_plus = 0.0;
    double nu_minus = 0.0;
    double minus_nu_minus = 0.0;
};

struct EigenRecord {
    int index = 0;
    Parity parity = Parity::even;
    Bracket bracket;
    double lambda = 0.0;
    long double lambda_ext = 0;  // unrounded bisection result
    EigenCoefficients coeffs;
    double norm_a = 1.0;
    bool kernel() const { return index == 0; }
};

double characteristic(const SpectralParameter& param, Parity parity, double E);
long double characteristic_ext(const SpectralParameter& param, Parity parity, long double E);
Bracket eigenvalue_bracket(const SpectralParameter& param, int n);
double eigenvalue(const SpectralParameter& param, int n);
long double eigenvalue_ext(const SpectralParameter& param, int n);
EigenCoefficients eigenfunction_coeffs(const SpectralParameter& param, int n, double lambda);
double normalization(const SpectralParameter& param, int n, double lambda, const EigenCoefficients& coeffs);

// Max scaled residual of the coefficient relations tying a_nu^+- to a_{-nu}^+-
// plus the Dirichlet condition at x = 1.
double coefficient_residual(const SpectralParameter& param, const EigenRecord& rec);

EigenRecord make_record(const SpectralParameter& param, int n);

class SpectralBasis {
public:
    SpectralBasis(const SpectralParameter& param, int count, QuadratureConfig cfg = {});

    const SpectralParameter& param() const { return param_; }
    const QuadratureConfig& quadrature() const { return cfg_; }
    int count() const { return static_cast<int>(records_.size()); }
    const EigenRecord& record(int n) const;
    const std::vector<EigenRecord>& records() const { return records_; }

private:
    SpectralParameter param_;
    QuadratureConfig cfg_;
    std::vector<EigenRecord> records_;
};

// Unnormalised psi_n, defined for every x != 0 (also slightly beyond +-1).
double eigenfunction_raw(const SpectralParameter& param, const EigenRecord& rec, double x);

double eigenfunction_eval(const SpectralBasis& basis, int n, double x);

Eigen::MatrixXd gram_matrix(const SpectralBasis& basis, int upto);

double ode_residual(const SpectralBasis& basis, int n, const std::vector<double>& grid);

// Quadrature cross-check of a_n^2 = int psi_n^2 over (-1,1).
double norm_squared_by_quadrature(const SpectralBasis& basis, int n);

void write_spectrum_csv(const SpectralBasis& basis, std::ostream& out);

}  // namespace shc
