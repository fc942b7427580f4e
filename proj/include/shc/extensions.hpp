#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "shc/spectrum.hpp"

namespace shc {

// f_s = c1 |x|^{nu+1/2} + c2 |x|^{-nu+1/2} on each side of 0.
struct SingularCoefficients {
    double c1_minus = 0.0;
    double c2_minus = 0.0;
    double c1_plus = 0.0;
    double c2_plus = 0.0;
};

struct BoundaryCoefficientsAB {
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
    double beta_plus = 0.0;
    double beta_minus = 0.0;
};

BoundaryCoefficientsAB coeffs_to_alphabeta(const SpectralParameter& param, const SingularCoefficients& c);
SingularCoefficients alphabeta_to_coeffs(const SpectralParameter& param, const BoundaryCoefficientsAB& ab);

// Singular part of an eigenfunction at 0 (unnormalised psi_n).
SingularCoefficients singular_coefficients(const SpectralParameter& param, const EigenRecord& rec);

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using Mat42 = Eigen::Matrix<double, 4, 2>;

const Mat2& symplectic_form();

bool check_quadruple(const Mat42& n1, const Mat42& n2, const Mat42& n3, const Mat42& n4);
double quadruple_identity_residual(const Mat42& n1, const Mat42& n2, const Mat42& n3, const Mat42& n4);

// Quadruple with Dirichlet rows at -1 and 1 and (m2, m3) acting at 0.
std::array<Mat42, 4> dirichlet_quadruple(const Mat2& m2, const Mat2& m3);

int numerical_rank(const Eigen::MatrixXd& a);

enum class ExtensionClass { coupled, decoupled, invalid };
const char* to_string(ExtensionClass c);

struct ExtensionSpec {
    Mat2 m2 = Mat2::Identity();
    Mat2 m3 = Mat2::Identity();
    ExtensionClass classification = ExtensionClass::coupled;
    Mat2 m = Mat2::Identity();  // coupled: (a-, -b-) + M (a+, b+) = 0
    Vec2 l_minus = Vec2::Zero(); // decoupled: l_minus . (a-, b-) = 0
    Vec2 l_plus = Vec2::Zero();  // decoupled: l_plus . (a+, b+) = 0
    std::string reason;          // why a pair was rejected
};

ExtensionSpec classify_extension(const Mat2& m2, const Mat2& m3);

double transmission_residual(const ExtensionSpec& spec, const BoundaryCoefficientsAB& ab);

// Coupled extension: minus-side (alpha, beta) forced by the plus side.
BoundaryCoefficientsAB coupled_completion(const Mat2& m, double alpha_plus, double beta_plus);

double boundary_quadratic_term(const BoundaryCoefficientsAB& ab);

struct QuadraticRange {
    double min = 0.0;
    double max = 0.0;
    int samples = 0;
};

// Boundary term over random unit plus-side vectors completed through M.
QuadraticRange sample_quadratic_term(const Mat2& m, int samples, unsigned seed = 1);

struct IllposednessProfile {
    double c = 0.0;
    double eps = 0.0;
    double int_f2 = 0.0;          // int_0^1 f^2
    double int_f2_over_x2 = 0.0;  // int_0^1 f^2 / x^2
    double int_fprime2 = 0.0;     // int_0^1 f'^2
    double quad_f2 = 0.0;
    double quad_f2_over_x2 = 0.0;
    double quad_fprime2 = 0.0;
    double lhs = 0.0;                // -int f'^2 - c int f^2/x^2
    double rayleigh_quotient = 0.0;  // lhs / int f^2
};

// f = x^{1/2+eps}(1-x); eps = 1 is accepted as a reference point.
IllposednessProfile illposedness_profile(double c, double eps, bool with_quadrature = true);

}  // namespace shc
