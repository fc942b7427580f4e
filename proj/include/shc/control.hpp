#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <optional>
#include <utility>
#include <vector>

#include "shc/quadrature.hpp"
#include "shc/spectrum.hpp"

namespace shc {

// Exponential Gram matrices lose ~log10(cond) digits; N = 8 already reaches 1e9.
using HighReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                               boost::multiprecision::et_off>;

// Small dense row-major matrix; N stays below kMaxFamilySize so nothing clever is needed.
class HighMatrix {
public:
    HighMatrix() = default;
    HighMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static HighMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    HighReal& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const HighReal& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    HighMatrix operator*(const HighMatrix& rhs) const;
    Eigen::MatrixXd to_double() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<HighReal> data_;
};

// Inverse of a symmetric positive definite matrix via Cholesky; throws ContractError otherwise.
HighMatrix spd_inverse(const HighMatrix& a);
// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
std::vector<HighReal> symmetric_eigenvalues(HighMatrix a);

constexpr int kMaxFamilySize = 24;
constexpr double kMaxGramCondition = 1e32;

HighMatrix exp_gram_high(const std::vector<double>& rows, const std::vector<double>& cols, double T);
Eigen::MatrixXd exp_gram(const std::vector<double>& lambdas, double T);

struct BiorthogonalFamily {
    std::vector<double> lambdas;
    double horizon_T = 0.0;
    HighMatrix q;             // q_k(t) = sum_j q(k,j) exp(-lambda_j t)
    double gram_condition = 0.0;
    double biorth_residual = 0.0;

    Eigen::MatrixXd coefficient_matrix() const;
    double eval(int k, double t) const;
    // int_0^T q_k(t) exp(-mu t) dt for any mu >= 0
    HighReal moment(int k, double mu) const;
    // ||q_k||_{L2(0,T)}
    double norm(int k) const;
};

BiorthogonalFamily biorthogonal_family(const std::vector<double>& lambdas, double T);

double observability_mass(const SpectralBasis& basis, const IntervalUnion& region, int n);

struct ObservabilityReport {
    std::vector<std::pair<int, double>> masses;
    double inf_mass = 0.0;
    double measure_omega = 0.0;
};

ObservabilityReport observability_report(const SpectralBasis& basis, const IntervalUnion& region, int upto);

struct ControlProblem {
    double horizon_T = 1.0;
    std::optional<IntervalUnion> region;  // empty: boundary control at x = 1
    std::vector<std::pair<int, double>> initial_modes;
    int mode_count = 1;
    int report_modes = 0;  // 0: mode_count + 4

    bool boundary() const { return !region.has_value(); }
    int report_horizon() const { return report_modes > 0 ? report_modes : mode_count + 4; }
    std::vector<double> initial_vector(int size) const;
};

struct InternalControl {
    BiorthogonalFamily family;
    IntervalUnion region = IntervalUnion::whole();
    std::vector<double> weights;  // -<f0,phi_k> exp(-lambda_k T)
    std::vector<double> masses;   // int_omega phi_k^2
    double norm = 0.0;            // L2((0,T) x (-1,1))

    double eval(const SpectralBasis& basis, double t, double x) const;
};

InternalControl synthesize_internal_control(const SpectralBasis& basis, const ControlProblem& problem);

struct FinalMode {
    int n;
    double value;
    bool targeted;
};

std::vector<FinalMode> simulate_final_modes(const SpectralBasis& basis, const ControlProblem& problem,
                                            const InternalControl& control);

double boundary_derivative(const SpectralBasis& basis, int n);
// Fourth-order one-sided difference at x = 1, for cross-checking.
double boundary_derivative_fd(const SpectralBasis& basis, int n);

struct BoundaryCoefficients {
    std::vector<std::pair<int, double>> derivs;
    std::vector<std::pair<int, double>> b;
    double min_abs_b = 0.0;
    double max_abs_b = 0.0;
};

BoundaryCoefficients boundary_coefficients(const SpectralBasis& basis, int upto);

// Works in the gauge f -> e^{-t} f, where the spectrum is shifted to mu_n = lambda_n + 1,
// with modes weighted y_n = <f, phi_n>/sqrt(mu_n).
struct BoundaryControl {
    BiorthogonalFamily family;  // on mu_n
    std::vector<double> b;
    std::vector<double> weights;  // y_k(0) exp(-mu_k T) / b_k
    double norm = 0.0;            // L2(0,T) in the shifted gauge

    double eval(double t) const;
};

BoundaryControl synthesize_boundary_control(const SpectralBasis& basis, const ControlProblem& problem);

// Final weighted modes y_n(T) in the shifted gauge.
std::vector<FinalMode> simulate_boundary_final_modes(const SpectralBasis& basis, const ControlProblem& problem,
                                                     const BoundaryControl& control);

struct ControlCertificate {
    std::vector<FinalMode> final_modes;
    double control_norm = 0.0;
    double gram_condition = 0.0;
    double biorth_residual = 0.0;
    double max_targeted = 0.0;
};

ControlCertificate certify(const SpectralBasis& basis, const ControlProblem& problem);

}  // namespace shc
