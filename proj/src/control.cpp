#include "shc/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "shc/errors.hpp"
#include "shc/special_functions.hpp"

namespace shc {
namespace {

HighReal gram_entry(double a, double b, double T) {
    const HighReal s = HighReal(a) + HighReal(b);
    if (s == 0) return HighReal(T);
    return -boost::multiprecision::expm1(-s * HighReal(T)) / s;
}

void check_lambdas(const std::vector<double>& lambdas) {
    if (lambdas.empty()) throw DomainError("exponential family needs at least one exponent");
    std::set<double> seen;
    for (double l : lambdas) {
        if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("exponents must be finite and >= 0");
        if (!seen.insert(l).second) throw DomainError("duplicate exponent in exponential family");
    }
}

double to_double(const HighReal& v) { return static_cast<double>(v); }

}  // namespace

HighMatrix HighMatrix::identity(std::size_t n) {
    HighMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

HighMatrix HighMatrix::operator*(const HighMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw DomainError("matrix shape mismatch");
    HighMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const HighReal& a = (*this)(i, k);
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

Eigen::MatrixXd HighMatrix::to_double() const {
    Eigen::MatrixXd out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = static_cast<double>((*this)(i, j));
    return out;
}

HighMatrix spd_inverse(const HighMatrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DomainError("spd_inverse needs a square matrix");
    HighMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        HighReal d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0)) throw ContractError("Cholesky breakdown: matrix not positive definite");
        l(j, j) = sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            HighReal s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    // columns of L^{-T} L^{-1}
    HighMatrix inv(n, n);
    std::vector<HighReal> y(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            HighReal s = (i == c) ? HighReal(1) : HighReal(0);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
            y[i] = s / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            HighReal s = y[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * inv(k, c);
            inv(ii, c) = s / l(ii, ii);
        }
    }
    return inv;
}

std::vector<HighReal> symmetric_eigenvalues(HighMatrix a) {
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        HighReal off = 0, diag = 0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += a(i, i) * a(i, i);
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off <= diag * HighReal("1e-96")) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0) continue;
                const HighReal theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const HighReal t = (theta >= 0 ? HighReal(1) : HighReal(-1)) / (abs(theta) + sqrt(theta * theta + 1));
                const HighReal c = 1 / sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const HighReal akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const HighReal apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<HighReal> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

HighMatrix exp_gram_high(const std::vector<double>& rows, const std::vector<double>& cols, double T) {
    if (!(T > 0.0)) throw DomainError("horizon T must be positive");
    HighMatrix g(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) g(i, j) = gram_entry(rows[i], cols[j], T);
    return g;
}

Eigen::MatrixXd exp_gram(const std::vector<double>& lambdas, double T) {
    check_lambdas(lambdas);
    return exp_gram_high(lambdas, lambdas, T).to_double();
}

Eigen::MatrixXd BiorthogonalFamily::coefficient_matrix() const { return q.to_double(); }

double BiorthogonalFamily::eval(int k, double t) const {
    HighReal s = 0;
    for (std::size_t j = 0; j < q.cols(); ++j) s += q(k, j) * exp(-HighReal(lambdas[j]) * HighReal(t));
    return to_double(s);
}

HighReal BiorthogonalFamily::moment(int k, double mu) const {
    HighReal s = 0;
    for (std::size_t j = 0; j < q.cols(); ++j) s += q(k, j) * gram_entry(lambdas[j], mu, horizon_T);
    return s;
}

double BiorthogonalFamily::norm(int k) const {
    // ||q_k||^2 = (Q G Q)_kk = Q_kk when Q G = I
    return std::sqrt(std::max(0.0, to_double(q(k, k))));
}

BiorthogonalFamily biorthogonal_family(const std::vector<double>& lambdas, double T) {
    check_lambdas(lambdas);
    if (static_cast<int>(lambdas.size()) > kMaxFamilySize)
        throw ContractError("biorthogonal family capped at " + std::to_string(kMaxFamilySize) + " exponents");
    BiorthogonalFamily fam;
    fam.lambdas = lambdas;
    fam.horizon_T = T;
    const HighMatrix g = exp_gram_high(lambdas, lambdas, T);
    const std::vector<HighReal> ev = symmetric_eigenvalues(g);
    if (!(ev.front() > 0)) throw ContractError("exponential Gram matrix is not positive definite");
    fam.gram_condition = to_double(ev.back() / ev.front());
    if (!(fam.gram_condition <= kMaxGramCondition))
        throw ContractError("Gram condition number " + std::to_string(fam.gram_condition) +
                            " above cap; reduce N or increase T");
    const std::size_t n = lambdas.size();
    fam.q = spd_inverse(g);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) fam.q(i, j) = fam.q(j, i) = (fam.q(i, j) + fam.q(j, i)) / 2;
    HighMatrix r = fam.q * g;
    for (std::size_t i = 0; i < n; ++i) r(i, i) -= 1;
    HighReal worst = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, HighReal(abs(r(i, j))));
    fam.biorth_residual = to_double(worst);
    if (!(fam.biorth_residual < 1e-8))
        throw ContractError("biorthogonality residual " + std::to_string(fam.biorth_residual) + " above 1e-8");
    return fam;
}

double observability_mass(const SpectralBasis& basis, const IntervalUnion& region, int n) {
    const auto& rec = basis.record(n);
    const double scale = rec.norm_a * rec.norm_a;
    return integrate_estimate(
               [&](double x) {
                   const double v = eigenfunction_raw(basis.param(), rec, x);
                   return v * v / scale;
               },
               region, basis.quadrature())
        .value;
}

ObservabilityReport observability_report(const SpectralBasis& basis, const IntervalUnion& region, int upto) {
    if (upto < 1 || upto > basis.count()) throw DomainError("observability_report: upto outside basis");
    ObservabilityReport rep;
    rep.measure_omega = region.measure();
    rep.inf_mass = std::numeric_limits<double>::infinity();
    for (int n = 0; n < upto; ++n) {
        const double m = observability_mass(basis, region, n);
        rep.masses.emplace_back(n, m);
        rep.inf_mass = std::min(rep.inf_mass, m);
    }
    return rep;
}

std::vector<double> ControlProblem::initial_vector(int size) const {
    std::vector<double> c(size, 0.0);
    for (const auto& [n, v] : initial_modes) {
        if (n < 0) throw DomainError("negative mode index in initial data");
        if (n < size) c[n] += v;
    }
    return c;
}

namespace {

void check_problem(const SpectralBasis& basis, const ControlProblem& p) {
    if (!(p.horizon_T > 0.0)) throw DomainError("horizon T must be positive");
    if (p.mode_count < 1) throw DomainError("mode count N must be >= 1");
    if (p.report_horizon() < p.mode_count) throw DomainError("report horizon must be >= N");
    if (p.report_horizon() > basis.count()) throw DomainError("basis too small for the report horizon");
    for (const auto& [n, v] : p.initial_modes)
        if (n >= p.mode_count && v != 0.0)
            throw DomainError("initial mode " + std::to_string(n) + " lies beyond the controlled range N");
}

std::vector<double> lambdas_of(const SpectralBasis& basis, int count, double shift) {
    std::vector<double> out(count);
    for (int n = 0; n < count; ++n) out[n] = basis.record(n).lambda + shift;
    return out;
}

double overlap(const SpectralBasis& basis, const IntervalUnion& region, int k, int n) {
    const auto& rk = basis.record(k);
    const auto& rn = basis.record(n);
    const double scale = rk.norm_a * rn.norm_a;
    return integrate_estimate(
               [&](double x) {
                   return eigenfunction_raw(basis.param(), rk, x) * eigenfunction_raw(basis.param(), rn, x) / scale;
               },
               region, basis.quadrature())
        .value;
}

}  // namespace

double InternalControl::eval(const SpectralBasis& basis, double t, double x) const {
    bool inside = false;
    for (const auto& iv : region.intervals()) inside = inside || (x >= iv.lo && x <= iv.hi);
    if (!inside) return 0.0;
    const double tau = family.horizon_T - t;
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] == 0.0) continue;
        s += weights[k] * family.eval(static_cast<int>(k), tau) * eigenfunction_eval(basis, static_cast<int>(k), x) /
             masses[k];
    }
    return s;
}

InternalControl synthesize_internal_control(const SpectralBasis& basis, const ControlProblem& problem) {
    if (problem.boundary()) throw DomainError("internal control needs a control region");
    check_problem(basis, problem);
    const IntervalUnion& region = *problem.region;
    if (!(region.measure() > 0.0)) throw DomainError("control region has zero measure");
    const int N = problem.mode_count;
    const double T = problem.horizon_T;

    InternalControl u{biorthogonal_family(lambdas_of(basis, N, 0.0), T), region, {}, {}, 0.0};
    const std::vector<double> c = problem.initial_vector(N);
    u.weights.resize(N);
    u.masses.resize(N);
    for (int k = 0; k < N; ++k) {
        u.weights[k] = -c[k] * std::exp(-basis.record(k).lambda * T);
        u.masses[k] = observability_mass(basis, region, k);
        if (!(u.masses[k] > 0.0)) throw ContractError("mode " + std::to_string(k) + " has zero observability mass");
    }
    // ||u||^2 = sum_kl w_k w_l M_kl (QGQ)_kl / (m_k m_l), and QGQ = Q
    HighReal norm2 = 0;
    for (int k = 0; k < N; ++k) {
        if (u.weights[k] == 0.0) continue;
        for (int l = 0; l < N; ++l) {
            if (u.weights[l] == 0.0) continue;
            const double mkl = (k == l) ? u.masses[k] : overlap(basis, region, k, l);
            norm2 += HighReal(u.weights[k] * u.weights[l] * mkl / (u.masses[k] * u.masses[l])) * u.family.q(k, l);
        }
    }
    u.norm = std::sqrt(std::max(0.0, to_double(norm2)));
    if (!std::isfinite(u.norm)) throw ContractError("control norm is not finite");
    return u;
}

std::vector<FinalMode> simulate_final_modes(const SpectralBasis& basis, const ControlProblem& problem,
                                            const InternalControl& control) {
    check_problem(basis, problem);
    const int N = problem.mode_count;
    const int R = problem.report_horizon();
    const double T = problem.horizon_T;
    const std::vector<double> c = problem.initial_vector(R);
    std::vector<FinalMode> out;
    for (int n = 0; n < R; ++n) {
        const double lam = basis.record(n).lambda;
        HighReal v = HighReal(c[n]) * exp(-HighReal(lam) * HighReal(T));
        for (int k = 0; k < N && k < static_cast<int>(control.weights.size()); ++k) {
            if (control.weights[k] == 0.0) continue;
            const double mkn = (k == n) ? control.masses[k] : overlap(basis, control.region, k, n);
            // int_0^T exp(-lambda_n (T-s)) q_k(T-s) ds
            v += HighReal(control.weights[k] * mkn / control.masses[k]) * control.family.moment(k, lam);
        }
        out.push_back({n, to_double(v), n < N});
    }
    return out;
}

double boundary_derivative(const SpectralBasis& basis, int n) {
    const auto& rec = basis.record(n);
    const auto& p = basis.param();
    if (rec.kernel()) return 2.0 * p.nu / rec.norm_a;
    const double a = std::sqrt(rec.lambda);
    const double psi1 = rec.coeffs.nu_plus * bessel_j(p.nu, a) + rec.coeffs.minus_nu_plus * bessel_j(-p.nu, a);
    const double d = 0.5 * psi1 +
                     a * (rec.coeffs.minus_nu_plus * bessel_j_prime(-p.nu, a) + rec.coeffs.nu_plus * bessel_j_prime(p.nu, a));
    return d / rec.norm_a;
}

double boundary_derivative_fd(const SpectralBasis& basis, int n) {
    const auto& rec = basis.record(n);
    auto f = [&](double x) { return eigenfunction_raw(basis.param(), rec, x) / rec.norm_a; };
    const double h = 2e-3 / std::sqrt(1.0 + rec.lambda);
    return (25.0 * f(1.0) - 48.0 * f(1.0 - h) + 36.0 * f(1.0 - 2 * h) - 16.0 * f(1.0 - 3 * h) + 3.0 * f(1.0 - 4 * h)) /
           (12.0 * h);
}

BoundaryCoefficients boundary_coefficients(const SpectralBasis& basis, int upto) {
    if (upto < 1 || upto > basis.count()) throw DomainError("boundary_coefficients: upto outside basis");
    BoundaryCoefficients out;
    out.min_abs_b = std::numeric_limits<double>::infinity();
    for (int n = 0; n < upto; ++n) {
        const double d = boundary_derivative(basis, n);
        const double b = -d / std::sqrt(1.0 + basis.record(n).lambda);
        out.derivs.emplace_back(n, d);
        out.b.emplace_back(n, b);
        out.min_abs_b = std::min(out.min_abs_b, std::fabs(b));
        out.max_abs_b = std::max(out.max_abs_b, std::fabs(b));
    }
    return out;
}

double BoundaryControl::eval(double t) const {
    const double tau = family.horizon_T - t;
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
        if (weights[k] != 0.0) s -= weights[k] * family.eval(static_cast<int>(k), tau);
    return s;
}

BoundaryControl synthesize_boundary_control(const SpectralBasis& basis, const ControlProblem& problem) {
    if (!problem.boundary()) throw DomainError("boundary control takes no control region");
    check_problem(basis, problem);
    const int N = problem.mode_count;
    const double T = problem.horizon_T;
    const std::vector<double> mu = lambdas_of(basis, N, 1.0);
    BoundaryControl u{biorthogonal_family(mu, T), {}, {}, 0.0};
    const auto coeffs = boundary_coefficients(basis, N);
    const std::vector<double> c = problem.initial_vector(N);
    u.b.resize(N);
    u.weights.resize(N);
    for (int k = 0; k < N; ++k) {
        u.b[k] = coeffs.b[k].second;
        if (u.b[k] == 0.0) throw ContractError("zero boundary coefficient b_" + std::to_string(k));
        const double y0 = c[k] / std::sqrt(mu[k]);
        u.weights[k] = y0 * std::exp(-mu[k] * T) / u.b[k];
    }
    HighReal norm2 = 0;
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) norm2 += HighReal(u.weights[k] * u.weights[l]) * u.family.q(k, l);
    u.norm = std::sqrt(std::max(0.0, to_double(norm2)));
    if (!std::isfinite(u.norm)) throw ContractError("control norm is not finite");
    return u;
}

std::vector<FinalMode> simulate_boundary_final_modes(const SpectralBasis& basis, const ControlProblem& problem,
                                                     const BoundaryControl& control) {
    check_problem(basis, problem);
    const int N = problem.mode_count;
    const int R = problem.report_horizon();
    const double T = problem.horizon_T;
    const std::vector<double> c = problem.initial_vector(R);
    const auto coeffs = boundary_coefficients(basis, R);
    std::vector<FinalMode> out;
    for (int n = 0; n < R; ++n) {
        const double mu = basis.record(n).lambda + 1.0;
        HighReal y = HighReal(c[n] / std::sqrt(mu)) * exp(-HighReal(mu) * HighReal(T));
        HighReal forcing = 0;
        for (int k = 0; k < N; ++k)
            if (control.weights[k] != 0.0) forcing += HighReal(control.weights[k]) * control.family.moment(k, mu);
        y -= HighReal(coeffs.b[n].second) * forcing;
        out.push_back({n, to_double(y), n < N});
    }
    return out;
}

ControlCertificate certify(const SpectralBasis& basis, const ControlProblem& problem) {
    ControlCertificate cert;
    if (problem.boundary()) {
        const auto u = synthesize_boundary_control(basis, problem);
        cert.final_modes = simulate_boundary_final_modes(basis, problem, u);
        cert.control_norm = u.norm;
        cert.gram_condition = u.family.gram_condition;
        cert.biorth_residual = u.family.biorth_residual;
    } else {
        const auto u = synthesize_internal_control(basis, problem);
        cert.final_modes = simulate_final_modes(basis, problem, u);
        cert.control_norm = u.norm;
        cert.gram_condition = u.family.gram_condition;
        cert.biorth_residual = u.family.biorth_residual;
    }
    for (const auto& m : cert.final_modes)
        if (m.targeted) cert.max_targeted = std::max(cert.max_targeted, std::fabs(m.value));
    return cert;
}

}  // namespace shc
