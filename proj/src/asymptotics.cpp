#include "shc/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <string>

#include "shc/errors.hpp"

namespace shc {

AsymptoticPrediction predicted_sqrt_eigenvalue(const SpectralParameter& param, int n, Parity parity) {
    if (n < 1) throw DomainError("asymptotic prediction needs n >= 1");
    const double nu = param.nu;
    const double pi = std::numbers::pi;
    AsymptoticPrediction p;
    p.n = n;
    p.parity = parity;
    p.leading = pi * (n - nu / 2.0 - 0.25);
    double corr = -param.gamma_ratio * std::sin(nu * pi) * std::pow(2.0 / (pi * n), 2.0 * nu);
    if (parity == Parity::odd) corr *= param.odd_factor;
    if (nu >= 0.5) corr -= (4.0 * nu * nu - 1.0) / (8.0 * pi * n);
    p.correction = corr;
    p.predicted_sqrt_lambda = p.leading + p.correction;
    return p;
}

double gap_prediction(const SpectralParameter& param, int n) {
    if (n < 1) throw DomainError("gap prediction needs n >= 1");
    const double nu = param.nu;
    const double pi = std::numbers::pi;
    return 16.0 * nu / (1.0 + 2.0 * nu) * param.gamma_ratio * std::sin(nu * pi) *
           std::pow(2.0 / (pi * n), 2.0 * nu - 1.0);
}

double remainder_exponent(const SpectralParameter& param) {
    return param.nu < 0.5 ? std::min(1.0, 4.0 * param.nu) : 2.0;
}

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    SlopeFit f;
    f.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / m;
    f.samples = static_cast<int>(xs.size());
    return f;
}

SlopeFit residual_slope(const SpectralBasis& basis, Parity parity, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi <= n_lo) throw DomainError("residual_slope needs 1 <= n_lo < n_hi");
    if (global_index(n_hi, parity) >= basis.count()) throw DomainError("residual_slope: basis too small");
    std::vector<double> xs, ys;
    for (int n = n_lo; n <= n_hi; ++n) {
        const auto pred = predicted_sqrt_eigenvalue(basis.param(), n, parity);
        const long double lam = basis.record(global_index(n, parity)).lambda_ext;
        const double r = static_cast<double>(std::fabs(std::sqrt(lam) - static_cast<long double>(pred.predicted_sqrt_lambda)));
        if (r > 0.0) {
            xs.push_back(n);
            ys.push_back(r);
        }
    }
    return fit_loglog(xs, ys);
}

double condensation_term(const std::vector<double>& lambdas, int n, int truncation) {
    if (n < 1) throw DomainError("condensation_term needs n >= 1");
    if (truncation < 2 * n) throw DomainError("condensation_term: truncation must be >= 2n");
    if (static_cast<int>(lambdas.size()) < truncation)
        throw DomainError("condensation_term: sequence shorter than truncation");
    const double ln = lambdas[n - 1];
    if (!(ln > 0.0)) throw DomainError("condensation_term: eigenvalues must be positive");
    double sum = std::log(2.0 / ln);
    for (int j = 1; j <= truncation; ++j) {
        if (j == n) continue;
        const double ratio = ln / lambdas[j - 1];
        sum += std::log(std::fabs(1.0 - ratio * ratio));
    }
    // tail: lambda_j ~ lambda_K (j/K)^2 for j > K
    const double k = truncation;
    double partial = 0.0;
    for (int j = truncation; j >= 1; --j) partial += 1.0 / std::pow(static_cast<double>(j), 4);
    const double zeta4 = std::pow(std::numbers::pi, 4) / 90.0;
    const double lk = lambdas[truncation - 1];
    sum += -(ln * ln) * std::pow(k, 4) / (lk * lk) * (zeta4 - partial);
    return -sum / ln;
}

double condensation_window_max(const std::vector<double>& lambdas, int n, int truncation_factor) {
    double best = -std::numeric_limits<double>::infinity();
    for (int m = std::max(1, n / 2); m <= n; ++m)
        best = std::max(best, condensation_term(lambdas, m, truncation_factor * m));
    return best;
}

void write_asymptotics_csv(const SpectralBasis& basis, std::ostream& out) {
    out << "n,parity,computed,predicted,residual\n" << std::setprecision(17);
    for (int i = 0; i < basis.count(); ++i) {
        const Parity parity = parity_of(i);
        const int n = i / 2 + 1;
        const auto pred = predicted_sqrt_eigenvalue(basis.param(), n, parity);
        const double computed = std::sqrt(basis.record(i).lambda);
        out << n << ',' << to_string(parity) << ',' << computed << ',' << pred.predicted_sqrt_lambda << ','
            << computed - pred.predicted_sqrt_lambda << '\n';
    }
}

}  // namespace shc
