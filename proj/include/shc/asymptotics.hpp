#pragma once

#include <ostream>
#include <vector>

#include "shc/spectrum.hpp"

namespace shc {

struct AsymptoticPrediction {
    int n = 1;
    Parity parity = Parity::even;
    double leading = 0.0;
    double correction = 0.0;
    double predicted_sqrt_lambda = 0.0;
};

// n >= 1 counts pairs: even -> lambda_{2(n-1)}, odd -> lambda_{2(n-1)+1}.
AsymptoticPrediction predicted_sqrt_eigenvalue(const SpectralParameter& param, int n, Parity parity);

inline int global_index(int n, Parity parity) { return 2 * (n - 1) + (parity == Parity::odd ? 1 : 0); }

// Predicted lambda_{2(n-1)+1} - lambda_{2(n-1)}.
double gap_prediction(const SpectralParameter& param, int n);

// Exponent e in |sqrt(lambda) - prediction| = O(n^-e).
double remainder_exponent(const SpectralParameter& param);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    int samples = 0;
};

// Least-squares slope of log|residual| against log n over pair indices [n_lo, n_hi].
SlopeFit residual_slope(const SpectralBasis& basis, Parity parity, int n_lo, int n_hi);

SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

// lambdas holds the positive eigenvalues lambda_1, lambda_2, ...; n is 1-based.
// Products beyond `truncation` are replaced by a j^-4 tail estimate.
double condensation_term(const std::vector<double>& lambdas, int n, int truncation);

// Running max of condensation_term over m in [n/2, n], truncation = factor * m.
double condensation_window_max(const std::vector<double>& lambdas, int n, int truncation_factor = 10);

void write_asymptotics_csv(const SpectralBasis& basis, std::ostream& out);

}  // namespace shc
