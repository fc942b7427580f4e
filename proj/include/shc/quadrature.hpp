#pragma once

#include <functional>
#include <vector>

namespace shc {

struct Interval {
    double lo;
    double hi;
};

// Finite union of disjoint subintervals of [-1,1], stored split at 0.
class IntervalUnion {
public:
    explicit IntervalUnion(std::vector<Interval> intervals);
    static IntervalUnion whole();

    const std::vector<Interval>& intervals() const { return pieces_; }
    double measure() const;
    // True when x in region iff -x in region.
    bool symmetric(double tol = 1e-14) const;

private:
    std::vector<Interval> pieces_;
};

struct QuadratureConfig {
    int gauss_order = 16;
    double grading_ratio = 0.5;
    int grading_depth = 40;
    double abs_tol = 1e-10;
    int max_refinements = 30;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

using Integrand = std::function<double(double)>;

// Never throws on accuracy; inspect error_estimate.
QuadratureResult integrate_estimate(const Integrand& f, const IntervalUnion& region,
                                    const QuadratureConfig& cfg = {});

// Throws ContractError when the estimate exceeds cfg.abs_tol.
double integrate(const Integrand& f, const IntervalUnion& region, const QuadratureConfig& cfg = {});

struct GaussRule {
    std::vector<double> nodes;    // on [-1,1]
    std::vector<double> weights;
};

GaussRule gauss_legendre(int order);

}  // namespace shc
