#include "shc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "shc/errors.hpp"

namespace shc {

IntervalUnion::IntervalUnion(std::vector<Interval> intervals) {
    if (intervals.empty()) throw DomainError("interval union must not be empty");
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& iv = intervals[i];
        if (!(iv.lo >= -1.0 && iv.lo < iv.hi && iv.hi <= 1.0))
            throw DomainError("interval must satisfy -1 <= lo < hi <= 1");
        if (i > 0 && iv.lo < intervals[i - 1].hi) throw DomainError("intervals overlap");
    }
    for (const auto& iv : intervals) {
        if (iv.lo < 0.0 && iv.hi > 0.0) {
            pieces_.push_back({iv.lo, 0.0});
            pieces_.push_back({0.0, iv.hi});
        } else {
            pieces_.push_back(iv);
        }
    }
}

IntervalUnion IntervalUnion::whole() { return IntervalUnion({{-1.0, 1.0}}); }

double IntervalUnion::measure() const {
    double m = 0.0;
    for (const auto& iv : pieces_) m += iv.hi - iv.lo;
    return m;
}

bool IntervalUnion::symmetric(double tol) const {
    const std::size_t n = pieces_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = pieces_[i];
        const auto& b = pieces_[n - 1 - i];
        if (std::fabs(a.lo + b.hi) > tol || std::fabs(a.hi + b.lo) > tol) return false;
    }
    return true;
}

void QuadratureConfig::validate() const {
    if (gauss_order < 10) throw DomainError("gauss_order must be >= 10");
    if (!(grading_ratio > 0.0 && grading_ratio < 1.0)) throw DomainError("grading_ratio must lie in (0,1)");
    if (grading_depth < 20) throw DomainError("grading_depth must be >= 20");
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
}

GaussRule gauss_legendre(int order) {
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (order + 0.5L));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-19L) break;
        }
        {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1);
        }
        const long double w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = static_cast<double>(-x);
        rule.nodes[order - 1 - i] = static_cast<double>(x);
        rule.weights[i] = rule.weights[order - 1 - i] = static_cast<double>(w);
    }
    return rule;
}

namespace {

struct Panel {
    double value;
    double magnitude;  // integral of |f|, for the noise floor
};

Panel gauss_panel(const Integrand& f, const GaussRule& rule, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0, m = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = f(mid + half * rule.nodes[i]) * rule.weights[i];
        s += v;
        m += std::fabs(v);
    }
    return {s * half, m * std::fabs(half)};
}

class Integrator {
public:
    Integrator(const Integrand& f, const QuadratureConfig& cfg, double total_length)
        : f_(f), cfg_(cfg), rule_(gauss_legendre(cfg.gauss_order)), total_(total_length) {}

    // Adaptive bisection of one panel; returns value, accumulates error.
    double panel(double a, double b) {
        const Panel whole = gauss_panel(f_, rule_, a, b);
        return refine(a, b, whole, 0);
    }

    // Piece with a possible integrable singularity at the endpoint `sing`.
    double graded(double sing, double far) {
        const double dir = far > sing ? 1.0 : -1.0;
        const double len = std::fabs(far - sing);
        const double r = cfg_.grading_ratio;
        double outer = len;
        double total = 0.0;
        double last = 0.0, prev = 0.0, prev2 = 0.0;
        for (int k = 0; k < cfg_.grading_depth; ++k) {
            const double inner = outer * r;
            double lo = sing + dir * inner, hi = sing + dir * outer;
            if (lo > hi) std::swap(lo, hi);
            const double v = panel(lo, hi);
            total += v;
            prev2 = prev;
            prev = last;
            last = v;
            outer = inner;
        }
        // Remaining [0, outer]: panel integrals of a power law form a geometric sequence.
        const double q = (prev != 0.0) ? last / prev : 0.0;
        const double q_prev = (prev2 != 0.0) ? prev / prev2 : q;
        double tail = 0.0;
        if (q > 0.0 && q < 1.0) {
            tail = last * q / (1.0 - q);
            error_ += std::fabs(tail) * std::fabs(q - q_prev) / (1.0 - q) +
                      64.0 * std::numeric_limits<double>::epsilon() * std::fabs(tail);
        } else {
            double lo = sing, hi = sing + dir * outer;
            if (lo > hi) std::swap(lo, hi);
            const Panel p = gauss_panel(f_, rule_, lo, hi);
            tail = p.value;
            error_ += std::fabs(p.value);
        }
        return total + tail;
    }

    double error() const { return error_; }

private:
    double refine(double a, double b, const Panel& whole, int depth) {
        const double mid = 0.5 * (a + b);
        const Panel left = gauss_panel(f_, rule_, a, mid);
        const Panel right = gauss_panel(f_, rule_, mid, b);
        const double split = left.value + right.value;
        const double diff = std::fabs(split - whole.value);
        const double local_tol = cfg_.abs_tol * (b - a) / total_;
        const double floor = 32.0 * std::numeric_limits<double>::epsilon() * (left.magnitude + right.magnitude);
        if (diff <= std::max(local_tol * 0.1, floor) || depth >= cfg_.max_refinements) {
            if (diff > floor) error_ += diff;
            return split;
        }
        return refine(a, mid, left, depth + 1) + refine(mid, b, right, depth + 1);
    }

    const Integrand& f_;
    const QuadratureConfig& cfg_;
    GaussRule rule_;
    double total_;
    double error_ = 0.0;
};

}  // namespace

QuadratureResult integrate_estimate(const Integrand& f, const IntervalUnion& region,
                                    const QuadratureConfig& cfg) {
    cfg.validate();
    Integrator integ(f, cfg, region.measure());
    double sum = 0.0;
    for (const auto& iv : region.intervals()) {
        if (iv.lo == 0.0)
            sum += integ.graded(0.0, iv.hi);
        else if (iv.hi == 0.0)
            sum += integ.graded(0.0, iv.lo);
        else
            sum += integ.panel(iv.lo, iv.hi);
    }
    return {sum, integ.error()};
}

double integrate(const Integrand& f, const IntervalUnion& region, const QuadratureConfig& cfg) {
    const QuadratureResult r = integrate_estimate(f, region, cfg);
    if (!(r.error_estimate <= cfg.abs_tol)) {
        std::ostringstream msg;
        msg.precision(3);
        msg << "quadrature tolerance not met: estimate " << r.error_estimate << " > " << cfg.abs_tol;
        throw ContractError(msg.str());
    }
    return r.value;
}

}  // namespace shc
