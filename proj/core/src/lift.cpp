#include "slsh/lift.hpp"

#include <cmath>

namespace slsh {

namespace {

// Rounding can push 1 - |eps*x|^2 a hair below zero when |eps*x| ~ 1.
double clamped_sqrt(double v) {
    if (v < 0.0) {
        if (v < -1e-12) throw std::invalid_argument("lift: radicand out of range");
        v = 0.0;
    }
    return std::sqrt(v);
}

}  // namespace

Point shrink_lift(const Point& x, double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("lift: eps out of (0, 1/2]");
    require_unit_ball(x, "lift");
    Point up(x.size() + 1);
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        up[i] = eps * x[i];
        sq += up[i] * up[i];
    }
    up.back() = clamped_sqrt(1.0 - sq);
    return up;
}

double m_factor(double eps) {
    if (!(eps >= 0.0 && 2.0 * eps * eps < 1.0))
        throw std::invalid_argument("m_factor: eps must be in [0, 1/sqrt(2))");
    return std::sqrt(1.0 + 2.0 * eps * eps) / std::sqrt(1.0 - 2.0 * eps * eps);
}

double beta(double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("beta: eps out of [0, 1)");
    const double root = std::sqrt(1.0 - eps * eps);
    return (1.0 - root) / root;
}

double error_term(double eps, const Point& x, const Point& y) {
    if (!(eps > 0.0 && eps <= 0.5))
        throw std::invalid_argument("error_term: eps out of (0, 1/2]");
    require_unit_ball(x, "error_term");
    require_unit_ball(y, "error_term");
    const double inv = 1.0 / (eps * eps);
    const double diff = std::sqrt(inv - squared_norm(x)) - std::sqrt(inv - squared_norm(y));
    return diff * diff;
}

AvgEuclidParams avg_euclid_slsh_params(double r, double c) {
    if (!(r > 0.0)) throw std::invalid_argument("avg euclid params: r must be positive");
    if (!(c > 1.0)) throw std::invalid_argument("avg euclid params: c must exceed 1");
    AvgEuclidParams out;
    out.eps = 0.5 * std::sqrt(1.0 - 2.0 / (1.0 + c * c));
    const double m = m_factor(out.eps);
    out.r_prime = m * out.eps * r;
    out.c_prime = c / m;  // m(eps) < c, so the inner approximation stays > 1
    return out;
}

}  // namespace slsh
