#pragma once

#include "slsh/types.hpp"

namespace slsh {

/// Maps the unit ball into the upper unit sphere one dimension up:
/// x -> (eps*x ; sqrt(1 - |eps*x|^2)). Shrinking by eps in (0, 1/2] keeps the
/// last coordinate at least sqrt(1 - eps^2), so euclidean distances between
/// inputs turn into small angles between outputs.
Point shrink_lift(const Point& x, double eps);

/// Distortion factor m(x) = sqrt(1 + 2x^2) / sqrt(1 - 2x^2) for x < 1/sqrt(2).
double m_factor(double eps);

/// beta(eps) = (1 - sqrt(1 - eps^2)) / sqrt(1 - eps^2), for eps < 1.
double beta(double eps);

/// Radial error term (sqrt(1/eps^2 - |x|^2) - sqrt(1/eps^2 - |y|^2))^2.
double error_term(double eps, const Point& x, const Point& y);

/// Parameters for the euclidean-to-angular average-distance reduction.
struct AvgEuclidParams {
    double eps;      // shrink factor, 0.5*sqrt(1 - 2/(1+c^2))
    double r_prime;  // m(eps) * eps * r
    double c_prime;  // c / m(eps), always > 1 for c > 1
};

/// Derives the shrink factor and inner angular thresholds for an (r, cr)
/// average euclidean distance structure. Requires r > 0 and c > 1.
AvgEuclidParams avg_euclid_slsh_params(double r, double c);

}  // namespace slsh
