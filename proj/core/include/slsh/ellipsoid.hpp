#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "slsh/index.hpp"
#include "slsh/lift.hpp"
#include "slsh/metrics.hpp"
#include "slsh/slsh_families.hpp"

namespace slsh {

/// Center plus d orthonormal axes in the unit ball. The axis weights are a
/// per-structure constant, not part of the query.
struct EuclideanEllipsoidQuery {
    Point center;
    std::vector<Point> axes;

    void validate(std::size_t dim) const;
};

/// Center on the unit sphere plus unit axes orthogonal to it (the axes need
/// not be orthogonal to each other).
struct AngularEllipsoidQuery {
    Point center;
    std::vector<Point> axes;

    void validate(std::size_t lifted_dim) const;
};

/// sum_i w_i (e_i^T (x - p))^2.
double euclidean_ellipsoid_distance(const EuclideanEllipsoidQuery& q, const Point& x,
                                    const std::vector<Rational>& weights);

/// Angle between a unit vector and its projection onto the hyperplane
/// orthogonal to the unit axis: asin(|e^T x|), in [0, pi/2].
double angular_axis_angle(const Point& axis, const Point& x);

/// sum_i w_i * angular_axis_angle(e_i, x)^2.
double angular_ellipsoid_distance(const AngularEllipsoidQuery& q, const Point& x,
                                  const std::vector<Rational>& weights);

/// Shrink factor for the euclidean-to-angular ellipsoid reduction: the
/// minimum of the four admissibility bounds
///   1/8,   (c^(1/8)-1)/(c^(1/8)+1),
///   sqrt((c - sqrt(c)) r / (5 (sqrt(c)+1) sum_w)),
///   sqrt(1 - c^(-1/4)) * pi / (8 sqrt(2)).
double choose_epsilon(double r, double c, double sum_w);

/// Angular ellipsoid thresholds after lifting with eps:
///   r' = eps^2 (1+eps)^2 (r + 5 beta(eps) sum_w)
///   c' = eps^2 (1-eps)^2 (c r - 5 beta(eps) sum_w) / r'      (c' > c^(1/4))
struct AngularThresholds {
    double r_prime;
    double c_prime;
};
AngularThresholds euclid_to_angular_params(double r, double c, double sum_w, double eps);

/// Rotates a euclidean ellipsoid axis upward so it becomes orthogonal to the
/// lifted center: e -> (a e ; sqrt(1 - a^2)) with
///   a = -sign(e^T p) sqrt((1 - |eps p|^2) / (eps^2 (e^T p)^2 + 1 - |eps p|^2)),
/// sign(0) := +1. Works for arbitrary unit axes via the projection e^T p.
Point rotate_axis(const Point& axis, const Point& center, double eps);

/// Thresholds of the weighted geometric angular similarity problem that an
/// angular ellipsoid (r, cr) query reduces to:
///   psi  = sqrt((c-1)/c) * pi/4
///   S'   = exp(sum_i w_i ln(1/4) - 4r / (pi^2 - 4 psi^2))
///   c'   = exp(-4r (c/pi^2 - 1/(pi^2 - 4 psi^2)))                 (c' < 1)
struct WgeoThresholds {
    double psi;
    double s_prime;
    double c_prime;
};
WgeoThresholds angular_to_wgeo_params(double r, double c,
                                      const std::vector<Rational>& weights);

/// Antipodal expansion {e_1, -e_1, ..., e_d, -e_d} of a set of axes.
std::vector<Point> antipodal_expand(const std::vector<Point>& axes);

/// Duplicates per-axis weights to match the antipodal expansion.
std::vector<Rational> duplicate_weights(const std::vector<Rational>& weights);

struct EllipsoidConfig {
    std::size_t dim = 0;
    double r = 0.0;  // small-ellipsoid size
    double c = 0.0;  // approximation, > 1
    std::vector<Rational> weights;
    std::uint64_t seed = 0;
    double fail_prob = 0.05;
    std::size_t multiplicity_cap = 4096;
    std::size_t max_tables = std::size_t{1} << 21;
};

/// Everything the reduction derives from an EllipsoidConfig before any point
/// is hashed.
struct EllipsoidDerived {
    double sum_w = 0.0;
    double eps = 0.0;
    AngularThresholds angular;
    WgeoThresholds wgeo;
    WeightedExpansion expansion;  // over the duplicated weights
    IndexParams index_params;     // inner geometric-similarity structure
};

/// (r, cr) structure for the euclidean ellipsoid distance. Build lifts the
/// data onto the sphere and stores it in an exhaustive geometric-similarity
/// index whose thresholds come from the reduction chain; queries lift the
/// center, rotate the axes, expand them antipodally and verify candidates
/// against the true euclidean ellipsoid distance.
class EllipsoidStructure {
public:
    using InnerFamily = ExhaustiveSlsh<HyperplaneBase>;
    using InnerIndex = LshIndex<InnerFamily>;

    EllipsoidStructure(EllipsoidConfig config, std::vector<Point> points);

    /// Restores from persisted table entries without re-hashing.
    EllipsoidStructure(EllipsoidConfig config, std::vector<Point> points,
                       std::vector<InnerIndex::Entry> entries);

    static EllipsoidDerived derive(const EllipsoidConfig& config, std::size_t n);

    std::optional<QueryMatch> query(const EuclideanEllipsoidQuery& q,
                                    QueryStats* stats = nullptr) const;

    const EllipsoidConfig& config() const { return config_; }
    const EllipsoidDerived& derived() const { return derived_; }
    const std::vector<Point>& points() const { return points_; }
    const InnerIndex& inner() const { return *inner_; }

    /// The expanded weighted-geometric set-query a euclidean query maps to.
    std::vector<Point> expanded_query(const EuclideanEllipsoidQuery& q) const;

private:
    void check_angular_diameter() const;

    EllipsoidConfig config_;
    EllipsoidDerived derived_;
    std::vector<Point> points_;  // originals, used for exact verification
    std::optional<InnerIndex> inner_;
};

}  // namespace slsh
