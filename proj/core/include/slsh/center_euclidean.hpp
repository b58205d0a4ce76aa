#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "slsh/ellipsoid.hpp"

namespace slsh {

/// Smallest approximation the center-euclidean reduction supports.
inline const double kCenterCMin = 3.0 / (2.0 * std::sqrt(2.0));  // ~1.06066

/// max(|x - q1|, |x - q2|).
double center_euclidean_distance(const Point& q1, const Point& q2, const Point& x);

/// Feasibility regions for the canonical pair q_{+a} = (a, 0, ...),
/// q_{-a} = (-a, 0, ...). The reduction sandwiches the center-distance
/// lenses between two ellipsoids:
///   lens(radius)      max(|x - q_a|, |x - q_-a|) <= radius
///   small ellipsoid   ((r+a)/(r-a)) x_1^2 + sum_{i>1} x_i^2 <= r^2 - a^2
///   big ellipsoid     same form <= (cr/c_min)^2 - a^2
/// and the quantized variants replace a by a' = ceil(a/delta) delta:
///   quantized small   <= (c/c_min)   (r^2 - a'^2)
///   quantized big     <= (c/c_min)^2 (r^2 - a'^2)
/// `slack` loosens the right-hand side (containment checks at tolerance).
bool in_center_lens(const Point& x, double a, double radius, double slack = 0.0);
bool in_small_ellipsoid(const Point& x, double a, double r, double slack = 0.0);
bool in_big_ellipsoid(const Point& x, double a, double r, double c, double slack = 0.0);
bool in_quantized_small(const Point& x, double a_quant, double r, double c,
                        double slack = 0.0);
bool in_quantized_big(const Point& x, double a_quant, double r, double c,
                      double slack = 0.0);

/// Rational quantization step for the half-separation grid. Starts from
/// delta = min(1/2, 1 - sqrt(c_min/c)) * phi * r and snaps down to r/M for
/// the smallest multiple M of 6 with r/M <= delta. Keeping M | 6Z makes the
/// slots at M/3 and M/2 carry integer axis weights, so they stay inside the
/// expansion cap.
Rational quantization_delta(const Rational& r, double c, double phi);

/// Isometry taking a point pair to (+a, 0, ...), (-a, 0, ...): translation
/// of the midpoint to the origin followed by a Householder reflection that
/// sends the pair direction to the first standard basis vector.
class RigidTransform {
public:
    RigidTransform(const Point& q1, const Point& q2);

    double half_separation() const { return a_; }
    const Point& midpoint() const { return mid_; }

    Point apply(const Point& x) const;
    Point inverse(const Point& y) const;

    /// Direction of canonical axis i in the original frame (the reflection
    /// is involutive, so this is also the forward image of e_i).
    Point axis_direction(std::size_t i) const;

private:
    Point reflect(Point x) const;

    Point mid_;
    Point mirror_;  // unit reflection normal; empty when the pair is already canonical
    double a_;
};

struct CenterConfig {
    std::size_t dim = 0;
    Rational r;            // distance threshold, rational so slot weights stay exact
    double c = 0.0;        // approximation, must exceed kCenterCMin
    double phi = 0.0;      // query separation margin, in (0, 1)
    std::uint64_t seed = 0;
    double fail_prob = 0.05;
    std::size_t multiplicity_cap = 4096;
    std::size_t max_tables = std::size_t{1} << 21;
    std::size_t max_structures = 4096;
};

/// One quantized half-separation value and its ellipsoid reduction.
struct CenterSlot {
    Rational a;                    // i * delta
    Rational first_weight;         // (r + a) / (r - a)
    EllipsoidConfig ellipsoid;     // target structure parameters
    bool feasible = false;
    std::size_t k_prime = 0;       // expanded multiplicity of the inner family
    std::size_t tables = 0;        // planned table count when feasible
    std::string diagnostic;        // set when infeasible
};

/// (r, cr) structure for the center euclidean distance over set-queries of
/// size 2. The half-separation range [0, (1-phi) r) is quantized with step
/// delta and one euclidean ellipsoid structure is prepared per grid value;
/// a query maps to the structure at a' = ceil(a/delta) * delta through the
/// rigid transform that takes the pair to canonical position.
///
/// Slot parameters and feasibility are all derived at build time; the
/// underlying tables of a slot are hashed on first use, since slots whose
/// expanded weights are coarse fractions would need infeasibly many tables
/// and may never be queried.
class CenterStructure {
public:
    CenterStructure(CenterConfig config, std::vector<Point> points);

    std::optional<QueryMatch> query(const Point& q1, const Point& q2,
                                    QueryStats* stats = nullptr) const;
    std::optional<QueryMatch> query(const SetQuery& q, QueryStats* stats = nullptr) const;

    const CenterConfig& config() const { return config_; }
    const Rational& delta() const { return delta_; }
    const std::vector<CenterSlot>& slots() const { return slots_; }
    const std::vector<Point>& points() const { return points_; }

    /// Index of the quantized structure a query with half-separation a uses.
    std::size_t slot_for(double a) const;

    /// Builds slot i's tables if not yet materialized. Throws when the slot
    /// is infeasible.
    const EllipsoidStructure& materialize(std::size_t i) const;

private:
    CenterConfig config_;
    Rational delta_;
    std::vector<Point> points_;
    std::vector<CenterSlot> slots_;
    mutable std::vector<std::unique_ptr<EllipsoidStructure>> built_;
    mutable std::mutex build_mutex_;
};

}  // namespace slsh
