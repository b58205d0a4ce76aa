#include "slsh/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slsh {

namespace {

constexpr double kAxisTolerance = 1e-9;

void require_unit(const Point& v, const char* what) {
    if (std::abs(squared_norm(v) - 1.0) > 2.0 * kAxisTolerance)
        throw std::invalid_argument(std::string(what) + ": vector is not unit length");
}

}  // namespace

void EuclideanEllipsoidQuery::validate(std::size_t dim) const {
    if (center.size() != dim)
        throw std::invalid_argument("ellipsoid query: center dimension mismatch");
    require_unit_ball(center, "ellipsoid query");
    if (axes.size() != dim)
        throw std::invalid_argument("ellipsoid query: axis count != dimension");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (axes[i].size() != dim)
            throw std::invalid_argument("ellipsoid query: axis dimension mismatch");
        require_unit(axes[i], "ellipsoid query axis");
        for (std::size_t j = i + 1; j < axes.size(); ++j)
            if (std::abs(dot(axes[i], axes[j])) > 1e-7)
                throw std::invalid_argument("ellipsoid query: axes are not orthonormal");
    }
}

void AngularEllipsoidQuery::validate(std::size_t lifted_dim) const {
    if (center.size() != lifted_dim)
        throw std::invalid_argument("angular ellipsoid query: center dimension mismatch");
    require_unit(center, "angular ellipsoid center");
    for (const auto& e : axes) {
        if (e.size() != lifted_dim)
            throw std::invalid_argument("angular ellipsoid query: axis dimension mismatch");
        require_unit(e, "angular ellipsoid axis");
        if (std::abs(dot(e, center)) > 1e-7)
            throw std::invalid_argument(
                "angular ellipsoid query: axis not orthogonal to center");
    }
}

double euclidean_ellipsoid_distance(const EuclideanEllipsoidQuery& q, const Point& x,
                                    const std::vector<Rational>& weights) {
    if (x.size() != q.center.size())
        throw std::invalid_argument("ellipsoid distance: dimension mismatch");
    if (weights.size() != q.axes.size())
        throw std::invalid_argument("ellipsoid distance: weight count mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < q.axes.size(); ++i) {
        double proj = 0.0;
        for (std::size_t t = 0; t < x.size(); ++t)
            proj += q.axes[i][t] * (x[t] - q.center[t]);
        sum += weights[i].value() * proj * proj;
    }
    return sum;
}

double angular_axis_angle(const Point& axis, const Point& x) {
    require_unit(axis, "axis angle");
    require_unit(x, "axis angle");
    const double a = std::min(1.0, std::abs(dot(axis, x)));
    return std::asin(a);
}

double angular_ellipsoid_distance(const AngularEllipsoidQuery& q, const Point& x,
                                  const std::vector<Rational>& weights) {
    if (weights.size() != q.axes.size())
        throw std::invalid_argument("angular ellipsoid distance: weight count mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < q.axes.size(); ++i) {
        const double theta = angular_axis_angle(q.axes[i], x);
        sum += weights[i].value() * theta * theta;
    }
    return sum;
}

double choose_epsilon(double r, double c, double sum_w) {
    if (!(r > 0.0)) throw std::invalid_argument("choose_epsilon: r must be positive");
    if (!(c > 1.0)) throw std::invalid_argument("choose_epsilon: c must exceed 1");
    if (!(sum_w > 0.0))
        throw std::invalid_argument("choose_epsilon: weights must have positive sum");
    const double root8 = std::pow(c, 1.0 / 8.0);
    const double b1 = 0.125;
    const double b2 = (root8 - 1.0) / (root8 + 1.0);
    const double b3 =
        std::sqrt((c - std::sqrt(c)) * r / (5.0 * (std::sqrt(c) + 1.0) * sum_w));
    const double b4 =
        std::sqrt(1.0 - std::pow(c, -0.25)) * M_PI / (8.0 * std::sqrt(2.0));
    return std::min(std::min(b1, b2), std::min(b3, b4));
}

AngularThresholds euclid_to_angular_params(double r, double c, double sum_w,
                                           double eps) {
    const double b = beta(eps);
    AngularThresholds out;
    out.r_prime = eps * eps * (1.0 + eps) * (1.0 + eps) * (r + 5.0 * b * sum_w);
    out.c_prime =
        eps * eps * (1.0 - eps) * (1.0 - eps) * (c * r - 5.0 * b * sum_w) / out.r_prime;
    return out;
}

Point rotate_axis(const Point& axis, const Point& center, double eps) {
    require_unit(axis, "rotate_axis");
    require_unit_ball(center, "rotate_axis");
    if (axis.size() != center.size())
        throw std::invalid_argument("rotate_axis: dimension mismatch");
    if (!(eps > 0.0 && eps <= 0.125 * (1.0 + 1e-12)))
        throw std::invalid_argument("rotate_axis: eps out of (0, 1/8]");
    const double pi = dot(axis, center);               // projection of the center
    const double sign = pi >= 0.0 ? 1.0 : -1.0;        // sign(0) := +1
    const double shrunk_sq = eps * eps * squared_norm(center);
    const double z = std::sqrt(eps * eps * pi * pi + 1.0 - shrunk_sq);
    const double a = -sign * std::sqrt(1.0 - shrunk_sq) / z;
    Point out(axis.size() + 1);
    for (std::size_t t = 0; t < axis.size(); ++t) out[t] = a * axis[t];
    out.back() = eps * std::abs(pi) / z;
    return out;
}

WgeoThresholds angular_to_wgeo_params(double r, double c,
                                      const std::vector<Rational>& weights) {
    if (!(r > 0.0))
        throw std::invalid_argument("angular_to_wgeo: r must be positive");
    if (!(c > 1.0)) throw std::invalid_argument("angular_to_wgeo: c must exceed 1");
    double sum_w = 0.0;
    for (const auto& w : weights) sum_w += w.value();
    WgeoThresholds out;
    out.psi = std::sqrt((c - 1.0) / c) * M_PI / 4.0;
    const double denom = M_PI * M_PI - 4.0 * out.psi * out.psi;
    out.s_prime = std::exp(sum_w * std::log(0.25) - 4.0 * r / denom);
    out.c_prime = std::exp(-4.0 * r * (c / (M_PI * M_PI) - 1.0 / denom));
    return out;
}

std::vector<Point> antipodal_expand(const std::vector<Point>& axes) {
    std::vector<Point> out;
    out.reserve(2 * axes.size());
    for (const auto& e : axes) {
        out.push_back(e);
        Point neg(e.size());
        for (std::size_t t = 0; t < e.size(); ++t) neg[t] = -e[t];
        out.push_back(std::move(neg));
    }
    return out;
}

std::vector<Rational> duplicate_weights(const std::vector<Rational>& weights) {
    std::vector<Rational> out;
    out.reserve(2 * weights.size());
    for (const auto& w : weights) {
        out.push_back(w);
        out.push_back(w);
    }
    return out;
}

EllipsoidDerived EllipsoidStructure::derive(const EllipsoidConfig& config,
                                            std::size_t n) {
    if (config.dim == 0) throw std::invalid_argument("ellipsoid: dim must be >= 1");
    if (config.weights.size() != config.dim)
        throw std::invalid_argument("ellipsoid: need one weight per axis");
    EllipsoidDerived d;
    for (const auto& w : config.weights) d.sum_w += w.value();
    d.eps = choose_epsilon(config.r, config.c, d.sum_w);
    d.angular = euclid_to_angular_params(config.r, config.c, d.sum_w, d.eps);
    d.wgeo = angular_to_wgeo_params(d.angular.r_prime, d.angular.c_prime,
                                    config.weights);
    d.expansion = weighted_expand(duplicate_weights(config.weights), d.wgeo.s_prime,
                                  d.wgeo.c_prime, config.multiplicity_cap);
    d.index_params = IndexParams::plan(
        IndexMode::Similarity, d.expansion.threshold_m, d.expansion.c_m,
        /*p1=*/d.expansion.threshold_m,
        /*p2=*/d.expansion.c_m * d.expansion.threshold_m, n, config.seed,
        config.fail_prob);
    if (d.index_params.tables > config.max_tables)
        throw std::invalid_argument(
            "ellipsoid: required table count " +
            std::to_string(d.index_params.tables) + " exceeds budget " +
            std::to_string(config.max_tables) +
            " (weights/threshold make the reduction too fine)");
    return d;
}

EllipsoidStructure::EllipsoidStructure(EllipsoidConfig config, std::vector<Point> points)
    : config_(std::move(config)),
      derived_(derive(config_, points.size())),
      points_(std::move(points)) {
    std::vector<Point> lifted;
    lifted.reserve(points_.size());
    for (const auto& x : points_) {
        if (x.size() != config_.dim)
            throw std::invalid_argument("ellipsoid: point dimension mismatch");
        require_unit_ball(x, "ellipsoid");
        lifted.push_back(shrink_lift(x, derived_.eps));
    }
    inner_.emplace(InnerFamily(HyperplaneBase(config_.dim + 1),
                               derived_.expansion.k_prime, config_.seed),
                   derived_.index_params, std::move(lifted));
    check_angular_diameter();
}

EllipsoidStructure::EllipsoidStructure(EllipsoidConfig config, std::vector<Point> points,
                                       std::vector<InnerIndex::Entry> entries)
    : config_(std::move(config)),
      derived_(derive(config_, points.size())),
      points_(std::move(points)) {
    std::vector<Point> lifted;
    lifted.reserve(points_.size());
    for (const auto& x : points_) lifted.push_back(shrink_lift(x, derived_.eps));
    inner_.emplace(InnerFamily(HyperplaneBase(config_.dim + 1),
                               derived_.expansion.k_prime, config_.seed),
                   derived_.index_params, std::move(lifted), std::move(entries));
}

void EllipsoidStructure::check_angular_diameter() const {
    // The reduction requires every lifted center/point pair to stay within
    // angle sqrt((c'-1)/c') * pi/4; the epsilon selection guarantees it, so a
    // violation here means corrupted inputs.
    const double c_ang = derived_.angular.c_prime;
    const double bound = std::sqrt((c_ang - 1.0) / c_ang) * M_PI / 4.0 + 1e-12;
    const auto& lifted = inner_->points();
    const std::size_t step = std::max<std::size_t>(1, lifted.size() / 32);
    const Point pole = shrink_lift(Point(config_.dim, 0.0), derived_.eps);
    for (std::size_t i = 0; i < lifted.size(); i += step) {
        if (angular_distance(lifted[i], pole) > bound)
            throw std::logic_error("ellipsoid: lifted data exceeds the angular diameter");
        for (std::size_t j = i + step; j < lifted.size(); j += step)
            if (angular_distance(lifted[i], lifted[j]) > bound)
                throw std::logic_error(
                    "ellipsoid: lifted data exceeds the angular diameter");
    }
}

std::vector<Point> EllipsoidStructure::expanded_query(
    const EuclideanEllipsoidQuery& q) const {
    q.validate(config_.dim);
    std::vector<Point> rotated;
    rotated.reserve(q.axes.size());
    for (const auto& e : q.axes) rotated.push_back(rotate_axis(e, q.center, derived_.eps));
    return expand_elements(antipodal_expand(rotated), derived_.expansion);
}

std::optional<QueryMatch> EllipsoidStructure::query(const EuclideanEllipsoidQuery& q,
                                                    QueryStats* stats) const {
    const auto expanded = expanded_query(q);
    const auto match = inner_->query_best(
        expanded,
        [](const std::vector<Point>& elems, const Point& lifted_x) {
            double sim = 1.0;
            for (const auto& e : elems) sim *= angular_similarity(e, lifted_x);
            return sim;
        },
        stats);
    if (!match) return std::nullopt;
    const double exact =
        euclidean_ellipsoid_distance(q, points_[match->id], config_.weights);
    if (exact > config_.c * config_.r) return std::nullopt;  // cannot happen in exact math
    return QueryMatch{match->id, exact};
}

}  // namespace slsh
