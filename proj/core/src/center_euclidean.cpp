#include "slsh/center_euclidean.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slsh {

double center_euclidean_distance(const Point& q1, const Point& q2, const Point& x) {
    return std::max(euclidean_distance(x, q1), euclidean_distance(x, q2));
}

namespace {

double ellipsoid_form(const Point& x, double a, double r) {
    double sum = ((r + a) / (r - a)) * x[0] * x[0];
    for (std::size_t i = 1; i < x.size(); ++i) sum += x[i] * x[i];
    return sum;
}

}  // namespace

bool in_center_lens(const Point& x, double a, double radius, double slack) {
    double rest = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) rest += x[i] * x[i];
    const double far = (std::abs(x[0]) + a) * (std::abs(x[0]) + a) + rest;
    return far <= radius * radius + slack;
}

bool in_small_ellipsoid(const Point& x, double a, double r, double slack) {
    return ellipsoid_form(x, a, r) <= r * r - a * a + slack;
}

bool in_big_ellipsoid(const Point& x, double a, double r, double c, double slack) {
    const double cr = c * r / kCenterCMin;
    return ellipsoid_form(x, a, r) <= cr * cr - a * a + slack;
}

bool in_quantized_small(const Point& x, double a_quant, double r, double c,
                        double slack) {
    const double ratio = c / kCenterCMin;
    return ellipsoid_form(x, a_quant, r) <= ratio * (r * r - a_quant * a_quant) + slack;
}

bool in_quantized_big(const Point& x, double a_quant, double r, double c,
                      double slack) {
    const double ratio = c / kCenterCMin;
    return ellipsoid_form(x, a_quant, r) <=
           ratio * ratio * (r * r - a_quant * a_quant) + slack;
}

Rational quantization_delta(const Rational& r, double c, double phi) {
    if (r.is_zero()) throw std::invalid_argument("quantization: r must be positive");
    if (!(c > kCenterCMin))
        throw std::invalid_argument("quantization: c must exceed c_min = 3/(2*sqrt(2)) ~ " +
                                    std::to_string(kCenterCMin));
    if (!(phi > 0.0 && phi < 1.0))
        throw std::invalid_argument("quantization: phi must be in (0, 1)");
    const double delta_real =
        std::min(0.5, 1.0 - std::sqrt(kCenterCMin / c)) * phi * r.value();
    if (!(delta_real > 0.0))
        throw std::invalid_argument("quantization: step degenerated to zero");
    const double m_exact = r.value() / (6.0 * delta_real);
    const auto m6 = static_cast<std::int64_t>(6.0 * std::ceil(m_exact));
    if (m6 <= 0 || m6 > (std::int64_t{1} << 40))
        throw std::invalid_argument("quantization: step too fine for the grid");
    return Rational(r.numerator(), Rational::checked_mul(r.denominator(), m6));
}

RigidTransform::RigidTransform(const Point& q1, const Point& q2) {
    if (q1.size() != q2.size() || q1.empty())
        throw std::invalid_argument("rigid transform: dimension mismatch");
    const std::size_t d = q1.size();
    mid_.resize(d);
    for (std::size_t t = 0; t < d; ++t) mid_[t] = 0.5 * (q1[t] + q2[t]);
    Point dir(d);
    for (std::size_t t = 0; t < d; ++t) dir[t] = q1[t] - q2[t];
    const double sep = norm(dir);
    a_ = 0.5 * sep;
    if (sep == 0.0) return;  // pure translation, orthogonal part = identity
    for (double& v : dir) v /= sep;
    dir[0] -= 1.0;  // v = u - e1; H = I - 2 v v^T / |v|^2 swaps u and e1
    const double vn = norm(dir);
    if (vn < 1e-12) return;  // pair already on the first axis
    for (double& v : dir) v /= vn;
    mirror_ = std::move(dir);
}

Point RigidTransform::reflect(Point x) const {
    if (mirror_.empty()) return x;
    const double proj = dot(mirror_, x);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] -= 2.0 * proj * mirror_[t];
    return x;
}

Point RigidTransform::apply(const Point& x) const {
    if (x.size() != mid_.size())
        throw std::invalid_argument("rigid transform: dimension mismatch");
    Point shifted(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) shifted[t] = x[t] - mid_[t];
    return reflect(std::move(shifted));
}

Point RigidTransform::inverse(const Point& y) const {
    Point out = reflect(y);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += mid_[t];
    return out;
}

Point RigidTransform::axis_direction(std::size_t i) const {
    Point e(mid_.size(), 0.0);
    e.at(i) = 1.0;
    return reflect(std::move(e));
}

CenterStructure::CenterStructure(CenterConfig config, std::vector<Point> points)
    : config_(std::move(config)), points_(std::move(points)) {
    if (config_.dim == 0) throw std::invalid_argument("center: dim must be >= 1");
    if (!(config_.c > kCenterCMin))
        throw std::invalid_argument("center: c must exceed c_min = 3/(2*sqrt(2)) ~ " +
                                    std::to_string(kCenterCMin));
    if (!(config_.phi > 0.0 && config_.phi < 1.0))
        throw std::invalid_argument("center: phi must be in (0, 1)");
    for (const auto& x : points_) {
        if (x.size() != config_.dim)
            throw std::invalid_argument("center: point dimension mismatch");
        require_unit_ball(x, "center");
    }
    delta_ = quantization_delta(config_.r, config_.c, config_.phi);

    // delta = r/M, so the grid has ceil((1-phi) M) + 1 values of i*delta.
    const double m_ratio = config_.r.value() / delta_.value();
    const auto m_int = static_cast<std::int64_t>(std::llround(m_ratio));
    const auto max_slot =
        static_cast<std::size_t>(std::ceil((1.0 - config_.phi) * m_ratio - 1e-12));
    if (max_slot + 1 > config_.max_structures)
        throw std::invalid_argument("center: " + std::to_string(max_slot + 1) +
                                    " quantized structures exceed the cap " +
                                    std::to_string(config_.max_structures));

    const double c_ell = config_.c / kCenterCMin;
    slots_.reserve(max_slot + 1);
    for (std::size_t i = 0; i <= max_slot; ++i) {
        CenterSlot slot;
        slot.a = Rational(Rational::checked_mul(delta_.numerator(),
                                                static_cast<std::int64_t>(i)),
                          delta_.denominator());
        // With delta = r/M the ratio (r + a)/(r - a) reduces to (M+i)/(M-i).
        slot.first_weight =
            Rational(m_int + static_cast<std::int64_t>(i),
                     m_int - static_cast<std::int64_t>(i));
        slot.ellipsoid.dim = config_.dim;
        slot.ellipsoid.r =
            c_ell * (config_.r.value() * config_.r.value() - slot.a.value() * slot.a.value());
        slot.ellipsoid.c = c_ell;
        slot.ellipsoid.weights.assign(config_.dim, Rational(1, 1));
        slot.ellipsoid.weights[0] = slot.first_weight;
        slot.ellipsoid.seed = derive_seed(config_.seed, i, 0x51);
        slot.ellipsoid.fail_prob = config_.fail_prob;
        slot.ellipsoid.multiplicity_cap = config_.multiplicity_cap;
        slot.ellipsoid.max_tables = config_.max_tables;
        try {
            const auto derived =
                EllipsoidStructure::derive(slot.ellipsoid, points_.size());
            slot.k_prime = derived.expansion.k_prime;
            slot.tables = derived.index_params.tables;
            slot.feasible = true;
        } catch (const std::exception& e) {
            slot.feasible = false;
            slot.diagnostic = e.what();
        }
        slots_.push_back(std::move(slot));
    }
    built_.resize(slots_.size());
}

std::size_t CenterStructure::slot_for(double a) const {
    if (a <= 0.0) return 0;
    const auto i = static_cast<std::size_t>(std::ceil(a / delta_.value() - 1e-12));
    return std::min(i, slots_.size() - 1);
}

const EllipsoidStructure& CenterStructure::materialize(std::size_t i) const {
    std::lock_guard<std::mutex> lock(build_mutex_);
    if (built_.at(i)) return *built_[i];
    const auto& slot = slots_[i];
    if (!slot.feasible)
        throw std::invalid_argument("center: quantized structure " + std::to_string(i) +
                                    " is infeasible: " + slot.diagnostic);
    built_[i] = std::make_unique<EllipsoidStructure>(slot.ellipsoid, points_);
    return *built_[i];
}

std::optional<QueryMatch> CenterStructure::query(const Point& q1, const Point& q2,
                                                 QueryStats* stats) const {
    if (q1.size() != config_.dim || q2.size() != config_.dim)
        throw std::invalid_argument("center query: dimension mismatch");
    require_unit_ball(q1, "center query");
    require_unit_ball(q2, "center query");

    const double a = 0.5 * euclidean_distance(q1, q2);
    if (a >= (1.0 - config_.phi) * config_.r.value()) return std::nullopt;

    const std::size_t i = slot_for(a);
    const auto& structure = materialize(i);

    RigidTransform frame(q1, q2);
    EuclideanEllipsoidQuery eq;
    eq.center = frame.midpoint();
    eq.axes.reserve(config_.dim);
    for (std::size_t t = 0; t < config_.dim; ++t)
        eq.axes.push_back(frame.axis_direction(t));

    const auto match = structure.query(eq, stats);
    if (!match) return std::nullopt;
    const double exact = center_euclidean_distance(q1, q2, points_[match->id]);
    if (exact > config_.c * config_.r.value()) return std::nullopt;
    return QueryMatch{match->id, exact};
}

std::optional<QueryMatch> CenterStructure::query(const SetQuery& q,
                                                 QueryStats* stats) const {
    if (q.size() != 2)
        throw std::invalid_argument("center query: set-query must have size 2");
    return query(q.points[0], q.points[1], stats);
}

}  // namespace slsh
