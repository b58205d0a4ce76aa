#include "slsh/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace slsh {

double angular_distance(const Point& x, const Point& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("angular distance: dimension mismatch");
    const double nx = norm(x);
    const double ny = norm(y);
    if (nx == 0.0 || ny == 0.0)
        throw std::invalid_argument("angular distance: zero vector");
    double diff_sq = 0.0;  // |u - v|^2
    double sum_sq = 0.0;   // |u + v|^2
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = x[i] / nx;
        const double v = y[i] / ny;
        diff_sq += (u - v) * (u - v);
        sum_sq += (u + v) * (u + v);
    }
    return 2.0 * std::atan2(std::sqrt(diff_sq), std::sqrt(sum_sq));
}

double angular_similarity(const Point& x, const Point& y) {
    return 1.0 - angular_distance(x, y) / M_PI;
}

double inner_product_similarity(const Point& x, const Point& y) {
    require_unit_ball(x, "inner product similarity");
    require_unit_ball(y, "inner product similarity");
    return dot(x, y);
}

double hamming_similarity(const BitVector& x, const BitVector& y) {
    if (x.size() != y.size() || x.size() == 0)
        throw std::invalid_argument("hamming similarity: length mismatch or empty");
    std::size_t agree = 0;
    for (std::size_t i = 0; i < x.size(); ++i) agree += x.bits[i] == y.bits[i];
    return static_cast<double>(agree) / static_cast<double>(x.size());
}

double jaccard_similarity(const TokenSet& s, const TokenSet& t) {
    if (s.tokens.empty() && t.tokens.empty()) return 1.0;
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < s.tokens.size() && j < t.tokens.size()) {
        if (s.tokens[i] == t.tokens[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (s.tokens[i] < t.tokens[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = s.tokens.size() + t.tokens.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double p2p_similarity(SimilarityKind kind, const Point& x, const Point& y) {
    switch (kind) {
        case SimilarityKind::Angular: return angular_similarity(x, y);
        case SimilarityKind::InnerProduct: return inner_product_similarity(x, y);
        default: throw std::invalid_argument("p2p similarity: operands do not match kind");
    }
}

double p2p_distance(DistanceKind kind, const Point& x, const Point& y) {
    switch (kind) {
        case DistanceKind::Angular: return angular_distance(x, y);
        case DistanceKind::Euclidean: return euclidean_distance(x, y);
    }
    throw std::invalid_argument("p2p distance: unknown kind");
}

namespace {

double int_pow(double v, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= v;
    return r;
}

void check_values(std::span<const double> values, bool unit_range) {
    if (values.empty()) throw std::invalid_argument("aggregate: empty input");
    for (double v : values) {
        if (v < 0.0) throw std::invalid_argument("aggregate: negative value");
        if (unit_range && v > 1.0 + 1e-12)
            throw std::invalid_argument("aggregate: similarity above 1");
    }
}

}  // namespace

double aggregate_similarity(Aggregation mode, std::span<const double> values, int p,
                            std::span<const Rational> weights) {
    check_values(values, /*unit_range=*/true);
    switch (mode) {
        case Aggregation::Average:
            p = 1;
            [[fallthrough]];
        case Aggregation::Lp: {
            if (p < 1) throw std::invalid_argument("aggregate: lp exponent must be >= 1");
            double s = 0.0;
            for (double v : values) s += int_pow(v, p);
            return s / static_cast<double>(values.size());
        }
        case Aggregation::Geometric: {
            double s = 1.0;
            for (double v : values) s *= v;
            return s;
        }
        case Aggregation::WeightedGeometric: {
            if (weights.size() != values.size())
                throw std::invalid_argument("aggregate: weighted mode needs aligned weights");
            double s = 1.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (weights[i].is_zero()) continue;  // 0^0 := 1
                s *= std::pow(values[i], weights[i].value());
            }
            return s;
        }
        case Aggregation::Center:
            return *std::min_element(values.begin(), values.end());
    }
    throw std::invalid_argument("aggregate: unknown mode");
}

double aggregate_distance(Aggregation mode, std::span<const double> values, int p) {
    check_values(values, /*unit_range=*/false);
    switch (mode) {
        case Aggregation::Average:
            p = 1;
            [[fallthrough]];
        case Aggregation::Lp: {
            if (p < 1) throw std::invalid_argument("aggregate: lp exponent must be >= 1");
            double s = 0.0;
            for (double v : values) s += int_pow(v, p);
            return s / static_cast<double>(values.size());
        }
        case Aggregation::Geometric: {
            double s = 1.0;
            for (double v : values) s *= v;
            return s;
        }
        case Aggregation::Center:
            return *std::max_element(values.begin(), values.end());
        case Aggregation::WeightedGeometric:
            break;
    }
    throw std::invalid_argument("aggregate: unsupported distance mode");
}

namespace {

std::vector<double> pairwise(SimilarityKind kind, const SetQuery& q, const Point& x) {
    std::vector<double> vals;
    vals.reserve(q.size());
    for (const auto& qi : q.points) vals.push_back(p2p_similarity(kind, qi, x));
    return vals;
}

}  // namespace

double lp_set_similarity(SimilarityKind kind, const SetQuery& q, const Point& x, int p) {
    const auto vals = pairwise(kind, q, x);
    return aggregate_similarity(Aggregation::Lp, vals, p);
}

double geometric_set_similarity(SimilarityKind kind, const SetQuery& q, const Point& x,
                                bool weighted) {
    const auto vals = pairwise(kind, q, x);
    if (!weighted) return aggregate_similarity(Aggregation::Geometric, vals);
    return aggregate_similarity(Aggregation::WeightedGeometric, vals, 1, q.weights);
}

double lp_set_distance(DistanceKind kind, const SetQuery& q, const Point& x, int p) {
    std::vector<double> vals;
    vals.reserve(q.size());
    for (const auto& qi : q.points) vals.push_back(p2p_distance(kind, qi, x));
    return aggregate_distance(Aggregation::Lp, vals, p);
}

double center_set_distance(DistanceKind kind, const SetQuery& q, const Point& x) {
    std::vector<double> vals;
    vals.reserve(q.size());
    for (const auto& qi : q.points) vals.push_back(p2p_distance(kind, qi, x));
    return aggregate_distance(Aggregation::Center, vals);
}

}  // namespace slsh
