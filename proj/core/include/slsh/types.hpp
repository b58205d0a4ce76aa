#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "slsh/rational.hpp"

namespace slsh {

/// Raised by file ingestion and snapshot code; the CLI maps it to exit 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Point = std::vector<double>;

struct BitVector {
    std::vector<std::uint8_t> bits;  // values 0/1, length = dimension

    std::size_t size() const { return bits.size(); }
    bool operator==(const BitVector&) const = default;
};

struct TokenSet {
    std::vector<std::uint64_t> tokens;  // sorted, unique, < universe

    std::size_t size() const { return tokens.size(); }
    bool operator==(const TokenSet&) const = default;
};

/// Ordered set-query. The construction order is the consistent order used
/// by the set-side hashers; weights, when present, align index-wise.
struct SetQuery {
    std::vector<Point> points;
    std::vector<Rational> weights;  // empty or same length as points

    SetQuery() = default;
    explicit SetQuery(std::vector<Point> pts) : points(std::move(pts)) { validate(); }
    SetQuery(std::vector<Point> pts, std::vector<Rational> ws)
        : points(std::move(pts)), weights(std::move(ws)) {
        validate();
    }

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }

    void validate() const {
        if (points.empty()) throw std::invalid_argument("set-query: empty");
        const std::size_t d = points.front().size();
        for (const auto& p : points)
            if (p.size() != d) throw std::invalid_argument("set-query: mixed dimensions");
        if (!weights.empty() && weights.size() != points.size())
            throw std::invalid_argument("set-query: weight count mismatch");
    }
};

inline double dot(const Point& x, const Point& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double squared_norm(const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double norm(const Point& x) { return std::sqrt(squared_norm(x)); }

inline double euclidean_distance(const Point& x, const Point& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("euclidean distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

constexpr double kUnitBallTolerance = 1e-9;

/// Membership check for the closed unit ball, with ingestion tolerance.
inline void require_unit_ball(const Point& x, const char* what) {
    if (squared_norm(x) > 1.0 + 2.0 * kUnitBallTolerance)
        throw std::invalid_argument(std::string(what) + ": point outside the unit ball");
}

}  // namespace slsh
