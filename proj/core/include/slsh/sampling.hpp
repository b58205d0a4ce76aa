#pragma once

#include <cmath>

#include "slsh/rng.hpp"
#include "slsh/types.hpp"

namespace slsh {

inline Point random_unit_vector(Rng& rng, std::size_t dim) {
    Point p(dim);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& v : p) {
            v = rng.next_gaussian();
            n2 += v * v;
        }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : p) v *= inv;
    return p;
}

/// Uniform in the unit ball.
inline Point random_ball_point(Rng& rng, std::size_t dim) {
    Point p = random_unit_vector(rng, dim);
    const double radius = std::pow(rng.next_unit(), 1.0 / static_cast<double>(dim));
    for (auto& v : p) v *= radius;
    return p;
}

/// Rotates `anchor` by exactly `angle` toward a random orthogonal direction.
inline Point rotate_toward_random(Rng& rng, const Point& anchor, double angle) {
    Point u = random_unit_vector(rng, anchor.size());
    const double proj = dot(u, anchor);
    double n2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] -= proj * anchor[i];
        n2 += u[i] * u[i];
    }
    if (n2 < 1e-24) return anchor;  // degenerate draw; caller keeps the anchor
    const double inv = 1.0 / std::sqrt(n2);
    Point out(anchor.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::cos(angle) * anchor[i] + std::sin(angle) * inv * u[i];
    return out;
}

}  // namespace slsh
