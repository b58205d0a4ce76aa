#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "slsh/base_hashes.hpp"

namespace slsh {

/// Monte Carlo estimate of a collision probability with its 3-sigma
/// binomial band.
struct CollisionEstimate {
    double p_hat = 0.0;
    std::size_t trials = 0;

    double half_width() const {
        return 3.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
    }
    bool contains(double p) const {
        return std::abs(p - p_hat) <= half_width();
    }
};

/// Draws `trials` independent function pairs from the family (which carries
/// its own seed) and counts full-sequence symbol matches between the query
/// side and the point side.
template <class Family>
CollisionEstimate estimate_collision_probability(const Family& family,
                                                 const typename Family::query_t& q,
                                                 const typename Family::point_t& x,
                                                 std::size_t trials) {
    if (trials < 1000)
        throw std::invalid_argument("collision estimate: need at least 1000 trials");
    typename Family::DrawScratch scratch;
    std::vector<Symbol> qs(family.arity());
    std::vector<Symbol> ps(family.arity());
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        family.load_draw(t, 0, scratch);
        family.query_symbols(scratch, q, qs.data());
        family.point_symbols(scratch, x, ps.data());
        hits += qs == ps;
    }
    return CollisionEstimate{static_cast<double>(hits) / static_cast<double>(trials),
                             trials};
}

/// Exact argmax/argmin of an aggregated objective by full scan. Ties break
/// toward the lowest identifier.
template <class PointT, class Score>
std::pair<std::size_t, double> brute_force_best(std::span<const PointT> points,
                                                Score&& score, bool maximize) {
    if (points.empty()) throw std::invalid_argument("brute force: empty dataset");
    std::size_t best = 0;
    double best_value = score(points[0]);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double v = score(points[i]);
        if (maximize ? v > best_value : v < best_value) {
            best = i;
            best_value = v;
        }
    }
    return {best, best_value};
}

}  // namespace slsh
