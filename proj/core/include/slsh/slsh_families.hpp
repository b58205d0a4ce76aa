#pragma once

#include <cstdint>
#include <vector>

#include "slsh/base_hashes.hpp"
#include "slsh/rational.hpp"

namespace slsh {

// Seed lanes, so the function draws and the query-side element pick come
// from independent streams of the same (seed, table, slot) address.
inline constexpr std::uint64_t kLaneFunctions = 0;
inline constexpr std::uint64_t kLanePick = 1;

/// Set-query family for the l_p similarity of an achievable base: one draw
/// picks a uniform element index i and p independent base functions, maps
///   Q -> (h_1(q_i), ..., h_p(q_i))      x -> (h_1(x), ..., h_p(x)),
/// and collides with probability (1/k) sum_i s(q_i, x)^p.
///
/// The element pick is resolved on the query side from a per-draw sub-seed,
/// so the stored tables never depend on the set-query size.
template <class Base>
class RepeatSlsh {
public:
    using base_t = Base;
    using point_t = typename Base::point_t;
    using query_t = std::vector<point_t>;

    struct DrawScratch {
        typename Base::DrawState base;
        std::uint64_t pick_seed = 0;
    };

    RepeatSlsh(Base base, std::size_t p, std::uint64_t seed)
        : base_(std::move(base)), p_(p), seed_(seed) {
        if (p == 0) throw std::invalid_argument("repeat family: p must be >= 1");
    }

    const Base& base() const { return base_; }
    std::size_t arity() const { return p_; }
    std::uint64_t seed() const { return seed_; }

    void load_draw(std::uint64_t table, std::uint64_t slot, DrawScratch& d) const {
        Rng rng(derive_seed(seed_, table, slot, kLaneFunctions));
        base_.load_draws(rng, p_, d.base);
        d.pick_seed = derive_seed(seed_, table, slot, kLanePick);
    }

    void point_symbols(const DrawScratch& d, const point_t& x, Symbol* out) const {
        for (std::size_t j = 0; j < p_; ++j) out[j] = base_.symbol(d.base, j, x);
    }

    void query_symbols(const DrawScratch& d, const query_t& q, Symbol* out) const {
        if (q.empty()) throw std::invalid_argument("repeat family: empty set-query");
        Rng pick(d.pick_seed);
        const point_t& qi = q[pick.next_below(q.size())];
        for (std::size_t j = 0; j < p_; ++j) out[j] = base_.symbol(d.base, j, qi);
    }

private:
    Base base_;
    std::size_t p_;
    std::uint64_t seed_;
};

/// Set-query family for the geometric similarity: one draw is k independent
/// base functions, function j applied to element j on the query side and to
/// the data point on the point side. Collision probability is
/// prod_j s(q_j, x).
template <class Base>
class ExhaustiveSlsh {
public:
    using base_t = Base;
    using point_t = typename Base::point_t;
    using query_t = std::vector<point_t>;

    struct DrawScratch {
        typename Base::DrawState base;
    };

    ExhaustiveSlsh(Base base, std::size_t k, std::uint64_t seed)
        : base_(std::move(base)), k_(k), seed_(seed) {
        if (k == 0) throw std::invalid_argument("exhaustive family: k must be >= 1");
    }

    const Base& base() const { return base_; }
    std::size_t arity() const { return k_; }
    std::uint64_t seed() const { return seed_; }

    void load_draw(std::uint64_t table, std::uint64_t slot, DrawScratch& d) const {
        Rng rng(derive_seed(seed_, table, slot, kLaneFunctions));
        base_.load_draws(rng, k_, d.base);
    }

    void point_symbols(const DrawScratch& d, const point_t& x, Symbol* out) const {
        for (std::size_t j = 0; j < k_; ++j) out[j] = base_.symbol(d.base, j, x);
    }

    void query_symbols(const DrawScratch& d, const query_t& q, Symbol* out) const {
        if (q.size() != k_)
            throw std::invalid_argument("exhaustive family: set-query size != k");
        for (std::size_t j = 0; j < k_; ++j) out[j] = base_.symbol(d.base, j, q[j]);
    }

private:
    Base base_;
    std::size_t k_;
    std::uint64_t seed_;
};

/// Asymmetric inner-product family with point queries; the set-query case
/// reduces to this through centroid_transform.
class SimpleAlshFamily {
public:
    using point_t = Point;
    using query_t = Point;

    struct DrawScratch {
        SimpleAlshBase::DrawState base;
    };

    SimpleAlshFamily(std::size_t dim, std::uint64_t seed)
        : base_(dim), seed_(seed) {}

    std::size_t arity() const { return 1; }
    std::size_t dim() const { return base_.dim(); }
    std::uint64_t seed() const { return seed_; }

    void load_draw(std::uint64_t table, std::uint64_t slot, DrawScratch& d) const {
        Rng rng(derive_seed(seed_, table, slot, kLaneFunctions));
        base_.load_draws(rng, 1, d.base);
    }

    void point_symbols(const DrawScratch& d, const Point& x, Symbol* out) const {
        out[0] = base_.point_symbol(d.base, 0, x);
    }

    void query_symbols(const DrawScratch& d, const Point& q, Symbol* out) const {
        out[0] = base_.query_symbol(d.base, 0, q);
    }

private:
    SimpleAlshBase base_;
    std::uint64_t seed_;
};

/// Result of turning a weighted geometric query into an unweighted one.
struct WeightedExpansion {
    std::vector<std::size_t> multiplicities;  // element i repeated m * w_i times
    std::int64_t m = 1;                       // lcm of the weight denominators
    std::size_t k_prime = 0;                  // expanded size, m * sum(w)
    double threshold_m = 0.0;                 // S^m
    double c_m = 0.0;                         // c^m
};

/// Lifts an (S, cS) weighted geometric problem to the (S^m, c^m S^m)
/// geometric problem over the expanded multi-set. Throws when the expansion
/// exceeds `multiplicity_cap` (the lcm of fine rational weights is
/// unbounded; the cap turns that into a reportable error).
inline WeightedExpansion weighted_expand(const std::vector<Rational>& weights, double S,
                                         double c, std::size_t multiplicity_cap = 4096) {
    if (weights.empty()) throw std::invalid_argument("weighted expand: no weights");
    WeightedExpansion out;
    out.m = 1;
    bool any_positive = false;
    for (const auto& w : weights) {
        if (!w.is_zero()) any_positive = true;
        out.m = checked_lcm(out.m, w.denominator());
    }
    if (!any_positive)
        throw std::invalid_argument("weighted expand: all weights are zero");
    out.multiplicities.reserve(weights.size());
    for (const auto& w : weights) {
        const std::int64_t reps = w.numerator() * (out.m / w.denominator());
        out.multiplicities.push_back(static_cast<std::size_t>(reps));
        out.k_prime += static_cast<std::size_t>(reps);
    }
    if (out.k_prime > multiplicity_cap)
        throw std::invalid_argument(
            "weighted expand: expanded multiplicity " + std::to_string(out.k_prime) +
            " exceeds cap " + std::to_string(multiplicity_cap) +
            " (weights are too fine)");
    out.threshold_m = std::pow(S, static_cast<double>(out.m));
    out.c_m = std::pow(c, static_cast<double>(out.m));
    return out;
}

/// Applies an expansion to concrete query elements, in order.
template <class Elem>
std::vector<Elem> expand_elements(const std::vector<Elem>& elems,
                                  const WeightedExpansion& ex) {
    if (elems.size() != ex.multiplicities.size())
        throw std::invalid_argument("weighted expand: element count mismatch");
    std::vector<Elem> out;
    out.reserve(ex.k_prime);
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t r = 0; r < ex.multiplicities[i]; ++r) out.push_back(elems[i]);
    return out;
}

/// mu(Q) = (1/k) sum q_i. Convexity keeps the centroid in the unit ball, and
/// the average inner-product similarity of Q equals the inner-product
/// similarity of mu(Q).
inline Point centroid_transform(const SetQuery& q) {
    if (q.points.empty()) throw std::invalid_argument("centroid: empty set-query");
    Point mu(q.dim(), 0.0);
    for (const auto& p : q.points) {
        require_unit_ball(p, "centroid");
        if (p.size() != mu.size())
            throw std::invalid_argument("centroid: dimension mismatch");
        for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += p[i];
    }
    for (double& v : mu) v /= static_cast<double>(q.points.size());
    return mu;
}

}  // namespace slsh
