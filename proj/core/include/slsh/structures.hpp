#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "slsh/index.hpp"
#include "slsh/lift.hpp"
#include "slsh/metrics.hpp"
#include "slsh/slsh_families.hpp"

namespace slsh {

/// Per-base glue: the similarity each achievable base family realizes, and
/// the single integer describing its domain (dimension or token universe).
template <class Base>
struct base_traits;

template <>
struct base_traits<HyperplaneBase> {
    static constexpr const char* name = "angular";
    static double similarity(const Point& a, const Point& b) {
        return angular_similarity(a, b);
    }
    static HyperplaneBase make(std::uint64_t domain) {
        return HyperplaneBase(static_cast<std::size_t>(domain));
    }
    static std::uint64_t domain(const HyperplaneBase& b) { return b.dim(); }
};

template <>
struct base_traits<BitSampleBase> {
    static constexpr const char* name = "hamming";
    static double similarity(const BitVector& a, const BitVector& b) {
        return hamming_similarity(a, b);
    }
    static BitSampleBase make(std::uint64_t domain) {
        return BitSampleBase(static_cast<std::size_t>(domain));
    }
    static std::uint64_t domain(const BitSampleBase& b) { return b.dim(); }
};

template <>
struct base_traits<MinHashBase> {
    static constexpr const char* name = "jaccard";
    static double similarity(const TokenSet& a, const TokenSet& b) {
        return jaccard_similarity(a, b);
    }
    static MinHashBase make(std::uint64_t domain) { return MinHashBase(domain); }
    static std::uint64_t domain(const MinHashBase& b) { return b.universe(); }
};

/// Repeat-family structure. In similarity mode it is an (S, cS) index for
/// the l_p similarity of the base; in distance mode (angular base, p = 1,
/// collision probability 1 - r/pi) it is an (r, cr) index for the average
/// angular distance.
template <class Base>
class RepeatStructure {
public:
    using Family = RepeatSlsh<Base>;
    using Index = LshIndex<Family>;
    using point_t = typename Base::point_t;

    struct Config {
        std::uint64_t domain = 0;
        std::size_t p = 1;
        IndexMode mode = IndexMode::Similarity;
        double threshold = 0.0;
        double c = 0.0;
        std::uint64_t seed = 0;
        double fail_prob = 0.05;
    };

    RepeatStructure(Config config, std::vector<point_t> points)
        : config_(config),
          index_(make_family(config), plan(config, points.size()), std::move(points)) {}

    RepeatStructure(Config config, std::vector<point_t> points,
                    std::vector<typename Index::Entry> entries)
        : config_(config),
          index_(make_family(config), plan(config, points.size()), std::move(points),
                 std::move(entries)) {}

    /// Exact verified objective: s_p in similarity mode, average angular
    /// distance in distance mode.
    double score(const std::vector<point_t>& q, const point_t& x) const {
        if (config_.mode == IndexMode::Similarity) {
            double s = 0.0;
            for (const auto& qi : q) {
                double v = base_traits<Base>::similarity(qi, x);
                double acc = 1.0;
                for (std::size_t t = 0; t < config_.p; ++t) acc *= v;
                s += acc;
            }
            return s / static_cast<double>(q.size());
        }
        if constexpr (std::is_same_v<Base, HyperplaneBase>) {
            double s = 0.0;
            for (const auto& qi : q) s += angular_distance(qi, x);
            return s / static_cast<double>(q.size());
        } else {
            throw std::invalid_argument("repeat structure: distance mode needs the angular base");
        }
    }

    std::optional<QueryMatch> query(const std::vector<point_t>& q,
                                    QueryStats* stats = nullptr) const {
        return index_.query(q, [this](const auto& qq, const point_t& x) {
            return score(qq, x);
        }, stats);
    }

    const Config& config() const { return config_; }
    const Index& index() const { return index_; }

    /// Analytic collision probabilities at the two thresholds.
    static std::pair<double, double> collision_probs(const Config& c) {
        if (c.mode == IndexMode::Similarity) return {c.threshold, c.c * c.threshold};
        return {1.0 - c.threshold / M_PI, 1.0 - c.c * c.threshold / M_PI};
    }

private:
    static Family make_family(const Config& c) {
        return Family(base_traits<Base>::make(c.domain), c.p, c.seed);
    }
    static IndexParams plan(const Config& c, std::size_t n) {
        if (c.mode == IndexMode::Distance && !std::is_same_v<Base, HyperplaneBase>)
            throw std::invalid_argument(
                "repeat structure: distance mode needs the angular base");
        if (c.mode == IndexMode::Distance && c.p != 1)
            throw std::invalid_argument("repeat structure: distance mode requires p = 1");
        const auto [p1, p2] = collision_probs(c);
        if (!(p2 > 0.0))
            throw std::invalid_argument("repeat structure: c * r must stay below pi");
        return IndexParams::plan(c.mode, c.threshold, c.c, p1, p2, n, c.seed,
                                 c.fail_prob);
    }

    Config config_;
    Index index_;
};

/// Exhaustive-family structure for the geometric similarity, with optional
/// per-element rational weights (weighted queries are expanded to the
/// (S^m, c^m S^m) unweighted problem).
template <class Base>
class ExhaustiveStructure {
public:
    using Family = ExhaustiveSlsh<Base>;
    using Index = LshIndex<Family>;
    using point_t = typename Base::point_t;

    struct Config {
        std::uint64_t domain = 0;
        std::size_t k = 1;               // set-query size
        std::vector<Rational> weights;   // empty = unweighted
        double threshold = 0.0;          // S
        double c = 0.0;                  // c < 1
        std::uint64_t seed = 0;
        double fail_prob = 0.05;
        std::size_t multiplicity_cap = 4096;
    };

    ExhaustiveStructure(Config config, std::vector<point_t> points)
        : config_(std::move(config)), expansion_(make_expansion(config_)) {
        index_.emplace(make_family(config_, expansion_), plan(config_, expansion_, points.size()),
                       std::move(points));
    }

    ExhaustiveStructure(Config config, std::vector<point_t> points,
                        std::vector<typename Index::Entry> entries)
        : config_(std::move(config)), expansion_(make_expansion(config_)) {
        index_.emplace(make_family(config_, expansion_), plan(config_, expansion_, points.size()),
                       std::move(points), std::move(entries));
    }

    bool weighted() const { return !config_.weights.empty(); }

    /// Exact verified objective: s_geo, or s_wgeo when weighted.
    double score(const std::vector<point_t>& q, const point_t& x) const {
        double s = 1.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double v = base_traits<Base>::similarity(q[i], x);
            if (weighted()) {
                if (config_.weights[i].is_zero()) continue;
                s *= std::pow(v, config_.weights[i].value());
            } else {
                s *= v;
            }
        }
        return s;
    }

    std::optional<QueryMatch> query(const std::vector<point_t>& q,
                                    QueryStats* stats = nullptr) const {
        if (q.size() != config_.k)
            throw std::invalid_argument("exhaustive structure: set-query size != k");
        const std::vector<point_t>* probe = &q;
        std::vector<point_t> expanded;
        if (weighted()) {
            expanded = expand_elements(q, expansion_);
            probe = &expanded;
        }
        auto match = index_->query(
            *probe,
            [this](const std::vector<point_t>& qq, const point_t& x) {
                double s = 1.0;
                for (const auto& qi : qq) s *= base_traits<Base>::similarity(qi, x);
                return s;
            },
            stats);
        if (!match) return std::nullopt;
        if (weighted()) {
            // Report the weighted score; the expanded bar already verified
            // its m-th power.
            match->score = score(q, index_->points()[match->id]);
            if (match->score < config_.c * config_.threshold * (1.0 - 1e-12))
                return std::nullopt;
        }
        return match;
    }

    const Config& config() const { return config_; }
    const WeightedExpansion& expansion() const { return expansion_; }
    const Index& index() const { return *index_; }

private:
    static WeightedExpansion make_expansion(const Config& c) {
        if (!(c.threshold > 0.0 && c.c > 0.0 && c.c < 1.0))
            throw std::invalid_argument("exhaustive structure: need S > 0 and 0 < c < 1");
        if (c.weights.empty()) {
            WeightedExpansion ex;
            ex.multiplicities.assign(c.k, 1);
            ex.m = 1;
            ex.k_prime = c.k;
            ex.threshold_m = c.threshold;
            ex.c_m = c.c;
            return ex;
        }
        if (c.weights.size() != c.k)
            throw std::invalid_argument("exhaustive structure: one weight per element");
        return weighted_expand(c.weights, c.threshold, c.c, c.multiplicity_cap);
    }
    static Family make_family(const Config& c, const WeightedExpansion& ex) {
        return Family(base_traits<Base>::make(c.domain), ex.k_prime, c.seed);
    }
    static IndexParams plan(const Config& c, const WeightedExpansion& ex, std::size_t n) {
        return IndexParams::plan(IndexMode::Similarity, ex.threshold_m, ex.c_m,
                                 /*p1=*/ex.threshold_m, /*p2=*/ex.c_m * ex.threshold_m,
                                 n, c.seed, c.fail_prob);
    }

    Config config_;
    WeightedExpansion expansion_;
    std::optional<Index> index_;
};

/// Centroid reduction for the average inner-product similarity: queries
/// collapse to their centroid and the points live in a simple-ALSH index
/// with collision probability 1 - acos(q^T x)/pi.
class CentroidStructure {
public:
    using Index = LshIndex<SimpleAlshFamily>;

    struct Config {
        std::size_t dim = 0;
        double threshold = 0.0;  // S, in (0, 1]
        double c = 0.0;          // c < 1
        std::uint64_t seed = 0;
        double fail_prob = 0.05;
    };

    CentroidStructure(Config config, std::vector<Point> points)
        : config_(config),
          index_(SimpleAlshFamily(config.dim, config.seed), plan(config, points.size()),
                 std::move(points)) {}

    CentroidStructure(Config config, std::vector<Point> points,
                      std::vector<Index::Entry> entries)
        : config_(config),
          index_(SimpleAlshFamily(config.dim, config.seed), plan(config, points.size()),
                 std::move(points), std::move(entries)) {}

    std::optional<QueryMatch> query(const SetQuery& q, QueryStats* stats = nullptr) const {
        const Point mu = centroid_transform(q);
        return index_.query(mu, [](const Point& qq, const Point& x) {
            return inner_product_similarity(qq, x);
        }, stats);
    }

    const Config& config() const { return config_; }
    const Index& index() const { return index_; }

    static std::pair<double, double> collision_probs(const Config& c) {
        return {1.0 - std::acos(std::min(1.0, c.threshold)) / M_PI,
                1.0 - std::acos(std::min(1.0, c.c * c.threshold)) / M_PI};
    }

private:
    static IndexParams plan(const Config& c, std::size_t n) {
        if (!(c.threshold > 0.0 && c.threshold <= 1.0))
            throw std::invalid_argument("centroid structure: S must be in (0, 1]");
        const auto [p1, p2] = collision_probs(c);
        return IndexParams::plan(IndexMode::Similarity, c.threshold, c.c, p1, p2, n,
                                 c.seed, c.fail_prob);
    }

    Config config_;
    Index index_;
};

/// Average euclidean distance via shrink-lift: data is lifted onto the
/// sphere with the derived eps and stored in an (r', c'r') average angular
/// distance index; queries are lifted per call and winners re-verified
/// against the exact average euclidean distance.
class AvgEuclidStructure {
public:
    using Inner = RepeatStructure<HyperplaneBase>;

    struct Config {
        std::size_t dim = 0;
        double r = 0.0;
        double c = 0.0;  // > 1
        std::uint64_t seed = 0;
        double fail_prob = 0.05;
    };

    AvgEuclidStructure(Config config, std::vector<Point> points)
        : config_(config), params_(avg_euclid_slsh_params(config.r, config.c)) {
        if (params_.eps < 0.01) {
            // The shrink degenerates as c -> 1; surface it rather than guess
            // a cutoff.
            shrink_warning_ = true;
        }
        originals_ = std::move(points);
        inner_.emplace(inner_config(config_, params_), lift_all(originals_, config_, params_));
    }

    AvgEuclidStructure(Config config, std::vector<Point> points,
                       std::vector<Inner::Index::Entry> entries)
        : config_(config), params_(avg_euclid_slsh_params(config.r, config.c)) {
        shrink_warning_ = params_.eps < 0.01;
        originals_ = std::move(points);
        inner_.emplace(inner_config(config_, params_), lift_all(originals_, config_, params_),
                       std::move(entries));
    }

    std::optional<QueryMatch> query(const std::vector<Point>& q,
                                    QueryStats* stats = nullptr) const {
        std::vector<Point> lifted;
        lifted.reserve(q.size());
        for (const auto& qi : q) {
            if (qi.size() != config_.dim)
                throw std::invalid_argument("avg-euclid query: dimension mismatch");
            require_unit_ball(qi, "avg-euclid query");
            lifted.push_back(shrink_lift(qi, params_.eps));
        }
        auto match = inner_->query(lifted, stats);
        if (!match) return std::nullopt;
        double s = 0.0;
        for (const auto& qi : q) s += euclidean_distance(qi, originals_[match->id]);
        s /= static_cast<double>(q.size());
        if (s > config_.c * config_.r) return std::nullopt;  // cannot happen in exact math
        return QueryMatch{match->id, s};
    }

    const Config& config() const { return config_; }
    const AvgEuclidParams& lift_params() const { return params_; }
    bool shrink_warning() const { return shrink_warning_; }
    const Inner& inner() const { return *inner_; }
    const std::vector<Point>& points() const { return originals_; }

private:
    static Inner::Config inner_config(const Config& c, const AvgEuclidParams& p) {
        Inner::Config ic;
        ic.domain = c.dim + 1;
        ic.p = 1;
        ic.mode = IndexMode::Distance;
        ic.threshold = p.r_prime;
        ic.c = p.c_prime;
        ic.seed = c.seed;
        ic.fail_prob = c.fail_prob;
        return ic;
    }
    static std::vector<Point> lift_all(const std::vector<Point>& pts, const Config& c,
                                       const AvgEuclidParams& p) {
        std::vector<Point> lifted;
        lifted.reserve(pts.size());
        for (const auto& x : pts) {
            if (x.size() != c.dim)
                throw std::invalid_argument("avg-euclid: point dimension mismatch");
            require_unit_ball(x, "avg-euclid");
            lifted.push_back(shrink_lift(x, p.eps));
        }
        return lifted;
    }

    Config config_;
    AvgEuclidParams params_;
    bool shrink_warning_ = false;
    std::vector<Point> originals_;
    std::optional<Inner> inner_;
};

}  // namespace slsh
