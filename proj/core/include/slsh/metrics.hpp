#pragma once

#include <optional>
#include <span>
#include <vector>

#include "slsh/types.hpp"

namespace slsh {

// ---------------------------------------------------------------------------
// Point-to-point kernels
// ---------------------------------------------------------------------------

/// Angle between two nonzero vectors, in [0, pi]. Uses the chord formula
/// 2*atan2(|u-v|, |u+v|) on the normalized inputs, which stays accurate for
/// nearly parallel and nearly antipodal pairs where acos loses digits.
double angular_distance(const Point& x, const Point& y);

/// 1 - angle/pi, in [0, 1].
double angular_similarity(const Point& x, const Point& y);

/// x^T y for unit-ball operands. Rejects inputs outside the unit ball so the
/// result cannot exceed 1; antipodal-leaning inputs may still go negative.
double inner_product_similarity(const Point& x, const Point& y);

/// Fraction of agreeing positions.
double hamming_similarity(const BitVector& x, const BitVector& y);

/// |S ∩ T| / |S ∪ T|; two empty sets compare as identical (similarity 1).
double jaccard_similarity(const TokenSet& s, const TokenSet& t);

enum class SimilarityKind { Angular, InnerProduct, Hamming, Jaccard };
enum class DistanceKind { Angular, Euclidean };

double p2p_similarity(SimilarityKind kind, const Point& x, const Point& y);
double p2p_distance(DistanceKind kind, const Point& x, const Point& y);

// ---------------------------------------------------------------------------
// Set-to-point aggregations
// ---------------------------------------------------------------------------

enum class Aggregation { Lp, Geometric, WeightedGeometric, Center, Average };

/// Aggregates per-point similarity values in [0, 1].
///   lp                 (1/k) * sum v_i^p        (p a positive integer)
///   geometric          prod v_i
///   weighted_geometric prod v_i^{w_i}           (0^0 := 1)
///   center             min v_i
///   average            lp with p = 1
double aggregate_similarity(Aggregation mode, std::span<const double> values,
                            int p = 1, std::span<const Rational> weights = {});

/// Aggregates per-point distance values >= 0.
///   lp        (1/k) * sum d_i^p
///   geometric prod d_i
///   center    max d_i
///   average   lp with p = 1
double aggregate_distance(Aggregation mode, std::span<const double> values, int p = 1);

// ---------------------------------------------------------------------------
// Set-query conveniences used by index scorers and oracles
// ---------------------------------------------------------------------------

/// (1/k) * sum s(q_i, x)^p over an angular/IP kernel.
double lp_set_similarity(SimilarityKind kind, const SetQuery& q, const Point& x, int p);

/// prod s(q_i, x), optionally weighted by q.weights.
double geometric_set_similarity(SimilarityKind kind, const SetQuery& q, const Point& x,
                                bool weighted = false);

/// (1/k) * sum d(q_i, x)^p.
double lp_set_distance(DistanceKind kind, const SetQuery& q, const Point& x, int p);

/// max_i d(q_i, x).
double center_set_distance(DistanceKind kind, const SetQuery& q, const Point& x);

}  // namespace slsh
