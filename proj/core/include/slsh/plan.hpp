#pragma once

#include <cstddef>
#include <cstdint>

namespace slsh {

enum class IndexMode { Similarity, Distance };

struct PlanResult {
    std::size_t concat = 1;  // K, functions concatenated per table
    std::size_t tables = 1;  // L
    double rho = 0.0;        // ln p1 / ln p2
};

/// Standard amplification plan for an (S, cS) / (r, cr) structure:
///   rho = ln p1 / ln p2
///   K   = ceil(ln n / ln(1/p2))          so p2^K <= 1/n
///   L   = ceil(n^rho / p1) * ceil(ln(1/delta))
/// which keeps the per-table hit rate of a planted neighbor at least
/// n^-rho * p1 and the overall miss probability at most delta.
PlanResult plan_params(std::size_t n, double p1, double p2, double delta);

struct IndexParams {
    IndexMode mode = IndexMode::Similarity;
    double threshold = 0.0;  // S (similarity) or r (distance)
    double c = 0.0;          // approximation: c < 1 for similarity, c > 1 for distance
    double p1 = 0.0;
    double p2 = 0.0;
    std::size_t concat = 1;   // K
    std::size_t tables = 1;   // L
    std::uint64_t seed = 0;
    double fail_prob = 0.05;  // delta

    /// Exact acceptance bar used when verifying candidates.
    bool meets_bar(double score) const {
        return mode == IndexMode::Similarity ? score >= c * threshold
                                             : score <= c * threshold;
    }

    /// True when `a` scores better than `b` under this mode.
    bool better(double a, double b) const {
        return mode == IndexMode::Similarity ? a > b : a < b;
    }

    void validate() const;

    /// Fills K, L via plan_params for a dataset of size n.
    static IndexParams plan(IndexMode mode, double threshold, double c, double p1,
                            double p2, std::size_t n, std::uint64_t seed,
                            double fail_prob);
};

}  // namespace slsh
