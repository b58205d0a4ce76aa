#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "slsh/plan.hpp"
#include "slsh/rng.hpp"

namespace slsh {

struct QueryMatch {
    std::uint32_t id = 0;
    double score = 0.0;
};

struct QueryStats {
    std::size_t inspected = 0;      // unique candidates verified
    std::size_t probed_tables = 0;  // tables whose bucket was non-empty
    bool cap_hit = false;
};

/// Worker count for parallel table builds: SLSH_THREADS, 0/unset = auto.
inline std::size_t worker_threads() {
    if (const char* env = std::getenv("SLSH_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Amplified multi-table structure over any function-pair family.
///
/// Each of the L tables keys its points by K concatenated draws of the
/// family. The K*arity symbol sequence is collapsed to a 64-bit key for the
/// bucket map; on a bucket hit the candidate's full sequence is recomputed
/// and compared, so mixing collisions never surface as candidates. Every
/// surfaced candidate is then verified against the true aggregated score
/// before it can be returned.
template <class Family>
class LshIndex {
public:
    using point_t = typename Family::point_t;
    using query_t = typename Family::query_t;

    struct Entry {
        std::uint64_t key;
        std::uint32_t id;
    };

    LshIndex(Family family, IndexParams params, std::vector<point_t> points)
        : family_(std::move(family)), params_(params), points_(std::move(points)) {
        params_.validate();
        if (points_.size() > UINT32_MAX)
            throw std::invalid_argument("index: dataset too large");
        build();
    }

    /// Restores a previously built index; `entries` must be the serialized
    /// table contents in table order.
    LshIndex(Family family, IndexParams params, std::vector<point_t> points,
             std::vector<Entry> entries)
        : family_(std::move(family)),
          params_(params),
          points_(std::move(points)),
          entries_(std::move(entries)) {
        params_.validate();
        if (entries_.size() != points_.size() * params_.tables)
            throw std::invalid_argument("index: table payload has wrong size");
    }

    const Family& family() const { return family_; }
    const IndexParams& params() const { return params_; }
    const std::vector<point_t>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    std::span<const Entry> table_entries(std::size_t t) const {
        return {entries_.data() + t * points_.size(), points_.size()};
    }
    std::span<const Entry> all_entries() const { return entries_; }

    /// Probes all tables and returns the first candidate whose exact score
    /// meets the bar; at most 4L candidates are inspected.
    template <class Scorer>
    std::optional<QueryMatch> query(const query_t& q, Scorer&& scorer,
                                    QueryStats* stats = nullptr) const {
        return run_query(q, scorer, stats, /*keep_best=*/false);
    }

    /// Same probe budget, but keeps inspecting and returns the best
    /// bar-passing candidate seen.
    template <class Scorer>
    std::optional<QueryMatch> query_best(const query_t& q, Scorer&& scorer,
                                         QueryStats* stats = nullptr) const {
        return run_query(q, scorer, stats, /*keep_best=*/true);
    }

private:
    void build() {
        const std::size_t n = points_.size();
        const std::size_t L = params_.tables;
        entries_.resize(n * L);
        if (n == 0) return;

        const std::size_t threads = std::min(worker_threads(), L);
        auto build_range = [&](std::size_t t0, std::size_t t1) {
            typename Family::DrawScratch scratch;
            std::vector<Symbol> symbols(family_.arity());
            std::vector<std::uint64_t> keys(n);
            for (std::size_t t = t0; t < t1; ++t) {
                std::fill(keys.begin(), keys.end(), kKeySeed);
                for (std::size_t slot = 0; slot < params_.concat; ++slot) {
                    family_.load_draw(t, slot, scratch);
                    for (std::size_t i = 0; i < n; ++i) {
                        family_.point_symbols(scratch, points_[i], symbols.data());
                        std::uint64_t k = keys[i];
                        for (Symbol s : symbols) k = combine_symbol(k, s);
                        keys[i] = k;
                    }
                }
                Entry* seg = entries_.data() + t * n;
                for (std::size_t i = 0; i < n; ++i)
                    seg[i] = Entry{keys[i], static_cast<std::uint32_t>(i)};
                std::sort(seg, seg + n, [](const Entry& a, const Entry& b) {
                    return a.key != b.key ? a.key < b.key : a.id < b.id;
                });
            }
        };

        if (threads <= 1) {
            build_range(0, L);
            return;
        }
        std::vector<std::thread> pool;
        const std::size_t chunk = (L + threads - 1) / threads;
        for (std::size_t w = 0; w < threads; ++w) {
            const std::size_t t0 = w * chunk;
            const std::size_t t1 = std::min(L, t0 + chunk);
            if (t0 >= t1) break;
            pool.emplace_back(build_range, t0, t1);
        }
        for (auto& th : pool) th.join();
    }

    template <class Scorer>
    std::optional<QueryMatch> run_query(const query_t& q, Scorer& scorer,
                                        QueryStats* stats, bool keep_best) const {
        QueryStats local;
        QueryStats& st = stats ? *stats : local;
        st = QueryStats{};
        const std::size_t n = points_.size();
        if (n == 0) return std::nullopt;

        const std::size_t arity = family_.arity();
        const std::size_t cap = 4 * params_.tables;
        std::vector<typename Family::DrawScratch> scratches(params_.concat);
        std::vector<Symbol> query_seq(params_.concat * arity);
        std::vector<Symbol> cand_seq(params_.concat * arity);
        std::vector<std::uint8_t> seen(n, 0);

        std::optional<QueryMatch> best;
        for (std::size_t t = 0; t < params_.tables; ++t) {
            std::uint64_t key = kKeySeed;
            for (std::size_t slot = 0; slot < params_.concat; ++slot) {
                family_.load_draw(t, slot, scratches[slot]);
                family_.query_symbols(scratches[slot], q,
                                      query_seq.data() + slot * arity);
                for (std::size_t j = 0; j < arity; ++j)
                    key = combine_symbol(key, query_seq[slot * arity + j]);
            }

            const auto seg = table_entries(t);
            auto lo = std::lower_bound(
                seg.begin(), seg.end(), key,
                [](const Entry& e, std::uint64_t k) { return e.key < k; });
            if (lo != seg.end() && lo->key == key) ++st.probed_tables;
            for (; lo != seg.end() && lo->key == key; ++lo) {
                const std::uint32_t id = lo->id;
                if (seen[id]) continue;
                seen[id] = 1;
                // Exact sequence comparison; a 64-bit mixing collision is
                // not a real candidate.
                for (std::size_t slot = 0; slot < params_.concat; ++slot)
                    family_.point_symbols(scratches[slot], points_[id],
                                          cand_seq.data() + slot * arity);
                if (cand_seq != query_seq) continue;
                if (st.inspected == cap) {
                    st.cap_hit = true;
                    return best;
                }
                ++st.inspected;
                const double score = scorer(q, points_[id]);
                if (params_.meets_bar(score)) {
                    if (!keep_best) return QueryMatch{id, score};
                    if (!best || params_.better(score, best->score))
                        best = QueryMatch{id, score};
                }
            }
        }
        return best;
    }

    static constexpr std::uint64_t kKeySeed = 0x736c736822ULL;

    Family family_;
    IndexParams params_;
    std::vector<point_t> points_;
    std::vector<Entry> entries_;
};

}  // namespace slsh
