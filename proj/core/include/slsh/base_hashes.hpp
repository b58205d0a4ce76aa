#pragma once

#include <cstdint>
#include <vector>

#include "slsh/metrics.hpp"
#include "slsh/rng.hpp"
#include "slsh/types.hpp"

namespace slsh {

using Symbol = std::uint64_t;

/// Base hash families. Each is a seedless sampler template: the caller owns
/// the stream (derived from a master seed and a draw address), sampling is a
/// `load_draws` that materializes `count` independent functions, and
/// `symbol` evaluates function j on an input. The same stream always yields
/// the same functions, which is what makes point side and query side agree.

/// sign(r . x) with gaussian r. Collision probability of a single draw is
/// the angular similarity of the inputs; sign(0) := +1.
class HyperplaneBase {
public:
    using point_t = Point;

    struct DrawState {
        std::vector<double> normals;  // count * dim, row per function
    };

    explicit HyperplaneBase(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw std::invalid_argument("hyperplane family: dim must be >= 1");
    }

    std::size_t dim() const { return dim_; }

    void load_draws(Rng& rng, std::size_t count, DrawState& state) const {
        state.normals.resize(count * dim_);
        for (double& v : state.normals) v = rng.next_gaussian();
    }

    Symbol symbol(const DrawState& state, std::size_t j, const Point& x) const {
        if (x.size() != dim_)
            throw std::invalid_argument("hyperplane family: dimension mismatch");
        const double* row = state.normals.data() + j * dim_;
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += row[i] * x[i];
        return s >= 0.0 ? 1 : 0;
    }

private:
    std::size_t dim_;
};

/// h(x) = x_i for a uniformly chosen coordinate. Collision probability is
/// the hamming similarity.
class BitSampleBase {
public:
    using point_t = BitVector;

    struct DrawState {
        std::vector<std::uint32_t> coords;
    };

    explicit BitSampleBase(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw std::invalid_argument("bit family: dim must be >= 1");
    }

    std::size_t dim() const { return dim_; }

    void load_draws(Rng& rng, std::size_t count, DrawState& state) const {
        state.coords.resize(count);
        for (auto& c : state.coords)
            c = static_cast<std::uint32_t>(rng.next_below(dim_));
    }

    Symbol symbol(const DrawState& state, std::size_t j, const BitVector& x) const {
        if (x.size() != dim_)
            throw std::invalid_argument("bit family: length mismatch");
        return x.bits[state.coords[j]];
    }

private:
    std::size_t dim_;
};

/// MinHash over a token universe. Permutations are realized as keyed
/// bijective mixing of the tokens (O(1) memory, no ties), and the emitted
/// symbol is the argmin token itself. Collision probability is the Jaccard
/// similarity.
class MinHashBase {
public:
    using point_t = TokenSet;

    struct DrawState {
        std::vector<std::uint64_t> keys;  // two per function
    };

    explicit MinHashBase(std::uint64_t universe) : universe_(universe) {
        if (universe == 0) throw std::invalid_argument("minhash family: empty universe");
    }

    std::uint64_t universe() const { return universe_; }

    void load_draws(Rng& rng, std::size_t count, DrawState& state) const {
        state.keys.resize(2 * count);
        for (auto& k : state.keys) k = rng.next_u64();
    }

    Symbol symbol(const DrawState& state, std::size_t j, const TokenSet& s) const {
        if (s.tokens.empty()) throw std::invalid_argument("minhash family: empty set");
        const std::uint64_t k1 = state.keys[2 * j];
        const std::uint64_t k2 = state.keys[2 * j + 1];
        std::uint64_t best_token = 0;
        std::uint64_t best_rank = ~0ULL;
        for (std::uint64_t t : s.tokens) {
            if (t >= universe_)
                throw std::invalid_argument("minhash family: token outside universe");
            const std::uint64_t rank = mix64(mix64(t ^ k1) + k2);
            if (rank < best_rank) {
                best_rank = rank;
                best_token = t;
            }
        }
        return best_token;
    }

private:
    std::uint64_t universe_;
};

/// The asymmetric inner-product pair: both sides append two auxiliary
/// coordinates that complete unit-ball inputs to unit vectors,
///   point side  (x ; sqrt(1-|x|^2) ; 0)
///   query side  (q ; 0 ; sqrt(1-|q|^2))
/// and hash with one shared hyperplane in dimension d+2, so the collision
/// probability is 1 - acos(q^T x)/pi.
class SimpleAlshBase {
public:
    using point_t = Point;

    struct DrawState {
        std::vector<double> normals;  // count * (dim + 2)
    };

    explicit SimpleAlshBase(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw std::invalid_argument("simple-alsh family: dim must be >= 1");
    }

    std::size_t dim() const { return dim_; }

    void load_draws(Rng& rng, std::size_t count, DrawState& state) const {
        state.normals.resize(count * (dim_ + 2));
        for (double& v : state.normals) v = rng.next_gaussian();
    }

    Symbol point_symbol(const DrawState& state, std::size_t j, const Point& x) const {
        return lifted_sign(state, j, x, /*aux_index=*/0);
    }

    Symbol query_symbol(const DrawState& state, std::size_t j, const Point& q) const {
        return lifted_sign(state, j, q, /*aux_index=*/1);
    }

private:
    Symbol lifted_sign(const DrawState& state, std::size_t j, const Point& x,
                       std::size_t aux_index) const {
        if (x.size() != dim_)
            throw std::invalid_argument("simple-alsh family: dimension mismatch");
        require_unit_ball(x, "simple-alsh family");
        const double* row = state.normals.data() + j * (dim_ + 2);
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += row[i] * x[i];
        double rem = 1.0 - squared_norm(x);
        if (rem < 0.0) rem = 0.0;
        s += row[dim_ + aux_index] * std::sqrt(rem);
        return s >= 0.0 ? 1 : 0;
    }

    std::size_t dim_;
};

}  // namespace slsh
