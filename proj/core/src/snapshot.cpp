#include "slsh/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace slsh {

namespace {

// --- byte buffer helpers ----------------------------------------------------

struct Writer {
    std::string bytes;

    void u8(std::uint8_t v) { bytes.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
};

struct Reader {
    const std::string& bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes.size()) throw DataError("snapshot: truncated payload");
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(bytes[pos++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[pos++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes[pos++])) << (8 * i);
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }
};

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// --- field (de)serializers ---------------------------------------------------

void put_rational(Writer& w, const Rational& r) {
    w.i64(r.numerator());
    w.i64(r.denominator());
}
Rational get_rational(Reader& r) {
    const std::int64_t num = r.i64();
    const std::int64_t den = r.i64();
    return Rational(num, den);
}

void put_rationals(Writer& w, const std::vector<Rational>& rs) {
    w.u64(rs.size());
    for (const auto& r : rs) put_rational(w, r);
}
std::vector<Rational> get_rationals(Reader& r) {
    std::vector<Rational> out(r.u64());
    for (auto& v : out) v = get_rational(r);
    return out;
}

void put_dense(Writer& w, const std::vector<Point>& pts) {
    w.u64(pts.size());
    w.u64(pts.empty() ? 0 : pts.front().size());
    for (const auto& p : pts)
        for (double v : p) w.f64(v);
}
std::vector<Point> get_dense(Reader& r) {
    const std::uint64_t n = r.u64();
    const std::uint64_t d = r.u64();
    std::vector<Point> out(n, Point(d));
    for (auto& p : out)
        for (auto& v : p) v = r.f64();
    return out;
}

void put_bits(Writer& w, const std::vector<BitVector>& pts) {
    w.u64(pts.size());
    w.u64(pts.empty() ? 0 : pts.front().size());
    for (const auto& p : pts)
        for (auto b : p.bits) w.u8(b);
}
std::vector<BitVector> get_bits(Reader& r) {
    const std::uint64_t n = r.u64();
    const std::uint64_t d = r.u64();
    std::vector<BitVector> out(n);
    for (auto& p : out) {
        p.bits.resize(d);
        for (auto& b : p.bits) b = r.u8();
    }
    return out;
}

void put_tokens(Writer& w, const std::vector<TokenSet>& pts) {
    w.u64(pts.size());
    for (const auto& p : pts) {
        w.u64(p.tokens.size());
        for (auto t : p.tokens) w.u64(t);
    }
}
std::vector<TokenSet> get_tokens(Reader& r) {
    std::vector<TokenSet> out(r.u64());
    for (auto& p : out) {
        p.tokens.resize(r.u64());
        for (auto& t : p.tokens) t = r.u64();
    }
    return out;
}

template <class Entry>
void put_entries(Writer& w, std::span<const Entry> entries) {
    w.u64(entries.size());
    for (const auto& e : entries) {
        w.u64(e.key);
        w.u32(e.id);
    }
}
template <class Entry>
std::vector<Entry> get_entries(Reader& r) {
    std::vector<Entry> out(r.u64());
    for (auto& e : out) {
        e.key = r.u64();
        e.id = r.u32();
    }
    return out;
}

// --- per-kind payloads --------------------------------------------------------

enum class Kind : std::uint8_t {
    RepeatAngular = 0,
    RepeatHamming = 1,
    RepeatJaccard = 2,
    ExhaustiveAngular = 3,
    ExhaustiveHamming = 4,
    ExhaustiveJaccard = 5,
    CentroidIp = 6,
    AvgEuclid = 7,
    Ellipsoid = 8,
    CenterEuclid = 9,
};

template <class Base>
void put_points(Writer& w, const std::vector<typename Base::point_t>& pts) {
    if constexpr (std::is_same_v<typename Base::point_t, Point>) put_dense(w, pts);
    else if constexpr (std::is_same_v<typename Base::point_t, BitVector>) put_bits(w, pts);
    else put_tokens(w, pts);
}

template <class Base>
std::vector<typename Base::point_t> get_points(Reader& r) {
    if constexpr (std::is_same_v<typename Base::point_t, Point>) return get_dense(r);
    else if constexpr (std::is_same_v<typename Base::point_t, BitVector>) return get_bits(r);
    else return get_tokens(r);
}

template <class Base>
void put_repeat(Writer& w, const RepeatStructure<Base>& s) {
    const auto& c = s.config();
    w.u64(c.domain);
    w.u64(c.p);
    w.u8(c.mode == IndexMode::Similarity ? 0 : 1);
    w.f64(c.threshold);
    w.f64(c.c);
    w.u64(c.seed);
    w.f64(c.fail_prob);
    put_points<Base>(w, s.index().points());
    put_entries(w, s.index().all_entries());
}

template <class Base>
RepeatStructure<Base> get_repeat(Reader& r) {
    typename RepeatStructure<Base>::Config c;
    c.domain = r.u64();
    c.p = r.u64();
    c.mode = r.u8() == 0 ? IndexMode::Similarity : IndexMode::Distance;
    c.threshold = r.f64();
    c.c = r.f64();
    c.seed = r.u64();
    c.fail_prob = r.f64();
    auto points = get_points<Base>(r);
    auto entries = get_entries<typename RepeatStructure<Base>::Index::Entry>(r);
    return RepeatStructure<Base>(c, std::move(points), std::move(entries));
}

template <class Base>
void put_exhaustive(Writer& w, const ExhaustiveStructure<Base>& s) {
    const auto& c = s.config();
    w.u64(c.domain);
    w.u64(c.k);
    put_rationals(w, c.weights);
    w.f64(c.threshold);
    w.f64(c.c);
    w.u64(c.seed);
    w.f64(c.fail_prob);
    w.u64(c.multiplicity_cap);
    put_points<Base>(w, s.index().points());
    put_entries(w, s.index().all_entries());
}

template <class Base>
ExhaustiveStructure<Base> get_exhaustive(Reader& r) {
    typename ExhaustiveStructure<Base>::Config c;
    c.domain = r.u64();
    c.k = r.u64();
    c.weights = get_rationals(r);
    c.threshold = r.f64();
    c.c = r.f64();
    c.seed = r.u64();
    c.fail_prob = r.f64();
    c.multiplicity_cap = r.u64();
    auto points = get_points<Base>(r);
    auto entries = get_entries<typename ExhaustiveStructure<Base>::Index::Entry>(r);
    return ExhaustiveStructure<Base>(std::move(c), std::move(points), std::move(entries));
}

}  // namespace

void save_snapshot(const AnyStructure& structure, const std::string& path) {
    Writer w;
    w.u32(kSnapshotVersion);
    std::visit(
        [&w](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RepeatStructure<HyperplaneBase>>) {
                w.u8(static_cast<std::uint8_t>(Kind::RepeatAngular));
                put_repeat(w, s);
            } else if constexpr (std::is_same_v<T, RepeatStructure<BitSampleBase>>) {
                w.u8(static_cast<std::uint8_t>(Kind::RepeatHamming));
                put_repeat(w, s);
            } else if constexpr (std::is_same_v<T, RepeatStructure<MinHashBase>>) {
                w.u8(static_cast<std::uint8_t>(Kind::RepeatJaccard));
                put_repeat(w, s);
            } else if constexpr (std::is_same_v<T, ExhaustiveStructure<HyperplaneBase>>) {
                w.u8(static_cast<std::uint8_t>(Kind::ExhaustiveAngular));
                put_exhaustive(w, s);
            } else if constexpr (std::is_same_v<T, ExhaustiveStructure<BitSampleBase>>) {
                w.u8(static_cast<std::uint8_t>(Kind::ExhaustiveHamming));
                put_exhaustive(w, s);
            } else if constexpr (std::is_same_v<T, ExhaustiveStructure<MinHashBase>>) {
                w.u8(static_cast<std::uint8_t>(Kind::ExhaustiveJaccard));
                put_exhaustive(w, s);
            } else if constexpr (std::is_same_v<T, CentroidStructure>) {
                w.u8(static_cast<std::uint8_t>(Kind::CentroidIp));
                const auto& c = s.config();
                w.u64(c.dim);
                w.f64(c.threshold);
                w.f64(c.c);
                w.u64(c.seed);
                w.f64(c.fail_prob);
                put_dense(w, s.index().points());
                put_entries(w, s.index().all_entries());
            } else if constexpr (std::is_same_v<T, AvgEuclidStructure>) {
                w.u8(static_cast<std::uint8_t>(Kind::AvgEuclid));
                const auto& c = s.config();
                w.u64(c.dim);
                w.f64(c.r);
                w.f64(c.c);
                w.u64(c.seed);
                w.f64(c.fail_prob);
                put_dense(w, s.points());
                put_entries(w, s.inner().index().all_entries());
            } else if constexpr (std::is_same_v<T, EllipsoidStructure>) {
                w.u8(static_cast<std::uint8_t>(Kind::Ellipsoid));
                const auto& c = s.config();
                w.u64(c.dim);
                w.f64(c.r);
                w.f64(c.c);
                put_rationals(w, c.weights);
                w.u64(c.seed);
                w.f64(c.fail_prob);
                w.u64(c.multiplicity_cap);
                w.u64(c.max_tables);
                put_dense(w, s.points());
                put_entries(w, s.inner().all_entries());
            } else {
                static_assert(std::is_same_v<T, CenterStructure>);
                w.u8(static_cast<std::uint8_t>(Kind::CenterEuclid));
                const auto& c = s.config();
                w.u64(c.dim);
                put_rational(w, c.r);
                w.f64(c.c);
                w.f64(c.phi);
                w.u64(c.seed);
                w.f64(c.fail_prob);
                w.u64(c.multiplicity_cap);
                w.u64(c.max_tables);
                w.u64(c.max_structures);
                put_dense(w, s.points());
            }
        },
        structure);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path + ": cannot open for writing");
    out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
    out.write(w.bytes.data(), static_cast<std::streamsize>(w.bytes.size()));
    const std::uint64_t checksum = fnv1a(w.bytes);
    Writer tail;
    tail.u64(checksum);
    out.write(tail.bytes.data(), 8);
    if (!out) throw DataError(path + ": write failed");
}

AnyStructure load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (all.size() < sizeof(kSnapshotMagic) + 4 + 1 + 8)
        throw DataError(path + ": not a snapshot");
    if (std::memcmp(all.data(), kSnapshotMagic, sizeof(kSnapshotMagic)) != 0)
        throw DataError(path + ": bad magic");
    const std::string payload = all.substr(4, all.size() - 12);
    const std::string tail_bytes = all.substr(all.size() - 8);
    Reader tail{tail_bytes};
    if (fnv1a(payload) != tail.u64())
        throw DataError(path + ": checksum mismatch");

    Reader r{payload};
    const std::uint32_t version = r.u32();
    if (version != kSnapshotVersion)
        throw DataError(path + ": snapshot version " + std::to_string(version) +
                        " is not supported (expected " +
                        std::to_string(kSnapshotVersion) + ")");
    const auto kind = static_cast<Kind>(r.u8());
    switch (kind) {
        case Kind::RepeatAngular: return get_repeat<HyperplaneBase>(r);
        case Kind::RepeatHamming: return get_repeat<BitSampleBase>(r);
        case Kind::RepeatJaccard: return get_repeat<MinHashBase>(r);
        case Kind::ExhaustiveAngular: return get_exhaustive<HyperplaneBase>(r);
        case Kind::ExhaustiveHamming: return get_exhaustive<BitSampleBase>(r);
        case Kind::ExhaustiveJaccard: return get_exhaustive<MinHashBase>(r);
        case Kind::CentroidIp: {
            CentroidStructure::Config c;
            c.dim = r.u64();
            c.threshold = r.f64();
            c.c = r.f64();
            c.seed = r.u64();
            c.fail_prob = r.f64();
            auto points = get_dense(r);
            auto entries = get_entries<CentroidStructure::Index::Entry>(r);
            return CentroidStructure(c, std::move(points), std::move(entries));
        }
        case Kind::AvgEuclid: {
            AvgEuclidStructure::Config c;
            c.dim = r.u64();
            c.r = r.f64();
            c.c = r.f64();
            c.seed = r.u64();
            c.fail_prob = r.f64();
            auto points = get_dense(r);
            auto entries = get_entries<AvgEuclidStructure::Inner::Index::Entry>(r);
            return AvgEuclidStructure(c, std::move(points), std::move(entries));
        }
        case Kind::Ellipsoid: {
            EllipsoidConfig c;
            c.dim = r.u64();
            c.r = r.f64();
            c.c = r.f64();
            c.weights = get_rationals(r);
            c.seed = r.u64();
            c.fail_prob = r.f64();
            c.multiplicity_cap = r.u64();
            c.max_tables = r.u64();
            auto points = get_dense(r);
            auto entries = get_entries<EllipsoidStructure::InnerIndex::Entry>(r);
            return EllipsoidStructure(std::move(c), std::move(points), std::move(entries));
        }
        case Kind::CenterEuclid: {
            CenterConfig c;
            c.dim = r.u64();
            c.r = get_rational(r);
            c.c = r.f64();
            c.phi = r.f64();
            c.seed = r.u64();
            c.fail_prob = r.f64();
            c.multiplicity_cap = r.u64();
            c.max_tables = r.u64();
            c.max_structures = r.u64();
            auto points = get_dense(r);
            return CenterStructure(std::move(c), std::move(points));
        }
    }
    throw DataError(path + ": unknown structure kind");
}

}  // namespace slsh
