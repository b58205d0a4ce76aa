#include "slsh/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "slsh/dataset.hpp"
#include "slsh/oracle.hpp"
#include "slsh/selftest.hpp"
#include "slsh/snapshot.hpp"

namespace slsh {

namespace {

using nlohmann::json;

// --- small parsers -----------------------------------------------------------

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(s);
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

Point parse_dense_element(const std::string& text) {
    Point p;
    for (const auto& f : split_on(text, ',')) {
        try {
            p.push_back(std::stod(f));
        } catch (const std::logic_error&) {
            throw DataError("query: malformed value '" + f + "'");
        }
    }
    if (p.empty()) throw DataError("query: empty vector");
    return p;
}

BitVector parse_bits_element(const std::string& text) {
    BitVector bv;
    for (char ch : text) {
        if (ch == '0' || ch == '1')
            bv.bits.push_back(static_cast<std::uint8_t>(ch - '0'));
        else if (ch != ' ')
            throw DataError("query: bit rows may contain only 0 and 1");
    }
    return bv;
}

TokenSet parse_tokens_element(const std::string& text) {
    TokenSet ts;
    for (const auto& f : split_on(text, ',')) {
        try {
            ts.tokens.push_back(std::stoull(f));
        } catch (const std::logic_error&) {
            throw DataError("query: malformed token '" + f + "'");
        }
    }
    std::sort(ts.tokens.begin(), ts.tokens.end());
    ts.tokens.erase(std::unique(ts.tokens.begin(), ts.tokens.end()), ts.tokens.end());
    return ts;
}

std::vector<Rational> parse_weights(const std::string& text) {
    std::vector<Rational> out;
    for (const auto& f : split_on(text, ',')) out.push_back(Rational::parse(f));
    if (out.empty()) throw std::invalid_argument("weights: empty list");
    return out;
}

/// Exact rational from a decimal or "a/b" literal ("0.25" -> 1/4).
Rational parse_rational_or_decimal(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational::parse(text);
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("threshold: too many decimals");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t w = whole.empty() ? 0 : std::stoll(whole);
    const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    if (w < 0) throw std::invalid_argument("threshold: must be non-negative");
    return Rational(w * den + f, den);
}

std::vector<std::string> read_query_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

// --- build -------------------------------------------------------------------

struct BuildFlags {
    std::string data;
    std::string format;
    std::string family;
    std::string mode;
    std::string threshold;
    double c = 0.0;
    std::size_t p = 1;
    std::size_t k = 0;
    std::string weights;
    double phi = 0.0;
    std::uint64_t seed = 0;
    double delta_fail = 0.05;
    std::string out;
};

std::optional<DatasetFormat> format_of(const std::string& name) {
    if (name.empty()) return std::nullopt;
    if (name == "csv") return DatasetFormat::Csv;
    if (name == "fvecs") return DatasetFormat::Fvecs;
    throw std::invalid_argument("unknown dataset format '" + name + "'");
}

const std::vector<Point>& dense_or_throw(const Dataset& ds, const std::string& mode) {
    if (ds.kind != ElementKind::Dense)
        throw std::invalid_argument("mode '" + mode + "' needs a dense dataset");
    return ds.dense;
}

template <class Base>
AnyStructure build_repeat(const BuildFlags& flags, const Dataset& ds,
                          std::vector<typename Base::point_t> points,
                          std::uint64_t domain, IndexMode mode) {
    typename RepeatStructure<Base>::Config config;
    config.domain = domain;
    config.p = flags.p;
    config.mode = mode;
    config.threshold = std::stod(flags.threshold);
    config.c = flags.c;
    config.seed = flags.seed;
    config.fail_prob = flags.delta_fail;
    (void)ds;
    return RepeatStructure<Base>(config, std::move(points));
}

template <class Base>
AnyStructure build_exhaustive(const BuildFlags& flags,
                              std::vector<typename Base::point_t> points,
                              std::uint64_t domain, std::vector<Rational> weights,
                              std::size_t k) {
    typename ExhaustiveStructure<Base>::Config config;
    config.domain = domain;
    config.k = k;
    config.weights = std::move(weights);
    config.threshold = std::stod(flags.threshold);
    config.c = flags.c;
    config.seed = flags.seed;
    config.fail_prob = flags.delta_fail;
    return ExhaustiveStructure<Base>(std::move(config), std::move(points));
}

AnyStructure build_structure(const BuildFlags& flags) {
    const Dataset ds = parse_dataset(flags.data, format_of(flags.format));
    const std::string& mode = flags.mode;
    const bool wants_weights = mode == "wgeo" || mode == "ellipsoid";
    if (!flags.weights.empty() && !wants_weights)
        throw std::invalid_argument("--weights only applies to wgeo and ellipsoid modes");
    if (flags.phi != 0.0 && mode != "center")
        throw std::invalid_argument("--phi only applies to center mode");

    auto require_family_base = [&](const char* expected) {
        if (!flags.family.empty() && flags.family != expected)
            throw std::invalid_argument("mode '" + mode + "' implies --family " + expected);
    };

    if (mode == "lp" || mode == "geometric" || mode == "wgeo") {
        if (flags.family.empty())
            throw std::invalid_argument("mode '" + mode +
                                        "' needs --family angular|hamming|jaccard");
        std::vector<Rational> weights;
        std::size_t k = flags.k;
        if (mode == "wgeo") {
            if (flags.weights.empty())
                throw std::invalid_argument("wgeo mode needs --weights");
            weights = parse_weights(flags.weights);
            k = weights.size();
        } else if (mode == "geometric") {
            if (k == 0) throw std::invalid_argument("geometric mode needs --k");
        }
        if (flags.family == "angular") {
            auto points = dense_or_throw(ds, mode);
            if (mode == "lp")
                return build_repeat<HyperplaneBase>(flags, ds, points, ds.dim,
                                                    IndexMode::Similarity);
            return build_exhaustive<HyperplaneBase>(flags, points, ds.dim,
                                                    std::move(weights), k);
        }
        if (flags.family == "hamming") {
            if (ds.kind != ElementKind::Bits)
                throw std::invalid_argument("hamming family needs a bits dataset");
            if (mode == "lp")
                return build_repeat<BitSampleBase>(flags, ds, ds.bits, ds.dim,
                                                   IndexMode::Similarity);
            return build_exhaustive<BitSampleBase>(flags, ds.bits, ds.dim,
                                                   std::move(weights), k);
        }
        if (flags.family == "jaccard") {
            if (ds.kind != ElementKind::Tokens)
                throw std::invalid_argument("jaccard family needs a tokens dataset");
            if (mode == "lp")
                return build_repeat<MinHashBase>(flags, ds, ds.tokens, ds.universe,
                                                 IndexMode::Similarity);
            return build_exhaustive<MinHashBase>(flags, ds.tokens, ds.universe,
                                                 std::move(weights), k);
        }
        throw std::invalid_argument("unknown family '" + flags.family + "'");
    }
    if (mode == "avg-angular") {
        require_family_base("angular");
        return build_repeat<HyperplaneBase>(flags, ds, dense_or_throw(ds, mode), ds.dim,
                                            IndexMode::Distance);
    }
    if (mode == "avg-ip") {
        require_family_base("ip");
        CentroidStructure::Config config;
        config.dim = ds.dim;
        config.threshold = std::stod(flags.threshold);
        config.c = flags.c;
        config.seed = flags.seed;
        config.fail_prob = flags.delta_fail;
        return CentroidStructure(config, dense_or_throw(ds, mode));
    }
    if (mode == "avg-euclid") {
        AvgEuclidStructure::Config config;
        config.dim = ds.dim;
        config.r = std::stod(flags.threshold);
        config.c = flags.c;
        config.seed = flags.seed;
        config.fail_prob = flags.delta_fail;
        return AvgEuclidStructure(config, dense_or_throw(ds, mode));
    }
    if (mode == "ellipsoid") {
        if (flags.weights.empty())
            throw std::invalid_argument("ellipsoid mode needs --weights (one per axis)");
        EllipsoidConfig config;
        config.dim = ds.dim;
        config.r = std::stod(flags.threshold);
        config.c = flags.c;
        config.weights = parse_weights(flags.weights);
        config.seed = flags.seed;
        config.fail_prob = flags.delta_fail;
        return EllipsoidStructure(std::move(config), dense_or_throw(ds, mode));
    }
    if (mode == "center") {
        if (flags.phi == 0.0) throw std::invalid_argument("center mode needs --phi");
        CenterConfig config;
        config.dim = ds.dim;
        config.r = parse_rational_or_decimal(flags.threshold);
        config.c = flags.c;
        config.phi = flags.phi;
        config.seed = flags.seed;
        config.fail_prob = flags.delta_fail;
        return CenterStructure(std::move(config), dense_or_throw(ds, mode));
    }
    throw std::invalid_argument("unknown mode '" + mode + "'");
}

// --- query -------------------------------------------------------------------

std::vector<Point> parse_dense_group(const std::string& line) {
    std::vector<Point> out;
    for (const auto& part : split_on(line, ';')) out.push_back(parse_dense_element(part));
    return out;
}

struct QueryOutcome {
    std::optional<QueryMatch> match;
    double bar = 0.0;
    std::string bar_kind;
};

QueryOutcome run_one_query(const AnyStructure& s, const std::string& line) {
    QueryOutcome out;
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, RepeatStructure<HyperplaneBase>> ||
                          std::is_same_v<T, ExhaustiveStructure<HyperplaneBase>>) {
                out.match = st.query(parse_dense_group(line));
                out.bar = st.config().c * st.config().threshold;
                out.bar_kind = "score";
            } else if constexpr (std::is_same_v<T, RepeatStructure<BitSampleBase>> ||
                                 std::is_same_v<T, ExhaustiveStructure<BitSampleBase>>) {
                std::vector<BitVector> q;
                for (const auto& part : split_on(line, ';'))
                    q.push_back(parse_bits_element(part));
                out.match = st.query(q);
                out.bar = st.config().c * st.config().threshold;
                out.bar_kind = "similarity";
            } else if constexpr (std::is_same_v<T, RepeatStructure<MinHashBase>> ||
                                 std::is_same_v<T, ExhaustiveStructure<MinHashBase>>) {
                std::vector<TokenSet> q;
                for (const auto& part : split_on(line, ';'))
                    q.push_back(parse_tokens_element(part));
                out.match = st.query(q);
                out.bar = st.config().c * st.config().threshold;
                out.bar_kind = "similarity";
            } else if constexpr (std::is_same_v<T, CentroidStructure>) {
                out.match = st.query(SetQuery(parse_dense_group(line)));
                out.bar = st.config().c * st.config().threshold;
                out.bar_kind = "similarity";
            } else if constexpr (std::is_same_v<T, AvgEuclidStructure>) {
                out.match = st.query(parse_dense_group(line));
                out.bar = st.config().c * st.config().r;
                out.bar_kind = "distance";
            } else if constexpr (std::is_same_v<T, EllipsoidStructure>) {
                auto group = parse_dense_group(line);
                if (group.size() < 2)
                    throw DataError("ellipsoid query needs 'center;axis1;...;axisd'");
                EuclideanEllipsoidQuery q;
                q.center = group.front();
                q.axes.assign(group.begin() + 1, group.end());
                out.match = st.query(q);
                out.bar = st.config().c * st.config().r;
                out.bar_kind = "distance";
            } else {
                static_assert(std::is_same_v<T, CenterStructure>);
                auto group = parse_dense_group(line);
                if (group.size() != 2) throw DataError("center query needs 'q1;q2'");
                out.match = st.query(group[0], group[1]);
                out.bar = st.config().c * st.config().r.value();
                out.bar_kind = "distance";
            }
        },
        s);
    return out;
}

int cmd_query(const std::string& index_path, const std::string& query_path,
              const std::string& report) {
    const AnyStructure s = load_snapshot(index_path);
    const auto lines = read_query_lines(query_path);
    json all = json::array();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto out = run_one_query(s, lines[i]);
        if (report == "json") {
            json rec{{"query", i}, {"bar", out.bar}, {"bar_kind", out.bar_kind}};
            if (out.match)
                rec["match"] = {{"id", out.match->id}, {"score", out.match->score}};
            else
                rec["match"] = nullptr;
            all.push_back(rec);
        } else {
            if (out.match)
                std::cout << "q" << i << ": id=" << out.match->id
                          << " score=" << out.match->score << " bar=" << out.bar << "\n";
            else
                std::cout << "q" << i << ": none\n";
        }
    }
    if (report == "json") std::cout << all.dump(2) << "\n";
    return 0;
}

// --- estimate ------------------------------------------------------------------

int cmd_estimate(const std::string& family, const std::string& mode, std::size_t p,
                 const std::string& query_path, std::size_t trials, std::uint64_t seed,
                 std::uint64_t universe) {
    const auto lines = read_query_lines(query_path);
    if (lines.size() < 2)
        throw DataError("estimate needs a query file with a set-query line and a point line");

    double analytic = 0.0;
    CollisionEstimate est;
    if (family == "angular") {
        const auto q = parse_dense_group(lines[0]);
        const auto x = parse_dense_element(lines[1]);
        const std::size_t dim = x.size();
        if (mode == "lp") {
            RepeatSlsh<HyperplaneBase> fam(HyperplaneBase(dim), p, seed);
            est = estimate_collision_probability(fam, q, x, trials);
            analytic = lp_set_similarity(SimilarityKind::Angular, SetQuery(q), x,
                                         static_cast<int>(p));
        } else {
            ExhaustiveSlsh<HyperplaneBase> fam(HyperplaneBase(dim), q.size(), seed);
            est = estimate_collision_probability(fam, q, x, trials);
            analytic = geometric_set_similarity(SimilarityKind::Angular, SetQuery(q), x);
        }
    } else if (family == "hamming") {
        std::vector<BitVector> q;
        for (const auto& part : split_on(lines[0], ';')) q.push_back(parse_bits_element(part));
        const auto x = parse_bits_element(lines[1]);
        std::vector<double> sims;
        for (const auto& qi : q) sims.push_back(hamming_similarity(qi, x));
        if (mode == "lp") {
            RepeatSlsh<BitSampleBase> fam(BitSampleBase(x.size()), p, seed);
            est = estimate_collision_probability(fam, q, x, trials);
            analytic = aggregate_similarity(Aggregation::Lp, sims, static_cast<int>(p));
        } else {
            ExhaustiveSlsh<BitSampleBase> fam(BitSampleBase(x.size()), q.size(), seed);
            est = estimate_collision_probability(fam, q, x, trials);
            analytic = aggregate_similarity(Aggregation::Geometric, sims);
        }
    } else if (family == "jaccard") {
        std::vector<TokenSet> q;
        for (const auto& part : split_on(lines[0], ';'))
            q.push_back(parse_tokens_element(part));
        const auto x = parse_tokens_element(lines[1]);
        std::uint64_t top = universe;
        if (top == 0) {
            for (const auto& s : q)
                for (auto t : s.tokens) top = std::max(top, t + 1);
            for (auto t : x.tokens) top = std::max(top, t + 1);
        }
        std::vector<double> sims;
        for (const auto& qi : q) sims.push_back(jaccard_similarity(qi, x));
        if (mode == "lp") {
            RepeatSlsh<MinHashBase> fam(MinHashBase(top), p, seed);
            est = estimate_collision_probability(fam, q, x, trials);
            analytic = aggregate_similarity(Aggregation::Lp, sims, static_cast<int>(p));
        } else {
            ExhaustiveSlsh<MinHashBase> fam(MinHashBase(top), q.size(), seed);
            est = estimate_collision_probability(fam, q, x, trials);
            analytic = aggregate_similarity(Aggregation::Geometric, sims);
        }
    } else {
        throw std::invalid_argument("estimate: unknown family '" + family + "'");
    }

    json rec{{"p_hat", est.p_hat},
             {"trials", est.trials},
             {"half_width_3sigma", est.half_width()},
             {"analytic", analytic},
             {"within_band", est.contains(analytic)}};
    std::cout << rec.dump(2) << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"set-query locality-sensitive hashing toolkit"};
    app.require_subcommand(1);

    BuildFlags flags;
    auto* build = app.add_subcommand("build", "build an index from a dataset");
    build->add_option("--data", flags.data, "dataset file")->required();
    build->add_option("--format", flags.format, "csv|fvecs (default: by extension)");
    build->add_option("--family", flags.family, "angular|hamming|jaccard|ip");
    build->add_option("--mode", flags.mode,
                      "lp|geometric|wgeo|avg-ip|avg-angular|avg-euclid|ellipsoid|center")
        ->required();
    build->add_option("--threshold", flags.threshold, "S (similarity) or r (distance)")
        ->required();
    build->add_option("--c", flags.c, "approximation factor")->required();
    build->add_option("--p", flags.p, "l_p exponent (lp mode)");
    build->add_option("--k", flags.k, "set-query size (geometric mode)");
    build->add_option("--weights", flags.weights, "comma-separated rationals");
    build->add_option("--phi", flags.phi, "query separation margin (center mode)");
    build->add_option("--seed", flags.seed, "master seed");
    build->add_option("--delta-fail", flags.delta_fail, "per-query failure probability");
    build->add_option("--out", flags.out, "snapshot output path")->required();

    std::string index_path, query_path, report = "text";
    auto* query = app.add_subcommand("query", "query a saved index");
    query->add_option("--index", index_path, "snapshot path")->required();
    query->add_option("--query-file", query_path, "one query per line")->required();
    query->add_option("--report", report, "text|json");

    std::string est_family, est_mode = "lp", est_query;
    std::size_t est_p = 1, est_trials = 100000;
    std::uint64_t est_seed = 0, est_universe = 0;
    auto* estimate = app.add_subcommand("estimate", "collision-probability experiment");
    estimate->add_option("--family", est_family, "angular|hamming|jaccard")->required();
    estimate->add_option("--mode", est_mode, "lp|geometric");
    estimate->add_option("--p", est_p, "l_p exponent");
    estimate->add_option("--query-file", est_query,
                         "line 1: set-query, line 2: point")
        ->required();
    estimate->add_option("--trials", est_trials, "number of draws");
    estimate->add_option("--seed", est_seed, "master seed");
    estimate->add_option("--universe", est_universe, "token universe (jaccard)");

    std::uint64_t selftest_seed = 4242;
    auto* selftest = app.add_subcommand("selftest", "run the property suites");
    selftest->add_option("--seed", selftest_seed, "suite seed");

    std::vector<std::string> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("slsh");
    argv.insert(argv.end(), args.begin(), args.end());
    std::vector<char*> raw;
    raw.reserve(argv.size());
    for (auto& a : argv) raw.push_back(a.data());

    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (build->parsed()) {
            const AnyStructure s = build_structure(flags);
            save_snapshot(s, flags.out);
            std::cout << "built " << flags.mode << " index over "
                      << std::visit([](const auto& st) {
                             if constexpr (std::is_same_v<std::decay_t<decltype(st)>,
                                                          CenterStructure>)
                                 return st.points().size();
                             else if constexpr (std::is_same_v<std::decay_t<decltype(st)>,
                                                               EllipsoidStructure> ||
                                                std::is_same_v<std::decay_t<decltype(st)>,
                                                               AvgEuclidStructure>)
                                 return st.points().size();
                             else
                                 return st.index().points().size();
                         }, s)
                      << " points -> " << flags.out << "\n";
            return 0;
        }
        if (query->parsed()) return cmd_query(index_path, query_path, report);
        if (estimate->parsed())
            return cmd_estimate(est_family, est_mode, est_p, est_query, est_trials,
                                est_seed, est_universe);
        if (selftest->parsed()) {
            const auto results = run_selftest(selftest_seed);
            const bool ok = report_selftest(results, std::cout);
            return ok ? 0 : 3;
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace slsh
