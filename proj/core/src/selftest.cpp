#include "slsh/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slsh/center_euclidean.hpp"
#include "slsh/ellipsoid.hpp"
#include "slsh/lift.hpp"
#include "slsh/metrics.hpp"
#include "slsh/oracle.hpp"
#include "slsh/sampling.hpp"
#include "slsh/slsh_families.hpp"

namespace slsh {

namespace {

SelftestResult check_lift_identities(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 1));
    std::size_t violations = 0;
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t d = 2 + rng.next_below(6);
        const Point x = random_ball_point(rng, d);
        const Point y = random_ball_point(rng, d);
        const double eps = 1e-3 + 0.499 * rng.next_unit();
        const Point xu = shrink_lift(x, eps);
        const Point yu = shrink_lift(y, eps);
        const double angle = angular_distance(xu, yu);
        const double dist = euclidean_distance(x, y);
        const double err = error_term(eps, x, y);

        if (std::abs(squared_norm(xu) - 1.0) > 1e-12) ++violations;
        const double exact = 2.0 * std::asin(0.5 * eps * std::sqrt(dist * dist + err));
        worst = std::max(worst, std::abs(angle - exact));
        if (std::abs(angle - exact) > 1e-10) ++violations;
        if (angle < eps * dist - 1e-9) ++violations;
        if (angle > m_factor(eps) * eps * dist + 1e-9) ++violations;
        if (err < 0.0 || err > (4.0 / 3.0) * dist * dist * eps * eps + 1e-12) ++violations;
    }
    std::ostringstream detail;
    detail << "10000 samples, worst identity gap " << worst;
    return {"lift-identities", violations == 0, detail.str()};
}

SelftestResult check_inverse_sine(std::uint64_t) {
    std::size_t violations = 0;
    for (double x = 0.0; x <= 0.999; x += 1e-4) {
        const double a = std::asin(x);
        if (a < x - 1e-12 || a > x / std::sqrt(1.0 - x * x) + 1e-12) ++violations;
    }
    return {"inverse-sine-bound", violations == 0, "grid [0, 0.999] step 1e-4"};
}

SelftestResult check_parameter_guarantees(std::uint64_t) {
    std::size_t violations = 0;
    for (double c : {1.01, 1.1, 1.5, 2.0, 5.0, 10.0}) {
        const auto p = avg_euclid_slsh_params(1.0, c);
        if (!(p.c_prime > 1.0)) ++violations;
    }
    for (double c : {1.5, 2.0, 4.0, 16.0, 64.0, 256.0}) {
        const double sum_w = 5.0;
        const double eps = choose_epsilon(1.0, c, sum_w);
        const auto ang = euclid_to_angular_params(1.0, c, sum_w, eps);
        if (!(ang.c_prime > std::pow(c, 0.25))) ++violations;
    }
    const std::vector<Rational> w{{1, 1}, {1, 1}};
    for (double c : {1.1, 1.5, 2.0, 4.0, 10.0, 100.0}) {
        const auto wg = angular_to_wgeo_params(0.05, c, w);
        if (!(wg.c_prime < 1.0)) ++violations;
    }
    return {"parameter-guarantees", violations == 0, "grids of 6 values per bound"};
}

SelftestResult check_antipodal_law(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 2));
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const Point e = random_unit_vector(rng, 10);
        const Point x = random_unit_vector(rng, 10);
        Point neg(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) neg[i] = -e[i];
        const double lhs = angular_similarity(e, x) * angular_similarity(neg, x);
        const double theta = angular_axis_angle(e, x);
        const double rhs = 0.25 - theta * theta / (M_PI * M_PI);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    std::ostringstream detail;
    detail << "1000 samples, worst gap " << worst;
    return {"antipodal-product-law", worst <= 1e-12, detail.str()};
}

SelftestResult check_hierarchy(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 3));
    const double a = 3.6, r = 6.0, c = 1.35;
    std::size_t violations = 0;
    const double x_max = c * r - a;
    const double y_max = std::sqrt(c * r * c * r - a * a);
    for (int t = 0; t < 20000; ++t) {
        Point v{(2.0 * rng.next_unit() - 1.0) * x_max * 1.05,
                (2.0 * rng.next_unit() - 1.0) * y_max * 1.05};
        if (in_center_lens(v, a, r) && !in_small_ellipsoid(v, a, r, 1e-9)) ++violations;
        if (in_small_ellipsoid(v, a, r) && !in_big_ellipsoid(v, a, r, c, 1e-9)) ++violations;
        if (in_big_ellipsoid(v, a, r, c) && !in_center_lens(v, a, c * r, 1e-9)) ++violations;
    }
    for (int pair = 0; pair < 20; ++pair) {
        const double phi = 0.3 + 0.4 * rng.next_unit();
        const double aa = (1.0 - phi) * r * rng.next_unit();
        const double delta =
            std::min(0.5, 1.0 - std::sqrt(kCenterCMin / c)) * phi * r * rng.next_unit();
        if (delta <= 0.0) continue;
        const double aq = std::ceil(aa / delta) * delta;
        for (int t = 0; t < 500; ++t) {
            Point v{(2.0 * rng.next_unit() - 1.0) * r, (2.0 * rng.next_unit() - 1.0) * r};
            if (in_small_ellipsoid(v, aa, r) && !in_quantized_small(v, aq, r, c, 1e-9))
                ++violations;
            if (in_quantized_big(v, aq, r, c) && !in_big_ellipsoid(v, aa, r, c, 1e-9))
                ++violations;
        }
    }
    return {"ellipsoid-hierarchy", violations == 0, "20000 box samples + 20 quantized pairs"};
}

SelftestResult check_rigid_isometry(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 4));
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + rng.next_below(5);
        const Point q1 = random_ball_point(rng, d);
        const Point q2 = random_ball_point(rng, d);
        RigidTransform frame(q1, q2);
        const Point img1 = frame.apply(q1);
        const Point img2 = frame.apply(q2);
        worst = std::max(worst, std::abs(img1[0] - frame.half_separation()));
        worst = std::max(worst, std::abs(img2[0] + frame.half_separation()));
        for (std::size_t i = 1; i < d; ++i) {
            worst = std::max(worst, std::abs(img1[i]));
            worst = std::max(worst, std::abs(img2[i]));
        }
        for (int s = 0; s < 20; ++s) {
            const Point x = random_ball_point(rng, d);
            const Point y = random_ball_point(rng, d);
            worst = std::max(worst, std::abs(euclidean_distance(frame.apply(x), frame.apply(y)) -
                                             euclidean_distance(x, y)));
            const Point back = frame.inverse(frame.apply(x));
            worst = std::max(worst, euclidean_distance(back, x));
        }
    }
    std::ostringstream detail;
    detail << "100 frames, worst defect " << worst;
    return {"rigid-isometry", worst <= 1e-12, detail.str()};
}

SelftestResult check_weighted_identity(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 5));
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t k = 1 + rng.next_below(4);
        std::vector<Rational> weights;
        std::vector<Point> q;
        for (std::size_t i = 0; i < k; ++i) {
            weights.emplace_back(static_cast<std::int64_t>(rng.next_below(5)),
                                 static_cast<std::int64_t>(1 + rng.next_below(6)));
            q.push_back(random_unit_vector(rng, 6));
        }
        if (std::all_of(weights.begin(), weights.end(),
                        [](const Rational& w) { return w.is_zero(); }))
            weights[0] = Rational(1, 2);
        const Point x = random_unit_vector(rng, 6);
        const auto ex = weighted_expand(weights, 0.5, 0.5);
        const auto expanded = expand_elements(q, ex);
        double geo = 1.0;
        for (const auto& e : expanded) geo *= angular_similarity(e, x);
        double wgeo = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (weights[i].is_zero()) continue;
            wgeo *= std::pow(angular_similarity(q[i], x), weights[i].value());
        }
        worst = std::max(worst, std::abs(geo - std::pow(wgeo, static_cast<double>(ex.m))));
    }
    std::ostringstream detail;
    detail << "200 instances, worst gap " << worst;
    return {"weighted-identity", worst <= 1e-12, detail.str()};
}

SelftestResult check_centroid_identity(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 6));
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t k = 1 + rng.next_below(5);
        SetQuery q;
        for (std::size_t i = 0; i < k; ++i) q.points.push_back(random_ball_point(rng, 8));
        const Point x = random_ball_point(rng, 8);
        const Point mu = centroid_transform(q);
        double avg = 0.0;
        for (const auto& qi : q.points) avg += inner_product_similarity(qi, x);
        avg /= static_cast<double>(k);
        worst = std::max(worst, std::abs(avg - inner_product_similarity(mu, x)));
    }
    std::ostringstream detail;
    detail << "200 instances, worst gap " << worst;
    return {"centroid-identity", worst <= 1e-12, detail.str()};
}

SelftestResult check_estimator_calibration(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 7));
    std::size_t violations = 0;
    for (int t = 0; t < 20; ++t) {
        const Point x = random_unit_vector(rng, 8);
        const Point y = random_unit_vector(rng, 8);
        RepeatSlsh<HyperplaneBase> family(HyperplaneBase(8), 1,
                                          derive_seed(seed, 8, t));
        const auto est =
            estimate_collision_probability(family, std::vector<Point>{x}, y, 20000);
        if (!est.contains(angular_similarity(x, y))) ++violations;
    }
    std::ostringstream detail;
    detail << violations << " band violations out of 20";
    return {"estimator-calibration", violations <= 1, detail.str()};
}

}  // namespace

std::vector<SelftestResult> run_selftest(std::uint64_t seed) {
    return {
        check_lift_identities(seed),     check_inverse_sine(seed),
        check_parameter_guarantees(seed), check_antipodal_law(seed),
        check_hierarchy(seed),            check_rigid_isometry(seed),
        check_weighted_identity(seed),    check_centroid_identity(seed),
        check_estimator_calibration(seed),
    };
}

bool report_selftest(const std::vector<SelftestResult>& results, std::ostream& out) {
    bool all = true;
    for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.detail.empty()) out << "  (" << r.detail << ")";
        out << "\n";
        all = all && r.pass;
    }
    return all;
}

}  // namespace slsh
