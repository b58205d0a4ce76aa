#include "slsh/plan.hpp"

#include <cmath>
#include <stdexcept>

namespace slsh {

PlanResult plan_params(std::size_t n, double p1, double p2, double delta) {
    if (n < 1) throw std::invalid_argument("plan: n must be >= 1");
    if (!(p2 > 0.0 && p2 < p1 && p1 <= 1.0))
        throw std::invalid_argument("plan: need 0 < p2 < p1 <= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("plan: delta must be in (0, 1)");

    PlanResult out;
    out.rho = std::log(p1) / std::log(p2);

    const double k_exact = std::log(static_cast<double>(n)) / std::log(1.0 / p2);
    out.concat = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(k_exact)));

    const double l_exact =
        std::ceil(std::pow(static_cast<double>(n), out.rho) / p1) *
        std::ceil(std::log(1.0 / delta));
    if (!(l_exact >= 1.0) || l_exact > 9e18)
        throw std::invalid_argument("plan: table count out of range");
    out.tables = static_cast<std::size_t>(l_exact);
    return out;
}

void IndexParams::validate() const {
    if (mode == IndexMode::Similarity) {
        if (!(c > 0.0 && c < 1.0))
            throw std::invalid_argument("index params: similarity mode needs 0 < c < 1");
        if (!(threshold > 0.0))
            throw std::invalid_argument("index params: threshold must be positive");
    } else {
        if (!(c > 1.0))
            throw std::invalid_argument("index params: distance mode needs c > 1");
        if (!(threshold > 0.0))
            throw std::invalid_argument("index params: threshold must be positive");
    }
    if (!(p2 > 0.0 && p2 < p1 && p1 <= 1.0))
        throw std::invalid_argument("index params: need 0 < p2 < p1 <= 1");
    if (concat < 1 || tables < 1)
        throw std::invalid_argument("index params: K and L must be >= 1");
    if (!(fail_prob > 0.0 && fail_prob < 1.0))
        throw std::invalid_argument("index params: fail_prob must be in (0, 1)");
}

IndexParams IndexParams::plan(IndexMode mode, double threshold, double c, double p1,
                              double p2, std::size_t n, std::uint64_t seed,
                              double fail_prob) {
    IndexParams params;
    params.mode = mode;
    params.threshold = threshold;
    params.c = c;
    params.p1 = p1;
    params.p2 = p2;
    params.seed = seed;
    params.fail_prob = fail_prob;
    const auto plan = plan_params(std::max<std::size_t>(n, 1), p1, p2, fail_prob);
    params.concat = plan.concat;
    params.tables = plan.tables;
    params.validate();
    return params;
}

}  // namespace slsh
