#include "lsbound/framework.hpp"

#include <algorithm>
#include <cmath>

namespace lsbound {

TailFunction exp_tail() {
    return TailFunction{[](double x) { return std::exp(-x); }, "exp"};
}

double c_star(double y, double lambda_A, double lambda_B) {
    if (!(y > 0.0)) throw domain_error("c_star: y must be positive");
    return 1.0 + 2.0 * std::sqrt(y) * lambda_A + 2.0 * y * lambda_B;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>>
pair_list(const std::vector<std::size_t>& subset, const PairPolicy& policy, bool* sampled) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    *sampled = false;
    const std::size_t m = subset.size();
    if (m <= policy.full_enumeration_max) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(subset[i], subset[j]);
        return pairs;
    }
    *sampled = true;
    Rng rng = Rng::stream(policy.seed, 0xC0FFEE);
    pairs.reserve(policy.sample_pairs);
    for (std::size_t k = 0; k < policy.sample_pairs; ++k) {
        const auto i = static_cast<std::size_t>(rng.uniform() * m);
        auto j = static_cast<std::size_t>(rng.uniform() * (m - 1));
        if (j >= i) ++j;
        pairs.emplace_back(subset[std::min(i, m - 1)], subset[std::min(j, m - 1)]);
    }
    return pairs;
}

} // namespace

SupStat kappa_over_subset(const FiniteParamSpace& space,
                          const std::function<double(const WeightFunction&)>& fn,
                          const std::vector<double>& member_values,
                          const std::vector<std::size_t>& subset, const PairPolicy& policy) {
    if (subset.empty()) throw domain_error("kappa_over_subset: empty subset");
    SupStat out;
    for (std::size_t i : subset) out.value = std::max(out.value, member_values[i]);
    if (subset.size() < 2) return out;
    bool sampled = false;
    for (const auto& [i, j] : pair_list(subset, policy, &sampled)) {
        const double d = space.dist(i, j);
        if (!(d > 0.0)) continue;
        const double num = fn(space.difference(i, j));
        out.value = std::max(out.value, num / d);
    }
    out.sampled = sampled;
    return out;
}

SeriesValue chaining_series(const FiniteParamSpace& space, const std::vector<std::size_t>& subset,
                            const TailFunction& g, double eps, double y) {
    SeriesValue s;
    s.value = g(y);
    int small_run = 0;
    for (int k = 1; k <= 60; ++k) {
        const double radius = eps * std::pow(2.0, -k);
        const auto cov = covering_number_subset(space, subset, radius);
        const double n2 = static_cast<double>(cov.count) * static_cast<double>(cov.count);
        const double term = n2 * g(9.0 * y * std::pow(2.0, k - 3) / (k * static_cast<double>(k)));
        s.value += term;
        s.terms = k;
        s.last_term = term;
        if (term < 1e-12 * s.value) {
            if (++small_run >= 3) return s;
        } else {
            small_run = 0;
        }
    }
    if (s.last_term >= 1e-12 * s.value)
        throw divergence_error(
            "chaining series did not converge by k=60: entropy too large for the tail g "
            "(check Assumption (W4)/(K3))");
    return s;
}

SeriesValue chaining_series_sqrt(const FiniteParamSpace& space, const TailFunction& g,
                                 double eps) {
    SeriesValue s;
    std::vector<std::size_t> all(space.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    int small_run = 0;
    for (int k = 1; k <= 60; ++k) {
        const double radius = eps * std::pow(2.0, -k);
        const auto cov = space.covering_analytic
                             ? CoveringResult{space.covering_analytic(radius), 0, true}
                             : covering_number_subset(space, all, radius);
        const double n2 = static_cast<double>(cov.count) * static_cast<double>(cov.count);
        const double term =
            n2 * std::sqrt(g(9.0 * std::pow(2.0, k - 3) / (k * static_cast<double>(k))));
        s.value += term;
        s.terms = k;
        s.last_term = term;
        if (term < 1e-12 * std::max(s.value, 1e-300)) {
            if (++small_run >= 3) return s;
        } else {
            small_run = 0;
        }
    }
    if (s.last_term >= 1e-12 * std::max(s.value, 1e-300))
        throw divergence_error(
            "sqrt chaining series did not converge by k=60 (check Assumption (W4)/(K3))");
    return s;
}

double j_integral_simplified(const TailFunction& g, double z, double q, double L_sqrt) {
    if (!(z > 0.0) || !(q >= 1.0)) throw domain_error("j_integral: z > 0, q >= 1 required");
    auto integrand = [&](double x) {
        const double gz = g(z * x);
        return q * std::pow(x - 1.0, q - 1.0) * (gz + L_sqrt * std::sqrt(gz));
    };
    // expand until the integrand is negligible
    double xmax = 2.0;
    const double head = std::max(integrand(1.0 + 0.5), 1e-300);
    while (integrand(xmax) > 1e-14 * head && xmax < 1e6) xmax *= 2.0;
    return adaptive_simpson(integrand, 1.0, xmax, 1e-10);
}

UniformBoundReport uniform_bounds(const FiniteParamSpace& space, const BoundTriple& triple,
                                  double eps, double y, double q, const PairPolicy& policy) {
    if (!(eps > 0.0 && eps <= 1.0)) throw domain_error("uniform_bounds: eps in (0,1]");
    if (!(y > 0.0)) throw domain_error("uniform_bounds: y > 0");
    if (!(q >= 1.0)) throw domain_error("uniform_bounds: q >= 1");
    if (space.size() == 0) throw domain_error("uniform_bounds: empty space");

    UniformBoundReport rep;
    rep.y = y;
    rep.eps = eps;
    rep.q = q;
    rep.u_eps = std::pow(2.0, eps) * (1.0 + eps);

    std::vector<double> U(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) U[i] = triple.U(space.weights[i]);
    const auto dec = build_slices(U, eps);
    rep.r = dec.r;
    rep.R = dec.R;

    rep.covering_eps8 = covering_number(space, eps / 8.0).count;

    double lamA = 0.0, lamB = 0.0;
    rep.slices.reserve(dec.slices.size());
    for (const auto& sl : dec.slices) {
        SliceReport sr;
        sr.level = sl.level;
        sr.members = sl.members.size();
        if (!sl.members.empty()) {
            const auto kU = kappa_over_subset(space, triple.U, U, sl.members, policy);
            sr.kappa_U = kU.value;
            rep.pair_sampled = rep.pair_sampled || kU.sampled;
            if (sr.kappa_U > sl.level * (1.0 + 1e-12)) {
                throw precondition_error(
                    "uniform_bounds: kappa_U(a) > a on slice at level a=" +
                    std::to_string(sl.level) + " (kappa=" + std::to_string(sr.kappa_U) +
                    "); rescale the distance d by >= " + std::to_string(sr.kappa_U / sl.level));
            }
            std::vector<double> Av(space.size()), Bv(space.size());
            for (std::size_t i : sl.members) {
                Av[i] = triple.A(space.weights[i]);
                Bv[i] = triple.B(space.weights[i]);
            }
            sr.lambda_A = kappa_over_subset(space, triple.A, Av, sl.members, policy).value;
            sr.lambda_B = kappa_over_subset(space, triple.B, Bv, sl.members, policy).value;
            lamA = std::max(lamA, sr.lambda_A / sl.level);
            lamB = std::max(lamB, sr.lambda_B / sl.level);
        }
        rep.slices.push_back(sr);
    }
    rep.lambda_A = lamA;
    rep.lambda_B = lamB;
    rep.c_star_y = c_star(y, lamA, lamB);

    // slice sums for the probability and moment bounds
    double prob = 0.0, moment = 0.0;
    const double nc = static_cast<double>(rep.covering_eps8);
    for (std::size_t j = 0; j < dec.slices.size(); ++j) {
        const auto& sl = dec.slices[j];
        if (sl.members.empty()) continue;
        const auto L = chaining_series(space, sl.members, triple.g, eps, y);
        rep.slices[j].L_term = L.value;
        rep.series_terms_max = std::max(rep.series_terms_max, L.terms);
        prob += L.value;

        auto integrand = [&](double x) {
            return q * std::pow(x - 1.0, q - 1.0) *
                   chaining_series(space, sl.members, triple.g, eps, y * x).value;
        };
        double xmax = 2.0;
        const double head = std::max(integrand(1.5), 1e-300);
        while (integrand(xmax) > 1e-14 * head && xmax < 1e6) xmax *= 2.0;
        double jerr = 0.0;
        const double J = adaptive_simpson(integrand, 1.0, xmax, 1e-9, &jerr);
        rep.slices[j].J_term = J;
        rep.slices[j].J_err = jerr;
        moment += std::pow(sl.level, q) * J;
    }
    rep.probability_bound = nc * prob;
    rep.moment_bound = nc * std::pow(rep.u_eps * rep.c_star_y, q) * moment;

    // simplified bounds for the exponential tail
    if (triple.g.is_exp() && y >= 1.0) {
        const auto Lsq = chaining_series_sqrt(space, triple.g, eps);
        rep.L_sqrt_series = Lsq.value;
        const double slice_count = std::max(1.0, std::log2(rep.R / rep.r) / eps);
        rep.probability_bound_exp =
            nc * slice_count * (1.0 + Lsq.value) * std::exp(-y / 2.0);
        rep.moment_bound_exp = nc *
                               std::pow(std::pow(2.0, 2.0 * eps) * rep.R * (1.0 + eps) *
                                            rep.c_star_y, q) /
                               (std::pow(2.0, q * eps) - 1.0) *
                               j_integral_simplified(triple.g, y, q, Lsq.value);
    }
    return rep;
}

} // namespace lsbound
