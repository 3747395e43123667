#include <doctest.h>

#include "lsbound/framework.hpp"

#include <cmath>

using namespace lsbound;

namespace {

FiniteParamSpace single_point_space() {
    FiniteParamSpace sp;
    sp.weights.push_back(zero_weight());
    sp.dist = [](size_t, size_t) { return 0.0; };
    return sp;
}

// independent oracle: direct summation of the chaining series to k = 60
double series_oracle(double y, double n_cover) {
    double acc = std::exp(-y);
    for (int k = 1; k <= 60; ++k)
        acc += n_cover * n_cover * std::exp(-9.0 * y * std::pow(2.0, k - 3) / (k * double(k)));
    return acc;
}

double sqrt_series_oracle(double n_cover) {
    double acc = 0.0;
    for (int k = 1; k <= 60; ++k)
        acc += n_cover * n_cover * std::exp(-(9.0 / 16.0) * std::pow(2.0, k) / (k * double(k)));
    return acc;
}

} // namespace

TEST_CASE("c_star formula and the scaling property") {
    CHECK(c_star(3.0, 0.0, 0.0) == 1.0);
    CHECK(c_star(4.0, 0.5, 0.25) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK_THROWS_AS(c_star(0.0, 1.0, 1.0), domain_error);
    // z C*(y) >= C*(yz) for z >= 1 (used by the moment bound)
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        const double y = std::exp(rng.uniform(-2.0, 3.0));
        const double z = 1.0 + rng.uniform(0.0, 9.0);
        const double lA = rng.uniform(0.0, 2.0), lB = rng.uniform(0.0, 2.0);
        CHECK(z * c_star(y, lA, lB) >= c_star(y * z, lA, lB) - 1e-12);
    }
}

TEST_CASE("chaining series on a single point: frozen oracle values") {
    const auto sp = single_point_space();
    const auto v = chaining_series(sp, {0}, exp_tail(), 1.0, 1.0);
    // direct summation oracle to k = 60 (value also frozen)
    CHECK(v.value == doctest::Approx(series_oracle(1.0, 1.0)).epsilon(1e-12));
    CHECK(v.value == doctest::Approx(1.9275915047265188).epsilon(1e-10));
    // dominated tail: g(y) -> 0 drives the whole series to 0
    const auto big = chaining_series(sp, {0}, exp_tail(), 1.0, 200.0);
    CHECK(big.value < 1e-6);

    const auto sq = chaining_series_sqrt(sp, exp_tail(), 1.0);
    CHECK(sq.value == doctest::Approx(sqrt_series_oracle(1.0)).epsilon(1e-12));
    CHECK(sq.value == doctest::Approx(3.2926360433110402).epsilon(1e-10));
}

TEST_CASE("chaining series: N = 2 scales the series part by 4") {
    FiniteParamSpace sp;
    sp.weights.resize(2);
    sp.dist = [](size_t i, size_t j) { return i == j ? 0.0 : 2.0; }; // N(delta<1) = 2
    std::vector<size_t> all = {0, 1};
    const auto v = chaining_series(sp, all, exp_tail(), 1.0, 1.0);
    CHECK(v.value ==
          doctest::Approx(std::exp(-1.0) + 4.0 * (series_oracle(1.0, 1.0) - std::exp(-1.0)))
              .epsilon(1e-10));
}

TEST_CASE("kappa over a subset") {
    // single-point slice: no pairs, sup term only
    const auto sp = single_point_space();
    auto U5 = [](const WeightFunction&) { return 5.0; };
    const auto k1_ = kappa_over_subset(sp, U5, {5.0}, {0}, {});
    CHECK(k1_.value == 5.0);

    // two params at distance 1 with U(diff) = 0.3 and member values 1, 1
    FiniteParamSpace sp2;
    sp2.weights.push_back(zero_weight());
    sp2.weights.push_back(zero_weight());
    sp2.dist = [](size_t i, size_t j) { return i == j ? 0.0 : 1.0; };
    auto Ud = [](const WeightFunction&) { return 0.3; };
    const auto k2_ = kappa_over_subset(sp2, Ud, {1.0, 1.0}, {0, 1}, {});
    CHECK(k2_.value == doctest::Approx(1.0));
    // halving the quotient by doubling the distance leaves the sup term
    sp2.dist = [](size_t i, size_t j) { return i == j ? 0.0 : 2.0; };
    const auto k3_ = kappa_over_subset(sp2, Ud, {1.0, 1.0}, {0, 1}, {});
    CHECK(k3_.value == doctest::Approx(1.0));
    CHECK_THROWS_AS(kappa_over_subset(sp2, Ud, {1.0, 1.0}, {}, {}), domain_error);
}

TEST_CASE("J integral bound for the exponential tail") {
    // q int (x-1)^{q-1} [e^{-zx} + L e^{-zx/2}] dx <= Gamma(q+1)[1+L](2/z)^q e^{-z/2}
    for (double L : {0.0, 3.2926360433110402})
        for (double q : {1.0, 2.0})
            for (double z : {1.0, 2.0, 5.0}) {
                const double J = j_integral_simplified(exp_tail(), z, q, L);
                const double bound = std::tgamma(q + 1.0) * (1.0 + L) *
                                     std::pow(2.0 / z, q) * std::exp(-z / 2.0);
                CHECK(J <= bound * (1.0 + 1e-9));
                CHECK(J > 0.0);
            }
}

TEST_CASE("uniform_bounds on a single point reduces to the plain series") {
    FiniteParamSpace sp = single_point_space();
    BoundTriple triple;
    triple.U = [](const WeightFunction&) { return 1.0; };
    triple.A = [](const WeightFunction&) { return 0.0; };
    triple.B = [](const WeightFunction&) { return 0.0; };
    triple.g = exp_tail();
    const double y = 3.0;
    const auto rep = uniform_bounds(sp, triple, 1.0, y, 1.0);
    CHECK(rep.u_eps == doctest::Approx(4.0));
    CHECK(rep.c_star_y == doctest::Approx(1.0));
    CHECK(rep.lambda_A == 0.0);
    CHECK(rep.lambda_B == 0.0);
    // slice-sum probability bound: N(eps/8) * L^{(eps)}_g(y) over the only slice
    CHECK(rep.probability_bound == doctest::Approx(series_oracle(y, 1.0)).epsilon(1e-10));
    // the simplified exp-tail form uses max(1, eps^-1 log2(R/r)) = 1
    CHECK(rep.probability_bound_exp ==
          doctest::Approx((1.0 + sqrt_series_oracle(1.0)) * std::exp(-y / 2.0))
              .epsilon(1e-10));
    CHECK(rep.moment_bound >= 0.0);
    CHECK(rep.moment_bound_exp >= 0.0);

    // monotone in y
    double prev = kInf;
    for (double yy : {1.0, 2.0, 4.0, 8.0}) {
        const auto r = uniform_bounds(sp, triple, 1.0, yy, 1.0);
        CHECK(r.probability_bound <= prev + 1e-15);
        prev = r.probability_bound;
    }
}

TEST_CASE("uniform_bounds: slice-sum vs simplified bound bracket") {
    // two-member space with harmless metric; U spread over two slices
    FiniteParamSpace sp;
    sp.weights.push_back(zero_weight());
    sp.weights.push_back(zero_weight());
    sp.dist = [](size_t i, size_t j) { return i == j ? 0.0 : 0.01; };
    BoundTriple triple;
    int call = 0;
    triple.U = [&call](const WeightFunction&) { return 1.0; };
    (void)call;
    std::vector<double> uvals = {1.0, 3.0};
    triple.U = [uvals](const WeightFunction& w) { return w.label == "zero" ? 1.0 : 3.0; };
    // give the members distinct labels so U can tell them apart
    sp.weights[1].label = "other";
    triple.A = [](const WeightFunction&) { return 0.1; };
    triple.B = [](const WeightFunction&) { return 0.0; };
    triple.g = exp_tail();
    const auto rep = uniform_bounds(sp, triple, 1.0, 2.0, 1.0);
    CHECK(rep.slices.size() >= 2);
    // the documented inequality: each slice term <= g(y) + L_sqrt sqrt(g(y))
    for (const auto& sl : rep.slices) {
        if (sl.members == 0) continue;
        CHECK(sl.L_term <=
              std::exp(-2.0) + rep.L_sqrt_series * std::exp(-1.0) + 1e-9);
    }
}

TEST_CASE("uniform_bounds: kappa precondition raises with the rescaling factor") {
    FiniteParamSpace sp;
    sp.weights.push_back(zero_weight());
    sp.weights.push_back(zero_weight());
    sp.weights[1].label = "other";
    sp.dist = [](size_t i, size_t j) { return i == j ? 0.0 : 1e-6; }; // tiny distances
    BoundTriple triple;
    triple.U = [](const WeightFunction& w) { return w.label == "zero" ? 1.0 : 1.5; };
    triple.A = [](const WeightFunction&) { return 0.0; };
    triple.B = [](const WeightFunction&) { return 0.0; };
    triple.g = exp_tail();
    // difference value 1.0 / distance 1e-6 blows past the slice level
    CHECK_THROWS_AS(uniform_bounds(sp, triple, 1.0, 2.0, 1.0), precondition_error);
}

TEST_CASE("lambda_AB worked examples through uniform_bounds") {
    // single slice at level 4 (U = 2 everywhere), A constant 2 -> Lambda_A = 1/2
    FiniteParamSpace sp;
    sp.weights.push_back(zero_weight());
    sp.weights.push_back(zero_weight());
    sp.weights[1].label = "other";
    sp.dist = [](size_t i, size_t j) { return i == j ? 0.0 : 1e9; };
    BoundTriple triple;
    triple.U = [](const WeightFunction&) { return 2.0; };
    triple.A = [](const WeightFunction&) { return 2.0; };
    triple.B = [](const WeightFunction&) { return 0.0; };
    triple.g = exp_tail();
    const auto rep = uniform_bounds(sp, triple, 1.0, 2.0, 1.0);
    REQUIRE(rep.slices.size() == 1);
    CHECK(rep.slices[0].level == doctest::Approx(4.0));
    CHECK(rep.lambda_A == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.lambda_B == 0.0); // B = 0 class (the s < 2 empirical case)

    // all-zero A and B -> (0, 0)
    triple.A = [](const WeightFunction&) { return 0.0; };
    const auto rep0 = uniform_bounds(sp, triple, 1.0, 2.0, 1.0);
    CHECK(rep0.lambda_A == 0.0);
    CHECK(rep0.lambda_B == 0.0);
}

TEST_CASE("tail functions decrease to zero") {
    const auto g = exp_tail();
    double prev = kInf;
    for (double x : {0.0, 0.5, 1.0, 3.0, 10.0, 40.0}) {
        CHECK(g(x) <= prev + 1e-15);
        prev = g(x);
    }
    CHECK(g(40.0) < 1e-6);
}
