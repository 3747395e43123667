#include <doctest.h>

#include "lsbound/regression.hpp"
#include "lsbound/simulate.hpp"

#include <cmath>

using namespace lsbound;

TEST_CASE("g_alpha_b examples") {
    CHECK(g_alpha_b(0.0, 1.0, 1.0, 3.0) == 1.0);
    // alpha=1, b=1, s>=2, x=4: exp{-min(4, 4^{1/2})} = e^-2
    CHECK(g_alpha_b(4.0, 1.0, 1.0, 3.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    // alpha=2, b=1, s<2, x=8: exponent 1/2, exp{-min(8, sqrt(8))}
    CHECK(g_alpha_b(8.0, 2.0, 1.0, 1.5) ==
          doctest::Approx(std::exp(-std::sqrt(8.0))).epsilon(1e-12));
    CHECK_THROWS_AS(g_alpha_b(1.0, 0.0, 1.0, 2.0), domain_error);
    CHECK_THROWS_AS(g_alpha_b(1.0, 1.0, -1.0, 2.0), domain_error);
}

TEST_CASE("G2 examples") {
    // p=4, P=1, n=1, s>=2, x=4: 2 (ln 2)^4
    CHECK(G2(4.0, 4.0, 1.0, 1, 3.0) ==
          doctest::Approx(2.0 * std::pow(std::log(2.0), 4.0)).epsilon(1e-12));
    // s<2 halves the exponent: 2 (ln 2)^2
    CHECK(G2(4.0, 4.0, 1.0, 1, 1.5) ==
          doctest::Approx(2.0 * sq(std::log(2.0))).epsilon(1e-12));
    CHECK(G2(1e9, 4.0, 1.0, 1, 3.0) < 1e-6); // log over linear
    CHECK_THROWS_AS(G2(0.0, 4.0, 1.0, 1, 3.0), domain_error);
    CHECK_THROWS_AS(G2(1.0, 1.5, 1.0, 1, 3.0), domain_error);
}

TEST_CASE("noise presets: analytic moments vs MC oracle") {
    Rng rng(1234);
    for (const char* name : {"gaussian", "laplace", "uniform"}) {
        const NoiseModel m = noise_by_name(name);
        double m2 = 0.0, m3 = 0.0;
        const int N = 400000;
        Rng r2(77);
        for (int i = 0; i < N; ++i) {
            const double e = m.draw(r2);
            m2 += e * e;
            m3 += std::abs(e * e * e);
        }
        m2 = std::sqrt(m2 / N);
        m3 = std::cbrt(m3 / N);
        CHECK(m2 == doctest::Approx(m.sigma_eps()).epsilon(0.02));
        CHECK(m3 == doctest::Approx(m.e_s(3.0)).epsilon(0.03));
    }
    // student-t preset with p moments: E|e|^p <= P by construction
    const NoiseModel st = noise_by_name("student-t", 4.0);
    CHECK(st.nu == doctest::Approx(5.0));
    CHECK(st.P == doctest::Approx(std::pow(st.e_s(4.0), 4.0)).epsilon(1e-9));
}

TEST_CASE("E1 presets: empirical tail below v exp(-b x^alpha)") {
    for (const char* name : {"gaussian", "laplace", "uniform"}) {
        const NoiseModel m = noise_by_name(name);
        const int N = 200000;
        Rng rng(4321);
        std::vector<double> draws(static_cast<size_t>(N));
        for (auto& d : draws) d = std::abs(m.draw(rng));
        std::sort(draws.begin(), draws.end());
        for (double x : {0.5, 1.0, 2.0, 3.0}) {
            const auto idx = std::lower_bound(draws.begin(), draws.end(), x) - draws.begin();
            const double freq = 1.0 - static_cast<double>(idx) / N;
            const double cp = clopper_pearson_upper(N - idx, N, 0.99);
            CHECK(cp <= m.v * std::exp(-m.b * std::pow(x, m.alpha)) + 1e-12);
            (void)freq;
        }
    }
}

TEST_CASE("sampler symmetry: sign-flipped stream has matching moments") {
    const NoiseModel m = noise_by_name("laplace");
    Rng rng(55);
    double skew = 0.0;
    const int N = 300000;
    for (int i = 0; i < N; ++i) {
        const double e = m.draw(rng);
        skew += e * e * e;
    }
    skew /= N;
    CHECK(std::abs(skew) < 0.05);
}

TEST_CASE("varrho and theorem8 tails") {
    QuadratureConfig quad;
    const Density f = uniform_density(Box::interval(0.0, 1.0));
    const int n = 100;
    const WeightFunction w = kernel_weight(kernel_by_name("box", 1, 0.0), {0.1},
                                           1.0 / (n * 0.1), "w");
    const NoiseModel gs = noise_by_name("gaussian");
    // unit-variance noise, s = 2: varrho_2 = sigma sqrt(n) M_2 = 0.316228
    CHECK(varrho_s(w, f, gs, 2.0, n, quad) == doctest::Approx(0.316228).epsilon(2e-3));
    const auto b = regression_fixed_bound(w, f, gs, 2.0, n, quad);
    // z -> 0+: G1 -> 1 + nv (reported with the min(.,1) companion downstream)
    CHECK(theorem8_tail(b, 1e-9) == doctest::Approx(1.0 + n * gs.v).epsilon(1e-6));
    // monotone nonincreasing in z
    double prev = kInf;
    for (double z : {0.1, 0.3, 1.0, 3.0, 10.0}) {
        const double v = theorem8_tail(b, z);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("theorem9: constants and majorant proportionality") {
    const int n = 1000;
    WeightClass cls;
    FiniteParamSpace sp;
    for (double h : {0.1, 0.14, 0.2})
        sp.weights.push_back(kernel_weight(kernel_by_name("triangle", 1), {h},
                                           1.0 / (n * h), "w" + std::to_string(h)));
    sp.dist = [](size_t i, size_t j) { return i == j ? 0.0 : 0.4; };
    cls.space = sp;
    cls.n = n;
    cls.alpha1 = 0.5;
    cls.alpha2 = 0.4;
    cls.beta = 0.3;
    verify_weight_class(cls, true);

    // c_n = (4/3) c_*(s) alpha_* n^{-1/s} at s = 3, alpha_* = 2, n = 1000
    WeightClass c2 = cls;
    c2.alpha1 = 0.5;
    c2.alpha2 = 1.0; // alpha_* = 2
    const NoiseModel gs = noise_by_name("gaussian");
    const auto rep = theorem9_bound(c2, gs, 1.0, 3.0, 0.5, 2.0, 1.0);
    CHECK(rep.c_n ==
          doctest::Approx((4.0 / 3.0) * c1(3.0) * 2.0 * std::pow(1000.0, -1.0 / 3.0))
              .epsilon(1e-12));
    CHECK(rep.c_n == doctest::Approx(10.9229).epsilon(1e-4));

    // b_n^2 at s = 2 with f_inf = 1, mu_* = 0.1, n = 100: 2*0.1 + 8*0.1 = 1.0
    WeightClass c3_ = cls;
    c3_.n = 100;
    c3_.mu_star = 0.1;
    c3_.f_inf = 1.0;
    const auto rep2 = theorem9_bound(c3_, gs, 1.0, 2.0, 0.5, 2.0, 1.0);
    CHECK(rep2.b_n_sq == doctest::Approx(1.0).epsilon(1e-12));

    // majorant proportional to sqrt(n) ||w||_2 across members
    for (std::size_t i = 0; i < cls.space.size(); ++i)
        CHECK(rep.majorant[i] ==
              doctest::Approx(rep.majorant_factor * std::sqrt(double(n)) * c2.norm_p(i, 2.0))
                  .epsilon(1e-12));

    // y -> infinity drives the tail to 0; T_{n,eps} is astronomically large at
    // desk scale, so the bound only becomes informative at very large y
    const auto rep_far = theorem9_bound(c2, gs, 1.0, 3.0, 0.5, 1e5, 1.0);
    CHECK(rep_far.tail < 1e-10);
    const auto rep_mid = theorem9_bound(c2, gs, 1.0, 3.0, 0.5, 3e4, 1.0);
    CHECK(rep_far.tail < rep_mid.tail);

    // beta threshold precondition: beta >= alpha/(1+alpha) must throw
    WeightClass bad = c2;
    bad.beta = 0.8; // gaussian alpha = 2 -> cap 2/3
    CHECK_THROWS_AS(theorem9_bound(bad, gs, 1.0, 3.0, 0.5, 2.0, 1.0), precondition_error);
    // E2 noise is outside the theorem9 contract
    CHECK_THROWS_AS(theorem9_bound(c2, noise_by_name("student-t", 4.0), 1.0, 3.0, 0.5, 2.0,
                                   1.0),
                    precondition_error);
}
