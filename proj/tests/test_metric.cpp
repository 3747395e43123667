#include <doctest.h>

#include "lsbound/kde.hpp"
#include "lsbound/param_space.hpp"

#include <cmath>

using namespace lsbound;

TEST_CASE("delta_H identities and examples") {
    CHECK(delta_H({0.1}, {0.1}) == 0.0);
    CHECK(delta_H({0.1}, {0.2}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // max over coordinates: ln(0.4/0.1) = ln 4 dominates
    CHECK(delta_H({0.1, 0.4}, {0.2, 0.1}) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK_THROWS_AS(delta_H({0.0}, {0.1}), domain_error);
    CHECK_THROWS_AS(delta_H({0.1}, {-0.2}), domain_error);
}

TEST_CASE("bandwidth covering: log-interval formula vs exhaustive grid oracle") {
    BandwidthSet bw({0.1}, {0.4});
    // interval of log-length ln 4 covered by balls of diameter ln 2
    CHECK(bw.covering_number(std::log(2.0) / 2.0) == 2);

    // oracle: place centers on a fine log grid greedily and verify the count
    auto oracle = [](double lo, double hi, double delta) {
        std::size_t count = 0;
        double covered_to = std::log(lo) - 1e-15;
        const double end = std::log(hi);
        while (covered_to < end) {
            ++count;
            covered_to += 2.0 * delta; // optimal: each new ball covers 2 delta
        }
        return count == 0 ? std::size_t{1} : count;
    };
    Rng rng(99);
    for (int t = 0; t < 20; ++t) {
        const double lo = std::exp(rng.uniform(std::log(0.01), std::log(0.3)));
        const double hi = lo * std::exp(rng.uniform(0.01, 3.0));
        BandwidthSet b({lo}, {std::min(1.0, hi)});
        for (double delta : {0.05, 0.11, 0.35, 0.9})
            CHECK(b.covering_number(delta) == oracle(lo, std::min(1.0, hi), delta));
    }
}

TEST_CASE("finite covering: single point and separated triple") {
    FiniteParamSpace sp;
    sp.weights.resize(1);
    sp.dist = [](size_t, size_t) { return 0.0; };
    CHECK(covering_number(sp, 0.5).count == 1);
    CHECK_THROWS_AS(covering_number(sp, 0.0), domain_error);

    // 3 kernels mutually >= 0.5 apart in sup norm, delta = 0.1 -> 3 balls;
    // brute force over all center subsets confirms (exact flag set)
    FiniteParamSpace tri;
    tri.weights.resize(3);
    tri.dist = [](size_t i, size_t j) { return i == j ? 0.0 : 0.5; };
    const auto c = covering_number(tri, 0.1);
    CHECK(c.count == 3);
    CHECK(c.exact);
    CHECK(c.greedy_lower_bound <= c.count);
    // covering number is nonincreasing in delta
    CHECK(covering_number(tri, 0.6).count == 1);
}

TEST_CASE("covering exactness vs brute force on random finite metrics") {
    Rng rng(4242);
    for (int t = 0; t < 10; ++t) {
        const int m = 5 + static_cast<int>(rng.uniform() * 6);
        std::vector<double> pts;
        for (int i = 0; i < m; ++i) pts.push_back(rng.uniform(0.0, 1.0));
        FiniteParamSpace sp;
        sp.weights.resize(static_cast<size_t>(m));
        sp.dist = [pts](size_t i, size_t j) { return std::abs(pts[i] - pts[j]); };
        const double delta = rng.uniform(0.05, 0.4);
        const auto got = covering_number(sp, delta);
        // brute force: smallest subset of centers covering everything
        std::size_t best = static_cast<size_t>(m);
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            bool covers = true;
            for (int j = 0; j < m && covers; ++j) {
                bool cov = false;
                for (int i = 0; i < m; ++i)
                    if ((mask >> i) & 1u)
                        if (std::abs(pts[size_t(i)] - pts[size_t(j)]) <= delta) {
                            cov = true;
                            break;
                        }
                covers = cov;
            }
            if (covers) best = std::min(best, static_cast<size_t>(__builtin_popcount(mask)));
        }
        CHECK(got.count == best);
    }
}

TEST_CASE("entropy bound values") {
    CHECK(BandwidthSet({0.1}, {0.1}).entropy_bound(1.0) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(BandwidthSet({0.1}, {0.4}).entropy_bound(0.5) ==
          doctest::Approx(std::log(6.0) + std::log(std::log(4.0))).epsilon(1e-12));
    // ln ln 2 < 0 truncates at zero
    CHECK(BandwidthSet({0.1, 0.1}, {0.2, 0.2}).entropy_bound(1.0) ==
          doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(BandwidthSet({0.1}, {0.4}).entropy_bound(1.5), domain_error);
}

TEST_CASE("ln covering <= entropy bound on random boxes and deltas") {
    Rng rng(7);
    for (int b = 0; b < 20; ++b) {
        const double lo = std::exp(rng.uniform(std::log(0.02), std::log(0.5)));
        const double hi = std::min(1.0, lo * std::exp(rng.uniform(0.0, 3.0)));
        BandwidthSet bw({lo}, {hi});
        for (int k = 1; k <= 50; ++k) {
            const double delta = k / 50.0;
            CHECK(std::log(double(bw.covering_number(delta))) <=
                  bw.entropy_bound(delta) + 1e-12);
        }
    }
}

TEST_CASE("build_slices: binning and partition") {
    // constant U: a single slice at level 2r
    {
        const auto d = build_slices({1.0, 1.0, 1.0}, 1.0);
        CHECK(d.n_slices() == 1);
        CHECK(d.slices[0].level == doctest::Approx(2.0));
        CHECK(d.slices[0].members.size() == 3);
    }
    // direct binning: levels 2, 4, 8 with members {1}, {2}, {4}
    {
        const auto d = build_slices({1.0, 2.0, 4.0}, 1.0);
        REQUIRE(d.n_slices() == 3);
        CHECK(d.slices[0].level == doctest::Approx(2.0));
        CHECK(d.slices[1].level == doctest::Approx(4.0));
        CHECK(d.slices[2].level == doctest::Approx(8.0));
        CHECK(d.slices[0].members == std::vector<size_t>{0});
        CHECK(d.slices[1].members == std::vector<size_t>{1});
        CHECK(d.slices[2].members == std::vector<size_t>{2});
    }
    // 1.9 <= 2 and > 1: both in the single level-2 slice
    {
        const auto d = build_slices({1.0, 1.9}, 1.0);
        CHECK(d.n_slices() == 1);
        CHECK(d.slices[0].members.size() == 2);
    }
    CHECK_THROWS_AS(build_slices({}, 1.0), domain_error);
    CHECK_THROWS_AS(build_slices({1.0, 0.0}, 1.0), domain_error);
}

TEST_CASE("slice partition property on random U values") {
    Rng rng(2024);
    for (int t = 0; t < 30; ++t) {
        const double eps = rng.uniform(0.1, 1.0);
        std::vector<double> u;
        const int m = 2 + static_cast<int>(rng.uniform() * 40);
        for (int i = 0; i < m; ++i) u.push_back(std::exp(rng.uniform(-3.0, 3.0)));
        const auto d = build_slices(u, eps);
        std::vector<int> seen(u.size(), 0);
        for (std::size_t j = 0; j < d.n_slices(); ++j) {
            const auto& sl = d.slices[j];
            if (j > 0)
                CHECK(sl.level ==
                      doctest::Approx(d.slices[j - 1].level * std::pow(2.0, eps)));
            for (std::size_t i : sl.members) {
                seen[i] += 1;
                CHECK(u[i] <= sl.level * (1.0 + 1e-12));
                CHECK(u[i] >= sl.level / 2.0 * (1.0 - 1e-12));
            }
        }
        for (int c : seen) CHECK(c == 1); // every member in exactly one slice
    }
}

TEST_CASE("metric axioms hold for Delta_H, d1, d2 and d_* on sampled triples") {
    auto dict = KdeDictionary::build({kernel_by_name("box", 1, 1.0 / 16.0),
                                      kernel_by_name("triangle", 1),
                                      kernel_by_name("cosine", 1)});
    const double theta1 = kde_theta1(dict);
    const double theta2 = kde_theta2(dict);
    struct P {
        size_t k, q;
        std::vector<double> h, hh;
    };
    auto sample = [&dict](Rng& rng) {
        P p;
        p.k = static_cast<size_t>(rng.uniform() * dict.kernels.size());
        p.q = static_cast<size_t>(rng.uniform() * dict.kernels.size());
        p.h = {std::exp(rng.uniform(std::log(0.05), std::log(0.5)))};
        p.hh = {std::exp(rng.uniform(std::log(0.05), std::log(0.5)))};
        return p;
    };
    const int kTriples = 2500; // x4 metrics = 10^4 triples

    Rng rng(1);
    auto dH = [](const P& a, const P& b) { return delta_H(a.h, b.h); };
    auto c0 = check_metric_axioms(dH, sample, kTriples, rng);
    CHECK(c0.ok());

    auto d1 = [&](const P& a, const P& b) {
        return kde_d1(dict, a.k, a.h, b.k, b.h, theta1);
    };
    auto c1_ = check_metric_axioms(d1, sample, kTriples, rng);
    CHECK(c1_.ok());

    auto d2 = [&](const P& a, const P& b) {
        return kde_d2(dict, a.k, a.h, a.q, a.hh, b.k, b.h, b.q, b.hh, theta2);
    };
    auto c2_ = check_metric_axioms(d2, sample, kTriples, rng);
    CHECK(c2_.ok());

    // d_* = k_* (d v d^{m_s} v d^{m_{s/2}}) stays a metric for exponents <= 1
    const double ms = 2.0 / 5.0, ms2 = 4.0 / 5.0, kstar = 3.7;
    auto dstar = [&](const P& a, const P& b) {
        const double d = d1(a, b);
        return kstar * std::max({d, std::pow(d, ms), std::pow(d, ms2)});
    };
    auto c3_ = check_metric_axioms(dstar, sample, kTriples, rng);
    CHECK(c3_.ok());
}

TEST_CASE("covering number is nonincreasing in delta") {
    Rng rng(606);
    std::vector<double> pts;
    for (int i = 0; i < 14; ++i) pts.push_back(rng.uniform(0.0, 1.0));
    FiniteParamSpace sp;
    sp.weights.resize(pts.size());
    sp.dist = [pts](size_t i, size_t j) { return std::abs(pts[i] - pts[j]); };
    std::size_t prev = SIZE_MAX;
    for (int k = 1; k <= 12; ++k) {
        const auto c = covering_number(sp, 0.02 * k);
        CHECK(c.count <= prev);
        prev = c.count;
    }
    BandwidthSet bw({0.03}, {0.9});
    prev = SIZE_MAX;
    for (int k = 1; k <= 20; ++k) {
        const auto c = bw.covering_number(0.05 * k);
        CHECK(c <= prev);
        prev = c;
    }
}
