#include <doctest.h>

#include "lsbound/weight.hpp"

#include <cmath>

using namespace lsbound;

namespace {

WeightFunction box_weight() {
    return make_weight_1d([](double u) { return std::abs(u) < 0.5 ? 1.0 : 0.0; }, -0.5, 0.5,
                          kInf, "box");
}

WeightFunction triangle_weight() {
    return make_weight_1d([](double u) { return std::max(0.0, 1.0 - 2.0 * std::abs(u)); },
                          -0.5, 0.5, 2.0, "triangle");
}

} // namespace

TEST_CASE("m_p: box kernel, scaled kernel weight, zero weight") {
    QuadratureConfig quad;
    CHECK(m_p(box_weight(), 2.0) == doctest::Approx(1.0).epsilon(1e-3));
    // w = n^-1 K_h with the box kernel: ||K_h||_p = V_h^{-1+1/p} ||K||_p
    const Kernel K = kernel_by_name("box", 1, 0.0);
    const int n = 100;
    const double h = 0.1;
    const WeightFunction w = kernel_weight(K, {h}, 1.0 / (n * h));
    CHECK(m_p(w, 2.0) == doctest::Approx(0.01 / std::sqrt(0.1)).epsilon(1e-3));
    CHECK(m_p(w, 1.0) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(m_p(w, kInf) == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(m_p(zero_weight(), 3.0) == 0.0);
    CHECK_THROWS_AS(m_p(w, 0.5), domain_error);
}

TEST_CASE("m_p with density uses the nu'-weighted marginal") {
    QuadratureConfig quad;
    const Density f = uniform_density(Box::interval(0.0, 1.0));
    const WeightFunction w = box_weight();
    // sup_t (int |w(t-x)|^p f dx)^{1/p} = min(1, window)^{1/p} <= ||w||_p = 1
    const double v = m_p(w, 2.0, &f, quad);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("sigma_s examples and refinement oracle") {
    QuadratureConfig quad;
    const Density f = uniform_density(Box::interval(0.0, 1.0));
    CHECK(sigma_s(zero_weight(), f, 2.0) == 0.0);

    const Kernel K = kernel_by_name("box", 1, 0.0);
    const int n = 100;
    const double h = 0.1;
    const WeightFunction w = kernel_weight(K, {h}, 1.0 / (n * h));
    // uniform f on [0,1]: equality with M_2 up to a boundary effect < 10%
    const double sig = sigma_s(w, f, 2.0, quad);
    const double m2 = m_p(w, 2.0, nullptr, quad);
    CHECK(sig <= m2 * 1.001);
    CHECK(sig >= m2 * 0.90);

    // refinement oracle at s = 4: nested Riemann sum at double resolution
    QuadratureConfig fine = quad;
    fine.pts_per_dim *= 2;
    const double v1 = sigma_s(w, f, 4.0, quad);
    const double v2 = sigma_s(w, f, 4.0, fine);
    CHECK(std::abs(v1 - v2) / v2 < 1e-4);
}

TEST_CASE("verify_W2: flat box, triangle pass and fail") {
    const auto flat = verify_W2(box_weight(), 0.5, 0.99);
    CHECK(flat.pass);
    CHECK(flat.ratio == doctest::Approx(1.0).epsilon(1e-6));

    // triangle level set {1 - 2|x| >= 1/2} = [-1/4, 1/4] has measure 1/2
    const auto tri = verify_W2(triangle_weight(), 0.5, 0.5);
    CHECK(tri.pass);
    CHECK(tri.ratio == doctest::Approx(0.5).epsilon(2e-3));
    const auto tri_fail = verify_W2(triangle_weight(), 0.5, 0.6);
    CHECK_FALSE(tri_fail.pass);
    CHECK(tri_fail.ratio == doctest::Approx(0.5).epsilon(2e-3));

    CHECK_THROWS_AS(verify_W2(zero_weight(), 0.5, 0.5), domain_error);
}

TEST_CASE("young_check: box*box equality at p=1 and bound at p=inf") {
    const auto r1 = young_check(box_weight(), box_weight(), 1.0);
    CHECK(r1.ok);
    CHECK(r1.lhs == doctest::Approx(r1.rhs).epsilon(2e-3)); // Fubini equality
    CHECK(r1.rhs == doctest::Approx(1.0).epsilon(2e-3));

    const auto rinf = young_check(box_weight(), box_weight(), kInf);
    CHECK(rinf.ok);
    CHECK(rinf.lhs <= rinf.rhs * 1.001);
    CHECK(rinf.rhs == doctest::Approx(1.0).epsilon(2e-3)); // peak of the hat is 1

    const auto rz = young_check(zero_weight(), box_weight(), 2.0);
    CHECK(rz.ok);
    CHECK(rz.lhs == 0.0);
}

TEST_CASE("kernel metadata: named profiles") {
    const Kernel tri = kernel_by_name("triangle", 1);
    CHECK(tri.integral_abs() == doctest::Approx(0.5));
    CHECK(tri.sup_norm() == doctest::Approx(1.0));
    CHECK(tri.lipschitz() == doctest::Approx(2.0));
    const Kernel box = kernel_by_name("box", 1, 1.0 / 16.0);
    CHECK(box.integral_abs() == doctest::Approx(1.0 - 1.0 / 16.0));
    CHECK(box.lipschitz() == doctest::Approx(16.0));
    const Kernel epan = kernel_by_name("epanechnikov-lipschitz-clipped", 1);
    CHECK(epan.integral_abs() == doctest::Approx(1.0));
    CHECK(epan.sup_norm() == doctest::Approx(1.5));
    CHECK_THROWS_AS(kernel_by_name("gauss", 1), config_error);
}

TEST_CASE("densities: mass one, f_inf bound, seeded samplers inside support") {
    QuadratureConfig q;
    for (const char* name : {"uniform", "trunc-gauss-mix", "histogram"}) {
        const Density f = density_by_name(name);
        const double mass = integrate_1d([&](double x) { return f.pdf(&x); },
                                         f.support.lo[0], f.support.hi[0], 4096);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
        double sup = 0.0;
        const Grid1 g(f.support.lo[0], f.support.hi[0], 4096);
        for (int i = 0; i < g.n; ++i) {
            const double x = g.point(i);
            sup = std::max(sup, f.pdf(&x));
        }
        CHECK(sup <= f.f_inf * (1.0 + 1e-9));
        Rng rng(5);
        for (int i = 0; i < 1000; ++i) {
            double x;
            f.sample(rng, &x);
            CHECK(x >= f.support.lo[0]);
            CHECK(x <= f.support.hi[0]);
        }
    }
}

TEST_CASE("weight algebra: difference, square, scaling") {
    const auto a = box_weight();
    const auto b = triangle_weight();
    const auto d = weight_difference(a, b);
    const double u = 0.1;
    CHECK(d.eval_base1(u) == doctest::Approx(1.0 - 0.8));
    const auto s = weight_square(b);
    CHECK(s.eval_base1(u) == doctest::Approx(0.64));
    const auto c = weight_scaled(b, 2.0);
    CHECK(c.eval_base1(u) == doctest::Approx(1.6));
}
