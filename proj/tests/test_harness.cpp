#include <doctest.h>

#include "lsbound/config.hpp"
#include "lsbound/simulate.hpp"
#include "lsbound/suites.hpp"

#include <cmath>
#include <cstdio>

using namespace lsbound;

namespace {

Simulator make_sim(int n, ProcessKind kind = ProcessKind::xi) {
    const Kernel K = kernel_by_name("box", 1, 1.0 / 16.0);
    const WeightFunction w = kernel_weight(K, {0.1}, 1.0 / (n * 0.1), "w");
    const Density f = uniform_density(Box::interval(0.0, 1.0));
    return Simulator({w}, f, kind, n, Grid1(-0.06, 1.06, 512),
                     noise_by_name("gaussian"));
}

} // namespace

TEST_CASE("simulate: n = 1 pointwise identity") {
    Simulator sim = make_sim(1);
    Simulator::Workspace ws;
    sim.draw(7, 0, ws);
    std::vector<double> proc;
    sim.evaluate(0, ws, proc);
    const auto& w = sim.member(0);
    const auto& grid = sim.grid();
    for (int j = 0; j < grid.n; j += 17) {
        const double u = grid.point(j) - ws.xs[0];
        const double direct = (u >= w.base_support.lo[0] && u <= w.base_support.hi[0]
                                   ? w.base(&u)
                                   : 0.0) -
                              sim.centering(0)[static_cast<size_t>(j)];
        CHECK(proc[static_cast<size_t>(j)] == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("simulate: same seed gives bit-identical realizations") {
    Simulator sim = make_sim(50);
    Simulator::Workspace a, b;
    sim.draw(123, 5, a);
    sim.draw(123, 5, b);
    CHECK(a.xs == b.xs);
    std::vector<double> pa, pb;
    sim.evaluate(0, a, pa);
    sim.evaluate(0, b, pb);
    CHECK(pa == pb);
}

TEST_CASE("simulate: centered process has mean zero at a fixed point") {
    Simulator sim = make_sim(20);
    const auto& grid = sim.grid();
    const int j0 = grid.cell(0.5);
    double acc = 0.0, acc2 = 0.0;
    const int reps = 10000;
    Simulator::Workspace ws;
    std::vector<double> proc;
    for (int r = 0; r < reps; ++r) {
        sim.draw(31, static_cast<std::uint64_t>(r), ws);
        sim.evaluate(0, ws, proc);
        acc += proc[static_cast<size_t>(j0)];
        acc2 += sq(proc[static_cast<size_t>(j0)]);
    }
    const double mean = acc / reps;
    const double se = std::sqrt((acc2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean) <= 4.0 * se);
}

TEST_CASE("estimate_tail: verdict logic") {
    Simulator sim = make_sim(20);
    auto stat = [&sim](long, Simulator::Workspace& ws) {
        thread_local std::vector<double> proc;
        sim.evaluate(0, ws, proc);
        return sim.grid_norm(proc, 2.0);
    };
    // bound >= cutoff -> SKIPPED-UNINFORMATIVE; sure event vs small bound -> FAIL;
    // impossible event vs small bound -> PASS
    const auto rep = estimate_tail(sim, 11, 200, 2, stat, {0.1, 0.2, 0.3},
                                   {1e9, 0.0, 1e9}, {0.9, 0.5, 0.5}, "t");
    CHECK(rep.rows[0].verdict == "SKIPPED-UNINFORMATIVE");
    CHECK(rep.rows[0].exceed == 0);
    CHECK(rep.rows[1].verdict == "FAIL");
    CHECK(rep.rows[1].freq == 1.0);
    CHECK(rep.rows[1].cp_upper == 1.0);
    CHECK(rep.rows[2].verdict == "PASS");
    CHECK_FALSE(rep.pass);
}

TEST_CASE("estimate_tail thresholds count exceedances exactly") {
    Simulator sim = make_sim(10);
    auto stat = [](long rep, Simulator::Workspace&) { return static_cast<double>(rep); };
    const auto rep = estimate_tail(sim, 1, 100, 3, stat, {0.0}, {50.0}, {0.5}, "t");
    CHECK(rep.rows[0].exceed == 50); // reps 50..99
}

TEST_CASE("parallel replication matches serial exactly") {
    Simulator sim = make_sim(30);
    auto run = [&](int jobs) {
        std::vector<double> out(64, 0.0);
        sim.for_each_replication(5, 64, jobs, [&](long rep, Simulator::Workspace& ws) {
            thread_local std::vector<double> proc;
            sim.evaluate(0, ws, proc);
            out[static_cast<size_t>(rep)] = sim.grid_norm(proc, 3.0);
        });
        return out;
    };
    CHECK(run(1) == run(4));
}

TEST_CASE("toml parsing") {
    const auto j = parse_toml(
        "# comment\n"
        "[fixed-w]\n"
        "n = 200\n"
        "s = [1.5, 2.0]\n"
        "kernel = \"box\"\n"
        "ramp = 0.0625\n"
        "flag = true\n"
        "inline = { a = 1, b = \"x\" }\n"
        "[fixed-w.density]\n"
        "name = \"uniform\"\n");
    CHECK(j.at("fixed-w").at("n").get<long>() == 200);
    CHECK(j.at("fixed-w").at("s").size() == 2);
    CHECK(j.at("fixed-w").at("kernel").get<std::string>() == "box");
    CHECK(j.at("fixed-w").at("flag").get<bool>());
    CHECK(j.at("fixed-w").at("inline").at("a").get<long>() == 1);
    CHECK(j.at("fixed-w").at("density").at("name").get<std::string>() == "uniform");
    CHECK_THROWS_AS(parse_toml("oops\n"), config_error);
}

TEST_CASE("space description json round trip") {
    json j;
    j["dim"] = 1;
    j["kernels"] = json::array({json{{"name", "box"}, {"ramp", 0.0625}},
                                json{{"name", "triangle"}}});
    j["bandwidths"] = {{"min", {0.1}}, {"max", {0.4}}, {"count", 4}};
    j["n"] = 128;
    const auto sd = space_from_json(j);
    CHECK(sd.dict.kernels.size() == 2);
    CHECK(sd.bw.h_min[0] == 0.1);
    CHECK(sd.n == 128);
    const auto back = space_to_json(sd);
    const auto sd2 = space_from_json(back);
    CHECK(sd2.dict.kernels.size() == 2);
    CHECK(sd2.bw.h_max[0] == 0.4);
    CHECK(sd2.grid_per_coord == 4);
}

TEST_CASE("run_suite rejects unknown names and empty classes") {
    CHECK_THROWS_AS(run_suite("nope", json::object(), {}), config_error);
    CHECK_THROWS_AS(Simulator({}, uniform_density(Box::interval(0.0, 1.0)),
                              ProcessKind::xi, 10, Grid1(-1.0, 2.0, 64)),
                    config_error);
}

TEST_CASE("simulator rejects a grid that misses the support") {
    const Kernel K = kernel_by_name("box", 1, 1.0 / 16.0);
    const WeightFunction w = kernel_weight(K, {0.1}, 1.0, "w");
    const Density f = uniform_density(Box::interval(0.0, 1.0));
    CHECK_THROWS_AS(Simulator({w}, f, ProcessKind::xi, 10, Grid1(0.2, 0.8, 64)),
                    grid_error);
}

TEST_CASE("eta pathwise triangle bound on a few realizations") {
    const int n = 50;
    Simulator sim = make_sim(n, ProcessKind::eta);
    QuadratureConfig quad;
    const double Ms = m_p(sim.member(0), 3.0, nullptr, quad);
    Simulator::Workspace ws;
    std::vector<double> proc;
    for (int r = 0; r < 50; ++r) {
        sim.draw(991, static_cast<std::uint64_t>(r), ws);
        sim.evaluate(0, ws, proc);
        double abs_eps = 0.0;
        for (double e : ws.eps) abs_eps += std::abs(e);
        CHECK(sim.grid_norm(proc, 3.0) <= Ms * abs_eps * (1.0 + 2e-3) + 1e-12);
    }
}

TEST_CASE("noise moment cache: computed once, reused from file") {
    const std::string path = "/tmp/lsbound_momoments_cache.json";
    std::remove(path.c_str());
    const NoiseModel m = noise_by_name("student-t", 4.0);
    const auto a = noise_moments_cached(m, 3.0, path, 77, 200000);
    // analytic values as the oracle
    CHECK(a.sigma_eps == doctest::Approx(m.sigma_eps()).epsilon(0.05));
    CHECK(a.e_s == doctest::Approx(m.e_s(3.0)).epsilon(0.05));
    // second call must hit the cache (identical values, no re-draw)
    const auto b = noise_moments_cached(m, 3.0, path, 77, 10);
    CHECK(b.sigma_eps == a.sigma_eps);
    CHECK(b.e_s == a.e_s);
    // different seed is a different key
    const auto c = noise_moments_cached(m, 3.0, path, 78, 200000);
    CHECK(c.sigma_eps != a.sigma_eps);
}
