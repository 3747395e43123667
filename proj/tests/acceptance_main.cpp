// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include "lsbound/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lsbound;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string title;
    double budget_sec;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::string> details;

    Criterion(int id_, std::string title_, double budget)
        : id(id_), title(std::move(title_)), budget_sec(budget) {}

    void check(bool cond, const std::string& what) {
        if (!cond) details.push_back(what);
        ok = ok && cond;
    }
    void finish() {
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > budget_sec) {
            ok = false;
            details.push_back("runtime " + std::to_string(dt) + " s over budget " +
                              std::to_string(budget_sec) + " s");
        }
        std::printf("[%s] criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id,
                    title.c_str(), dt);
        for (const auto& d : details) std::printf("         - %s\n", d.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion1_constants() {
    Criterion c(1, "constant/unit suite exact to 1e-12", 1.0);
    c.check(near(c1(4.0), 60.0 / std::log(4.0), 1e-12), "c1(4) = 60/ln 4");
    c.check(near(u_eps(1.0), 4.0, 1e-12), "u_1 = 4");
    c.check(near(ubar_eps(0.37, 0.0, 3.0), u_eps(0.37), 1e-12), "ubar_eps(0) = u_eps");
    c.check(kde_D(0.0, 1, 1.0, 1.0) == 0.0, "D(0) = 0");
    c.check(delta_H({0.1}, {0.1}) == 0.0, "Delta_H identity");
    c.check(near(delta_H({0.1}, {0.2}), std::log(2.0), 1e-12), "Delta_H(0.1,0.2) = ln 2");
    c.check(near(delta_H({0.1, 0.4}, {0.2, 0.1}), std::log(4.0), 1e-12),
            "Delta_H max over coordinates");
    c.check(near(y_gamma(0.0, 0.01, 0.5), 25.0, 1e-12), "y_gamma lamA = 0 case");
    c.check(near(y_gamma(1.0, 1.0, std::sqrt(2.0)), 1.0, 1e-12), "y_gamma quadratic case");
    c.check(near(y_gamma(0.1, 0.0, 0.5), 6.25, 1e-12), "y_gamma lamB = 0 case");
    c.check(g_alpha_b(0.0, 1.0, 1.0, 2.0) == 1.0, "g_{alpha,b}(0) = 1");
    c.finish();
}

void criterion2_metrics() {
    Criterion c(2, "metric suite: 1e4 random triples per metric", 5.0);
    auto dict = KdeDictionary::build({kernel_by_name("box", 1, 1.0 / 16.0),
                                      kernel_by_name("triangle", 1),
                                      kernel_by_name("cosine", 1)});
    const double th1 = kde_theta1(dict), th2 = kde_theta2(dict);
    struct P {
        size_t k, q;
        std::vector<double> h, hh;
    };
    auto sample = [&dict](Rng& rng) {
        P p;
        p.k = static_cast<size_t>(rng.uniform() * dict.kernels.size());
        p.q = static_cast<size_t>(rng.uniform() * dict.kernels.size());
        p.h = {std::exp(rng.uniform(std::log(0.02), 0.0))};
        p.hh = {std::exp(rng.uniform(std::log(0.02), 0.0))};
        return p;
    };
    Rng rng(2);
    auto dH = [](const P& a, const P& b) { return delta_H(a.h, b.h); };
    c.check(check_metric_axioms(dH, sample, 10000, rng).ok(), "Delta_H axioms");
    auto d1 = [&](const P& a, const P& b) { return kde_d1(dict, a.k, a.h, b.k, b.h, th1); };
    c.check(check_metric_axioms(d1, sample, 10000, rng).ok(), "d^(1)_theta axioms");
    auto d2 = [&](const P& a, const P& b) {
        return kde_d2(dict, a.k, a.h, a.q, a.hh, b.k, b.h, b.q, b.hh, th2);
    };
    c.check(check_metric_axioms(d2, sample, 10000, rng).ok(), "d^(2)_theta axioms");
    const double ms = 2.0 / 3.0;
    auto dstar = [&](const P& a, const P& b) {
        const double d = d1(a, b);
        return 4.2 * std::max(d, std::pow(d, ms));
    };
    c.check(check_metric_axioms(dstar, sample, 10000, rng).ok(), "d_* axioms");
    c.finish();
}

void criterion3_lemmas() {
    Criterion c(3, "lemma suite on >= 20 sampled configurations", 60.0);
    SuiteOverrides ov;
    ov.seed = 20250809;
    const auto res = suite_lemmas(json::object(), ov);
    for (const auto& n : res.notes)
        if (n.rfind("[FAIL]", 0) == 0) c.check(false, n);
    c.check(res.pass, "lemma suite pass flag");
    c.finish();
}

void criterion4_fixed_w() {
    Criterion c(4, "fixed-w tails (Theorem 1 / Corollaries 2-3), R = 2e4", 180.0);
    SuiteOverrides ov;
    ov.seed = 20250809;
    const auto res = suite_fixed_w(json::object(), ov);
    for (const auto& rep : res.reports) {
        bool has_informative = false;
        for (const auto& row : rep.rows) {
            if (row.verdict == "FAIL")
                c.check(false, rep.name + " s=" + std::to_string(rep.s) + " z=" +
                                   std::to_string(row.z) + " cp=" +
                                   std::to_string(row.cp_upper) + " > bound=" +
                                   std::to_string(row.bound));
            if (row.verdict == "PASS") has_informative = true;
        }
        c.check(has_informative, rep.name + ": no informative z at all");
    }
    for (const auto& n : res.notes)
        if (n.rfind("[FAIL]", 0) == 0) c.check(false, n);
    c.finish();
}

void criterion5_pathwise() {
    Criterion c(5, "pathwise plug-in inequality and consistency trend at n in {250,1000,4000}", 120.0);
    SuiteOverrides ov;
    ov.seed = 20250809;
    json cfg;
    cfg["run_sandwich"] = false; // part B runs separately in criterion 7
    const auto res = suite_random_majorant(cfg, ov);
    for (const auto& n : res.notes)
        if (n.rfind("[FAIL]", 0) == 0 && n.find("sandwich") == std::string::npos &&
            n.find("event-A") == std::string::npos)
            c.check(false, n);
    c.finish();
}

void criterion6_uniform() {
    Criterion c(6, "uniform non-random bound (Theorem 4) on a 50-member class", 180.0);
    SuiteOverrides ov;
    ov.seed = 20250809;
    const auto res = suite_uniform_nonrandom(json::object(), ov);
    c.check(res.constants.at("class_size").get<std::size_t>() == 50, "class has 50 members");
    for (const auto& n : res.notes)
        if (n.rfind("[FAIL]", 0) == 0) c.check(false, n);
    c.check(res.pass, "suite pass flag");
    c.finish();
}

void criterion7_sandwich() {
    Criterion c(7, "random majorant sandwich at n = 1e4, s = 3", 180.0);
    SuiteOverrides ov;
    ov.seed = 20250809;
    json cfg;
    cfg["run_pathwise"] = false; // part A runs in criterion 5
    const auto res = suite_random_majorant(cfg, ov);
    for (const auto& n : res.notes)
        if (n.rfind("[FAIL]", 0) == 0 &&
            (n.find("sandwich") != std::string::npos ||
             n.find("event-A") != std::string::npos))
            c.check(false, n);
    c.check(res.constants.contains("sandwich_ok_fraction"), "sandwich fraction reported");
    if (res.constants.contains("sandwich_ok_fraction"))
        c.check(res.constants.at("sandwich_ok_fraction").get<double>() >= 0.99,
                "sandwich fraction >= 0.99");
    c.finish();
}

void criterion8_kde() {
    Criterion c(8, "KDE Theorem-7 constants and entropy/covering", 10.0);
    // worked examples to 1e-9
    {
        KdeDictionary dict;
        dict.dim = 1;
        dict.L_K = 1.0;
        dict.k1 = 1.0;
        dict.k_inf = 1.0;
        dict.beta_K = 0.5;
        const auto k1c = kde_constants(1, dict, BandwidthSet({0.1}, {0.4}), 1000, 4.0, 1.0);
        c.check(near(k1c.theta0, 10.0 * c1(4.0), 1e-9), "theta0^(1) = 10 c1(4)");
        KdeDictionary d2 = dict;
        d2.dim = 2;
        const auto k2c =
            kde_constants(1, d2, BandwidthSet({0.1, 0.1}, {0.4, 0.4}), 1000, 4.0, 1.0);
        c.check(near(k2c.A_H, sq(std::log(4.0)), 1e-9), "A_H = (ln 4)^2");
        c.check(near(k2c.B_H, 4.0, 1e-9), "B_H = log2 16 = 4");
        const auto k3c = kde_constants(1, dict, BandwidthSet({0.1}, {0.4}), 10000, 3.0, 1.0);
        c.check(near(k3c.gamma, std::pow(1000.0, -1.0 / 6.0), 1e-9),
                "gamma = (nV)^{1/3-1/2}");
        c.check(near(k3c.y_star, k3c.theta1_const * std::pow(10000.0, 4.0 / 3.0 - 1.0), 1e-9),
                "y_*^(1) = theta1 n^{4/s-1}");
        const double y = 2.0;
        const double expect_C =
            1.0 + 2.0 * k3c.theta0 *
                      (std::sqrt(y) * (std::pow(2.0 * 0.4, 1.0 / 3.0) +
                                       std::pow(10000.0, -1.0 / 6.0)) +
                       y * std::pow(10000.0, -1.0 / 3.0));
        const auto k4c =
            kde_constants(1, dict, BandwidthSet({0.1}, {0.4}), 10000, 3.0, 1.0, y);
        c.check(near(k4c.C_star_y, expect_C, 1e-9), "C*_{xi,1}(y) formula");
    }
    // covering of H matches the entropy bound on 50 (delta, box) pairs
    {
        Rng rng(2026);
        bool ok = true;
        for (int t = 0; t < 50; ++t) {
            const double lo = std::exp(rng.uniform(std::log(0.01), std::log(0.3)));
            const double hi = std::min(1.0, lo * std::exp(rng.uniform(0.0, 3.0)));
            BandwidthSet b({lo}, {hi});
            const double delta = std::exp(rng.uniform(std::log(0.02), 0.0));
            if (std::log(double(b.covering_number(delta))) > b.entropy_bound(delta) + 1e-12)
                ok = false;
        }
        c.check(ok, "ln N_H <= d ln(3/delta) + sum (ln ln h_max/h_min)_+");
    }
    SuiteOverrides ov;
    ov.seed = 20250809;
    const auto res = suite_kde_thm7(json::object(), ov);
    c.check(res.pass, "kde-thm7 suite pass flag");
    c.finish();
}

void criterion9_regression() {
    Criterion c(9, "regression tails (Theorem 8) and pathwise bound, R = 2e4", 180.0);
    SuiteOverrides ov;
    ov.seed = 20250809;
    const auto res = suite_regression(json::object(), ov);
    for (const auto& rep : res.reports)
        for (const auto& row : rep.rows)
            if (row.verdict == "FAIL")
                c.check(false, rep.name + " s=" + std::to_string(rep.s) + " z=" +
                                   std::to_string(row.z));
    for (const auto& n : res.notes)
        if (n.rfind("[FAIL]", 0) == 0) c.check(false, n);
    c.finish();
}

void criterion10_determinism() {
    Criterion c(10, "determinism: two fixed-w runs byte-identical", 360.0);
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "lsbound_acceptance";
    fs::create_directories(dir);
    SuiteOverrides ov;
    ov.seed = 20250809;
    for (int run = 0; run < 2; ++run) {
        const auto res = suite_fixed_w(json::object(), ov);
        std::vector<ExperimentReport> reports = res.reports;
        write_text_file((dir / ("summary" + std::to_string(run) + ".csv")).string(),
                        summary_csv(reports));
    }
    const auto a = slurp((dir / "summary0.csv").string());
    const auto b = slurp((dir / "summary1.csv").string());
    c.check(!a.empty(), "summary.csv produced");
    c.check(a == b, "summary.csv byte-identical across runs");
    c.finish();
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    auto want = [only](int id) { return only == 0 || only == id; };
    if (want(1)) criterion1_constants();
    if (want(2)) criterion2_metrics();
    if (want(3)) criterion3_lemmas();
    if (want(4)) criterion4_fixed_w();
    if (want(5)) criterion5_pathwise();
    if (want(6)) criterion6_uniform();
    if (want(7)) criterion7_sandwich();
    if (want(8)) criterion8_kde();
    if (want(9)) criterion9_regression();
    if (want(10)) criterion10_determinism();
    if (g_failures > 0) {
        std::printf("ACCEPTANCE: %d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("ACCEPTANCE: all criteria passed\n");
    return 0;
}
