#include "lsbound/suites.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace lsbound;

namespace {

json load_or_empty(const std::string& path) {
    if (path.empty()) return json::object();
    return load_config_file(path);
}

int cmd_run(const std::string& config_path, const std::string& suite, const std::string& out,
            std::uint64_t seed, long reps, int jobs, bool seed_given) {
    json cfg = load_or_empty(config_path);
    json suite_cfg = cfg.contains(suite) ? cfg.at(suite) : cfg;
    SuiteOverrides ov;
    if (seed_given)
        ov.seed = seed;
    else if (suite_cfg.contains("seed"))
        ov.seed = suite_cfg.at("seed").get<std::uint64_t>();
    ov.reps = reps;
    ov.jobs = jobs;
    const SuiteResult res = run_suite(suite, suite_cfg, ov);
    json echo = suite_cfg;
    echo["seed"] = ov.seed;
    echo["suite"] = suite;
    write_suite_outputs(res, out, echo);
    for (const auto& n : res.notes) std::cout << n << "\n";
    for (const auto& r : res.reports)
        std::cout << (r.pass ? "[ok] " : "[FAIL] ") << r.name << " s=" << r.s << " ("
                  << r.rows.size() << " rows)\n";
    std::cout << (res.pass ? "PASS" : "FAIL") << " suite " << suite << " in "
              << res.runtime_sec << " s; outputs in " << out << "\n";
    return res.pass ? 0 : 1;
}

int cmd_eval(const std::string& quantity, const std::string& config_path) {
    json cfg = load_or_empty(config_path);
    const double s = cfg.value("s", 3.0);
    const double eps = cfg.value("eps", 0.5);
    const double y = cfg.value("y", 2.0);
    const int n = cfg.value("n", 1000);
    const double f_inf = cfg.value("f_inf", 1.0);

    json out;
    out["quantity"] = quantity;
    auto kde_ctx = [&](int i) {
        const auto sd = space_from_json(cfg.contains("space") ? cfg.at("space") : cfg);
        return kde_constants(i, sd.dict, sd.bw, cfg.value("n", sd.n), s, f_inf, y);
    };
    if (quantity == "c1") {
        out["value"] = c1(s);
    } else if (quantity == "c3") {
        out["value"] = c3(s, cfg.value("c2", 1.0));
    } else if (quantity == "c_star") {
        out["value"] = c_star_s(s, cfg.value("c2", 1.0));
    } else if (quantity == "u_eps") {
        out["value"] = u_eps(eps);
    } else if (quantity == "ubar_eps") {
        out["value"] = ubar_eps(eps, cfg.value("gamma", 0.0), s);
    } else if (quantity == "y_gamma") {
        out["value"] = y_gamma(cfg.value("lambda_A", 0.0), cfg.value("lambda_B", 0.0),
                               cfg.value("gamma", 1.0));
    } else if (quantity == "delta_H") {
        out["value"] = delta_H(cfg.at("h").get<std::vector<double>>(),
                               cfg.at("h_prime").get<std::vector<double>>());
    } else if (quantity == "entropy_bound") {
        const auto sd = space_from_json(cfg.contains("space") ? cfg.at("space") : cfg);
        out["value"] = sd.bw.entropy_bound(cfg.value("delta", 1.0));
    } else if (quantity == "theta0_1" || quantity == "theta0_2") {
        out["value"] = kde_ctx(quantity.back() - '0').theta0;
    } else if (quantity == "gamma_1" || quantity == "gamma_2") {
        out["value"] = kde_ctx(quantity.back() - '0').gamma;
    } else if (quantity == "y_star_1" || quantity == "y_star_2") {
        out["value"] = kde_ctx(quantity.back() - '0').y_star;
    } else if (quantity == "C_star_1" || quantity == "C_star_2") {
        out["value"] = kde_ctx(quantity.back() - '0').C_star_y;
    } else if (quantity == "A_H" || quantity == "B_H") {
        const auto c = kde_ctx(1);
        out["value"] = quantity == "A_H" ? c.A_H : c.B_H;
    } else if (quantity == "D" || quantity == "D_prime") {
        const double x = cfg.value("x", 2.0);
        const int d = cfg.value("dim", 1);
        const double L = cfg.value("L_K", 1.0), ki = cfg.value("k_inf", 1.0);
        out["value"] = quantity == "D" ? kde_D(x, d, L, ki) : kde_D_prime(x, d, L, ki);
    } else if (quantity == "g_alpha_b") {
        out["value"] = g_alpha_b(cfg.value("x", 1.0), cfg.value("alpha", 1.0),
                                 cfg.value("b", 1.0), s);
    } else if (quantity == "G2") {
        out["value"] = G2(cfg.value("x", 1.0), cfg.value("p", 4.0), cfg.value("P", 1.0), n, s);
    } else {
        std::cerr << "unknown quantity: " << quantity << "\n"
                  << "known: c1 c3 c_star u_eps ubar_eps y_gamma delta_H entropy_bound "
                     "theta0_{1,2} gamma_{1,2} y_star_{1,2} C_star_{1,2} A_H B_H D D_prime "
                     "g_alpha_b G2\n";
        return 2;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_cover(const std::string& space_path, double delta) {
    const json j = load_config_file(space_path);
    json out;
    out["delta"] = delta;
    if (j.contains("kernels")) {
        const auto sd = space_from_json(j);
        const auto cls = sd.to_class();
        auto sp = cls.space();
        out["space"] = "kernels x bandwidths (d1_theta1)";
        out["product_rule"] = sp.covering_analytic(delta);
        out["theta1"] = cls.theta1;
        if (sp.size() <= 200) {
            auto enumerated = sp;
            enumerated.covering_analytic = nullptr;
            const auto c = covering_number(enumerated, delta);
            out["covering_number"] = c.count;
            out["exact"] = c.exact;
            out["greedy_lower_bound"] = c.greedy_lower_bound;
        } else {
            out["covering_number"] = sp.covering_analytic(delta);
            out["exact"] = false;
        }
    } else if (j.contains("bandwidths")) {
        const auto& b = j.at("bandwidths");
        BandwidthSet bw(b.at("min").get<std::vector<double>>(),
                        b.at("max").get<std::vector<double>>());
        out["space"] = "bandwidth box (Delta_H)";
        out["covering_number"] = bw.covering_number(delta);
        out["exact"] = true;
        if (delta <= 1.0) out["entropy_bound"] = bw.entropy_bound(delta);
    } else {
        throw config_error("cover: space file needs 'kernels' or 'bandwidths'");
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform L_s-norm bounds for empirical and regression-type processes"};
    app.require_subcommand(1);

    std::string config_path, suite, out = "out", quantity, space_path;
    std::uint64_t seed = 20250809;
    long reps = -1;
    int jobs = 0;
    double delta = 0.1;

    auto* run = app.add_subcommand("run", "run a verification suite");
    run->add_option("--config", config_path, "config file (TOML or JSON)");
    run->add_option("--suite", suite,
                    "fixed-w | uniform-nonrandom | random-majorant | kde-thm7 | regression | "
                    "lemmas")
        ->required();
    run->add_option("--out", out, "output directory");
    auto* seed_opt = run->add_option("--seed", seed, "master seed");
    run->add_option("--reps", reps, "replication count override");
    run->add_option("--jobs", jobs, "worker threads (0 = hardware)");

    auto* eval = app.add_subcommand("eval", "print a single constant/bound as JSON");
    eval->add_option("--quantity", quantity, "constant name")->required();
    eval->add_option("--config", config_path, "config file with the inputs");

    auto* cover = app.add_subcommand("cover", "covering number of a parameter space");
    cover->add_option("--space", space_path, "space description (JSON/TOML)")->required();
    cover->add_option("--delta", delta, "ball radius")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed())
            return cmd_run(config_path, suite, out, seed, reps, jobs, seed_opt->count() > 0);
        if (eval->parsed()) return cmd_eval(quantity, config_path);
        if (cover->parsed()) return cmd_cover(space_path, delta);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
