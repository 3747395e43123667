#include "lsbound/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <mutex>

namespace lsbound {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

double cfg_num(const json& cfg, const std::string& key, double dflt) {
    return cfg.contains(key) ? cfg.at(key).get<double>() : dflt;
}

long cfg_long(const json& cfg, const std::string& key, long dflt) {
    return cfg.contains(key) ? cfg.at(key).get<long>() : dflt;
}

// Default class used by the MC suites: smoothed-box kernel, h = 0.1, f uniform.
Kernel default_kernel(const json& cfg) {
    const double ramp = cfg_num(cfg, "ramp", 1.0 / 16.0);
    return kernel_by_name(cfg.value("kernel", std::string("box")), 1, ramp);
}

Density default_density(const json& cfg) {
    if (cfg.contains("density")) return density_from_json(cfg.at("density"));
    return uniform_density(Box::interval(0.0, 1.0));
}

Grid1 class_grid(const std::vector<WeightFunction>& members, const Density& f, int cells) {
    double lo = kInf, hi = -kInf;
    for (const auto& w : members) {
        lo = std::min(lo, w.base_support.lo[0] + f.support.lo[0]);
        hi = std::max(hi, w.base_support.hi[0] + f.support.hi[0]);
    }
    return Grid1(lo, hi, cells);
}

// z at which bound(z) first drops below `level`, found by doubling + bisection
double solve_bound_level(const std::function<double(double)>& bound, double level) {
    double hi = 1e-6;
    while (bound(hi) > level && hi < 1e12) hi *= 2.0;
    double lo = hi / 2.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bound(mid) > level ? lo : hi) = mid;
    }
    return hi;
}

// discretization slack applied to exact pathwise ceilings computed by
// quadrature on a different grid offset
constexpr double kPathwiseSlack = 2e-3;

} // namespace

// ---------------------------------------------------------------------------
// fixed-w suite: Theorem 1 + Corollaries 2-3 tails against MC frequencies
// ---------------------------------------------------------------------------
SuiteResult suite_fixed_w(const json& cfg, const SuiteOverrides& ov) {
    Timer timer;
    SuiteResult res;
    res.suite = "fixed-w";

    const int n = static_cast<int>(cfg_long(cfg, "n", 200));
    const long reps = ov.reps > 0 ? ov.reps : cfg_long(cfg, "reps", 20000);
    const int cells = static_cast<int>(cfg_long(cfg, "grid_points", 1024));
    const int zcount = static_cast<int>(cfg_long(cfg, "z_count", 20));
    std::vector<double> s_list = cfg.contains("s") ? cfg.at("s").get<std::vector<double>>()
                                                   : std::vector<double>{1.5, 2.0, 3.0};
    const double h = cfg_num(cfg, "h", 0.1);
    const int jobs = ov.jobs > 0 ? ov.jobs : default_jobs();

    const Kernel K = default_kernel(cfg);
    const Density f = default_density(cfg);
    const WeightFunction w = kernel_weight(K, {h}, 1.0 / (n * h), "w");
    QuadratureConfig quad;

    Simulator sim({w}, f, ProcessKind::xi, n, class_grid({w}, f, cells));

    // recomputation spot check of the process values on 1% of grid points
    {
        Simulator::Workspace ws;
        sim.draw(ov.seed, 0, ws);
        std::vector<double> proc;
        sim.evaluate(0, ws, proc);
        bool ok = true;
        const auto& grid = sim.grid();
        for (int j = 0; j < grid.n; j += std::max(1, grid.n / 100)) {
            double direct = 0.0;
            for (double x : ws.xs) {
                const double u = grid.point(j) - x;
                direct += w.base(&u);
            }
            direct -= sim.centering(0)[static_cast<size_t>(j)];
            if (std::abs(direct - proc[static_cast<size_t>(j)]) >
                1e-9 * (1.0 + std::abs(direct))) {
                ok = false;
                break;
            }
        }
        res.note(ok, "process recomputation spot check (1% of grid points)");
    }

    struct Variant {
        std::string name;
        double s;
        double offset; // threshold = offset + z
        std::function<double(double)> bound;
        double ceiling; // deterministic ceiling on the statistic, 0 = none
    };
    std::vector<Variant> variants;
    json consts = json::object();
    for (double s : s_list) {
        const auto b = fixed_weight_bound(w, f, s, n, quad);
        json cj = to_json(b);
        cj["U_xi"] = U_xi(w, f, s, n, quad);
        cj["A_xi_sq"] = A_xi_sq(w, f.f_inf, s, n, quad);
        cj["B_xi"] = B_xi(w, s, n, quad);
        consts["s=" + std::to_string(s)] = cj;
        variants.push_back({"thm1", s, b.rho, [b](double z) { return theorem1_tail(b, z); },
                            2.0 * n * b.M_s * (1.0 + kPathwiseSlack)});
        if (s < 2.0) {
            const double Ms = b.M_s;
            variants.push_back({"cor2", s, 4.0 * std::pow(double(n), 1.0 / s) * Ms,
                                [Ms, s, n](double z) { return corollary2_tail(Ms, s, n, z); },
                                0.0});
        }
        if (s > 2.0) {
            const double sqf = lp_norm(
                [&](const double* x) { return std::sqrt(f.pdf(x)); }, f.support, s, quad)
                .value;
            const auto c3b = corollary3_bound(w, f.f_inf, sqf, s, n, quad);
            variants.push_back({"cor3", s, c3b.rho_tilde,
                                [c3b](double z) { return corollary3_tail(c3b, z); }, 0.0});
        }
    }
    res.constants = consts;

    // rows: per variant a z grid bracketing the informative range
    struct Row {
        std::size_t variant;
        double z, threshold, bound;
    };
    std::vector<Row> rows;
    for (std::size_t v = 0; v < variants.size(); ++v) {
        const double z08 = solve_bound_level(variants[v].bound, 0.8);
        for (double z : linspace(0.4 * z08, 2.4 * z08, zcount))
            rows.push_back({v, z, variants[v].offset + z, variants[v].bound(z)});
        if (variants[v].ceiling > 0.0) rows.push_back({v, kNaN, variants[v].ceiling, 0.0});
    }

    // one pass over replications, counting all rows
    std::vector<std::atomic<long>> hits(rows.size());
    for (auto& h_ : hits) h_.store(0);
    std::vector<double> svals = s_list;
    std::mutex mu;
    sim.for_each_replication(ov.seed, reps, jobs, [&](long, Simulator::Workspace& ws) {
        thread_local std::vector<double> proc;
        sim.evaluate(0, ws, proc);
        std::vector<double> norms(svals.size());
        for (std::size_t k = 0; k < svals.size(); ++k) norms[k] = sim.grid_norm(proc, svals[k]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double s = variants[rows[r].variant].s;
            const auto k = static_cast<std::size_t>(
                std::find(svals.begin(), svals.end(), s) - svals.begin());
            if (norms[k] >= rows[r].threshold) hits[r].fetch_add(1, std::memory_order_relaxed);
        }
    });

    // quadrature consistency of the reported statistic: grid G vs 2G on rep 0
    {
        Simulator sim2({w}, f, ProcessKind::xi, n, class_grid({w}, f, 2 * cells));
        Simulator::Workspace ws;
        std::vector<double> p1, p2;
        sim.draw(ov.seed, 0, ws);
        sim.evaluate(0, ws, p1);
        sim2.draw(ov.seed, 0, ws);
        sim2.evaluate(0, ws, p2);
        for (double s : svals) {
            const double a = sim.grid_norm(p1, s), b = sim2.grid_norm(p2, s);
            GuardedValue g;
            g.value = a;
            g.refine_rel_dev = std::abs(a - b) / std::max({a, b, 1e-300});
            g.within_tol = g.refine_rel_dev <= quad.rtol;
            res.note(g.within_tol, "statistic grid consistency G vs 2G, s=" +
                                       std::to_string(s) + " (rel dev " +
                                       std::to_string(g.refine_rel_dev) + ")");
        }
    }

    // package one report per variant
    for (std::size_t v = 0; v < variants.size(); ++v) {
        ExperimentReport rep;
        rep.name = res.suite + "/" + variants[v].name;
        rep.seed = ov.seed;
        rep.reps = reps;
        rep.n = n;
        rep.s = variants[v].s;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].variant != v) continue;
            TailRow row;
            row.z = rows[r].z;
            row.threshold = rows[r].threshold;
            row.bound = rows[r].bound;
            row.exceed = hits[r].load();
            row.reps = reps;
            rep.rows.push_back(row);
        }
        rep.finalize();
        res.pass = res.pass && rep.pass;
        res.reports.push_back(std::move(rep));
    }
    res.runtime_sec = timer.elapsed();
    return res;
}

// ---------------------------------------------------------------------------
// uniform-nonrandom suite: Theorem 4 sup-events over a 50-member class
// ---------------------------------------------------------------------------
SuiteResult suite_uniform_nonrandom(const json& cfg, const SuiteOverrides& ov) {
    Timer timer;
    SuiteResult res;
    res.suite = "uniform-nonrandom";

    const int n = static_cast<int>(cfg_long(cfg, "n", 100));
    const long reps = ov.reps > 0 ? ov.reps : cfg_long(cfg, "reps", 10000);
    const int cells = static_cast<int>(cfg_long(cfg, "grid_points", 1024));
    const double eps = cfg_num(cfg, "eps", 1.0);
    const int jobs = ov.jobs > 0 ? ov.jobs : default_jobs();
    std::vector<double> s_list = cfg.contains("s") ? cfg.at("s").get<std::vector<double>>()
                                                   : std::vector<double>{1.5, 2.0};

    std::vector<Kernel> kernels = {kernel_by_name("box", 1, 1.0 / 16.0),
                                   kernel_by_name("box", 1, 1.0 / 8.0),
                                   kernel_by_name("triangle", 1),
                                   kernel_by_name("cosine", 1),
                                   kernel_by_name("epanechnikov", 1)};
    auto dict = KdeDictionary::build(kernels, cfg_num(cfg, "beta_K", 0.5));
    BandwidthSet bw({cfg_num(cfg, "h_min", 0.05)}, {cfg_num(cfg, "h_max", 0.2)});
    const int per = static_cast<int>(cfg_long(cfg, "bw_count", 10));
    auto cls0 = KdeClass::build(dict, bw, per, n, 1.0);
    const Density f = default_density(cfg);

    WeightClass wc = cls0.weight_class(cfg_num(cfg, "beta", 0.5));
    res.constants["class_size"] = wc.space.size();
    res.constants["mu_star"] = wc.mu_star;
    res.constants["mu"] = wc.mu;
    res.constants["theta1"] = cls0.theta1;

    std::vector<WeightFunction> members = wc.space.weights;
    Simulator sim(members, f, ProcessKind::xi, n, class_grid(members, f, cells));

    for (double s : s_list) {
        // normalized sup statistic: T = max_w ||xi_w||_s / (n^{1/s} ||w||_s)
        // (s < 2) or / (sqrt(n) ||w||_2); the Theorem-4 event at z is
        // { T >= majorant_factor(z) }.
        const double p_norm = s < 2.0 ? s : 2.0;
        std::vector<double> denom(members.size());
        for (std::size_t i = 0; i < members.size(); ++i)
            denom[i] = std::pow(double(n), 1.0 / p_norm) * wc.norm_p(i, p_norm);

        // z grid: from the precondition floor upward
        const double ue = u_eps(eps);
        const double floor_z =
            s < 2.0 ? 0.5 * std::sqrt(37.0) * std::pow(double(n), 0.5 - 1.0 / s)
                    : std::sqrt(8.0 * (wc.mu_star * sq(wc.f_inf) + 4.0 / std::sqrt(double(n))));
        // probability version of the Theorem-4 tail via the uniform machinery:
        // P <= N(eps/8) max(1, eps^-1 log2(R/r)) [1 + L_exp] e^{-y(z)/2}
        const double r_lo = s < 2.0 ? 4.0 * wc.wunder(s) : wc.wunder(2.0);
        const double r_hi = s < 2.0 ? 4.0 * wc.wbar(s) : wc.wbar(2.0);
        const double n_eps8 = static_cast<double>(covering_number(wc.space, eps / 8.0).count);
        const double L_exp = chaining_series_sqrt(wc.space, exp_tail(), eps).value;
        const double slices = std::max(1.0, std::log2(r_hi / r_lo) / eps);
        auto y_of_z = [&](double z) {
            if (s < 2.0) return 4.0 / 37.0 * std::pow(double(n), 2.0 / s - 1.0) * z * z;
            return z * z / (8.0 * (sq(wc.f_inf) * wc.mu_star + 4.0 / std::sqrt(double(n))));
        };
        auto prob_tail = [&](double z) {
            return n_eps8 * slices * (1.0 + L_exp) * std::exp(-0.5 * y_of_z(z));
        };
        auto thr_factor = [&](double z) {
            return s < 2.0 ? 4.0 * ue * (1.0 + z) : ue * (1.0 + z + z * z / 12.0);
        };
        // the Theorem-4 exponent is already large at the informative edge, so
        // the bound races from 0.8 to below MC resolution within a few percent
        // of z; sample that window finely and add two far points
        const double z08 = std::max(floor_z, solve_bound_level(prob_tail, 0.8));
        std::vector<double> zg = linspace(0.99 * z08, 1.12 * z08, 10);
        zg.push_back(1.5 * z08);
        zg.push_back(2.0 * z08);

        ExperimentReport rep;
        rep.name = res.suite + "/thm4";
        rep.seed = ov.seed;
        rep.reps = reps;
        rep.n = n;
        rep.s = s;
        std::vector<double> thresholds;
        for (double z : zg) {
            TailRow row;
            row.z = z;
            row.threshold = thr_factor(z);
            row.bound = prob_tail(z);
            rep.rows.push_back(row);
            thresholds.push_back(row.threshold);
        }
        std::vector<std::atomic<long>> hits(zg.size());
        for (auto& h_ : hits) h_.store(0);
        sim.for_each_replication(ov.seed + static_cast<std::uint64_t>(s * 1000), reps, jobs,
                                 [&](long, Simulator::Workspace& ws) {
                                     thread_local std::vector<double> proc;
                                     double T = 0.0;
                                     for (std::size_t i = 0; i < members.size(); ++i) {
                                         sim.evaluate(i, ws, proc);
                                         T = std::max(T, sim.grid_norm(proc, s) / denom[i]);
                                     }
                                     for (std::size_t k = 0; k < thresholds.size(); ++k)
                                         if (T >= thresholds[k])
                                             hits[k].fetch_add(1, std::memory_order_relaxed);
                                 });
        for (std::size_t k = 0; k < zg.size(); ++k) {
            rep.rows[k].exceed = hits[k].load();
            rep.rows[k].reps = reps;
        }
        rep.finalize();
        // the criterion targets the three smallest informative z values
        // (rows the replication count can actually resolve)
        int informative = 0;
        bool three_ok = true;
        for (const auto& row : rep.rows) {
            if (row.verdict.rfind("SKIPPED", 0) == 0) continue;
            if (informative < 3 && row.verdict != "PASS") three_ok = false;
            ++informative;
        }
        res.note(informative >= 3, "s=" + std::to_string(s) +
                                       ": at least three informative z values");
        res.note(three_ok, "s=" + std::to_string(s) +
                               ": three smallest informative z values pass");
        res.pass = res.pass && rep.pass;
        res.reports.push_back(std::move(rep));

        // Theorem-4 moment-form constants for the report
        try {
            const auto t4 = theorem4_bound(wc, s, eps, z08, 1.0);
            res.constants["thm4_s=" + std::to_string(s)] = to_json(t4);
        } catch (const std::exception& e) {
            res.constants["thm4_s=" + std::to_string(s)] = std::string("error: ") + e.what();
        }
    }
    res.runtime_sec = timer.elapsed();
    return res;
}

// ---------------------------------------------------------------------------
// random-majorant suite: pathwise plug-in identities and the sandwich control
// ---------------------------------------------------------------------------
SuiteResult suite_random_majorant(const json& cfg, const SuiteOverrides& ov) {
    Timer timer;
    SuiteResult res;
    res.suite = "random-majorant";
    const int jobs = ov.jobs > 0 ? ov.jobs : default_jobs();
    const double s = cfg_num(cfg, "s", 3.0);
    const Density f = default_density(cfg);
    QuadratureConfig quad;

    // Part A: pathwise |Sigma_hat - Sigma| <= sqrt(||xi_{w^2}||_{s/2} / n) and
    // Sigma_hat <= M_s at n in {250, 1000, 4000}; the median relative error
    // must shrink from the smallest to the largest n.
    if (cfg.value("run_pathwise", true)) {
        const Kernel K = default_kernel(cfg);
        const double h = cfg_num(cfg, "h", 0.1);
        std::vector<long> n_list = {250, 1000, 4000};
        if (cfg.contains("n_list")) n_list = cfg.at("n_list").get<std::vector<long>>();
        const long reps = ov.reps > 0 ? ov.reps : cfg_long(cfg, "reps_pathwise", 5000);
        std::vector<double> medians;
        for (long n : n_list) {
            const WeightFunction w = kernel_weight(K, {h}, 1.0 / (n * h), "w");
            const WeightFunction w2 = weight_square(w);
            const int cells = static_cast<int>(cfg_long(cfg, "grid_points", 1024));
            Simulator sim({w, w2}, f, ProcessKind::xi, static_cast<int>(n),
                          class_grid({w, w2}, f, cells));
            const auto& grid = sim.grid();
            // Sigma_s on the same grid and with the same inner quadrature as
            // the simulator: sigma^2(t) = centering(w2)/n
            const auto& c2 = sim.centering(1);
            double acc = 0.0;
            for (double v : c2) acc += std::pow(std::max(0.0, v / n), 0.5 * s);
            const double Sigma = std::pow(acc * grid.step(), 1.0 / s);
            const double Ms = m_p(w, s, nullptr, quad);

            std::vector<double> relerr(static_cast<size_t>(reps), 0.0);
            std::atomic<long> viol_r1{0}, viol_ms{0};
            sim.for_each_replication(
                ov.seed + static_cast<std::uint64_t>(n), reps, jobs,
                [&](long rep_i, Simulator::Workspace& ws) {
                    thread_local std::vector<double> xi2;
                    sim.evaluate(1, ws, xi2); // xi_{w^2}
                    // S^2(t) = xi_{w^2}(t)/n + sigma^2(t)
                    thread_local std::vector<double> s2;
                    s2.assign(xi2.size(), 0.0);
                    for (std::size_t j = 0; j < xi2.size(); ++j)
                        s2[j] = xi2[j] / n + c2[j] / n;
                    double acc_hat = 0.0;
                    for (double v : s2) acc_hat += std::pow(std::max(0.0, v), 0.5 * s);
                    const double sigma_hat = std::pow(acc_hat * grid.step(), 1.0 / s);
                    const double rhs = std::sqrt(sim.grid_norm(xi2, 0.5 * s) / n);
                    if (std::abs(sigma_hat - Sigma) > rhs * (1.0 + 1e-9) + 1e-12)
                        viol_r1.fetch_add(1);
                    if (sigma_hat > Ms * (1.0 + kPathwiseSlack)) viol_ms.fetch_add(1);
                    relerr[static_cast<size_t>(rep_i)] =
                        std::abs(sigma_hat - Sigma) / std::max(Sigma, 1e-300);
                });
            std::sort(relerr.begin(), relerr.end());
            medians.push_back(relerr[relerr.size() / 2]);
            res.note(viol_r1.load() == 0, "n=" + std::to_string(n) +
                                              ": pathwise plug-in error inequality, violations=" +
                                              std::to_string(viol_r1.load()));
            res.note(viol_ms.load() == 0, "n=" + std::to_string(n) +
                                              ": Sigma_hat <= M_s pathwise, violations=" +
                                              std::to_string(viol_ms.load()));
            res.constants["median_relerr_n=" + std::to_string(n)] = medians.back();
        }
        if (n_list.size() >= 2)
            res.note(medians.back() < medians.front(),
                     "consistency trend: median |Sigma_hat - Sigma|/Sigma shrinks with n");
    }

    // Part B: sandwich U_hat <= [1 + 4 c1(s)(1+eps) gamma] U on >= 99% of
    // realizations; every violation must coincide with an event-A violation.
    if (cfg.value("run_sandwich", true)) {
        const int n = static_cast<int>(cfg_long(cfg, "n_sandwich", 10000));
        const long reps = cfg_long(cfg, "reps_sandwich", 1000);
        const double eps = cfg_num(cfg, "eps", 0.5);
        auto dict = KdeDictionary::build(
            {kernel_by_name("box", 1, 1.0 / 16.0), kernel_by_name("triangle", 1)}, 0.5);
        BandwidthSet bw({cfg_num(cfg, "h_min", 0.1)}, {cfg_num(cfg, "h_max", 0.2)});
        auto cls = KdeClass::build(dict, bw, 2, n, f.f_inf);
        const std::size_t m = cls.members.size();

        std::vector<WeightFunction> members, sq_members;
        for (std::size_t i = 0; i < m; ++i) members.push_back(cls.weight(i));
        for (std::size_t i = 0; i < m; ++i) sq_members.push_back(weight_square(members[i]));
        std::vector<WeightFunction> all = members;
        all.insert(all.end(), sq_members.begin(), sq_members.end());
        const int cells = static_cast<int>(cfg_long(cfg, "grid_points", 512));
        Simulator sim(all, f, ProcessKind::xi, n, class_grid(all, f, cells));
        const auto& grid = sim.grid();

        const double mu = n * bw.volume_min();
        const double gamma = theorem5_gamma(mu, s);
        const double infl = 1.0 + 4.0 * c1(s) * (1.0 + eps) * gamma;
        res.constants["mu"] = mu;
        res.constants["gamma"] = gamma;
        res.constants["inflation"] = infl;

        // U_xi(w, f) on the simulation grid (same quadratures as Sigma_hat)
        std::vector<double> U(m), Ms(m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& cw = sim.centering(i + m); // n * E w^2(t - X)
            double acc = 0.0;
            for (double v : cw) acc += std::pow(std::max(0.0, v / n), 0.5 * s);
            const double Sigma = std::pow(acc * grid.step(), 1.0 / s);
            Ms[i] = m_p(members[i], s, nullptr, quad);
            U[i] = c1(s) * (std::sqrt(double(n)) * Sigma +
                            2.0 * std::pow(double(n), 1.0 / s) * Ms[i]);
        }
        const auto slices = build_slices(U, 1.0);

        std::atomic<long> viol{0}, viol_with_A{0};
        sim.for_each_replication(ov.seed + 777, reps, jobs, [&](long, Simulator::Workspace& ws) {
            thread_local std::vector<double> xi2;
            bool eventA = true;
            std::vector<double> xi2norm(m);
            for (std::size_t i = 0; i < m; ++i) {
                sim.evaluate(i + m, ws, xi2);
                xi2norm[i] = sim.grid_norm(xi2, 0.5 * s);
            }
            for (const auto& sl : slices.slices) {
                double sup = 0.0;
                for (std::size_t i : sl.members) sup = std::max(sup, xi2norm[i]);
                if (sup > sq(2.0 * (1.0 + eps) * gamma * sl.level)) eventA = false;
            }
            bool sandwich = true;
            for (std::size_t i = 0; i < m; ++i) {
                const auto& cw = sim.centering(i + m);
                sim.evaluate(i + m, ws, xi2);
                double acc_hat = 0.0;
                for (std::size_t j = 0; j < xi2.size(); ++j)
                    acc_hat += std::pow(std::max(0.0, xi2[j] / n + cw[j] / n), 0.5 * s);
                const double sigma_hat = std::pow(acc_hat * grid.step(), 1.0 / s);
                const double u_hat =
                    c1(s) * (std::sqrt(double(n)) * sigma_hat +
                             2.0 * std::pow(double(n), 1.0 / s) * Ms[i]);
                if (u_hat > infl * U[i] * (1.0 + 1e-9)) sandwich = false;
            }
            if (!sandwich) {
                viol.fetch_add(1);
                if (eventA) viol_with_A.fetch_add(1);
            }
        });
        const double frac = 1.0 - static_cast<double>(viol.load()) / reps;
        res.constants["sandwich_ok_fraction"] = frac;
        res.note(frac >= 0.99, "sandwich holds in >= 99% of realizations (" +
                                   std::to_string(frac) + ")");
        res.note(viol_with_A.load() == 0,
                 "every sandwich violation coincides with an event-A violation");
    }
    res.runtime_sec = timer.elapsed();
    return res;
}

// ---------------------------------------------------------------------------
// kde-thm7 suite: Theorem 6/7 constants, entropy bound, majorant surfaces
// ---------------------------------------------------------------------------
SuiteResult suite_kde_thm7(const json& cfg, const SuiteOverrides& ov) {
    Timer timer;
    SuiteResult res;
    res.suite = "kde-thm7";

    const int n = static_cast<int>(cfg_long(cfg, "n", 1000));
    const double s = cfg_num(cfg, "s", 3.0);
    auto dict = KdeDictionary::build({kernel_by_name("box", 1, 1.0 / 16.0),
                                      kernel_by_name("triangle", 1),
                                      kernel_by_name("cosine", 1)},
                                     cfg_num(cfg, "beta_K", 0.5));
    BandwidthSet bw({cfg_num(cfg, "h_min", 0.05)}, {cfg_num(cfg, "h_max", 0.4)});

    for (int i = 1; i <= 2; ++i)
        res.constants["process_" + std::to_string(i)] =
            to_json(kde_constants(i, dict, bw, n, s, 1.0, 2.0));
    res.constants["theta1_dist"] = kde_theta1(dict);
    res.constants["theta2_dist"] = kde_theta2(dict);
    res.constants["D_prime_2"] = kde_D_prime(2.0, dict.dim, dict.L_K, dict.k_inf);
    res.constants["C_K"] = dict.C_K;

    // covering of H matches the entropy bound on 50 (delta, box) pairs
    {
        Rng rng(ov.seed ^ 0xC0DE);
        bool ok = true;
        int checked = 0;
        for (int t = 0; t < 50; ++t) {
            const double lo = std::exp(rng.uniform(std::log(0.01), std::log(0.3)));
            const double hi = lo * std::exp(rng.uniform(0.0, 3.0));
            BandwidthSet b({lo}, {std::min(hi, 1.0)});
            const double delta = std::exp(rng.uniform(std::log(0.01), 0.0));
            const double lnN = std::log(static_cast<double>(b.covering_number(delta)));
            const double bound = b.entropy_bound(delta);
            ++checked;
            if (lnN > bound + 1e-12) ok = false;
        }
        res.note(ok, "ln N_H(delta) <= entropy bound on " + std::to_string(checked) +
                         " (delta, box) pairs");
    }
    // the same check for the configured product space: strip the analytic
    // override so the greedy/exact covering actually enumerates
    {
        auto cls = KdeClass::build(dict, bw, 6, n, 1.0);
        auto sp = cls.space();
        auto enumerated = sp;
        enumerated.covering_analytic = nullptr;
        bool ok = true;
        for (double delta : {0.5 * cls.theta1, 1.0 * cls.theta1, 2.0 * cls.theta1}) {
            const auto exact = covering_number(enumerated, delta);
            const std::size_t analytic = sp.covering_analytic(delta);
            if (exact.exact && exact.count > analytic) ok = false;
        }
        res.note(ok, "enumerated covering never exceeds the product rule");
    }
    // gated assembly: report either the bound or the precondition failure
    try {
        const auto rep = theorem7_assembly(1, dict, bw, n, s, 0.5, 2.0, 1.0);
        res.constants["thm7_T1_tilde"] = rep.T1_tilde;
        res.constants["thm7_tail_moment"] = rep.tail_moment;
    } catch (const precondition_error& e) {
        res.constants["thm7_precondition"] = e.what();
    }
    // majorant surface over the (K, h) grid for plotting
    {
        auto cls = KdeClass::build(dict, bw, 8, n, 1.0);
        const Density f = default_density(cfg);
        res.extra_files.emplace_back("majorant_surface.csv",
                                     kde_majorant_surface_csv(cls, f, s));
    }
    res.runtime_sec = timer.elapsed();
    return res;
}

std::string kde_majorant_surface_csv(const KdeClass& cls, const Density& f, double s) {
    std::ostringstream out;
    out << "kernel,h,U,U_bar\n";
    QuadratureConfig quad;
    char buf[256];
    for (std::size_t i = 0; i < cls.members.size(); ++i) {
        const auto w = cls.weight(i);
        const auto mj = kde_majorants(1, w, &f, nullptr, s, cls.n, quad);
        const auto& m = cls.members[i];
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n",
                      cls.dict.kernels[m.kernel].name.c_str(), cls.bandwidths[m.h_idx][0],
                      s > 2.0 ? mj.U : mj.U, s > 2.0 ? mj.U_bar : mj.U);
        out << buf;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// regression suite: Theorem 8 tails + pathwise triangle bound
// ---------------------------------------------------------------------------
SuiteResult suite_regression(const json& cfg, const SuiteOverrides& ov) {
    Timer timer;
    SuiteResult res;
    res.suite = "regression";

    const int n = static_cast<int>(cfg_long(cfg, "n", 200));
    const long reps = ov.reps > 0 ? ov.reps : cfg_long(cfg, "reps", 20000);
    const int cells = static_cast<int>(cfg_long(cfg, "grid_points", 1024));
    const int zcount = static_cast<int>(cfg_long(cfg, "z_count", 16));
    const int jobs = ov.jobs > 0 ? ov.jobs : default_jobs();
    std::vector<double> s_list = cfg.contains("s") ? cfg.at("s").get<std::vector<double>>()
                                                   : std::vector<double>{1.5, 3.0};
    std::vector<std::string> noises = {"gaussian", "laplace"};
    if (cfg.contains("noises")) noises = cfg.at("noises").get<std::vector<std::string>>();

    const Kernel K = default_kernel(cfg);
    const double h = cfg_num(cfg, "h", 0.1);
    const Density f = default_density(cfg);
    const WeightFunction w = kernel_weight(K, {h}, 1.0 / (n * h), "w");
    QuadratureConfig quad;

    for (const auto& noise_name : noises) {
        const NoiseModel noise = noise_by_name(noise_name);
        Simulator sim({w}, f, ProcessKind::eta, n, class_grid({w}, f, cells), noise);
        for (double s : s_list) {
            const auto b = regression_fixed_bound(w, f, noise, s, n, quad);
            json cj;
            cj["varrho_s"] = b.rho;
            cj["varpi_sq"] = b.omega_sq;
            cj["M_s"] = b.M_s;
            cj["sigma_eps"] = noise.sigma_eps();
            cj["e_s"] = noise.e_s(s);
            res.constants[noise_name + "_s=" + std::to_string(s)] = cj;

            auto bound = [&](double z) { return theorem8_tail(b, z); };
            const double z08 = solve_bound_level(bound, 0.8);
            ExperimentReport rep;
            rep.name = res.suite + "/thm8-" + noise_name;
            rep.seed = ov.seed;
            rep.reps = reps;
            rep.n = n;
            rep.s = s;
            std::vector<double> thresholds;
            for (double z : linspace(0.4 * z08, 2.4 * z08, zcount)) {
                TailRow row;
                row.z = z;
                row.threshold = b.rho + z;
                row.bound = bound(z);
                rep.rows.push_back(row);
                thresholds.push_back(row.threshold);
            }
            const double Ms = b.M_s;
            std::vector<std::atomic<long>> hits(thresholds.size());
            for (auto& h_ : hits) h_.store(0);
            std::atomic<long> pathwise_viol{0};
            sim.for_each_replication(
                ov.seed + static_cast<std::uint64_t>(s * 100) + (noise_name == "laplace"),
                reps, jobs, [&](long, Simulator::Workspace& ws) {
                    thread_local std::vector<double> proc;
                    sim.evaluate(0, ws, proc);
                    const double norm = sim.grid_norm(proc, s);
                    for (std::size_t k = 0; k < thresholds.size(); ++k)
                        if (norm >= thresholds[k])
                            hits[k].fetch_add(1, std::memory_order_relaxed);
                    double abs_eps = 0.0;
                    for (double e : ws.eps) abs_eps += std::abs(e);
                    if (norm > Ms * abs_eps * (1.0 + kPathwiseSlack) + 1e-12)
                        pathwise_viol.fetch_add(1);
                });
            for (std::size_t k = 0; k < thresholds.size(); ++k) {
                rep.rows[k].exceed = hits[k].load();
                rep.rows[k].reps = reps;
            }
            rep.finalize();
            res.note(pathwise_viol.load() == 0,
                     noise_name + " s=" + std::to_string(s) +
                         ": pathwise ||eta_w||_s <= M_s sum|eps| (violations=" +
                         std::to_string(pathwise_viol.load()) + ")");
            res.pass = res.pass && rep.pass;
            res.reports.push_back(std::move(rep));
        }
    }
    res.runtime_sec = timer.elapsed();
    return res;
}

// ---------------------------------------------------------------------------
// lemmas suite: numerical oracles for the appendix lemmas
// ---------------------------------------------------------------------------
namespace {

struct SampledConfig {
    Kernel K, Q;
    double h, hh;
    int n;
    double s;
};

SampledConfig sample_config(Rng& rng) {
    auto pick = [&rng](bool lipschitz_only) {
        switch (static_cast<int>(rng.uniform() * (lipschitz_only ? 4 : 5))) {
        case 0: return kernel_by_name("box", 1, 1.0 / 16.0);
        case 1: return kernel_by_name("triangle", 1);
        case 2: return kernel_by_name("cosine", 1);
        case 3: return kernel_by_name("epanechnikov", 1);
        default: return kernel_by_name("box", 1, 0.0);
        }
    };
    SampledConfig c{pick(true), pick(true), 0.0, 0.0, 0, 0.0};
    c.h = std::exp(rng.uniform(std::log(0.05), std::log(0.4)));
    c.hh = std::exp(rng.uniform(std::log(0.05), std::log(0.4)));
    c.n = 50 + static_cast<int>(rng.uniform() * 950);
    const double svals[4] = {2.5, 3.0, 4.0, 5.0};
    c.s = svals[static_cast<int>(rng.uniform() * 4)];
    return c;
}

Density sample_density(Rng& rng) {
    switch (static_cast<int>(rng.uniform() * 3)) {
    case 0: return uniform_density(Box::interval(0.0, 1.0));
    case 1: return density_by_name("trunc-gauss-mix");
    default: return density_by_name("histogram");
    }
}

} // namespace

SuiteResult suite_lemmas(const json& cfg, const SuiteOverrides& ov) {
    Timer timer;
    SuiteResult res;
    res.suite = "lemmas";
    const int n_cfg = ov.reps > 0 ? static_cast<int>(ov.reps)
                                  : static_cast<int>(cfg_long(cfg, "configs", 20));
    const double tol = cfg_num(cfg, "tol", 1e-3);
    QuadratureConfig quad;
    quad.refine_check = false;
    Rng rng(ov.seed ^ 0x1E77A5);

    int lepski_fail = 0, interp_fail = 0, sigg_fail = 0, young_fail = 0, tech1_fail = 0,
        tech2_fail = 0, t204_fail = 0, asl_fail = 0, sigma_le_ms_fail = 0;
    for (int t = 0; t < n_cfg; ++t) {
        const auto c = sample_config(rng);
        const Density f = sample_density(rng);
        const WeightFunction w = kernel_weight(c.K, {c.h}, 1.0 / (c.n * c.h), "w");

        // Lemma (centered weights): M_p(w - Ew) <= 2 M_p(w), p in {1, 2s/(s+2), 2, s}
        {
            // build the centered weight as a generic (t, x) function
            const Grid1 xg(f.support.lo[0], f.support.hi[0], 1024);
            auto wbase = w.base;
            Box wsup = w.base_support;
            auto fptr = std::make_shared<Density>(f);
            auto mean = [wbase, wsup, fptr](double t) {
                const Grid1 g(fptr->support.lo[0], fptr->support.hi[0], 1024);
                double acc = 0.0;
                for (int i = 0; i < g.n; ++i) {
                    const double x = g.point(i);
                    const double u = t - x;
                    if (u < wsup.lo[0] || u > wsup.hi[0]) continue;
                    acc += wbase(&u) * fptr->pdf(&x);
                }
                return acc * g.step();
            };
            WeightFunction wbar;
            wbar.form = WeightFunction::Form::generic;
            wbar.dim = 1;
            wbar.eval2 = [wbase, mean](const double* t, const double* x) {
                const double u = *t - *x;
                return wbase(&u) - mean(*t);
            };
            wbar.t_support = w.base_support.padded(f.support);
            wbar.x_support = f.support;
            wbar.label = "wbar";
            QuadratureConfig coarse = quad;
            coarse.pts_per_dim = 192; // nested generic norms are O(pts^2)
            for (double p : {1.0, 2.0 * c.s / (c.s + 2.0), 2.0, c.s}) {
                const double lhs = m_p(wbar, p, &f, coarse);
                const double rhs = 2.0 * m_p(w, p, &f, coarse);
                if (lhs > rhs * (1.0 + 10.0 * tol)) ++lepski_fail;
            }
        }

        // Norm interpolation: n^{1/q} M_q <= a1^-1 a2^{-1/p} mu^{1/q-1/p} n^{1/p} M_p
        {
            const double a1 = 0.5;
            const auto w2r = verify_W2(w, a1, 0.05, quad);
            const double a2 = std::min(0.999, w2r.ratio); // achieved (W2) ratio
            const double mu = c.n * w.support_measure;
            auto lhs_rhs = [&](double p, double q) {
                const double Mq = q == kInf ? m_p(w, kInf, nullptr, quad)
                                            : m_p(w, q, nullptr, quad);
                const double Mp = m_p(w, p, nullptr, quad);
                const double lhs = std::pow(double(c.n), q == kInf ? 0.0 : 1.0 / q) * Mq;
                const double rhs = (1.0 / a1) * std::pow(a2, -1.0 / p) *
                                   std::pow(mu, (q == kInf ? 0.0 : 1.0 / q) - 1.0 / p) *
                                   std::pow(double(c.n), 1.0 / p) * Mp;
                return std::make_pair(lhs, rhs);
            };
            for (auto [p, q] : std::vector<std::pair<double, double>>{
                     {1.0, 2.0}, {2.0, c.s}, {2.0, kInf}}) {
                const auto [lhs, rhs] = lhs_rhs(p, q);
                if (lhs > rhs * (1.0 + 10.0 * tol)) ++interp_fail;
            }
        }

        // variance-functional bounds and Sigma_s <= M_s (s >= 2)
        {
            const double Sig = sigma_s(w, f, c.s, quad);
            const double M2 = m_p(w, 2.0, nullptr, quad);
            const double sqf = lp_norm(
                [&](const double* x) { return std::sqrt(f.pdf(x)); }, f.support, c.s, quad)
                .value;
            if (Sig > M2 * sqf * (1.0 + 10.0 * tol)) ++sigg_fail;
            const double p = 2.0 * c.s / (c.s + 2.0);
            const double Mptn = m_p(w, p, &f, quad);
            const double Mp = m_p(w, p, nullptr, quad);
            if (Mptn > std::pow(std::max(1.0, f.f_inf), 1.0 / p) * Mp * (1.0 + 10.0 * tol))
                ++sigg_fail;
            const double Ms = m_p(w, c.s, nullptr, quad);
            if (Sig > Ms * (1.0 + 10.0 * tol)) ++sigma_le_ms_fail;
        }

        // Young inequality for the convolution pair
        {
            const WeightFunction wq = kernel_weight(c.Q, {c.hh}, 1.0 / (c.n * c.hh), "q");
            for (double p : {1.0, 2.0, c.s, kInf}) {
                const auto y = young_check(w, wq, p, quad);
                if (!y.ok) ++young_fail;
            }
        }

        // Holder modulus of phi1 and phi2 via D (sup-norm continuity of the maps)
        {
            const Kernel& K2 = c.Q;
            const double L = std::max(c.K.lipschitz(), K2.lipschitz());
            const double kinf = std::max({1.0, c.K.sup_norm(), K2.sup_norm()});
            const WeightFunction a = kde_phi1(c.K, {c.h}, c.n);
            const WeightFunction b = kde_phi1(K2, {c.hh}, c.n);
            KdeDictionary d2 = KdeDictionary::build({c.K, K2}, 0.5);
            const double dist = kde_d1(d2, 0, {c.h}, 1, {c.hh}, 1.0);
            const double vmax = std::max(c.h, c.hh);
            const WeightFunction diff = weight_difference(a, b);
            for (double p : {1.0, 2.0, c.s, kInf}) {
                const double lhs = lp_norm(diff.base, diff.base_support, p, quad).value;
                const double rhs = 1.0 / c.n * std::pow(vmax, -1.0 + (std::isinf(p) ? 0.0 : 1.0 / p)) *
                                   kde_D(dist, 1, L, kinf);
                if (lhs > rhs * (1.0 + 10.0 * tol)) ++tech1_fail;
            }
            // the convolution map: ||phi2[z] - phi2[z']||_p <=
            //   2 k_inf n^-1 [V_{h v h'} v V_{hh v hh'}]^{-1+1/p} D(2 d2(z, z'))
            ConvolutionCache cache;
            const double h3 = 0.5 * (c.h + c.hh);
            const auto pa = cache.phi2(c.K, 0, {c.h}, K2, 1, {c.hh}, c.n);
            const auto pb = cache.phi2(c.K, 0, {c.h}, K2, 1, {h3}, c.n);
            const double d2dist =
                kde_d2(d2, 0, {c.h}, 1, {c.hh}, 0, {c.h}, 1, {h3}, 1.0);
            const WeightFunction cdiff = weight_difference(pa, pb);
            for (double p : {1.0, 2.0, kInf}) {
                const double lhs = lp_norm(cdiff.base, cdiff.base_support, p, quad).value;
                const double rhs = 2.0 * kinf / c.n *
                                   std::pow(std::max(c.h, std::max(c.hh, h3)),
                                            -1.0 + (std::isinf(p) ? 0.0 : 1.0 / p)) *
                                   kde_D(2.0 * d2dist, 1, L, kinf);
                if (lhs > rhs * (1.0 + 10.0 * tol)) ++tech1_fail;
            }
        }

        // level-set box around the argmax for Lipschitz kernels
        {
            const double P = c.K.lipschitz();
            const Grid1 g(-0.5, 0.5, 4096);
            double best = 0.0;
            double argmax = 0.0;
            for (int i = 0; i < g.n; ++i) {
                const double v = c.K.eval1(g.point(i));
                if (v > best) {
                    best = v;
                    argmax = g.point(i);
                }
            }
            const double halfw = best / (2.0 * P);
            bool ok = true;
            for (int i = 0; i < g.n; ++i) {
                const double x = g.point(i);
                if (std::abs(x - argmax) <= halfw - g.step()) {
                    if (std::abs(c.K.eval1(x)) < 0.5 * best - P * g.step()) ok = false;
                }
            }
            if (!ok) ++tech2_fail;
        }

        // convolution-norm bounds (i)-(iv)
        {
            KdeDictionary d2 = KdeDictionary::build({c.K, c.Q}, 0.5);
            ConvolutionCache cache;
            const auto w2 = cache.phi2(c.K, 0, {c.h}, c.Q, 1, {c.hh}, c.n);
            const double vmax = std::max(c.h, c.hh);
            const double d_ = 1.0;
            for (double p : {1.0, 2.0, c.s}) {
                const double norm = lp_norm(w2.base, w2.base_support, p, quad).value;
                const double up = std::pow(2.0, d_ / p) * sq(d2.k_inf) / c.n *
                                  std::pow(vmax, -1.0 + 1.0 / p);
                const double lo = std::pow(2.0, d_ * (1.0 - p) / p) * sq(d2.k1) / c.n *
                                  std::pow(vmax, -1.0 + 1.0 / p);
                if (norm > up * (1.0 + 10.0 * tol) || norm < lo * (1.0 - 10.0 * tol))
                    ++t204_fail;
            }
            // support measure and level-set fraction
            const Grid1 g(w2.base_support.lo[0], w2.base_support.hi[0], 4096);
            double sup = 0.0;
            for (int i = 0; i < g.n; ++i)
                sup = std::max(sup, std::abs(w2.eval_base1(g.point(i))));
            double supp = 0.0, level = 0.0;
            for (int i = 0; i < g.n; ++i) {
                const double x = g.point(i);
                const double v = w2.eval_base1(x);
                if (std::abs(v) > 1e-12 * sup) supp += g.step();
                if (v >= 0.5 * sup) level += g.step();
            }
            const double denom = std::pow(2.0, d_ + 1.0) * std::sqrt(d_) * d2.L_K * d2.k_inf;
            if (supp < vmax * std::pow(sq(d2.k1) / denom, d_) * (1.0 - 10.0 * tol)) ++t204_fail;
            if (level < std::pow(sq(d2.k1) / (2.0 * denom), d_) * supp * (1.0 - 10.0 * tol))
                ++t204_fail;
        }

        // Assumption (L) with d^(1)_{theta_1}
        {
            KdeDictionary d2 = KdeDictionary::build({c.K, c.Q}, 0.5);
            const double theta1 = kde_theta1(d2);
            const double frak_s = std::min(c.s, 2.0);
            const WeightFunction a = kde_phi1(c.K, {c.h}, c.n);
            const WeightFunction b = kde_phi1(c.Q, {c.hh}, c.n);
            const double na = std::pow(double(c.n), 1.0 / frak_s) *
                              lp_norm(a.base, a.base_support, frak_s, quad).value;
            const double nb = std::pow(double(c.n), 1.0 / frak_s) *
                              lp_norm(b.base, b.base_support, frak_s, quad).value;
            const double bball = std::max(na, nb);
            const WeightFunction diff = weight_difference(a, b);
            const double lhs = std::pow(double(c.n), 1.0 / frak_s) *
                               lp_norm(diff.base, diff.base_support, frak_s, quad).value;
            const double dist = kde_d1(d2, 0, {c.h}, 1, {c.hh}, theta1);
            if (lhs > bball * dist * (1.0 + 10.0 * tol)) ++asl_fail;
        }
    }
    res.note(lepski_fail == 0, "centered-weight bound M_p(wbar) <= 2 M_p(w)");
    res.note(interp_fail == 0, "norm interpolation n^{1/q} M_q <= C mu^{1/q-1/p} n^{1/p} M_p");
    res.note(sigg_fail == 0, "Sigma_s <= M_2 ||sqrt f||_s and M_{p,nu'} <= f_inf^{1/p} M_p");
    res.note(sigma_le_ms_fail == 0, "Sigma_s <= M_s for s >= 2");
    res.note(young_fail == 0, "Young inequality ||K*Q||_p <= ||K||_1 ||Q||_p");
    res.note(tech1_fail == 0, "phi1 modulus via D(d1) per p in {1,2,s,inf}");
    res.note(tech2_fail == 0, "level-set box around the argmax");
    res.note(t204_fail == 0, "convolution norm bounds (i)-(iv)");
    res.note(asl_fail == 0, "Assumption (L) with d1_theta1");
    res.constants["configs"] = n_cfg;
    res.runtime_sec = timer.elapsed();
    return res;
}

SuiteResult run_suite(const std::string& name, const json& cfg, const SuiteOverrides& ov) {
    if (name == "fixed-w") return suite_fixed_w(cfg, ov);
    if (name == "uniform-nonrandom") return suite_uniform_nonrandom(cfg, ov);
    if (name == "random-majorant") return suite_random_majorant(cfg, ov);
    if (name == "kde-thm7") return suite_kde_thm7(cfg, ov);
    if (name == "regression") return suite_regression(cfg, ov);
    if (name == "lemmas") return suite_lemmas(cfg, ov);
    throw config_error("unknown suite: " + name +
                       " (expected fixed-w | uniform-nonrandom | random-majorant | kde-thm7 "
                       "| regression | lemmas)");
}

void write_suite_outputs(const SuiteResult& res, const std::string& out_dir,
                         const json& config_echo) {
    std::filesystem::create_directories(out_dir);
    json report;
    report["suite"] = res.suite;
    report["pass"] = res.pass;
    report["runtime_sec"] = res.runtime_sec;
    report["notes"] = res.notes;
    report["config"] = config_echo;
    report["reports"] = json::array();
    for (const auto& r : res.reports) report["reports"].push_back(to_json(r));
    write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
    write_text_file(out_dir + "/summary.csv", summary_csv(res.reports));
    write_text_file(out_dir + "/constants.json", res.constants.dump(2) + "\n");
    for (const auto& [name, content] : res.extra_files)
        write_text_file(out_dir + "/" + name, content);
}

} // namespace lsbound
