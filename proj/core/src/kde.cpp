#include "lsbound/kde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lsbound {

double kde_D(double x, int d, double L_K, double k_inf) {
    if (x < 0.0) throw domain_error("kde_D: x >= 0");
    return std::exp(d * x) *
           (x + 0.5 * L_K * std::sqrt(double(d)) * (std::exp(x) - 1.0) +
            k_inf * (std::exp(d * x) - 1.0));
}

double kde_D_prime(double x, int d, double L_K, double k_inf) {
    if (x < 0.0) throw domain_error("kde_D_prime: x >= 0");
    const double ed = std::exp(d * x), ex = std::exp(x);
    const double inner = x + 0.5 * L_K * std::sqrt(double(d)) * (ex - 1.0) + k_inf * (ed - 1.0);
    const double dinner = 1.0 + 0.5 * L_K * std::sqrt(double(d)) * ex + k_inf * d * ed;
    return d * ed * inner + ed * dinner;
}

KdeDictionary KdeDictionary::build(std::vector<Kernel> kernels, double beta_K) {
    if (kernels.empty()) throw domain_error("KdeDictionary: empty kernel set");
    if (!(beta_K > 0.0 && beta_K < 1.0)) throw domain_error("KdeDictionary: beta_K in (0,1)");
    KdeDictionary d;
    d.dim = kernels.front().dim();
    d.beta_K = beta_K;
    double L = 0.0, k1 = kInf, kinf = 0.0;
    for (const auto& k : kernels) {
        if (k.dim() != d.dim) throw domain_error("KdeDictionary: mixed dimensions");
        const double lk = k.lipschitz();
        if (!std::isfinite(lk))
            throw domain_error("KdeDictionary: kernel '" + k.name +
                               "' is not Lipschitz; (K1) fails (use a smoothing ramp)");
        for (double hw : k.halfwidths())
            if (hw > 0.5 + 1e-12)
                throw domain_error("KdeDictionary: support of '" + k.name +
                                   "' exceeds [-1/2,1/2]^d; (K1) fails");
        const double integ = k.integral_abs();
        if (!(integ > 0.0))
            throw domain_error("KdeDictionary: |int K| = 0 for '" + k.name + "'; (K2) fails");
        L = std::max(L, lk);
        k1 = std::min(k1, integ);
        kinf = std::max(kinf, k.sup_norm());
    }
    d.L_K = L;
    d.k1 = std::min(1.0, k1);    // (K2) normalization k_1 <= 1
    d.k_inf = std::max(1.0, kinf); // (K2) normalization k_inf >= 1
    d.kernels = std::move(kernels);
    // pairwise sup distances and the entropy constant C_K
    const size_t m = d.kernels.size();
    d.sup_dist.assign(m, std::vector<double>(m, 0.0));
    double min_sep = kInf;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
            const double v = Kernel::sup_distance(d.kernels[i], d.kernels[j]);
            d.sup_dist[i][j] = d.sup_dist[j][i] = v;
            min_sep = std::min(min_sep, v);
        }
    // covering number of the finite dictionary is a step function of delta;
    // C_K = sup_{delta in (0,1)} [ln N(delta) - delta^{-beta_K}] is attained
    // just below a breakpoint. Evaluate on the breakpoints and at delta -> 1.
    double C = std::log(double(m)) - 1.0; // delta -> 0+ limit is -inf; delta=1- gives ln N(1)-1
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
            const double delta = std::min(d.sup_dist[i][j], 1.0 - 1e-9);
            if (delta <= 0.0) continue;
            size_t count = 1; // crude upper bound on N just below the breakpoint
            count = m;        // N(delta) <= m always; use the exact count:
            (void)count;
            // exact N(delta - 0): greedy/exact over the finite dictionary
            std::vector<size_t> all(m);
            for (size_t t = 0; t < m; ++t) all[t] = t;
            FiniteParamSpace tmp;
            tmp.weights.resize(m); // metric only
            auto dist = [&](size_t a, size_t b) { return d.sup_dist[a][b]; };
            tmp.dist = dist;
            const auto cov = covering_number_subset(tmp, all, delta * (1.0 - 1e-9));
            C = std::max(C, std::log(double(cov.count)) - std::pow(delta, -d.beta_K));
        }
    d.C_K = std::max(C, 0.0);
    return d;
}

double kde_theta1(const KdeDictionary& dict) {
    return dict.k_inf / dict.k1 * kde_D_prime(2.0, dict.dim, dict.L_K, dict.k_inf);
}

double kde_theta2(const KdeDictionary& dict) {
    return std::pow(2.0, 2.0 * dict.dim + 2.0) * std::pow(dict.k_inf, 4.0) /
           sq(dict.k1) * kde_D_prime(4.0, dict.dim, dict.L_K, dict.k_inf);
}

WeightFunction kde_phi1(const Kernel& K, const std::vector<double>& h, int n) {
    if (n < 1) throw domain_error("kde_phi1: n >= 1");
    double vh = 1.0;
    for (double hi : h) vh *= hi;
    std::ostringstream label;
    label << "phi1[" << K.name << ",h=";
    for (double hi : h) label << hi << ",";
    label << "]";
    return kernel_weight(K, h, 1.0 / (n * vh), label.str());
}

WeightFunction ConvolutionCache::phi2(const Kernel& K, size_t k_id, const std::vector<double>& h,
                                      const Kernel& Q, size_t q_id,
                                      const std::vector<double>& hh, int n, int pts) {
    if (K.dim() != Q.dim()) throw domain_error("phi2: dimension mismatch");
    const int d = K.dim();
    std::ostringstream key;
    key << k_id << "/" << q_id << "/" << pts;
    for (double v : h) key << "/" << v;
    for (double v : hh) key << "/" << v;

    std::shared_ptr<const PerCoord> pc;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key.str());
        if (it != cache_.end()) pc = it->second;
    }
    if (!pc) {
        auto fresh = std::make_shared<PerCoord>();
        fresh->sup = 1.0;
        double lip_acc = 0.0;
        std::vector<double> sups, lips;
        for (int c = 0; c < d; ++c) {
            const auto cu = static_cast<size_t>(c);
            const Profile& pk = K.profiles[cu];
            const Profile& pq = Q.profiles[cu];
            const double wk = pk.halfwidth() * h[cu], wq = pq.halfwidth() * hh[cu];
            const double step = 2.0 * std::max(wk, wq) / pts;
            const int nk = std::max(2, int(std::round(2.0 * wk / step)));
            const int nq = std::max(2, int(std::round(2.0 * wq / step)));
            Tabulated1 tk, tq;
            tk.grid = Grid1(-wk, -wk + nk * step, nk);
            tq.grid = Grid1(-wq, -wq + nq * step, nq);
            tk.values.resize(size_t(nk));
            tq.values.resize(size_t(nq));
            for (int i = 0; i < nk; ++i)
                tk.values[size_t(i)] = pk(tk.grid.point(i) / h[cu]) / h[cu];
            for (int i = 0; i < nq; ++i)
                tq.values[size_t(i)] = pq(tq.grid.point(i) / hh[cu]) / hh[cu];
            auto conv = std::make_shared<Tabulated1>(convolve_1d(tk, tq));
            double sup = 0.0, lip = 0.0;
            for (size_t i = 0; i < conv->values.size(); ++i) {
                sup = std::max(sup, std::abs(conv->values[i]));
                if (i > 0)
                    lip = std::max(lip, std::abs(conv->values[i] - conv->values[i - 1]) /
                                            conv->grid.step());
            }
            sups.push_back(sup);
            lips.push_back(lip);
            fresh->support.lo.push_back(conv->grid.lo - 0.5 * conv->grid.step());
            fresh->support.hi.push_back(conv->grid.hi + 0.5 * conv->grid.step());
            fresh->coords.push_back(std::move(conv));
        }
        double sup_all = 1.0;
        for (double v : sups) sup_all *= v;
        for (int c = 0; c < d; ++c) {
            double term = lips[size_t(c)];
            for (int o = 0; o < d; ++o)
                if (o != c) term *= sups[size_t(o)];
            lip_acc += term * term;
        }
        fresh->sup = sup_all;
        fresh->lip = std::sqrt(lip_acc);
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = cache_.emplace(key.str(), fresh);
        pc = it->second;
        (void)inserted;
    }

    WeightFunction w;
    w.dim = d;
    const double scale = 1.0 / n;
    auto coords = pc;
    w.base = [coords, scale, d](const double* u) {
        double v = scale;
        for (int c = 0; c < d; ++c) v *= coords->coords[size_t(c)]->eval(u[c]);
        return v;
    };
    w.base_support = pc->support;
    w.support_measure = pc->support.volume();
    w.sup_bound = scale * pc->sup;
    w.lipschitz = scale * pc->lip;
    w.label = "phi2[" + K.name + "*" + Q.name + "]";
    return w;
}

double kde_d1(const KdeDictionary& dict, size_t k1_, const std::vector<double>& h1, size_t k2_,
              const std::vector<double>& h2, double theta) {
    if (!(theta > 0.0)) throw domain_error("kde_d1: theta > 0");
    const double dk = k1_ == k2_ ? 0.0 : dict.sup_dist[k1_][k2_];
    return theta * std::max(dk, delta_H(h1, h2));
}

double kde_d2(const KdeDictionary& dict, size_t ka, const std::vector<double>& ha, size_t qa,
              const std::vector<double>& hha, size_t kb, const std::vector<double>& hb,
              size_t qb, const std::vector<double>& hhb, double theta) {
    if (!(theta > 0.0)) throw domain_error("kde_d2: theta > 0");
    const double dk = std::max(ka == kb ? 0.0 : dict.sup_dist[ka][kb],
                               qa == qb ? 0.0 : dict.sup_dist[qa][qb]);
    const double dh = std::max(delta_H(ha, hb), delta_H(hha, hhb));
    return theta * std::max(dk, dh);
}

KdeClass KdeClass::build(KdeDictionary dict, BandwidthSet bw, int grid_per_coord, int n,
                         double f_inf) {
    if (dict.dim != bw.dim()) throw domain_error("KdeClass: kernel/bandwidth dim mismatch");
    KdeClass cls{std::move(dict), std::move(bw), {}, n, std::max(1.0, f_inf), 1.0, {}};
    cls.bandwidths = cls.bw.geometric_grid(grid_per_coord);
    cls.theta1 = kde_theta1(cls.dict);
    for (size_t k = 0; k < cls.dict.kernels.size(); ++k)
        for (size_t hidx = 0; hidx < cls.bandwidths.size(); ++hidx) {
            Member m;
            m.kernel = k;
            m.h_idx = hidx;
            m.V_h = 1.0;
            for (double h : cls.bandwidths[hidx]) m.V_h *= h;
            cls.members.push_back(m);
        }
    return cls;
}

WeightFunction KdeClass::weight(size_t member) const {
    const Member& m = members[member];
    return kde_phi1(dict.kernels[m.kernel], bandwidths[m.h_idx], n);
}

double KdeClass::d1(size_t i, size_t j) const {
    const Member &a = members[i], &b = members[j];
    return kde_d1(dict, a.kernel, bandwidths[a.h_idx], b.kernel, bandwidths[b.h_idx], theta1);
}

FiniteParamSpace KdeClass::space() const {
    FiniteParamSpace sp;
    for (size_t i = 0; i < members.size(); ++i) sp.weights.push_back(weight(i));
    const KdeClass* self = this;
    // copy enough state for the closures to stand alone
    auto dict_copy = std::make_shared<KdeDictionary>(dict);
    auto bws = std::make_shared<std::vector<std::vector<double>>>(bandwidths);
    auto mem = std::make_shared<std::vector<Member>>(members);
    const double th = theta1;
    sp.dist = [dict_copy, bws, mem, th](size_t i, size_t j) {
        const Member &a = (*mem)[i], &b = (*mem)[j];
        return kde_d1(*dict_copy, a.kernel, (*bws)[a.h_idx], b.kernel, (*bws)[b.h_idx], th);
    };
    sp.metric_name = "d1_theta1";
    // product covering rule: N_K(delta/theta) * N_H(delta/theta)
    auto bw_copy = std::make_shared<BandwidthSet>(bw);
    const size_t nk = dict.kernels.size();
    auto supd = std::make_shared<std::vector<std::vector<double>>>(dict.sup_dist);
    sp.covering_analytic = [bw_copy, nk, supd, th](double delta) -> std::size_t {
        const double r = delta / th;
        FiniteParamSpace kd;
        kd.weights.resize(nk);
        kd.dist = [supd](size_t a, size_t b) { return (*supd)[a][b]; };
        std::vector<size_t> all(nk);
        for (size_t t = 0; t < nk; ++t) all[t] = t;
        const auto ck = covering_number_subset(kd, all, r);
        return ck.count * bw_copy->covering_number(r);
    };
    (void)self;
    return sp;
}

WeightClass KdeClass::weight_class(double beta, const QuadratureConfig& quad) const {
    WeightClass wc;
    wc.space = space();
    wc.n = n;
    wc.alpha1 = 0.5;
    wc.alpha2 = std::pow(dict.k1 / (dict.L_K * std::sqrt(double(dict.dim))), dict.dim);
    wc.beta = beta;
    wc.f_inf = f_inf;
    wc.mp_unity = true;
    wc.quad = quad;
    verify_weight_class(wc, /*check_w2=*/false); // (W2) holds by the level-set lemma
    return wc;
}

KdeConstants kde_constants(int i, const KdeDictionary& dict, const BandwidthSet& bw, int n,
                           double s, double f_inf, double y) {
    if (i != 1 && i != 2) throw domain_error("kde_constants: i in {1,2}");
    KdeConstants c;
    c.i = i;
    const int d = dict.dim;
    const double rd = d;
    f_inf = std::max(1.0, f_inf);
    if (i == 1) {
        c.theta0 = 10.0 * c1(s) * f_inf *
                   std::pow(dict.L_K * std::sqrt(rd) / dict.k1, rd / 2.0);
        c.alpha2_i = std::pow(dict.k1 / (dict.L_K * std::sqrt(rd)), rd);
    } else {
        const double base = std::pow(2.0, rd + 2.0) * std::sqrt(rd) * dict.L_K * dict.k_inf /
                            sq(dict.k1);
        c.theta0 = 10.0 * c1(s) * f_inf * std::pow(base, rd / 2.0);
        c.alpha2_i = std::pow(sq(dict.k1) / (std::pow(2.0, rd + 2.0) * std::sqrt(rd) *
                                             dict.L_K * dict.k_inf),
                              rd);
    }
    c.alpha_star = 2.0 / std::sqrt(c.alpha2_i);
    c.theta1_const = std::pow(c.alpha_star, -4.0) / 148.0;
    c.theta2_const = 5.0 * std::sqrt(2.0) * c1(s / 2.0) * f_inf * sq(c.alpha_star);
    const double nv_min = n * bw.volume_min();
    c.gamma = s > 2.0 ? std::pow(nv_min, 1.0 / std::min(s, 4.0) - 0.5) : kNaN;
    const double vmax = bw.volume_max();
    if (s > 2.0) {
        if (s < 4.0) {
            c.y_star = c.theta1_const * std::pow(double(n), 4.0 / s - 1.0);
        } else {
            const double br = std::pow(std::pow(2.0, rd * i) * vmax, 2.0 / s) +
                              std::pow(double(n), -1.0 / s);
            c.y_star = std::pow(c.theta2_const, -2.0) / std::sqrt(nv_min) / sq(br);
        }
    }
    c.A_H = 1.0;
    for (int j = 0; j < d; ++j)
        c.A_H *= std::log(bw.h_max[size_t(j)] / bw.h_min[size_t(j)]);
    c.B_H = std::log2(vmax / bw.volume_min());
    c.k_star = 8.0 * c1(s) * sq(c.alpha_star);
    if (std::isfinite(y)) {
        c.C_star_y = 1.0 + 2.0 * c.theta0 *
                               (std::sqrt(y) * (std::pow(std::pow(2.0, rd * i) * vmax, 1.0 / s) +
                                                std::pow(double(n), -1.0 / (2.0 * s))) +
                                y * std::pow(double(n), -1.0 / s));
    }
    return c;
}

Theorem7Report theorem7_assembly(int i, const KdeDictionary& dict, const BandwidthSet& bw,
                                 int n, double s, double eps, double y, double q) {
    if (!(s > 2.0)) throw precondition_error("theorem7: s > 2");
    if (!(eps > 0.0 && eps <= 1.0)) throw domain_error("theorem7: eps in (0,1]");
    Theorem7Report rep;
    rep.consts = kde_constants(i, dict, bw, n, s, 1.0, y);
    rep.s = s;
    rep.eps = eps;
    rep.y = y;
    rep.q = q;
    const int d = dict.dim;
    const double rd = d;
    const double s4 = std::min(s, 4.0);
    rep.bandwidth_floor =
        std::pow(64.0 * sq(c1(s)), s4 / (s4 - 1.0)) *
        std::pow(std::pow(2.0, rd + 2.0) * std::sqrt(rd) * dict.L_K * dict.k_inf / sq(dict.k1),
                 rd * (i - 1));
    const double nv_min = n * bw.volume_min();
    if (!(nv_min > rep.bandwidth_floor))
        throw precondition_error("theorem7: bandwidth condition fails, need nV_{h_min} > " +
                                 std::to_string(rep.bandwidth_floor) + ", have " +
                                 std::to_string(nv_min));
    if (!(y >= 1.0 && y <= rep.consts.y_star))
        throw precondition_error("theorem7: y must lie in [1, y_*], y_* = " +
                                 std::to_string(rep.consts.y_star));
    rep.ubar = ubar_eps(eps, rep.consts.gamma, s);
    rep.majorant_multiplier = rep.ubar * rep.consts.C_star_y;

    const double theta_i = i == 1 ? kde_theta1(dict) : kde_theta2(dict);
    const double k_star_i = rep.consts.k_star;
    // C_{beta,d} = sup_{delta in (0,1]} [d ln(3/delta) + delta^{-beta_K} - delta^{-beta}]
    // and L_{*,i} both depend on beta in (beta_K, 1); take the documented inf
    // over a beta grid.
    double best = kInf, bestL = 0.0, bestC = 0.0;
    for (int bi = 1; bi <= 20; ++bi) {
        const double beta = dict.beta_K + (1.0 - dict.beta_K) * bi / 21.0;
        double Cbd = -kInf;
        for (int gi = 0; gi <= 200; ++gi) {
            const double delta = std::pow(10.0, -4.0 + 4.0 * gi / 200.0);
            if (delta > 1.0) break;
            Cbd = std::max(Cbd, rd * std::log(3.0 / delta) + std::pow(delta, -dict.beta_K) -
                                    std::pow(delta, -beta));
        }
        double L = 0.0;
        bool finite = true;
        for (int k = 1; k <= 60; ++k) {
            const double t = std::exp(std::pow(2.0, 1.0 + k * beta) *
                                          std::pow(eps / k_star_i, -beta) -
                                      (9.0 / 16.0) * std::pow(2.0, k) / double(k * k));
            L += t;
            if (!std::isfinite(L)) {
                finite = false;
                break;
            }
        }
        if (!finite) continue;
        const double val = L * std::exp(2.0 * i * Cbd);
        if (val < best) {
            best = val;
            bestL = L;
            bestC = Cbd;
        }
    }
    if (!std::isfinite(best))
        throw divergence_error("theorem7: L_{*,i} series diverges for all beta in (beta_K,1)");
    rep.L_star_beta = bestL;
    rep.C_beta_d = bestC;

    const double ue = u_eps(eps);
    const double Ieps =
        std::pow(2.0, q * (eps + 1.0)) / (std::pow(2.0, q * eps) - 1.0) * std::tgamma(q + 1.0) +
        1.0;
    const double cover_term = std::pow(24.0 * k_star_i * theta_i / eps, rd * i) *
                              std::exp(i * std::pow(8.0 * k_star_i * theta_i / eps, dict.beta_K)) *
                              std::exp(3.0 * i * dict.C_K);
    const double log_term = std::log2(std::pow(2.0, rd) * sq(dict.k_inf) * k_star_i /
                                      sq(dict.k1));
    const double brace = 1.0 + best;
    rep.T1_tilde = Ieps *
                   std::pow(std::pow(2.0, 1.0 + rd / 2.0) * ue * k_star_i * sq(dict.k_inf), q) *
                   cover_term * log_term * brace;
    rep.T2_tilde = std::pow(c1(s) + 2.0, q) *
                   std::pow(std::pow(2.0, rd / 2.0) * rep.consts.alpha_star * sq(dict.k_inf), q) *
                   cover_term * log_term * brace;
    rep.tail_moment = rep.T1_tilde * std::pow(1.0 + rep.consts.A_H, 2.0 * i) *
                      (1.0 + rep.consts.B_H) * std::pow(double(n), q / 2.0) *
                      std::pow(rep.consts.C_star_y, q) * std::exp(-y / 2.0);
    return rep;
}

KdeMajorants kde_majorants(int i, const WeightFunction& w, const Density* f,
                           const std::vector<double>* sample, double s, int n,
                           const QuadratureConfig& cfg) {
    (void)i; // the same formulas apply to both processes through their weight
    KdeMajorants out;
    const double nd = n;
    const double Ms = m_p(w, s, nullptr, cfg);
    const double M2 = m_p(w, 2.0, nullptr, cfg);
    if (s < 2.0) {
        out.U = 4.0 * std::pow(nd, 1.0 / s) * Ms;
        return out;
    }
    if (s == 2.0) {
        out.U = std::sqrt(nd) * M2;
        return out;
    }
    if (sample) {
        if (static_cast<int>(sample->size()) != n)
            throw domain_error("kde_majorants: sample size != n");
        const auto rm = random_majorant(w, *sample, s, cfg);
        out.U_hat = rm.u_hat;
        out.U_breve = rm.u_breve;
    }
    if (f) {
        out.U = c1(s) * (std::sqrt(nd) * sigma_s(w, *f, s, cfg) +
                         2.0 * std::pow(nd, 1.0 / s) * Ms);
        out.U_bar = std::max(out.U, std::sqrt(nd) * M2);
    }
    return out;
}

} // namespace lsbound
