#include "lsbound/weight.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace lsbound {

WeightFunction make_weight_1d(std::function<double(double)> base, double lo, double hi,
                              double lipschitz, std::string label) {
    if (!(hi > lo)) throw domain_error("make_weight_1d: empty support");
    WeightFunction w;
    w.dim = 1;
    auto fn = std::make_shared<std::function<double(double)>>(std::move(base));
    w.base = [fn](const double* u) { return (*fn)(u[0]); };
    w.base_support = Box::interval(lo, hi);
    w.support_measure = hi - lo;
    w.lipschitz = lipschitz;
    w.label = std::move(label);
    return w;
}

WeightFunction kernel_weight(const Kernel& k, const std::vector<double>& h, double scale,
                             std::string label) {
    if (static_cast<int>(h.size()) != k.dim()) throw domain_error("kernel_weight: h dim mismatch");
    for (double hi : h)
        if (!(hi > 0.0)) throw domain_error("kernel_weight: bandwidth must be positive");
    WeightFunction w;
    w.dim = k.dim();
    auto kp = std::make_shared<Kernel>(k);
    auto hp = std::make_shared<std::vector<double>>(h);
    w.base = [kp, hp, scale](const double* u) {
        double v[2];
        for (size_t i = 0; i < hp->size(); ++i) v[i] = u[i] / (*hp)[i];
        return scale * kp->eval(v);
    };
    double vh = 1.0, measure = 1.0;
    Box sup;
    const auto hw = k.halfwidths();
    for (int i = 0; i < k.dim(); ++i) {
        const auto u = static_cast<size_t>(i);
        vh *= h[u];
        measure *= 2.0 * hw[u] * h[u];
        sup.lo.push_back(-hw[u] * h[u]);
        sup.hi.push_back(hw[u] * h[u]);
    }
    w.base_support = sup;
    w.support_measure = measure;
    const double hmin = *std::min_element(h.begin(), h.end());
    w.lipschitz = std::isfinite(k.lipschitz()) ? std::abs(scale) * k.lipschitz() / hmin : kInf;
    w.sup_bound = std::abs(scale) * k.sup_norm();
    w.label = label.empty() ? ("K_h[" + k.name + "]") : std::move(label);
    (void)vh;
    return w;
}

WeightFunction zero_weight(int dim) {
    WeightFunction w;
    w.dim = dim;
    w.base = [](const double*) { return 0.0; };
    w.base_support = dim == 1 ? Box::interval(-0.5, 0.5) : Box({-0.5, -0.5}, {0.5, 0.5});
    w.support_measure = 0.0;
    w.lipschitz = 0.0;
    w.sup_bound = 0.0;
    w.label = "zero";
    return w;
}

WeightFunction weight_difference(const WeightFunction& a, const WeightFunction& b) {
    if (!a.is_difference() || !b.is_difference())
        throw domain_error("weight_difference: difference-form weights required");
    if (a.dim != b.dim) throw domain_error("weight_difference: dim mismatch");
    WeightFunction w;
    w.dim = a.dim;
    auto fa = a.base, fb = b.base;
    w.base = [fa, fb](const double* u) { return fa(u) - fb(u); };
    w.base_support = Box::hull(a.base_support, b.base_support);
    w.support_measure = std::min(a.support_measure + b.support_measure,
                                 w.base_support.volume());
    w.lipschitz = a.lipschitz + b.lipschitz;
    w.label = a.label + "-" + b.label;
    return w;
}

WeightFunction weight_square(const WeightFunction& w) {
    if (!w.is_difference()) throw domain_error("weight_square: difference form required");
    WeightFunction out = w;
    auto f = w.base;
    out.base = [f](const double* u) {
        const double v = f(u);
        return v * v;
    };
    out.lipschitz = (std::isfinite(w.lipschitz) && std::isfinite(w.sup_bound))
                        ? 2.0 * w.sup_bound * w.lipschitz
                        : kInf;
    out.sup_bound = std::isfinite(w.sup_bound) ? w.sup_bound * w.sup_bound : kNaN;
    out.label = w.label + "^2";
    return out;
}

WeightFunction weight_scaled(const WeightFunction& w, double c) {
    if (!w.is_difference()) throw domain_error("weight_scaled: difference form required");
    WeightFunction out = w;
    auto f = w.base;
    out.base = [f, c](const double* u) { return c * f(u); };
    out.lipschitz = std::isfinite(w.lipschitz) ? std::abs(c) * w.lipschitz : kInf;
    out.sup_bound = std::isfinite(w.sup_bound) ? std::abs(c) * w.sup_bound : kNaN;
    return out;
}

namespace {

// sup over t of ( integral |w(t,x)|^p f(x) dx )^{1/p}; difference form.
double sup_t_x_marginal(const WeightFunction& w, double p, const Density& f, int pts) {
    const Box trange = w.base_support.padded(f.support);
    // inner integrand support given t: x in f.support, t - x in base_support
    if (w.dim == 1) {
        const Grid1 tg(trange.lo[0], trange.hi[0], pts);
        double best = 0.0;
        for (int i = 0; i < tg.n; ++i) {
            const double t = tg.point(i);
            const double xlo = std::max(f.support.lo[0], t - w.base_support.hi[0]);
            const double xhi = std::min(f.support.hi[0], t - w.base_support.lo[0]);
            if (!(xhi > xlo)) continue;
            const Grid1 xg(xlo, xhi, pts);
            double acc = 0.0;
            if (std::isinf(p)) {
                for (int j = 0; j < xg.n; ++j) {
                    const double x = xg.point(j);
                    if (f.pdf(&x) <= 0.0) continue;
                    const double u = t - x;
                    acc = std::max(acc, std::abs(w.base(&u)));
                }
                best = std::max(best, acc);
            } else {
                for (int j = 0; j < xg.n; ++j) {
                    const double x = xg.point(j);
                    const double u = t - x;
                    acc += std::pow(std::abs(w.base(&u)), p) * f.pdf(&x);
                }
                best = std::max(best, std::pow(acc * xg.step(), 1.0 / p));
            }
        }
        return best;
    }
    throw grid_error("m_p with density: d=1 only");
}

} // namespace

double m_p(const WeightFunction& w, double p, const Density* f, const QuadratureConfig& cfg,
           NormGuard* guard) {
    if (!(p >= 1.0)) throw domain_error("m_p: p must be >= 1 (or infinity)");
    if (w.is_zero()) return 0.0;
    if (w.is_difference()) {
        auto val = lp_norm(w.base, w.base_support, p, cfg);
        if (guard) guard->add("M_" + std::to_string(p) + "(" + w.label + ")", val);
        if (!f) return val.value;
        if (f->dim != w.dim) throw grid_error("m_p: density dimension mismatch");
        const double other = sup_t_x_marginal(w, p, *f, cfg.pts_per_dim);
        return std::max(val.value, other);
    }
    // generic form: both sups by nested grids
    if (w.dim != 1) throw grid_error("m_p generic form: d=1 only");
    const Grid1 xg(w.x_support.lo[0], w.x_support.hi[0], cfg.pts_per_dim);
    double sup_x = 0.0;
    for (int i = 0; i < xg.n; ++i) {
        const double x = xg.point(i);
        auto slice = [&](double t) { return w.eval2(&t, &x); };
        sup_x = std::max(sup_x,
                         detail::lp_raw_1d(slice, w.t_support.lo[0], w.t_support.hi[0], p,
                                           cfg.pts_per_dim));
    }
    const Grid1 tg(w.t_support.lo[0], w.t_support.hi[0], cfg.pts_per_dim);
    double sup_t = 0.0;
    for (int i = 0; i < tg.n; ++i) {
        const double t = tg.point(i);
        double acc = 0.0;
        const Grid1 xg2(w.x_support.lo[0], w.x_support.hi[0], cfg.pts_per_dim);
        if (std::isinf(p)) {
            for (int j = 0; j < xg2.n; ++j) {
                const double x = xg2.point(j);
                if (f && f->pdf(&x) <= 0.0) continue;
                acc = std::max(acc, std::abs(w.eval2(&t, &x)));
            }
            sup_t = std::max(sup_t, acc);
        } else {
            for (int j = 0; j < xg2.n; ++j) {
                const double x = xg2.point(j);
                const double fx = f ? f->pdf(&x) : 1.0;
                acc += std::pow(std::abs(w.eval2(&t, &x)), p) * fx;
            }
            sup_t = std::max(sup_t, std::pow(acc * xg2.step(), 1.0 / p));
        }
    }
    return std::max(sup_x, sup_t);
}

double sigma_s(const WeightFunction& w, const Density& f, double s, const QuadratureConfig& cfg,
               NormGuard* guard) {
    if (!(s >= 1.0)) throw domain_error("sigma_s: s must be >= 1");
    if (w.is_zero()) return 0.0;
    if (!w.is_difference() || w.dim != 1)
        throw grid_error("sigma_s: 1-d difference-form weights only");
    if (!(f.support.volume() < kInf) || !(w.support_measure < kInf))
        throw grid_error("sigma_s: unbounded outer integral");

    auto value_at = [&](int pts) {
        const Box trange = w.base_support.padded(f.support);
        const Grid1 tg(trange.lo[0], trange.hi[0], pts);
        double acc = 0.0;
        for (int i = 0; i < tg.n; ++i) {
            const double t = tg.point(i);
            const double xlo = std::max(f.support.lo[0], t - w.base_support.hi[0]);
            const double xhi = std::min(f.support.hi[0], t - w.base_support.lo[0]);
            if (!(xhi > xlo)) continue;
            const Grid1 xg(xlo, xhi, pts);
            double inner = 0.0;
            for (int j = 0; j < xg.n; ++j) {
                const double x = xg.point(j);
                const double u = t - x;
                inner += sq(w.base(&u)) * f.pdf(&x);
            }
            inner *= xg.step();
            acc += std::pow(inner, 0.5 * s);
        }
        return std::pow(acc * tg.step(), 1.0 / s);
    };
    const double full = value_at(cfg.pts_per_dim);
    if (cfg.refine_check || guard) {
        const double coarse = value_at(std::max(2, cfg.pts_per_dim / 2));
        GuardedValue g;
        g.value = full;
        g.refine_rel_dev = std::abs(full - coarse) / std::max({full, coarse, 1e-300});
        g.within_tol = g.refine_rel_dev <= cfg.rtol;
        if (guard) guard->add("Sigma_" + std::to_string(s) + "(" + w.label + ")", g);
    }
    return full;
}

W2Result verify_W2(const WeightFunction& w, double alpha1, double alpha2,
                   const QuadratureConfig& cfg) {
    if (!(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0))
        throw domain_error("verify_W2: alpha1, alpha2 in (0,1)");
    if (!w.is_difference()) throw domain_error("verify_W2: difference form required");
    W2Result r;
    r.support_measure = w.support_measure;
    if (w.dim == 1) {
        const Grid1 g(w.base_support.lo[0], w.base_support.hi[0], cfg.pts_per_dim);
        double sup = 0.0;
        for (int i = 0; i < g.n; ++i) {
            const double x = g.point(i);
            sup = std::max(sup, std::abs(w.base(&x)));
        }
        if (sup <= 0.0) throw domain_error("verify_W2: degenerate weight, ||w||_inf = 0");
        if (std::isfinite(w.lipschitz)) sup += 0.5 * w.lipschitz * g.step();
        double count = 0.0;
        for (int i = 0; i < g.n; ++i) {
            const double x = g.point(i);
            if (std::abs(w.base(&x)) >= alpha1 * sup) count += 1.0;
        }
        r.level_measure = count * g.step();
    } else if (w.dim == 2) {
        const Grid1 g0(w.base_support.lo[0], w.base_support.hi[0], cfg.pts_per_dim);
        const Grid1 g1(w.base_support.lo[1], w.base_support.hi[1], cfg.pts_per_dim);
        double sup = 0.0;
        for (int i = 0; i < g0.n; ++i)
            for (int j = 0; j < g1.n; ++j) {
                const double x[2] = {g0.point(i), g1.point(j)};
                sup = std::max(sup, std::abs(w.base(x)));
            }
        if (sup <= 0.0) throw domain_error("verify_W2: degenerate weight, ||w||_inf = 0");
        if (std::isfinite(w.lipschitz)) sup += 0.5 * w.lipschitz * g0.step() * std::sqrt(2.0);
        double count = 0.0;
        for (int i = 0; i < g0.n; ++i)
            for (int j = 0; j < g1.n; ++j) {
                const double x[2] = {g0.point(i), g1.point(j)};
                if (std::abs(w.base(x)) >= alpha1 * sup) count += 1.0;
            }
        r.level_measure = count * g0.step() * g1.step();
    } else {
        throw grid_error("verify_W2: d in {1,2}");
    }
    r.ratio = r.level_measure / std::max(r.support_measure, 1e-300);
    r.pass = r.level_measure >= alpha2 * r.support_measure * (1.0 - 1e-9);
    return r;
}

WeightFunction convolve_weights_1d(const WeightFunction& a, const WeightFunction& b, int pts) {
    if (!a.is_difference() || !b.is_difference() || a.dim != 1 || b.dim != 1)
        throw grid_error("convolve_weights_1d: 1-d difference-form weights required");
    // shared step across both supports
    const double la = a.base_support.length(0), lb = b.base_support.length(0);
    const double step = std::max(la, lb) / pts;
    const int na = std::max(2, static_cast<int>(std::round(la / step)));
    const int nb = std::max(2, static_cast<int>(std::round(lb / step)));
    Tabulated1 ta, tb;
    ta.grid = Grid1(a.base_support.lo[0], a.base_support.lo[0] + na * step, na);
    tb.grid = Grid1(b.base_support.lo[0], b.base_support.lo[0] + nb * step, nb);
    ta.values.resize(static_cast<size_t>(na));
    tb.values.resize(static_cast<size_t>(nb));
    for (int i = 0; i < na; ++i) {
        const double x = ta.grid.point(i);
        ta.values[static_cast<size_t>(i)] = a.base(&x);
    }
    for (int i = 0; i < nb; ++i) {
        const double x = tb.grid.point(i);
        tb.values[static_cast<size_t>(i)] = b.base(&x);
    }
    auto conv = std::make_shared<Tabulated1>(convolve_1d(ta, tb));
    WeightFunction out;
    out.dim = 1;
    out.base = [conv](const double* u) { return conv->eval(u[0]); };
    out.base_support = Box::interval(conv->grid.lo - 0.5 * conv->grid.step(),
                                     conv->grid.hi + 0.5 * conv->grid.step());
    out.support_measure = out.base_support.length(0);
    // ||(K*Q)'||_inf <= min(L_K ||Q||_1, L_Q ||K||_1); use tabulated slopes instead
    double lip = 0.0, sup = 0.0;
    for (size_t i = 0; i < conv->values.size(); ++i) {
        sup = std::max(sup, std::abs(conv->values[i]));
        if (i > 0)
            lip = std::max(lip, std::abs(conv->values[i] - conv->values[i - 1]) /
                                    conv->grid.step());
    }
    out.lipschitz = lip;
    out.sup_bound = sup;
    out.label = a.label + "*" + b.label;
    return out;
}

YoungResult young_check(const WeightFunction& K, const WeightFunction& Q, double p,
                        const QuadratureConfig& cfg) {
    if (!(p >= 1.0)) throw domain_error("young_check: p >= 1 required");
    YoungResult r;
    const WeightFunction conv = convolve_weights_1d(K, Q, cfg.pts_per_dim);
    r.lhs = lp_norm(conv.base, conv.base_support, p, cfg).value;
    r.rhs = m_p(K, 1.0, nullptr, cfg) * m_p(Q, p, nullptr, cfg);
    r.ok = r.lhs <= r.rhs * (1.0 + 10.0 * cfg.rtol) + 1e-12;
    return r;
}

} // namespace lsbound
