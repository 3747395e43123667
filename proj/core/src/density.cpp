#include "lsbound/density.hpp"

#include "lsbound/stats.hpp"

#include <cmath>
#include <memory>
#include <numeric>

namespace lsbound {

Density uniform_density(const Box& box) {
    if (box.dim() < 1) throw domain_error("uniform_density: empty box");
    const double vol = box.volume();
    if (!(vol > 0.0)) throw domain_error("uniform_density: degenerate box");
    Density f;
    f.dim = box.dim();
    f.support = box;
    f.f_inf = std::max(1.0, 1.0 / vol);
    f.name = "uniform";
    f.pdf = [box, vol](const double* x) { return box.contains(x) ? 1.0 / vol : 0.0; };
    f.sample = [box](Rng& rng, double* out) {
        for (int i = 0; i < box.dim(); ++i) {
            const auto u = static_cast<size_t>(i);
            out[u] = rng.uniform(box.lo[u], box.hi[u]);
        }
    };
    return f;
}

Density trunc_gauss_mix_density(const Box& box, std::vector<GaussComponent> components) {
    const int d = box.dim();
    if (components.empty()) throw domain_error("trunc_gauss_mix: no components");
    double wsum = 0.0;
    for (auto& c : components) {
        if (static_cast<int>(c.mean.size()) != d || static_cast<int>(c.sigma.size()) != d)
            throw domain_error("trunc_gauss_mix: component dim mismatch");
        for (double s : c.sigma)
            if (!(s > 0.0)) throw domain_error("trunc_gauss_mix: sigma must be positive");
        if (!(c.weight > 0.0)) throw domain_error("trunc_gauss_mix: weights must be positive");
        wsum += c.weight;
    }
    for (auto& c : components) c.weight /= wsum;

    struct Comp {
        std::vector<double> mean, sigma, cdf_lo, cdf_hi; // per-coordinate truncation
        double weight = 0.0, norm = 1.0;                 // norm = prod (cdf_hi - cdf_lo)
    };
    auto comps = std::make_shared<std::vector<Comp>>();
    double finf = 0.0;
    for (const auto& c : components) {
        Comp cc;
        cc.weight = c.weight;
        cc.mean = c.mean;
        cc.sigma = c.sigma;
        double peak = c.weight;
        for (int i = 0; i < d; ++i) {
            const auto u = static_cast<size_t>(i);
            const double a = (box.lo[u] - c.mean[u]) / c.sigma[u];
            const double b = (box.hi[u] - c.mean[u]) / c.sigma[u];
            const double pa = normal_cdf(a), pb = normal_cdf(b);
            if (!(pb - pa > 1e-12))
                throw domain_error("trunc_gauss_mix: component mass on the box is ~0");
            cc.cdf_lo.push_back(pa);
            cc.cdf_hi.push_back(pb);
            cc.norm *= (pb - pa);
            peak *= 1.0 / (c.sigma[u] * std::sqrt(2.0 * M_PI) * (pb - pa));
        }
        finf += peak;
        comps->push_back(std::move(cc));
    }

    Density f;
    f.dim = d;
    f.support = box;
    f.f_inf = std::max(1.0, finf);
    f.name = "trunc-gauss-mix";
    f.pdf = [comps, box, d](const double* x) {
        if (!box.contains(x)) return 0.0;
        double v = 0.0;
        for (const auto& c : *comps) {
            double term = c.weight / c.norm;
            for (int i = 0; i < d; ++i) {
                const auto u = static_cast<size_t>(i);
                const double z = (x[u] - c.mean[u]) / c.sigma[u];
                term *= std::exp(-0.5 * z * z) / (c.sigma[u] * std::sqrt(2.0 * M_PI));
            }
            v += term;
        }
        return v;
    };
    f.sample = [comps, d](Rng& rng, double* out) {
        const double u = rng.uniform();
        double acc = 0.0;
        const Comp* pick = &comps->back();
        for (const auto& c : *comps) {
            acc += c.weight;
            if (u < acc) {
                pick = &c;
                break;
            }
        }
        for (int i = 0; i < d; ++i) {
            const auto k = static_cast<size_t>(i);
            const double p = pick->cdf_lo[k] +
                             rng.uniform_open() * (pick->cdf_hi[k] - pick->cdf_lo[k]);
            out[k] = pick->mean[k] + pick->sigma[k] * normal_quantile(p);
        }
    };
    return f;
}

Density histogram_density(std::vector<double> breaks, std::vector<double> probs) {
    if (breaks.size() < 2 || probs.size() + 1 != breaks.size())
        throw domain_error("histogram_density: need m+1 breaks for m cells");
    for (size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1]))
            throw domain_error("histogram_density: breaks must increase");
    double total = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw domain_error("histogram_density: negative cell probability");
        total += p;
    }
    if (!(total > 0.0)) throw domain_error("histogram_density: zero total mass");
    for (double& p : probs) p /= total;

    auto br = std::make_shared<std::vector<double>>(std::move(breaks));
    auto pr = std::make_shared<std::vector<double>>(std::move(probs));
    double finf = 0.0;
    for (size_t j = 0; j < pr->size(); ++j)
        finf = std::max(finf, (*pr)[j] / ((*br)[j + 1] - (*br)[j]));

    Density f;
    f.dim = 1;
    f.support = Box::interval(br->front(), br->back());
    f.f_inf = std::max(1.0, finf);
    f.name = "histogram";
    f.pdf = [br, pr](const double* x) {
        const double v = x[0];
        if (v < br->front() || v > br->back()) return 0.0;
        for (size_t j = 0; j < pr->size(); ++j)
            if (v <= (*br)[j + 1]) return (*pr)[j] / ((*br)[j + 1] - (*br)[j]);
        return 0.0;
    };
    f.sample = [br, pr](Rng& rng, double* out) {
        const double u = rng.uniform();
        double acc = 0.0;
        for (size_t j = 0; j < pr->size(); ++j) {
            acc += (*pr)[j];
            if (u < acc || j + 1 == pr->size()) {
                const double frac = 1.0 - (acc - u) / std::max((*pr)[j], 1e-300);
                out[0] = (*br)[j] + frac * ((*br)[j + 1] - (*br)[j]);
                return;
            }
        }
    };
    return f;
}

Density density_by_name(const std::string& name) {
    if (name == "uniform") return uniform_density(Box::interval(0.0, 1.0));
    if (name == "trunc-gauss-mix") {
        GaussComponent a{0.6, {0.35}, {0.15}}, b{0.4, {0.7}, {0.1}};
        return trunc_gauss_mix_density(Box::interval(0.0, 1.0), {a, b});
    }
    if (name == "histogram")
        return histogram_density({0.0, 0.25, 0.5, 0.75, 1.0}, {0.4, 0.1, 0.3, 0.2});
    throw config_error("unknown density name: " + name);
}

} // namespace lsbound
