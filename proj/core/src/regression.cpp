#include "lsbound/regression.hpp"

#include <algorithm>
#include <cmath>

namespace lsbound {

double NoiseModel::sigma_eps() const {
    switch (law) {
    case Law::gaussian:
        return 1.0;
    case Law::laplace:
        return scale * std::sqrt(2.0);
    case Law::uniform:
        return scale / std::sqrt(3.0);
    case Law::student_t:
        if (!(nu > 2.0)) throw domain_error("student_t: sigma needs nu > 2");
        return std::sqrt(nu / (nu - 2.0));
    }
    return 1.0;
}

double NoiseModel::e_s(double s) const {
    if (!(s >= 1.0)) throw domain_error("e_s: s >= 1");
    switch (law) {
    case Law::gaussian:
        // E|Z|^s = 2^{s/2} Gamma((s+1)/2) / sqrt(pi)
        return std::pow(std::pow(2.0, 0.5 * s) * std::tgamma(0.5 * (s + 1.0)) /
                            std::sqrt(M_PI),
                        1.0 / s);
    case Law::laplace:
        return scale * std::pow(std::tgamma(s + 1.0), 1.0 / s);
    case Law::uniform:
        return scale * std::pow(1.0 / (s + 1.0), 1.0 / s);
    case Law::student_t: {
        if (!(s < nu)) throw domain_error("student_t: E|t|^s needs s < nu");
        const double lg = 0.5 * s * std::log(nu) + std::lgamma(0.5 * (s + 1.0)) +
                          std::lgamma(0.5 * (nu - s)) - 0.5 * std::log(M_PI) -
                          std::lgamma(0.5 * nu);
        return std::exp(lg / s);
    }
    }
    return 1.0;
}

double NoiseModel::draw(Rng& rng) const {
    switch (law) {
    case Law::gaussian:
        return rng.normal();
    case Law::laplace:
        return rng.laplace(scale);
    case Law::uniform:
        return rng.uniform(-scale, scale);
    case Law::student_t:
        return rng.student_t(nu);
    }
    return 0.0;
}

std::string NoiseModel::name() const {
    switch (law) {
    case Law::gaussian:
        return "gaussian";
    case Law::laplace:
        return "laplace";
    case Law::uniform:
        return "uniform";
    case Law::student_t:
        return "student-t";
    }
    return "?";
}

NoiseModel noise_by_name(const std::string& name, double param) {
    NoiseModel m;
    if (name == "gaussian") {
        // P{|Z| >= x} = 2(1 - Phi(x)) <= exp(-x^2/2); keep a small documented
        // margin delta = 0.02 on b.
        m.kind = NoiseModel::Kind::E1;
        m.law = NoiseModel::Law::gaussian;
        m.alpha = 2.0;
        m.v = 1.0;
        m.b = 0.5 * (1.0 - 0.02);
        return m;
    }
    if (name == "laplace") {
        // unit variance: lambda = 1/sqrt(2); P{|e| >= x} = exp(-x/lambda)
        m.kind = NoiseModel::Kind::E1;
        m.law = NoiseModel::Law::laplace;
        m.scale = 1.0 / std::sqrt(2.0);
        m.alpha = 1.0;
        m.v = 1.0;
        m.b = std::sqrt(2.0) * (1.0 - 0.02);
        return m;
    }
    if (name == "uniform") {
        const double a = std::isfinite(param) ? param : std::sqrt(3.0); // unit variance
        m.kind = NoiseModel::Kind::E1;
        m.law = NoiseModel::Law::uniform;
        m.scale = a;
        m.alpha = 1.0;
        m.v = 1.0;
        m.b = 1.0 / a; // 1 - x/a <= exp(-x/a)
        return m;
    }
    if (name == "student-t") {
        const double p = std::isfinite(param) ? param : 4.0;
        m.kind = NoiseModel::Kind::E2;
        m.law = NoiseModel::Law::student_t;
        m.p = p;
        m.nu = p + 1.0;
        m.P = m.e_s(p);
        m.P = std::pow(m.P, p); // E|e|^p
        return m;
    }
    throw config_error("unknown noise model: " + name);
}

NoiseMoments mc_noise_moments(const NoiseModel& noise, double s, std::uint64_t seed,
                              long samples) {
    if (samples < 1) throw domain_error("mc_noise_moments: samples >= 1");
    NoiseMoments m;
    m.samples = samples;
    m.seed = seed;
    Rng rng = Rng::stream(seed, 0x3107E);
    double acc2 = 0.0, accs = 0.0;
    for (long i = 0; i < samples; ++i) {
        const double e = noise.draw(rng);
        acc2 += e * e;
        accs += std::pow(std::abs(e), s);
    }
    m.sigma_eps = std::sqrt(acc2 / samples);
    m.e_s = std::pow(accs / samples, 1.0 / s);
    return m;
}

double g_alpha_b(double x, double alpha, double b, double s) {
    if (!(alpha > 0.0) || !(b > 0.0)) throw domain_error("g_alpha_b: alpha, b > 0");
    if (x < 0.0) throw domain_error("g_alpha_b: x >= 0");
    const double expo = s < 2.0 ? alpha / (2.0 + alpha) : alpha / (1.0 + alpha);
    const double second = std::pow(std::abs(std::pow(b, 1.0 / alpha) * x), expo);
    return std::exp(-std::min(x, second));
}

double G1(double x, double alpha, double b, double v, int n, double s) {
    return (1.0 + n * v) * g_alpha_b(x, alpha, b, s);
}

double G2(double x, double p, double P, int n, double s) {
    if (!(x > 0.0)) throw domain_error("G2: x > 0");
    if (!(p >= std::max(s, 2.0))) throw domain_error("G2: requires p >= s v 2");
    const double core = p / x * std::log1p(x / p);
    const double expo = s < 2.0 ? 0.5 * p : p;
    return (1.0 + n * P) * std::pow(core, expo);
}

double varrho_s(const WeightFunction& w, const Density& f, const NoiseModel& noise, double s,
                int n, const QuadratureConfig& cfg) {
    if (w.is_zero()) return 0.0;
    const double nd = n, se = noise.sigma_eps();
    if (s < 2.0) {
        const double Sig = sigma_s(w, f, s, cfg);
        const double Ms = m_p(w, s, nullptr, cfg);
        return se * std::min(std::sqrt(nd) * Sig, 4.0 * std::pow(nd, 1.0 / s) * Ms);
    }
    if (s == 2.0) return se * std::sqrt(nd) * m_p(w, 2.0, nullptr, cfg);
    const double Sig = sigma_s(w, f, s, cfg);
    const double Ms = m_p(w, s, nullptr, cfg);
    return c1(s) * (se * std::sqrt(nd) * Sig +
                    2.0 * std::pow(nd, 1.0 / s) * noise.e_s(s) * Ms);
}

double varpi_sq(const WeightFunction& w, const Density& f, const NoiseModel& noise, double s,
                int n, const QuadratureConfig& cfg) {
    if (w.is_zero()) return 0.0;
    const double nd = n, se = noise.sigma_eps();
    if (s < 2.0) {
        const double Ms = m_p(w, s, nullptr, cfg);
        return Ms * Ms * ((6.0 * se * se + 8.0) * nd + 96.0 * se * std::pow(nd, 1.0 / s));
    }
    if (s == 2.0) {
        const double M1p = m_p(w, 1.0, &f, cfg);
        const double M2 = m_p(w, 2.0, nullptr, cfg);
        return 6.0 * se * se * nd * M1p * M1p + 24.0 * se * std::sqrt(nd) * M2 * M2;
    }
    const double Mq = m_p(w, 2.0 * s / (s + 2.0), &f, cfg);
    const double Ms = m_p(w, s, nullptr, cfg);
    const double Sig = sigma_s(w, f, s, cfg);
    return 6.0 * c3(s) *
           (se * se * nd * Mq * Mq + 4.0 * se * std::sqrt(nd) * Sig * Ms +
            8.0 * noise.e_s(s) * std::pow(nd, 1.0 / s) * Ms * Ms);
}

RegressionFixedBound regression_fixed_bound(const WeightFunction& w, const Density& f,
                                            const NoiseModel& noise, double s, int n,
                                            const QuadratureConfig& cfg) {
    RegressionFixedBound b;
    b.s = s;
    b.n = n;
    b.noise = noise;
    b.M_s = m_p(w, s, nullptr, cfg);
    b.rho = varrho_s(w, f, noise, s, n, cfg);
    b.omega_sq = varpi_sq(w, f, noise, s, n, cfg);
    b.c_star = c_star_s(s);
    return b;
}

double theorem8_tail(const RegressionFixedBound& b, double z) {
    if (!(z > 0.0)) throw domain_error("theorem8_tail: z > 0");
    const double denom = b.omega_sq / 3.0 + (4.0 / 3.0) * b.c_star * b.M_s * z;
    if (denom <= 0.0) return 0.0;
    const double ups = z * z / denom;
    if (b.noise.kind == NoiseModel::Kind::E1)
        return G1(ups, b.noise.alpha, b.noise.b, b.noise.v, b.n, b.s);
    return G2(ups, b.noise.p, b.noise.P, b.n, b.s);
}

Theorem9Report theorem9_bound(const WeightClass& cls, const NoiseModel& noise,
                              double mes_interval, double s, double eps, double y, double q) {
    if (noise.kind != NoiseModel::Kind::E1)
        throw precondition_error("theorem9: requires an (E1) noise model");
    if (!(y > 1.0)) throw precondition_error("theorem9: y > 1");
    if (!(eps > 0.0 && eps <= 1.0)) throw domain_error("theorem9: eps in (0,1]");
    const double beta_cap = s < 2.0 ? noise.alpha / (2.0 + noise.alpha)
                                    : noise.alpha / (1.0 + noise.alpha);
    if (!(cls.beta < beta_cap))
        throw precondition_error(
            "theorem9: (W4) beta must satisfy beta < " +
            std::string(s < 2.0 ? "alpha/(2+alpha)" : "alpha/(1+alpha)") + " = " +
            std::to_string(beta_cap));

    Theorem9Report rep;
    rep.s = s;
    rep.eps = eps;
    rep.y = y;
    rep.q = q;
    const double nd = cls.n, se = noise.sigma_eps(), as = cls.alpha_star();
    rep.a = std::max(se * std::sqrt(mes_interval),
                     c1(s) * (se * std::sqrt(cls.f_inf) + 2.0 * noise.e_s(s) * as));
    rep.c_n = (4.0 / 3.0) * c_star_s(s) * as * std::pow(nd, -1.0 / s);
    if (s < 2.0) {
        rep.b_n_sq = (2.0 * se * se + 8.0 / 3.0 + 32.0 * se * std::pow(nd, 1.0 / s - 1.0)) *
                     std::pow(cls.mu_star, 2.0 / s - 1.0);
    } else if (s == 2.0) {
        rep.b_n_sq = 2.0 * sq(cls.f_inf) * cls.mu_star + 8.0 / std::sqrt(nd);
    } else {
        rep.b_n_sq = 2.0 * c3(s) * sq(cls.f_inf) *
                     (se * se * std::pow(cls.mu_star, 2.0 / s) +
                      (4.0 * se * as + 8.0 * noise.e_s(s) * sq(as)) * std::pow(nd, -1.0 / s));
    }
    const double b_n = std::sqrt(rep.b_n_sq);
    const double factor = 1.0 + 2.0 * std::sqrt(y) * b_n + 2.0 * y * rep.c_n;
    rep.majorant_factor = rep.a * u_eps(eps) * factor;
    for (std::size_t i = 0; i < cls.space.size(); ++i)
        rep.majorant.push_back(rep.majorant_factor * std::sqrt(nd) * cls.norm_p(i, 2.0));

    // L^{(eps)}_{alpha,b} = sum_k exp{ eps^-beta 2^{beta k + 1} } sqrt(g(9 2^{k-3} k^-2));
    // the two exponentials combine in log space so late terms underflow to 0
    // instead of producing inf * 0.
    double L = 0.0;
    for (int k = 1; k <= 60; ++k) {
        const double x = 9.0 * std::pow(2.0, k - 3) / double(k * k);
        const double expo = s < 2.0 ? noise.alpha / (2.0 + noise.alpha)
                                    : noise.alpha / (1.0 + noise.alpha);
        const double g_expo = std::min(x, std::pow(std::pow(noise.b, 1.0 / noise.alpha) * x,
                                                   expo));
        const double log_term =
            std::pow(eps, -cls.beta) * std::pow(2.0, cls.beta * k + 1.0) - 0.5 * g_expo;
        L += std::exp(log_term);
        if (!std::isfinite(L))
            throw divergence_error("theorem9: L_{alpha,b} series diverges (beta too large)");
    }
    rep.L_alpha_b = L;
    auto integrand = [&](double x) {
        return q * std::pow(x - 1.0, q - 1.0) *
               std::pow(g_alpha_b(x, noise.alpha, noise.b, s), 0.25);
    };
    double xmax = 2.0;
    const double head = std::max(integrand(1.5), 1e-300);
    while (integrand(xmax) > 1e-14 * head && xmax < 1e9) xmax *= 2.0;
    rep.J_alpha_b = adaptive_simpson(integrand, 1.0, xmax, 1e-10);

    const double w2bar = cls.wbar(2.0);
    rep.T_n = (1.0 + nd * noise.v) *
              std::pow(std::pow(2.0, 2.0 * eps) * (1.0 + eps) * rep.a * w2bar, q) /
              (std::pow(2.0, q * eps) - 1.0) *
              std::exp(cls.C_Z_beta + std::pow(8.0 / eps, cls.beta)) *
              (1.0 + std::exp(2.0 * cls.C_Z_beta) * rep.L_alpha_b) * rep.J_alpha_b;
    // g^{1/4} evaluated through its exponent so large y does not underflow
    // before the quarter power is applied
    const double expo = s < 2.0 ? noise.alpha / (2.0 + noise.alpha)
                                : noise.alpha / (1.0 + noise.alpha);
    const double gexp = std::min(y, std::pow(std::pow(noise.b, 1.0 / noise.alpha) * y, expo));
    rep.tail = rep.T_n * std::pow(factor, q) * std::exp(-0.25 * gexp);
    return rep;
}

} // namespace lsbound
