#pragma once

#include "lsbound/empirical.hpp"
#include "lsbound/rng.hpp"

#include <string>

namespace lsbound {

// Symmetric noise model under Assumption (E1) (sub-exponential tail
// P{|e| >= x} <= v exp(-b x^a)) or (E2) (E|e|^p <= P).
struct NoiseModel {
    enum class Kind { E1, E2 };
    enum class Law { gaussian, laplace, uniform, student_t };

    Kind kind = Kind::E1;
    Law law = Law::gaussian;
    // E1 parameters
    double alpha = 2.0, v = 1.0, b = 0.5;
    // E2 parameters
    double p = 4.0, P = 1.0;
    // law parameters
    double scale = 1.0; // laplace lambda / uniform halfwidth
    double nu = 5.0;    // student-t dof

    double sigma_eps() const; // sqrt(E e^2)
    double e_s(double s) const;
    double draw(Rng& rng) const;
    std::string name() const;
};

// Presets: gaussian | laplace | uniform | student-t (dof = p + 1 given p).
NoiseModel noise_by_name(const std::string& name, double param = kNaN);

// Seeded Monte-Carlo estimates of sigma_eps and e_s (for laws without closed
// forms, or by request); one pass of `samples` draws.
struct NoiseMoments {
    double sigma_eps = 0.0;
    double e_s = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
};
NoiseMoments mc_noise_moments(const NoiseModel& noise, double s, std::uint64_t seed,
                              long samples = 1000000);

// g_{alpha,b}(x) = exp{ -|x| ^ min over |b^{1/alpha} x|^{alpha/(2+alpha)} } with
// exponent alpha/(2+alpha) for s < 2 and alpha/(1+alpha) for s >= 2.
double g_alpha_b(double x, double alpha, double b, double s);

// G1(x) = (1 + n v) g_{alpha,b}(x)
double G1(double x, double alpha, double b, double v, int n, double s);

// G2(x) = (1 + nP) (x^-1 p ln(1 + x/p))^{p/2 or p}
double G2(double x, double p, double P, int n, double s);

// rho and omega analogues for the regression-type process.
double varrho_s(const WeightFunction& w, const Density& f, const NoiseModel& noise, double s,
                int n, const QuadratureConfig& cfg = {});
double varpi_sq(const WeightFunction& w, const Density& f, const NoiseModel& noise, double s,
                int n, const QuadratureConfig& cfg = {});

struct RegressionFixedBound {
    double s = 0.0;
    int n = 0;
    double M_s = 0.0;
    double rho = 0.0;      // varrho_s(w, f)
    double omega_sq = 0.0; // varpi_s^2(w, f)
    double c_star = 0.0;
    NoiseModel noise;
};

RegressionFixedBound regression_fixed_bound(const WeightFunction& w, const Density& f,
                                            const NoiseModel& noise, double s, int n,
                                            const QuadratureConfig& cfg = {});

// P{ ||eta_w||_s >= rho + z } <= G1(Upsilon) or G2(Upsilon) with
// Upsilon = z^2 / (omega^2/3 + (4/3) c_* M_s z).
double theorem8_tail(const RegressionFixedBound& b, double z);

struct Theorem9Report {
    double s = 0.0, eps = 0.0, y = 0.0, q = 1.0;
    double a = 0.0;     // leading constant of the majorant
    double b_n_sq = 0.0;
    double c_n = 0.0;
    double T_n = 0.0;        // T_{n,eps}
    double L_alpha_b = 0.0;  // chaining series for g_{alpha,b}
    double J_alpha_b = 0.0;  // moment integral for g_{alpha,b}^{1/4}
    double majorant_factor = 0.0; // a u_eps (1 + 2 sqrt(y) b_n + 2 y c_n); times sqrt(n)||w||_2
    double tail = 0.0;
    std::vector<double> majorant; // per member
};

// Uniform bound for the regression process over a difference-form class on a
// bounded interval; noise must satisfy (E1).
Theorem9Report theorem9_bound(const WeightClass& cls, const NoiseModel& noise,
                              double mes_interval, double s, double eps, double y,
                              double q = 1.0);

} // namespace lsbound
