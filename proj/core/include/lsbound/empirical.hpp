#pragma once

#include "lsbound/density.hpp"
#include "lsbound/framework.hpp"
#include "lsbound/weight.hpp"

#include <map>
#include <vector>

namespace lsbound {

// Rosenthal constant: 15 s / ln s for s > 2, 1 on [1, 2].
double c1(double s);

// c3(s) = c1(s) v c2(s/(s-1)); c2 = 1 for difference-form weights.
double c3(double s, double c2 = 1.0);

// 0 on [1,2), 1 at s = 2, c3(s) for s > 2.
double c_star_s(double s, double c2 = 1.0);

// u_eps = 2^eps (1 + eps)
double u_eps(double eps);

// ubar_eps(gamma) = u_eps / (1 - 4 c1(s)(1+eps) gamma); requires the
// denominator to stay positive.
double ubar_eps(double eps, double gamma, double s);

// positive root y of sqrt(y) lamA + y lamB = gamma^2
double y_gamma(double lambda_A_tilde, double lambda_B_tilde, double gamma);

// Per-weight quantities of the fixed-w tail bound.
struct FixedWeightBound {
    double s = 0.0;
    int n = 0;
    double M_s = 0.0, M_2 = 0.0, Sigma_s = 0.0;
    double rho = 0.0;      // rho_s(w, f)
    double omega_sq = 0.0; // omega_s^2(w, f)
    double c_star = 0.0;
};

double rho_s(const WeightFunction& w, const Density& f, double s, int n,
             const QuadratureConfig& cfg = {});

double omega_sq(const WeightFunction& w, const Density& f, double s, int n,
                const QuadratureConfig& cfg = {});

FixedWeightBound fixed_weight_bound(const WeightFunction& w, const Density& f, double s, int n,
                                    const QuadratureConfig& cfg = {});

// exp{ -z^2 / ( omega^2/3 + (4/3) c_*(s) M_s z ) } at threshold rho_s + z.
double theorem1_tail(const FixedWeightBound& b, double z);

// f-free variant for s in [1,2): threshold 4 n^{1/s} M_s, tail exp{-z^2/(37 n M_s^2)}.
double corollary2_tail(double M_s, double s, int n, double z);

// f-free variant for s > 2 using f_inf only.
struct Corollary3Bound {
    double rho_tilde = 0.0;
    double omega_tilde_sq = 0.0;
    double M_s = 0.0;
    double s = 0.0;
    double c3_s = 0.0;
};
Corollary3Bound corollary3_bound(const WeightFunction& w, double f_inf, double sqrtf_s_norm,
                                 double s, int n, const QuadratureConfig& cfg = {});
double corollary3_tail(const Corollary3Bound& b, double z);

// U_xi(w, f), A_xi^2(w), B_xi(w) of the uniform machinery.
double U_xi(const WeightFunction& w, const Density& f, double s, int n,
            const QuadratureConfig& cfg = {});
double A_xi_sq(const WeightFunction& w, double f_inf, double s, int n,
               const QuadratureConfig& cfg = {});
double B_xi(const WeightFunction& w, double s, int n, const QuadratureConfig& cfg = {});

// Data-driven majorant for s > 2.
struct RandomMajorant {
    double sigma_hat = 0.0; // ||S_w||_s with S_w^2(t) = n^-1 sum w^2(t - X_i)
    double u_hat = 0.0;     // c1(s) [ sqrt(n) sigma_hat + 2 n^{1/s} M_s ]
    double u_breve = 0.0;   // max(u_hat, sqrt(n) M_2)
    double M_s = 0.0, M_2 = 0.0;
};

RandomMajorant random_majorant(const WeightFunction& w, const std::vector<double>& sample,
                               double s, const QuadratureConfig& cfg = {});

// Class of difference-form weights with the Assumption-(W) parameters.
class WeightClass {
public:
    FiniteParamSpace space;
    int n = 0;
    double mu_star = 0.0;   // (W1) sup of support measures
    double mu = 0.0;        // (W3) n * inf of support measures
    double alpha1 = 0.5;    // (W2)
    double alpha2 = 1.0;    // (W2)
    double beta = 0.5;      // (W4)
    double C_Z_beta = 0.0;  // (W4) constant
    double f_inf = 1.0;
    bool mp_unity = false;  // m_p = 1 classes (kernel dictionaries)
    QuadratureConfig quad;

    double alpha_star() const { return 1.0 / (alpha1 * std::sqrt(alpha2)); }
    // cached n^{1/p}-scaled extremal norms over the class
    double wbar(double p) const;
    double wunder(double p) const;
    double norm_p(std::size_t i, double p) const;
    double m_exponent(double p) const { return mp_unity ? 1.0 : 2.0 / p; }
    double C_p(double p) const;

private:
    mutable std::map<std::pair<std::size_t, long long>, double> norm_cache_;
};

// Populates mu_star / mu from the weights and verifies (W2) and (W4);
// throws precondition_error when a class parameter fails.
void verify_weight_class(WeightClass& cls, bool check_w2 = true);

struct Theorem4Report {
    double s = 0.0, eps = 0.0, z = 0.0, q = 1.0;
    double z_floor = 0.0;
    double majorant_factor = 0.0; // total multiplier of n^{1/s}||w||_s (s<2) or sqrt(n)||w||_2 (s=2)
    double tail = 0.0;
    double T_const = 0.0; // T_{3,eps} or T_{4,eps}
    double L_exp = 0.0;
    std::size_t covering_eps8 = 0;
    std::vector<double> majorant; // per member
};

// Uniform non-random bound for s in [1, 2].
Theorem4Report theorem4_bound(const WeightClass& cls, double s, double eps, double z,
                              double q = 1.0);

// Ungated constant helpers (plain arithmetic; the gated assembly below
// enforces the theorem preconditions on top of these).
double theorem5_gamma(double mu, double s);                // mu^{1/(s^4)-1/2}
double theorem5_theta0(double C_s, double alpha1, double alpha2, double f_inf, double s);
double theorem5_theta1(double alpha_star);                 // [148 alpha_*^4]^-1
double theorem5_theta2(double alpha_star, double f_inf, double s, double C_s2 = 1.0);
double theorem5_y_star(double mu, double mu_star, int n, double s, double theta1,
                       double theta2);
double theorem5_C_star(double y, double theta0, double mu_star, int n, double s);

struct Theorem5Report {
    double s = 0.0, eps = 0.0, y = 0.0, q = 1.0;
    double alpha_star = 0.0, gamma = 0.0, y_star = 0.0;
    double theta0 = 0.0;     // vartheta_0
    double theta1 = 0.0;     // vartheta_1 (s in (2,4))
    double theta2 = 0.0;     // vartheta_2 (s >= 4)
    double C_star_y = 0.0;   // C*_xi(y)
    double ubar = 0.0;       // ubar_eps(gamma)
    double k_star = 0.0, m = 0.0;
    double T5 = 0.0, T6 = 0.0;
    double L_star_beta = 0.0;
    double tail_moment = 0.0; // T5 n^{q/2} [C*]^q e^{-y/2}
    double majorant_multiplier = 0.0; // ubar * C*_xi(y), applies to u_breve(w)
};

// Random uniform bound mechanics for s > 2 under Assumptions (W) and (L).
Theorem5Report theorem5_assembly(const WeightClass& cls, double s, double eps, double y,
                                 double q = 1.0);

} // namespace lsbound
