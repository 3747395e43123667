#pragma once

#include "lsbound/empirical.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace lsbound {

// D(x) = e^{dx} [ x + (1/2) L sqrt(d) (e^x - 1) + k_inf (e^{dx} - 1) ], x >= 0.
double kde_D(double x, int d, double L_K, double k_inf);
double kde_D_prime(double x, int d, double L_K, double k_inf);

// Finite kernel dictionary with the Assumption-(K) constants.
struct KdeDictionary {
    std::vector<Kernel> kernels;
    int dim = 1;
    double L_K = 0.0;    // (K1) common Lipschitz constant
    double k1 = 1.0;     // (K2) lower bound on |int K|, <= 1
    double k_inf = 1.0;  // (K2) upper bound on ||K||_inf, >= 1
    double beta_K = 0.5; // (K3)
    double C_K = 0.0;    // (K3) constant of the dictionary
    std::vector<std::vector<double>> sup_dist; // pairwise L_inf distances

    static KdeDictionary build(std::vector<Kernel> kernels, double beta_K = 0.5);
};

double kde_theta1(const KdeDictionary& dict);
double kde_theta2(const KdeDictionary& dict);

// w = phi_1[(K, h)] = n^-1 K_h as a weight function.
WeightFunction kde_phi1(const Kernel& K, const std::vector<double>& h, int n);

// Separable convolution weight w = phi_2[(K,h),(Q,hh)] = n^-1 (K_h * Q_hh);
// product kernels only. Results are cached per (kernel ids, h, hh, pts).
class ConvolutionCache {
public:
    WeightFunction phi2(const Kernel& K, size_t k_id, const std::vector<double>& h,
                        const Kernel& Q, size_t q_id, const std::vector<double>& hh, int n,
                        int pts = 2048);

private:
    struct PerCoord {
        std::vector<std::shared_ptr<const Tabulated1>> coords;
        Box support;
        double sup = 0.0, lip = 0.0;
    };
    std::map<std::string, std::shared_ptr<const PerCoord>> cache_;
    std::mutex mu_;
};

// d^(1)_theta(z, z') = theta * max(||K - K'||_inf, Delta_H(h, h'))
double kde_d1(const KdeDictionary& dict, size_t k1_, const std::vector<double>& h1, size_t k2_,
              const std::vector<double>& h2, double theta);

// d^(2)_theta over pairs [(K,h),(Q,hh)]
double kde_d2(const KdeDictionary& dict, size_t ka, const std::vector<double>& ha, size_t qa,
              const std::vector<double>& hha, size_t kb, const std::vector<double>& hb,
              size_t qb, const std::vector<double>& hhb, double theta);

// The KDE weight class W^(1): kernel dictionary x geometric bandwidth grid.
struct KdeClass {
    KdeDictionary dict;
    BandwidthSet bw;
    std::vector<std::vector<double>> bandwidths; // geometric grid points
    int n = 0;
    double f_inf = 1.0;
    double theta1 = 1.0;

    struct Member {
        size_t kernel = 0;
        size_t h_idx = 0;
        double V_h = 1.0;
    };
    std::vector<Member> members;

    static KdeClass build(KdeDictionary dict, BandwidthSet bw, int grid_per_coord, int n,
                          double f_inf);

    WeightFunction weight(size_t member) const;
    double d1(size_t i, size_t j) const; // with theta = theta1
    // FiniteParamSpace view with d^(1)_{theta1} and the product covering rule
    FiniteParamSpace space() const;
    // WeightClass view (alpha_1 = 1/2, alpha_2 = alpha_{2,1}, m_p = 1)
    WeightClass weight_class(double beta, const QuadratureConfig& quad = {}) const;
};

// KDE/convolution-process constants of the uniform random bound (ungated).
struct KdeConstants {
    int i = 1; // 1 = kernel process, 2 = convolution process
    double theta0 = 0.0;   // vartheta_0^(i)
    double alpha2_i = 0.0; // (W2) alpha_2 for the class
    double alpha_star = 0.0;
    double theta1_const = 0.0; // vartheta_1^(i)
    double theta2_const = 0.0; // vartheta_2^(i)
    double gamma = 0.0;
    double y_star = 0.0;
    double A_H = 0.0, B_H = 0.0;
    double k_star = 0.0;
    double C_star_y = kNaN; // at the requested y (NaN if y not given)
};

KdeConstants kde_constants(int i, const KdeDictionary& dict, const BandwidthSet& bw, int n,
                           double s, double f_inf, double y = kNaN);

struct Theorem7Report {
    KdeConstants consts;
    double s = 0.0, eps = 0.0, y = 0.0, q = 1.0;
    double ubar = 0.0;
    double majorant_multiplier = 0.0; // ubar * C*_{xi,i}(y)
    double T1_tilde = 0.0, T2_tilde = 0.0;
    double tail_moment = 0.0; // T1 (1+A_H)^{2i} (1+B_H) n^{q/2} [C*]^q e^{-y/2}
    double L_star_beta = 0.0;
    double C_beta_d = 0.0;
    double bandwidth_floor = 0.0; // required nV_{h_min}
};

// Gated assembly of the Theorem-7 uniform random bound for process i.
Theorem7Report theorem7_assembly(int i, const KdeDictionary& dict, const BandwidthSet& bw,
                                 int n, double s, double eps, double y, double q = 1.0);

// per-process majorant variants; random ones need the sample and s > 2
struct KdeMajorants {
    double U = kNaN;       // non-random (f-dependent for s > 2)
    double U_hat = kNaN;   // data-driven
    double U_bar = kNaN;   // max(U, sqrt(n) M_2)
    double U_breve = kNaN; // max(U_hat, sqrt(n) M_2)
};

KdeMajorants kde_majorants(int i, const WeightFunction& w, const Density* f,
                           const std::vector<double>* sample, double s, int n,
                           const QuadratureConfig& cfg = {});

} // namespace lsbound
