#pragma once

#include "lsbound/common.hpp"
#include "lsbound/density.hpp"
#include "lsbound/grid.hpp"
#include "lsbound/kernels.hpp"

#include <functional>
#include <optional>
#include <string>

namespace lsbound {

// Weight w(t, x), either in difference form w(t - x) with a d-variate base
// function, or fully generic. All the norm functionals of the class live on
// this type.
struct WeightFunction {
    enum class Form { difference, generic };

    Form form = Form::difference;
    int dim = 1;

    // difference form: w(t, x) = base(t - x)
    std::function<double(const double*)> base;
    Box base_support;            // support box of the base function
    double support_measure = 0;  // mes{supp(base)}
    double lipschitz = kInf;     // Lipschitz constant of base when known
    double sup_bound = kNaN;     // analytic bound on ||base||_inf when known

    // generic form: w(t, x)
    std::function<double(const double*, const double*)> eval2;
    Box t_support, x_support;

    std::string label;

    double eval_base(const double* u) const { return base(u); }
    double eval_base1(double u) const { return base(&u); }

    bool is_difference() const { return form == Form::difference; }
    bool is_zero() const { return support_measure == 0.0 && is_difference(); }

    double operator()(const double* t, const double* x) const {
        if (is_difference()) {
            double u[2];
            for (int i = 0; i < dim; ++i) u[i] = t[i] - x[i];
            return base(u);
        }
        return eval2(t, x);
    }
};

// base(u) on [lo, hi]; measure defaults to the support length.
WeightFunction make_weight_1d(std::function<double(double)> base, double lo, double hi,
                              double lipschitz = kInf, std::string label = {});

// w(t, x) = scale * K((t-x)/h), e.g. scale = 1/(n V_h) for the KDE weight.
WeightFunction kernel_weight(const Kernel& k, const std::vector<double>& h, double scale,
                             std::string label = {});

WeightFunction zero_weight(int dim = 1);

// difference of two difference-form weights (pointwise on the base)
WeightFunction weight_difference(const WeightFunction& a, const WeightFunction& b);

// pointwise square, difference form
WeightFunction weight_square(const WeightFunction& w);

// w scaled by c
WeightFunction weight_scaled(const WeightFunction& w, double c);

// M_p(w) = sup_x ||w(.,x)||_{p,tau} v sup_t ||w(t,.)||_{p,nu} with Lebesgue
// measures; when f is given, the x-marginal uses nu'(dx) = f(x) dx, which is
// M_{p,tau,nu'}(w). For difference-form weights and no f this is ||base||_p.
double m_p(const WeightFunction& w, double p, const Density* f = nullptr,
           const QuadratureConfig& cfg = {}, NormGuard* guard = nullptr);

// Sigma_s(w, f) = [ integral ( integral w^2(t,x) f(x) dx )^{s/2} dt ]^{1/s}
double sigma_s(const WeightFunction& w, const Density& f, double s,
               const QuadratureConfig& cfg = {}, NormGuard* guard = nullptr);

struct W2Result {
    bool pass = false;
    double ratio = 0.0;         // mes{|w| >= alpha1 ||w||_inf} / mes{supp w}
    double level_measure = 0.0;
    double support_measure = 0.0;
};

// Assumption (W2): mes{ |w| >= alpha1 ||w||_inf } >= alpha2 mes{supp w}.
// The sup is a grid max plus the Lipschitz slack L*step*sqrt(d)/2 when the
// constant is known.
W2Result verify_W2(const WeightFunction& w, double alpha1, double alpha2,
                   const QuadratureConfig& cfg = {});

struct YoungResult {
    bool ok = false;
    double lhs = 0.0; // ||K * Q||_p
    double rhs = 0.0; // ||K||_1 ||Q||_p
};

// Young's inequality for difference-form weights: ||K*Q||_p <= ||K||_1 ||Q||_p.
YoungResult young_check(const WeightFunction& K, const WeightFunction& Q, double p,
                        const QuadratureConfig& cfg = {});

// Convolution of two 1-d difference-form weights as a new weight.
WeightFunction convolve_weights_1d(const WeightFunction& a, const WeightFunction& b,
                                   int pts = 2048);

} // namespace lsbound
