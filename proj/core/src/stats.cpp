#include "lsbound/stats.hpp"

#include "lsbound/common.hpp"
#include "lsbound/grid.hpp"
#include "lsbound/rng.hpp"

#include <cmath>

namespace lsbound {

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("normal_quantile: p must be in (0,1)");
    // Acklam's rational approximation, then one Halley step on erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Continued fraction for the incomplete beta (Lentz algorithm).
double betacf(double a, double b, double x) {
    const int kMaxIter = 300;
    const double kEps = 3e-16, kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double incbeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - std::exp(lbeta + b * std::log1p(-x) + a * std::log(x)) * betacf(b, a, 1.0 - x) / b;
}

double incbeta_inv(double a, double b, double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (incbeta(a, b, mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double clopper_pearson_upper(long k, long n, double confidence) {
    if (n <= 0 || k < 0 || k > n) throw domain_error("clopper_pearson_upper: bad k/n");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw domain_error("clopper_pearson_upper: confidence in (0,1)");
    if (k == n) return 1.0;
    return incbeta_inv(static_cast<double>(k) + 1.0, static_cast<double>(n - k), confidence);
}

double adaptive_simpson(const std::function<double(double)>& fun, double a, double b,
                        double rel_tol, double* err) {
    struct Rec {
        static double go(const std::function<double(double)>& f, double a, double b, double fa,
                         double fm, double fb, double whole, double tol, int depth, double* e) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
                if (e) *e += std::abs(delta) / 15.0;
                return left + right + delta / 15.0;
            }
            return go(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, e) +
                   go(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, e);
        }
    };
    const double fa = fun(a), fb = fun(b), fm = fun(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    if (err) *err = 0.0;
    return Rec::go(fun, a, b, fa, fm, fb, whole, tol, 48, err);
}

double Rng::normal() { return normal_quantile(uniform_open()); }

double Rng::laplace(double lambda) {
    const double u = uniform_open();
    const double v = uniform() < 0.5 ? -1.0 : 1.0;
    return v * (-lambda * std::log(u));
}

double Rng::student_t(double nu) {
    // Bailey's polar method for Student-t: deterministic rejection on a
    // counter-based stream stays reproducible.
    for (;;) {
        const double u = 2.0 * uniform_open() - 1.0;
        const double v = 2.0 * uniform_open() - 1.0;
        const double w = u * u + v * v;
        if (w >= 1.0 || w == 0.0) continue;
        const double t = u * std::sqrt(nu * (std::pow(w, -2.0 / nu) - 1.0) / w);
        return t;
    }
}

} // namespace lsbound
