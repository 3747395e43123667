#pragma once

#include "lsbound/common.hpp"

#include <algorithm>
#include <functional>

namespace lsbound {

// Midpoint grid on [lo, hi] with n cells; node i sits at the cell center.
struct Grid1 {
    double lo = 0.0, hi = 1.0;
    int n = 0;

    Grid1() = default;
    Grid1(double a, double b, int cells) : lo(a), hi(b), n(cells) {
        if (!(b > a) || cells <= 0) throw grid_error("Grid1: empty or inverted grid");
    }
    double step() const { return (hi - lo) / n; }
    double point(int i) const { return lo + (i + 0.5) * step(); }
    // index of the cell containing x, clamped to [0, n-1]
    int cell(double x) const {
        int i = static_cast<int>(std::floor((x - lo) / step()));
        return std::clamp(i, 0, n - 1);
    }
};

struct QuadratureConfig {
    int pts_per_dim = 1024;   // cells per dimension across the integrand support
    bool refine_check = true; // compare against half resolution
    double rtol = 1e-3;       // relative tolerance of the refinement check
};

// Result of a guarded norm evaluation: value at full resolution plus the
// relative deviation from the half-resolution value.
struct GuardedValue {
    double value = 0.0;
    double refine_rel_dev = 0.0;
    bool within_tol = true;
};

// Collects refinement diagnostics for a report; optional everywhere.
struct NormGuard {
    struct Entry {
        std::string name;
        double value;
        double rel_dev;
        bool ok;
    };
    std::vector<Entry> entries;
    bool all_ok() const {
        for (const auto& e : entries)
            if (!e.ok) return false;
        return true;
    }
    void add(const std::string& name, const GuardedValue& g) {
        entries.push_back({name, g.value, g.refine_rel_dev, g.within_tol});
    }
};

namespace detail {

template <class F>
double lp_raw_1d(const F& f, double lo, double hi, double p, int n) {
    const Grid1 g(lo, hi, n);
    const double step = g.step();
    if (std::isinf(p)) {
        double m = 0.0;
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(f(g.point(i))));
        return m;
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::pow(std::abs(f(g.point(i))), p);
    return std::pow(acc * step, 1.0 / p);
}

template <class F>
double lp_raw_2d(const F& f, const Box& box, double p, int n) {
    const Grid1 g0(box.lo[0], box.hi[0], n), g1(box.lo[1], box.hi[1], n);
    const double cell = g0.step() * g1.step();
    if (std::isinf(p)) {
        double m = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double x[2] = {g0.point(i), g1.point(j)};
                m = std::max(m, std::abs(f(x)));
            }
        return m;
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x[2] = {g0.point(i), g1.point(j)};
            acc += std::pow(std::abs(f(x)), p);
        }
    return std::pow(acc * cell, 1.0 / p);
}

} // namespace detail

// ||f||_p over an interval by midpoint rule, with optional refinement guard.
template <class F>
GuardedValue lp_norm_1d(const F& f, double lo, double hi, double p,
                        const QuadratureConfig& cfg = {}) {
    GuardedValue out;
    out.value = detail::lp_raw_1d(f, lo, hi, p, cfg.pts_per_dim);
    if (cfg.refine_check) {
        const double coarse = detail::lp_raw_1d(f, lo, hi, p, std::max(2, cfg.pts_per_dim / 2));
        const double scale = std::max({std::abs(out.value), std::abs(coarse), 1e-300});
        out.refine_rel_dev = std::abs(out.value - coarse) / scale;
        out.within_tol = out.refine_rel_dev <= cfg.rtol;
    }
    return out;
}

// f takes const double* of length box.dim(); d in {1,2}.
template <class F>
GuardedValue lp_norm(const F& f, const Box& box, double p, const QuadratureConfig& cfg = {}) {
    if (box.dim() == 1) {
        auto f1 = [&f](double x) { return f(&x); };
        return lp_norm_1d(f1, box.lo[0], box.hi[0], p, cfg);
    }
    if (box.dim() != 2) throw grid_error("lp_norm: only d in {1,2} supported");
    GuardedValue out;
    out.value = detail::lp_raw_2d(f, box, p, cfg.pts_per_dim);
    if (cfg.refine_check) {
        const double coarse = detail::lp_raw_2d(f, box, p, std::max(2, cfg.pts_per_dim / 2));
        const double scale = std::max({std::abs(out.value), std::abs(coarse), 1e-300});
        out.refine_rel_dev = std::abs(out.value - coarse) / scale;
        out.within_tol = out.refine_rel_dev <= cfg.rtol;
    }
    return out;
}

// Midpoint integral of f over [lo, hi].
template <class F>
double integrate_1d(const F& f, double lo, double hi, int n) {
    const Grid1 g(lo, hi, n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(g.point(i));
    return acc * g.step();
}

// Lp norm of tabulated values on a midpoint grid with the given cell volume.
inline double lp_norm_grid(const std::vector<double>& values, double cell_volume, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    if (p == 2.0) {
        for (double v : values) acc += v * v;
    } else if (p == 1.0) {
        for (double v : values) acc += std::abs(v);
    } else if (p == 1.5) {
        for (double v : values) {
            const double a = std::abs(v);
            acc += a * std::sqrt(a);
        }
    } else if (p == 3.0) {
        for (double v : values) {
            const double a = std::abs(v);
            acc += a * a * a;
        }
    } else if (p == 4.0) {
        for (double v : values) acc += v * v * v * v;
    } else {
        for (double v : values) acc += std::pow(std::abs(v), p);
    }
    return std::pow(acc * cell_volume, 1.0 / p);
}

// Discrete convolution of two midpoint-sampled functions; result sampled on
// the midpoint grid of the Minkowski-sum interval with the same step.
// Both inputs must share the step within a tight tolerance.
struct Tabulated1 {
    Grid1 grid;
    std::vector<double> values;

    double eval(double x) const {
        // piecewise-linear between cell centers, 0 outside
        const double s = grid.step();
        const double u = (x - grid.lo) / s - 0.5;
        if (u <= -1.0 || u >= grid.n) return 0.0;
        const int i0 = static_cast<int>(std::floor(u));
        const double w = u - i0;
        const double v0 = (i0 >= 0 && i0 < grid.n) ? values[static_cast<size_t>(i0)] : 0.0;
        const int i1 = i0 + 1;
        const double v1 = (i1 >= 0 && i1 < grid.n) ? values[static_cast<size_t>(i1)] : 0.0;
        return v0 * (1.0 - w) + v1 * w;
    }
};

inline Tabulated1 convolve_1d(const Tabulated1& a, const Tabulated1& b) {
    const double sa = a.grid.step(), sb = b.grid.step();
    if (std::abs(sa - sb) > 1e-12 * std::max(sa, sb))
        throw grid_error("convolve_1d: grid steps differ");
    Tabulated1 out;
    const int n = a.grid.n + b.grid.n - 1;
    out.grid = Grid1(a.grid.lo + b.grid.lo + 0.5 * sa, a.grid.hi + b.grid.hi - 0.5 * sa, n);
    out.values.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < a.grid.n; ++i) {
        const double ai = a.values[static_cast<size_t>(i)];
        if (ai == 0.0) continue;
        for (int j = 0; j < b.grid.n; ++j)
            out.values[static_cast<size_t>(i + j)] += ai * b.values[static_cast<size_t>(j)];
    }
    for (double& v : out.values) v *= sa;
    return out;
}

// Adaptive Simpson on [a, b]; 'fun' must be smooth. Returns the integral and
// stores an error estimate if 'err' is non-null.
double adaptive_simpson(const std::function<double(double)>& fun, double a, double b,
                        double rel_tol, double* err = nullptr);

} // namespace lsbound
