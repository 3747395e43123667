#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsbound {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Argument outside the documented domain of an operation.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Quadrature grid cannot resolve the integrand (support wider than grid,
// non-decaying integrand at the grid edge, incompatible grids, ...).
class grid_error : public std::runtime_error {
public:
    explicit grid_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter space with no enumeration and no analytic covering rule.
class unsupported_space_error : public std::runtime_error {
public:
    explicit unsupported_space_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A theorem precondition does not hold for the supplied inputs.
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Chaining series fails to converge (entropy too large for the tail g).
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration file / CLI usage.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Axis-aligned box in R^d.
struct Box {
    std::vector<double> lo, hi;

    Box() = default;
    Box(std::vector<double> l, std::vector<double> h) : lo(std::move(l)), hi(std::move(h)) {}
    static Box interval(double a, double b) { return Box({a}, {b}); }

    int dim() const { return static_cast<int>(lo.size()); }
    double length(int i) const { return hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)]; }
    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dim(); ++i) v *= length(i);
        return v;
    }
    bool contains(const double* x) const {
        for (int i = 0; i < dim(); ++i) {
            const auto u = static_cast<size_t>(i);
            if (x[u] < lo[u] || x[u] > hi[u]) return false;
        }
        return true;
    }
    // Minkowski sum with another box (support of a convolution / shifted family).
    Box padded(const Box& other) const {
        Box out = *this;
        for (int i = 0; i < dim(); ++i) {
            const auto u = static_cast<size_t>(i);
            out.lo[u] += other.lo[u];
            out.hi[u] += other.hi[u];
        }
        return out;
    }
    static Box hull(const Box& a, const Box& b) {
        Box out = a;
        for (int i = 0; i < a.dim(); ++i) {
            const auto u = static_cast<size_t>(i);
            out.lo[u] = std::min(a.lo[u], b.lo[u]);
            out.hi[u] = std::max(a.hi[u], b.hi[u]);
        }
        return out;
    }
};

inline double pos(double x) { return x > 0.0 ? x : 0.0; }
inline double sq(double x) { return x * x; }

} // namespace lsbound
