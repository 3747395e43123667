#pragma once

#include "lsbound/common.hpp"
#include "lsbound/grid.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lsbound {

// One-dimensional kernel profile supported inside [-1/2, 1/2].
class Profile {
public:
    enum class Shape { box, triangle, cosine, epanechnikov, tabulated };

    static Profile box(double ramp = 0.0);
    static Profile triangle();
    static Profile cosine();
    static Profile epanechnikov();
    static Profile tabulated(std::vector<double> xs, std::vector<double> vals);

    double operator()(double u) const;

    Shape shape() const { return shape_; }
    double ramp() const { return ramp_; }
    double halfwidth() const { return halfwidth_; }
    double lipschitz() const { return lipschitz_; }   // kInf for the raw box
    double sup_norm() const { return sup_norm_; }
    double integral() const { return integral_; }     // signed, but >= 0 for built-ins

private:
    Shape shape_ = Shape::box;
    double ramp_ = 0.0;
    double halfwidth_ = 0.5;
    double lipschitz_ = kInf;
    double sup_norm_ = 1.0;
    double integral_ = 1.0;
    std::shared_ptr<const std::vector<double>> tab_x_, tab_v_;
};

// Product kernel K(u) = prod_i P_i(u_i); supp(K) within [-1/2, 1/2]^d.
struct Kernel {
    std::vector<Profile> profiles;
    std::string name;

    int dim() const { return static_cast<int>(profiles.size()); }
    double eval(const double* u) const {
        double v = 1.0;
        for (size_t i = 0; i < profiles.size(); ++i) v *= profiles[i](u[i]);
        return v;
    }
    double eval1(double u) const { return profiles[0](u); }

    double sup_norm() const {
        double v = 1.0;
        for (const auto& p : profiles) v *= p.sup_norm();
        return v;
    }
    double integral_abs() const {
        double v = 1.0;
        for (const auto& p : profiles) v *= p.integral();
        return std::abs(v);
    }
    // Euclidean Lipschitz bound of the product; kInf if any factor is not Lipschitz.
    double lipschitz() const;
    std::vector<double> halfwidths() const {
        std::vector<double> h;
        h.reserve(profiles.size());
        for (const auto& p : profiles) h.push_back(p.halfwidth());
        return h;
    }
    Box support() const {
        Box b;
        for (const auto& p : profiles) {
            b.lo.push_back(-p.halfwidth());
            b.hi.push_back(p.halfwidth());
        }
        return b;
    }
    // ||K - K'||_inf on a fine grid plus the Lipschitz slack L*step*sqrt(d)/2.
    static double sup_distance(const Kernel& a, const Kernel& b, int pts_per_dim = 2048);
};

// name in {box, triangle, cosine, epanechnikov-lipschitz-clipped}; `ramp`
// applies to the box shape only (ramp = 0 gives the raw, non-Lipschitz box).
Kernel kernel_by_name(const std::string& name, int dim, double ramp = 0.0);

// CSV with columns x_1,...,x_d,value (d = 1 supported); support must lie in
// [-1/2, 1/2].
Kernel load_kernel_csv(const std::string& path);

} // namespace lsbound
