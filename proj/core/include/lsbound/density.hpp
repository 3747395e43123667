#pragma once

#include "lsbound/common.hpp"
#include "lsbound/rng.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lsbound {

// Probability density on R^d with a known sup bound f_inf >= max(1, sup f)
// and a seeded sampler.
struct Density {
    int dim = 1;
    std::function<double(const double*)> pdf;
    Box support;
    double f_inf = 1.0;
    std::function<void(Rng&, double*)> sample;
    std::string name;

    double pdf1(double x) const { return pdf(&x); }
};

Density uniform_density(const Box& box);

struct GaussComponent {
    double weight = 1.0;
    std::vector<double> mean;
    std::vector<double> sigma;
};

// Mixture of product Gaussians, truncated to `box` component-wise and
// renormalized; f_inf is an analytic upper bound on the truncated sup.
Density trunc_gauss_mix_density(const Box& box, std::vector<GaussComponent> components);

// Piecewise-constant density on [breaks_0, breaks_m] with cell probabilities
// `probs` (d = 1).
Density histogram_density(std::vector<double> breaks, std::vector<double> probs);

Density density_by_name(const std::string& name); // uniform | trunc-gauss-mix | histogram

} // namespace lsbound
