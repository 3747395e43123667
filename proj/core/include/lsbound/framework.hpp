#pragma once

#include "lsbound/param_space.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lsbound {

// Decreasing tail function g with g(x) -> 0.
struct TailFunction {
    std::function<double(double)> eval;
    std::string name;

    double operator()(double x) const { return eval(x); }
    bool is_exp() const { return name == "exp"; }
};

TailFunction exp_tail();

// U, A, B evaluated on weights (members and pairwise differences) plus the
// tail g: the data of a Bernstein-type inequality
//   P{ Psi(xi_theta) - U(theta) >= z } <= g( z^2 / (A^2(theta) + B(theta) z) ).
struct BoundTriple {
    std::function<double(const WeightFunction&)> U, A, B;
    TailFunction g;
};

// Pairwise difference quantities: full enumeration up to this many members,
// seeded pair sampling above it.
struct PairPolicy {
    std::size_t full_enumeration_max = 1000;
    std::size_t sample_pairs = 10000;
    std::uint64_t seed = 0x5eedu;
};

struct SupStat {
    double value = 0.0;
    bool sampled = false;
};

// kappa_U over a subset: sup_pairs U(phi[z1]-phi[z2]) / d(z1,z2)  v  sup U.
SupStat kappa_over_subset(const FiniteParamSpace& space,
                          const std::function<double(const WeightFunction&)>& fn,
                          const std::vector<double>& member_values,
                          const std::vector<std::size_t>& subset, const PairPolicy& policy);

// Truncated chaining series
//   L^{(eps)}_{g,Z}(y) = g(y) + sum_k N_Z(eps 2^-k)^2 g(9 y 2^{k-3} k^-2),
// truncated when the term falls below 1e-12 of the running sum for three
// consecutive k or at k = 60.
struct SeriesValue {
    double value = 0.0;
    int terms = 0;
    double last_term = 0.0;
};

SeriesValue chaining_series(const FiniteParamSpace& space,
                            const std::vector<std::size_t>& subset, const TailFunction& g,
                            double eps, double y);

// sum_k N(eps 2^-k)^2 sqrt(g(9 2^{k-3} k^-2)) over the whole space; for
// g = exp this is L^{(eps)}_exp = sum_k exp{2 E(eps 2^-k) - (9/16) 2^k k^-2}.
SeriesValue chaining_series_sqrt(const FiniteParamSpace& space, const TailFunction& g,
                                 double eps);

// C*(y) = 1 + 2 sqrt(y) Lambda_A + 2 y Lambda_B, y > 0.
double c_star(double y, double lambda_A, double lambda_B);

struct SliceReport {
    double level = 0.0;
    std::size_t members = 0;
    double kappa_U = 0.0;
    double lambda_A = 0.0, lambda_B = 0.0; // per-slice, before the a^-1 scaling
    double L_term = 0.0;
    double J_term = 0.0;
    double J_err = 0.0; // quadrature error estimate of the J integral
};

struct UniformBoundReport {
    double y = 0.0, eps = 0.0, q = 1.0;
    double u_eps = 0.0;
    double r = 0.0, R = 0.0;
    double lambda_A = 0.0, lambda_B = 0.0;
    double c_star_y = 0.0;
    std::size_t covering_eps8 = 0;
    double probability_bound = 0.0;          // slice sum, eq. form
    double moment_bound = 0.0;               // slice sum with J integrals
    double probability_bound_exp = kNaN;     // closed-ish form, g = exp only
    double moment_bound_exp = kNaN;
    double L_sqrt_series = kNaN;             // L^{(eps)}_g over the whole space
    std::vector<SliceReport> slices;
    bool pair_sampled = false;
    int series_terms_max = 0;
};

// Uniform probability and moment bounds over the parametrized family from the
// per-member (U, A, B, g) data; checks kappa_U(a) <= a on every slice and
// throws precondition_error carrying the rescaling factor otherwise.
UniformBoundReport uniform_bounds(const FiniteParamSpace& space, const BoundTriple& triple,
                                  double eps, double y, double q,
                                  const PairPolicy& policy = {});

// q * integral_1^inf (x-1)^{q-1} [g(zx) + L sqrt(g(zx))] dx  (the whole-space
// J^{(eps)}_g of the simplified bound).
double j_integral_simplified(const TailFunction& g, double z, double q, double L_sqrt);

} // namespace lsbound
