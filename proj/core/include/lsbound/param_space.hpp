#pragma once

#include "lsbound/common.hpp"
#include "lsbound/rng.hpp"
#include "lsbound/weight.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lsbound {

// Delta_H(h, h') = max_i ln((h_i v h'_i) / (h_i ^ h'_i))
double delta_H(const std::vector<double>& h, const std::vector<double>& hprime);

// Bandwidth box H = prod_i [h_min_i, h_max_i], 0 < h_min_i <= h_max_i <= 1.
struct BandwidthSet {
    std::vector<double> h_min, h_max;

    BandwidthSet(std::vector<double> lo, std::vector<double> hi);
    int dim() const { return static_cast<int>(h_min.size()); }

    // Exact covering number under Delta_H: per coordinate the set is an
    // interval of length ln(h_max/h_min) on the log scale, and a ball of
    // radius delta is an interval of length 2*delta; the sup-metric covering
    // is the product of the 1-d counts.
    std::size_t covering_number(double delta) const;

    // d*ln(3/delta) + sum_i (ln ln(h_max_i/h_min_i))_+ for delta in (0, 1]
    double entropy_bound(double delta) const;

    // Geometric grid with `count` points per coordinate (equal Delta_H gaps).
    std::vector<std::vector<double>> geometric_grid(int count) const;

    double volume_min() const;
    double volume_max() const;
};

// Result of a covering-number computation on a finite set.
struct CoveringResult {
    std::size_t count = 0;
    std::size_t greedy_lower_bound = 0; // packing bound
    bool exact = false;                 // exhaustively verified
};

// Finite enumerable parameter space Z with a metric and the weight map phi.
struct FiniteParamSpace {
    std::vector<WeightFunction> weights;           // phi[zeta_i]
    std::function<double(size_t, size_t)> dist;
    std::string metric_name;
    // Analytic covering rule (exact), e.g. for K x H product spaces.
    std::function<std::size_t(double)> covering_analytic;

    std::size_t size() const { return weights.size(); }
    WeightFunction difference(size_t i, size_t j) const {
        return weight_difference(weights[i], weights[j]);
    }
};

// Exact covering number for a finite space: greedy upper bound, exhaustive
// branch-and-bound verification for |Z| <= 64 (larger spaces report the
// greedy value with exact = false).
CoveringResult covering_number(const FiniteParamSpace& space, double delta);

// Covering number restricted to a subset of member indices.
CoveringResult covering_number_subset(const FiniteParamSpace& space,
                						const std::vector<size_t>& subset, double delta);

struct Slice {
    double level = 0.0;                  // a_j = r 2^{eps (j+1)}
    std::vector<std::size_t> members;    // indices with U in [a_j/2, a_j)
};

struct SliceDecomposition {
    double r = 0.0, R = 0.0, eps = 1.0;
    std::vector<Slice> slices;

    std::size_t n_slices() const { return slices.size(); }
};

// Peeling decomposition: member zeta goes to slice j = floor(log2(U/r)/eps),
// so levels satisfy a_{j+1} = 2^eps a_j and every member lands in exactly one
// slice with a_j/2 <= U <= a_j.
SliceDecomposition build_slices(const std::vector<double>& u_values, double eps);

// Metric axiom check on sampled triples.
struct MetricCheck {
    bool symmetric = true, identity = true, triangle = true;
    std::size_t triples = 0;
    bool ok() const { return symmetric && identity && triangle; }
};

template <class Dist, class Sampler>
MetricCheck check_metric_axioms(const Dist& d, const Sampler& sample_point, int n_triples,
                                Rng& rng) {
    MetricCheck out;
    out.triples = static_cast<std::size_t>(n_triples);
    for (int k = 0; k < n_triples; ++k) {
        auto a = sample_point(rng);
        auto b = sample_point(rng);
        auto c = sample_point(rng);
        const double dab = d(a, b), dba = d(b, a), dac = d(a, c), dbc = d(b, c);
        const double daa = d(a, a);
        if (std::abs(dab - dba) > 1e-12 * (1.0 + std::abs(dab))) out.symmetric = false;
        if (daa != 0.0) out.identity = false;
        if (dac > dab + dbc + 1e-12 * (1.0 + dac)) out.triangle = false;
    }
    return out;
}

// JSON round trip for parameter-space descriptions lives in config.hpp.

} // namespace lsbound
