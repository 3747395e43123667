#include "lsbound/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lsbound {

double delta_H(const std::vector<double>& h, const std::vector<double>& hprime) {
    if (h.size() != hprime.size() || h.empty()) throw domain_error("delta_H: dim mismatch");
    double m = 0.0;
    for (size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0) || !(hprime[i] > 0.0))
            throw domain_error("delta_H: coordinates must be strictly positive");
        const double hi = std::max(h[i], hprime[i]), lo = std::min(h[i], hprime[i]);
        m = std::max(m, std::log(hi / lo));
    }
    return m;
}

BandwidthSet::BandwidthSet(std::vector<double> lo, std::vector<double> hi)
    : h_min(std::move(lo)), h_max(std::move(hi)) {
    if (h_min.size() != h_max.size() || h_min.empty())
        throw domain_error("BandwidthSet: dim mismatch");
    for (size_t i = 0; i < h_min.size(); ++i)
        if (!(h_min[i] > 0.0) || !(h_min[i] <= h_max[i]) || !(h_max[i] <= 1.0))
            throw domain_error("BandwidthSet: need 0 < h_min <= h_max <= 1");
}

std::size_t BandwidthSet::covering_number(double delta) const {
    if (!(delta > 0.0)) throw domain_error("covering_number: delta must be positive");
    std::size_t n = 1;
    for (size_t i = 0; i < h_min.size(); ++i) {
        const double len = std::log(h_max[i] / h_min[i]);
        const auto per = static_cast<std::size_t>(std::max(1.0, std::ceil(len / (2.0 * delta) - 1e-12)));
        n *= per;
    }
    return n;
}

double BandwidthSet::entropy_bound(double delta) const {
    if (!(delta > 0.0 && delta <= 1.0)) throw domain_error("entropy_bound: delta in (0,1]");
    double v = dim() * std::log(3.0 / delta);
    for (size_t i = 0; i < h_min.size(); ++i) {
        const double len = std::log(h_max[i] / h_min[i]);
        if (len > 0.0) v += pos(std::log(len));
    }
    return v;
}

std::vector<std::vector<double>> BandwidthSet::geometric_grid(int count) const {
    if (count < 1) throw domain_error("geometric_grid: count >= 1");
    std::vector<std::vector<double>> axes;
    for (size_t i = 0; i < h_min.size(); ++i) {
        std::vector<double> ax;
        if (count == 1 || h_min[i] == h_max[i]) {
            ax.push_back(h_min[i]);
        } else {
            const double q = std::pow(h_max[i] / h_min[i], 1.0 / (count - 1));
            for (int k = 0; k < count; ++k) ax.push_back(h_min[i] * std::pow(q, k));
        }
        axes.push_back(std::move(ax));
    }
    // cartesian product
    std::vector<std::vector<double>> out;
    std::vector<size_t> idx(h_min.size(), 0);
    for (;;) {
        std::vector<double> h;
        for (size_t i = 0; i < axes.size(); ++i) h.push_back(axes[i][idx[i]]);
        out.push_back(std::move(h));
        size_t k = 0;
        while (k < idx.size()) {
            if (++idx[k] < axes[k].size()) break;
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size()) break;
    }
    return out;
}

double BandwidthSet::volume_min() const {
    double v = 1.0;
    for (double h : h_min) v *= h;
    return v;
}

double BandwidthSet::volume_max() const {
    double v = 1.0;
    for (double h : h_max) v *= h;
    return v;
}

namespace {

using Mask = std::uint64_t;

// Branch-and-bound minimum set cover; `cover[i]` is the mask of elements that
// a ball centered at i covers. Feasibility: union of all covers = universe.
struct SetCoverExact {
    const std::vector<Mask>& cover;
    Mask universe;
    std::size_t best;

    SetCoverExact(const std::vector<Mask>& c, Mask u, std::size_t greedy)
        : cover(c), universe(u), best(greedy) {}

    void solve(Mask covered, std::size_t used) {
        if (used >= best) return;
        if ((covered & universe) == universe) {
            best = used;
            return;
        }
        // branch on the uncovered element with the fewest candidate balls
        int elem = -1;
        std::size_t fewest = SIZE_MAX;
        for (std::size_t e = 0; e < cover.size(); ++e) {
            const Mask bit = Mask{1} << e;
            if (!(universe & bit) || (covered & bit)) continue;
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < cover.size(); ++i)
                if (cover[i] & bit) ++cnt;
            if (cnt < fewest) {
                fewest = cnt;
                elem = static_cast<int>(e);
            }
        }
        if (elem < 0) return;
        const Mask bit = Mask{1} << elem;
        for (std::size_t i = 0; i < cover.size(); ++i) {
            if (!(cover[i] & bit)) continue;
            solve(covered | cover[i], used + 1);
        }
    }
};

CoveringResult finite_cover(const std::vector<size_t>& subset,
                            const std::function<double(size_t, size_t)>& dist, double delta) {
    CoveringResult res;
    const std::size_t m = subset.size();
    if (m == 0) throw domain_error("covering_number: empty space");
    // greedy packing lower bound: points pairwise further than 2*delta apart
    {
        std::vector<size_t> packed;
        for (size_t i = 0; i < m; ++i) {
            bool far = true;
            for (size_t j : packed)
                if (dist(subset[i], subset[j]) <= 2.0 * delta) {
                    far = false;
                    break;
                }
            if (far) packed.push_back(i);
        }
        res.greedy_lower_bound = packed.size();
    }
    // greedy cover with centers at the points
    std::vector<bool> covered(m, false);
    std::size_t n_covered = 0, greedy = 0;
    while (n_covered < m) {
        size_t best_i = 0, best_gain = 0;
        for (size_t i = 0; i < m; ++i) {
            size_t gain = 0;
            for (size_t j = 0; j < m; ++j)
                if (!covered[j] && dist(subset[i], subset[j]) <= delta) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best_i = i;
            }
        }
        if (best_gain == 0) throw domain_error("covering_number: isolated point (zero gain)");
        for (size_t j = 0; j < m; ++j)
            if (!covered[j] && dist(subset[best_i], subset[j]) <= delta) {
                covered[j] = true;
                ++n_covered;
            }
        ++greedy;
    }
    res.count = greedy;
    res.exact = false;
    if (m <= 64) {
        std::vector<Mask> cover(m, 0);
        Mask universe = m == 64 ? ~Mask{0} : ((Mask{1} << m) - 1);
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j)
                if (dist(subset[i], subset[j]) <= delta) cover[i] |= Mask{1} << j;
        SetCoverExact bb(cover, universe, greedy);
        bb.solve(0, 0);
        res.count = bb.best;
        res.exact = true;
    }
    res.count = std::max(res.count, res.greedy_lower_bound);
    return res;
}

} // namespace

CoveringResult covering_number(const FiniteParamSpace& space, double delta) {
    if (!(delta > 0.0)) throw domain_error("covering_number: delta must be positive");
    if (space.covering_analytic) {
        CoveringResult r;
        r.count = space.covering_analytic(delta);
        r.greedy_lower_bound = r.count;
        r.exact = true;
        return r;
    }
    if (space.size() == 0) throw domain_error("covering_number: empty space");
    if (!space.dist) throw unsupported_space_error("covering_number: no metric and no analytic rule");
    std::vector<size_t> all(space.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return finite_cover(all, space.dist, delta);
}

CoveringResult covering_number_subset(const FiniteParamSpace& space,
                                      const std::vector<size_t>& subset, double delta) {
    if (!(delta > 0.0)) throw domain_error("covering_number: delta must be positive");
    if (subset.empty()) throw domain_error("covering_number: empty subset");
    if (!space.dist) {
        if (space.covering_analytic) {
            // fall back to the whole-space analytic value (a valid upper bound)
            CoveringResult r;
            r.count = space.covering_analytic(delta);
            r.greedy_lower_bound = 1;
            r.exact = false;
            return r;
        }
        throw unsupported_space_error("covering_number: no metric available");
    }
    return finite_cover(subset, space.dist, delta);
}

SliceDecomposition build_slices(const std::vector<double>& u_values, double eps) {
    if (u_values.empty()) throw domain_error("build_slices: empty space");
    if (!(eps > 0.0 && eps <= 1.0)) throw domain_error("build_slices: eps in (0,1]");
    for (double u : u_values)
        if (!(u > 0.0)) throw domain_error("build_slices: all U values must be positive");
    SliceDecomposition out;
    out.eps = eps;
    out.r = *std::min_element(u_values.begin(), u_values.end());
    out.R = *std::max_element(u_values.begin(), u_values.end());
    const auto jmax = static_cast<std::size_t>(
        std::max(0.0, std::floor(std::log2(out.R / out.r) / eps)));
    out.slices.resize(jmax + 1);
    for (std::size_t j = 0; j <= jmax; ++j)
        out.slices[j].level = out.r * std::pow(2.0, eps * (static_cast<double>(j) + 1.0));
    for (std::size_t i = 0; i < u_values.size(); ++i) {
        auto j = u_values[i] <= out.r
                     ? std::size_t{0}
                     : static_cast<std::size_t>(std::floor(std::log2(u_values[i] / out.r) / eps));
        j = std::min(j, jmax);
        out.slices[j].members.push_back(i);
    }
    return out;
}

} // namespace lsbound
