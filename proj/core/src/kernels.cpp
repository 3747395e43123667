#include "lsbound/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lsbound {

Profile Profile::box(double ramp) {
    if (ramp < 0.0 || ramp > 0.5) throw domain_error("box profile: ramp must be in [0, 1/2]");
    Profile p;
    p.shape_ = Shape::box;
    p.ramp_ = ramp;
    p.halfwidth_ = 0.5;
    p.lipschitz_ = ramp > 0.0 ? 1.0 / ramp : kInf;
    p.sup_norm_ = 1.0;
    p.integral_ = 1.0 - ramp; // plateau (1 - 2r) plus two ramp triangles of area r/2
    return p;
}

Profile Profile::triangle() {
    Profile p;
    p.shape_ = Shape::triangle;
    p.halfwidth_ = 0.5;
    p.lipschitz_ = 2.0;
    p.sup_norm_ = 1.0;
    p.integral_ = 0.5;
    return p;
}

Profile Profile::cosine() {
    Profile p;
    p.shape_ = Shape::cosine;
    p.halfwidth_ = 0.5;
    p.lipschitz_ = M_PI;
    p.sup_norm_ = 1.0;
    p.integral_ = 2.0 / M_PI;
    return p;
}

Profile Profile::epanechnikov() {
    // 1.5 (1 - 4u^2) on [-1/2, 1/2]: integrates to 1, |slope| <= 6 at the edge
    Profile p;
    p.shape_ = Shape::epanechnikov;
    p.halfwidth_ = 0.5;
    p.lipschitz_ = 6.0;
    p.sup_norm_ = 1.5;
    p.integral_ = 1.0;
    return p;
}

Profile Profile::tabulated(std::vector<double> xs, std::vector<double> vals) {
    if (xs.size() != vals.size() || xs.size() < 2)
        throw domain_error("tabulated profile: need >= 2 (x, value) rows");
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw domain_error("tabulated profile: x must be increasing");
    if (xs.front() < -0.5 - 1e-12 || xs.back() > 0.5 + 1e-12)
        throw domain_error("tabulated profile: support must lie in [-1/2, 1/2]");
    Profile p;
    p.shape_ = Shape::tabulated;
    p.halfwidth_ = std::max(std::abs(xs.front()), std::abs(xs.back()));
    double sup = 0.0, lip = 0.0, integral = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) sup = std::max(sup, std::abs(vals[i]));
    for (size_t i = 1; i < xs.size(); ++i) {
        lip = std::max(lip, std::abs(vals[i] - vals[i - 1]) / (xs[i] - xs[i - 1]));
        integral += 0.5 * (vals[i] + vals[i - 1]) * (xs[i] - xs[i - 1]);
    }
    // the profile drops to 0 outside the table; count those edges as jumps
    if (vals.front() != 0.0 || vals.back() != 0.0) lip = kInf;
    p.sup_norm_ = sup;
    p.lipschitz_ = lip;
    p.integral_ = integral;
    p.tab_x_ = std::make_shared<const std::vector<double>>(std::move(xs));
    p.tab_v_ = std::make_shared<const std::vector<double>>(std::move(vals));
    return p;
}

double Profile::operator()(double u) const {
    switch (shape_) {
    case Shape::box: {
        const double a = std::abs(u);
        if (a >= 0.5) return 0.0;
        if (ramp_ == 0.0) return 1.0;
        if (a <= 0.5 - ramp_) return 1.0;
        return (0.5 - a) / ramp_;
    }
    case Shape::triangle: {
        const double a = std::abs(u);
        return a >= 0.5 ? 0.0 : 1.0 - 2.0 * a;
    }
    case Shape::cosine:
        return std::abs(u) >= 0.5 ? 0.0 : std::cos(M_PI * u);
    case Shape::epanechnikov: {
        const double v = 1.0 - 4.0 * u * u;
        return v > 0.0 ? 1.5 * v : 0.0;
    }
    case Shape::tabulated: {
        const auto& xs = *tab_x_;
        const auto& vs = *tab_v_;
        if (u <= xs.front() || u >= xs.back()) {
            if (u == xs.front()) return vs.front();
            if (u == xs.back()) return vs.back();
            return 0.0;
        }
        const auto it = std::upper_bound(xs.begin(), xs.end(), u);
        const size_t i = static_cast<size_t>(it - xs.begin());
        const double w = (u - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return vs[i - 1] * (1.0 - w) + vs[i] * w;
    }
    }
    return 0.0;
}

double Kernel::lipschitz() const {
    // |prod f(x) - prod f(y)| <= sqrt(sum_i (L_i prod_{j!=i} M_j)^2) |x - y|_2
    double acc = 0.0;
    for (size_t i = 0; i < profiles.size(); ++i) {
        if (!std::isfinite(profiles[i].lipschitz())) return kInf;
        double term = profiles[i].lipschitz();
        for (size_t j = 0; j < profiles.size(); ++j)
            if (j != i) term *= profiles[j].sup_norm();
        acc += term * term;
    }
    return std::sqrt(acc);
}

double Kernel::sup_distance(const Kernel& a, const Kernel& b, int pts_per_dim) {
    if (a.dim() != b.dim()) throw domain_error("sup_distance: dimension mismatch");
    const int d = a.dim();
    Box box = Box::hull(a.support(), b.support());
    double m = 0.0;
    if (d == 1) {
        const Grid1 g(box.lo[0], box.hi[0], pts_per_dim);
        for (int i = 0; i < g.n; ++i) {
            const double x = g.point(i);
            m = std::max(m, std::abs(a.eval(&x) - b.eval(&x)));
        }
        const double L = std::min(a.lipschitz() + b.lipschitz(), 1e12);
        return m + 0.5 * L * g.step();
    }
    if (d != 2) throw domain_error("sup_distance: d in {1,2}");
    const Grid1 g0(box.lo[0], box.hi[0], pts_per_dim), g1(box.lo[1], box.hi[1], pts_per_dim);
    for (int i = 0; i < g0.n; ++i)
        for (int j = 0; j < g1.n; ++j) {
            const double x[2] = {g0.point(i), g1.point(j)};
            m = std::max(m, std::abs(a.eval(x) - b.eval(x)));
        }
    const double L = std::min(a.lipschitz() + b.lipschitz(), 1e12);
    return m + 0.5 * L * g0.step() * std::sqrt(2.0);
}

Kernel kernel_by_name(const std::string& name, int dim, double ramp) {
    if (dim < 1 || dim > 2) throw domain_error("kernel_by_name: d in {1,2}");
    Profile p;
    if (name == "box")
        p = Profile::box(ramp);
    else if (name == "triangle")
        p = Profile::triangle();
    else if (name == "cosine")
        p = Profile::cosine();
    else if (name == "epanechnikov-lipschitz-clipped" || name == "epanechnikov")
        p = Profile::epanechnikov();
    else
        throw config_error("unknown kernel name: " + name);
    Kernel k;
    k.name = name;
    k.profiles.assign(static_cast<size_t>(dim), p);
    return k;
}

Kernel load_kernel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open kernel CSV: " + path);
    std::vector<double> xs, vs;
    std::string line;
    size_t ncols = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::vector<double> row;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                row.clear();
                break; // header line
            }
        }
        if (row.empty()) continue;
        if (ncols == 0) ncols = row.size();
        if (row.size() != ncols) throw config_error("kernel CSV: ragged rows in " + path);
        if (ncols != 2)
            throw unsupported_space_error("kernel CSV: tabulated kernels support d=1 only");
        xs.push_back(row[0]);
        vs.push_back(row[1]);
    }
    if (xs.size() < 2) throw config_error("kernel CSV: no data rows in " + path);
    std::vector<size_t> order(xs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });
    std::vector<double> sx(xs.size()), sv(xs.size());
    for (size_t i = 0; i < order.size(); ++i) {
        sx[i] = xs[order[i]];
        sv[i] = vs[order[i]];
    }
    Kernel k;
    k.name = "csv:" + path;
    k.profiles.push_back(Profile::tabulated(std::move(sx), std::move(sv)));
    return k;
}

} // namespace lsbound
