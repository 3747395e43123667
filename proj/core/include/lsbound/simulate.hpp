#pragma once

#include "lsbound/density.hpp"
#include "lsbound/regression.hpp"
#include "lsbound/stats.hpp"
#include "lsbound/weight.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lsbound {

enum class ProcessKind { xi, eta };

// Compiled 1-d simulation of xi_w / eta_w over a class of difference-form
// weights on a shared midpoint grid.
class Simulator {
public:
    Simulator(std::vector<WeightFunction> members, Density f, ProcessKind kind,
              int n, Grid1 grid, NoiseModel noise = {});

    const Grid1& grid() const { return grid_; }
    int n() const { return n_; }
    std::size_t n_members() const { return members_.size(); }
    const WeightFunction& member(std::size_t i) const { return members_[i]; }
    const Density& density() const { return f_; }
    ProcessKind kind() const { return kind_; }
    const NoiseModel& noise() const { return noise_; }
    // n * E w(t_j - X): the centering term of xi on the grid
    const std::vector<double>& centering(std::size_t member) const { return mean_[member]; }

    struct Workspace {
        std::vector<double> xs, eps;
        std::vector<double> proc; // grid values, reused member by member
    };

    // Deterministic draw of replication `rep`: fills ws.xs (and ws.eps).
    void draw(std::uint64_t master_seed, std::uint64_t rep, Workspace& ws) const;

    // Process values of one member on the grid for the drawn sample.
    void evaluate(std::size_t member, const Workspace& ws, std::vector<double>& out) const;

    // ||values||_s on the simulation grid.
    double grid_norm(const std::vector<double>& values, double s) const {
        return lp_norm_grid(values, grid_.step(), s);
    }

    // Runs `fn(rep, ws)` for rep in [0, reps) across `jobs` threads; each
    // replication draws its own sample first. Deterministic for any jobs.
    void for_each_replication(std::uint64_t master_seed, long reps, int jobs,
                              const std::function<void(long, Workspace&)>& fn) const;

private:
    std::vector<WeightFunction> members_;
    Density f_;
    ProcessKind kind_;
    int n_;
    Grid1 grid_;
    NoiseModel noise_;
    std::vector<std::vector<double>> mean_; // per member, n * E w(t - X) on the grid
};

struct TailRow {
    double z = 0.0;
    double threshold = 0.0; // statistic must reach threshold(z)
    long exceed = 0;
    long reps = 0;
    double freq = 0.0;
    double cp_upper = 1.0; // one-sided 99% exact binomial upper limit
    double bound = 1.0;    // theoretical tail value
    std::string verdict;   // PASS | FAIL | SKIPPED-UNINFORMATIVE
};

struct ExperimentReport {
    std::string name;
    std::uint64_t seed = 0;
    long reps = 0;
    int n = 0;
    double s = 0.0;
    double informativeness_cutoff = 0.8;
    std::vector<TailRow> rows;
    bool pass = true;
    double runtime_sec = 0.0;
    std::vector<std::string> notes;
    NormGuard guard;

    void finalize(double confidence = 0.99);
};

// Counts exceedances of per-replication statistics over a threshold grid.
// statistic: (rep, ws) -> double; thresholds/bounds are parallel arrays.
ExperimentReport estimate_tail(const Simulator& sim, std::uint64_t master_seed, long reps,
                               int jobs,
                               const std::function<double(long, Simulator::Workspace&)>& stat,
                               const std::vector<double>& z_grid,
                               const std::vector<double>& thresholds,
                               const std::vector<double>& bounds, const std::string& name);

std::vector<double> linspace(double lo, double hi, int count);

int default_jobs();

} // namespace lsbound
