#pragma once

#include <cstdint>

namespace lsbound {

// Counter-based seedable generator: the k-th output of a stream is a pure
// function of (master seed, stream index, k), so parallel replications are
// reproducible regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed + kGolden)) {}

    // Independent stream for replication `index` under `master`.
    static Rng stream(std::uint64_t master, std::uint64_t index) {
        return Rng(mix(master) ^ mix(index * 0x94D049BB133111EBULL + 0x2545F4914F6CDD1DULL));
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1) -- safe with log/inverse-CDF transforms
    double uniform_open() {
        double u = uniform();
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // standard normal via inverse CDF (deterministic, no rejection)
    double normal();

    // symmetric Laplace with scale lambda
    double laplace(double lambda);

    // Student-t with nu degrees of freedom
    double student_t(double nu);

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }
    std::uint64_t state_;
};

} // namespace lsbound
