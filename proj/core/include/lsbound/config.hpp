#pragma once

#include "lsbound/kde.hpp"
#include "lsbound/simulate.hpp"

#include <json.hpp>

#include <string>

namespace lsbound {

using json = nlohmann::json;

// Reads a config file in JSON or TOML (subset: [section], [a.b], key = value
// with strings, numbers, booleans, arrays and inline tables).
json load_config_file(const std::string& path);
json parse_toml(const std::string& text);

// Parameter-space description:
// {
//   "kernels": [{"name": "box", "ramp": 0.0625}, {"name": "triangle"}],
//   "dim": 1,
//   "bandwidths": {"min": [0.05], "max": [0.2], "count": 6},
//   "n": 200, "beta_K": 0.5
// }
struct SpaceDescription {
    KdeDictionary dict;
    BandwidthSet bw{{0.1}, {0.1}};
    int grid_per_coord = 1;
    int n = 100;

    KdeClass to_class(double f_inf = 1.0) const {
        return KdeClass::build(dict, bw, grid_per_coord, n, f_inf);
    }
};

SpaceDescription space_from_json(const json& j);
json space_to_json(const SpaceDescription& sd);

Density density_from_json(const json& j);
NoiseModel noise_from_json(const json& j);

// Moment constants cache: a JSON file keyed by (law, params, seed). Values
// are computed once by seeded MC and reused on later runs.
NoiseMoments noise_moments_cached(const NoiseModel& noise, double s,
                                  const std::string& cache_path, std::uint64_t seed,
                                  long samples = 1000000);

// report serialization
json to_json(const TailRow& row);
json to_json(const ExperimentReport& rep);
json to_json(const NormGuard& g);

// bound reports with every constant under its standard name
json to_json(const FixedWeightBound& b);
json to_json(const UniformBoundReport& r);
json to_json(const Theorem4Report& r);
json to_json(const Theorem5Report& r);
json to_json(const Theorem9Report& r);
json to_json(const KdeConstants& c);

void write_text_file(const std::string& path, const std::string& text);
std::string summary_csv(const std::vector<ExperimentReport>& reports);

} // namespace lsbound
