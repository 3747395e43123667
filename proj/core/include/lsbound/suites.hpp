#pragma once

#include "lsbound/config.hpp"

#include <string>
#include <vector>

namespace lsbound {

struct SuiteResult {
    std::string suite;
    bool pass = true;
    std::vector<ExperimentReport> reports;
    json constants = json::object();
    std::vector<std::string> notes;
    std::vector<std::pair<std::string, std::string>> extra_files; // name -> content
    double runtime_sec = 0.0;

    void note(bool ok, const std::string& what) {
        notes.push_back(std::string(ok ? "[ok] " : "[FAIL] ") + what);
        pass = pass && ok;
    }
};

struct SuiteOverrides {
    std::uint64_t seed = 20250809;
    long reps = -1; // -1: suite default
    int jobs = 0;   // 0: hardware default
};

// suite in {fixed-w, uniform-nonrandom, random-majorant, kde-thm7, regression,
// lemmas}; cfg may override the documented per-suite defaults.
SuiteResult run_suite(const std::string& name, const json& cfg, const SuiteOverrides& ov);

// Writes report.json, summary.csv and constants.json into out_dir.
void write_suite_outputs(const SuiteResult& res, const std::string& out_dir,
                         const json& config_echo);

// The individual suites (acceptance pins live in their defaults).
SuiteResult suite_fixed_w(const json& cfg, const SuiteOverrides& ov);
SuiteResult suite_uniform_nonrandom(const json& cfg, const SuiteOverrides& ov);
SuiteResult suite_random_majorant(const json& cfg, const SuiteOverrides& ov);
SuiteResult suite_kde_thm7(const json& cfg, const SuiteOverrides& ov);
SuiteResult suite_regression(const json& cfg, const SuiteOverrides& ov);
SuiteResult suite_lemmas(const json& cfg, const SuiteOverrides& ov);

// KDE majorant surface over the (K, h) grid as CSV (kernel, h..., U, U_bar).
std::string kde_majorant_surface_csv(const KdeClass& cls, const Density& f, double s);

} // namespace lsbound
