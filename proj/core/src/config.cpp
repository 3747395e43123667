#include "lsbound/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lsbound {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Parses a TOML scalar/array/inline-table into json.
json parse_toml_value(const std::string& raw) {
    const std::string v = trim(raw);
    if (v.empty()) throw config_error("toml: empty value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') throw config_error("toml: unterminated string");
        return json(v.substr(1, v.size() - 2));
    }
    if (v == "true") return json(true);
    if (v == "false") return json(false);
    if (v.front() == '[') {
        if (v.back() != ']') throw config_error("toml: unterminated array");
        json arr = json::array();
        std::string inner = v.substr(1, v.size() - 2);
        int depth = 0;
        std::string cur;
        for (char c : inner) {
            if (c == '[' || c == '{') ++depth;
            if (c == ']' || c == '}') --depth;
            if (c == ',' && depth == 0) {
                if (!trim(cur).empty()) arr.push_back(parse_toml_value(cur));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!trim(cur).empty()) arr.push_back(parse_toml_value(cur));
        return arr;
    }
    if (v.front() == '{') {
        if (v.back() != '}') throw config_error("toml: unterminated inline table");
        json obj = json::object();
        std::string inner = v.substr(1, v.size() - 2);
        int depth = 0;
        std::string cur;
        std::vector<std::string> parts;
        for (char c : inner) {
            if (c == '[' || c == '{') ++depth;
            if (c == ']' || c == '}') --depth;
            if (c == ',' && depth == 0) {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!trim(cur).empty()) parts.push_back(cur);
        for (const auto& p : parts) {
            const auto eq = p.find('=');
            if (eq == std::string::npos) throw config_error("toml: bad inline table entry");
            obj[trim(p.substr(0, eq))] = parse_toml_value(p.substr(eq + 1));
        }
        return obj;
    }
    try {
        size_t used = 0;
        if (v.find_first_of(".eE") != std::string::npos) {
            const double d = std::stod(v, &used);
            if (used == v.size()) return json(d);
        } else {
            const long long i = std::stoll(v, &used);
            if (used == v.size()) return json(i);
        }
    } catch (...) {
    }
    throw config_error("toml: cannot parse value: " + v);
}

} // namespace

json parse_toml(const std::string& text) {
    json root = json::object();
    json* section = &root;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error("toml: bad section header: " + line);
            std::string name = trim(line.substr(1, line.size() - 2));
            section = &root;
            std::istringstream parts(name);
            std::string part;
            while (std::getline(parts, part, '.')) section = &((*section)[trim(part)]);
            if (section->is_null()) *section = json::object();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error("toml: expected key = value: " + line);
        (*section)[trim(line.substr(0, eq))] = parse_toml_value(line.substr(eq + 1));
    }
    return root;
}

json load_config_file(const std::string& path) {
    const std::string text = read_file(path);
    const std::string t = trim(text);
    if (!t.empty() && (t.front() == '{' ||
                       (path.size() > 5 && path.substr(path.size() - 5) == ".json"))) {
        try {
            return json::parse(text);
        } catch (const std::exception& e) {
            throw config_error(std::string("bad JSON config: ") + e.what());
        }
    }
    return parse_toml(text);
}

SpaceDescription space_from_json(const json& j) {
    SpaceDescription sd;
    const int dim = j.value("dim", 1);
    std::vector<Kernel> kernels;
    if (!j.contains("kernels")) throw config_error("space: missing 'kernels'");
    for (const auto& k : j.at("kernels")) {
        if (k.contains("csv")) {
            kernels.push_back(load_kernel_csv(k.at("csv").get<std::string>()));
        } else {
            const auto name = k.at("name").get<std::string>();
            const double ramp = k.value("ramp", 0.0625);
            kernels.push_back(kernel_by_name(name, dim, ramp));
        }
    }
    sd.dict = KdeDictionary::build(std::move(kernels), j.value("beta_K", 0.5));
    if (!j.contains("bandwidths")) throw config_error("space: missing 'bandwidths'");
    const auto& b = j.at("bandwidths");
    sd.bw = BandwidthSet(b.at("min").get<std::vector<double>>(),
                         b.at("max").get<std::vector<double>>());
    sd.grid_per_coord = b.value("count", 1);
    sd.n = j.value("n", 100);
    return sd;
}

json space_to_json(const SpaceDescription& sd) {
    json j;
    j["dim"] = sd.dict.dim;
    j["beta_K"] = sd.dict.beta_K;
    j["kernels"] = json::array();
    for (const auto& k : sd.dict.kernels) {
        json kj;
        kj["name"] = k.name;
        if (!k.profiles.empty() && k.profiles.front().shape() == Profile::Shape::box)
            kj["ramp"] = k.profiles.front().ramp();
        j["kernels"].push_back(kj);
    }
    j["bandwidths"] = {{"min", sd.bw.h_min}, {"max", sd.bw.h_max}, {"count", sd.grid_per_coord}};
    j["n"] = sd.n;
    return j;
}

Density density_from_json(const json& j) {
    const auto name = j.value("name", std::string("uniform"));
    if (name == "uniform") {
        if (j.contains("box"))
            return uniform_density(Box(j.at("box").at("lo").get<std::vector<double>>(),
                                       j.at("box").at("hi").get<std::vector<double>>()));
        return uniform_density(Box::interval(0.0, 1.0));
    }
    if (name == "trunc-gauss-mix") {
        if (!j.contains("components")) return density_by_name(name);
        Box box = j.contains("box")
                      ? Box(j.at("box").at("lo").get<std::vector<double>>(),
                            j.at("box").at("hi").get<std::vector<double>>())
                      : Box::interval(0.0, 1.0);
        std::vector<GaussComponent> comps;
        for (const auto& c : j.at("components")) {
            GaussComponent gc;
            gc.weight = c.value("weight", 1.0);
            gc.mean = c.at("mean").get<std::vector<double>>();
            gc.sigma = c.at("sigma").get<std::vector<double>>();
            comps.push_back(std::move(gc));
        }
        return trunc_gauss_mix_density(box, std::move(comps));
    }
    if (name == "histogram") {
        if (!j.contains("breaks")) return density_by_name(name);
        return histogram_density(j.at("breaks").get<std::vector<double>>(),
                                 j.at("probs").get<std::vector<double>>());
    }
    throw config_error("unknown density: " + name);
}

NoiseModel noise_from_json(const json& j) {
    const auto name = j.value("name", std::string("gaussian"));
    const double param = j.value("param", kNaN);
    return noise_by_name(name, param);
}

NoiseMoments noise_moments_cached(const NoiseModel& noise, double s,
                                  const std::string& cache_path, std::uint64_t seed,
                                  long samples) {
    char key[160];
    std::snprintf(key, sizeof(key), "%s/alpha=%g,b=%g,v=%g,p=%g,scale=%g,nu=%g/s=%g/seed=%llu",
                  noise.name().c_str(), noise.alpha, noise.b, noise.v, noise.p, noise.scale,
                  noise.nu, s, static_cast<unsigned long long>(seed));
    json cache = json::object();
    {
        std::ifstream in(cache_path);
        if (in) {
            try {
                in >> cache;
            } catch (...) {
                cache = json::object();
            }
        }
    }
    if (cache.contains(key)) {
        const auto& e = cache.at(key);
        NoiseMoments m;
        m.sigma_eps = e.at("sigma_eps").get<double>();
        m.e_s = e.at("e_s").get<double>();
        m.samples = e.at("samples").get<long>();
        m.seed = seed;
        return m;
    }
    const NoiseMoments m = mc_noise_moments(noise, s, seed, samples);
    cache[key] = {{"sigma_eps", m.sigma_eps}, {"e_s", m.e_s}, {"samples", m.samples}};
    write_text_file(cache_path, cache.dump(2) + "\n");
    return m;
}

json to_json(const TailRow& row) {
    return json{{"z", row.z},           {"threshold", row.threshold},
                {"exceed", row.exceed}, {"reps", row.reps},
                {"freq", row.freq},     {"cp_upper", row.cp_upper},
                {"bound", row.bound},   {"verdict", row.verdict}};
}

json to_json(const NormGuard& g) {
    json arr = json::array();
    for (const auto& e : g.entries)
        arr.push_back(json{
            {"name", e.name}, {"value", e.value}, {"rel_dev", e.rel_dev}, {"ok", e.ok}});
    return arr;
}

json to_json(const ExperimentReport& rep) {
    json j;
    j["name"] = rep.name;
    j["seed"] = rep.seed;
    j["reps"] = rep.reps;
    j["n"] = rep.n;
    j["s"] = rep.s;
    j["informativeness_cutoff"] = rep.informativeness_cutoff;
    j["pass"] = rep.pass;
    j["runtime_sec"] = rep.runtime_sec;
    j["rows"] = json::array();
    for (const auto& r : rep.rows) j["rows"].push_back(to_json(r));
    j["notes"] = rep.notes;
    j["norm_guard"] = to_json(rep.guard);
    return j;
}

json to_json(const FixedWeightBound& b) {
    return json{{"s", b.s},           {"n", b.n},
                {"M_s", b.M_s},       {"M_2", b.M_2},
                {"Sigma_s", b.Sigma_s}, {"rho_s", b.rho},
                {"omega_sq", b.omega_sq}, {"c_star", b.c_star},
                {"c1", c1(b.s)},      {"c3", b.s > 2.0 ? c3(b.s) : 1.0}};
}

json to_json(const UniformBoundReport& r) {
    json j{{"y", r.y},
           {"eps", r.eps},
           {"q", r.q},
           {"u_eps", r.u_eps},
           {"r", r.r},
           {"R", r.R},
           {"Lambda_A", r.lambda_A},
           {"Lambda_B", r.lambda_B},
           {"C_star", r.c_star_y},
           {"covering_eps8", r.covering_eps8},
           {"probability_bound", r.probability_bound},
           {"probability_bound_min1", std::min(1.0, r.probability_bound)},
           {"moment_bound", r.moment_bound},
           {"pair_sampled", r.pair_sampled},
           {"series_terms", r.series_terms_max}};
    if (std::isfinite(r.probability_bound_exp)) j["probability_bound_exp"] = r.probability_bound_exp;
    if (std::isfinite(r.moment_bound_exp)) j["moment_bound_exp"] = r.moment_bound_exp;
    if (std::isfinite(r.L_sqrt_series)) j["L_eps_g"] = r.L_sqrt_series;
    json slices = json::array();
    for (const auto& s : r.slices)
        slices.push_back(json{{"level", s.level},
                              {"members", s.members},
                              {"kappa_U", s.kappa_U},
                              {"Lambda_A_slice", s.lambda_A},
                              {"Lambda_B_slice", s.lambda_B},
                              {"L_term", s.L_term},
                              {"J_term", s.J_term},
                              {"J_err", s.J_err}});
    j["slices"] = slices;
    return j;
}

json to_json(const Theorem4Report& r) {
    json j{{"s", r.s},       {"eps", r.eps},
           {"z", r.z},       {"q", r.q},
           {"z_floor", r.z_floor}, {"majorant_factor", r.majorant_factor},
           {"tail", r.tail}, {"L_eps_exp", r.L_exp},
           {"covering_eps8", r.covering_eps8}};
    j[r.s < 2.0 ? "T3" : "T4"] = r.T_const;
    return j;
}

json to_json(const Theorem5Report& r) {
    return json{{"s", r.s},
                {"eps", r.eps},
                {"y", r.y},
                {"q", r.q},
                {"alpha_star", r.alpha_star},
                {"gamma", r.gamma},
                {"y_star", r.y_star},
                {"theta0", r.theta0},
                {"theta1", r.theta1},
                {"theta2", r.theta2},
                {"C_star", r.C_star_y},
                {"ubar_eps", r.ubar},
                {"k_star", r.k_star},
                {"m", r.m},
                {"T5", r.T5},
                {"T6", r.T6},
                {"L_star_beta", r.L_star_beta},
                {"tail_moment", r.tail_moment},
                {"majorant_multiplier", r.majorant_multiplier}};
}

json to_json(const Theorem9Report& r) {
    return json{{"s", r.s},       {"eps", r.eps},
                {"y", r.y},       {"q", r.q},
                {"a", r.a},       {"b_n_sq", r.b_n_sq},
                {"c_n", r.c_n},   {"T_n_eps", r.T_n},
                {"L_alpha_b", r.L_alpha_b}, {"J_alpha_b", r.J_alpha_b},
                {"majorant_factor", r.majorant_factor}, {"tail", r.tail}};
}

json to_json(const KdeConstants& c) {
    json j{{"i", c.i},
           {"theta0", c.theta0},
           {"alpha2", c.alpha2_i},
           {"alpha_star", c.alpha_star},
           {"theta1", c.theta1_const},
           {"theta2", c.theta2_const},
           {"A_H", c.A_H},
           {"B_H", c.B_H},
           {"k_star", c.k_star}};
    if (std::isfinite(c.gamma)) j["gamma"] = c.gamma;
    if (c.y_star > 0.0) j["y_star"] = c.y_star;
    if (std::isfinite(c.C_star_y)) j["C_star"] = c.C_star_y;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write file: " + path);
    out << text;
}

std::string summary_csv(const std::vector<ExperimentReport>& reports) {
    std::ostringstream out;
    out << "suite,s,z,frequency,cp_upper,bound,verdict\n";
    char buf[512];
    for (const auto& rep : reports)
        for (const auto& r : rep.rows) {
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                          rep.name.c_str(), rep.s, r.z, r.freq, r.cp_upper, r.bound,
                          r.verdict.c_str());
            out << buf;
        }
    return out.str();
}

} // namespace lsbound
