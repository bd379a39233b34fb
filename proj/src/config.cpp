#include "levylab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace levylab::config {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

} // namespace

KeyValueFile KeyValueFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path.string());
}

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    kv.text_ = text;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (kv.values_.count(key))
            throw ConfigError(origin + ": duplicate key '" + key + "'");
        kv.values_[key] = value;
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueFile::raw(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
}

std::string KeyValueFile::get_string(const std::string& key) { return raw(key); }

double KeyValueFile::get_double(const std::string& key) {
    std::string v = raw(key);
    if (v == "inf" || v == "Inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "' is not a real number: " + v);
    }
}

long long KeyValueFile::get_int(const std::string& key) {
    std::string v = raw(key);
    try {
        std::size_t pos = 0;
        long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "' is not an integer: " + v);
    }
}

std::uint64_t KeyValueFile::get_uint64(const std::string& key) {
    std::string v = raw(key);
    try {
        std::size_t pos = 0;
        unsigned long long i = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "' is not an unsigned integer: " + v);
    }
}

bool KeyValueFile::get_bool(const std::string& key) {
    std::string v = raw(key);
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError(origin_ + ": key '" + key + "' is not a boolean: " + v);
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key) {
    std::string v = raw(key);
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": key '" + key + "' has a non-numeric entry: " + item);
        }
    }
    if (out.empty()) throw ConfigError(origin_ + ": key '" + key + "' lists no values");
    return out;
}

std::optional<std::string> KeyValueFile::maybe_string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return get_string(key);
}

std::optional<double> KeyValueFile::maybe_double(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return get_double(key);
}

double KeyValueFile::get_double_or(const std::string& key, double fallback) {
    return has(key) ? get_double(key) : fallback;
}

long long KeyValueFile::get_int_or(const std::string& key, long long fallback) {
    return has(key) ? get_int(key) : fallback;
}

std::string KeyValueFile::get_string_or(const std::string& key, const std::string& fallback) {
    return has(key) ? get_string(key) : fallback;
}

void KeyValueFile::finish() const {
    std::string unknown;
    for (const auto& [key, value] : values_)
        if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    if (!unknown.empty())
        throw ConfigError(origin_ + ": unknown keys: " + unknown);
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text, const std::string& origin) {
    KeyValueFile kv = KeyValueFile::parse_text(text, origin);
    ExperimentConfig ec;
    ec.source_text = text;
    ec.name = kv.get_string("name");
    ec.seed = kv.get_uint64("seed");
    ec.alpha = kv.get_double("alpha");
    if (!(ec.alpha > 0.0) || !(ec.alpha > 0.0 && ec.alpha <= 2.0))
        throw ConfigError(origin + ": alpha must lie in (0, 2]");

    int dim = static_cast<int>(kv.get_int("dim"));
    int n = static_cast<int>(kv.get_int("grid.n"));
    double L = kv.get_double("grid.L");
    try {
        ec.grid = make_grid(dim, n, L);
    } catch (const std::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    std::string kind = kv.get_string("kernel.kind");
    if (kind == "zero") {
        ec.kernel = fpe::KernelSpec::zero();
    } else if (kind == "smooth_gaussian_gradient") {
        ec.kernel = fpe::KernelSpec::smooth_gaussian_gradient(kv.get_double("kernel.width"),
                                                              kv.get_double("kernel.amplitude"));
    } else if (kind == "synthetic_besov") {
        ec.kernel = fpe::KernelSpec::synthetic_besov(kv.get_double("kernel.beta"),
                                                     kv.get_uint64("kernel.seed"),
                                                     kv.get_double("kernel.amplitude"));
    } else {
        throw ConfigError(origin + ": unknown kernel.kind '" + kind +
                          "' (zero | smooth_gaussian_gradient | synthetic_besov)");
    }

    ec.solver.dt = kv.get_double("solver.dt");
    ec.horizon = kv.get_double("solver.T");
    ec.solver.time_scheme = static_cast<int>(kv.get_int_or("solver.scheme", 2));
    std::string neg = kv.get_string_or("solver.negativity_policy", "report");
    if (neg == "report")
        ec.solver.negativity_policy = fpe::SolverConfig::NegativityPolicy::Report;
    else if (neg == "clip-renormalize")
        ec.solver.negativity_policy = fpe::SolverConfig::NegativityPolicy::ClipRenormalize;
    else
        throw ConfigError(origin + ": unknown solver.negativity_policy '" + neg + "'");
    ec.solver.dealias = !kv.has("solver.dealias") || kv.get_bool("solver.dealias");
    ec.solver.store_every = static_cast<int>(kv.get_int_or("solver.store_every", 1));
    try {
        fpe::validate(ec.solver);
    } catch (const std::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!(ec.horizon > 0.0)) throw ConfigError(origin + ": solver.T must be positive");

    ec.init.width = kv.has("rho0.width_cells")
                        ? kv.get_double("rho0.width_cells") * ec.grid.spacing()
                        : kv.get_double_or("rho0.width", 4.0 * ec.grid.spacing());
    if (kv.has("rho0.center")) ec.init.center = kv.get_double_list("rho0.center");

    if (kv.has("particles.N")) {
        ParticleBlock pb;
        pb.count = static_cast<std::size_t>(kv.get_int("particles.N"));
        pb.bandwidth = kv.get_double("particles.bandwidth");
        std::string mode = kv.get_string_or("particles.drift_mode", "grid");
        if (mode == "grid")
            pb.drift_mode = particles::EulerConfig::DriftMode::Grid;
        else if (mode == "pairwise")
            pb.drift_mode = particles::EulerConfig::DriftMode::Pairwise;
        else
            throw ConfigError(origin + ": unknown particles.drift_mode '" + mode + "'");
        std::string interp = kv.get_string_or("particles.interpolation", "linear");
        if (interp == "nearest")
            pb.interpolation = particles::EulerConfig::Interp::Nearest;
        else if (interp == "linear")
            pb.interpolation = particles::EulerConfig::Interp::Linear;
        else
            throw ConfigError(origin + ": unknown particles.interpolation '" + interp + "'");
        if (pb.count < 2) throw ConfigError(origin + ": particles.N must be >= 2");
        if (!(pb.bandwidth >= ec.grid.spacing()))
            throw ConfigError(origin + ": particles.bandwidth must be >= grid spacing");
        ec.particle = pb;
    }

    if (kv.has("analysis.deltas")) {
        AnalysisBlock ab;
        ab.deltas = kv.get_double_list("analysis.deltas");
        ab.eps = kv.get_double_or("analysis.eps", 0.0);
        ab.t_min = kv.get_double("analysis.t_min");
        ab.t_max = kv.get_double("analysis.t_max");
        ab.n_obs = static_cast<int>(kv.get_int_or("analysis.n_obs", 16));
        ab.spread_max = kv.get_double_or("analysis.spread_max", 5.0);
        ab.slope_margin = kv.get_double_or("analysis.slope_margin", 0.2);
        if (!(ab.t_min > 0.0) || !(ab.t_max > ab.t_min))
            throw ConfigError(origin + ": need 0 < analysis.t_min < analysis.t_max");
        if (ab.t_max > ec.horizon + 1e-12)
            throw ConfigError(origin + ": analysis.t_max exceeds solver.T");
        if (ec.alpha <= 1.0)
            for (double d : ab.deltas)
                if (d >= ec.alpha)
                    throw ConfigError(origin +
                                      ": for alpha <= 1 every analysis delta must be < alpha");
        ec.analysis = ab;
    }

    ec.output_dir = kv.get_string_or("output.dir", ".");
    if (const char* env = std::getenv("LEVYLAB_OUT")) ec.output_dir = env;

    kv.finish();
    return ec;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str(), path.string());
}

} // namespace levylab::config
