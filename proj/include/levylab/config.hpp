#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "levylab/fpe.hpp"
#include "levylab/particles.hpp"

namespace levylab::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` text with dotted keys and '#' comments. The schema is
/// strict: every key must be consumed by the loader, and unknown keys fail
/// the run. Physics parameters have no silent defaults.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::filesystem::path& path);
    static KeyValueFile parse_text(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key);
    double get_double(const std::string& key);
    long long get_int(const std::string& key);
    std::uint64_t get_uint64(const std::string& key);
    bool get_bool(const std::string& key);
    std::vector<double> get_double_list(const std::string& key);

    std::optional<std::string> maybe_string(const std::string& key);
    std::optional<double> maybe_double(const std::string& key);

    double get_double_or(const std::string& key, double fallback);
    long long get_int_or(const std::string& key, long long fallback);
    std::string get_string_or(const std::string& key, const std::string& fallback);

    /// Throws listing every key that was never consumed.
    void finish() const;

    const std::string& text() const { return text_; }

private:
    std::string raw(const std::string& key);
    std::string origin_;
    std::string text_;
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

/// Fully validated experiment description; sub-blocks are present only when
/// the config provides them.
struct ExperimentConfig {
    std::string name;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    Grid grid{};
    fpe::KernelSpec kernel;
    fpe::SolverConfig solver;
    double horizon = 0.0; // solver T

    struct ParticleBlock {
        std::size_t count = 0;
        double bandwidth = 0.0;
        particles::EulerConfig::DriftMode drift_mode = particles::EulerConfig::DriftMode::Grid;
        particles::EulerConfig::Interp interpolation = particles::EulerConfig::Interp::Linear;
    };
    std::optional<ParticleBlock> particle;

    struct AnalysisBlock {
        std::vector<double> deltas;
        double eps = 0.0;
        double t_min = 0.0;
        double t_max = 0.0;
        int n_obs = 16;
        double spread_max = 5.0;
        double slope_margin = 0.2;
    };
    std::optional<AnalysisBlock> analysis;

    struct InitBlock {
        double width = 0.0; // absolute width of the Gaussian initializer
        std::vector<double> center;
    };
    InitBlock init;

    std::filesystem::path output_dir = ".";
    std::string source_text;

    /// Parses and validates every referenced sub-config before any
    /// computation starts. The LEVYLAB_OUT environment variable overrides
    /// the configured output directory.
    static ExperimentConfig load(const std::filesystem::path& path);
    static ExperimentConfig from_text(const std::string& text, const std::string& origin);
};

} // namespace levylab::config
