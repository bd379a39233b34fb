#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "levylab/field.hpp"
#include "levylab/particles.hpp"
#include "levylab/stable.hpp"

namespace levylab::io {

/// Flat binary container for fields.
/// Header: u32 dim, u32 n, f64 L, u32 components; payload: row-major
/// (component-major) 64-bit reals, little-endian.
void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

/// Noise path container. Header: f64 alpha, u32 dim, f64 dt, u64 nsteps;
/// payload: step-major 64-bit reals, little-endian.
void write_noise_path(const std::filesystem::path& path, const stable::NoisePath& p);
stable::NoisePath read_noise_path(const std::filesystem::path& path);

/// Ensemble checkpoint. Header: u64 N, u32 dim, f64 t; payload: particle
/// positions, little-endian 64-bit reals.
void write_ensemble(const std::filesystem::path& path, const particles::Ensemble& e);
particles::Ensemble read_ensemble(const std::filesystem::path& path);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_real(double v);

/// RFC 4180 CSV writer: header row, CRLF line endings, quoting when needed.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
};

/// FNV-1a 64-bit hash (hex string) of a byte sequence; used for config hashes.
std::string fnv1a_hex(const std::string& bytes);

/// Writes the run manifest (config hash, version, wall time, host info)
/// next to the artifacts. All timestamps live here and only here.
void write_manifest(const std::filesystem::path& dir, const std::string& tool,
                    const std::string& config_text, double wall_seconds,
                    const std::vector<std::string>& artifacts);

std::string version_string();

} // namespace levylab::io
