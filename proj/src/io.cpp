#include "levylab/io.hpp"

#include <sys/utsname.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include <json.hpp>

namespace levylab::io {

namespace {

// The containers are little-endian by specification; this library targets
// little-endian hosts and writes native doubles/integers directly.
static_assert(std::endian::native == std::endian::little,
              "binary containers assume a little-endian host");

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("container truncated");
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

} // namespace

void write_field(const std::filesystem::path& path, const Field& f) {
    auto out = open_out(path);
    put<std::uint32_t>(out, f.grid().dim);
    put<std::uint32_t>(out, f.grid().n);
    put<double>(out, f.grid().length);
    put<std::uint32_t>(out, f.components());
    out.write(reinterpret_cast<const char*>(f.raw().data()),
              static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
}

Field read_field(const std::filesystem::path& path) {
    auto in = open_in(path);
    int dim = static_cast<int>(get<std::uint32_t>(in));
    int n = static_cast<int>(get<std::uint32_t>(in));
    double length = get<double>(in);
    int components = static_cast<int>(get<std::uint32_t>(in));
    Field f(make_grid(dim, n, length), components);
    in.read(reinterpret_cast<char*>(f.raw().data()),
            static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
    if (!in) throw std::runtime_error("field payload truncated: " + path.string());
    return f;
}

void write_noise_path(const std::filesystem::path& path, const stable::NoisePath& p) {
    auto out = open_out(path);
    put<double>(out, p.params.alpha);
    put<std::uint32_t>(out, p.params.dim);
    put<double>(out, p.dt);
    put<std::uint64_t>(out, p.nsteps());
    out.write(reinterpret_cast<const char*>(p.increments.data()),
              static_cast<std::streamsize>(p.increments.size() * sizeof(double)));
}

stable::NoisePath read_noise_path(const std::filesystem::path& path) {
    auto in = open_in(path);
    stable::NoisePath p;
    p.params.alpha = get<double>(in);
    p.params.dim = static_cast<int>(get<std::uint32_t>(in));
    p.dt = get<double>(in);
    auto nsteps = get<std::uint64_t>(in);
    p.increments.resize(nsteps * p.params.dim);
    in.read(reinterpret_cast<char*>(p.increments.data()),
            static_cast<std::streamsize>(p.increments.size() * sizeof(double)));
    if (!in) throw std::runtime_error("noise path payload truncated: " + path.string());
    return p;
}

void write_ensemble(const std::filesystem::path& path, const particles::Ensemble& e) {
    auto out = open_out(path);
    put<std::uint64_t>(out, e.size());
    put<std::uint32_t>(out, e.dim);
    put<double>(out, e.t);
    out.write(reinterpret_cast<const char*>(e.positions.data()),
              static_cast<std::streamsize>(e.positions.size() * sizeof(double)));
}

particles::Ensemble read_ensemble(const std::filesystem::path& path) {
    auto in = open_in(path);
    particles::Ensemble e;
    auto n = get<std::uint64_t>(in);
    e.dim = static_cast<int>(get<std::uint32_t>(in));
    e.t = get<double>(in);
    e.positions.resize(n * e.dim);
    in.read(reinterpret_cast<char*>(e.positions.data()),
            static_cast<std::streamsize>(e.positions.size() * sizeof(double)));
    if (!in) throw std::runtime_error("ensemble payload truncated: " + path.string());
    return e;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path.string());
}

void CsvWriter::header(const std::vector<std::string>& names) { raw_row(names); }

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_real(v));
    raw_row(cells);
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\r\n") != std::string::npos) {
            out_ << '"';
            for (char ch : c) {
                if (ch == '"') out_ << '"';
                out_ << ch;
            }
            out_ << '"';
        } else {
            out_ << c;
        }
    }
    out_ << "\r\n";
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string version_string() { return "levylab 0.1.0"; }

void write_manifest(const std::filesystem::path& dir, const std::string& tool,
                    const std::string& config_text, double wall_seconds,
                    const std::vector<std::string>& artifacts) {
    nlohmann::json m;
    m["tool"] = tool;
    m["version"] = version_string();
    m["config_hash"] = fnv1a_hex(config_text);
    m["wall_time_seconds"] = wall_seconds;
    m["artifacts"] = artifacts;
    utsname u{};
    if (uname(&u) == 0) {
        m["host"] = {{"sysname", u.sysname}, {"release", u.release}, {"machine", u.machine}};
    }
    auto now = std::chrono::system_clock::now().time_since_epoch();
    m["unix_time"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << m.dump(2) << "\n";
}

} // namespace levylab::io
