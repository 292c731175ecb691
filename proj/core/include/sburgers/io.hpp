#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sburgers/config.hpp"
#include "sburgers/grid.hpp"
#include "sburgers/integrator.hpp"

namespace sburgers {

/// Library version string, e.g. "0.3.0".
std::string library_version();

/// Binary snapshot: magic "SBURG001", u32 n, f64 L, f64 t, then n f64
/// values, all little-endian.
struct Snapshot {
    Field u;
    double t = 0.0;
};

void write_snapshot(std::ostream& out, const Field& u, double t);
void write_snapshot(const std::filesystem::path& path, const Field& u, double t);
/// Throws std::runtime_error on bad magic, truncated data or a grid the
/// header cannot describe.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Columns t,l2sq,lpp,h1sq,tail_N1,tail_N2,c1..c8 with N1 = L/4, N2 = L/2.
std::string timeseries_csv(const Trajectory& traj, double half_width);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

/// Everything that identifies a run. The hash covers command, arguments and
/// the canonical config text, not the outputs.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> args;
    SimConfig cfg;
    std::string version;
    std::vector<std::string> outputs;  // paths relative to the run directory

    std::string key() const;
    /// JSON text including the derived constants and regime flags.
    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

/// Derived constants as stored in a manifest.
struct DerivedConstants {
    double a = 0.0;
    double al2 = 0.0;
    double moment_limit = 0.0;     // k / (p - 1)
    double invariant_limit = 0.0;  // 3k / 7
    bool bound_regime = false;
    bool invariant_regime = false;
};
DerivedConstants derived_constants(const SimConfig& cfg);

/// Re-derives the regime flags from the manifest's config and compares them
/// with the stored ones.
bool verify_manifest(const std::string& json_text);

/// Writes `text` to path, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sburgers
