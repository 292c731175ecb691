#include "sburgers/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sburgers {

std::string library_version() { return SBURGERS_VERSION; }

namespace {

constexpr char kMagic[8] = {'S', 'B', 'U', 'R', 'G', '0', '0', '1'};

template <class T>
void put_le(std::ostream& out, T v) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const U bits = std::bit_cast<U>(v);
    unsigned char b[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), sizeof b);
}

template <class T>
T get_le(std::istream& in) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    unsigned char b[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(b), sizeof b)) {
        throw std::runtime_error("snapshot: truncated data");
    }
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(b[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& u, double t) {
    out.write(kMagic, sizeof kMagic);
    put_le(out, static_cast<std::uint32_t>(u.size()));
    put_le(out, u.grid().half_width());
    put_le(out, t);
    for (double v : u.values()) put_le(out, v);
    if (!out) throw std::runtime_error("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const Field& u, double t) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_snapshot(f, u, t);
}

Snapshot read_snapshot(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof magic)) throw std::runtime_error("snapshot: truncated header");
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw std::runtime_error("snapshot: bad magic (not an SBURG001 file)");
    }
    const auto n = get_le<std::uint32_t>(in);
    const double L = get_le<double>(in);
    const double t = get_le<double>(in);
    if (n < 3 || n > (1u << 28)) throw std::runtime_error("snapshot: implausible node count");
    Grid grid = [&] {
        try {
            return Grid::make(L, static_cast<int>(n));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("snapshot: bad grid: ") + e.what());
        }
    }();
    Field u(grid);
    for (std::uint32_t i = 0; i < n; ++i) u[static_cast<int>(i)] = get_le<double>(in);
    return {std::move(u), t};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    return read_snapshot(f);
}

std::string timeseries_csv(const Trajectory& traj, double half_width) {
    const auto radius = [&](double r) {
        for (std::size_t i = 0; i < traj.tail_radii.size(); ++i) {
            if (std::abs(traj.tail_radii[i] - r) <= 1e-12 * std::max(1.0, r)) return i;
        }
        throw std::invalid_argument("timeseries_csv: trajectory lacks tail radius " + std::to_string(r));
    };
    const std::size_t k1 = radius(0.25 * half_width), k2 = radius(0.5 * half_width);
    std::ostringstream o;
    o << "t,l2sq,lpp,h1sq,tail_N1,tail_N2,c1,c2,c3,c4,c5,c6,c7,c8\n";
    char buf[32];
    auto put = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        o << buf << (last ? '\n' : ',');
    };
    for (const auto& r : traj.rows) {
        put(r.t);
        put(r.l2sq);
        put(r.lpp);
        put(r.h1sq);
        put(r.tails[k1]);
        put(r.tails[k2]);
        for (std::size_t j = 0; j < 8; ++j) put(r.coeffs[j], j == 7);
    }
    return o.str();
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

DerivedConstants derived_constants(const SimConfig& cfg) {
    DerivedConstants d;
    d.a = cfg.trace();
    d.al2 = cfg.noise_strength();
    d.moment_limit = cfg.k / (cfg.p - 1.0);
    d.invariant_limit = 3.0 * cfg.k / 7.0;
    d.bound_regime = cfg.bound_regime();
    d.invariant_regime = cfg.invariant_regime();
    return d;
}

std::string RunManifest::key() const {
    std::string s = command + '\n';
    for (const auto& [k, v] : args) s += k + '=' + v + '\n';
    s += render_config(cfg);
    return hex64(fnv1a(s));
}

std::string RunManifest::to_json() const {
    using nlohmann::json;
    const DerivedConstants d = derived_constants(cfg);
    json j;
    j["command"] = command;
    j["args"] = args;
    j["config"] = render_config(cfg);
    j["seed"] = cfg.seed;
    j["version"] = version;
    j["key"] = key();
    j["outputs"] = outputs;
    j["derived"] = {{"a", d.a},
                    {"al2", d.al2},
                    {"k_over_p_minus_1", d.moment_limit},
                    {"three_k_over_7", d.invariant_limit},
                    {"bound_regime", d.bound_regime},
                    {"invariant_regime", d.invariant_regime}};
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    using nlohmann::json;
    RunManifest m;
    try {
        const json j = json::parse(text);
        m.command = j.at("command").get<std::string>();
        m.args = j.at("args").get<std::map<std::string, std::string>>();
        m.cfg = parse_config(j.at("config").get<std::string>());
        m.version = j.at("version").get<std::string>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("manifest: ") + e.what());
    }
    return m;
}

bool verify_manifest(const std::string& json_text) {
    using nlohmann::json;
    const RunManifest m = RunManifest::from_json(json_text);
    const json j = json::parse(json_text);
    const DerivedConstants d = derived_constants(m.cfg);
    const json& stored = j.at("derived");
    return stored.at("bound_regime").get<bool>() == d.bound_regime &&
           stored.at("invariant_regime").get<bool>() == d.invariant_regime &&
           j.at("key").get<std::string>() == m.key();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace sburgers
