#include "sburgers/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sburgers {

double SimConfig::trace() const {
    double a = 0.0;
    for (int j = 1; j <= J; ++j) {
        const double aj = a0 * std::pow(static_cast<double>(j), -r);
        a += aj * aj;
    }
    return a;
}

bool SimConfig::bound_regime(double moment) const {
    if (moment <= 1.0) return false;
    return noise_strength() < k / (moment - 1.0);
}

bool SimConfig::bound_regime() const { return bound_regime(p); }

bool SimConfig::invariant_regime() const { return noise_strength() < 3.0 * k / 7.0; }

int SimConfig::steps() const { return static_cast<int>(std::llround(T / dt)); }

void SimConfig::validate() const {
    (void)grid();  // L >= 1, n >= 3
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (!(dt > 0.0)) fail("dt must be positive");
    if (!(T >= dt)) fail("T must be at least dt");
    if (std::abs(T / dt - std::round(T / dt)) > 1e-6 * (T / dt)) fail("T must be a multiple of dt");
    if (snapshot_stride < 1) fail("snapshot_stride must be >= 1");
    if (!(k >= 0.0)) fail("damping k must be nonnegative");
    if (!(l >= 0.0)) fail("growth constant l must be nonnegative");
    if (!(a0 >= 0.0)) fail("a0 must be nonnegative");
    if (!(r > 0.5)) fail("r must exceed 1/2 (summable noise spectrum)");
    if (J < 0 || J > n) fail("J must lie in [0, n]");
    if (M < 1) fail("M must be >= 1");
    if (!(N_max > 0.0)) fail("N_max must be positive");
    if (!(p >= 2.0)) fail("moment exponent p must be >= 2");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

SimConfig parse_config(std::string_view text) {
    static const std::set<std::string> known = {
        "L", "n", "dt", "T", "k", "l", "sigma_kind", "a0", "r", "J",
        "M", "seed", "N_max", "p", "snapshot_stride", "retain_states"};

    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!known.contains(key)) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" +
                                        key + "'");
        }
        if (value.empty()) {
            throw std::invalid_argument("config key '" + key + "' has no value");
        }
        if (!kv.emplace(key, value).second) {
            throw std::invalid_argument("config key '" + key + "' given twice");
        }
    }
    if (!kv.contains("seed")) throw std::invalid_argument("config is missing required key 'seed'");

    SimConfig c;
    for (const auto& [key, value] : kv) {
        if (key == "L") c.L = parse_number<double>(key, value);
        else if (key == "n") c.n = parse_number<int>(key, value);
        else if (key == "dt") c.dt = parse_number<double>(key, value);
        else if (key == "T") c.T = parse_number<double>(key, value);
        else if (key == "k") c.k = parse_number<double>(key, value);
        else if (key == "l") c.l = parse_number<double>(key, value);
        else if (key == "sigma_kind") c.sigma_kind = sigma_kind_from_string(value);
        else if (key == "a0") c.a0 = parse_number<double>(key, value);
        else if (key == "r") c.r = parse_number<double>(key, value);
        else if (key == "J") c.J = parse_number<int>(key, value);
        else if (key == "M") c.M = parse_number<int>(key, value);
        else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "N_max") c.N_max = parse_number<double>(key, value);
        else if (key == "p") c.p = parse_number<double>(key, value);
        else if (key == "snapshot_stride") c.snapshot_stride = parse_number<int>(key, value);
        else if (key == "retain_states") c.retain_states = parse_bool(key, value);
    }
    c.validate();
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const SimConfig& c) {
    std::ostringstream o;
    o << "L=" << format_double(c.L) << '\n'
      << "n=" << c.n << '\n'
      << "dt=" << format_double(c.dt) << '\n'
      << "T=" << format_double(c.T) << '\n'
      << "snapshot_stride=" << c.snapshot_stride << '\n'
      << "k=" << format_double(c.k) << '\n'
      << "l=" << format_double(c.l) << '\n'
      << "sigma_kind=" << to_string(c.sigma_kind) << '\n'
      << "a0=" << format_double(c.a0) << '\n'
      << "r=" << format_double(c.r) << '\n'
      << "J=" << c.J << '\n'
      << "M=" << c.M << '\n'
      << "seed=" << c.seed << '\n'
      << "N_max=" << format_double(c.N_max) << '\n'
      << "p=" << format_double(c.p) << '\n'
      << "retain_states=" << (c.retain_states ? "true" : "false") << '\n';
    return o.str();
}

std::vector<std::string> regime_warnings(const SimConfig& c) {
    std::vector<std::string> w;
    const double al2 = c.noise_strength();
    if (!c.bound_regime()) {
        w.push_back("a*l^2 = " + format_double(al2) + " >= k/(p-1) = " +
                    format_double(c.k / (c.p - 1.0)) + ": uniform moment bound not guaranteed");
    }
    if (!c.invariant_regime()) {
        w.push_back("a*l^2 = " + format_double(al2) + " >= 3k/7 = " + format_double(3.0 * c.k / 7.0) +
                    ": tail estimate and invariant-measure construction not guaranteed");
    }
    return w;
}

}  // namespace sburgers
