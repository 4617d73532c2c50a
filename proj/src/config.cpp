#include "metamol/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "metamol/errors.hpp"

namespace metamol {

RunSchedule RunConfig::pwd_schedule() const {
    RunSchedule s;
    s.tau = pwd_tau;
    s.t_max = t_max;
    const double stride = output_dt / pwd_tau;
    s.output_every = static_cast<int>(std::lround(stride));
    s.n_traj = pwd_trajectories;
    s.blocks = pwd_blocks;
    s.seed = seed;
    s.weight_bound = pwd_weight_bound;
    s.workers = workers;
    s.slot = initial_state;
    return s;
}

GridRunOptions RunConfig::grid_options() const {
    GridRunOptions o;
    o.geometry = grid_geometry;
    o.tau = grid_tau;
    o.t_max = t_max;
    o.output_dt = output_dt;
    o.boundary_tol = grid_boundary_tol;
    o.slot = initial_state;
    o.workers = workers;
    return o;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': bad numeric value '" + v + "'");
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': bad integer value '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': bad integer value '" + v + "'");
    }
}

void assign(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "qd_splitting")
        c.params.qd_splitting = parse_double(key, value);
    else if (key == "omega")
        c.params.mode_frequency = parse_double(key, value);
    else if (key == "coupling")
        c.params.coupling = parse_double(key, value);
    else if (key == "drive_strength")
        c.params.drive_strength = parse_double(key, value);
    else if (key == "drive_frequency")
        c.params.drive_frequency = parse_double(key, value);
    else if (key == "beta")
        c.params.beta = parse_double(key, value);
    else if (key == "engine") {
        if (value == "pwd")
            c.engine = Engine::Pwd;
        else if (value == "grid")
            c.engine = Engine::Grid;
        else if (value == "both")
            c.engine = Engine::Both;
        else
            throw ConfigError("key 'engine': expected pwd, grid or both, got '" +
                              value + "'");
    } else if (key == "t_max")
        c.t_max = parse_double(key, value);
    else if (key == "output_dt")
        c.output_dt = parse_double(key, value);
    else if (key == "seed")
        c.seed = parse_u64(key, value);
    else if (key == "workers")
        c.workers = static_cast<int>(parse_long(key, value));
    else if (key == "out_prefix")
        c.out_prefix = value;
    else if (key == "initial_state") {
        if (value == "ground")
            c.initial_state = InitialSlot::Ground;
        else if (value == "excited")
            c.initial_state = InitialSlot::Excited;
        else
            throw ConfigError("key 'initial_state': expected ground or excited");
    } else if (key == "pwd_tau")
        c.pwd_tau = parse_double(key, value);
    else if (key == "pwd_trajectories")
        c.pwd_trajectories = parse_long(key, value);
    else if (key == "pwd_blocks")
        c.pwd_blocks = static_cast<int>(parse_long(key, value));
    else if (key == "pwd_weight_bound")
        c.pwd_weight_bound = parse_double(key, value);
    else if (key == "grid_tau")
        c.grid_tau = parse_double(key, value);
    else if (key == "grid_extent_r")
        c.grid_geometry.extent_R = parse_double(key, value);
    else if (key == "grid_extent_p")
        c.grid_geometry.extent_P = parse_double(key, value);
    else if (key == "grid_dr")
        c.grid_geometry.dR = parse_double(key, value);
    else if (key == "grid_dp")
        c.grid_geometry.dP = parse_double(key, value);
    else if (key == "grid_boundary_tol")
        c.grid_boundary_tol = parse_double(key, value);
    else
        throw ConfigError("unknown key '" + key + "'");
}

void check(const RunConfig& c) {
    try {
        validate(c.params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(c.t_max > 0.0)) throw ConfigError("key 't_max': must be > 0");
    if (!(c.output_dt > 0.0)) throw ConfigError("key 'output_dt': must be > 0");
    if (!(c.pwd_tau > 0.0)) throw ConfigError("key 'pwd_tau': must be > 0");
    const double stride = c.output_dt / c.pwd_tau;
    if (std::abs(stride - std::lround(stride)) > 1e-9 || stride < 0.5)
        throw ConfigError("key 'output_dt': must be a multiple of pwd_tau");
    const double gstride = c.output_dt / c.grid_tau;
    if (!(c.grid_tau > 0.0) ||
        std::abs(gstride - std::lround(gstride)) > 1e-9 || gstride < 0.5)
        throw ConfigError("key 'output_dt': must be a multiple of grid_tau");
    if (c.pwd_trajectories < 1)
        throw ConfigError("key 'pwd_trajectories': must be >= 1");
    if (c.pwd_blocks < 2) throw ConfigError("key 'pwd_blocks': must be >= 2");
    if (!(c.pwd_weight_bound > 1.0))
        throw ConfigError("key 'pwd_weight_bound': must be > 1");
    if (c.workers < 0) throw ConfigError("key 'workers': must be >= 0");
    try {
        validate(c.grid_geometry);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid geometry: ") + e.what());
    }
    if (!(c.grid_boundary_tol > 0.0))
        throw ConfigError("key 'grid_boundary_tol': must be > 0");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        try {
            assign(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    check(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be 'key=value': " + assignment);
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    assign(cfg, key, value);
    check(cfg);
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::map<std::string, std::string> config_entries(const RunConfig& c) {
    std::map<std::string, std::string> m;
    m["qd_splitting"] = fmt(c.params.qd_splitting);
    m["omega"] = fmt(c.params.mode_frequency);
    m["coupling"] = fmt(c.params.coupling);
    m["drive_strength"] = fmt(c.params.drive_strength);
    m["drive_frequency"] = fmt(c.params.drive_frequency);
    m["beta"] = fmt(c.params.beta);
    m["engine"] = engine_name(c.engine);
    m["t_max"] = fmt(c.t_max);
    m["output_dt"] = fmt(c.output_dt);
    m["seed"] = std::to_string(c.seed);
    m["workers"] = std::to_string(c.workers);
    m["out_prefix"] = c.out_prefix;
    m["initial_state"] =
        c.initial_state == InitialSlot::Ground ? "ground" : "excited";
    m["pwd_tau"] = fmt(c.pwd_tau);
    m["pwd_trajectories"] = std::to_string(c.pwd_trajectories);
    m["pwd_blocks"] = std::to_string(c.pwd_blocks);
    m["pwd_weight_bound"] = fmt(c.pwd_weight_bound);
    m["grid_tau"] = fmt(c.grid_tau);
    m["grid_extent_r"] = fmt(c.grid_geometry.extent_R);
    m["grid_extent_p"] = fmt(c.grid_geometry.extent_P);
    m["grid_dr"] = fmt(c.grid_geometry.dR);
    m["grid_dp"] = fmt(c.grid_geometry.dP);
    m["grid_boundary_tol"] = fmt(c.grid_boundary_tol);
    return m;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    for (const auto& [key, value] : config_entries(cfg))
        os << key << " = " << value << "\n";
    return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string s = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RunConfig config_from_meta(const std::map<std::string, std::string>& meta) {
    RunConfig c;
    static const std::string prefix = "config.";
    for (const auto& [key, value] : meta) {
        if (key.rfind(prefix, 0) != 0) continue;
        assign(c, key.substr(prefix.size()), value);
    }
    check(c);
    return c;
}

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::Pwd: return "pwd";
        case Engine::Grid: return "grid";
        case Engine::Both: return "both";
    }
    return "pwd";
}

}  // namespace metamol
