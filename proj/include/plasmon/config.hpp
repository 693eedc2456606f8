#pragma once

#include <array>
#include <complex>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "plasmon/errors.hpp"
#include "plasmon/farfield.hpp"
#include "plasmon/materials.hpp"
#include "plasmon/scan.hpp"

namespace plasmon {

enum class Command { spectrum, polarization, scan, couple, farfield };

inline const char* to_string(Command c) {
    switch (c) {
        case Command::spectrum: return "spectrum";
        case Command::polarization: return "polarization";
        case Command::scan: return "scan";
        case Command::couple: return "couple";
        case Command::farfield: return "farfield";
    }
    return "?";
}

struct ShapeSpec {
    std::string kind;  // circle | ellipse | star
    double radius = 1.0;
    double a = 1.0;
    double b = 0.5;
    double r0 = 1.0;
    double amplitude = 0.3;
    int n_petals = 5;
    double rotation = 0.0;
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    int n_nodes = 128;
    std::string label;  // empty selects the positional default
};

struct TensorSpec {
    enum class Kind { none, sphere, matrix } kind = Kind::none;
    std::complex<double> lambda{0.0, 0.0};
    double radius = 1.0;
    Matrix3c matrix = Matrix3c::Zero();
};

struct LineSpec {
    Vector3 from = Vector3::Zero();
    Vector3 to = Vector3::Zero();
    int n = 0;  // 0 means the block is absent
};

struct SphereGridSpec {
    double radius = 0.0;
    int n_theta = 0;
    int n_phi = 0;
};

struct FarfieldSpec {
    Vector3 z = Vector3::Zero();
    double delta = 0.01;
    Vector3 direction{0.0, 0.0, 1.0};
    Vector3 polarization{1.0, 0.0, 0.0};
    double omega = 0.0;
    TensorSpec me;
    TensorSpec mh;
    std::vector<Vector3> points;
    LineSpec line;
    SphereGridSpec sphere;
    double r_min = 0.0;
};

struct SolverSpec {
    double eps_sing = 1e-12;
    double rcond_min = 1e-14;
    double min_separation = 1e-6;
};

struct RunConfig {
    Command command = Command::spectrum;
    std::vector<ShapeSpec> shapes;
    DrudeMaterial material;
    SweepGrid grid;
    double prominence_frac = 0.05;
    std::vector<double> distances = default_distances();
    std::complex<double> pol_lambda{0.0, 0.0};
    bool has_pol_lambda = false;
    FarfieldSpec farfield;
    bool has_farfield = false;
    SolverSpec solver;
    std::string output_dir = "out";
    bool gnuplot = false;
    nlohmann::json echo;  // parsed input, reproduced verbatim in the manifest
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void cfg_fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + (path.empty() ? std::string("top level") : path) +
                      ": " + what);
}

inline std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Every object is checked against the full key list for its position, so a
// misspelled or misplaced key fails with its exact path instead of being
// silently ignored.
inline void require_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) cfg_fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) cfg_fail(join(path, it.key()), "unknown key");
    }
}

inline double as_num(const json& v, const std::string& path) {
    if (!v.is_number()) cfg_fail(path, "expected a number");
    return v.get<double>();
}

inline double opt_num(const json& obj, const std::string& path, const char* key, double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : as_num(*it, join(path, key));
}

inline int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) cfg_fail(path, "expected an integer");
    return v.get<int>();
}

inline int opt_int(const json& obj, const std::string& path, const char* key, int fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : as_int(*it, join(path, key));
}

inline std::string as_str(const json& v, const std::string& path) {
    if (!v.is_string()) cfg_fail(path, "expected a string");
    return v.get<std::string>();
}

inline bool opt_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) cfg_fail(join(path, key), "expected a boolean");
    return it->get<bool>();
}

// Complex values are written either as a bare number or as [re, im].
inline std::complex<double> as_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2)
        return {as_num(v[0], path + "[0]"), as_num(v[1], path + "[1]")};
    cfg_fail(path, "expected a number or an [re, im] pair");
}

inline Eigen::Vector2d as_vec2(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) cfg_fail(path, "expected an [x, y] pair");
    return {as_num(v[0], path + "[0]"), as_num(v[1], path + "[1]")};
}

inline Vector3 as_vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) cfg_fail(path, "expected an [x, y, z] triple");
    return {as_num(v[0], path + "[0]"), as_num(v[1], path + "[1]"), as_num(v[2], path + "[2]")};
}

inline ShapeSpec parse_shape(const json& obj, const std::string& path) {
    if (!obj.is_object()) cfg_fail(path, "expected a shape object");
    auto kind_it = obj.find("kind");
    if (kind_it == obj.end()) cfg_fail(path, "missing required key 'kind'");
    ShapeSpec s;
    s.kind = as_str(*kind_it, join(path, "kind"));
    if (s.kind == "circle") {
        require_keys(obj, path, {"kind", "radius", "center", "n_nodes", "label"});
        s.radius = opt_num(obj, path, "radius", s.radius);
    } else if (s.kind == "ellipse") {
        require_keys(obj, path, {"kind", "a", "b", "rotation", "center", "n_nodes", "label"});
        s.a = opt_num(obj, path, "a", s.a);
        s.b = opt_num(obj, path, "b", s.b);
        s.rotation = opt_num(obj, path, "rotation", s.rotation);
    } else if (s.kind == "star") {
        require_keys(obj, path,
                     {"kind", "r0", "amplitude", "n_petals", "rotation", "center", "n_nodes",
                      "label"});
        s.r0 = opt_num(obj, path, "r0", s.r0);
        s.amplitude = opt_num(obj, path, "amplitude", s.amplitude);
        s.n_petals = opt_int(obj, path, "n_petals", s.n_petals);
        s.rotation = opt_num(obj, path, "rotation", s.rotation);
    } else {
        cfg_fail(join(path, "kind"), "must be one of circle, ellipse, star");
    }
    if (auto it = obj.find("center"); it != obj.end())
        s.center = as_vec2(*it, join(path, "center"));
    s.n_nodes = opt_int(obj, path, "n_nodes", s.n_nodes);
    if (auto it = obj.find("label"); it != obj.end()) s.label = as_str(*it, join(path, "label"));
    return s;
}

inline DrudeMaterial parse_material(const json& obj, const std::string& path) {
    require_keys(obj, path,
                 {"eps0", "mu0", "omega_p", "tau", "F", "omega0", "eps_m_rel", "mu_m_rel"});
    DrudeMaterial m;
    const double eps_m_rel_default = m.eps_m / m.eps0;
    const double mu_m_rel_default = m.mu_m / m.mu0;
    m.eps0 = opt_num(obj, path, "eps0", m.eps0);
    m.mu0 = opt_num(obj, path, "mu0", m.mu0);
    m.omega_p = opt_num(obj, path, "omega_p", m.omega_p);
    m.tau = opt_num(obj, path, "tau", m.tau);
    m.F_fill = opt_num(obj, path, "F", m.F_fill);
    m.omega0 = opt_num(obj, path, "omega0", m.omega0);
    m.eps_m = opt_num(obj, path, "eps_m_rel", eps_m_rel_default) * m.eps0;
    m.mu_m = opt_num(obj, path, "mu_m_rel", mu_m_rel_default) * m.mu0;
    try {
        validate(m);
    } catch (const std::invalid_argument& e) {
        cfg_fail(path, e.what());
    }
    return m;
}

inline SweepGrid parse_grid(const json& obj, const std::string& path) {
    require_keys(obj, path, {"wavelength_min", "wavelength_max", "n_samples", "spacing"});
    SweepGrid g;
    g.wavelength_min = opt_num(obj, path, "wavelength_min", g.wavelength_min);
    g.wavelength_max = opt_num(obj, path, "wavelength_max", g.wavelength_max);
    g.n_samples = opt_int(obj, path, "n_samples", g.n_samples);
    if (auto it = obj.find("spacing"); it != obj.end()) {
        const std::string s = as_str(*it, join(path, "spacing"));
        if (s == "linear")
            g.spacing = SweepGrid::Spacing::linear;
        else if (s == "log")
            g.spacing = SweepGrid::Spacing::log;
        else
            cfg_fail(join(path, "spacing"), "must be 'linear' or 'log'");
    }
    if (!(g.wavelength_min > 0) || !(g.wavelength_max > g.wavelength_min) || g.n_samples < 2)
        cfg_fail(path, "need 0 < wavelength_min < wavelength_max and n_samples >= 2");
    return g;
}

inline TensorSpec parse_tensor(const json& obj, const std::string& path) {
    require_keys(obj, path, {"sphere", "matrix"});
    const bool has_sphere = obj.contains("sphere");
    const bool has_matrix = obj.contains("matrix");
    if (has_sphere == has_matrix)
        cfg_fail(path, "provide exactly one of 'sphere' or 'matrix'");
    TensorSpec t;
    if (has_sphere) {
        const json& s = obj.at("sphere");
        const std::string sp = join(path, "sphere");
        require_keys(s, sp, {"lambda", "radius"});
        auto it = s.find("lambda");
        if (it == s.end()) cfg_fail(sp, "missing required key 'lambda'");
        t.kind = TensorSpec::Kind::sphere;
        t.lambda = as_complex(*it, join(sp, "lambda"));
        t.radius = opt_num(s, sp, "radius", t.radius);
    } else {
        const json& rows = obj.at("matrix");
        const std::string mp = join(path, "matrix");
        if (!rows.is_array() || rows.size() != 3) cfg_fail(mp, "expected 3 rows");
        t.kind = TensorSpec::Kind::matrix;
        for (int i = 0; i < 3; ++i) {
            const json& row = rows[i];
            const std::string rp = mp + "[" + std::to_string(i) + "]";
            if (!row.is_array() || row.size() != 3) cfg_fail(rp, "expected 3 entries");
            for (int j = 0; j < 3; ++j)
                t.matrix(i, j) = as_complex(row[j], rp + "[" + std::to_string(j) + "]");
        }
    }
    return t;
}

inline FarfieldSpec parse_farfield(const json& obj, const std::string& path) {
    require_keys(obj, path,
                 {"z", "delta", "wave", "me", "mh", "points", "line", "sphere", "r_min"});
    FarfieldSpec f;
    if (auto it = obj.find("z"); it != obj.end()) f.z = as_vec3(*it, join(path, "z"));
    f.delta = opt_num(obj, path, "delta", f.delta);
    if (!(f.delta > 0)) cfg_fail(join(path, "delta"), "must be positive");
    auto wave_it = obj.find("wave");
    if (wave_it == obj.end()) cfg_fail(path, "missing required key 'wave'");
    {
        const std::string wp = join(path, "wave");
        require_keys(*wave_it, wp, {"direction", "polarization", "omega"});
        if (auto it = wave_it->find("direction"); it != wave_it->end())
            f.direction = as_vec3(*it, join(wp, "direction"));
        if (auto it = wave_it->find("polarization"); it != wave_it->end())
            f.polarization = as_vec3(*it, join(wp, "polarization"));
        auto om = wave_it->find("omega");
        if (om == wave_it->end()) cfg_fail(wp, "missing required key 'omega'");
        f.omega = as_num(*om, join(wp, "omega"));
        if (!(f.omega > 0)) cfg_fail(join(wp, "omega"), "must be positive");
    }
    auto me_it = obj.find("me");
    if (me_it == obj.end()) cfg_fail(path, "missing required key 'me'");
    f.me = parse_tensor(*me_it, join(path, "me"));
    if (auto it = obj.find("mh"); it != obj.end()) f.mh = parse_tensor(*it, join(path, "mh"));
    if (auto it = obj.find("points"); it != obj.end()) {
        const std::string pp = join(path, "points");
        if (!it->is_array()) cfg_fail(pp, "expected an array of [x, y, z] triples");
        for (std::size_t i = 0; i < it->size(); ++i)
            f.points.push_back(as_vec3((*it)[i], pp + "[" + std::to_string(i) + "]"));
    }
    if (auto it = obj.find("line"); it != obj.end()) {
        const std::string lp = join(path, "line");
        require_keys(*it, lp, {"from", "to", "n"});
        auto from = it->find("from");
        auto to = it->find("to");
        auto n = it->find("n");
        if (from == it->end() || to == it->end() || n == it->end())
            cfg_fail(lp, "requires keys 'from', 'to', 'n'");
        f.line.from = as_vec3(*from, join(lp, "from"));
        f.line.to = as_vec3(*to, join(lp, "to"));
        f.line.n = as_int(*n, join(lp, "n"));
        if (f.line.n < 2) cfg_fail(join(lp, "n"), "must be >= 2");
    }
    if (auto it = obj.find("sphere"); it != obj.end()) {
        const std::string sp = join(path, "sphere");
        require_keys(*it, sp, {"radius", "n_theta", "n_phi"});
        f.sphere.radius = opt_num(*it, sp, "radius", 0.0);
        f.sphere.n_theta = opt_int(*it, sp, "n_theta", 8);
        f.sphere.n_phi = opt_int(*it, sp, "n_phi", 16);
        if (!(f.sphere.radius > 0) || f.sphere.n_theta < 1 || f.sphere.n_phi < 1)
            cfg_fail(sp, "requires radius > 0, n_theta >= 1, n_phi >= 1");
    }
    f.r_min = opt_num(obj, path, "r_min", f.r_min);
    if (f.r_min < 0) cfg_fail(join(path, "r_min"), "must be nonnegative");
    if (f.points.empty() && f.line.n == 0 && f.sphere.n_theta == 0)
        cfg_fail(path, "provide at least one of 'points', 'line', 'sphere'");
    return f;
}

inline SolverSpec parse_solver(const json& obj, const std::string& path) {
    require_keys(obj, path, {"eps_sing", "rcond_min", "min_separation"});
    SolverSpec s;
    s.eps_sing = opt_num(obj, path, "eps_sing", s.eps_sing);
    s.rcond_min = opt_num(obj, path, "rcond_min", s.rcond_min);
    s.min_separation = opt_num(obj, path, "min_separation", s.min_separation);
    if (!(s.eps_sing > 0) || !(s.rcond_min > 0) || !(s.min_separation > 0))
        cfg_fail(path, "all solver thresholds must be positive");
    return s;
}

}  // namespace detail

inline RunConfig parse_config_json(const nlohmann::json& root) {
    using detail::cfg_fail;
    using detail::join;
    detail::require_keys(root, "",
                         {"command", "shapes", "material", "grid", "peaks", "distances",
                          "polarization", "farfield", "solver", "output_dir", "gnuplot"});
    RunConfig cfg;
    cfg.echo = root;

    auto cmd_it = root.find("command");
    if (cmd_it == root.end()) cfg_fail("", "missing required key 'command'");
    const std::string cmd = detail::as_str(*cmd_it, "command");
    if (cmd == "spectrum")
        cfg.command = Command::spectrum;
    else if (cmd == "polarization")
        cfg.command = Command::polarization;
    else if (cmd == "scan")
        cfg.command = Command::scan;
    else if (cmd == "couple")
        cfg.command = Command::couple;
    else if (cmd == "farfield")
        cfg.command = Command::farfield;
    else
        cfg_fail("command", "must be one of spectrum, polarization, scan, couple, farfield");

    if (auto it = root.find("shapes"); it != root.end()) {
        if (!it->is_array()) cfg_fail("shapes", "expected an array of shape objects");
        for (std::size_t i = 0; i < it->size(); ++i)
            cfg.shapes.push_back(
                detail::parse_shape((*it)[i], "shapes[" + std::to_string(i) + "]"));
    }
    if (auto it = root.find("material"); it != root.end())
        cfg.material = detail::parse_material(*it, "material");
    if (auto it = root.find("grid"); it != root.end()) cfg.grid = detail::parse_grid(*it, "grid");
    if (auto it = root.find("peaks"); it != root.end()) {
        detail::require_keys(*it, "peaks", {"prominence_frac"});
        cfg.prominence_frac = detail::opt_num(*it, "peaks", "prominence_frac", cfg.prominence_frac);
        if (!(cfg.prominence_frac > 0) || cfg.prominence_frac >= 1)
            cfg_fail("peaks.prominence_frac", "must lie in (0, 1)");
    }
    if (auto it = root.find("distances"); it != root.end()) {
        if (!it->is_array() || it->empty())
            cfg_fail("distances", "expected a nonempty array of positive numbers");
        cfg.distances.clear();
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = "distances[" + std::to_string(i) + "]";
            const double d = detail::as_num((*it)[i], p);
            if (!(d > 0)) cfg_fail(p, "must be positive");
            cfg.distances.push_back(d);
        }
    }
    if (auto it = root.find("polarization"); it != root.end()) {
        detail::require_keys(*it, "polarization", {"lambda"});
        auto lam = it->find("lambda");
        if (lam == it->end()) cfg_fail("polarization", "missing required key 'lambda'");
        cfg.pol_lambda = detail::as_complex(*lam, "polarization.lambda");
        cfg.has_pol_lambda = true;
    }
    if (auto it = root.find("farfield"); it != root.end()) {
        cfg.farfield = detail::parse_farfield(*it, "farfield");
        cfg.has_farfield = true;
    }
    if (auto it = root.find("solver"); it != root.end())
        cfg.solver = detail::parse_solver(*it, "solver");
    if (auto it = root.find("output_dir"); it != root.end())
        cfg.output_dir = detail::as_str(*it, "output_dir");
    cfg.gnuplot = detail::opt_bool(root, "", "gnuplot", cfg.gnuplot);

    // Per-command structural requirements, checked before any computation.
    switch (cfg.command) {
        case Command::spectrum:
        case Command::scan:
            if (cfg.shapes.empty()) cfg_fail("shapes", "at least one shape is required");
            break;
        case Command::polarization:
            if (cfg.shapes.empty()) cfg_fail("shapes", "at least one shape is required");
            if (!cfg.has_pol_lambda)
                cfg_fail("polarization", "the polarization command requires polarization.lambda");
            break;
        case Command::couple:
            if (cfg.shapes.size() != 2)
                cfg_fail("shapes", "the couple command requires exactly two shapes");
            break;
        case Command::farfield:
            if (!cfg.has_farfield)
                cfg_fail("farfield", "the farfield command requires a farfield block");
            break;
    }
    return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config_json(root);
}

inline RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

}  // namespace plasmon
