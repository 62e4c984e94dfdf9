#include "moirepw/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace moirepw {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long n = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as an integer");
    }
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v,
                                  std::size_t expected) {
    std::istringstream in(v);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_double(key, tok));
    if (out.size() != expected)
        throw ConfigError("config key '" + key + "': expected " + std::to_string(expected) +
                          " numbers, got " + std::to_string(out.size()));
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a bool");
}

// Allowed keys; validation walks the flat map against this list.
const std::set<std::string>& schema() {
    static const std::set<std::string> keys = {
        "dim", "seed", "veff_cap", "dump_matrix",
        "lattice1.length", "lattice1.matrix", "lattice1.angle_deg",
        "lattice2.length", "lattice2.matrix", "lattice2.angle_deg", "lattice2.from_lattice1",
        "potential1.type", "potential1.s", "potential1.gamma", "potential1.eps_cut",
        "potential1.modes",
        "potential2.type", "potential2.s", "potential2.gamma", "potential2.eps_cut",
        "potential2.modes",
        "basis.w", "basis.l", "basis.cap",
        "grid.lo", "grid.hi", "grid.h",
        "weyl.convention", "weyl.omega_lo", "weyl.omega_hi", "weyl.mc_samples",
        "solver.method", "solver.tol", "solver.max_iter",
        "spectrum.mode", "spectrum.e_max",
        "density.mu", "density.beta", "density.s_norm", "density.weight_floor",
        "energy.lo", "energy.hi", "energy.n",
        "fit.e_lo", "fit.e_hi",
        "extrema.prominence_floor", "extrema.min_separation", "extrema.match_radius",
        "extrema.k",
    };
    return keys;
}

std::vector<std::pair<IVec, Complex>> parse_modes(const std::string& key, const std::string& v,
                                                  int dim) {
    std::vector<std::pair<IVec, Complex>> entries;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t expected = dim == 1 ? 3 : 4;
        std::vector<double> nums = parse_doubles(key, item, expected);
        IVec n{};
        n[0] = static_cast<int>(std::llround(nums[0]));
        if (dim == 2) n[1] = static_cast<int>(std::llround(nums[1]));
        Complex c(nums[expected - 2], nums[expected - 1]);
        entries.emplace_back(n, c);
    }
    if (entries.empty()) throw ConfigError("config key '" + key + "': no mode entries");
    return entries;
}

} // namespace

FlatConfig parse_config_text(const std::string& text) {
    FlatConfig flat;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (!flat.emplace(key, value).second)
            throw ConfigError("config: duplicate key '" + key + "'");
    }
    return flat;
}

FlatConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(FlatConfig& flat, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    flat[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

namespace {

PotentialSpec validate_potential(const FlatConfig& flat, const std::string& prefix, int dim) {
    PotentialSpec spec;
    auto get = [&](const std::string& k) -> const std::string* {
        auto it = flat.find(prefix + "." + k);
        return it == flat.end() ? nullptr : &it->second;
    };
    const std::string* type = get("type");
    if (!type) throw ConfigError("missing required key '" + prefix + ".type'");
    if (const std::string* e = get("eps_cut")) spec.eps_cut = parse_double(prefix + ".eps_cut", *e);
    if (*type == "gaussian") {
        spec.type = PotentialSpec::gaussian;
        const std::string* s = get("s");
        const std::string* g = get("gamma");
        if (!s) throw ConfigError("missing required key '" + prefix + ".s'");
        if (!g) throw ConfigError("missing required key '" + prefix + ".gamma'");
        spec.s = parse_double(prefix + ".s", *s);
        spec.gamma = parse_double(prefix + ".gamma", *g);
        if (get("modes"))
            throw ConfigError("config key '" + prefix + ".modes' not allowed for type gaussian");
    } else if (*type == "modes") {
        spec.type = PotentialSpec::modes;
        const std::string* m = get("modes");
        if (!m) throw ConfigError("missing required key '" + prefix + ".modes'");
        for (const char* k : {"s", "gamma"})
            if (get(k))
                throw ConfigError("config key '" + prefix + "." + k +
                                  "' not allowed for type modes");
        spec.mode_entries = parse_modes(prefix + ".modes", *m, dim);
        spec.eps_cut = 0.0;
        if (const std::string* e = get("eps_cut"))
            spec.eps_cut = parse_double(prefix + ".eps_cut", *e);
    } else {
        throw ConfigError("config key '" + prefix + ".type': expected gaussian or modes");
    }
    return spec;
}

} // namespace

ExperimentConfig validate_config(const FlatConfig& flat) {
    for (const auto& [key, value] : flat) {
        (void)value;
        if (!schema().count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    auto find = [&](const std::string& k) -> const std::string* {
        auto it = flat.find(k);
        return it == flat.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& k) -> const std::string& {
        const std::string* v = find(k);
        if (!v) throw ConfigError("missing required key '" + k + "'");
        return *v;
    };

    ExperimentConfig cfg;
    cfg.raw = flat;
    cfg.dim = static_cast<int>(parse_long("dim", require("dim")));
    if (cfg.dim != 1 && cfg.dim != 2) throw ConfigError("config key 'dim': must be 1 or 2");

    if (cfg.dim == 1) {
        cfg.l1_length = parse_double("lattice1.length", require("lattice1.length"));
        cfg.l2_length = parse_double("lattice2.length", require("lattice2.length"));
        for (const char* k : {"lattice1.matrix", "lattice2.matrix", "lattice1.angle_deg",
                              "lattice2.angle_deg", "lattice2.from_lattice1"})
            if (find(k)) throw ConfigError(std::string("config key '") + k + "' requires dim=2");
    } else {
        auto m1 = parse_doubles("lattice1.matrix", require("lattice1.matrix"), 4);
        cfg.a1 << m1[0], m1[1], m1[2], m1[3];
        if (const std::string* a = find("lattice1.angle_deg"))
            cfg.angle1_deg = parse_double("lattice1.angle_deg", *a);
        cfg.lattice2_from_1 =
            find("lattice2.from_lattice1") &&
            parse_bool("lattice2.from_lattice1", *find("lattice2.from_lattice1"));
        if (cfg.lattice2_from_1) {
            cfg.a2 = cfg.a1;
        } else {
            auto m2 = parse_doubles("lattice2.matrix", require("lattice2.matrix"), 4);
            cfg.a2 << m2[0], m2[1], m2[2], m2[3];
        }
        if (const std::string* a = find("lattice2.angle_deg"))
            cfg.angle2_deg = parse_double("lattice2.angle_deg", *a);
        for (const char* k : {"lattice1.length", "lattice2.length"})
            if (find(k)) throw ConfigError(std::string("config key '") + k + "' requires dim=1");
    }

    cfg.pot1 = validate_potential(flat, "potential1", cfg.dim);
    cfg.pot2 = validate_potential(flat, "potential2", cfg.dim);

    cfg.w = parse_double("basis.w", require("basis.w"));
    cfg.l = parse_double("basis.l", require("basis.l"));
    if (const std::string* c = find("basis.cap"))
        cfg.basis_cap = static_cast<std::size_t>(parse_long("basis.cap", *c));

    auto lo = parse_doubles("grid.lo", require("grid.lo"), cfg.dim);
    auto hi = parse_doubles("grid.hi", require("grid.hi"), cfg.dim);
    cfg.grid_lo(0) = lo[0];
    cfg.grid_hi(0) = hi[0];
    if (cfg.dim == 2) {
        cfg.grid_lo(1) = lo[1];
        cfg.grid_hi(1) = hi[1];
    }
    if (const std::string* h = find("grid.h")) cfg.grid_h = parse_double("grid.h", *h);

    if (const std::string* c = find("weyl.convention")) {
        if (*c == "full") cfg.convention = KineticConvention::full;
        else if (*c == "half") cfg.convention = KineticConvention::half;
        else throw ConfigError("config key 'weyl.convention': expected full or half");
    }
    const std::string* wlo = find("weyl.omega_lo");
    const std::string* whi = find("weyl.omega_hi");
    if ((wlo == nullptr) != (whi == nullptr))
        throw ConfigError("weyl.omega_lo and weyl.omega_hi must be given together");
    if (wlo) {
        cfg.has_weyl_window = true;
        auto l2 = parse_doubles("weyl.omega_lo", *wlo, cfg.dim);
        auto h2 = parse_doubles("weyl.omega_hi", *whi, cfg.dim);
        cfg.weyl_lo(0) = l2[0];
        cfg.weyl_hi(0) = h2[0];
        if (cfg.dim == 2) {
            cfg.weyl_lo(1) = l2[1];
            cfg.weyl_hi(1) = h2[1];
        }
    }
    if (const std::string* n = find("weyl.mc_samples"))
        cfg.mc_samples = parse_long("weyl.mc_samples", *n);

    if (const std::string* m = find("solver.method")) {
        if (*m == "iterative") cfg.method = SolveMethod::iterative;
        else if (*m == "dense") cfg.method = SolveMethod::dense;
        else throw ConfigError("config key 'solver.method': expected iterative or dense");
    }
    if (const std::string* t = find("solver.tol")) cfg.solver_tol = parse_double("solver.tol", *t);
    if (const std::string* i = find("solver.max_iter"))
        cfg.solver_max_iter = static_cast<int>(parse_long("solver.max_iter", *i));

    if (const std::string* m = find("spectrum.mode")) {
        if (*m != "auto" && *m != "full" && *m != "partial")
            throw ConfigError("config key 'spectrum.mode': expected auto, full or partial");
        cfg.spectrum_mode = *m;
    }
    if (const std::string* e = find("spectrum.e_max"))
        cfg.spectrum_e_max = parse_double("spectrum.e_max", *e);

    if (const std::string* m = find("density.mu")) {
        cfg.has_mu = true;
        cfg.mu = parse_double("density.mu", *m);
    }
    if (const std::string* b = find("density.beta")) cfg.beta = parse_double("density.beta", *b);
    if (const std::string* s = find("density.s_norm"))
        cfg.s_norm = parse_double("density.s_norm", *s);
    if (const std::string* f = find("density.weight_floor"))
        cfg.weight_floor = parse_double("density.weight_floor", *f);

    if (const std::string* e = find("energy.lo")) cfg.energy_lo = parse_double("energy.lo", *e);
    if (const std::string* e = find("energy.hi")) cfg.energy_hi = parse_double("energy.hi", *e);
    if (const std::string* e = find("energy.n"))
        cfg.energy_n = static_cast<std::size_t>(parse_long("energy.n", *e));

    if (const std::string* e = find("fit.e_lo")) {
        if (*e == "auto") {
            cfg.fit_lo_auto = true;
        } else {
            cfg.fit_lo_auto = false;
            cfg.fit_e_lo = parse_double("fit.e_lo", *e);
        }
    }
    cfg.fit_e_hi = cfg.energy_hi;
    if (const std::string* e = find("fit.e_hi")) cfg.fit_e_hi = parse_double("fit.e_hi", *e);

    if (const std::string* p = find("extrema.prominence_floor")) {
        if (*p == "auto") {
            cfg.prom_auto = true;
        } else {
            cfg.prom_auto = false;
            cfg.prominence_floor = parse_double("extrema.prominence_floor", *p);
        }
    }
    if (const std::string* s = find("extrema.min_separation")) {
        if (*s == "auto") {
            cfg.sep_auto = true;
        } else {
            cfg.sep_auto = false;
            cfg.min_separation = parse_double("extrema.min_separation", *s);
        }
    }
    if (const std::string* r = find("extrema.match_radius"))
        cfg.match_radius = parse_double("extrema.match_radius", *r);
    if (const std::string* k = find("extrema.k"))
        cfg.match_k = static_cast<std::size_t>(parse_long("extrema.k", *k));

    if (const std::string* c = find("veff_cap")) cfg.veff_cap = parse_double("veff_cap", *c);
    if (const std::string* s = find("seed"))
        cfg.seed = static_cast<std::uint64_t>(parse_long("seed", *s));
    if (const std::string* d = find("dump_matrix"))
        cfg.dump_matrix = parse_bool("dump_matrix", *d);

    return cfg;
}

FlatConfig example1_recipe() {
    return parse_config_text(R"(# canned 1D incommensurate bilayer example
dim = 1
seed = 12345

[lattice1]
length = 2.0

[lattice2]
length = 1.2360679774997896964091736687747   # sqrt(5) - 1

[potential1]
type = gaussian
s = 3.0
gamma = 0.05

[potential2]
type = gaussian
s = 2.0
gamma = 0.05

[basis]
w = 50
l = 200

[grid]
lo = 0
hi = 60

[weyl]
convention = full
omega_lo = 0
omega_hi = 30

[density]
mu = 3.8
beta = 100

[energy]
lo = 0
hi = 30
n = 400

[extrema]
match_radius = 0.5
k = 18
)");
}

FlatConfig example2_recipe() {
    return parse_config_text(R"(# canned 2D twisted bilayer example, 5 degrees
dim = 2
seed = 12345

[lattice1]
matrix = 1 1 -1.7320508075688772935274463415059 1.7320508075688772935274463415059

[lattice2]
from_lattice1 = true
angle_deg = 5

[potential1]
type = gaussian
s = 3.0
gamma = 0.05

[potential2]
type = gaussian
s = 2.0
gamma = 0.05

[basis]
w = 5
l = 20

[grid]
lo = 0 0
hi = 20 20

[weyl]
convention = full
omega_lo = 0 0
omega_hi = 8 8

[density]
mu = 0.5
beta = 100

[energy]
lo = 0
hi = 30
n = 400

[extrema]
match_radius = 0.5
k = 10
)");
}

} // namespace moirepw
