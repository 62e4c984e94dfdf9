#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "moirepw/landscape.hpp"
#include "moirepw/potential.hpp"
#include "moirepw/weyl.hpp"

namespace moirepw {

struct PotentialSpec {
    enum Type { gaussian, modes } type = gaussian;
    double s = 1.0;
    double gamma = 0.05;
    double eps_cut = 1e-12;
    std::vector<std::pair<IVec, Complex>> mode_entries;
};

// Validated experiment parameters; `raw` keeps the flat key-value view for
// the manifest echo.
struct ExperimentConfig {
    int dim = 1;

    double l1_length = 0.0, l2_length = 0.0;          // 1D
    Eigen::Matrix2d a1 = Eigen::Matrix2d::Identity(); // 2D, columns are vectors
    Eigen::Matrix2d a2 = Eigen::Matrix2d::Identity();
    bool lattice2_from_1 = false;
    double angle1_deg = 0.0, angle2_deg = 0.0;

    PotentialSpec pot1, pot2;

    double w = 0.0, l = 0.0;
    std::size_t basis_cap = 200000;

    RVec grid_lo = RVec::Zero(), grid_hi = RVec::Zero();
    double grid_h = 0.0;                              // <= 0: default pi/(4W)
    bool has_weyl_window = false;
    RVec weyl_lo = RVec::Zero(), weyl_hi = RVec::Zero();

    bool has_mu = false;
    double mu = 0.0, beta = 100.0;
    double s_norm = 0.0;                              // <= 0: omega_d L^d/(2pi)^d
    double weight_floor = 1e-12;

    double energy_lo = 0.0, energy_hi = 30.0;
    std::size_t energy_n = 400;
    KineticConvention convention = KineticConvention::full;
    long mc_samples = 200000;
    bool fit_lo_auto = true;
    double fit_e_lo = 0.0, fit_e_hi = 30.0;

    bool prom_auto = true;
    double prominence_floor = 0.0;
    bool sep_auto = true;
    double min_separation = 0.0;
    double match_radius = 0.5;
    std::size_t match_k = 18;

    SolveMethod method = SolveMethod::iterative;
    double solver_tol = 1e-10;
    int solver_max_iter = 0;

    std::string spectrum_mode = "auto";               // auto | full | partial
    double spectrum_e_max = 0.0;

    double veff_cap = 1e6;
    std::uint64_t seed = 12345;
    bool dump_matrix = false;

    std::map<std::string, std::string> raw;
};

using FlatConfig = std::map<std::string, std::string>;

// INI-style grammar: "[section]" lines set a prefix, "key = value" lines add
// "section.key" entries, '#' starts a comment. Duplicate keys are rejected.
FlatConfig parse_config_text(const std::string& text);
FlatConfig parse_config_file(const std::string& path);

// "key=value" command-line override.
void apply_override(FlatConfig& flat, const std::string& assignment);

// Schema validation: unknown keys and missing required keys raise ConfigError
// naming the key.
ExperimentConfig validate_config(const FlatConfig& flat);

// Canned recipes for the canned example experiments, as flat configs that can
// be overridden with --set.
FlatConfig example1_recipe();
FlatConfig example2_recipe();

} // namespace moirepw
