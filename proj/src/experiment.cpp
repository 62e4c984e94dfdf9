#include "moirepw/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moirepw {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

LatticeSpec build_lattice(const ExperimentConfig& cfg, int which) {
    if (cfg.dim == 1)
        return make_lattice_1d(which == 1 ? cfg.l1_length : cfg.l2_length);
    Eigen::MatrixXd a = which == 1 ? cfg.a1 : cfg.a2;
    LatticeSpec lat = make_lattice(2, a);
    double angle = which == 1 ? cfg.angle1_deg : cfg.angle2_deg;
    if (angle != 0.0) lat = rotate(lat, angle);
    return lat;
}

FourierPotential build_potential(const PotentialSpec& spec, const LatticeSpec& recip) {
    if (spec.type == PotentialSpec::gaussian)
        return gaussian_potential(recip, spec.s, spec.gamma, spec.eps_cut);
    return potential_from_modes(recip, spec.mode_entries, spec.eps_cut);
}

} // namespace

Pipeline::Pipeline(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
    lat1_ = build_lattice(cfg_, 1);
    lat2_ = build_lattice(cfg_, 2);
    recip1_ = reciprocal(lat1_);
    recip2_ = reciprocal(lat2_);
}

const FourierPotential& Pipeline::v1() {
    if (!v1_) v1_ = build_potential(cfg_.pot1, recip1_);
    return *v1_;
}

const FourierPotential& Pipeline::v2() {
    if (!v2_) v2_ = build_potential(cfg_.pot2, recip2_);
    return *v2_;
}

const BasisSet& Pipeline::basis() {
    if (!basis_) basis_ = build_basis(recip1_, recip2_, cfg_.w, cfg_.l, cfg_.basis_cap);
    return *basis_;
}

const HamiltonianMatrix& Pipeline::hamiltonian() {
    if (!h_) h_ = assemble(basis(), v1(), v2());
    return *h_;
}

const LandscapeCoefficients& Pipeline::landscape_coeffs() {
    if (!coeffs_)
        coeffs_ = solve_landscape(hamiltonian(), basis(), cfg_.method, cfg_.solver_tol,
                                  cfg_.solver_max_iter);
    return *coeffs_;
}

const Spectrum& Pipeline::spectrum(double required_e_max) {
    bool want_full = cfg_.spectrum_mode == "full" ||
                     (cfg_.spectrum_mode == "auto" && basis().size() <= 8000);
    if (spectrum_) {
        if (spectrum_->mode.kind == EigenMode::full || spectrum_->mode.e_max >= required_e_max)
            return *spectrum_;
        spectrum_.reset();
    }
    if (want_full) {
        spectrum_ = eigensolve(hamiltonian(), EigenMode::full_mode());
    } else {
        double e_max = cfg_.spectrum_mode == "partial" && cfg_.spectrum_e_max > 0.0
                           ? std::max(cfg_.spectrum_e_max, required_e_max)
                           : required_e_max;
        spectrum_ = eigensolve(hamiltonian(), EigenMode::partial_mode(e_max));
    }
    return *spectrum_;
}

double Pipeline::grid_h() const {
    return cfg_.grid_h > 0.0 ? cfg_.grid_h : std::numbers::pi / (4.0 * cfg_.w);
}

RealSpaceGrid Pipeline::field_grid() const {
    if (cfg_.dim == 1) return make_grid_1d(cfg_.grid_lo(0), cfg_.grid_hi(0), grid_h());
    return make_grid_2d(cfg_.grid_lo, cfg_.grid_hi, grid_h());
}

RealSpaceGrid Pipeline::weyl_grid() const {
    if (!cfg_.has_weyl_window) return field_grid();
    if (cfg_.dim == 1) return make_grid_1d(cfg_.weyl_lo(0), cfg_.weyl_hi(0), grid_h());
    return make_grid_2d(cfg_.weyl_lo, cfg_.weyl_hi, grid_h());
}

ScalarField Pipeline::u_field(const RealSpaceGrid& grid) {
    return eval_field(landscape_coeffs().u_hat, basis(), grid, FieldLabel::u);
}

EffectivePotentialResult Pipeline::veff_field(const RealSpaceGrid& grid) {
    return effective_potential(u_field(grid), cfg_.veff_cap);
}

ScalarField Pipeline::potential_field(const RealSpaceGrid& grid) {
    ScalarField f;
    f.grid = grid;
    f.label = FieldLabel::potential;
    f.values = eval_potential({&v1(), &v2()}, grid.points());
    return f;
}

double Pipeline::s_norm() const {
    return cfg_.s_norm > 0.0 ? cfg_.s_norm : default_s_norm(cfg_.dim, cfg_.l);
}

ScalarField Pipeline::density_field(const RealSpaceGrid& grid) {
    if (!cfg_.has_mu) throw ConfigError("missing required key 'density.mu'");
    double ceiling = cfg_.mu + 30.0 / cfg_.beta;
    const Spectrum& s = spectrum(ceiling);
    return electron_density(s, basis(), grid, cfg_.mu, cfg_.beta, s_norm(), cfg_.weight_floor);
}

double Pipeline::prominence_floor(const ScalarField& field) const {
    if (!cfg_.prom_auto) return cfg_.prominence_floor;
    auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
    // Density bumps at shallow wells are set by tunneling tails and sit
    // orders of magnitude below the deepest peak; 1e-4 of the range still
    // clears the synthesis noise floor by four decades. Other fields keep
    // the ripple-filtering 1% default.
    double rel = field.label == FieldLabel::density ? 1e-4 : 1e-2;
    return rel * (*hi - *lo);
}

double Pipeline::min_separation() const {
    if (!cfg_.sep_auto) return cfg_.min_separation;
    return 2.0 * std::numbers::pi / cfg_.w;
}

std::vector<std::string> Pipeline::advisory_warnings() const {
    std::vector<std::string> warnings;
    IncommensurabilityReport direct = check_incommensurate(lat1_, lat2_);
    IncommensurabilityReport recip = check_incommensurate(recip1_, recip2_);
    if (direct.verdict != Commensurability::incommensurate)
        warnings.push_back("direct lattices: " + direct.describe());
    if (recip.verdict != Commensurability::incommensurate)
        warnings.push_back("reciprocal lattices: " + recip.describe());
    return warnings;
}

namespace {

struct Runner {
    Pipeline pipe;
    fs::path out_dir;
    std::vector<fs::path>& written;
    json manifest;
    json timings = json::object();
    json results = json::object();
    std::vector<std::string> warnings;

    Runner(const ExperimentConfig& cfg, const fs::path& dir, std::vector<fs::path>& files)
        : pipe(cfg), out_dir(dir), written(files) {
        fs::create_directories(out_dir);
        warnings = pipe.advisory_warnings();
    }

    void emit(const std::string& name, const std::string& content) {
        fs::path path = out_dir / name;
        write_text_file(path, content);
        if (std::find(written.begin(), written.end(), path) == written.end())
            written.push_back(path);
    }

    template <typename F>
    void timed(const std::string& stage, F&& f) {
        double t0 = now_ms();
        f();
        timings[stage] = now_ms() - t0;
    }

    void maybe_dump_matrix() {
        if (!pipe.config().dump_matrix) return;
        emit("hamiltonian_coord.txt", matrix_coord_dump(pipe.hamiltonian()));
    }

    void do_landscape() {
        RealSpaceGrid grid = pipe.field_grid();
        timed("landscape", [&] {
            EffectivePotentialResult veff = pipe.veff_field(grid);
            if (veff.clamped > 0 || veff.nonpositive > 0)
                warnings.push_back("effective potential: " + std::to_string(veff.clamped) +
                                   " clamped and " + std::to_string(veff.nonpositive) +
                                   " nonpositive u samples");
            emit("u.csv", field_csv(pipe.u_field(grid)));
            emit("veff.csv", field_csv(veff.field));
            emit("potential.csv", field_csv(pipe.potential_field(grid)));
            results["landscape"] = {
                {"solver_iterations", pipe.landscape_coeffs().stats.iterations},
                {"solver_residual", pipe.landscape_coeffs().stats.residual},
                {"veff_clamped", veff.clamped},
                {"veff_nonpositive", veff.nonpositive},
            };
        });
    }

    void do_spectrum() {
        timed("spectrum", [&] {
            const Spectrum& s = pipe.spectrum(pipe.config().energy_hi);
            emit("eigenvalues.csv", spectrum_csv(s));
            results["spectrum"] = {{"count", s.count()}};
        });
    }

    void do_density() {
        timed("density", [&] {
            emit("density.csv", field_csv(pipe.density_field(pipe.field_grid())));
            results["density"] = {{"s_norm", pipe.s_norm()},
                                  {"mu", pipe.config().mu},
                                  {"beta", pipe.config().beta}};
        });
    }

    void do_idos() {
        timed("idos", [&] {
            const ExperimentConfig& cfg = pipe.config();
            std::vector<double> energies = linspace(cfg.energy_lo, cfg.energy_hi, cfg.energy_n);
            const Spectrum& s = pipe.spectrum(cfg.energy_hi);
            IDoSCurve counting = counting_function(s, energies);

            RealSpaceGrid omega = pipe.weyl_grid();
            ScalarField vsum = pipe.potential_field(omega);
            EffectivePotentialResult veff = pipe.veff_field(omega);
            WeylConfig wc{cfg.convention};
            IDoSCurve n_std = weyl_idos(vsum, energies, wc);
            IDoSCurve n_eff = weyl_idos(veff.field, energies, wc);

            double fit_lo = cfg.fit_lo_auto
                                ? *std::min_element(veff.field.values.begin(),
                                                    veff.field.values.end())
                                : cfg.fit_e_lo;
            ScaleFit fit_eff = fit_scale(counting, n_eff, fit_lo, cfg.fit_e_hi);
            ScaleFit fit_std = fit_scale(counting, n_std, fit_lo, cfg.fit_e_hi);

            emit("idos.csv", idos_csv(counting, n_std, n_eff, fit_eff.c));
            results["idos"] = {
                {"convention", convention_name(cfg.convention)},
                {"fit_window", {fit_lo, cfg.fit_e_hi}},
                {"c_eff", fit_eff.c},
                {"misfit_eff", fit_eff.misfit},
                {"c_std", fit_std.c},
                {"misfit_std", fit_std.misfit},
                {"eigenvalue_count", s.count()},
            };
        });
    }

    void do_minima() {
        timed("minima", [&] {
            EffectivePotentialResult veff = pipe.veff_field(pipe.field_grid());
            ExtremaList minima = local_minima(veff.field, pipe.prominence_floor(veff.field),
                                              pipe.min_separation());
            emit("veff_minima.csv", extrema_csv(minima, pipe.config().dim));
            results["minima"] = {
                {"count", minima.entries.size()},
                {"prominence_floor", pipe.prominence_floor(veff.field)},
                {"min_separation", pipe.min_separation()},
            };
        });
    }

    void do_compare() {
        timed("compare", [&] {
            const ExperimentConfig& cfg = pipe.config();
            RealSpaceGrid grid = pipe.field_grid();
            EffectivePotentialResult veff = pipe.veff_field(grid);
            ScalarField rho = pipe.density_field(grid);
            ExtremaList minima = local_minima(veff.field, pipe.prominence_floor(veff.field),
                                              pipe.min_separation());
            ExtremaList maxima = local_maxima(rho, pipe.prominence_floor(rho),
                                              pipe.min_separation());
            std::size_t k = std::min(cfg.match_k, minima.entries.size());
            MatchReport report = match_extrema(minima, maxima, cfg.match_radius, k);

            emit("veff_minima.csv", extrema_csv(minima, cfg.dim));
            emit("density_maxima.csv", extrema_csv(maxima, cfg.dim));

            json pairs = json::array();
            for (const MatchPair& p : report.pairs)
                pairs.push_back({{"min_rank", p.min_rank},
                                 {"max_rank", p.max_rank},
                                 {"distance", p.distance}});
            json match = {
                {"pairs", pairs},
                {"matched_fraction_first_k", report.matched_fraction_first_k},
                {"order_agreement", report.order_agreement},
                {"k", report.k},
                {"k_requested", cfg.match_k},
                {"match_radius", cfg.match_radius},
                {"unmatched_maxima", report.unmatched_maxima},
            };
            emit("match.json", match.dump(2) + "\n");

            const Spectrum& s = pipe.spectrum(cfg.mu + 30.0 / cfg.beta);
            std::size_t j_count = std::min<std::size_t>(10, s.count());
            auto bound = landscape_bound_report(s, pipe.basis(), pipe.u_field(grid), j_count);
            emit("bound_report.csv", bound_report_csv(bound));
            results["compare"] = match;
        });
    }

    void run(const std::string& sub) {
        if (sub == "landscape") do_landscape();
        else if (sub == "spectrum") do_spectrum();
        else if (sub == "density") do_density();
        else if (sub == "idos") do_idos();
        else if (sub == "minima") do_minima();
        else if (sub == "compare") do_compare();
        else if (sub == "example1" || sub == "example2") {
            do_landscape();
            do_idos();
            do_density();
            do_minima();
            do_compare();
        } else {
            throw ConfigError("unknown subcommand '" + sub + "'");
        }
        maybe_dump_matrix();
        finish(sub);
    }

    void finish(const std::string& sub) {
        manifest["tool"] = "moirepw";
        manifest["version"] = kVersion;
        manifest["versions"] = {
            {"compiler", __VERSION__},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
        };
        manifest["subcommand"] = sub;
        manifest["status"] = "ok";
#ifdef _OPENMP
        manifest["threads"] = omp_get_max_threads();
#else
        manifest["threads"] = 1;
#endif
        manifest["config"] = pipe.config().raw;
        json derived = {
            {"grid_h", pipe.grid_h()},
            {"basis_size", pipe.basis().size()},
            {"s_norm_default", default_s_norm(pipe.config().dim, pipe.config().l)},
        };
        manifest["derived"] = derived;
        manifest["warnings"] = warnings;
        manifest["timings_ms"] = timings;
        manifest["results"] = results;
        json outputs = json::array();
        for (const fs::path& p : written) {
            if (p.filename() == "manifest.json") continue;
            outputs.push_back({{"file", p.filename().string()},
                               {"fnv1a64", file_hash_hex(p)}});
        }
        manifest["outputs"] = outputs;
        fs::path mpath = out_dir / "manifest.json";
        write_text_file(mpath, manifest.dump(2) + "\n");
        written.push_back(mpath);
    }
};

} // namespace

const std::vector<std::string>& known_subcommands() {
    static const std::vector<std::string> subs = {"landscape", "spectrum", "density", "idos",
                                                  "minima",    "compare",  "example1", "example2"};
    return subs;
}

void run_subcommand(const std::string& subcommand, const ExperimentConfig& cfg,
                    const fs::path& out_dir, std::vector<fs::path>& written) {
    Runner runner(cfg, out_dir, written);
    runner.run(subcommand);
}

} // namespace moirepw
