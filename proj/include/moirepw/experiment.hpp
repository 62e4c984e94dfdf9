#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "moirepw/analysis.hpp"
#include "moirepw/config.hpp"
#include "moirepw/io.hpp"

namespace moirepw {

// Lazily built computation chain shared by the subcommands. Everything hangs
// off one validated config; repeated stages are computed once.
class Pipeline {
  public:
    explicit Pipeline(ExperimentConfig cfg);

    const ExperimentConfig& config() const { return cfg_; }

    const LatticeSpec& lattice1() const { return lat1_; }
    const LatticeSpec& lattice2() const { return lat2_; }
    const LatticeSpec& recip1() const { return recip1_; }
    const LatticeSpec& recip2() const { return recip2_; }
    const FourierPotential& v1();
    const FourierPotential& v2();
    const BasisSet& basis();
    const HamiltonianMatrix& hamiltonian();
    const LandscapeCoefficients& landscape_coeffs();
    const Spectrum& spectrum(double required_e_max);

    double grid_h() const;
    RealSpaceGrid field_grid() const;
    RealSpaceGrid weyl_grid() const;

    ScalarField u_field(const RealSpaceGrid& grid);
    EffectivePotentialResult veff_field(const RealSpaceGrid& grid);
    ScalarField potential_field(const RealSpaceGrid& grid);
    ScalarField density_field(const RealSpaceGrid& grid);
    double s_norm() const;

    double prominence_floor(const ScalarField& field) const;
    double min_separation() const;

    std::vector<std::string> advisory_warnings() const;

  private:
    ExperimentConfig cfg_;
    LatticeSpec lat1_, lat2_, recip1_, recip2_;
    std::optional<FourierPotential> v1_, v2_;
    std::optional<BasisSet> basis_;
    std::optional<HamiltonianMatrix> h_;
    std::optional<LandscapeCoefficients> coeffs_;
    std::optional<Spectrum> spectrum_;
};

// Executes one subcommand, writing CSV/JSON artifacts plus manifest.json
// into out_dir. Paths of files written so far are appended to `written` as
// they land, so a failing run can be cleaned up by the caller.
void run_subcommand(const std::string& subcommand, const ExperimentConfig& cfg,
                    const std::filesystem::path& out_dir,
                    std::vector<std::filesystem::path>& written);

const std::vector<std::string>& known_subcommands();

} // namespace moirepw
