#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "moirepw/analysis.hpp"
#include "moirepw/grid.hpp"
#include "moirepw/spectrum.hpp"

namespace moirepw {

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& bytes);
std::string file_hash_hex(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// Field CSV: header "x,value" or "x,y,value", rows in grid (row-major) order.
std::string field_csv(const ScalarField& field);

// Spectrum CSV: "j,lambda".
std::string spectrum_csv(const Spectrum& spectrum);

// IDoS CSV: "E,N_counting,N_weyl_standard,N_weyl_effective,c_fit_applied";
// the raw curves plus the fitted constant for the effective curve.
std::string idos_csv(const IDoSCurve& counting, const IDoSCurve& weyl_standard,
                     const IDoSCurve& weyl_effective, double c_fit);

// Extrema CSV: "rank,x[,y],value".
std::string extrema_csv(const ExtremaList& list, int dim);

// Landscape bound diagnostics CSV: "j,lambda,max_ratio".
std::string bound_report_csv(const std::vector<BoundRatio>& report);

// Hamiltonian dump, coordinate format "i j re im", 0-based.
std::string matrix_coord_dump(const struct HamiltonianMatrix& h);

} // namespace moirepw
