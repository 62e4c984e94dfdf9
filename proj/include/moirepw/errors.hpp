#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace moirepw {

// Numerical failures map to CLI exit code 1, configuration problems to 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularBasis : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyPotential : Error { using Error::Error; };
struct ComplexResidue : Error { using Error::Error; };
struct AmbiguousMatch : Error { using Error::Error; };
struct BasisTooLarge : Error { using Error::Error; };
struct LatticeMismatch : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };
struct IndefiniteMatrix : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct IncompleteSpectrum : Error { using Error::Error; };
struct DegenerateFit : Error { using Error::Error; };

// Thrown by the iterative landscape solver; carries the best iterate so
// callers can inspect how far the solve got.
struct NotConverged : Error {
    NotConverged(const std::string& msg, int iterations, double residual,
                 std::vector<std::complex<double>> best = {})
        : Error(msg), iterations(iterations), residual(residual),
          best_iterate(std::move(best)) {}
    int iterations;
    double residual;
    std::vector<std::complex<double>> best_iterate;
};

struct ConfigError : Error { using Error::Error; };

const char* error_name(const std::exception& e);

} // namespace moirepw
