#include "moirepw/errors.hpp"

namespace moirepw {

const char* error_name(const std::exception& e) {
    if (dynamic_cast<const SingularBasis*>(&e)) return "SingularBasis";
    if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const EmptyPotential*>(&e)) return "EmptyPotential";
    if (dynamic_cast<const ComplexResidue*>(&e)) return "ComplexResidue";
    if (dynamic_cast<const AmbiguousMatch*>(&e)) return "AmbiguousMatch";
    if (dynamic_cast<const BasisTooLarge*>(&e)) return "BasisTooLarge";
    if (dynamic_cast<const LatticeMismatch*>(&e)) return "LatticeMismatch";
    if (dynamic_cast<const SizeMismatch*>(&e)) return "SizeMismatch";
    if (dynamic_cast<const NotConverged*>(&e)) return "NotConverged";
    if (dynamic_cast<const IndefiniteMatrix*>(&e)) return "IndefiniteMatrix";
    if (dynamic_cast<const ConvergenceFailure*>(&e)) return "ConvergenceFailure";
    if (dynamic_cast<const IncompleteSpectrum*>(&e)) return "IncompleteSpectrum";
    if (dynamic_cast<const DegenerateFit*>(&e)) return "DegenerateFit";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
    return "Exception";
}

} // namespace moirepw
