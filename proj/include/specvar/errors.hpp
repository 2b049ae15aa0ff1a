#pragma once

#include <stdexcept>
#include <string>

namespace specvar {

/// Root of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;

    /// Short category name used in CLI diagnostics ("DimensionError", ...).
    virtual const char* kind() const noexcept { return "Error"; }
};

#define SPECVAR_DEFINE_ERROR(Name)                                      \
    class Name : public Error                                           \
    {                                                                   \
    public:                                                             \
        using Error::Error;                                             \
        const char* kind() const noexcept override { return #Name; }    \
    }

// incompatible or out-of-range matrix dimensions
SPECVAR_DEFINE_ERROR(DimensionError);
// eigensolver / SVD failure or residual check failure
SPECVAR_DEFINE_ERROR(NumericalError);
// triangular / nilpotent structure expected but absent
SPECVAR_DEFINE_ERROR(ShapeError);
// scalar argument outside its admissible range
SPECVAR_DEFINE_ERROR(ParameterError);
// Hermitian input expected but absent
SPECVAR_DEFINE_ERROR(StructureError);
// a summand of a spectral functional diverges
SPECVAR_DEFINE_ERROR(DegenerateTermError);
// ratio undefined because the perturbation vanishes
SPECVAR_DEFINE_ERROR(DegenerateError);
// malformed matrix or report file
SPECVAR_DEFINE_ERROR(FormatError);

#undef SPECVAR_DEFINE_ERROR

} // namespace specvar
