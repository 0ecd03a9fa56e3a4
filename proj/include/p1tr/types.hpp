#ifndef P1TR_TYPES_HPP
#define P1TR_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace p1tr {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline const cplx I{0.0, 1.0};
inline const cplx TWO_PI_I{0.0, 2.0 * PI};

// All recoverable failures surface as subclasses of Error so callers can
// distinguish "bad input" from "algorithm gave up" at the CLI boundary.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input: the request itself is malformed or outside the domain.
struct InputError : Error {
    using Error::Error;
};

// Numerical failure: the input looked fine but an algorithm did not reach
// its target accuracy or did not converge.
struct NumericalError : Error {
    using Error::Error;
};

struct DegenerateCurve : InputError {
    using InputError::InputError;
};
struct BadModulus : InputError {
    using InputError::InputError;
};
struct LatticePoint : InputError {
    using InputError::InputError;
};
struct BranchPointInput : InputError {
    using InputError::InputError;
};
struct DiagonalPole : InputError {
    using InputError::InputError;
};
struct RamificationPole : InputError {
    using InputError::InputError;
};
struct BudgetExceeded : InputError {
    using InputError::InputError;
};
struct MissingDerivativeTable : InputError {
    using InputError::InputError;
};
struct UnlabeledCurve : InputError {
    using InputError::InputError;
};
struct PathCrossesCut : InputError {
    using InputError::InputError;
};

// Filesystem failure while writing an output artifact.
struct IoError : Error {
    using Error::Error;
};

struct QuadratureFailure : NumericalError {
    using NumericalError::NumericalError;
};
struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};
struct StallDetected : NumericalError {
    using NumericalError::NumericalError;
};
struct MaxStepsExceeded : NumericalError {
    using NumericalError::NumericalError;
};
struct AmbiguousLattice : NumericalError {
    using NumericalError::NumericalError;
};

inline double sq(double x) { return x * x; }
inline cplx sq(cplx x) { return x * x; }

}  // namespace p1tr

#endif
