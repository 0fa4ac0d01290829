#ifndef TORIC_ERRORS_HPP
#define TORIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace toric {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed polytope, wrong preconditions, unsupported request.
/// The CLI maps these to exit status 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not produce a trustworthy result.
/// The CLI maps these to exit status 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

#define TORIC_DEFINE_ERROR(Name, Base)                                        \
    class Name : public Base {                                                \
    public:                                                                   \
        explicit Name(const std::string& what) : Base(#Name ": " + what) {}   \
    }

TORIC_DEFINE_ERROR(InvalidPolytope, ValidationError);
TORIC_DEFINE_ERROR(UnboundedOrEmpty, ValidationError);
TORIC_DEFINE_ERROR(NonSimple, ValidationError);
TORIC_DEFINE_ERROR(EmptyLattice, ValidationError);
TORIC_DEFINE_ERROR(MismatchedNormals, ValidationError);
TORIC_DEFINE_ERROR(K0NotFound, ValidationError);
TORIC_DEFINE_ERROR(PrematureK, ValidationError);
TORIC_DEFINE_ERROR(DegenerateN, ValidationError);
TORIC_DEFINE_ERROR(NotDelzant, ValidationError);
TORIC_DEFINE_ERROR(NotIntegral, ValidationError);
TORIC_DEFINE_ERROR(DimUnsupported, ValidationError);
TORIC_DEFINE_ERROR(OriginNotInterior, ValidationError);
TORIC_DEFINE_ERROR(InvalidPotential, ValidationError);

TORIC_DEFINE_ERROR(BoundaryPoint, NumericalError);
TORIC_DEFINE_ERROR(NotPositiveDefinite, NumericalError);
TORIC_DEFINE_ERROR(StepUnderflow, NumericalError);
TORIC_DEFINE_ERROR(ZeroDenominator, NumericalError);
TORIC_DEFINE_ERROR(MassSingular, NumericalError);
TORIC_DEFINE_ERROR(QuadratureTooCoarse, NumericalError);
TORIC_DEFINE_ERROR(NoConvergence, NumericalError);

#undef TORIC_DEFINE_ERROR

}  // namespace toric

#endif  // TORIC_ERRORS_HPP
