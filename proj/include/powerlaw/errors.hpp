#pragma once

#include <stdexcept>
#include <string>

namespace powerlaw {

// Every failure mode gets its own type so callers (and tests) can catch the
// exact condition instead of string-matching.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define POWERLAW_DEFINE_ERROR(Name)                  \
    struct Name : Error {                            \
        using Error::Error;                          \
    }

POWERLAW_DEFINE_ERROR(NonPositiveBase);
POWERLAW_DEFINE_ERROR(DivergentIntegral);
POWERLAW_DEFINE_ERROR(DivergentNorm);
POWERLAW_DEFINE_ERROR(DivergentNormalizer);
POWERLAW_DEFINE_ERROR(ZeroDensityAtSample);
POWERLAW_DEFINE_ERROR(EmptyBucket);
POWERLAW_DEFINE_ERROR(SpaceTooLarge);
POWERLAW_DEFINE_ERROR(PairGenerationFailed);
POWERLAW_DEFINE_ERROR(ResidualExceedsTol);
POWERLAW_DEFINE_ERROR(ThetaDependenceDetected);
POWERLAW_DEFINE_ERROR(PsiBiased);
POWERLAW_DEFINE_ERROR(ZeroCovariance);
POWERLAW_DEFINE_ERROR(BoundaryTheta);
POWERLAW_DEFINE_ERROR(ValidityViolated);
POWERLAW_DEFINE_ERROR(InsufficientProbes);
POWERLAW_DEFINE_ERROR(DegenerateSample);
POWERLAW_DEFINE_ERROR(NoisyFunction);
POWERLAW_DEFINE_ERROR(MaxSubdivisions);
POWERLAW_DEFINE_ERROR(NoInteriorMax);
POWERLAW_DEFINE_ERROR(AssertionFailed);

#undef POWERLAW_DEFINE_ERROR

}  // namespace powerlaw
