#ifndef WFL_ERRORS_HPP
#define WFL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wfl {

// Base class for all failures raised by the certification routines.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define WFL_DEFINE_ERROR(Name)                                        \
    struct Name : Error {                                             \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

WFL_DEFINE_ERROR(TruncationNotConverged);
WFL_DEFINE_ERROR(InvariantViolated);
WFL_DEFINE_ERROR(GapUnbounded);
WFL_DEFINE_ERROR(DomainTooSmall);
WFL_DEFINE_ERROR(NotConvex);
WFL_DEFINE_ERROR(NonSmoothWeight);
WFL_DEFINE_ERROR(MaximizerUnbounded);
WFL_DEFINE_ERROR(NormDiverged);
WFL_DEFINE_ERROR(InsufficientDerivatives);
WFL_DEFINE_ERROR(QuadratureNotConverged);
WFL_DEFINE_ERROR(GrowthViolated);
WFL_DEFINE_ERROR(FactorizationBoundViolated);
WFL_DEFINE_ERROR(DensityRecoveryFailed);
WFL_DEFINE_ERROR(SingularNodeSystem);
WFL_DEFINE_ERROR(DecayCertificateViolated);
WFL_DEFINE_ERROR(TailNotConverged);
WFL_DEFINE_ERROR(TermBoundViolated);
WFL_DEFINE_ERROR(ShiftLeavesDisk);
WFL_DEFINE_ERROR(ProbeInsideDisk);
WFL_DEFINE_ERROR(NoAvoidingInterval);
WFL_DEFINE_ERROR(BadCutoff);
WFL_DEFINE_ERROR(CoefficientOverflow);
WFL_DEFINE_ERROR(ConfigError);

#undef WFL_DEFINE_ERROR

} // namespace wfl

#endif
