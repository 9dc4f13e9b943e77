#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace toricdual {

// Base class for every failure raised by the library. A witness vector is
// attached when the failure can be pinned to a lattice vector (a ray, a
// facet normal, a line inside a cone).
class ToricError : public std::runtime_error {
public:
    ToricError(std::string kind, const std::string& what, std::vector<long> witness = {})
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), witness_(std::move(witness)) {}

    const std::string& kind() const noexcept { return kind_; }
    const std::vector<long>& witness() const noexcept { return witness_; }

private:
    std::string kind_;
    std::vector<long> witness_;
};

#define TORICDUAL_DEFINE_ERROR(Name)                                                     \
    class Name : public ToricError {                                                      \
    public:                                                                               \
        explicit Name(const std::string& what, std::vector<long> witness = {})            \
            : ToricError(#Name, what, std::move(witness)) {}                              \
    }

TORICDUAL_DEFINE_ERROR(NotStronglyConvex);
TORICDUAL_DEFINE_ERROR(NotAFace);
TORICDUAL_DEFINE_ERROR(NotPositiveGrading);
TORICDUAL_DEFINE_ERROR(InvalidGrading);
TORICDUAL_DEFINE_ERROR(InvalidEigenform);
TORICDUAL_DEFINE_ERROR(PositivityViolation);
TORICDUAL_DEFINE_ERROR(BranchAmbiguity);
TORICDUAL_DEFINE_ERROR(NotALift);
TORICDUAL_DEFINE_ERROR(MissingRoots);
TORICDUAL_DEFINE_ERROR(NotAnExtension);
TORICDUAL_DEFINE_ERROR(IncompatibleField);
TORICDUAL_DEFINE_ERROR(OutsideSupport);
TORICDUAL_DEFINE_ERROR(DimensionMismatch);

#undef TORICDUAL_DEFINE_ERROR

} // namespace toricdual
