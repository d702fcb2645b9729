#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace torinv {

// Base class for domain errors.  `name()` is the stable identifier surfaced in
// CLI reports; the what() string carries the human-readable detail.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string name, const std::string& detail)
        : std::runtime_error(detail), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define TORINV_DOMAIN_ERROR(NAME)                              \
    struct NAME : DomainError {                                \
        explicit NAME(const std::string& detail)               \
            : DomainError(#NAME, detail) {}                    \
    }

TORINV_DOMAIN_ERROR(DimensionMismatch);
TORINV_DOMAIN_ERROR(NotPrimitive);
TORINV_DOMAIN_ERROR(NotUnimodular);
TORINV_DOMAIN_ERROR(RelatorViolated);
TORINV_DOMAIN_ERROR(PresentationMismatch);
TORINV_DOMAIN_ERROR(NotAComplex);
TORINV_DOMAIN_ERROR(NerveMismatch);
TORINV_DOMAIN_ERROR(Unrealizable);
TORINV_DOMAIN_ERROR(CocycleViolation);
TORINV_DOMAIN_ERROR(DegenerateLocus);
TORINV_DOMAIN_ERROR(BranchCutProximity);

#undef TORINV_DOMAIN_ERROR

// Malformed input documents and schema violations: reported separately from
// domain errors (CLI exit code 2 rather than 1).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& detail) : std::runtime_error(detail) {}
};

}  // namespace torinv
