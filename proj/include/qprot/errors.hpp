#pragma once

#include <stdexcept>
#include <string>

namespace qprot {

// Bad inputs: malformed files, non-unit axes, dimension mismatches. CLI exit 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed inputs whose answer is a refusal. CLI exit 3.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonexistenceProven : DomainError {
    explicit NonexistenceProven(const std::string& msg) : DomainError(msg) {}
};

struct NotCatalogued : DomainError {
    explicit NotCatalogued(const std::string& msg) : DomainError(msg) {}
};

struct CompletenessViolation : DomainError {
    double residual;
    explicit CompletenessViolation(double r)
        : DomainError("POVM completeness violated, residual " + std::to_string(r)), residual(r) {}
};

struct RankDeficientDesign : DomainError {
    explicit RankDeficientDesign(const std::string& msg) : DomainError(msg) {}
};

}  // namespace qprot
