#pragma once

#include <stdexcept>
#include <string>

namespace riemdiff {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point fell outside a chart domain.
struct DomainBoundsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite-difference evaluation too close to a domain boundary.
struct BoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FactorizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace riemdiff
