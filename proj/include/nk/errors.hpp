#pragma once

#include <stdexcept>
#include <string>

namespace nk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An ambient pair that is not tangent to S3 x S3 at the given point.
struct TangencyError : Error {
    using Error::Error;
};

/// Operation combining tangent vectors at different base points.
struct BasePointMismatch : Error {
    using Error::Error;
};

/// Immersion jacobian drops below rank 3 at the requested chart point.
struct DegenerateChartError : Error {
    using Error::Error;
};

/// A computed tensor violates a symmetry it must satisfy (signals a
/// non-Lagrangian input or a broken finite-difference stencil).
struct IntegrityError : Error {
    using Error::Error;
};

struct OptimizationError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(int line_, int column_, const std::string& what_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) +
                ": " + what_),
          line(line_),
          column(column_) {}
    int line;
    int column;
};

}  // namespace nk
