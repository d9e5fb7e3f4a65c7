#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

/// Adaptive quadrature ran out of subdivision budget before reaching tolerance.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative optimizer stalled above its residual threshold.
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A measurement-record set is missing required entries.
struct IncompleteData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid sampling cannot resolve the requested grating period.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two fields were combined that do not share a sampling grid.
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace spdc
