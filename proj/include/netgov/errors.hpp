#pragma once

#include <stdexcept>
#include <string>

namespace netgov {

/// Bad user-supplied configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An intervention that violates the environment rules (self-loop or a
/// delete that would disconnect the network). Signals a masking bug upstream.
struct InvalidActionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Action selection was asked to pick from an all-invalid mask.
struct NoValidActionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tensor shape mismatch in the nn layer ops.
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// NaN/Inf surfaced during training; aborts rather than corrupting parameters.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Graph metric asked for on a disconnected network (unreachable in normal
/// runs; kept as a hard error to surface environment bugs).
struct DisconnectedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File/serialization failures (CLI exit code 2).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace netgov
