#ifndef WAVEBOX_ERRORS_HPP
#define WAVEBOX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wavebox {

// Config-file syntax problems. `line` is 1-based; 0 means "not line-specific".
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& reason)
        : std::runtime_error("parse error (line " + std::to_string(line_) + "): " + reason),
          line(line_) {}
};

// A parsed value that violates a documented constraint.
struct ValidationError : std::runtime_error {
    std::string key;
    ValidationError(std::string key_, const std::string& constraint)
        : std::runtime_error("invalid value for '" + key_ + "': " + constraint),
          key(std::move(key_)) {}
};

// Integration produced NaN/Inf; carries the time at which it happened.
struct NonFiniteState : std::runtime_error {
    double t;
    explicit NonFiniteState(double t_)
        : std::runtime_error("non-finite state at t = " + std::to_string(t_)), t(t_) {}
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidExponents : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PlateauTooNarrow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndefiniteJacobian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wavebox

#endif
