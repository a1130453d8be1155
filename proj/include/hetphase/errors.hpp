#pragma once

#include <stdexcept>
#include <string>

namespace hetphase {

/// Thrown when an iterative or series computation cannot reach the
/// requested tolerance (slow series, quadrature depth exhausted, ...).
class ConvergenceError : public std::runtime_error {
public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a truncated Fock-space result would be biased beyond the
/// allowed norm defect; the caller must raise the cutoff.
class TruncationError : public std::runtime_error {
public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hetphase
