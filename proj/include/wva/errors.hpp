#pragma once

#include <stdexcept>
#include <string>

namespace wva {

/// Input outside the mathematical domain of an operation (bad δ, φ, |α|², ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Index or order argument outside the supported range (Stirling tables, moments).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed configuration: unknown keys, wrong types, bad enum names.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A statistically degenerate run, e.g. an expected or realized count of zero
/// postselected photons. Distinct from DomainError so callers can tell
/// "no data" apart from "bad input".
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroPostselections : public DegenerateError {
 public:
  ZeroPostselections() : DegenerateError("no photon was postselected in this experiment") {}
};

class AllTrialsFailed : public DegenerateError {
 public:
  AllTrialsFailed() : DegenerateError("every trial ended with zero postselections") {}
};

}  // namespace wva
