#pragma once

#include <stdexcept>
#include <string>

namespace tailasym {

// Parameter outside a family/margin domain, or an argument violating a
// documented precondition.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Malformed scenario/config/CLI input detected before any computation runs.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Unparseable or inconsistent data (CSV rows, sample scales, lengths).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Root-finding non-convergence, singular covariance and similar.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace tailasym
