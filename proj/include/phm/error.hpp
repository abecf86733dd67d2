#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace phm {

// Error kinds are stable identifiers: the CLI prints them verbatim on the
// diagnostic stream so callers can dispatch on them.
enum class ErrorKind {
  invalid_argument,
  singular_transform,
  dim_mismatch,
  undefined_metric,
  numeric,
  io,
  config_missing_file,
  config_syntax,
  config_unknown_key,
  config_out_of_range,
};

inline std::string_view kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument:     return "invalid_argument";
    case ErrorKind::singular_transform:   return "singular_transform";
    case ErrorKind::dim_mismatch:         return "dim_mismatch";
    case ErrorKind::undefined_metric:     return "undefined_metric";
    case ErrorKind::numeric:              return "numeric";
    case ErrorKind::io:                   return "io";
    case ErrorKind::config_missing_file:  return "config_missing_file";
    case ErrorKind::config_syntax:        return "config_syntax";
    case ErrorKind::config_unknown_key:   return "config_unknown_key";
    case ErrorKind::config_out_of_range:  return "config_out_of_range";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  Error(ErrorKind kind, std::string field, std::string message)
      : std::runtime_error(std::move(message)),
        kind_(kind),
        field_(std::move(field)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Offending field/key/id, empty when not applicable.
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

}  // namespace phm
