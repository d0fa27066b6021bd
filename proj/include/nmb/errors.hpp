#pragma once

#include <stdexcept>
#include <string>

namespace nmb {

// Invalid configuration. `field()` names the offending key so the CLI can
// print a single-line diagnostic.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)), detail_(what) {}

  const std::string& field() const noexcept { return field_; }
  // The message without the field prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string field_;
  std::string detail_;
};

// Aggregation over logs found nothing to aggregate.
class EmptyResultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmb
