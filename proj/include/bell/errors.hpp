#pragma once

#include <stdexcept>
#include <string>

namespace bell {

// exit-code mapping used by the CLI: capacity -> 2, spec/parse -> 3
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NormalizationError : std::runtime_error {
  explicit NormalizationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SignalingError : std::runtime_error {
  explicit SignalingError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bell
