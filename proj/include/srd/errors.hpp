#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace srd {

/// Invalid run configuration; carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> items);
  const std::vector<std::string>& items() const { return items_; }

private:
  std::vector<std::string> items_;
};

/// Non-finite state or a violated numerical guard during time stepping.
class NumericalAbort : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace srd
