#pragma once

#include <stdexcept>
#include <string>

namespace skewvar {

// Error categories map one-to-one onto the CLI exit codes (1/2/3).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics go to stderr; set quiet to silence them in tests.
void warn(const std::string& message);
void set_quiet(bool quiet);

}  // namespace skewvar
