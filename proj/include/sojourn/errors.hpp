#pragma once

#include <stdexcept>
#include <string>

namespace sojourn {

/// Base class for all failures raised by the lab. `kind` maps onto CLI exit codes.
class Error : public std::runtime_error {
  public:
    enum class Kind { config = 2, numerical = 3 };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(Kind::config, what) {}
};

class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string& what) : Error(Kind::numerical, what) {}
};

}  // namespace sojourn
