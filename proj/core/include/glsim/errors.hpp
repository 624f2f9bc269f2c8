#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace glsim {

// Invalid arguments, out-of-alphabet symbols, malformed inputs, length
// mismatches. CLI maps this to exit code 2.
class domain_error : public std::invalid_argument {
  public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Bad run configuration (flag combinations, missing plugins, parameter
// ranges). CLI maps this to exit code 2.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or simulation exceeds its configured cap. Carries the
// required count so callers can report how far over budget the request was.
// CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
  public:
    resource_error(const std::string& what, uint64_t required, uint64_t cap)
        : std::runtime_error(what + " (required " + std::to_string(required) + ", cap " +
                             std::to_string(cap) + ")"),
          required_(required),
          cap_(cap) {}

    uint64_t required() const { return required_; }
    uint64_t cap() const { return cap_; }

  private:
    uint64_t required_;
    uint64_t cap_;
};

}  // namespace glsim
