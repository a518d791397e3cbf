#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fa {

/// Invalid space/target/sequence configuration. `where` is the offending key path.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)), message_(what) {}

  const std::string& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::string where_;
  std::string message_;
};

/// A search would exceed the configured ceiling on scored bound sequences.
class BudgetExceeded : public std::runtime_error {
public:
  BudgetExceeded(std::uint64_t required, std::uint64_t ceiling)
      : std::runtime_error("expanded space holds " + std::to_string(required) +
                           " bound sequences, above the ceiling of " +
                           std::to_string(ceiling) +
                           "; use an a-asp builder or raise --budget"),
        required_(required), ceiling_(ceiling) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t ceiling() const noexcept { return ceiling_; }

private:
  std::uint64_t required_;
  std::uint64_t ceiling_;
};

/// A closed-form count does not fit in 64 bits.
class CountOverflow : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// The operation is not defined for this carrier kind.
class Unsupported : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// An operation precondition on the data (not the configuration) failed.
class ContractViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A step of a sequence has no defined output anywhere on its incoming domain.
class EmptyCapacity : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace fa
