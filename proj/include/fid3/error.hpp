#pragma once

#include <stdexcept>
#include <string>

namespace fid3 {

/// Invalid user-supplied parameter (beta out of range, bad set count, ...).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class DataErrorKind {
  Io,
  EmptyFile,
  MissingColumn,
  NonNumeric,
  MissingValue,
  NonPositiveEffort,
  ConstantVariable,
  ConstantTarget,
  EmptyDataset,
  BadSchema,
  BadModel,
};

const char *to_string(DataErrorKind kind) noexcept;

/// Problem with the data itself: malformed CSV, invalid records, degenerate columns.
class DataError : public std::runtime_error {
public:
  DataError(DataErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  DataErrorKind kind() const noexcept { return kind_; }

private:
  DataErrorKind kind_;
};

} // namespace fid3
