#pragma once

#include <stdexcept>
#include <string>

namespace erpm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad inputs: malformed data files, inconsistent dimensions, invalid configs.
struct ValidationError : Error {
  using Error::Error;
};

/// Model concentrates mass on extreme partitions, a statistic is constant on
/// the support, or the MLE lies at infinity.
struct DegeneracyError : Error {
  using Error::Error;
};

struct MleAtInfinityError : DegeneracyError {
  using DegeneracyError::DegeneracyError;
};

}  // namespace erpm
