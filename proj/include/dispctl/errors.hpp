#pragma once

#include <stdexcept>
#include <string>

namespace dispctl {

/// Invalid input or configuration (bad ranges, unknown names, mismatched means).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A structural hypothesis failed at this truncation: singular cluster block,
/// ill-conditioned exponential family, unobservable pair, ambiguous clustering.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dispctl
