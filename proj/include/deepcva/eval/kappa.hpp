#pragma once

#include <span>
#include <stdexcept>
#include <string>

namespace deepcva::eval {

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cohen's kappa (p_o − p_e) / (1 − p_e) for two raters over the same items.
/// Returns 1 when p_e = 1 and the raters agree on every item, 0 when p_e = 1
/// otherwise. Throws LengthMismatch for different or zero lengths.
double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b);

}  // namespace deepcva::eval
