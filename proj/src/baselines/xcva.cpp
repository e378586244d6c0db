#include "deepcva/baselines/xcva.hpp"

#include <string>

namespace deepcva::baselines {

std::uint32_t xcva_composite_count() {
  std::uint32_t n = 1;
  for (auto t : kAllTasks) n *= static_cast<std::uint32_t>(label_count(t));
  return n;
}

std::uint32_t xcva_encode(const CvssAssessment& labels) {
  validate(labels);
  std::uint32_t code = 0;
  for (auto t : kAllTasks) code = code * static_cast<std::uint32_t>(label_count(t)) + labels[t];
  return code;
}

CvssAssessment xcva_decode(std::uint32_t composite) {
  if (composite >= xcva_composite_count()) {
    throw UnknownComposite("composite label " + std::to_string(composite) + " out of range");
  }
  CvssAssessment out;
  for (auto it = kAllTasks.rbegin(); it != kAllTasks.rend(); ++it) {
    const auto radix = static_cast<std::uint32_t>(label_count(*it));
    out[*it] = static_cast<std::uint8_t>(composite % radix);
    composite /= radix;
  }
  return out;
}

}  // namespace deepcva::baselines
