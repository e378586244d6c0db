#pragma once

#include <cstdint>
#include <stdexcept>

#include "deepcva/eval/cvss.hpp"

namespace deepcva::baselines {

class UnknownComposite : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Number of distinct composite labels (3^7).
std::uint32_t xcva_composite_count();

/// Mixed-radix positional code of the seven labels, confidentiality as the
/// most significant digit.
std::uint32_t xcva_encode(const CvssAssessment& labels);
/// Inverse of xcva_encode; throws UnknownComposite outside the code range.
CvssAssessment xcva_decode(std::uint32_t composite);

}  // namespace deepcva::baselines
