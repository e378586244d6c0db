#pragma once

#include <cstdint>

#include "deepcva/eval/cvss.hpp"

namespace deepcva::model {

/// CVSS v2 base equations over the six non-severity metrics of `labels`.
double cvss2_impact(const CvssAssessment& labels);
double cvss2_exploitability(const CvssAssessment& labels);
/// Rounded to one decimal place.
double cvss2_base_score(const CvssAssessment& labels);

/// Severity label index for a base score: Low [0, 3.9], Medium [4.0, 6.9],
/// High [7.0, 10.0].
std::uint8_t severity_band(double score);

/// Severity derived from the other six metrics; the severity field of
/// `labels` is ignored.
std::uint8_t cvss2_severity_from_metrics(const CvssAssessment& labels);

}  // namespace deepcva::model
