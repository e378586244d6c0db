#include "deepcva/model/cvss2.hpp"

#include <array>
#include <cmath>

namespace deepcva::model {

namespace {

// Indexed by label index (see task_labels()).
constexpr std::array<double, 3> kImpact = {0.0, 0.275, 0.660};           // None, Partial, Complete
constexpr std::array<double, 3> kAccessVector = {0.395, 0.646, 1.0};     // Local, Adjacent, Network
constexpr std::array<double, 3> kAccessComplexity = {0.71, 0.61, 0.35};  // Low, Medium, High
constexpr std::array<double, 3> kAuthentication = {0.704, 0.56, 0.45};   // None, Single, Multiple

}  // namespace

double cvss2_impact(const CvssAssessment& labels) {
  validate(labels);
  const double c = kImpact[labels[Task::confidentiality]];
  const double i = kImpact[labels[Task::integrity]];
  const double a = kImpact[labels[Task::availability]];
  return 10.41 * (1.0 - (1.0 - c) * (1.0 - i) * (1.0 - a));
}

double cvss2_exploitability(const CvssAssessment& labels) {
  validate(labels);
  return 20.0 * kAccessVector[labels[Task::access_vector]] *
         kAccessComplexity[labels[Task::access_complexity]] *
         kAuthentication[labels[Task::authentication]];
}

double cvss2_base_score(const CvssAssessment& labels) {
  const double impact = cvss2_impact(labels);
  const double f = impact == 0.0 ? 0.0 : 1.176;
  const double raw = (0.6 * impact + 0.4 * cvss2_exploitability(labels) - 1.5) * f;
  return std::round(raw * 10.0) / 10.0;
}

std::uint8_t severity_band(double score) {
  if (score >= 7.0) return 2;
  if (score >= 4.0) return 1;
  return 0;
}

std::uint8_t cvss2_severity_from_metrics(const CvssAssessment& labels) {
  return severity_band(cvss2_base_score(labels));
}

}  // namespace deepcva::model
