#pragma once

#include <span>
#include <vector>

#include "deepcva/miner/commit.hpp"

namespace deepcva::miner {

/// A traced VCC paired with the labels of the advisory it was traced from.
struct LabeledVcc {
  CommitRecord commit;
  CvssAssessment labels;
};

/// One row per (repo_id, commit_hash) and distinct label set, in first-seen
/// order. Rows of a commit reached with more than one label set are flagged
/// `label_conflict`.
std::vector<VccRecord> dedup_vccs(std::span<const LabeledVcc> traces);

}  // namespace deepcva::miner
