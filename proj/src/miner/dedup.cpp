#include "deepcva/miner/dedup.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace deepcva::miner {

std::vector<VccRecord> dedup_vccs(std::span<const LabeledVcc> traces) {
  using Key = std::pair<std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<const LabeledVcc*>> groups;
  for (const auto& t : traces) {
    Key key{t.commit.repo_id, t.commit.commit_hash};
    auto& group = groups[key];
    if (group.empty()) order.push_back(key);
    const bool known = std::any_of(group.begin(), group.end(),
                                   [&](const LabeledVcc* g) { return g->labels == t.labels; });
    if (!known) group.push_back(&t);
  }
  std::vector<VccRecord> out;
  for (const auto& key : order) {
    const auto& group = groups[key];
    for (const auto* t : group) out.push_back({t->commit, t->labels, group.size() > 1});
  }
  return out;
}

}  // namespace deepcva::miner
