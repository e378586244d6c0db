#include "deepcva/miner/filter.hpp"

#include <set>
#include <stdexcept>
#include <utility>

namespace deepcva::miner {

std::size_t changed_line_count(const CommitRecord& commit) {
  std::size_t n = 0;
  for (const auto& f : commit.files) {
    for (const auto& h : f.hunks) n += h.deleted.size() + h.added.size();
  }
  return n;
}

std::vector<VfcRecord> filter_vfcs(std::span<const VfcRecord> candidates, std::size_t max_files,
                                   std::size_t max_lines) {
  if (max_files == 0 || max_lines == 0) {
    throw std::invalid_argument("filter_vfcs: max_files and max_lines must be positive");
  }
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<VfcRecord> out;
  for (const auto& v : candidates) {
    if (!seen.insert({v.commit.repo_id, v.commit.commit_hash}).second) continue;
    if (v.commit.files.size() > max_files) continue;
    if (changed_line_count(v.commit) > max_lines) continue;
    out.push_back(v);
  }
  return out;
}

bool is_java_path(const std::string& path) {
  return path.size() > 5 && path.compare(path.size() - 5, 5, ".java") == 0;
}

bool is_java_change(const FileChange& change) {
  return (change.path_pre && is_java_path(*change.path_pre)) ||
         (change.path_post && is_java_path(*change.path_post));
}

}  // namespace deepcva::miner
