#include "deepcva/miner/git_repo.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "deepcva/miner/diff_parser.hpp"
#include "deepcva/miner/process.hpp"

namespace deepcva::miner {

namespace {

// Options that make output independent of user configuration.
const std::vector<std::string> kPrefix = {
    "git",          "-c", "core.quotepath=off", "-c", "diff.noprefix=false",
    "-c",           "diff.mnemonicPrefix=false", "-c", "color.ui=never", "-c",
    "diff.renames=true", "--no-pager"};

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

GitRepo::GitRepo(std::filesystem::path dir, std::string repo_id)
    : dir_(std::move(dir)), repo_id_(std::move(repo_id)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw GitError("repository directory not found: " + dir_.string());
  }
  if (repo_id_.empty()) repo_id_ = dir_.filename().string();
}

std::string GitRepo::git(const std::vector<std::string>& args) const {
  std::vector<std::string> argv = kPrefix;
  argv.insert(argv.end(), {"-C", dir_.string()});
  argv.insert(argv.end(), args.begin(), args.end());
  const auto r = run_process(argv);
  if (r.exit_code != 0) {
    std::string cmd;
    for (const auto& a : args) cmd += " " + a;
    throw GitError("git" + cmd + " failed (" + std::to_string(r.exit_code) + "): " + trim(r.err));
  }
  return r.out;
}

std::string GitRepo::resolve(const std::string& rev) const {
  return trim(git({"rev-parse", "--verify", "--quiet", rev + "^{commit}"}));
}

std::vector<std::string> GitRepo::parents(const std::string& hash) const {
  std::istringstream in(git({"show", "-s", "--format=%P", hash}));
  std::vector<std::string> out;
  for (std::string p; in >> p;) out.push_back(p);
  return out;
}

std::int64_t GitRepo::author_timestamp(const std::string& hash) const {
  return std::stoll(trim(git({"show", "-s", "--format=%at", hash})));
}

CommitRecord GitRepo::load_commit(const std::string& rev) const {
  CommitRecord c;
  c.repo_id = repo_id_;
  c.commit_hash = resolve(rev);
  c.parent_hashes = parents(c.commit_hash);
  c.author_timestamp = author_timestamp(c.commit_hash);
  std::string base;
  if (!c.parent_hashes.empty()) {
    base = c.parent_hashes.front();
  } else {
    if (empty_tree_.empty()) {
      empty_tree_ = trim(run_process({"git", "-C", dir_.string(), "hash-object", "-t", "tree", "--stdin"})
                             .out);
    }
    base = empty_tree_;
  }
  c.files = parse_unified_diff(git({"diff", "--no-color", "--no-ext-diff", "-U0", "-M", "-C",
                                    "--src-prefix=a/", "--dst-prefix=b/", base, c.commit_hash}));
  return c;
}

std::optional<std::string> GitRepo::file_at(const std::string& rev, const std::string& path) const {
  std::vector<std::string> argv = kPrefix;
  argv.insert(argv.end(), {"-C", dir_.string(), "cat-file", "blob", rev + ":" + path});
  auto r = run_process(argv);
  if (r.exit_code != 0) return std::nullopt;
  return std::move(r.out);
}

std::vector<BlameLine> GitRepo::blame(const std::string& rev, const std::string& path,
                                      const std::vector<int>& lines) const {
  if (lines.empty()) return {};
  // The whole file is blamed: with -L, copy detection scores each range on
  // its own and misses copies of short lines.
  const std::string out = git({"blame", "--line-porcelain", "-w", "-M", "-C", "-C", rev, "--", path});
  const std::set<int> wanted(lines.begin(), lines.end());

  std::map<int, BlameLine> by_final;
  std::istringstream in(out);
  BlameLine current;
  bool in_entry = false;
  for (std::string line; std::getline(in, line);) {
    if (!in_entry) {
      // "<hash> <orig_line> <final_line>[ <group size>]"
      std::istringstream header(line);
      std::string orig, fin;
      header >> current.commit_hash >> orig >> fin;
      current.orig_line = to_int(orig);
      current.final_line = to_int(fin);
      current.orig_path.clear();
      in_entry = true;
      continue;
    }
    if (!line.empty() && line.front() == '\t') {
      if (wanted.count(current.final_line)) by_final[current.final_line] = current;
      in_entry = false;
      continue;
    }
    if (line.rfind("filename ", 0) == 0) current.orig_path = unquote_path(line.substr(9));
  }
  std::vector<BlameLine> result;
  for (int l : lines) {
    auto it = by_final.find(l);
    if (it == by_final.end()) throw GitError("blame returned no entry for " + path + ":" + std::to_string(l));
    result.push_back(it->second);
  }
  return result;
}

}  // namespace deepcva::miner
