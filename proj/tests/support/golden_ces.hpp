#pragma once

// Loader for the hand-annotated CES corpus: every `X.java` in the directory
// has an `X.java.ces.json` listing hunk spans and the scope expected for each.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace deepcva::testing {

struct GoldenCase {
  std::string file;
  int hunk_start;
  int hunk_end;
  std::string type;
  int start;
  int end;
};

struct GoldenFile {
  std::string path;
  std::string source;
  std::vector<GoldenCase> cases;
};

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<GoldenFile> load_golden_corpus(const std::filesystem::path& dir) {
  std::vector<GoldenFile> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".java") continue;
    GoldenFile file;
    file.path = entry.path().filename().string();
    file.source = read_text(entry.path());
    auto notes = nlohmann::json::parse(read_text(entry.path().string() + ".ces.json"));
    for (const auto& c : notes.at("cases")) {
      file.cases.push_back({file.path, c.at("hunk").at(0).get<int>(), c.at("hunk").at(1).get<int>(),
                            c.at("type").get<std::string>(), c.at("start").get<int>(),
                            c.at("end").get<int>()});
    }
    files.push_back(std::move(file));
  }
  std::sort(files.begin(), files.end(),
            [](const GoldenFile& a, const GoldenFile& b) { return a.path < b.path; });
  return files;
}

}  // namespace deepcva::testing
