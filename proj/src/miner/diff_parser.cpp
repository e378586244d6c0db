#include "deepcva/miner/diff_parser.hpp"

#include <charconv>
#include <optional>

namespace deepcva::miner {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

int parse_int(std::string_view s, std::string_view line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DiffParseError("bad hunk header: " + std::string(line));
  }
  return v;
}

// "-12,3" or "-12" (count 1).
void parse_range(std::string_view s, int& start, int& count, std::string_view line) {
  s.remove_prefix(1);
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) {
    start = parse_int(s, line);
    count = 1;
  } else {
    start = parse_int(s.substr(0, comma), line);
    count = parse_int(s.substr(comma + 1), line);
  }
}

Hunk parse_header(std::string_view line) {
  // @@ -a,b +c,d @@ optional section heading
  const auto end = line.find(" @@", 3);
  if (!starts_with(line, "@@ -") || end == std::string_view::npos) {
    throw DiffParseError("bad hunk header: " + std::string(line));
  }
  const auto body = line.substr(3, end - 3);
  const auto space = body.find(' ');
  if (space == std::string_view::npos || body[space + 1] != '+') {
    throw DiffParseError("bad hunk header: " + std::string(line));
  }
  Hunk h;
  parse_range(body.substr(0, space), h.old_start, h.old_count, line);
  parse_range(body.substr(space + 1), h.new_start, h.new_count, line);
  return h;
}

// Path from a "--- a/x" / "+++ b/x" line; nullopt for /dev/null.
std::optional<std::string> marker_path(std::string_view rest) {
  const auto tab = rest.find('\t');
  if (tab != std::string_view::npos && rest.front() != '"') rest = rest.substr(0, tab);
  if (rest == "/dev/null") return std::nullopt;
  std::string p = unquote_path(rest);
  if (p.size() >= 2 && (p[0] == 'a' || p[0] == 'b') && p[1] == '/') p.erase(0, 2);
  return p;
}

// Splits "a/x b/y" from the diff --git line; only reliable for unquoted paths
// without " b/" inside, so it is used only when no ---/+++ lines follow.
void git_header_paths(std::string_view rest, FileChange& f) {
  if (!rest.empty() && rest.front() == '"') {
    const auto close = rest.find("\" ", 1);
    if (close == std::string_view::npos) return;
    auto a = unquote_path(rest.substr(0, close + 1));
    auto b = unquote_path(rest.substr(close + 2));
    f.path_pre = a.substr(2);
    f.path_post = b.substr(2);
    return;
  }
  const auto mid = rest.find(" b/");
  if (mid == std::string_view::npos || !starts_with(rest, "a/")) return;
  f.path_pre = std::string(rest.substr(2, mid - 2));
  std::string_view b = rest.substr(mid + 1);
  if (!b.empty() && b.front() == '"') {
    f.path_post = unquote_path(b).substr(2);
  } else {
    f.path_post = std::string(b.substr(2));
  }
}

}  // namespace

std::string unquote_path(std::string_view path) {
  if (path.size() < 2 || path.front() != '"' || path.back() != '"') return std::string(path);
  std::string out;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    char c = path[i];
    if (c != '\\' || i + 2 >= path.size()) {
      out.push_back(c);
      continue;
    }
    c = path[++i];
    switch (c) {
      case 'a': out.push_back('\a'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'v': out.push_back('\v'); break;
      default:
        if (c >= '0' && c <= '7') {
          int v = 0, digits = 0;
          while (digits < 3 && i + 1 < path.size() && path[i] >= '0' && path[i] <= '7') {
            v = v * 8 + (path[i] - '0');
            ++i;
            ++digits;
          }
          --i;
          out.push_back(static_cast<char>(v));
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

std::vector<FileChange> parse_unified_diff(std::string_view patch) {
  std::vector<FileChange> files;
  FileChange* file = nullptr;
  Hunk* hunk = nullptr;
  int old_line = 0, new_line = 0, old_left = 0, new_left = 0;
  bool saw_markers = false;

  std::size_t pos = 0;
  while (pos < patch.size()) {
    auto nl = patch.find('\n', pos);
    if (nl == std::string_view::npos) nl = patch.size();
    const std::string_view line = patch.substr(pos, nl - pos);
    pos = nl + 1;

    if (hunk && (old_left > 0 || new_left > 0)) {
      if (line.empty()) {
        // A context line whose content is empty can lose its leading space.
        ++old_line, ++new_line, --old_left, --new_left;
        continue;
      }
      const char tag = line.front();
      const std::string text(line.substr(1));
      if (tag == '-') {
        hunk->deleted.push_back({old_line++, text});
        --old_left;
        continue;
      }
      if (tag == '+') {
        hunk->added.push_back({new_line++, text});
        --new_left;
        continue;
      }
      if (tag == ' ') {
        ++old_line, ++new_line, --old_left, --new_left;
        continue;
      }
      if (tag == '\\') continue;
      throw DiffParseError("unexpected line inside hunk: " + std::string(line));
    }
    if (line.empty()) continue;
    if (line.front() == '\\') continue;  // "\ No newline at end of file"

    if (starts_with(line, "diff --git ")) {
      files.emplace_back();
      file = &files.back();
      hunk = nullptr;
      saw_markers = false;
      git_header_paths(line.substr(11), *file);
      continue;
    }
    if (!file) continue;  // preamble such as commit headers
    if (starts_with(line, "@@ ")) {
      file->hunks.push_back(parse_header(line));
      hunk = &file->hunks.back();
      old_line = hunk->old_start;
      new_line = hunk->new_start;
      old_left = hunk->old_count;
      new_left = hunk->new_count;
      continue;
    }
    if (starts_with(line, "--- ")) {
      saw_markers = true;
      file->path_pre = marker_path(line.substr(4));
      continue;
    }
    if (starts_with(line, "+++ ")) {
      saw_markers = true;
      file->path_post = marker_path(line.substr(4));
      continue;
    }
    if (starts_with(line, "rename from ") || starts_with(line, "copy from ")) {
      file->path_pre = unquote_path(line.substr(line.find("from ") + 5));
      if (starts_with(line, "rename")) file->rename_detected = true;
      continue;
    }
    if (starts_with(line, "rename to ") || starts_with(line, "copy to ")) {
      file->path_post = unquote_path(line.substr(line.find("to ") + 3));
      continue;
    }
    if (!saw_markers && starts_with(line, "new file mode")) {
      file->path_pre.reset();
      continue;
    }
    if (!saw_markers && starts_with(line, "deleted file mode")) {
      file->path_post.reset();
      continue;
    }
    // index, mode, similarity and "Binary files ... differ" lines carry nothing we keep.
  }
  for (auto& f : files) {
    if (f.rename_detected && f.path_pre == f.path_post) f.rename_detected = false;
  }
  return files;
}

}  // namespace deepcva::miner
