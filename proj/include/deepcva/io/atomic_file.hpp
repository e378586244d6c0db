#pragma once

#include <filesystem>
#include <stdexcept>
#include <string_view>

namespace deepcva::io {

class WriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes `bytes` to a sibling temporary file, flushes it to disk and renames
/// it over `path`, so readers see either the old or the new content. Missing
/// parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace deepcva::io
