#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "maxent/core.hpp"

namespace maxent {

// Shortest decimal string that round-trips the value exactly;
// locale-independent, so CSV output is byte-stable across platforms.
std::string format_double(double v);

// Lines starting with '#' before any data row; each "key=value".
void write_comment_header(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::string>>& entries);

struct ReadOptions {
  std::size_t column = 0;     // zero-based column index
  std::size_t skip_rows = 0;  // header rows to ignore
};

// Reads one numeric column from a text file (comma or whitespace
// separated; blank lines and '#' comments skipped) and builds a
// Selection. Errors carry the offending line number.
Selection read_sample_file(const std::string& path,
                           const ReadOptions& opts = {});

}  // namespace maxent
