#pragma once

// Reproducible CSV emission. Numbers are written in shortest round-trip
// decimal form (std::to_chars), locale-independent, '.' separator, '\n' line
// endings. Files are written to a temp name and renamed on completion so
// readers never observe partial output. Byte-identical output for identical
// inputs is a contract relied on by the determinism checks.

#include <filesystem>
#include <string>
#include <vector>

namespace mml {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

std::string format_int(long long v);

// Atomically replace `path` with `content` (temp file + rename, same dir).
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Row-by-row CSV builder; finish() performs the atomic write.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  const std::string& content() const { return buf_; }
  void write(const std::filesystem::path& path) const { atomic_write(path, buf_); }

 private:
  std::string buf_;
  std::size_t columns_ = 0;
};

}  // namespace mml
