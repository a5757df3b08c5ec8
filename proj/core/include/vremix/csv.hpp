#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace vremix {

/// Formats a double in the shortest form that parses back bit-identically.
std::string format_double(double v);

/// Strict double parser; the whole field must be consumed.
double parse_double(std::string_view field, const std::string& context);

/// Line-oriented CSV reader: comma-separated, no quoting, UTF-8, one header
/// row. Lines starting with '#' before the header are exposed separately
/// (power-curve files carry metadata there).
class CsvReader {
 public:
  explicit CsvReader(const std::filesystem::path& path);

  const std::vector<std::string>& comment_lines() const { return comments_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::filesystem::path& path() const { return path_; }

  /// Reads the next data row into `fields`; false at end of file.
  /// Empty lines are skipped. Throws ParseError on a column-count mismatch.
  bool next_row(std::vector<std::string>& fields);

  /// 1-based line number of the row most recently returned.
  long line_number() const { return line_; }

  /// "<path>:<line>" for error messages.
  std::string location() const;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::vector<std::string> comments_;
  std::vector<std::string> header_;
  long line_ = 0;
};

/// Buffered CSV writer committing through a temp file + rename so readers
/// never observe a half-written file.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void comment(const std::string& text);
  void row(const std::vector<std::string>& fields);

  /// Flushes and atomically renames into place. No-op when called twice.
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

/// Writes arbitrary text atomically (temp file + rename).
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace vremix
