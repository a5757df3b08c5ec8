#include "vremix/csv.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include "vremix/errors.hpp"

namespace vremix {

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view field, const std::string& context) {
  double v = 0.0;
  auto r = std::from_chars(field.data(), field.data() + field.size(), v);
  if (r.ec != std::errc{} || r.ptr != field.data() + field.size())
    throw ParseError(context + ": non-numeric value '" + std::string(field) + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    std::size_t comma = line.find(',', begin);
    if (comma == std::string::npos) {
      out.push_back(line.substr(begin));
      break;
    }
    out.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
  return out;
}

namespace {

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

CsvReader::CsvReader(const std::filesystem::path& path)
    : path_(path), in_(path) {
  if (!in_)
    throw ParseError("cannot open '" + path.string() + "' for reading");
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      comments_.push_back(line);
      continue;
    }
    header_ = split_csv_line(line);
    return;
  }
  throw ParseError("'" + path.string() + "': missing header row");
}

bool CsvReader::next_row(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    line = strip_cr(line);
    if (line.empty()) continue;
    fields = split_csv_line(line);
    if (fields.size() != header_.size())
      throw ParseError(location() + ": expected " +
                       std::to_string(header_.size()) + " fields, got " +
                       std::to_string(fields.size()));
    return true;
  }
  return false;
}

std::string CsvReader::location() const {
  return path_.string() + ":" + std::to_string(line_);
}

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : path_(path), tmp_(path.string() + ".tmp"), out_(tmp_) {
  if (!out_)
    throw Error("cannot open '" + tmp_.string() + "' for writing");
}

CsvWriter::~CsvWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_, ec);
  }
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

void CsvWriter::commit() {
  if (committed_) return;
  out_.flush();
  if (!out_) throw Error("write failed for '" + tmp_.string() + "'");
  out_.close();
  std::filesystem::rename(tmp_, path_);
  committed_ = true;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vremix
