#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vremix/rng.hpp"
#include "vremix/series.hpp"
#include "vremix/time.hpp"

namespace testutil {

/// Self-deleting scratch directory for file-based cases.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static std::atomic<std::uint64_t> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("vremix_test_" + tag + "_" + std::to_string(++counter) + "_" +
            std::to_string(std::uint64_t(::getpid())));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const {
    return path / name;
  }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline vremix::HourlySeries hourly(vremix::UtcHour start,
                                   std::vector<double> values) {
  return vremix::HourlySeries{start, std::move(values)};
}

/// Reproducible series of uniform draws on [lo, hi].
inline vremix::HourlySeries seeded_hourly(std::uint64_t seed, std::size_t n,
                                          double lo, double hi,
                                          vremix::UtcHour start = {}) {
  vremix::Rng rng(vremix::Rng::key(seed, {vremix::Rng::label("test-series")}));
  vremix::HourlySeries s;
  s.start = start;
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.values[i] = lo + (hi - lo) * rng.uniform01();
  return s;
}

}  // namespace testutil
