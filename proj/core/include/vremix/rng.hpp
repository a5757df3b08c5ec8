#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace vremix {

/// Standard normal CDF, accurate to machine precision (erfc-based).
double norm_cdf(double z);

/// Standard normal quantile (inverse CDF), absolute error < 1e-9 over (0,1).
/// Throws DomainError outside (0,1).
double norm_ppf(double p);

/// Deterministic counter-based random stream. Every consumer derives its own
/// key from the single study seed plus stable labels, so draws never depend
/// on evaluation order or parallel schedule.
class Rng {
 public:
  explicit Rng(std::uint64_t key);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform01();

  /// Standard normal via inverse-CDF transform of uniform01().
  double normal();

  /// Mixes a seed with integer labels into a stream key. Distinct label
  /// tuples give statistically independent streams.
  static std::uint64_t key(std::uint64_t seed,
                           std::initializer_list<std::uint64_t> labels);

  /// FNV-1a hash of a stage name, usable as a label.
  static std::uint64_t label(std::string_view name);

 private:
  std::uint64_t state_;
};

}  // namespace vremix
