#include "vremix/rng.hpp"

#include <cmath>

#include "vremix/errors.hpp"

namespace vremix {

namespace {

// splitmix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Rational-approximation quantile (Wichura's PPND16 scheme): a central
// rational fit in |p - 1/2| <= 0.425 and two tail fits in sqrt(-log(p)).
double norm_ppf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("norm_ppf: p must lie strictly inside (0,1)");

  static const double a[8] = {
      3.3871328727963666080e+0, 1.3314166789178437745e+2,
      1.9715909503065514427e+3, 1.3731693765509461125e+4,
      4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static const double b[8] = {
      1.0,                      4.2313330701600911252e+1,
      6.8718700749205790830e+2, 5.3941960214247511077e+3,
      2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static const double c[8] = {
      1.42343711074968357734e+0, 4.63033784615654529590e+0,
      5.76949722146069140550e+0, 3.64784832476320460504e+0,
      1.27045825245236838258e+0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {
      1.0,                       2.05319162663775882187e+0,
      1.67638483018380384940e+0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e+0, 5.46378491116411436990e+0,
      1.78482653991729133580e+0, 2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {
      1.0,                       5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  auto ratio = [](const double* num, const double* den, double r) {
    double n = num[7], m = den[7];
    for (int i = 6; i >= 0; --i) {
      n = n * r + num[i];
      m = m * r + den[i];
    }
    return n / m;
  };

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    double r = 0.180625 - q * q;
    return q * ratio(a, b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double z;
  if (r <= 5.0)
    z = ratio(c, d, r - 1.6);
  else
    z = ratio(e, f, r - 5.0);
  return q < 0.0 ? -z : z;
}

Rng::Rng(std::uint64_t key) : state_(key) {}

std::uint64_t Rng::next_u64() { return mix64(state_++); }

double Rng::uniform01() {
  return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return norm_ppf(uniform01()); }

std::uint64_t Rng::key(std::uint64_t seed,
                       std::initializer_list<std::uint64_t> labels) {
  std::uint64_t k = mix64(seed);
  for (std::uint64_t v : labels) k = mix64(k ^ mix64(v));
  return k;
}

std::uint64_t Rng::label(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace vremix
