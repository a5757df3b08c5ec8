#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "vremix/errors.hpp"
#include "vremix/rng.hpp"
#include "vremix/stats.hpp"

using namespace vremix;
using testutil::hourly;

TEST_SUITE("stats") {

TEST_CASE("sample mean of constant and symmetric inputs") {
  CHECK(sample_mean(hourly({}, {1, 1, 1, 1})) == 1.0);
  CHECK(sample_mean(hourly({}, {0, 2})) == 1.0);
}

TEST_CASE("sample mean matches an independent accumulation on seeded data") {
  HourlySeries s = testutil::seeded_hourly(101, 8760, -3.0, 7.0);
  // Independent oracle: Kahan-compensated accumulation, written separately
  // from the library implementation.
  double sum = 0.0, comp = 0.0;
  for (double v : s.values) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double oracle = sum / double(s.size());
  CHECK(sample_mean(s) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("sample mean of an empty series throws") {
  CHECK_THROWS_AS(sample_mean(hourly({}, {})), EmptySeries);
}

TEST_CASE("covariance of identical series is the variance everywhere") {
  HourlySeries s = testutil::seeded_hourly(7, 500, 0.0, 1.0);
  std::vector<HourlySeries> trio{s, s, s};
  Eigen::MatrixXd c = sample_covariance(trio);
  REQUIRE(c.rows() == 3);
  double var = c(0, 0);
  CHECK(var > 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(c(i, j) == doctest::Approx(var).epsilon(1e-14));
}

TEST_CASE("covariance of a series and its negation") {
  HourlySeries s = testutil::seeded_hourly(8, 400, -1.0, 1.0);
  HourlySeries neg = s;
  for (double& v : neg.values) v = -v;
  std::vector<HourlySeries> pair{s, neg};
  Eigen::MatrixXd c = sample_covariance(pair);
  CHECK(c(0, 1) == doctest::Approx(-c(0, 0)).epsilon(1e-14));
  CHECK(c(1, 0) == c(0, 1));
  CHECK(c(1, 1) == doctest::Approx(c(0, 0)).epsilon(1e-14));
}

TEST_CASE("covariance uses the N-1 divisor") {
  // Two samples: cov = (x1-xm)(y1-ym) + (x2-xm)(y2-ym) over N-1 = 1.
  std::vector<HourlySeries> two{hourly({}, {0.0, 2.0}), hourly({}, {1.0, 5.0})};
  Eigen::MatrixXd c = sample_covariance(two);
  CHECK(c(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c(1, 1) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(c(0, 1) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("covariance matches a brute-force double loop on seeded series") {
  const std::size_t n = 600;
  std::vector<HourlySeries> series;
  for (std::uint64_t k = 0; k < 3; ++k)
    series.push_back(testutil::seeded_hourly(900 + k, n, -2.0, 2.0));

  Eigen::MatrixXd c = sample_covariance(series);

  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double mi = 0.0, mj = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        mi += series[std::size_t(i)].values[t];
        mj += series[std::size_t(j)].values[t];
      }
      mi /= double(n);
      mj /= double(n);
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t)
        acc += (series[std::size_t(i)].values[t] - mi) *
               (series[std::size_t(j)].values[t] - mj);
      double oracle = acc / double(n - 1);
      CHECK(c(i, j) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("covariance rejects misaligned or insufficient input") {
  std::vector<HourlySeries> misaligned{hourly(UtcHour{0}, {1, 2, 3}),
                                       hourly(UtcHour{1}, {1, 2, 3})};
  CHECK_THROWS_AS(sample_covariance(misaligned), AlignmentError);

  std::vector<HourlySeries> short_input{hourly({}, {1.0}), hourly({}, {2.0})};
  CHECK_THROWS_AS(sample_covariance(short_input), InsufficientData);
}

TEST_CASE("covariance of random series is positive semidefinite") {
  std::vector<HourlySeries> series;
  for (std::uint64_t k = 0; k < 6; ++k)
    series.push_back(testutil::seeded_hourly(40 + k, 300, 0.0, 1.0));
  Eigen::MatrixXd c = sample_covariance(series);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  double max_eig = eig.eigenvalues().maxCoeff();
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * std::max(1.0, max_eig));
}

TEST_CASE("ratio series golden values") {
  HourlySeries eta = hourly({}, {0.2});
  HourlySeries demand = hourly({}, {1000.0});
  HourlySeries r = ratio_series(eta, demand);
  CHECK(r[0] == doctest::Approx(2e-4).epsilon(1e-15));

  HourlySeries d2 = testutil::seeded_hourly(3, 100, 500.0, 1500.0);
  HourlySeries same = d2;
  HourlySeries unit = ratio_series(same, d2);
  for (std::size_t t = 0; t < unit.size(); ++t) CHECK(unit[t] == 1.0);
}

TEST_CASE("ratio series equals the elementwise oracle and is linear") {
  HourlySeries eta = testutil::seeded_hourly(21, 240, 0.0, 5000.0);
  HourlySeries demand = testutil::seeded_hourly(22, 240, 8000.0, 30000.0);
  HourlySeries r = ratio_series(eta, demand);
  REQUIRE(r.size() == eta.size());
  for (std::size_t t = 0; t < r.size(); ++t)
    CHECK(r[t] == eta.values[t] / demand.values[t]);

  // Exact degree-1 homogeneity in the numerator: (a*eta)/D == a*(eta/D)
  // whenever the scale factor is a power of two, which is lossless.
  HourlySeries scaled = eta;
  for (double& v : scaled.values) v *= 4.0;
  HourlySeries r4 = ratio_series(scaled, demand);
  for (std::size_t t = 0; t < r.size(); ++t) CHECK(r4[t] == 4.0 * r[t]);
}

TEST_CASE("ratio series names the offending timestamp") {
  HourlySeries eta = hourly(utc_hour({2012, 5, 3}), {1.0, 2.0, 3.0});
  HourlySeries demand = hourly(utc_hour({2012, 5, 3}), {10.0, 0.0, 10.0});
  CHECK_THROWS_WITH_AS(ratio_series(eta, demand),
                       doctest::Contains("2012-05-03T01:00:00Z"), DomainError);
  HourlySeries negative = hourly(utc_hour({2012, 5, 3}), {10.0, 5.0, -1.0});
  CHECK_THROWS_AS(ratio_series(eta, negative), DomainError);
}

TEST_CASE("ratio series requires alignment") {
  CHECK_THROWS_AS(
      ratio_series(hourly(UtcHour{0}, {1, 2}), hourly(UtcHour{3}, {1, 2})),
      AlignmentError);
}

}  // TEST_SUITE("stats")
