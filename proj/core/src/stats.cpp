#include "vremix/stats.hpp"

#include "vremix/errors.hpp"

namespace vremix {

double sample_mean(const HourlySeries& s) {
  if (s.empty()) throw EmptySeries("sample_mean: empty series");
  double sum = 0.0;
  for (double v : s.values) sum += v;
  return sum / double(s.size());
}

Eigen::MatrixXd sample_covariance(std::span<const HourlySeries> series) {
  const std::size_t k = series.size();
  if (k == 0) throw EmptySeries("sample_covariance: no series");
  const std::size_t n = series[0].size();
  for (const auto& s : series)
    if (!aligned(s, series[0]))
      throw AlignmentError("sample_covariance: series are not aligned");
  if (n < 2)
    throw InsufficientData("sample_covariance: need at least 2 samples, got " +
                           std::to_string(n));

  Eigen::MatrixXd x(n, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) x(Eigen::Index(i), Eigen::Index(j)) = series[j][i];
  Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  return (x.transpose() * x) / double(n - 1);
}

HourlySeries ratio_series(const HourlySeries& numerator,
                          const HourlySeries& demand_total) {
  if (!aligned(numerator, demand_total))
    throw AlignmentError("ratio_series: numerator and demand are not aligned");
  HourlySeries out{numerator.start, std::vector<double>(numerator.size())};
  for (std::size_t i = 0; i < numerator.size(); ++i) {
    double d = demand_total[i];
    if (!(d > 0.0))
      throw DomainError("ratio_series: demand not strictly positive at " +
                        format_utc_hour(numerator.time_at(i)));
    out.values[i] = numerator[i] / d;
  }
  return out;
}

}  // namespace vremix
