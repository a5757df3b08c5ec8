#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vremix {

/// Marginal shapes and copula correlation of hourly wind speeds across a
/// block of gridpoints. Fitted once from hourly training data and held
/// constant; scale parameters are re-anchored day by day to the daily mean.
struct WeibullCopulaParams {
  std::vector<std::string> gridpoint_ids;
  Eigen::VectorXd shape;        // k_g > 0
  Eigen::MatrixXd correlation;  // PSD, unit diagonal

  void validate() const;

  /// Two-file bundle: `gridpoint_id,shape` and a dense correlation CSV.
  void save(const std::filesystem::path& shape_path,
            const std::filesystem::path& correlation_path) const;
  static WeibullCopulaParams load(const std::filesystem::path& shape_path,
                                  const std::filesystem::path& correlation_path);
};

/// Weibull shape by maximum likelihood (Newton on the profile likelihood,
/// tolerance 1e-10, max 100 iterations). Throws FitError on degenerate data.
double weibull_mle_shape(const std::vector<double>& samples);

/// Profile-likelihood scale given the shape: (mean(x^k))^(1/k).
double weibull_mle_scale(const std::vector<double>& samples, double shape);

/// Nearest-PSD repair: eigenvalues clipped at 0, diagonal renormalized to 1.
Eigen::MatrixXd nearest_psd_correlation(const Eigen::MatrixXd& r);

/// Fits shapes and the Gaussian-copula correlation from hourly training
/// speeds (rows = hours, cols = gridpoints; >= 30 days). Zeros are floored
/// at 0.01 m/s before fitting.
WeibullCopulaParams fit_intraday_params(const Eigen::MatrixXd& hourly_speeds,
                                        std::vector<std::string> gridpoint_ids);

/// Draws 24 hourly speeds per gridpoint whose distribution mean equals the
/// given daily mean. Hours are independent; gridpoints are coupled through
/// the copula correlation. A zero daily mean yields 24 exact zeros.
class IntradaySampler {
 public:
  explicit IntradaySampler(WeibullCopulaParams params);

  /// 24 x G speeds for one day. Draws are keyed by (seed, day_index, hour,
  /// gridpoint) and therefore independent of call order.
  Eigen::MatrixXd sample_day(const Eigen::VectorXd& daily_means_ms,
                             std::uint64_t seed, std::int64_t day_index) const;

  const WeibullCopulaParams& params() const { return params_; }

 private:
  WeibullCopulaParams params_;
  Eigen::MatrixXd chol_;  // lower factor of the repaired correlation
};

}  // namespace vremix
