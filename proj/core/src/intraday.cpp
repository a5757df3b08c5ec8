#include "vremix/intraday.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "vremix/csv.hpp"
#include "vremix/errors.hpp"
#include "vremix/rng.hpp"

namespace vremix {

namespace {

constexpr double kSpeedFloor = 0.01;     // m/s, replaces exact zeros in fits
constexpr double kCdfClamp = 1e-12;      // keeps normal scores finite
constexpr double kPsdTolerance = 1e-8;   // eigenvalue tolerance of validate()

}  // namespace

void WeibullCopulaParams::validate() const {
  const Eigen::Index g = Eigen::Index(gridpoint_ids.size());
  if (shape.size() != g)
    throw ValidationError("intraday params: shape vector length mismatch");
  if (correlation.rows() != g || correlation.cols() != g)
    throw ValidationError("intraday params: correlation shape mismatch");
  for (Eigen::Index i = 0; i < g; ++i) {
    if (!(shape[i] > 0.0))
      throw ValidationError("intraday params: nonpositive shape for " +
                            gridpoint_ids[std::size_t(i)]);
    if (std::fabs(correlation(i, i) - 1.0) > 1e-12)
      throw ValidationError("intraday params: correlation diagonal is not 1");
  }
  if (!correlation.isApprox(correlation.transpose(), 1e-12))
    throw ValidationError("intraday params: correlation is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(correlation,
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTolerance)
    throw ValidationError("intraday params: correlation is not PSD");
}

double weibull_mle_shape(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw FitError("weibull fit: need at least 2 samples");
  double max_x = 0.0;
  for (double x : samples) {
    if (!(x > 0.0)) throw FitError("weibull fit: nonpositive sample");
    max_x = std::max(max_x, x);
  }

  // Work with y = x / max(x) so y^k never overflows; the shifted logs keep
  // the profile-likelihood equation unchanged.
  double mean_log = 0.0;
  for (double x : samples) mean_log += std::log(x);
  mean_log /= double(n);

  double var_log = 0.0;
  for (double x : samples) {
    double d = std::log(x) - mean_log;
    var_log += d * d;
  }
  var_log /= double(n);
  if (var_log <= 0.0)
    throw FitError("weibull fit: degenerate (constant) series");

  // g(k) = sum(x^k ln x)/sum(x^k) - 1/k - mean(ln x); strictly increasing.
  auto g_and_slope = [&](double k, double& g, double& slope) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (double x : samples) {
      double ly = std::log(x / max_x);
      double yk = std::exp(k * ly);
      s0 += yk;
      s1 += yk * ly;
      s2 += yk * ly * ly;
    }
    double ratio = s1 / s0;  // = sum(x^k ln x)/sum(x^k) - ln(max_x)
    g = ratio + std::log(max_x) - 1.0 / k - mean_log;
    slope = (s2 / s0 - ratio * ratio) + 1.0 / (k * k);
  };

  double kk = 1.2825498301618641 / std::sqrt(var_log);  // pi/sqrt(6) moment init
  double lo = 1e-6, hi = 1e6;
  for (int iter = 0; iter < 100; ++iter) {
    double g = 0.0, slope = 0.0;
    g_and_slope(kk, g, slope);
    if (g > 0.0)
      hi = std::min(hi, kk);
    else
      lo = std::max(lo, kk);
    double step = g / slope;
    double next = kk - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - kk) <= 1e-10 * std::max(1.0, kk)) return next;
    kk = next;
  }
  throw NumericalError("weibull fit: shape iteration did not converge");
}

double weibull_mle_scale(const std::vector<double>& samples, double shape) {
  if (samples.empty()) throw FitError("weibull fit: no samples");
  double max_x = 0.0;
  for (double x : samples) {
    if (!(x > 0.0)) throw FitError("weibull fit: nonpositive sample");
    max_x = std::max(max_x, x);
  }
  double s0 = 0.0;
  for (double x : samples) s0 += std::pow(x / max_x, shape);
  return max_x * std::pow(s0 / double(samples.size()), 1.0 / shape);
}

Eigen::MatrixXd nearest_psd_correlation(const Eigen::MatrixXd& r) {
  Eigen::MatrixXd sym = 0.5 * (r + r.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd a =
      es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  Eigen::VectorXd d = a.diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0))
      throw FitError("correlation repair: zero-variance column");
  Eigen::VectorXd inv_sqrt = d.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd out = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
  out = 0.5 * (out + out.transpose());
  out.diagonal().setOnes();
  return out;
}

WeibullCopulaParams fit_intraday_params(const Eigen::MatrixXd& hourly_speeds,
                                        std::vector<std::string> gridpoint_ids) {
  const Eigen::Index n = hourly_speeds.rows();
  const Eigen::Index g_count = Eigen::Index(gridpoint_ids.size());
  if (hourly_speeds.cols() != g_count)
    throw ValidationError("intraday fit: column/id count mismatch");
  if (n < 30 * 24)
    throw InsufficientData("intraday fit: need >= 30 days of hourly data, got " +
                           std::to_string(n) + " hours");

  WeibullCopulaParams params;
  params.gridpoint_ids = std::move(gridpoint_ids);
  params.shape.resize(g_count);
  Eigen::MatrixXd scores(n, g_count);

  std::vector<double> column(static_cast<std::size_t>(n));
  for (Eigen::Index g = 0; g < g_count; ++g) {
    for (Eigen::Index i = 0; i < n; ++i)
      column[std::size_t(i)] = std::max(hourly_speeds(i, g), kSpeedFloor);
    double k = weibull_mle_shape(column);
    double lambda = weibull_mle_scale(column, k);
    params.shape[g] = k;
    for (Eigen::Index i = 0; i < n; ++i) {
      double u = -std::expm1(-std::pow(column[std::size_t(i)] / lambda, k));
      u = std::min(std::max(u, kCdfClamp), 1.0 - kCdfClamp);
      scores(i, g) = norm_ppf(u);
    }
  }

  Eigen::RowVectorXd mean = scores.colwise().mean();
  scores.rowwise() -= mean;
  Eigen::MatrixXd cov = scores.transpose() * scores / double(n - 1);
  Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  for (Eigen::Index g = 0; g < g_count; ++g)
    if (!(sd[g] > 0.0))
      throw FitError("intraday fit: degenerate (constant) series for " +
                     params.gridpoint_ids[std::size_t(g)]);
  Eigen::VectorXd inv_sd = sd.cwiseInverse();
  Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  params.correlation = nearest_psd_correlation(corr);
  params.validate();
  return params;
}

void WeibullCopulaParams::save(
    const std::filesystem::path& shape_path,
    const std::filesystem::path& correlation_path) const {
  CsvWriter shapes(shape_path);
  shapes.row({"gridpoint_id", "shape"});
  for (std::size_t g = 0; g < gridpoint_ids.size(); ++g)
    shapes.row({gridpoint_ids[g], format_double(shape[Eigen::Index(g)])});
  shapes.commit();

  CsvWriter corr(correlation_path);
  std::vector<std::string> header{"gridpoint_id"};
  header.insert(header.end(), gridpoint_ids.begin(), gridpoint_ids.end());
  corr.row(header);
  for (std::size_t i = 0; i < gridpoint_ids.size(); ++i) {
    std::vector<std::string> row{gridpoint_ids[i]};
    for (std::size_t j = 0; j < gridpoint_ids.size(); ++j)
      row.push_back(
          format_double(correlation(Eigen::Index(i), Eigen::Index(j))));
    corr.row(row);
  }
  corr.commit();
}

WeibullCopulaParams WeibullCopulaParams::load(
    const std::filesystem::path& shape_path,
    const std::filesystem::path& correlation_path) {
  WeibullCopulaParams params;

  CsvReader shapes(shape_path);
  if (shapes.header() != std::vector<std::string>{"gridpoint_id", "shape"})
    throw ParseError(shape_path.string() +
                     ": expected header 'gridpoint_id,shape'");
  std::vector<double> shape_values;
  std::vector<std::string> fields;
  while (shapes.next_row(fields)) {
    params.gridpoint_ids.push_back(fields[0]);
    shape_values.push_back(parse_double(fields[1], shapes.location()));
  }
  params.shape = Eigen::Map<Eigen::VectorXd>(shape_values.data(),
                                             Eigen::Index(shape_values.size()));

  CsvReader corr(correlation_path);
  const std::size_t g = params.gridpoint_ids.size();
  if (corr.header().size() != g + 1)
    throw ParseError(correlation_path.string() +
                     ": correlation header does not match shape file");
  for (std::size_t j = 0; j < g; ++j)
    if (corr.header()[j + 1] != params.gridpoint_ids[j])
      throw ValidationError(correlation_path.string() +
                            ": gridpoint order differs from shape file");
  params.correlation.resize(Eigen::Index(g), Eigen::Index(g));
  std::size_t i = 0;
  while (corr.next_row(fields)) {
    if (i >= g)
      throw ParseError(corr.location() + ": too many correlation rows");
    if (fields[0] != params.gridpoint_ids[i])
      throw ValidationError(corr.location() + ": row order differs from header");
    for (std::size_t j = 0; j < g; ++j)
      params.correlation(Eigen::Index(i), Eigen::Index(j)) =
          parse_double(fields[j + 1], corr.location());
    ++i;
  }
  if (i != g)
    throw ParseError(correlation_path.string() + ": missing correlation rows");
  params.validate();
  return params;
}

IntradaySampler::IntradaySampler(WeibullCopulaParams params)
    : params_(std::move(params)) {
  params_.validate();
  Eigen::MatrixXd repaired = nearest_psd_correlation(params_.correlation);
  Eigen::LLT<Eigen::MatrixXd> llt(repaired);
  if (llt.info() == Eigen::Success) {
    chol_ = llt.matrixL();
  } else {
    // Near-singular empirical correlation: use the symmetric square root.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(repaired);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    chol_ = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  }
}

Eigen::MatrixXd IntradaySampler::sample_day(
    const Eigen::VectorXd& daily_means_ms, std::uint64_t seed,
    std::int64_t day_index) const {
  const Eigen::Index g_count = Eigen::Index(params_.gridpoint_ids.size());
  if (daily_means_ms.size() != g_count)
    throw ValidationError("sample_day: daily mean vector length mismatch");

  Eigen::VectorXd lambda(g_count);
  for (Eigen::Index g = 0; g < g_count; ++g) {
    double mean = daily_means_ms[g];
    if (!(mean >= 0.0)) throw DomainError("sample_day: negative daily mean");
    lambda[g] = mean / std::tgamma(1.0 + 1.0 / params_.shape[g]);
  }

  static const std::uint64_t kStage = Rng::label("intraday");
  Eigen::MatrixXd out(24, g_count);
  Eigen::VectorXd eps(g_count);
  for (int h = 0; h < 24; ++h) {
    for (Eigen::Index g = 0; g < g_count; ++g) {
      Rng rng(Rng::key(seed, {kStage, std::uint64_t(day_index),
                              std::uint64_t(h), std::uint64_t(g)}));
      eps[g] = rng.normal();
    }
    Eigen::VectorXd z = chol_ * eps;
    for (Eigen::Index g = 0; g < g_count; ++g) {
      if (daily_means_ms[g] == 0.0) {
        out(h, g) = 0.0;
        continue;
      }
      // v = F^-1(Phi(z)); 1 - Phi(z) = Phi(-z) avoids cancellation.
      double tail = norm_cdf(-z[g]);
      out(h, g) = lambda[g] *
                  std::pow(-std::log(tail), 1.0 / params_.shape[g]);
    }
  }
  return out;
}

}  // namespace vremix
