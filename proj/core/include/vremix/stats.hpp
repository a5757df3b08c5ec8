#pragma once

#include <Eigen/Core>
#include <span>

#include "vremix/series.hpp"

namespace vremix {

/// Arithmetic mean. Throws EmptySeries on an empty input.
double sample_mean(const HourlySeries& s);

/// Unbiased sample covariance (divisor N-1) of K aligned series.
/// Throws AlignmentError when the series do not share one time axis and
/// InsufficientData when fewer than 2 samples are available.
Eigen::MatrixXd sample_covariance(std::span<const HourlySeries> series);

/// Pointwise quotient numerator(t) / demand_total(t). The denominator must be
/// strictly positive everywhere; a zero or negative value raises DomainError
/// naming the offending timestamp.
HourlySeries ratio_series(const HourlySeries& numerator,
                          const HourlySeries& demand_total);

}  // namespace vremix
