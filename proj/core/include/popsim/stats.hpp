#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace popsim {

/// Descriptive statistics of a sample; quantiles use linear interpolation
/// between order statistics (the "type 7" estimator).
struct SampleStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  ///< unbiased (n-1) estimator; 0 for count < 2
  double stderr_mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;

  /// Half-width of the normal-approximation 95% interval for the mean.
  double ci95() const noexcept { return 1.959963984540054 * stderr_mean; }
};

SampleStats summarize(std::span<const double> values);

/// Quantile of an already sorted sample, q in [0, 1].
double sorted_quantile(std::span<const double> sorted, double q);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion; z = 1.96 by default.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Pearson chi-square statistic of observed counts against a uniform expectation.
double chi_square_uniform(std::span<const std::size_t> counts);

/// Upper-tail critical value of the chi-square distribution, e.g. alpha = 0.001.
double chi_square_critical(std::size_t degrees_of_freedom, double alpha);

}  // namespace popsim
