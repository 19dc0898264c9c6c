#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cws::stats {

/// Neumaier compensated sum; the result does not depend on summation order
/// beyond the last ulp for well-conditioned inputs.
class CompensatedSum {
  public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

  private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Two-sided one-sample Kolmogorov-Smirnov statistic against `cdf`. Sorts a copy.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic critical value sqrt(-ln(alpha/2)/2)/sqrt(n).
double ks_critical(std::size_t n, double alpha);

/// Pearson chi-squared statistic of observed counts against expected probabilities.
double chi_square_statistic(std::span<const std::size_t> observed, std::span<const double> probabilities);

/// Upper-tail critical value of the chi-squared distribution with `dof` degrees of freedom.
double chi_square_critical(double dof, double alpha);

} // namespace cws::stats
