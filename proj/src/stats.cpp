#include "cws/stats.hpp"

#include "cws/error.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

namespace cws::stats {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw Error(Errc::EmptyInput, "mean of no samples");
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw Error(Errc::EmptyInput, "variance needs two samples");
    const double m = mean(xs);
    CompensatedSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(xs.size() - 1);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw Error(Errc::InvalidParameter, "pearson needs two equal-length samples");
    }
    const double mx = mean(xs);
    const double my = mean(ys);
    CompensatedSum sxy;
    CompensatedSum sxx;
    CompensatedSum syy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw Error(Errc::EmptyInput, "KS statistic of no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_critical(std::size_t n, double alpha) {
    return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

double chi_square_statistic(std::span<const std::size_t> observed, std::span<const double> probabilities) {
    if (observed.size() != probabilities.size() || observed.empty()) {
        throw Error(Errc::InvalidParameter, "observed and expected bins differ in size");
    }
    const double n = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::size_t{0}));
    double chi2 = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = n * probabilities[i];
        const double diff = static_cast<double>(observed[i]) - expected;
        chi2 += diff * diff / expected;
    }
    return chi2;
}

double chi_square_critical(double dof, double alpha) {
    return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), alpha));
}

} // namespace cws::stats
