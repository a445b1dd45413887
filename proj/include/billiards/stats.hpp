#pragma once

#include <functional>
#include <string>
#include <vector>

#include "billiards/errors.hpp"

namespace billiards::stats {

// Outcome of one hypothesis test; pass means p_value > alpha.
struct TestResult {
    std::string test;
    double statistic = 0.0;
    double p_value = 0.0;
    long n = 0;
    double alpha = 0.0;
    bool pass = false;
};

// Weighted counts over equal-width cells of [0, 1). With a measure-uniform
// coordinate the cells have equal measure, so uniformity on the boundary
// reduces to uniformity of this histogram.
class BinnedMeasure {
  public:
    explicit BinnedMeasure(int bins);
    void add(double coord, double weight = 1.0);
    int bins() const { return static_cast<int>(counts_.size()); }
    double total() const { return total_; }
    const std::vector<double>& counts() const { return counts_; }
    std::vector<double> normalized() const;

  private:
    std::vector<double> counts_;
    double total_ = 0.0;
};

// Binomial proportion confidence interval (Wilson score), z ~ quantile of
// the standard normal for the desired coverage.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};
Interval wilson_interval(double successes, double n, double z);

// Survival functions used for p-values.
double normal_cdf(double x);
double chi_square_sf(double statistic, int dof);
double ks_sf(double statistic, double n_effective);

// Pearson chi-square against the uniform law over the cells. Requires an
// expected count of at least 20 per cell (InsufficientCounts otherwise).
TestResult chi_square_uniform(const std::vector<double>& counts, double alpha);

// Pearson chi-square against arbitrary cell probabilities.
TestResult chi_square_vs(const std::vector<double>& counts,
                         const std::vector<double>& probs, double alpha);

// Independence test on a two-way contingency table (rows x cols).
TestResult chi_square_independence(const std::vector<std::vector<double>>& table,
                                   double alpha);

// Symmetry (Bowker) test on a square count matrix: pairs (i, j) vs (j, i).
TestResult chi_square_symmetry(const std::vector<std::vector<double>>& table,
                               double alpha);

// One-sample Kolmogorov-Smirnov with the asymptotic null; needs n >= 100.
TestResult ks_test(std::vector<double> samples,
                   const std::function<double(double)>& cdf, double alpha);

// Two-sample Kolmogorov-Smirnov with the asymptotic null.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha);

// Batch-means estimate of the asymptotic variance of the series mean,
// with a KS normality check of the standardized batch means. The series
// must be at least 100 x n_batches long (SeriesTooShort).
struct BatchMeans {
    double mean = 0.0;
    double asymptotic_variance = 0.0;  // var of sqrt(n) * (mean - mu)
    double batch_sd = 0.0;
    int n_batches = 0;
    long batch_length = 0;
    TestResult normality;
};
BatchMeans batch_means(const std::vector<double>& series, int n_batches, double alpha);

// Total variation distance between two histograms over identical cells
// (half L1 of the normalized counts). BinMismatch on size disagreement.
double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

// Least-squares slope of y against x.
double linear_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace billiards::stats
