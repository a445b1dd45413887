#include "billiards/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace billiards::stats {

namespace {

TestResult make_result(std::string name, double stat, double p, long n, double alpha) {
    TestResult r;
    r.test = std::move(name);
    r.statistic = stat;
    r.p_value = p;
    r.n = n;
    r.alpha = alpha;
    r.pass = p > alpha;
    return r;
}

double pearson_statistic(const std::vector<double>& counts,
                         const std::vector<double>& expected) {
    double stat = 0.0;
    for (size_t i = 0; i < counts.size(); ++i) {
        const double d = counts[i] - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

}  // namespace

BinnedMeasure::BinnedMeasure(int bins) {
    if (bins < 1) throw BinMismatchError("BinnedMeasure: need at least one bin");
    counts_.assign(bins, 0.0);
}

void BinnedMeasure::add(double coord, double weight) {
    int k = static_cast<int>(coord * counts_.size());
    k = std::clamp(k, 0, static_cast<int>(counts_.size()) - 1);
    counts_[k] += weight;
    total_ += weight;
}

std::vector<double> BinnedMeasure::normalized() const {
    std::vector<double> out = counts_;
    if (total_ > 0.0)
        for (double& v : out) v /= total_;
    return out;
}

Interval wilson_interval(double successes, double n, double z) {
    if (n <= 0.0) return {0.0, 1.0};
    const double p = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double normal_cdf(double x) {
    static const boost::math::normal_distribution<double> dist(0.0, 1.0);
    return boost::math::cdf(dist, x);
}

double chi_square_sf(double statistic, int dof) {
    if (statistic <= 0.0) return 1.0;
    const boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

double ks_sf(double statistic, double n_effective) {
    // Kolmogorov asymptotic tail with the Stephens small-sample correction.
    const double rn = std::sqrt(n_effective);
    const double lambda = (rn + 0.12 + 0.11 / rn) * statistic;
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * lambda * lambda * k * k);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult chi_square_uniform(const std::vector<double>& counts, double alpha) {
    const int bins = static_cast<int>(counts.size());
    if (bins < 2) throw BinMismatchError("chi_square_uniform: need >= 2 cells");
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (total / bins < 20.0)
        throw InsufficientCountsError(
            "chi_square_uniform: expected count per cell below 20");
    const std::vector<double> expected(bins, total / bins);
    const double stat = pearson_statistic(counts, expected);
    return make_result("chi_square_uniform", stat, chi_square_sf(stat, bins - 1),
                       static_cast<long>(total), alpha);
}

TestResult chi_square_vs(const std::vector<double>& counts,
                         const std::vector<double>& probs, double alpha) {
    if (counts.size() != probs.size())
        throw BinMismatchError("chi_square_vs: cell count mismatch");
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    std::vector<double> expected(counts.size());
    for (size_t i = 0; i < probs.size(); ++i) {
        expected[i] = total * probs[i];
        if (expected[i] < 20.0)
            throw InsufficientCountsError(
                "chi_square_vs: expected count per cell below 20");
    }
    const double stat = pearson_statistic(counts, expected);
    return make_result("chi_square_vs", stat,
                       chi_square_sf(stat, static_cast<int>(counts.size()) - 1),
                       static_cast<long>(total), alpha);
}

TestResult chi_square_independence(const std::vector<std::vector<double>>& table,
                                   double alpha) {
    const int rows = static_cast<int>(table.size());
    if (rows < 2) throw BinMismatchError("chi_square_independence: need >= 2 rows");
    const int cols = static_cast<int>(table[0].size());
    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    double total = 0.0;
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(table[i].size()) != cols)
            throw BinMismatchError("chi_square_independence: ragged table");
        for (int j = 0; j < cols; ++j) {
            row_sum[i] += table[i][j];
            col_sum[j] += table[i][j];
            total += table[i][j];
        }
    }
    double stat = 0.0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double expected = row_sum[i] * col_sum[j] / total;
            if (expected < 20.0)
                throw InsufficientCountsError(
                    "chi_square_independence: expected cell count below 20");
            const double d = table[i][j] - expected;
            stat += d * d / expected;
        }
    const int dof = (rows - 1) * (cols - 1);
    return make_result("chi_square_independence", stat, chi_square_sf(stat, dof),
                       static_cast<long>(total), alpha);
}

TestResult chi_square_symmetry(const std::vector<std::vector<double>>& table,
                               double alpha) {
    const int n = static_cast<int>(table.size());
    double stat = 0.0;
    int dof = 0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(table[i].size()) != n)
            throw BinMismatchError("chi_square_symmetry: matrix must be square");
        for (int j = 0; j < n; ++j) total += table[i][j];
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double s = table[i][j] + table[j][i];
            if (s <= 0.0) continue;
            const double d = table[i][j] - table[j][i];
            stat += d * d / s;
            dof += 1;
        }
    if (dof == 0) throw InsufficientCountsError("chi_square_symmetry: empty table");
    return make_result("chi_square_symmetry", stat, chi_square_sf(stat, dof),
                       static_cast<long>(total), alpha);
}

TestResult ks_test(std::vector<double> samples,
                   const std::function<double(double)>& cdf, double alpha) {
    const long n = static_cast<long>(samples.size());
    if (n < 100) throw SeriesTooShortError("ks_test: need at least 100 samples");
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (long i = 0; i < n; ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return make_result("ks", d, ks_sf(d, static_cast<double>(n)), n, alpha);
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
    const long n = static_cast<long>(a.size());
    const long m = static_cast<long>(b.size());
    if (n < 100 || m < 100)
        throw SeriesTooShortError("ks_two_sample: need at least 100 samples each");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n -
                                 static_cast<double>(j) / m));
    }
    const double ne = static_cast<double>(n) * m / (n + m);
    return make_result("ks_two_sample", d, ks_sf(d, ne), n + m, alpha);
}

BatchMeans batch_means(const std::vector<double>& series, int n_batches, double alpha) {
    if (n_batches < 2) throw SeriesTooShortError("batch_means: need >= 2 batches");
    const long n = static_cast<long>(series.size());
    if (n < 100L * n_batches)
        throw SeriesTooShortError("batch_means: series shorter than 100 x batches");
    const long len = n / n_batches;
    BatchMeans out;
    out.n_batches = n_batches;
    out.batch_length = len;
    std::vector<double> means(n_batches, 0.0);
    for (int b = 0; b < n_batches; ++b) {
        double s = 0.0;
        for (long k = 0; k < len; ++k) s += series[b * len + k];
        means[b] = s / len;
    }
    out.mean = std::accumulate(means.begin(), means.end(), 0.0) / n_batches;
    double ss = 0.0;
    for (double m : means) ss += (m - out.mean) * (m - out.mean);
    const double var_batch = ss / (n_batches - 1);
    out.batch_sd = std::sqrt(var_batch);
    out.asymptotic_variance = var_batch * len;
    if (out.batch_sd > 0.0 && n_batches >= 100) {
        std::vector<double> standardized;
        for (double m : means) standardized.push_back((m - out.mean) / out.batch_sd);
        out.normality = ks_test(std::move(standardized), normal_cdf, alpha);
        out.normality.test = "batch_means_normality";
    } else if (out.batch_sd > 0.0) {
        // Too few batches for the asymptotic KS null; no verdict reported.
        out.normality = make_result("batch_means_normality_skipped", 0.0, 1.0,
                                    n_batches, alpha);
    } else {
        out.normality = make_result("batch_means_normality", 1.0, 0.0, n_batches, alpha);
    }
    return out;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw BinMismatchError("tv_distance: histograms use different cells");
    const double ta = std::accumulate(a.begin(), a.end(), 0.0);
    const double tb = std::accumulate(b.begin(), b.end(), 0.0);
    if (ta <= 0.0 || tb <= 0.0)
        throw BinMismatchError("tv_distance: empty histogram");
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] / ta - b[i] / tb);
    return 0.5 * d;
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw BinMismatchError("linear_slope: need matching series of length >= 2");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

}  // namespace billiards::stats
