#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "billiards/errors.hpp"
#include "billiards/rng.hpp"
#include "billiards/stats.hpp"

using namespace billiards;
using namespace billiards::stats;

TEST_CASE("normal cdf and chi-square survival") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-9));

    CHECK(chi_square_sf(0.0, 5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi_square_sf(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-8));
}

TEST_CASE("ks survival function endpoints") {
    CHECK(ks_sf(0.0, 1000.0) == doctest::Approx(1.0).epsilon(1e-9));
    const double p = ks_sf(0.05, 1000.0);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(ks_sf(0.3, 1000.0) < 1e-6);
}

TEST_CASE("binned measure accumulates weights") {
    BinnedMeasure bm(4);
    bm.add(0.1);
    bm.add(0.3, 2.0);
    bm.add(0.999);
    CHECK(bm.bins() == 4);
    CHECK(bm.total() == doctest::Approx(4.0));
    CHECK(bm.counts()[0] == doctest::Approx(1.0));
    CHECK(bm.counts()[1] == doctest::Approx(2.0));
    CHECK(bm.counts()[3] == doctest::Approx(1.0));
    const auto norm = bm.normalized();
    CHECK(norm[1] == doctest::Approx(0.5));
}

TEST_CASE("wilson interval brackets the sample proportion") {
    const Interval iv = wilson_interval(50.0, 100.0, 1.959963984540054);
    CHECK(iv.lo < 0.5);
    CHECK(iv.hi > 0.5);
    CHECK(iv.lo > 0.39);
    CHECK(iv.hi < 0.61);
    CHECK(0.5 - iv.lo == doctest::Approx(iv.hi - 0.5).epsilon(1e-12));

    const Interval edge = wilson_interval(0.0, 50.0, 1.959963984540054);
    CHECK(edge.lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(edge.hi > 0.0);
}

TEST_CASE("chi-square uniform accepts uniform draws and rejects skew") {
    Rng rng(404, 0);
    std::vector<double> counts(10, 0.0);
    for (int i = 0; i < 10000; ++i) counts[rng.below(10)] += 1.0;
    CHECK(chi_square_uniform(counts, 0.001).pass);

    std::vector<double> skew(10, 1000.0);
    skew[0] = 1500.0;
    CHECK_FALSE(chi_square_uniform(skew, 0.001).pass);

    std::vector<double> sparse(10, 5.0);
    CHECK_THROWS_AS(chi_square_uniform(sparse, 0.001), InsufficientCountsError);
}

TEST_CASE("chi-square against given probabilities") {
    Rng rng(405, 0);
    const std::vector<double> probs = {0.5, 0.3, 0.2};
    std::vector<double> counts(3, 0.0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        counts[u < 0.5 ? 0 : (u < 0.8 ? 1 : 2)] += 1.0;
    }
    CHECK(chi_square_vs(counts, probs, 0.001).pass);
    CHECK_FALSE(chi_square_vs(counts, {0.2, 0.3, 0.5}, 0.001).pass);
}

TEST_CASE("independence test on product and non-product tables") {
    Rng rng(406, 0);
    std::vector<std::vector<double>> indep(3, std::vector<double>(4, 0.0));
    std::vector<std::vector<double>> dep(3, std::vector<double>(4, 0.0));
    for (int i = 0; i < 30000; ++i) {
        const int r = static_cast<int>(rng.below(3));
        indep[r][rng.below(4)] += 1.0;
        // column depends on the row
        dep[r][(r + static_cast<int>(rng.below(2))) % 4] += 1.0;
    }
    CHECK(chi_square_independence(indep, 0.001).pass);
    CHECK_FALSE(chi_square_independence(dep, 0.001).pass);
}

TEST_CASE("symmetry test on pair counts") {
    Rng rng(407, 0);
    const int k = 4;
    std::vector<std::vector<double>> sym(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < 40000; ++i) {
        sym[rng.below(k)][rng.below(k)] += 1.0;
    }
    CHECK(chi_square_symmetry(sym, 0.001).pass);

    auto tilted = sym;
    tilted[0][1] += 400.0;
    CHECK_FALSE(chi_square_symmetry(tilted, 0.001).pass);
}

TEST_CASE("one-sample ks") {
    Rng rng(408, 0);
    std::vector<double> u(5000);
    for (auto& x : u) x = rng.uniform();
    const auto id = [](double t) { return t; };
    CHECK(ks_test(u, id, 0.001).pass);

    std::vector<double> sq(5000);
    for (size_t i = 0; i < sq.size(); ++i) sq[i] = u[i] * u[i];
    CHECK_FALSE(ks_test(sq, id, 0.001).pass);

    std::vector<double> tiny(50, 0.5);
    CHECK_THROWS_AS(ks_test(tiny, id, 0.001), SeriesTooShortError);
}

TEST_CASE("two-sample ks") {
    Rng rng(409, 0);
    std::vector<double> a(4000), b(4000), c(4000);
    for (auto& x : a) x = rng.uniform();
    for (auto& x : b) x = rng.uniform();
    for (auto& x : c) x = std::sqrt(rng.uniform());
    CHECK(ks_two_sample(a, b, 0.001).pass);
    CHECK_FALSE(ks_two_sample(a, c, 0.001).pass);
}

TEST_CASE("batch means recover the variance of iid noise") {
    Rng rng(410, 0);
    const int batches = 40;
    std::vector<double> series(batches * 500);
    for (auto& x : series) x = rng.uniform();
    const BatchMeans bm = batch_means(series, batches, 0.001);
    CHECK(bm.n_batches == batches);
    CHECK(bm.batch_length == 500);
    CHECK(bm.mean == doctest::Approx(0.5).epsilon(0.01));
    // asymptotic variance of the mean = 1/12 for iid uniform
    CHECK(bm.asymptotic_variance == doctest::Approx(1.0 / 12.0).epsilon(0.35));
    CHECK(bm.normality.pass);

    std::vector<double> tiny(100, 0.0);
    CHECK_THROWS_AS(batch_means(tiny, 10, 0.001), SeriesTooShortError);
}

TEST_CASE("total variation distance") {
    CHECK(tv_distance({1, 1}, {1, 1}) == doctest::Approx(0.0));
    CHECK(tv_distance({1, 0}, {0, 1}) == doctest::Approx(1.0));
    CHECK(tv_distance({3, 1}, {1, 1}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(tv_distance({1, 2}, {1, 2, 3}), BinMismatchError);
}

TEST_CASE("least-squares slope") {
    const std::vector<double> x = {0, 1, 2, 3, 4};
    const std::vector<double> y = {1, 3, 5, 7, 9};
    CHECK(linear_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
    const std::vector<double> noisy = {1.1, 2.9, 5.2, 6.8, 9.0};
    CHECK(linear_slope(x, noisy) == doctest::Approx(2.0).epsilon(0.05));
}
