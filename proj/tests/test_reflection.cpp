#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "billiards/errors.hpp"
#include "billiards/geometry.hpp"
#include "billiards/reflection.hpp"
#include "billiards/rng.hpp"
#include "billiards/stats.hpp"

using namespace billiards;

namespace {
const double pi = std::numbers::pi;

BoundaryPoint tilted_point() {
    BoundaryPoint p;
    p.position = {1.0, 2.0, 0.0};
    const double a = 0.73;
    p.normal = {std::cos(a), std::sin(a), 0.0};
    return p;
}
}  // namespace

TEST_CASE("law constants by dimension") {
    CHECK(law_constants(2).cosine_normalizer == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law_constants(2).chord_factor == doctest::Approx(pi).epsilon(1e-15));
    CHECK(law_constants(3).cosine_normalizer == doctest::Approx(1.0 / pi).epsilon(1e-15));
    CHECK(law_constants(3).chord_factor == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(law_constants(4), UnsupportedDimensionError);
}

TEST_CASE("frames are orthonormal with the normal first") {
    BoundaryPoint p = tilted_point();
    const Mat3 frame2 = build_frame(p, 2);
    const Vec c0 = frame2 * Vec{1, 0, 0};
    const Vec c1 = frame2 * Vec{0, 1, 0};
    CHECK((c0 - p.normal).norm() < 1e-14);
    CHECK(std::abs(c0.dot(c1)) < 1e-14);
    CHECK(c1.norm() == doctest::Approx(1.0).epsilon(1e-14));

    BoundaryPoint q;
    q.position = {0, 0, 0};
    q.normal = Vec{0.3, -0.4, 0.8660254037844386}.normalized();
    const Mat3 frame3 = build_frame(q, 3);
    const Vec a = frame3 * Vec{1, 0, 0};
    const Vec b = frame3 * Vec{0, 1, 0};
    const Vec c = frame3 * Vec{0, 0, 1};
    CHECK((a - q.normal).norm() < 1e-12);
    CHECK(std::abs(a.dot(b)) < 1e-12);
    CHECK(std::abs(a.dot(c)) < 1e-12);
    CHECK(std::abs(b.dot(c)) < 1e-12);
    CHECK((b.cross(c) - a).norm() < 1e-12);

    q.is_regular = false;
    CHECK_THROWS_AS(build_frame(q, 3), NonRegularPointError);
}

TEST_CASE("cosine density values and domain") {
    const ReflectionLaw law2 = ReflectionLaw::cosine(2);
    CHECK(law2.pdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law2.pdf(pi / 3) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(law2.pdf(pi / 2), OutOfRangeError);
    CHECK_THROWS_AS(law2.pdf(-0.1), OutOfRangeError);

    const ReflectionLaw law3 = ReflectionLaw::cosine(3);
    CHECK(law3.pdf(0.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));

    const ReflectionLaw flat2 = ReflectionLaw::uniform_hemisphere(2);
    CHECK(flat2.pdf(0.3) == doctest::Approx(1.0 / pi).epsilon(1e-12));
    const ReflectionLaw flat3 = ReflectionLaw::uniform_hemisphere(3);
    CHECK(flat3.pdf(0.3) == doctest::Approx(1.0 / (2 * pi)).epsilon(1e-12));
}

TEST_CASE("angle CDFs take their textbook forms") {
    const ReflectionLaw law2 = ReflectionLaw::cosine(2);
    CHECK(law2.angle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(law2.angle_cdf(pi / 6) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(law2.angle_cdf(-pi / 2) == doctest::Approx(0.0).epsilon(1e-12));

    const ReflectionLaw law3 = ReflectionLaw::cosine(3);
    // P(phi <= t) = sin^2 t
    CHECK(law3.angle_cdf(pi / 4) == doctest::Approx(0.5).epsilon(1e-12));

    const ReflectionLaw flat2 = ReflectionLaw::uniform_hemisphere(2);
    CHECK(flat2.angle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(flat2.angle_cdf(pi / 4) == doctest::Approx(0.75).epsilon(1e-12));

    const ReflectionLaw flat3 = ReflectionLaw::uniform_hemisphere(3);
    // P(phi <= t) = 1 - cos t
    CHECK(flat3.angle_cdf(pi / 3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampled angles match their CDFs") {
    struct Case {
        ReflectionLaw law;
        const char* name;
    };
    const Case cases[] = {
        {ReflectionLaw::cosine(2), "cosine2"},
        {ReflectionLaw::cosine(3), "cosine3"},
        {ReflectionLaw::uniform_hemisphere(2), "uniform2"},
        {ReflectionLaw::uniform_hemisphere(3), "uniform3"},
    };
    int stream = 0;
    for (const auto& c : cases) {
        CAPTURE(c.name);
        Rng rng(31415, stream++);
        std::vector<double> angles(20000);
        for (auto& a : angles) a = c.law.sample_angle(rng);
        const auto res = stats::ks_test(
            angles, [&](double t) { return c.law.angle_cdf(t); }, 0.001);
        CHECK(res.p_value > 0.001);
    }
}

TEST_CASE("sampled directions live on the inward half-sphere") {
    const BoundaryPoint p = tilted_point();
    const ReflectionLaw law = ReflectionLaw::cosine(2);
    Rng rng(8, 0);
    double cos_sum = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const Vec v = law.sample_direction(p, rng);
        REQUIRE(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
        const double c = v.dot(p.normal);
        REQUIRE(c > 0.0);
        cos_sum += c;
    }
    // E cos = pi/4 in 2-D
    CHECK(std::abs(cos_sum / n - pi / 4) < 5 * 0.31 / std::sqrt(double(n)));

    BoundaryPoint q;
    q.position = {0, 0, 0};
    q.normal = Vec{0.2, 0.5, -0.6}.normalized();
    const ReflectionLaw law3 = ReflectionLaw::cosine(3);
    cos_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec v = law3.sample_direction(q, rng);
        REQUIRE(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
        const double c = v.dot(q.normal);
        REQUIRE(c > 0.0);
        cos_sum += c;
    }
    // E cos = 2/3 in 3-D
    CHECK(std::abs(cos_sum / n - 2.0 / 3.0) < 5 * 0.24 / std::sqrt(double(n)));
}

TEST_CASE("flat custom law reduces to the uniform hemisphere") {
    const std::vector<std::pair<double, double>> flat = {{0.0, 1.0}, {1.5, 1.0}};
    const ReflectionLaw law2 = ReflectionLaw::custom(2, flat);
    CHECK(law2.pdf(0.7) == doctest::Approx(1.0 / pi).epsilon(1e-6));
    const ReflectionLaw law3 = ReflectionLaw::custom(3, flat);
    CHECK(law3.pdf(0.7) == doctest::Approx(1.0 / (2 * pi)).epsilon(1e-6));

    Rng rng(5, 5);
    std::vector<double> angles(20000);
    for (auto& a : angles) a = law2.sample_angle(rng);
    const auto res = stats::ks_test(
        angles, [&](double t) { return law2.angle_cdf(t); }, 0.001);
    CHECK(res.p_value > 0.001);
}

TEST_CASE("custom law rejects malformed knot tables") {
    using Knots = std::vector<std::pair<double, double>>;
    CHECK_THROWS_AS(ReflectionLaw::custom(2, Knots{{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(ReflectionLaw::custom(2, Knots{{0.1, 1.0}, {1.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ReflectionLaw::custom(2, Knots{{0.0, 1.0}, {1.0, -2.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ReflectionLaw::custom(2, Knots{{0.0, 1.0}, {0.5, 1.0}, {0.4, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ReflectionLaw::custom(2, Knots{{0.0, 1.0}, {2.0, 1.0}}),
                    std::invalid_argument);
}
