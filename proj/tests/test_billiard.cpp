#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "billiards/billiard.hpp"
#include "billiards/errors.hpp"
#include "billiards/geometry.hpp"
#include "billiards/reflection.hpp"
#include "billiards/rng.hpp"

using namespace billiards;

namespace {
const double pi = std::numbers::pi;
Domain unit_disk() { return Domain(Disk{{0, 0, 0}, 1.0}); }
}  // namespace

TEST_CASE("path structure: times increase, nodes connect, speed is one") {
    const Domain disk = unit_disk();
    const ReflectionLaw law = ReflectionLaw::cosine(2);
    Rng rng(11, 0);
    const BilliardPath path = make_path(disk, law, {0.1, -0.2, 0}, {1, 0, 0}, 50.0, rng);
    REQUIRE(path.times.size() == path.nodes.size());
    REQUIRE(path.times.size() >= 2);
    CHECK(path.times.front() == 0.0);
    CHECK(path.times.back() == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(path.total_time == doctest::Approx(50.0));
    for (size_t i = 1; i < path.times.size(); ++i) {
        const double dt = path.times[i] - path.times[i - 1];
        REQUIRE(dt > 0.0);
        // unit speed: segment length equals elapsed time
        CHECK(distance(path.nodes[i], path.nodes[i - 1]) ==
              doctest::Approx(dt).epsilon(1e-9));
    }
    // interior nodes sit on the boundary
    for (size_t i = 1; i + 1 < path.nodes.size(); ++i)
        CHECK(path.nodes[i].norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("state_at interpolates position and holds velocity") {
    const Domain disk = unit_disk();
    const ReflectionLaw law = ReflectionLaw::cosine(2);
    Rng rng(12, 0);
    const BilliardPath path =
        make_path(disk, law, {0.0, 0.0, 0}, {0, 1, 0}, 30.0, rng);

    const PathState at0 = state_at(path, 0.0);
    CHECK(at0.position.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at0.velocity.y == doctest::Approx(1.0).epsilon(1e-12));

    // halfway through the first flight (first hit is at distance 1)
    const PathState mid = state_at(path, 0.5);
    CHECK(mid.position.y == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(mid.velocity.norm() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(state_at(path, -1.0), TimeOutOfRangeError);
    CHECK_THROWS_AS(state_at(path, 30.0 + 1e-6), TimeOutOfRangeError);
}

TEST_CASE("occupation time of a concentric half-radius disk") {
    const Domain disk = unit_disk();
    const ReflectionLaw law = ReflectionLaw::cosine(2);
    const std::vector<Region> half = {RegionBall{{0, 0, 0}, 0.5}};
    CHECK(region_measure(half, 2) == doctest::Approx(pi / 4).epsilon(1e-12));

    Rng rng(13, 0);
    double frac_sum = 0.0;
    const int paths = 60;
    for (int i = 0; i < paths; ++i) {
        const BilliardPath p = make_path_stationary(disk, law, 200.0, rng);
        frac_sum += occupation_fraction(p, half);
    }
    // time average over a long stationary path = area fraction 1/4
    CHECK(frac_sum / paths == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("occupation time is exact on a hand-built path") {
    // single flight crossing the ball x^2+y^2 <= 0.25 along the x axis
    BilliardPath path;
    path.times = {0.0, 2.0};
    path.nodes = {{-1.0, 0.0, 0}, {1.0, 0.0, 0}};
    path.total_time = 2.0;
    const std::vector<Region> ball = {RegionBall{{0, 0, 0}, 0.5}};
    CHECK(occupation_time(path, ball) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<Region> box = {RegionBox{{-0.25, -1, 0}, {0.5, 1, 0}}};
    CHECK(occupation_time(path, box) == doctest::Approx(0.75).epsilon(1e-12));

    // overlapping regions are merged, not double counted: union on the
    // path is x in [-0.5, 0.75]
    const std::vector<Region> both = {RegionBall{{0, 0, 0}, 0.5},
                                      RegionBox{{0.25, -1, 0}, {0.75, 1, 0}}};
    CHECK(occupation_time(path, both) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("path integral telescopes gradients") {
    const Domain disk = unit_disk();
    const ReflectionLaw law = ReflectionLaw::cosine(2);
    Rng rng(14, 0);
    // G(x, y) = x^2 y + 3 x - y^3, dG/dt = grad G . V
    const auto minus_v_grad = [](const Vec& x, const Vec& v) {
        const double gx = 2 * x.x * x.y + 3.0;
        const double gy = x.x * x.x - 3 * x.y * x.y;
        return -(gx * v.x + gy * v.y);
    };
    const auto G = [](const Vec& p) {
        return p.x * p.x * p.y + 3 * p.x - p.y * p.y * p.y;
    };
    for (int i = 0; i < 20; ++i) {
        const BilliardPath path = make_path_stationary(disk, law, 25.0, rng);
        const double lhs = path_integral(path, minus_v_grad);
        const double rhs = G(path.nodes.front()) - G(path.nodes.back());
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("internal surfaces must stay inside the domain") {
    const Domain disk = unit_disk();
    InternalSurface good;
    good.segments.push_back({Vec{-0.5, 0, 0}, Vec{0.5, 0, 0}});
    validate_internal_surface(good, disk);

    InternalSurface bad;
    bad.segments.push_back({Vec{-2, 0, 0}, Vec{0.5, 0, 0}});
    CHECK_THROWS_AS(validate_internal_surface(bad, disk), GeometryError);
}

TEST_CASE("crossings of a diameter are detected with matched times") {
    const Domain disk = unit_disk();
    InternalSurface diameter;
    diameter.segments.push_back({Vec{0, -0.995, 0}, Vec{0, 0.995, 0}});

    // horizontal bounce through the center: crossings at t = 1, 3, 5, 7
    BilliardPath path;
    path.times = {0, 2, 4, 6, 8};
    path.nodes = {{-1, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    path.nodes[1] = {1, 0, 0};
    path.nodes[2] = {-1, 0, 0};
    path.nodes[3] = {1, 0, 0};
    path.nodes[4] = {-1, 0, 0};
    path.total_time = 8;
    const CrossingScan scan = detect_crossings(path, diameter, 2);
    REQUIRE(scan.events.size() == 4);
    CHECK(scan.events[0].time == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scan.events[1].time == doctest::Approx(3.0).epsilon(1e-12));
    for (const auto& e : scan.events) {
        CHECK(e.point.x == doctest::Approx(0.0).epsilon(1e-12));
        // head-on crossing: zero polar angle in the facet frame
        CHECK(e.polar_angle == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(e.relative_direction.x >= 0.0);
    }

    // a flight parallel to the surface is excluded as tangential
    BilliardPath slide;
    slide.times = {0, 1.9};
    slide.nodes = {{0, -0.95, 0}, {0, 0.95, 0}};
    slide.total_time = 1.9;
    const CrossingScan par = detect_crossings(slide, diameter, 2);
    CHECK(par.events.empty());
}

TEST_CASE("stationary launches start inside with unit speed") {
    const Domain disk = unit_disk();
    const ReflectionLaw law = ReflectionLaw::cosine(2);
    Rng rng(15, 0);
    for (int i = 0; i < 50; ++i) {
        const BilliardPath p = make_path_stationary(disk, law, 5.0, rng);
        CHECK(disk.contains(p.nodes.front()));
        const PathState s0 = state_at(p, 0.0);
        CHECK(s0.velocity.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}
