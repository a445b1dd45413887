#pragma once

#include <array>
#include <functional>
#include <variant>
#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/reflection.hpp"
#include "billiards/rng.hpp"
#include "billiards/stats.hpp"

namespace billiards {

// Continuous-time unit-speed path: piecewise linear between nodes[i] at
// times[i], velocity constant on each flight and right-continuous in time.
// The first node may be interior (the launch point); all later nodes up to
// the truncated final one are boundary hits.
struct BilliardPath {
    std::vector<double> times;
    std::vector<Vec> nodes;
    double total_time = 0.0;
    long resample_count = 0;
};

struct PathState {
    Vec position;
    Vec velocity;
};

// Launch from an interior point with a fixed unit velocity.
BilliardPath make_path(const Domain& domain, const ReflectionLaw& law, const Vec& x0,
                       const Vec& v0, double total_time, Rng& rng);

// Launch from a boundary state with a law draw.
BilliardPath make_path_from_boundary(const Domain& domain, const ReflectionLaw& law,
                                     const BoundaryPoint& start, double total_time,
                                     Rng& rng);

// Launch from the product-uniform initial condition: position uniform in
// the domain, velocity uniform on the sphere (the stationary law of the
// cosine flow).
BilliardPath make_path_stationary(const Domain& domain, const ReflectionLaw& law,
                                  double total_time, Rng& rng);

// Position/velocity at time t in [0, total_time]; TimeOutOfRange otherwise.
PathState state_at(const BilliardPath& path, double t);

// Occupation regions: unions of disks/balls and axis-aligned boxes.
struct RegionBall {
    Vec center;
    double radius = 1.0;
};
struct RegionBox {
    Vec lo, hi;
};
using Region = std::variant<RegionBall, RegionBox>;

double region_measure(const std::vector<Region>& regions, int dim);

// Exact time spent inside the union of regions (per-flight quadratic and
// slab clipping, overlaps merged).
double occupation_time(const BilliardPath& path, const std::vector<Region>& regions);

// occupation_time / total_time.
double occupation_fraction(const BilliardPath& path, const std::vector<Region>& regions);

// Time integral of f(X_t, V_t) along the path; per-flight Gauss-Legendre of
// order 8, exact for polynomial integrands of degree <= 15 in t.
double path_integral(const BilliardPath& path,
                     const std::function<double(const Vec&, const Vec&)>& f);

// Oriented internal surface: polyline segments in 2-D, triangles in 3-D.
// Must lie strictly inside the domain (checked by dense point sampling).
struct InternalSurface {
    std::vector<std::array<Vec, 2>> segments;
    std::vector<std::array<Vec, 3>> triangles;
};
void validate_internal_surface(const InternalSurface& surface, const Domain& domain);

// Transversal crossing: velocity expressed in the facet frame and folded to
// the half-sphere around the facet normal (first frame axis), so
// relative_direction.x >= 0. polar_angle is signed in 2-D.
struct CrossingEvent {
    double time = 0.0;
    Vec point;
    Vec relative_direction;
    double polar_angle = 0.0;
    int facet = 0;
};
struct CrossingScan {
    std::vector<CrossingEvent> events;
    long tangential_excluded = 0;
};
CrossingScan detect_crossings(const BilliardPath& path, const InternalSurface& surface,
                              int dim);

// Time-weighted direction histogram (2-D: angle mapped to [0, 1)).
stats::BinnedMeasure velocity_histogram(const BilliardPath& path, int bins,
                                        double t_start = 0.0);

}  // namespace billiards
