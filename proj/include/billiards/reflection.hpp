#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "billiards/errors.hpp"
#include "billiards/geometry.hpp"
#include "billiards/rng.hpp"
#include "billiards/vec.hpp"

namespace billiards {

enum class LawKind { cosine, uniform_hemisphere, custom_angular };

// Normalizing constants of the cosine law in dimension d:
//   cosine_normalizer is the density value at normal incidence (1/2 in 2-D,
//   1/pi in 3-D), chord_factor converts volume/surface ratios into mean
//   chord lengths (pi in 2-D, 4 in 3-D).
struct LawConstants {
    double cosine_normalizer = 0.0;
    double chord_factor = 0.0;
};

// Throws UnsupportedDimension outside {2, 3}.
LawConstants law_constants(int dim);

// Rotation whose first column is the inward normal at a regular boundary
// point; the remaining columns complete a deterministic right-handed
// orthonormal frame. Throws NonRegularPoint for flagged points.
Mat3 build_frame(const BoundaryPoint& p, int dim);

// Outgoing-direction law at the boundary, azimuthally symmetric about the
// inward normal. The density lives on the inward half-sphere and is
// expressed through the polar angle from the normal.
class ReflectionLaw {
  public:
    static ReflectionLaw cosine(int dim);
    static ReflectionLaw uniform_hemisphere(int dim);
    // knots: (angle, value) pairs on [0, pi/2), strictly increasing angles
    // starting at 0, strictly positive values; interpolated linearly and
    // normalized so the half-sphere integral is 1. Sampling uses a
    // 4096-point inverse-CDF table with monotone cubic interpolation.
    static ReflectionLaw custom(int dim,
                                const std::vector<std::pair<double, double>>& knots);

    int dim() const { return dim_; }
    LawKind kind() const { return kind_; }

    // Density w.r.t. the surface measure of the sphere at polar angle
    // `angle` from the normal. Throws OutOfRange outside [0, pi/2).
    double pdf(double angle) const;

    // CDF of the sampled angle: signed angle in (-pi/2, pi/2) in 2-D, polar
    // angle in [0, pi/2) in 3-D (the azimuth is uniform and independent).
    double angle_cdf(double angle) const;

    // Polar angle draw (signed in 2-D).
    double sample_angle(Rng& rng) const;

    // Direction draw in the frame of the inward normal at `at`.
    Vec sample_direction(const BoundaryPoint& at, Rng& rng) const;

  private:
    ReflectionLaw(int dim, LawKind kind) : dim_(dim), kind_(kind) {}

    struct CustomTables;

    int dim_;
    LawKind kind_;
    std::shared_ptr<const CustomTables> tables_;  // custom_angular only
};

}  // namespace billiards
