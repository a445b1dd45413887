#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "billiards/errors.hpp"
#include "billiards/rng.hpp"
#include "billiards/vec.hpp"

namespace billiards {

// Point on the domain boundary together with the local geometry the samplers
// need. patch_coord is the boundary measure accumulated from the component
// origin: arc length in 2-D, an area coordinate in 3-D. It is measure-uniform
// under the uniform boundary law, which is what the histogram bins rely on.
struct BoundaryPoint {
    Vec position;
    Vec normal;  // unit, points into the domain
    int component_id = 0;
    double patch_coord = 0.0;
    bool is_regular = true;
};

struct HitResult {
    BoundaryPoint point;
    double distance = 0.0;
};

// Boundary intersection of a parametrized segment a + t (b - a), t in (0, 1).
struct SegmentHit {
    double t = 0.0;
    BoundaryPoint point;
};

// Equal-measure boundary cell used by the kernel discretization.
// corner_adjacent marks cells whose midpoint sits within a few panel widths
// of a polygon/polyhedron vertex, where midpoint quadrature is unreliable.
struct BoundaryPanel {
    BoundaryPoint midpoint;
    double measure = 0.0;
    bool corner_adjacent = false;
};

struct DomainMeasures {
    double volume = 0.0;    // area in 2-D
    double surface = 0.0;   // perimeter in 2-D
};

// Shape descriptors. Polygon loops: loops[0] is the outer boundary, counter-
// clockwise; any further loops are holes, clockwise. Polyhedron faces are
// planar convex vertex loops (any winding; normals are oriented inward
// automatically).
struct Disk {
    Vec center;
    double radius = 1.0;
};

struct Ellipse {
    Vec center;
    double semi_x = 1.0;
    double semi_y = 1.0;
};

struct Annulus {
    Vec center;
    double inner_radius = 1.0;
    double outer_radius = 2.0;
};

struct Polygon2D {
    std::vector<std::vector<Vec>> loops;
};

struct Sphere {
    Vec center;
    double radius = 1.0;
};

struct ConvexPolyhedron3D {
    std::vector<std::vector<Vec>> faces;
};

using ShapeSpec =
    std::variant<Disk, Ellipse, Annulus, Polygon2D, Sphere, ConvexPolyhedron3D>;

namespace detail {
class ShapeImpl;
}

// Bounded domain with piecewise-smooth boundary. All tolerances derive from
// the length scale d = diameter(), the bounding-box diagonal: epsilon() =
// 1e-9 d for coincidence tests and minimum ray advance, corner_epsilon() =
// 1e-7 d for flagging hits near vertices as non-regular. Construction validates the descriptor (positive radii, loop
// orientation, no self-intersection, convexity of polyhedra) and throws
// GeometryError on failure.
class Domain {
  public:
    explicit Domain(ShapeSpec spec);

    int dim() const;
    std::string shape_name() const;
    const ShapeSpec& spec() const { return spec_; }

    double diameter() const;
    double epsilon() const;
    double corner_epsilon() const;
    std::pair<Vec, Vec> bounding_box() const;

    DomainMeasures measures() const;
    int component_count() const;
    double component_boundary_measure(int component) const;
    double boundary_measure() const;

    // Strict interior test; points within epsilon() of the boundary count as
    // not contained.
    bool contains(const Vec& p) const;

    // First boundary hit of the ray x + t u, t > epsilon(). x must be interior
    // or on the boundary with u pointing inward. Throws DegenerateDirection
    // for a non-unit u and NoHit when the ray only grazes.
    HitResult ray_cast(const Vec& x, const Vec& u) const;

    // All transversal boundary hits of the open segment (a, b), sorted by t.
    // Hits closer than epsilon() to either endpoint are dropped, so segments
    // between boundary points report interior hits only.
    std::vector<SegmentHit> segment_hits(const Vec& a, const Vec& b) const;

    // Classify a point lying on the boundary. Throws NotOnBoundary when p is
    // farther than tol (default corner_epsilon()) from the boundary.
    BoundaryPoint boundary_point(const Vec& p, double tol = -1.0) const;

    // Inward unit normal at a regular boundary point. Throws NotOnBoundary or
    // NonRegularPoint.
    Vec inward_normal(const Vec& p) const;

    // True when the open segment between two boundary points stays in the
    // interior. Pairs on a common flat facet are not visible.
    bool visible(const Vec& a, const Vec& b) const;

    // Uniform draw from the boundary measure, components weighted by measure.
    BoundaryPoint sample_boundary_uniform(Rng& rng) const;

    // Uniform draw from the interior (rejection from the bounding box).
    Vec sample_interior_uniform(Rng& rng) const;

    // Measure-uniform scalar coordinate on the whole boundary: components are
    // concatenated in id order and scaled to [0, 1).
    double boundary_coord(const BoundaryPoint& p) const;

    // Point at arc length s along a 2-D component. Throws UnsupportedDimension
    // in 3-D (a scalar does not locate a point on a surface).
    BoundaryPoint boundary_point_at_arc(int component, double s) const;

    // Split the boundary into panel_count near-equal-measure cells, allocated
    // across components (and polygon edges) proportionally to measure so that
    // cell borders land on vertices. panel_count >= component count.
    std::vector<BoundaryPanel> panelize(int panel_count) const;

  private:
    ShapeSpec spec_;
    std::shared_ptr<const detail::ShapeImpl> impl_;
    double diameter_ = 0.0;
    double eps_ = 0.0;
    double eps_corner_ = 0.0;
    std::vector<double> component_offsets_;
    double boundary_measure_ = 0.0;
};

}  // namespace billiards
