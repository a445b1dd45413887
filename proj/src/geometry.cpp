#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace billiards {
namespace detail {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double cross2(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    const Vec d = b - a;
    const double len2 = d.norm2();
    if (len2 == 0.0) return distance(p, a);
    double t = (p - a).dot(d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + d * t);
}

// Stable quadratic solve A t^2 + B t + C = 0; returns the number of real
// roots (0 or 2) with t0 <= t1. Tangency (disc <= 0) reports no roots: a
// grazing contact is not a transversal crossing.
int solve_quadratic(double A, double B, double C, double& t0, double& t1) {
    const double disc = B * B - 4.0 * A * C;
    if (!(disc > 0.0) || A == 0.0) return 0;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
    double r0 = q / A;
    double r1 = (q != 0.0) ? C / q : -B / A - r0;
    if (r0 > r1) std::swap(r0, r1);
    t0 = r0;
    t1 = r1;
    return 2;
}

// Splits `total` into integer counts proportional to weights, each >= 1,
// by largest remainder.
std::vector<int> proportional_counts(const std::vector<double>& weights, int total) {
    const int n = static_cast<int>(weights.size());
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<int> counts(n, 0);
    std::vector<std::pair<double, int>> frac(n);
    int assigned = 0;
    for (int i = 0; i < n; ++i) {
        const double quota = total * weights[i] / wsum;
        counts[i] = static_cast<int>(std::floor(quota));
        frac[i] = {quota - counts[i], i};
        assigned += counts[i];
    }
    std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int k = 0; k < total - assigned; ++k) counts[frac[k % n].second] += 1;
    for (int i = 0; i < n; ++i) {
        if (counts[i] > 0) continue;
        int donor = static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                                     counts.begin());
        if (counts[donor] <= 1) throw GeometryError("panelize: too few panels");
        counts[donor] -= 1;
        counts[i] += 1;
    }
    return counts;
}

double wrap_angle(double a) {
    while (a < 0.0) a += kTwoPi;
    while (a >= kTwoPi) a -= kTwoPi;
    return a;
}

}  // namespace

class ShapeImpl {
  public:
    virtual ~ShapeImpl() = default;
    virtual int dim() const = 0;
    virtual std::string name() const = 0;
    virtual DomainMeasures measures() const = 0;
    virtual std::pair<Vec, Vec> bounding_box() const = 0;
    virtual int components() const = 0;
    virtual double component_measure(int c) const = 0;
    virtual bool contains(const Vec& p, double eps) const = 0;
    // All boundary hits of a + t (b - a), t in (0, 1), unsorted, endpoint
    // filtering left to the caller.
    virtual void collect_hits(const Vec& a, const Vec& b, double eps_corner,
                              std::vector<SegmentHit>& out) const = 0;
    virtual BoundaryPoint classify(const Vec& p, double tol, double eps_corner) const = 0;
    virtual BoundaryPoint at_arc(int /*c*/, double /*s*/, double /*eps_corner*/) const {
        throw UnsupportedDimensionError(
            "boundary_point_at_arc: arc-length parametrization is 2-D only");
    }
    virtual BoundaryPoint sample_boundary(Rng& rng, double eps_corner) const = 0;
    virtual std::vector<BoundaryPanel> panelize(int M, double eps_corner) const = 0;
};

// ---------------------------------------------------------------------------
// 2-D circles (disk boundary or annulus component)

namespace {

struct CircleComponent {
    Vec center;
    double radius = 1.0;
    bool inward_is_centripetal = true;  // false for the inner rim of an annulus
    int component_id = 0;

    BoundaryPoint point_at_angle(double theta) const {
        const Vec radial{std::cos(theta), std::sin(theta)};
        BoundaryPoint bp;
        bp.position = center + radial * radius;
        bp.normal = inward_is_centripetal ? -radial : radial;
        bp.component_id = component_id;
        bp.patch_coord = radius * wrap_angle(theta);
        bp.is_regular = true;
        return bp;
    }

    void hits(const Vec& a, const Vec& b, std::vector<SegmentHit>& out) const {
        const Vec d = b - a;
        const Vec w = a - center;
        double t0 = 0.0, t1 = 0.0;
        if (solve_quadratic(d.norm2(), 2.0 * d.dot(w), w.norm2() - radius * radius, t0,
                            t1) == 0)
            return;
        for (double t : {t0, t1}) {
            if (t <= 0.0 || t >= 1.0) continue;
            const Vec p = a + d * t;
            out.push_back({t, point_at_angle(std::atan2(p.y - center.y, p.x - center.x))});
        }
    }
};

}  // namespace

class DiskShape final : public ShapeImpl {
  public:
    explicit DiskShape(const Disk& d) : disk_(d) {
        if (!(d.radius > 0.0)) throw GeometryError("disk: radius must be positive");
        rim_ = {d.center, d.radius, true, 0};
    }
    int dim() const override { return 2; }
    std::string name() const override { return "disk"; }
    DomainMeasures measures() const override {
        return {kPi * disk_.radius * disk_.radius, kTwoPi * disk_.radius};
    }
    std::pair<Vec, Vec> bounding_box() const override {
        const Vec r{disk_.radius, disk_.radius};
        return {disk_.center - r, disk_.center + r};
    }
    int components() const override { return 1; }
    double component_measure(int) const override { return kTwoPi * disk_.radius; }
    bool contains(const Vec& p, double eps) const override {
        return distance(p, disk_.center) < disk_.radius - eps;
    }
    void collect_hits(const Vec& a, const Vec& b, double,
                      std::vector<SegmentHit>& out) const override {
        rim_.hits(a, b, out);
    }
    BoundaryPoint classify(const Vec& p, double tol, double) const override {
        const double dr = distance(p, disk_.center);
        if (std::abs(dr - disk_.radius) > tol)
            throw NotOnBoundaryError("disk: point is not on the boundary");
        return rim_.point_at_angle(
            std::atan2(p.y - disk_.center.y, p.x - disk_.center.x));
    }
    BoundaryPoint at_arc(int, double s, double) const override {
        return rim_.point_at_angle(s / disk_.radius);
    }
    BoundaryPoint sample_boundary(Rng& rng, double) const override {
        return rim_.point_at_angle(rng.uniform() * kTwoPi);
    }
    std::vector<BoundaryPanel> panelize(int M, double) const override {
        std::vector<BoundaryPanel> panels;
        panels.reserve(M);
        const double w = kTwoPi * disk_.radius / M;
        for (int k = 0; k < M; ++k)
            panels.push_back({at_arc(0, (k + 0.5) * w, 0.0), w, false});
        return panels;
    }

  private:
    Disk disk_;
    CircleComponent rim_;
};

class AnnulusShape final : public ShapeImpl {
  public:
    explicit AnnulusShape(const Annulus& a) : ann_(a) {
        if (!(a.inner_radius > 0.0) || !(a.outer_radius > a.inner_radius))
            throw GeometryError("annulus: need 0 < inner_radius < outer_radius");
        rims_[0] = {a.center, a.inner_radius, false, 0};
        rims_[1] = {a.center, a.outer_radius, true, 1};
    }
    int dim() const override { return 2; }
    std::string name() const override { return "annulus"; }
    DomainMeasures measures() const override {
        const double ri = ann_.inner_radius, ro = ann_.outer_radius;
        return {kPi * (ro * ro - ri * ri), kTwoPi * (ri + ro)};
    }
    std::pair<Vec, Vec> bounding_box() const override {
        const Vec r{ann_.outer_radius, ann_.outer_radius};
        return {ann_.center - r, ann_.center + r};
    }
    int components() const override { return 2; }
    double component_measure(int c) const override {
        return kTwoPi * (c == 0 ? ann_.inner_radius : ann_.outer_radius);
    }
    bool contains(const Vec& p, double eps) const override {
        const double dr = distance(p, ann_.center);
        return dr > ann_.inner_radius + eps && dr < ann_.outer_radius - eps;
    }
    void collect_hits(const Vec& a, const Vec& b, double,
                      std::vector<SegmentHit>& out) const override {
        rims_[0].hits(a, b, out);
        rims_[1].hits(a, b, out);
    }
    BoundaryPoint classify(const Vec& p, double tol, double) const override {
        const double dr = distance(p, ann_.center);
        const int c = std::abs(dr - ann_.inner_radius) < std::abs(dr - ann_.outer_radius)
                          ? 0
                          : 1;
        if (std::abs(dr - rims_[c].radius) > tol)
            throw NotOnBoundaryError("annulus: point is not on the boundary");
        return rims_[c].point_at_angle(
            std::atan2(p.y - ann_.center.y, p.x - ann_.center.x));
    }
    BoundaryPoint at_arc(int c, double s, double) const override {
        return rims_[c].point_at_angle(s / rims_[c].radius);
    }
    BoundaryPoint sample_boundary(Rng& rng, double) const override {
        const double total = component_measure(0) + component_measure(1);
        double s = rng.uniform() * total;
        const int c = (s < component_measure(0)) ? 0 : 1;
        if (c == 1) s -= component_measure(0);
        return at_arc(c, s, 0.0);
    }
    std::vector<BoundaryPanel> panelize(int M, double) const override {
        const std::vector<double> w{component_measure(0), component_measure(1)};
        const std::vector<int> counts = proportional_counts(w, M);
        std::vector<BoundaryPanel> panels;
        panels.reserve(M);
        for (int c = 0; c < 2; ++c) {
            const double width = w[c] / counts[c];
            for (int k = 0; k < counts[c]; ++k)
                panels.push_back({at_arc(c, (k + 0.5) * width, 0.0), width, false});
        }
        return panels;
    }

  private:
    Annulus ann_;
    CircleComponent rims_[2];
};

// ---------------------------------------------------------------------------
// Ellipse

class EllipseShape final : public ShapeImpl {
  public:
    explicit EllipseShape(const Ellipse& e) : ell_(e) {
        if (!(e.semi_x > 0.0) || !(e.semi_y > 0.0))
            throw GeometryError("ellipse: semi-axes must be positive");
        // Cumulative arc length on a fine periodic grid. The composite
        // trapezoid total of a smooth periodic integrand converges faster
        // than any power of the step, so the perimeter is accurate to
        // machine precision; interior table entries are ~1e-8 accurate,
        // plenty for patch coordinates and panel borders.
        arc_.resize(kGrid + 1);
        arc_[0] = 0.0;
        const double h = kTwoPi / kGrid;
        double prev = speed(0.0);
        for (int k = 1; k <= kGrid; ++k) {
            const double cur = speed(k * h);
            arc_[k] = arc_[k - 1] + 0.5 * h * (prev + cur);
            prev = cur;
        }
    }
    int dim() const override { return 2; }
    std::string name() const override { return "ellipse"; }
    DomainMeasures measures() const override {
        return {kPi * ell_.semi_x * ell_.semi_y, arc_.back()};
    }
    std::pair<Vec, Vec> bounding_box() const override {
        const Vec r{ell_.semi_x, ell_.semi_y};
        return {ell_.center - r, ell_.center + r};
    }
    int components() const override { return 1; }
    double component_measure(int) const override { return arc_.back(); }
    bool contains(const Vec& p, double eps) const override {
        const double f = implicit(p);
        if (f >= 0.0) return false;
        if (f < -0.5) return true;
        return std::abs(f) / grad_norm(p) > eps;
    }
    void collect_hits(const Vec& a, const Vec& b, double,
                      std::vector<SegmentHit>& out) const override {
        const double ax = ell_.semi_x, ay = ell_.semi_y;
        const Vec w = a - ell_.center;
        const Vec d = b - a;
        const double A = (d.x / ax) * (d.x / ax) + (d.y / ay) * (d.y / ay);
        const double B = 2.0 * (w.x * d.x / (ax * ax) + w.y * d.y / (ay * ay));
        const double C = (w.x / ax) * (w.x / ax) + (w.y / ay) * (w.y / ay) - 1.0;
        double t0 = 0.0, t1 = 0.0;
        if (solve_quadratic(A, B, C, t0, t1) == 0) return;
        for (double t : {t0, t1}) {
            if (t <= 0.0 || t >= 1.0) continue;
            out.push_back({t, point_at_param(param_of(a + d * t))});
        }
    }
    BoundaryPoint classify(const Vec& p, double tol, double) const override {
        if (std::abs(implicit(p)) / grad_norm(p) > tol)
            throw NotOnBoundaryError("ellipse: point is not on the boundary");
        return point_at_param(param_of(p));
    }
    BoundaryPoint at_arc(int, double s, double) const override {
        return point_at_param(param_of_arc(s));
    }
    BoundaryPoint sample_boundary(Rng& rng, double) const override {
        return at_arc(0, rng.uniform() * arc_.back(), 0.0);
    }
    std::vector<BoundaryPanel> panelize(int M, double) const override {
        std::vector<BoundaryPanel> panels;
        panels.reserve(M);
        const double w = arc_.back() / M;
        for (int k = 0; k < M; ++k)
            panels.push_back({at_arc(0, (k + 0.5) * w, 0.0), w, false});
        return panels;
    }

  private:
    static constexpr int kGrid = 1 << 14;

    double speed(double t) const {
        const double sx = ell_.semi_x * std::sin(t);
        const double cy = ell_.semi_y * std::cos(t);
        return std::sqrt(sx * sx + cy * cy);
    }
    double implicit(const Vec& p) const {
        const double u = (p.x - ell_.center.x) / ell_.semi_x;
        const double v = (p.y - ell_.center.y) / ell_.semi_y;
        return u * u + v * v - 1.0;
    }
    double grad_norm(const Vec& p) const {
        const double gx = 2.0 * (p.x - ell_.center.x) / (ell_.semi_x * ell_.semi_x);
        const double gy = 2.0 * (p.y - ell_.center.y) / (ell_.semi_y * ell_.semi_y);
        const double g = std::sqrt(gx * gx + gy * gy);
        return g > 1e-300 ? g : 1e-300;
    }
    double param_of(const Vec& p) const {
        return wrap_angle(std::atan2((p.y - ell_.center.y) / ell_.semi_y,
                                     (p.x - ell_.center.x) / ell_.semi_x));
    }
    double arc_of_param(double t) const {
        const double h = kTwoPi / kGrid;
        const double u = wrap_angle(t) / h;
        const int k = std::min(static_cast<int>(u), kGrid - 1);
        return arc_[k] + (u - k) * (arc_[k + 1] - arc_[k]);
    }
    double param_of_arc(double s) const {
        s = std::fmod(s, arc_.back());
        if (s < 0.0) s += arc_.back();
        const auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
        const int k = std::max(1, static_cast<int>(it - arc_.begin())) - 1;
        const double seg = arc_[k + 1] - arc_[k];
        const double f = seg > 0.0 ? (s - arc_[k]) / seg : 0.0;
        return (k + f) * kTwoPi / kGrid;
    }
    BoundaryPoint point_at_param(double t) const {
        BoundaryPoint bp;
        bp.position = ell_.center + Vec{ell_.semi_x * std::cos(t), ell_.semi_y * std::sin(t)};
        const double gx = std::cos(t) / ell_.semi_x;
        const double gy = std::sin(t) / ell_.semi_y;
        bp.normal = (Vec{-gx, -gy}).normalized();
        bp.component_id = 0;
        bp.patch_coord = arc_of_param(t);
        bp.is_regular = true;
        return bp;
    }

    Ellipse ell_;
    std::vector<double> arc_;
};

// ---------------------------------------------------------------------------
// Polygon with optional holes

class PolygonShape final : public ShapeImpl {
  public:
    explicit PolygonShape(const Polygon2D& poly, double scale_hint) {
        if (poly.loops.empty()) throw GeometryError("polygon: no loops");
        double span = scale_hint;
        for (const auto& loop : poly.loops)
            for (const auto& v : loop) span = std::max({span, std::abs(v.x), std::abs(v.y)});
        const double weld = 1e-12 * std::max(span, 1.0);
        for (int li = 0; li < static_cast<int>(poly.loops.size()); ++li) {
            const auto& vs = poly.loops[li];
            if (vs.size() < 3) throw GeometryError("polygon: loop needs >= 3 vertices");
            Loop loop;
            loop.v = vs;
            double area2 = 0.0;
            loop.cum.push_back(0.0);
            for (size_t i = 0; i < vs.size(); ++i) {
                const Vec& a = vs[i];
                const Vec& b = vs[(i + 1) % vs.size()];
                if (distance(a, b) <= weld)
                    throw GeometryError("polygon: repeated consecutive vertex");
                area2 += cross2(a, b);
                loop.elen.push_back(distance(a, b));
                loop.cum.push_back(loop.cum.back() + loop.elen.back());
                const Vec dir = (b - a).normalized();
                loop.edge_dir.push_back(dir);
                loop.edge_normal.push_back(perp(dir));  // interior is on the left
            }
            loop.total = loop.cum.back();
            loop.signed_area = 0.5 * area2;
            if (li == 0 && loop.signed_area <= 0.0)
                throw GeometryError("polygon: outer loop must be counter-clockwise");
            if (li > 0 && loop.signed_area >= 0.0)
                throw GeometryError("polygon: holes must be clockwise");
            loops_.push_back(std::move(loop));
        }
        check_self_intersection(weld);
    }

    int dim() const override { return 2; }
    std::string name() const override { return "polygon2d"; }
    DomainMeasures measures() const override {
        double area = 0.0, per = 0.0;
        for (const auto& l : loops_) {
            area += l.signed_area;
            per += l.total;
        }
        return {area, per};
    }
    std::pair<Vec, Vec> bounding_box() const override {
        Vec lo = loops_[0].v[0], hi = loops_[0].v[0];
        for (const auto& l : loops_)
            for (const auto& v : l.v) {
                lo.x = std::min(lo.x, v.x);
                lo.y = std::min(lo.y, v.y);
                hi.x = std::max(hi.x, v.x);
                hi.y = std::max(hi.y, v.y);
            }
        return {lo, hi};
    }
    int components() const override { return static_cast<int>(loops_.size()); }
    double component_measure(int c) const override { return loops_[c].total; }

    bool contains(const Vec& p, double eps) const override {
        // Even-odd crossing parity over every loop, then a clearance check.
        bool inside = false;
        for (const auto& l : loops_) {
            const size_t n = l.v.size();
            for (size_t i = 0; i < n; ++i) {
                const Vec& a = l.v[i];
                const Vec& b = l.v[(i + 1) % n];
                if ((a.y > p.y) != (b.y > p.y)) {
                    const double xcut = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                    if (p.x < xcut) inside = !inside;
                }
            }
        }
        if (!inside) return false;
        for (const auto& l : loops_) {
            const size_t n = l.v.size();
            for (size_t i = 0; i < n; ++i)
                if (point_segment_distance(p, l.v[i], l.v[(i + 1) % n]) <= eps)
                    return false;
        }
        return true;
    }

    void collect_hits(const Vec& a, const Vec& b, double eps_corner,
                      std::vector<SegmentHit>& out) const override {
        const Vec d = b - a;
        for (int li = 0; li < static_cast<int>(loops_.size()); ++li) {
            const Loop& l = loops_[li];
            const size_t n = l.v.size();
            for (size_t i = 0; i < n; ++i) {
                const Vec& v0 = l.v[i];
                const Vec e = l.v[(i + 1) % n] - v0;
                const double denom = cross2(d, e);
                if (std::abs(denom) < 1e-300) continue;
                const Vec w = v0 - a;
                const double t = cross2(w, e) / denom;
                const double s = cross2(w, d) / denom;
                if (t <= 0.0 || t >= 1.0 || s < 0.0 || s > 1.0) continue;
                out.push_back({t, edge_point(li, i, s, eps_corner)});
            }
        }
    }

    BoundaryPoint classify(const Vec& p, double tol, double eps_corner) const override {
        int best_loop = -1;
        size_t best_edge = 0;
        double best_d = tol;
        for (int li = 0; li < static_cast<int>(loops_.size()); ++li) {
            const Loop& l = loops_[li];
            const size_t n = l.v.size();
            for (size_t i = 0; i < n; ++i) {
                const double d = point_segment_distance(p, l.v[i], l.v[(i + 1) % n]);
                if (d <= best_d) {
                    best_d = d;
                    best_loop = li;
                    best_edge = i;
                }
            }
        }
        if (best_loop < 0) throw NotOnBoundaryError("polygon: point is not on the boundary");
        const Loop& l = loops_[best_loop];
        const Vec& v0 = l.v[best_edge];
        const double s =
            std::clamp((p - v0).dot(l.edge_dir[best_edge]) / l.elen[best_edge], 0.0, 1.0);
        return edge_point(best_loop, best_edge, s, eps_corner);
    }

    BoundaryPoint at_arc(int c, double s, double eps_corner) const override {
        const Loop& l = loops_[c];
        s = std::fmod(s, l.total);
        if (s < 0.0) s += l.total;
        const auto it = std::upper_bound(l.cum.begin(), l.cum.end(), s);
        const size_t e =
            std::min(l.elen.size() - 1,
                     static_cast<size_t>(std::max<std::ptrdiff_t>(1, it - l.cum.begin()) - 1));
        return edge_point(c, e, (s - l.cum[e]) / l.elen[e], eps_corner);
    }

    BoundaryPoint sample_boundary(Rng& rng, double eps_corner) const override {
        double total = 0.0;
        for (const auto& l : loops_) total += l.total;
        double s = rng.uniform() * total;
        for (int c = 0; c < static_cast<int>(loops_.size()); ++c) {
            if (s < loops_[c].total) return at_arc(c, s, eps_corner);
            s -= loops_[c].total;
        }
        return at_arc(0, 0.0, eps_corner);
    }

    std::vector<BoundaryPanel> panelize(int M, double eps_corner) const override {
        // One allocation over every edge so panel borders land on vertices.
        std::vector<double> weights;
        std::vector<std::pair<int, size_t>> edges;
        double total = 0.0;
        for (int li = 0; li < static_cast<int>(loops_.size()); ++li)
            for (size_t e = 0; e < loops_[li].elen.size(); ++e) {
                weights.push_back(loops_[li].elen[e]);
                edges.emplace_back(li, e);
                total += loops_[li].elen[e];
            }
        const std::vector<int> counts = proportional_counts(weights, M);
        const double flag_dist = 2.5 * total / M;
        std::vector<BoundaryPanel> panels;
        panels.reserve(M);
        for (size_t k = 0; k < edges.size(); ++k) {
            const auto [li, e] = edges[k];
            const double elen = loops_[li].elen[e];
            for (int j = 0; j < counts[k]; ++j) {
                const double mid_s = (j + 0.5) * elen / counts[k];
                BoundaryPanel panel;
                panel.midpoint = edge_point(li, e, mid_s / elen, eps_corner);
                panel.measure = elen / counts[k];
                panel.corner_adjacent = std::min(mid_s, elen - mid_s) <= flag_dist;
                panels.push_back(panel);
            }
        }
        return panels;
    }

  private:
    struct Loop {
        std::vector<Vec> v;
        std::vector<double> elen;
        std::vector<double> cum;
        std::vector<Vec> edge_dir;
        std::vector<Vec> edge_normal;
        double total = 0.0;
        double signed_area = 0.0;
    };

    BoundaryPoint edge_point(int loop, size_t edge, double s, double eps_corner) const {
        const Loop& l = loops_[loop];
        BoundaryPoint bp;
        bp.position = l.v[edge] + l.edge_dir[edge] * (s * l.elen[edge]);
        bp.normal = l.edge_normal[edge];
        bp.component_id = loop;
        bp.patch_coord = l.cum[edge] + s * l.elen[edge];
        const double to_vertex = std::min(s, 1.0 - s) * l.elen[edge];
        bp.is_regular = to_vertex > eps_corner;
        return bp;
    }

    void check_self_intersection(double weld) const {
        struct Edge {
            Vec a, b;
            int loop;
            size_t idx;
        };
        std::vector<Edge> all;
        for (int li = 0; li < static_cast<int>(loops_.size()); ++li) {
            const auto& v = loops_[li].v;
            for (size_t i = 0; i < v.size(); ++i)
                all.push_back({v[i], v[(i + 1) % v.size()], li, i});
        }
        for (size_t i = 0; i < all.size(); ++i) {
            for (size_t j = i + 1; j < all.size(); ++j) {
                const Edge& p = all[i];
                const Edge& q = all[j];
                const bool adjacent =
                    p.loop == q.loop &&
                    (distance(p.b, q.a) <= weld || distance(q.b, p.a) <= weld);
                if (adjacent) continue;
                const Vec d1 = p.b - p.a, d2 = q.b - q.a;
                const double denom = cross2(d1, d2);
                if (std::abs(denom) < 1e-300) {
                    // Parallel: overlap only if collinear and ranges meet.
                    if (std::abs(cross2(q.a - p.a, d1)) > weld * d1.norm()) continue;
                    const double lo = std::min({(q.a - p.a).dot(d1), (q.b - p.a).dot(d1)});
                    const double hi = std::max({(q.a - p.a).dot(d1), (q.b - p.a).dot(d1)});
                    if (hi > weld && lo < d1.norm2() - weld)
                        throw GeometryError("polygon: overlapping edges");
                    continue;
                }
                const Vec w = q.a - p.a;
                const double t = cross2(w, d2) / denom;
                const double s = cross2(w, d1) / denom;
                const double tol = weld / std::max(d1.norm(), 1e-300);
                if (t > tol && t < 1.0 - tol && s > tol && s < 1.0 - tol)
                    throw GeometryError("polygon: self-intersecting boundary");
            }
        }
    }

    std::vector<Loop> loops_;
};

// ---------------------------------------------------------------------------
// Sphere

class SphereShape final : public ShapeImpl {
  public:
    explicit SphereShape(const Sphere& s) : sph_(s) {
        if (!(s.radius > 0.0)) throw GeometryError("sphere: radius must be positive");
    }
    int dim() const override { return 3; }
    std::string name() const override { return "sphere"; }
    DomainMeasures measures() const override {
        const double r = sph_.radius;
        return {4.0 / 3.0 * kPi * r * r * r, 4.0 * kPi * r * r};
    }
    std::pair<Vec, Vec> bounding_box() const override {
        const Vec r{sph_.radius, sph_.radius, sph_.radius};
        return {sph_.center - r, sph_.center + r};
    }
    int components() const override { return 1; }
    double component_measure(int) const override {
        return 4.0 * kPi * sph_.radius * sph_.radius;
    }
    bool contains(const Vec& p, double eps) const override {
        return distance(p, sph_.center) < sph_.radius - eps;
    }
    void collect_hits(const Vec& a, const Vec& b, double,
                      std::vector<SegmentHit>& out) const override {
        const Vec d = b - a;
        const Vec w = a - sph_.center;
        double t0 = 0.0, t1 = 0.0;
        if (solve_quadratic(d.norm2(), 2.0 * d.dot(w),
                            w.norm2() - sph_.radius * sph_.radius, t0, t1) == 0)
            return;
        for (double t : {t0, t1}) {
            if (t <= 0.0 || t >= 1.0) continue;
            out.push_back({t, surface_point(a + d * t)});
        }
    }
    BoundaryPoint classify(const Vec& p, double tol, double) const override {
        if (std::abs(distance(p, sph_.center) - sph_.radius) > tol)
            throw NotOnBoundaryError("sphere: point is not on the boundary");
        return surface_point(p);
    }
    BoundaryPoint sample_boundary(Rng& rng, double) const override {
        const double zhat = 2.0 * rng.uniform() - 1.0;
        const double phi = kTwoPi * rng.uniform();
        const double rho = std::sqrt(std::max(0.0, 1.0 - zhat * zhat));
        return surface_point(sph_.center + Vec{rho * std::cos(phi), rho * std::sin(phi),
                                               zhat} * sph_.radius);
    }
    std::vector<BoundaryPanel> panelize(int M, double) const override {
        // Equal-height z-bands have equal area; each band gets a share of the
        // panel budget as azimuthal sectors.
        const int bands = std::max(1, static_cast<int>(std::lround(std::sqrt(M / 2.0))));
        const std::vector<int> per_band =
            proportional_counts(std::vector<double>(bands, 1.0), M);
        const double area = component_measure(0);
        std::vector<BoundaryPanel> panels;
        panels.reserve(M);
        for (int b = 0; b < bands; ++b) {
            const double z0 = -1.0 + 2.0 * b / bands;
            const double z1 = -1.0 + 2.0 * (b + 1) / bands;
            for (int k = 0; k < per_band[b]; ++k) {
                const double phi = kTwoPi * (k + 0.5) / per_band[b];
                const double zm = 0.5 * (z0 + z1);
                const double rho = std::sqrt(std::max(0.0, 1.0 - zm * zm));
                BoundaryPanel panel;
                panel.midpoint = surface_point(
                    sph_.center +
                    Vec{rho * std::cos(phi), rho * std::sin(phi), zm} * sph_.radius);
                panel.measure = area / bands / per_band[b];
                panel.corner_adjacent = false;
                panels.push_back(panel);
            }
        }
        return panels;
    }

  private:
    BoundaryPoint surface_point(const Vec& p) const {
        BoundaryPoint bp;
        const Vec radial = (p - sph_.center).normalized();
        bp.position = sph_.center + radial * sph_.radius;
        bp.normal = -radial;
        bp.component_id = 0;
        bp.patch_coord = component_measure(0) * 0.5 * (1.0 + radial.z);
        bp.is_regular = true;
        return bp;
    }

    Sphere sph_;
};

// ---------------------------------------------------------------------------
// Convex polyhedron

class PolyhedronShape final : public ShapeImpl {
  public:
    explicit PolyhedronShape(const ConvexPolyhedron3D& desc) {
        if (desc.faces.size() < 4) throw GeometryError("polyhedron: need >= 4 faces");
        Vec centroid;
        int nv = 0;
        double span = 0.0;
        for (const auto& f : desc.faces)
            for (const auto& v : f) {
                centroid += v;
                nv += 1;
                span = std::max({span, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
            }
        if (nv == 0) throw GeometryError("polyhedron: empty face");
        centroid = centroid / nv;
        const double tol = 1e-9 * std::max(span, 1.0);

        double cum = 0.0;
        for (const auto& verts : desc.faces) {
            if (verts.size() < 3) throw GeometryError("polyhedron: face needs >= 3 vertices");
            Face f;
            f.v = verts;
            // Newell normal, oriented inward via the solid centroid.
            Vec n;
            for (size_t i = 0; i < verts.size(); ++i) {
                const Vec& a = verts[i];
                const Vec& b = verts[(i + 1) % verts.size()];
                n += Vec{(a.y - b.y) * (a.z + b.z), (a.z - b.z) * (a.x + b.x),
                         (a.x - b.x) * (a.y + b.y)};
            }
            if (n.norm() < tol) throw GeometryError("polyhedron: degenerate face");
            n = n.normalized();
            if ((centroid - verts[0]).dot(n) < 0.0) n = -n;
            f.normal_in = n;
            f.origin = verts[0];
            for (const auto& v : verts)
                if (std::abs((v - f.origin).dot(n)) > 10.0 * tol)
                    throw GeometryError("polyhedron: non-planar face");
            f.ex = (verts[1] - verts[0]).normalized();
            f.ey = n.cross(f.ex);
            for (const auto& v : verts)
                f.v2.push_back({(v - f.origin).dot(f.ex), (v - f.origin).dot(f.ey)});
            double area2 = 0.0;
            for (size_t i = 0; i < f.v2.size(); ++i)
                area2 += cross2(f.v2[i], f.v2[(i + 1) % f.v2.size()]);
            if (area2 < 0.0) {  // normalize in-plane winding
                std::reverse(f.v.begin(), f.v.end());
                f.v2.clear();
                f.ex = (f.v[1] - f.v[0]).normalized();
                f.origin = f.v[0];
                f.ey = n.cross(f.ex);
                for (const auto& v : f.v)
                    f.v2.push_back({(v - f.origin).dot(f.ex), (v - f.origin).dot(f.ey)});
                area2 = -area2;
            }
            f.area = 0.5 * area2;
            if (!(f.area > 0.0)) throw GeometryError("polyhedron: zero-area face");
            for (size_t i = 0; i < f.v2.size(); ++i) {
                const Vec e = f.v2[(i + 1) % f.v2.size()] - f.v2[i];
                f.edge2_normal.push_back(perp(e).normalized());  // points inside the face
            }
            f.cum_offset = cum;
            cum += f.area;
            faces_.push_back(std::move(f));
        }
        area_total_ = cum;
        // Solid convexity: every vertex on the inner side of every face plane.
        for (const auto& f : faces_)
            for (const auto& g : faces_)
                for (const auto& v : g.v)
                    if ((v - f.origin).dot(f.normal_in) < -100.0 * tol)
                        throw GeometryError("polyhedron: not convex");
        // Face convexity.
        for (const auto& f : faces_) {
            const size_t n = f.v2.size();
            for (size_t i = 0; i < n; ++i) {
                const Vec a = f.v2[(i + 1) % n] - f.v2[i];
                const Vec b = f.v2[(i + 2) % n] - f.v2[(i + 1) % n];
                if (cross2(a, b) < -tol * std::max(a.norm(), 1e-300))
                    throw GeometryError("polyhedron: non-convex face");
            }
        }
        volume_ = 0.0;
        for (const auto& f : faces_) {
            Vec c;
            for (const auto& v : f.v) c += v;
            c = c / static_cast<double>(f.v.size());
            volume_ += f.area * c.dot(-f.normal_in);
        }
        volume_ = std::abs(volume_) / 3.0;
    }

    int dim() const override { return 3; }
    std::string name() const override { return "polyhedron3d"; }
    DomainMeasures measures() const override { return {volume_, area_total_}; }
    std::pair<Vec, Vec> bounding_box() const override {
        Vec lo = faces_[0].v[0], hi = faces_[0].v[0];
        for (const auto& f : faces_)
            for (const auto& v : f.v) {
                lo.x = std::min(lo.x, v.x);
                lo.y = std::min(lo.y, v.y);
                lo.z = std::min(lo.z, v.z);
                hi.x = std::max(hi.x, v.x);
                hi.y = std::max(hi.y, v.y);
                hi.z = std::max(hi.z, v.z);
            }
        return {lo, hi};
    }
    int components() const override { return 1; }
    double component_measure(int) const override { return area_total_; }

    bool contains(const Vec& p, double eps) const override {
        for (const auto& f : faces_)
            if ((p - f.origin).dot(f.normal_in) <= eps) return false;
        return true;
    }

    void collect_hits(const Vec& a, const Vec& b, double eps_corner,
                      std::vector<SegmentHit>& out) const override {
        const Vec d = b - a;
        for (int fi = 0; fi < static_cast<int>(faces_.size()); ++fi) {
            const Face& f = faces_[fi];
            const double denom = d.dot(f.normal_in);
            if (std::abs(denom) < 1e-300) continue;
            const double t = (f.origin - a).dot(f.normal_in) / denom;
            if (t <= 0.0 || t >= 1.0) continue;
            const Vec p = a + d * t;
            const Vec q{(p - f.origin).dot(f.ex), (p - f.origin).dot(f.ey), 0.0};
            if (in_face(f, q, 0.0)) out.push_back({t, face_point(fi, q, eps_corner)});
        }
    }

    BoundaryPoint classify(const Vec& p, double tol, double eps_corner) const override {
        int best = -1;
        Vec best_q;
        double best_d = tol;
        for (int fi = 0; fi < static_cast<int>(faces_.size()); ++fi) {
            const Face& f = faces_[fi];
            const double dn = (p - f.origin).dot(f.normal_in);
            Vec q{(p - f.origin).dot(f.ex), (p - f.origin).dot(f.ey), 0.0};
            const double din = edge_clearance(f, q);
            const double lateral = din < 0.0 ? -din : 0.0;
            const double dist = std::sqrt(dn * dn + lateral * lateral);
            if (dist <= best_d) {
                best_d = dist;
                best = fi;
                best_q = q;
            }
        }
        if (best < 0) throw NotOnBoundaryError("polyhedron: point is not on the boundary");
        return face_point(best, best_q, eps_corner);
    }

    BoundaryPoint sample_boundary(Rng& rng, double eps_corner) const override {
        double s = rng.uniform() * area_total_;
        int fi = 0;
        while (fi + 1 < static_cast<int>(faces_.size()) &&
               s >= faces_[fi].cum_offset + faces_[fi].area)
            ++fi;
        const Face& f = faces_[fi];
        // Fan triangle by area, then uniform in the triangle.
        double pick = rng.uniform() * 2.0 * f.area;
        size_t k = 1;
        for (; k + 1 < f.v2.size(); ++k) {
            const double tri2 = cross2(f.v2[k] - f.v2[0], f.v2[k + 1] - f.v2[0]);
            if (pick < tri2 || k + 2 == f.v2.size()) break;
            pick -= tri2;
        }
        const double r1 = std::sqrt(rng.uniform());
        const double r2 = rng.uniform();
        const Vec q = f.v2[0] * (1.0 - r1) + f.v2[k] * (r1 * (1.0 - r2)) +
                      f.v2[k + 1] * (r1 * r2);
        return face_point(fi, q, eps_corner);
    }

    std::vector<BoundaryPanel> panelize(int M, double eps_corner) const override {
        std::vector<double> weights;
        for (const auto& f : faces_) weights.push_back(f.area);
        const std::vector<int> counts = proportional_counts(weights, M);
        const double flag_dist = 2.5 * std::sqrt(area_total_ / M);
        std::vector<BoundaryPanel> panels;
        panels.reserve(M);
        for (size_t fi = 0; fi < faces_.size(); ++fi) {
            const Face& f = faces_[fi];
            const int n = counts[fi];
            const int cols = std::max(1, static_cast<int>(std::lround(std::sqrt(n))));
            const std::vector<int> rows =
                proportional_counts(std::vector<double>(cols, 1.0), n);
            // Equal-area u-columns, then equal-area w-rows inside each column.
            double u_lo = min_u(f.v2);
            for (int c = 0; c < cols; ++c) {
                const double target = f.area * (c + 1) / cols;
                const double u_hi = (c + 1 == cols)
                                        ? max_u(f.v2)
                                        : solve_strip(f.v2, target, 0);
                std::vector<Vec> column = clip_between(f.v2, u_lo, u_hi, 0);
                const double col_area = poly_area(column);
                double w_lo = min_w(column);
                for (int r = 0; r < rows[c]; ++r) {
                    const double wtarget = col_area * (r + 1) / rows[c];
                    const double w_hi = (r + 1 == rows[c])
                                            ? max_w(column)
                                            : solve_strip(column, wtarget, 1);
                    const std::vector<Vec> cell = clip_between(column, w_lo, w_hi, 1);
                    const double a = poly_area(cell);
                    if (a <= 0.0) { w_lo = w_hi; continue; }
                    Vec q = poly_centroid(cell);
                    BoundaryPanel panel;
                    panel.midpoint = face_point(static_cast<int>(fi), q, eps_corner);
                    panel.measure = a;
                    panel.corner_adjacent = edge_clearance(f, q) <= flag_dist;
                    panels.push_back(panel);
                    w_lo = w_hi;
                }
                u_lo = u_hi;
            }
        }
        return panels;
    }

  private:
    struct Face {
        std::vector<Vec> v;        // 3-D vertices
        std::vector<Vec> v2;       // in-plane coordinates (x = ex, y = ey)
        std::vector<Vec> edge2_normal;
        Vec normal_in, origin, ex, ey;
        double area = 0.0;
        double cum_offset = 0.0;
    };

    // Signed clearance from the face edges in face coordinates (positive inside).
    static double edge_clearance(const Face& f, const Vec& q) {
        double m = 1e300;
        for (size_t i = 0; i < f.v2.size(); ++i)
            m = std::min(m, (q - f.v2[i]).dot(f.edge2_normal[i]));
        return m;
    }
    static bool in_face(const Face& f, const Vec& q, double tol) {
        return edge_clearance(f, q) >= -tol;
    }

    static double min_u(const std::vector<Vec>& poly) {
        double m = 1e300;
        for (const auto& v : poly) m = std::min(m, v.x);
        return m;
    }
    static double max_u(const std::vector<Vec>& poly) {
        double m = -1e300;
        for (const auto& v : poly) m = std::max(m, v.x);
        return m;
    }
    static double min_w(const std::vector<Vec>& poly) {
        double m = 1e300;
        for (const auto& v : poly) m = std::min(m, v.y);
        return m;
    }
    static double max_w(const std::vector<Vec>& poly) {
        double m = -1e300;
        for (const auto& v : poly) m = std::max(m, v.y);
        return m;
    }

    static double coord(const Vec& v, int axis) { return axis == 0 ? v.x : v.y; }

    // Clip a convex polygon against coord <= cut (axis 0 = u, 1 = w).
    static std::vector<Vec> clip_below(const std::vector<Vec>& poly, double cut, int axis) {
        std::vector<Vec> out;
        const size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec& a = poly[i];
            const Vec& b = poly[(i + 1) % n];
            const bool ain = coord(a, axis) <= cut;
            const bool bin = coord(b, axis) <= cut;
            if (ain) out.push_back(a);
            if (ain != bin) {
                const double t = (cut - coord(a, axis)) / (coord(b, axis) - coord(a, axis));
                out.push_back(a + (b - a) * t);
            }
        }
        return out;
    }
    static std::vector<Vec> clip_between(const std::vector<Vec>& poly, double lo, double hi,
                                         int axis) {
        std::vector<Vec> flipped;
        for (const auto& v : clip_below(poly, hi, axis)) flipped.push_back(v);
        // clip coord >= lo == -coord <= -lo on mirrored polygon
        std::vector<Vec> mirrored;
        for (const auto& v : flipped)
            mirrored.push_back(axis == 0 ? Vec{-v.x, v.y} : Vec{v.x, -v.y});
        std::reverse(mirrored.begin(), mirrored.end());
        std::vector<Vec> cut = clip_below(mirrored, -lo, axis);
        std::vector<Vec> out;
        for (const auto& v : cut) out.push_back(axis == 0 ? Vec{-v.x, v.y} : Vec{v.x, -v.y});
        std::reverse(out.begin(), out.end());
        return out;
    }
    static double poly_area(const std::vector<Vec>& poly) {
        double a2 = 0.0;
        for (size_t i = 0; i < poly.size(); ++i)
            a2 += cross2(poly[i], poly[(i + 1) % poly.size()]);
        return std::abs(a2) * 0.5;
    }
    static Vec poly_centroid(const std::vector<Vec>& poly) {
        double a2 = 0.0;
        Vec c;
        for (size_t i = 0; i < poly.size(); ++i) {
            const Vec& p = poly[i];
            const Vec& q = poly[(i + 1) % poly.size()];
            const double w = cross2(p, q);
            a2 += w;
            c += (p + q) * w;
        }
        if (std::abs(a2) < 1e-300) return poly.empty() ? Vec{} : poly[0];
        return c / (3.0 * a2);
    }
    // Bisection for the cut with strip area == target.
    static double solve_strip(const std::vector<Vec>& poly, double target, int axis) {
        double lo = 1e300, hi = -1e300;
        for (const auto& v : poly) {
            lo = std::min(lo, coord(v, axis));
            hi = std::max(hi, coord(v, axis));
        }
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (poly_area(clip_below(poly, mid, axis)) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    BoundaryPoint face_point(int fi, const Vec& q, double eps_corner) const {
        const Face& f = faces_[fi];
        BoundaryPoint bp;
        bp.position = f.origin + f.ex * q.x + f.ey * q.y;
        bp.normal = f.normal_in;
        bp.component_id = 0;
        bp.patch_coord = f.cum_offset + poly_area(clip_below(f.v2, q.x, 0));
        bp.is_regular = edge_clearance(f, q) > eps_corner;
        return bp;
    }

    std::vector<Face> faces_;
    double area_total_ = 0.0;
    double volume_ = 0.0;
};

std::shared_ptr<const ShapeImpl> build_shape(const ShapeSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::shared_ptr<const ShapeImpl> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) return std::make_shared<DiskShape>(s);
            else if constexpr (std::is_same_v<T, Ellipse>)
                return std::make_shared<EllipseShape>(s);
            else if constexpr (std::is_same_v<T, Annulus>)
                return std::make_shared<AnnulusShape>(s);
            else if constexpr (std::is_same_v<T, Polygon2D>)
                return std::make_shared<PolygonShape>(s, 0.0);
            else if constexpr (std::is_same_v<T, Sphere>)
                return std::make_shared<SphereShape>(s);
            else
                return std::make_shared<PolyhedronShape>(s);
        },
        spec);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Domain facade

Domain::Domain(ShapeSpec spec) : spec_(std::move(spec)), impl_(detail::build_shape(spec_)) {
    const auto [lo, hi] = impl_->bounding_box();
    diameter_ = distance(lo, hi);
    if (!(diameter_ > 0.0)) throw GeometryError("domain: degenerate bounding box");
    eps_ = 1e-9 * diameter_;
    eps_corner_ = 1e-7 * diameter_;
    component_offsets_.resize(impl_->components());
    double cum = 0.0;
    for (int c = 0; c < impl_->components(); ++c) {
        component_offsets_[c] = cum;
        cum += impl_->component_measure(c);
    }
    boundary_measure_ = cum;
}

int Domain::dim() const { return impl_->dim(); }
std::string Domain::shape_name() const { return impl_->name(); }
double Domain::diameter() const { return diameter_; }
double Domain::epsilon() const { return eps_; }
double Domain::corner_epsilon() const { return eps_corner_; }
std::pair<Vec, Vec> Domain::bounding_box() const { return impl_->bounding_box(); }
DomainMeasures Domain::measures() const { return impl_->measures(); }
int Domain::component_count() const { return impl_->components(); }
double Domain::component_boundary_measure(int c) const {
    return impl_->component_measure(c);
}
double Domain::boundary_measure() const { return boundary_measure_; }

bool Domain::contains(const Vec& p) const { return impl_->contains(p, eps_); }

HitResult Domain::ray_cast(const Vec& x, const Vec& u) const {
    if (std::abs(u.norm() - 1.0) > 1e-9)
        throw DegenerateDirectionError("ray_cast: direction must be a unit vector");
    const double reach = 2.5 * diameter_;
    const Vec far = x + u * reach;
    std::vector<SegmentHit> hits;
    impl_->collect_hits(x, far, eps_corner_, hits);
    std::sort(hits.begin(), hits.end(),
              [](const SegmentHit& a, const SegmentHit& b) { return a.t < b.t; });
    for (const auto& h : hits) {
        const double dist = h.t * reach;
        if (dist <= eps_) continue;
        return {h.point, dist};
    }
    throw NoHitError("ray_cast: no boundary hit (tangential or outward ray)");
}

std::vector<SegmentHit> Domain::segment_hits(const Vec& a, const Vec& b) const {
    std::vector<SegmentHit> hits;
    impl_->collect_hits(a, b, eps_corner_, hits);
    std::sort(hits.begin(), hits.end(),
              [](const SegmentHit& x, const SegmentHit& y) { return x.t < y.t; });
    std::vector<SegmentHit> out;
    const double len = distance(a, b);
    for (const auto& h : hits) {
        if (distance(h.point.position, a) <= eps_ || distance(h.point.position, b) <= eps_)
            continue;
        // Merge duplicates from shared vertices/edges of adjacent facets.
        if (!out.empty() && (h.t - out.back().t) * len <= eps_) continue;
        out.push_back(h);
    }
    return out;
}

BoundaryPoint Domain::boundary_point(const Vec& p, double tol) const {
    return impl_->classify(p, tol < 0.0 ? eps_ : tol, eps_corner_);
}

Vec Domain::inward_normal(const Vec& p) const {
    const BoundaryPoint bp = impl_->classify(p, eps_, eps_corner_);
    if (!bp.is_regular)
        throw NonRegularPointError("inward_normal: point is on the non-smooth set");
    return bp.normal;
}

bool Domain::visible(const Vec& a, const Vec& b) const {
    if (distance(a, b) <= eps_) return false;
    if (!segment_hits(a, b).empty()) return false;
    return contains((a + b) * 0.5);
}

BoundaryPoint Domain::sample_boundary_uniform(Rng& rng) const {
    return impl_->sample_boundary(rng, eps_corner_);
}

Vec Domain::sample_interior_uniform(Rng& rng) const {
    const auto [lo, hi] = impl_->bounding_box();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Vec p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), 0.0};
        if (dim() == 3) p.z = rng.uniform(lo.z, hi.z);
        if (contains(p)) return p;
    }
    throw GeometryError("sample_interior_uniform: rejection failed");
}

double Domain::boundary_coord(const BoundaryPoint& p) const {
    const double s = component_offsets_.at(p.component_id) + p.patch_coord;
    double c = s / boundary_measure_;
    if (c >= 1.0) c -= 1.0;
    return std::max(0.0, c);
}

BoundaryPoint Domain::boundary_point_at_arc(int component, double s) const {
    if (component < 0 || component >= component_count())
        throw GeometryError("boundary_point_at_arc: bad component id");
    return impl_->at_arc(component, s, eps_corner_);
}

std::vector<BoundaryPanel> Domain::panelize(int panel_count) const {
    if (panel_count < std::max(1, component_count()))
        throw GeometryError("panelize: panel count below component count");
    return impl_->panelize(panel_count, eps_corner_);
}

}  // namespace billiards
