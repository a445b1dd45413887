#include "billiards/billiard.hpp"

#include <algorithm>
#include <cmath>

#include "billiards/walk.hpp"

namespace billiards {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTangentialTol = 1e-9;

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
const double kGl8X[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                         0.9602898564975363};
const double kGl8W[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                         0.1012285362903763};

void extend_with_walk(BilliardPath& path, const Domain& domain,
                      const ReflectionLaw& law, BoundaryPoint at, double total_time,
                      Rng& rng) {
    double t = path.times.back();
    while (t < total_time) {
        const StepOutcome hop = step(at, law, domain, rng);
        path.resample_count += hop.resamples;
        const double t_next = t + hop.flight_length;
        if (t_next >= total_time) {
            const Vec final_pos =
                path.nodes.back() + hop.direction * (total_time - t);
            path.times.push_back(total_time);
            path.nodes.push_back(final_pos);
            break;
        }
        path.times.push_back(t_next);
        path.nodes.push_back(hop.next.position);
        at = hop.next;
        t = t_next;
    }
    path.total_time = total_time;
}

}  // namespace

BilliardPath make_path(const Domain& domain, const ReflectionLaw& law, const Vec& x0,
                       const Vec& v0, double total_time, Rng& rng) {
    if (!(total_time > 0.0)) throw TimeOutOfRangeError("make_path: total_time <= 0");
    BilliardPath path;
    path.times.push_back(0.0);
    path.nodes.push_back(x0);
    const HitResult first = domain.ray_cast(x0, v0);
    if (first.distance >= total_time) {
        path.times.push_back(total_time);
        path.nodes.push_back(x0 + v0 * total_time);
        path.total_time = total_time;
        return path;
    }
    path.times.push_back(first.distance);
    path.nodes.push_back(first.point.position);
    if (!first.point.is_regular)
        throw NonRegularPointError("make_path: initial flight hits the non-smooth set");
    extend_with_walk(path, domain, law, first.point, total_time, rng);
    return path;
}

BilliardPath make_path_from_boundary(const Domain& domain, const ReflectionLaw& law,
                                     const BoundaryPoint& start, double total_time,
                                     Rng& rng) {
    if (!(total_time > 0.0)) throw TimeOutOfRangeError("make_path: total_time <= 0");
    BilliardPath path;
    path.times.push_back(0.0);
    path.nodes.push_back(start.position);
    extend_with_walk(path, domain, law, start, total_time, rng);
    return path;
}

BilliardPath make_path_stationary(const Domain& domain, const ReflectionLaw& law,
                                  double total_time, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Vec x0 = domain.sample_interior_uniform(rng);
        Vec v0;
        if (domain.dim() == 2) {
            const double a = 2.0 * kPi * rng.uniform();
            v0 = {std::cos(a), std::sin(a)};
        } else {
            const double z = 2.0 * rng.uniform() - 1.0;
            const double a = 2.0 * kPi * rng.uniform();
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            v0 = {rho * std::cos(a), rho * std::sin(a), z};
        }
        try {
            return make_path(domain, law, x0, v0, total_time, rng);
        } catch (const NonRegularPointError&) {
            continue;  // measure-zero initial corner hit; redraw
        }
    }
    throw StuckAtCornerError("make_path_stationary: could not launch a path");
}

PathState state_at(const BilliardPath& path, double t) {
    if (t < 0.0 || t > path.total_time)
        throw TimeOutOfRangeError("state_at: time outside [0, total_time]");
    const auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
    size_t i = static_cast<size_t>(it - path.times.begin());
    i = std::min(std::max<size_t>(i, 1), path.times.size() - 1) - 1;
    const double dt = path.times[i + 1] - path.times[i];
    const Vec v = (path.nodes[i + 1] - path.nodes[i]) / dt;
    return {path.nodes[i] + v * (t - path.times[i]), v};
}

double region_measure(const std::vector<Region>& regions, int dim) {
    // Regions in the shipped experiments are disjoint; measures add.
    double m = 0.0;
    for (const auto& r : regions) {
        if (std::holds_alternative<RegionBall>(r)) {
            const auto& b = std::get<RegionBall>(r);
            m += dim == 2 ? kPi * b.radius * b.radius
                          : 4.0 / 3.0 * kPi * b.radius * b.radius * b.radius;
        } else {
            const auto& box = std::get<RegionBox>(r);
            const Vec d = box.hi - box.lo;
            m += dim == 2 ? d.x * d.y : d.x * d.y * d.z;
        }
    }
    return m;
}

namespace {

// Entry/exit times of the ray p + s v, s in [0, len], for one region.
bool region_interval(const Region& region, const Vec& p, const Vec& v, double len,
                     double& s0, double& s1) {
    if (std::holds_alternative<RegionBall>(region)) {
        const auto& ball = std::get<RegionBall>(region);
        const Vec w = p - ball.center;
        const double b = v.dot(w);
        const double c = w.norm2() - ball.radius * ball.radius;
        const double disc = b * b - c;  // |v| == 1
        if (disc <= 0.0) return false;
        const double sq = std::sqrt(disc);
        s0 = std::max(0.0, -b - sq);
        s1 = std::min(len, -b + sq);
        return s1 > s0;
    }
    const auto& box = std::get<RegionBox>(region);
    s0 = 0.0;
    s1 = len;
    const double pc[3] = {p.x, p.y, p.z};
    const double vc[3] = {v.x, v.y, v.z};
    const double lo[3] = {box.lo.x, box.lo.y, box.lo.z};
    const double hi[3] = {box.hi.x, box.hi.y, box.hi.z};
    for (int a = 0; a < 3; ++a) {
        if (std::abs(vc[a]) < 1e-300) {
            if (pc[a] < lo[a] || pc[a] > hi[a]) return false;
            continue;
        }
        double t0 = (lo[a] - pc[a]) / vc[a];
        double t1 = (hi[a] - pc[a]) / vc[a];
        if (t0 > t1) std::swap(t0, t1);
        s0 = std::max(s0, t0);
        s1 = std::min(s1, t1);
        if (s1 <= s0) return false;
    }
    return s1 > s0;
}

}  // namespace

double occupation_time(const BilliardPath& path, const std::vector<Region>& regions) {
    double total = 0.0;
    std::vector<std::pair<double, double>> intervals;
    for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const double dt = path.times[i + 1] - path.times[i];
        if (dt <= 0.0) continue;
        const Vec v = (path.nodes[i + 1] - path.nodes[i]) / dt;
        intervals.clear();
        for (const auto& r : regions) {
            double s0 = 0.0, s1 = 0.0;
            if (region_interval(r, path.nodes[i], v, dt, s0, s1))
                intervals.emplace_back(s0, s1);
        }
        std::sort(intervals.begin(), intervals.end());
        double cur_lo = 0.0, cur_hi = -1.0;
        for (const auto& [lo, hi] : intervals) {
            if (lo > cur_hi) {
                total += std::max(0.0, cur_hi - cur_lo);
                cur_lo = lo;
                cur_hi = hi;
            } else {
                cur_hi = std::max(cur_hi, hi);
            }
        }
        total += std::max(0.0, cur_hi - cur_lo);
    }
    return total;
}

double occupation_fraction(const BilliardPath& path, const std::vector<Region>& regions) {
    if (path.total_time <= 0.0) return 0.0;
    return occupation_time(path, regions) / path.total_time;
}

double path_integral(const BilliardPath& path,
                     const std::function<double(const Vec&, const Vec&)>& f) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const double dt = path.times[i + 1] - path.times[i];
        if (dt <= 0.0) continue;
        const Vec v = (path.nodes[i + 1] - path.nodes[i]) / dt;
        const double mid = 0.5 * dt;
        double seg = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double off = mid * kGl8X[k];
            seg += kGl8W[k] * (f(path.nodes[i] + v * (mid - off), v) +
                               f(path.nodes[i] + v * (mid + off), v));
        }
        total += seg * mid;
    }
    return total;
}

void validate_internal_surface(const InternalSurface& surface, const Domain& domain) {
    const auto check = [&](const Vec& p) {
        if (!domain.contains(p))
            throw GeometryError("internal surface: facet point not strictly inside");
    };
    for (const auto& seg : surface.segments)
        for (int k = 0; k <= 32; ++k)
            check(seg[0] + (seg[1] - seg[0]) * (static_cast<double>(k) / 32.0));
    for (const auto& tri : surface.triangles)
        for (int a = 0; a <= 8; ++a)
            for (int b = 0; a + b <= 8; ++b) {
                const double u = a / 8.0, w = b / 8.0;
                check(tri[0] + (tri[1] - tri[0]) * u + (tri[2] - tri[0]) * w);
            }
}

CrossingScan detect_crossings(const BilliardPath& path, const InternalSurface& surface,
                              int dim) {
    CrossingScan scan;
    // Facet frames: first axis is the facet normal.
    struct Facet {
        Vec origin;
        Mat3 frame;
        Vec e1, e2;  // spanning edges for the in-facet test
    };
    std::vector<Facet> facets;
    if (dim == 2) {
        for (const auto& seg : surface.segments) {
            const Vec dir = (seg[1] - seg[0]).normalized();
            BoundaryPoint fake;
            fake.normal = perp(dir);
            fake.is_regular = true;
            facets.push_back({seg[0], build_frame(fake, 2), seg[1] - seg[0], {}});
        }
    } else {
        for (const auto& tri : surface.triangles) {
            const Vec n = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
            BoundaryPoint fake;
            fake.normal = n;
            fake.is_regular = true;
            facets.push_back(
                {tri[0], build_frame(fake, 3), tri[1] - tri[0], tri[2] - tri[0]});
        }
    }

    for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const double dt = path.times[i + 1] - path.times[i];
        if (dt <= 0.0) continue;
        const Vec v = (path.nodes[i + 1] - path.nodes[i]) / dt;
        const Vec& p = path.nodes[i];
        for (size_t fi = 0; fi < facets.size(); ++fi) {
            const Facet& f = facets[fi];
            const Vec n = f.frame.col[0];
            const double vn = v.dot(n);
            const double plane = (f.origin - p).dot(n);
            if (std::abs(vn) < kTangentialTol) {
                if (std::abs(plane) < kTangentialTol) scan.tangential_excluded += 1;
                continue;
            }
            const double s = plane / vn;
            if (s <= 0.0 || s >= dt) continue;
            const Vec hit = p + v * s;
            if (dim == 2) {
                const double along = (hit - f.origin).dot(f.e1) / f.e1.norm2();
                if (along < 0.0 || along >= 1.0) continue;
            } else {
                // Barycentric in-triangle test.
                const Vec w = hit - f.origin;
                const double d11 = f.e1.dot(f.e1), d12 = f.e1.dot(f.e2),
                             d22 = f.e2.dot(f.e2);
                const double dw1 = w.dot(f.e1), dw2 = w.dot(f.e2);
                const double det = d11 * d22 - d12 * d12;
                const double u = (d22 * dw1 - d12 * dw2) / det;
                const double t = (d11 * dw2 - d12 * dw1) / det;
                if (u < 0.0 || t < 0.0 || u + t > 1.0) continue;
            }
            CrossingEvent ev;
            ev.time = path.times[i] + s;
            ev.point = hit;
            Vec w = f.frame.apply_transpose(v);
            if (w.x < 0.0) w = -w;
            ev.relative_direction = w;
            ev.polar_angle = dim == 2 ? std::atan2(w.y, w.x)
                                      : std::acos(std::clamp(w.x, -1.0, 1.0));
            ev.facet = static_cast<int>(fi);
            scan.events.push_back(ev);
        }
    }
    std::sort(scan.events.begin(), scan.events.end(),
              [](const CrossingEvent& a, const CrossingEvent& b) {
                  return a.time < b.time;
              });
    return scan;
}

stats::BinnedMeasure velocity_histogram(const BilliardPath& path, int bins,
                                        double t_start) {
    stats::BinnedMeasure hist(bins);
    for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const double dt = path.times[i + 1] - path.times[i];
        if (dt <= 0.0) continue;
        const double weight =
            std::min(path.times[i + 1], path.total_time) -
            std::max(path.times[i], t_start);
        if (weight <= 0.0) continue;
        const Vec v = (path.nodes[i + 1] - path.nodes[i]) / dt;
        const double coord = (std::atan2(v.y, v.x) + kPi) / (2.0 * kPi);
        hist.add(std::min(coord, 1.0 - 1e-16), weight);
    }
    return hist;
}

}  // namespace billiards
