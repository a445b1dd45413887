#include "billiards/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <variant>

#include "billiards/billiard.hpp"
#include "billiards/chords.hpp"
#include "billiards/errors.hpp"
#include "billiards/kernel.hpp"
#include "billiards/stats.hpp"
#include "billiards/walk.hpp"

namespace billiards::experiments {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;
using stats::TestResult;

namespace {

constexpr const char* kExperiments[] = {
    "walk-stationarity", "billiard-stationarity", "mean-chord", "bertrand",
    "induced-chords",    "crossings",             "kernel-solve", "clt",
    "ergodicity-decay",  "reversal",
};

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
}

// ---------------------------------------------------------------- formatting

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string point_cols(const Vec& p, int dim) {
    std::string s = fmt(p.x) + "," + fmt(p.y);
    if (dim == 3) s += "," + fmt(p.z);
    return s;
}

// Deterministic CSV sink with a row cap; the header does not count.
class Csv {
  public:
    Csv(const fs::path& path, const std::string& header, long cap)
        : out_(path, std::ios::binary), cap_(cap) {
        out_ << header << '\n';
    }
    bool full() const { return rows_ >= cap_; }
    void line(const std::string& s) {
        if (full()) return;
        out_ << s << '\n';
        ++rows_;
    }

  private:
    std::ofstream out_;
    long rows_ = 0;
    long cap_;
};

// ---------------------------------------------------------------- json utils

const json& need(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) fail(where + "." + key, "missing required field");
    return j.at(key);
}

double num_field(const json& j, const std::string& key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) fail(where + "." + key, "unknown field");
    }
}

Vec vec_from_json(const json& j, int dim, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        fail(where, "expected an array of " + std::to_string(dim) + " numbers");
    for (const auto& c : j)
        if (!c.is_number()) fail(where, "expected an array of numbers");
    Vec v{j[0].get<double>(), j[1].get<double>(), 0.0};
    if (dim == 3) v.z = j[2].get<double>();
    return v;
}

json vec_to_json(const Vec& v, int dim) {
    json a = json::array({v.x, v.y});
    if (dim == 3) a.push_back(v.z);
    return a;
}

// ------------------------------------------------------------------ builtins

json make_builtin(const std::string& name) {
    if (name == "unit-disk")
        return {{"type", "disk"}, {"radius", 1.0}, {"center", {0.0, 0.0}}};
    if (name == "unit-square")
        return {{"type", "polygon2d"},
                {"vertices", {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}}};
    if (name == "ellipse-2x1")
        return {{"type", "ellipse"},
                {"semi_x", 2.0},
                {"semi_y", 1.0},
                {"center", {0.0, 0.0}}};
    if (name == "l-shape")
        return {{"type", "polygon2d"},
                {"vertices",
                 {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}}}};
    if (name == "annulus-1-2")
        return {{"type", "annulus"},
                {"inner_radius", 1.0},
                {"outer_radius", 2.0},
                {"center", {0.0, 0.0}}};
    if (name == "unit-sphere")
        return {{"type", "sphere"}, {"radius", 1.0}, {"center", {0.0, 0.0, 0.0}}};
    if (name == "unit-cube") {
        const double h = 0.5;
        json verts = json::array();
        for (int i = 0; i < 8; ++i) {
            verts.push_back({(i & 1) ? h : -h, (i & 2) ? h : -h, (i & 4) ? h : -h});
        }
        json faces = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                      {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
        return {{"type", "polyhedron3d"}, {"vertices", verts}, {"faces", faces}};
    }
    fail("domain", "unknown builtin '" + name + "'");
}

json resolve_domain_json(const json& spec, int depth) {
    if (depth > 4) fail("domain", "file references nested too deeply");
    if (spec.is_string()) {
        const std::string s = spec.get<std::string>();
        if (s.rfind("builtin:", 0) == 0) return make_builtin(s.substr(8));
        std::ifstream in(s);
        if (!in) fail("domain", "cannot read file '" + s + "'");
        json inner;
        try {
            inner = json::parse(in);
        } catch (const json::parse_error& e) {
            fail("domain", "invalid JSON in '" + s + "': " + e.what());
        }
        return resolve_domain_json(inner, depth + 1);
    }
    if (!spec.is_object()) fail("domain", "expected an object, builtin name, or path");
    return spec;
}

std::vector<Vec> loop_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() < 3) fail(where, "expected at least 3 vertices");
    std::vector<Vec> loop;
    for (size_t i = 0; i < j.size(); ++i)
        loop.push_back(vec_from_json(j[i], 2, where + "[" + std::to_string(i) + "]"));
    return loop;
}

ShapeSpec shape_from_json(const json& d) {
    const std::string type = need(d, "type", "domain").get<std::string>();
    if (type == "disk") {
        reject_unknown_keys(d, {"type", "radius", "center"}, "domain");
        Disk s;
        s.radius = num_field(d, "radius", "domain");
        if (d.contains("center")) s.center = vec_from_json(d["center"], 2, "domain.center");
        return s;
    }
    if (type == "ellipse") {
        reject_unknown_keys(d, {"type", "semi_x", "semi_y", "center"}, "domain");
        Ellipse s;
        s.semi_x = num_field(d, "semi_x", "domain");
        s.semi_y = num_field(d, "semi_y", "domain");
        if (d.contains("center")) s.center = vec_from_json(d["center"], 2, "domain.center");
        return s;
    }
    if (type == "annulus") {
        reject_unknown_keys(d, {"type", "inner_radius", "outer_radius", "center"},
                            "domain");
        Annulus s;
        s.inner_radius = num_field(d, "inner_radius", "domain");
        s.outer_radius = num_field(d, "outer_radius", "domain");
        if (d.contains("center")) s.center = vec_from_json(d["center"], 2, "domain.center");
        return s;
    }
    if (type == "polygon2d") {
        reject_unknown_keys(d, {"type", "vertices", "loops"}, "domain");
        Polygon2D s;
        if (d.contains("vertices") == d.contains("loops"))
            fail("domain", "polygon2d needs exactly one of 'vertices' or 'loops'");
        if (d.contains("vertices")) {
            s.loops.push_back(loop_from_json(d["vertices"], "domain.vertices"));
        } else {
            const json& loops = d["loops"];
            if (!loops.is_array() || loops.empty())
                fail("domain.loops", "expected a non-empty array of loops");
            for (size_t i = 0; i < loops.size(); ++i)
                s.loops.push_back(
                    loop_from_json(loops[i], "domain.loops[" + std::to_string(i) + "]"));
        }
        return s;
    }
    if (type == "sphere") {
        reject_unknown_keys(d, {"type", "radius", "center"}, "domain");
        Sphere s;
        s.radius = num_field(d, "radius", "domain");
        if (d.contains("center")) s.center = vec_from_json(d["center"], 3, "domain.center");
        return s;
    }
    if (type == "polyhedron3d") {
        reject_unknown_keys(d, {"type", "vertices", "faces"}, "domain");
        const json& vj = need(d, "vertices", "domain");
        const json& fj = need(d, "faces", "domain");
        if (!vj.is_array() || vj.size() < 4)
            fail("domain.vertices", "expected at least 4 vertices");
        std::vector<Vec> verts;
        for (size_t i = 0; i < vj.size(); ++i)
            verts.push_back(
                vec_from_json(vj[i], 3, "domain.vertices[" + std::to_string(i) + "]"));
        if (!fj.is_array() || fj.size() < 4)
            fail("domain.faces", "expected at least 4 faces");
        ConvexPolyhedron3D s;
        for (size_t f = 0; f < fj.size(); ++f) {
            const json& face = fj[f];
            const std::string where = "domain.faces[" + std::to_string(f) + "]";
            if (!face.is_array() || face.size() < 3)
                fail(where, "expected at least 3 vertex indices");
            std::vector<Vec> loop;
            for (const auto& idx : face) {
                if (!idx.is_number_integer()) fail(where, "expected integer indices");
                const long k = idx.get<long>();
                if (k < 0 || k >= static_cast<long>(verts.size()))
                    fail(where, "vertex index out of range");
                loop.push_back(verts[static_cast<size_t>(k)]);
            }
            s.faces.push_back(std::move(loop));
        }
        return s;
    }
    fail("domain.type", "unknown type '" + type + "'");
}

json shape_to_json(const Domain& domain) {
    const int dim = domain.dim();
    json out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                out = {{"type", "disk"},
                       {"radius", s.radius},
                       {"center", vec_to_json(s.center, dim)}};
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                out = {{"type", "ellipse"},
                       {"semi_x", s.semi_x},
                       {"semi_y", s.semi_y},
                       {"center", vec_to_json(s.center, dim)}};
            } else if constexpr (std::is_same_v<T, Annulus>) {
                out = {{"type", "annulus"},
                       {"inner_radius", s.inner_radius},
                       {"outer_radius", s.outer_radius},
                       {"center", vec_to_json(s.center, dim)}};
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                json loops = json::array();
                for (const auto& loop : s.loops) {
                    json l = json::array();
                    for (const auto& v : loop) l.push_back(vec_to_json(v, 2));
                    loops.push_back(l);
                }
                out = {{"type", "polygon2d"}, {"loops", loops}};
            } else if constexpr (std::is_same_v<T, Sphere>) {
                out = {{"type", "sphere"},
                       {"radius", s.radius},
                       {"center", vec_to_json(s.center, dim)}};
            } else {
                json faces = json::array();
                for (const auto& face : s.faces) {
                    json l = json::array();
                    for (const auto& v : face) l.push_back(vec_to_json(v, 3));
                    faces.push_back(l);
                }
                out = {{"type", "polyhedron3d"}, {"faces", faces}};
            }
        },
        domain.spec());
    return out;
}

json law_to_json(const ReflectionLaw& law) {
    switch (law.kind()) {
        case LawKind::cosine:
            return {{"law", "cosine"}};
        case LawKind::uniform_hemisphere:
            return {{"law", "uniform"}};
        default:
            return {{"law", "custom"}};
    }
}

// ----------------------------------------------------- replica bookkeeping

std::vector<long> chunk_sizes(long n, int replicas) {
    std::vector<long> sizes(replicas, n / replicas);
    for (int r = 0; r < n % replicas; ++r) ++sizes[r];
    return sizes;
}

double expected_mean_chord(const Domain& domain) {
    const DomainMeasures m = domain.measures();
    return law_constants(domain.dim()).chord_factor * m.volume / m.surface;
}

int bin_of(double u, int bins) {
    const int b = static_cast<int>(u * bins);
    return std::clamp(b, 0, bins - 1);
}

// -------------------------------------------------------- report plumbing

struct Ctx {
    const ExperimentConfig& cfg;
    fs::path out;
    std::vector<TestResult> tests;
    ojson estimates = ojson::object();
    ojson counters = ojson::object();
};

void put_estimate(Ctx& ctx, const std::string& name, double estimate, double stderr_,
                  long n) {
    ojson e;
    e["estimate"] = estimate;
    e["stderr"] = stderr_;
    e["n"] = n;
    ctx.estimates[name] = e;
}

TestResult named(TestResult r, const std::string& name) {
    r.test = name;
    return r;
}

TestResult z_test(const std::string& name, double estimate, double stderr_,
                  double expected, long n, double alpha) {
    TestResult r;
    r.test = name;
    r.n = n;
    r.alpha = alpha;
    if (stderr_ > 0.0) {
        r.statistic = (estimate - expected) / stderr_;
        r.p_value = 2.0 * (1.0 - stats::normal_cdf(std::abs(r.statistic)));
    } else {
        r.statistic = estimate == expected ? 0.0 : std::numeric_limits<double>::infinity();
        r.p_value = estimate == expected ? 1.0 : 0.0;
    }
    r.pass = r.p_value > alpha;
    return r;
}

// Deterministic threshold check reported through the test interface:
// p_value 1 when the statistic is within the bound, 0 otherwise.
TestResult bound_test(const std::string& name, double value, double bound, long n,
                      double alpha) {
    TestResult r;
    r.test = name;
    r.statistic = value;
    r.p_value = value <= bound ? 1.0 : 0.0;
    r.n = n;
    r.alpha = alpha;
    r.pass = r.p_value > alpha;
    return r;
}

// ------------------------------------------------- position binning (exact)

// Area of {p in polygon : p.x <= c} via the divergence identity
// A = sum_edges (x_mid - c) dy over the clipped edge pieces (the vertical
// cut contributes nothing because the integrand vanishes on x = c).
double polygon_area_below(const Polygon2D& poly, double c) {
    double area = 0.0;
    for (const auto& loop : poly.loops) {
        const size_t m = loop.size();
        for (size_t i = 0; i < m; ++i) {
            const Vec& a = loop[i];
            const Vec& b = loop[(i + 1) % m];
            double t0 = 0.0, t1 = 1.0;
            if (a.x <= c && b.x <= c) {
                // whole edge kept
            } else if (a.x > c && b.x > c) {
                continue;
            } else {
                const double tc = (c - a.x) / (b.x - a.x);
                if (a.x <= c)
                    t1 = tc;
                else
                    t0 = tc;
            }
            const double xm = a.x + 0.5 * (t0 + t1) * (b.x - a.x);
            area += (b.y - a.y) * (t1 - t0) * (xm - c);
        }
    }
    return area;
}

// Same identity one dimension up: V = sum_faces (x_bar - c) n_x A over the
// face pieces clipped to x <= c.
double polyhedron_volume_below(const ConvexPolyhedron3D& body, double c) {
    Vec body_centroid{0, 0, 0};
    long nv = 0;
    for (const auto& face : body.faces)
        for (const auto& v : face) {
            body_centroid = body_centroid + v;
            ++nv;
        }
    body_centroid = body_centroid / static_cast<double>(nv);

    double volume = 0.0;
    for (const auto& face : body.faces) {
        // clip the face loop to the half-space x <= c
        std::vector<Vec> clipped;
        const size_t m = face.size();
        for (size_t i = 0; i < m; ++i) {
            const Vec& a = face[i];
            const Vec& b = face[(i + 1) % m];
            const bool ain = a.x <= c, bin = b.x <= c;
            if (ain) clipped.push_back(a);
            if (ain != bin) {
                const double t = (c - a.x) / (b.x - a.x);
                clipped.push_back(a + (b - a) * t);
            }
        }
        if (clipped.size() < 3) continue;

        Vec area_vec{0, 0, 0};
        Vec weighted{0, 0, 0};
        double area = 0.0;
        for (size_t i = 1; i + 1 < clipped.size(); ++i) {
            const Vec cr = (clipped[i] - clipped[0]).cross(clipped[i + 1] - clipped[0]);
            const double tri = 0.5 * cr.norm();
            area_vec = area_vec + cr;
            area += tri;
            weighted = weighted +
                       (clipped[0] + clipped[i] + clipped[i + 1]) * (tri / 3.0);
        }
        if (area <= 0.0) continue;
        const Vec centroid = weighted / area;
        Vec normal = area_vec.normalized();

        Vec face_centroid{0, 0, 0};
        for (const auto& v : face) face_centroid = face_centroid + v;
        face_centroid = face_centroid / static_cast<double>(face.size());
        if (normal.dot(face_centroid - body_centroid) < 0.0) normal = normal * -1.0;

        volume += (centroid.x - c) * normal.x * area;
    }
    return volume;
}

// Interior coordinate that is exactly uniform under the volume measure,
// plus per-bin expected probabilities. Radially symmetric shapes get a
// quantile coordinate in closed form; polygons and polyhedra use x-strips
// with exact strip measures.
struct PositionBinning {
    std::function<double(const Vec&)> coord;
    std::vector<double> probs;  // per-bin expected probability
    bool uniform = false;       // probs all equal
};

PositionBinning make_position_binning(const Domain& domain, int bins) {
    PositionBinning out;
    out.probs.assign(bins, 1.0 / bins);
    const ShapeSpec& spec = domain.spec();
    if (const auto* s = std::get_if<Disk>(&spec)) {
        const Vec c = s->center;
        const double r2 = s->radius * s->radius;
        out.coord = [c, r2](const Vec& p) { return (p - c).norm2() / r2; };
        out.uniform = true;
        return out;
    }
    if (const auto* s = std::get_if<Annulus>(&spec)) {
        const Vec c = s->center;
        const double ri2 = s->inner_radius * s->inner_radius;
        const double ro2 = s->outer_radius * s->outer_radius;
        out.coord = [c, ri2, ro2](const Vec& p) {
            return ((p - c).norm2() - ri2) / (ro2 - ri2);
        };
        out.uniform = true;
        return out;
    }
    if (const auto* s = std::get_if<Ellipse>(&spec)) {
        const Vec c = s->center;
        const double a = s->semi_x, b = s->semi_y;
        out.coord = [c, a, b](const Vec& p) {
            const double u = (p.x - c.x) / a, v = (p.y - c.y) / b;
            return u * u + v * v;
        };
        out.uniform = true;
        return out;
    }
    if (const auto* s = std::get_if<Sphere>(&spec)) {
        const Vec c = s->center;
        const double r2 = s->radius * s->radius;
        out.coord = [c, r2](const Vec& p) {
            const double q = (p - c).norm2() / r2;
            return q * std::sqrt(q);
        };
        out.uniform = true;
        return out;
    }

    const auto [lo, hi] = domain.bounding_box();
    const double x0 = lo.x, width = hi.x - lo.x;
    out.coord = [x0, width](const Vec& p) { return (p.x - x0) / width; };
    std::vector<double> below(bins + 1);
    for (int k = 0; k <= bins; ++k) {
        const double c = x0 + width * k / bins;
        if (const auto* s = std::get_if<Polygon2D>(&spec))
            below[k] = polygon_area_below(*s, c);
        else
            below[k] = polyhedron_volume_below(std::get<ConvexPolyhedron3D>(spec), c);
    }
    double total = 0.0;
    for (int k = 0; k < bins; ++k) {
        out.probs[k] = below[k + 1] - below[k];
        total += out.probs[k];
    }
    for (int k = 0; k < bins; ++k) out.probs[k] /= total;
    return out;
}

double velocity_coordinate(const Vec& v, int dim) {
    if (dim == 2) return (std::atan2(v.y, v.x) + std::numbers::pi) / (2.0 * std::numbers::pi);
    return (v.z + 1.0) / 2.0;
}

bool subdomain_is_convex(const Domain& sub) {
    const ShapeSpec& spec = sub.spec();
    if (std::holds_alternative<Disk>(spec) || std::holds_alternative<Ellipse>(spec) ||
        std::holds_alternative<Sphere>(spec) ||
        std::holds_alternative<ConvexPolyhedron3D>(spec))
        return true;
    if (const auto* s = std::get_if<Polygon2D>(&spec)) {
        if (s->loops.size() != 1) return false;
        const auto& loop = s->loops[0];
        const size_t m = loop.size();
        for (size_t i = 0; i < m; ++i) {
            const Vec e1 = loop[(i + 1) % m] - loop[i];
            const Vec e2 = loop[(i + 2) % m] - loop[(i + 1) % m];
            if (e1.x * e2.y - e1.y * e2.x < 0.0) return false;
        }
        return true;
    }
    return false;
}

InternalSurface surface_from_json(const json& j, int dim) {
    if (!j.is_object()) fail("surface", "expected an object");
    reject_unknown_keys(j, {"segments", "triangles"}, "surface");
    InternalSurface s;
    if (dim == 2) {
        const json& segs = need(j, "segments", "surface");
        if (!segs.is_array() || segs.empty())
            fail("surface.segments", "expected a non-empty array");
        for (size_t i = 0; i < segs.size(); ++i) {
            const std::string where = "surface.segments[" + std::to_string(i) + "]";
            if (!segs[i].is_array() || segs[i].size() != 2)
                fail(where, "expected [a, b] endpoints");
            s.segments.push_back({vec_from_json(segs[i][0], 2, where),
                                  vec_from_json(segs[i][1], 2, where)});
        }
    } else {
        const json& tris = need(j, "triangles", "surface");
        if (!tris.is_array() || tris.empty())
            fail("surface.triangles", "expected a non-empty array");
        for (size_t i = 0; i < tris.size(); ++i) {
            const std::string where = "surface.triangles[" + std::to_string(i) + "]";
            if (!tris[i].is_array() || tris[i].size() != 3)
                fail(where, "expected [a, b, c] corners");
            s.triangles.push_back({vec_from_json(tris[i][0], 3, where),
                                   vec_from_json(tris[i][1], 3, where),
                                   vec_from_json(tris[i][2], 3, where)});
        }
    }
    return s;
}

double surface_measure(const InternalSurface& s) {
    double total = 0.0;
    for (const auto& seg : s.segments) total += (seg[1] - seg[0]).norm();
    for (const auto& tri : s.triangles)
        total += 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
    return total;
}

// ------------------------------------------------------------- experiments

void run_walk_stationarity(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int bins = cfg.params.at("bins").get<int>();
    const long burn = cfg.params.at("burn_in").get<long>();
    const int R = cfg.replicas;
    const int dim = cfg.domain.dim();

    std::vector<std::vector<double>> hist(R, std::vector<double>(bins, 0.0));
    std::vector<long> resamples(R, 0);
    Csv csv(ctx.out / "walk.csv",
            dim == 2 ? "step_index,component_id,patch_coord,x,y,tau"
                     : "step_index,component_id,patch_coord,x,y,z,tau",
            cfg.max_csv_rows);

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < R; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        const BoundaryPoint start = cfg.domain.sample_boundary_uniform(rng);
        resamples[r] = run_visit(
            cfg.domain, cfg.law, start, cfg.n, rng, [&](const WalkState& s) {
                if (r == 0 && !csv.full()) {
                    csv.line(std::to_string(s.step_index) + "," +
                             std::to_string(s.position.component_id) + "," +
                             fmt(s.position.patch_coord) + "," +
                             point_cols(s.position.position, dim) + "," +
                             fmt(s.local_time));
                }
                if (s.step_index > burn) {
                    const double u = cfg.domain.boundary_coord(s.position);
                    hist[r][bin_of(u, bins)] += 1.0;
                }
            });
    }

    const double alpha = cfg.alpha / (R + 1);
    std::vector<double> pooled(bins, 0.0);
    long total_resamples = 0;
    for (int r = 0; r < R; ++r) {
        for (int b = 0; b < bins; ++b) pooled[b] += hist[r][b];
        ctx.tests.push_back(named(stats::chi_square_uniform(hist[r], alpha),
                                  "boundary_uniformity_replica_" + std::to_string(r)));
        total_resamples += resamples[r];
    }
    ctx.tests.push_back(
        named(stats::chi_square_uniform(pooled, alpha), "boundary_uniformity_pooled"));

    const long steps_total = cfg.n * R;
    put_estimate(ctx, "resample_rate",
                 static_cast<double>(total_resamples) / static_cast<double>(steps_total),
                 0.0, steps_total);
    ctx.counters["resamples"] = total_resamples;
    ctx.counters["steps"] = steps_total;
}

void run_billiard_stationarity(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int pb = cfg.params.at("position_bins").get<int>();
    const int vb = cfg.params.at("velocity_bins").get<int>();
    double spacing = cfg.params.at("spacing").get<double>();
    if (spacing <= 0.0) spacing = 2.0 * expected_mean_chord(cfg.domain);
    const int R = cfg.replicas;
    const int dim = cfg.domain.dim();
    const PositionBinning pos = make_position_binning(cfg.domain, pb);
    const std::vector<long> quota = chunk_sizes(cfg.n, R);

    std::vector<std::vector<std::vector<double>>> tables(
        R, std::vector<std::vector<double>>(pb, std::vector<double>(vb, 0.0)));
    std::vector<long> resamples(R, 0);
    Csv csv(ctx.out / "flights.csv",
            dim == 2 ? "n,tau,x,y,vx,vy" : "n,tau,x,y,z,vx,vy,vz", cfg.max_csv_rows);

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < R; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        const double total_time = spacing * static_cast<double>(quota[r] + 1);
        const BilliardPath path =
            make_path_stationary(cfg.domain, cfg.law, total_time, rng);
        resamples[r] = path.resample_count;
        if (r == 0) {
            for (size_t i = 0; i + 1 < path.nodes.size() && !csv.full(); ++i) {
                const double dt = path.times[i + 1] - path.times[i];
                if (dt <= 0.0) continue;
                const Vec v = (path.nodes[i + 1] - path.nodes[i]) / dt;
                csv.line(std::to_string(i) + "," + fmt(path.times[i]) + "," +
                         point_cols(path.nodes[i], dim) + "," + point_cols(v, dim));
            }
        }
        for (long k = 1; k <= quota[r]; ++k) {
            const PathState st = state_at(path, spacing * static_cast<double>(k));
            const int i1 = bin_of(pos.coord(st.position), pb);
            const int i2 = bin_of(velocity_coordinate(st.velocity, dim), vb);
            tables[r][i1][i2] += 1.0;
        }
    }

    std::vector<std::vector<double>> table(pb, std::vector<double>(vb, 0.0));
    std::vector<double> pos_marginal(pb, 0.0), vel_marginal(vb, 0.0);
    long resample_total = 0;
    for (int r = 0; r < R; ++r) {
        resample_total += resamples[r];
        for (int i = 0; i < pb; ++i)
            for (int j = 0; j < vb; ++j) {
                table[i][j] += tables[r][i][j];
                pos_marginal[i] += tables[r][i][j];
                vel_marginal[j] += tables[r][i][j];
            }
    }

    const double alpha = cfg.alpha / 3.0;
    ctx.tests.push_back(named(stats::chi_square_independence(table, alpha),
                              "position_velocity_independence"));
    if (pos.uniform)
        ctx.tests.push_back(named(stats::chi_square_uniform(pos_marginal, alpha),
                                  "position_marginal_uniform"));
    else
        ctx.tests.push_back(named(stats::chi_square_vs(pos_marginal, pos.probs, alpha),
                                  "position_marginal_matches_measure"));
    ctx.tests.push_back(named(stats::chi_square_uniform(vel_marginal, alpha),
                              "velocity_marginal_uniform"));

    put_estimate(ctx, "sample_spacing", spacing, 0.0, cfg.n);
    ctx.counters["resamples"] = resample_total;
    ctx.counters["samples"] = cfg.n;
}

void run_mean_chord(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int R = cfg.replicas;
    const int dim = cfg.domain.dim();
    const std::vector<long> quota = chunk_sizes(cfg.n, R);

    std::vector<double> sums(R, 0.0), sq_sums(R, 0.0);
    Csv csv(ctx.out / "chords.csv",
            dim == 2 ? "ax,ay,bx,by,length" : "ax,ay,az,bx,by,bz,length",
            cfg.max_csv_rows);

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < R; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        double s = 0.0, s2 = 0.0;
        for (long k = 0; k < quota[r]; ++k) {
            const Chord c = sample_chord(cfg.domain, cfg.law, rng);
            s += c.length;
            s2 += c.length * c.length;
            if (r == 0 && !csv.full()) {
                csv.line(point_cols(c.a.position, dim) + "," +
                         point_cols(c.b.position, dim) + "," + fmt(c.length));
            }
        }
        sums[r] = s;
        sq_sums[r] = s2;
    }

    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    const double total_sq = std::accumulate(sq_sums.begin(), sq_sums.end(), 0.0);
    const double mean = total / static_cast<double>(cfg.n);
    const double var =
        (total_sq - total * mean) / static_cast<double>(cfg.n - 1);
    const double se = std::sqrt(var / static_cast<double>(cfg.n));

    const double kappa = law_constants(dim).chord_factor;
    const DomainMeasures m = cfg.domain.measures();
    put_estimate(ctx, "mean_chord", mean, se, cfg.n);
    put_estimate(ctx, "volume_to_surface", mean / kappa, se / kappa, cfg.n);
    put_estimate(ctx, "exact_volume_to_surface", m.volume / m.surface, 0.0, 0);
    if (cfg.law.kind() == LawKind::cosine) {
        ctx.tests.push_back(z_test("mean_chord_matches_geometry", mean, se,
                                   expected_mean_chord(cfg.domain), cfg.n, cfg.alpha));
    }
}

void run_bertrand(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int R = cfg.replicas;
    const double radius = std::get<Disk>(cfg.domain.spec()).radius;
    const double cutoff = std::sqrt(3.0) * radius;
    const long ks_cap = cfg.params.at("ks_samples").get<long>();
    const std::vector<long> quota = chunk_sizes(cfg.n, R);
    const long keep_per_replica = ks_cap / R + 1;

    struct Slot {
        std::array<long, 3> above{};
        std::vector<double> method2, sampler;
        std::vector<std::pair<int, double>> rows;
    };
    std::vector<Slot> slots(R);

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < R; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        Slot& slot = slots[r];
        const long keep = std::min(quota[r], keep_per_replica);
        slot.method2.reserve(keep);
        slot.sampler.reserve(keep);
        for (long k = 0; k < quota[r]; ++k) {
            for (int method = 1; method <= 3; ++method) {
                const double len = bertrand_length_sample(method, radius, rng);
                if (len > cutoff) ++slot.above[method - 1];
                if (method == 2 && static_cast<long>(slot.method2.size()) < keep)
                    slot.method2.push_back(len);
                if (r == 0 && static_cast<long>(slot.rows.size()) < cfg.max_csv_rows)
                    slot.rows.emplace_back(method, len);
            }
            if (static_cast<long>(slot.sampler.size()) < keep)
                slot.sampler.push_back(sample_chord(cfg.domain, cfg.law, rng).length);
        }
    }

    Csv csv(ctx.out / "bertrand.csv", "method,length", cfg.max_csv_rows);
    for (const auto& [method, len] : slots[0].rows)
        csv.line(std::to_string(method) + "," + fmt(len));

    std::vector<double> method2, sampler;
    std::array<long, 3> above{};
    for (int r = 0; r < R; ++r) {
        for (int m = 0; m < 3; ++m) above[m] += slots[r].above[m];
        method2.insert(method2.end(), slots[r].method2.begin(), slots[r].method2.end());
        sampler.insert(sampler.end(), slots[r].sampler.begin(), slots[r].sampler.end());
    }

    const double alpha = cfg.alpha / 5.0;
    for (int m = 0; m < 3; ++m) {
        const double exact = bertrand_exact(m + 1);
        const double est = static_cast<double>(above[m]) / static_cast<double>(cfg.n);
        const double se0 = std::sqrt(exact * (1.0 - exact) / static_cast<double>(cfg.n));
        put_estimate(ctx, "p_long_chord_method" + std::to_string(m + 1), est,
                     std::sqrt(est * (1.0 - est) / static_cast<double>(cfg.n)), cfg.n);
        ctx.tests.push_back(z_test("bertrand_method" + std::to_string(m + 1), est, se0,
                                   exact, cfg.n, alpha));
    }
    ctx.tests.push_back(named(
        stats::ks_test(
            method2,
            [radius](double x) { return radius_method_length_cdf(x, radius); }, alpha),
        "method2_length_cdf"));
    ctx.tests.push_back(named(stats::ks_two_sample(method2, sampler, alpha),
                              "method2_matches_chord_sampler"));
}

void run_induced_chords(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int R = cfg.replicas;
    const int dim = cfg.domain.dim();
    const Domain sub = domain_from_json(cfg.params.at("subdomain"));
    const long piece_cap = cfg.params.at("max_piece_samples").get<long>();
    const std::vector<long> quota = chunk_sizes(cfg.n, R);

    std::vector<InducedChordStats> slots(R);
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < R; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        slots[r] = induced_chord_statistics(cfg.domain, cfg.law, sub, quota[r], rng,
                                            piece_cap / R + 1);
    }

    double hits = 0.0, count_sum = 0.0, count_sq = 0.0;
    std::vector<double> pieces;
    for (int r = 0; r < R; ++r) {
        const auto& s = slots[r];
        const double nr = static_cast<double>(s.n);
        hits += s.hit_probability.value * nr;
        const double var_r =
            s.mean_piece_count.std_error * s.mean_piece_count.std_error * nr;
        count_sum += s.mean_piece_count.value * nr;
        count_sq += nr * (var_r + s.mean_piece_count.value * s.mean_piece_count.value);
        if (static_cast<long>(pieces.size()) < piece_cap)
            pieces.insert(pieces.end(), s.piece_lengths.begin(), s.piece_lengths.end());
    }
    if (static_cast<long>(pieces.size()) > piece_cap) pieces.resize(piece_cap);

    const double N = static_cast<double>(cfg.n);
    const double p_hit = hits / N;
    const double p_se = std::sqrt(p_hit * (1.0 - p_hit) / N);
    const double count_mean = count_sum / N;
    const double count_var = std::max(0.0, count_sq / N - count_mean * count_mean);
    const double count_se = std::sqrt(count_var / N);
    const double ratio = sub.boundary_measure() / cfg.domain.boundary_measure();
    const bool convex = subdomain_is_convex(sub);

    Csv csv(ctx.out / "pieces.csv",
            dim == 2 ? "ax,ay,bx,by,length" : "ax,ay,az,bx,by,bz,length",
            cfg.max_csv_rows);
    {
        // re-derive replica-0 pieces for the dump (cheap relative to the run)
        Rng rng(cfg.seed, 0);
        long written = 0;
        for (long k = 0; k < quota[0] && written < cfg.max_csv_rows; ++k) {
            const Chord c = sample_chord(cfg.domain, cfg.law, rng);
            const InducedChordSet set = induced_chords(c, sub);
            for (const auto& piece : set.pieces) {
                if (written >= cfg.max_csv_rows) break;
                csv.line(point_cols(piece.a.position, dim) + "," +
                         point_cols(piece.b.position, dim) + "," + fmt(piece.length));
                ++written;
            }
        }
    }

    put_estimate(ctx, "hit_probability", p_hit, p_se, cfg.n);
    put_estimate(ctx, "mean_piece_count", count_mean, count_se, cfg.n);
    put_estimate(ctx, "boundary_measure_ratio", ratio, 0.0, 0);

    int k_tests = convex ? 3 : 1;
    const double alpha = cfg.alpha / k_tests;
    ctx.tests.push_back(z_test("mean_piece_count_matches_boundary_ratio", count_mean,
                               count_se, ratio, cfg.n, alpha));
    if (convex) {
        const double se0 = std::sqrt(ratio * (1.0 - ratio) / N);
        ctx.tests.push_back(z_test("hit_probability_matches_boundary_ratio", p_hit, se0,
                                   ratio, cfg.n, alpha));
        // direct chords of the subdomain for the distributional comparison
        std::vector<double> direct;
        direct.reserve(pieces.size());
        Rng rng(cfg.seed, 7777);
        const ReflectionLaw sub_law = ReflectionLaw::cosine(dim);
        for (size_t k = 0; k < pieces.size(); ++k)
            direct.push_back(sample_chord(sub, sub_law, rng).length);
        ctx.tests.push_back(named(stats::ks_two_sample(pieces, direct, alpha),
                                  "piece_lengths_match_subdomain_chords"));
    }
    ctx.counters["pieces_kept"] = static_cast<long>(pieces.size());
}

void run_crossings(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int R = cfg.replicas;
    const int dim = cfg.domain.dim();
    const InternalSurface surface = surface_from_json(cfg.params.at("surface"), dim);
    validate_internal_surface(surface, cfg.domain);
    const double mbar = expected_mean_chord(cfg.domain);
    const double total_time = mbar * static_cast<double>(cfg.n);

    struct Slot {
        std::vector<double> angles;
        std::vector<std::pair<double, Vec>> events;  // replica 0 only
        long tangential = 0;
        long crossings = 0;
        long resamples = 0;
    };
    std::vector<Slot> slots(R);

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < R; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        const BilliardPath path =
            make_path_stationary(cfg.domain, cfg.law, total_time, rng);
        const CrossingScan scan = detect_crossings(path, surface, dim);
        Slot& slot = slots[r];
        slot.tangential = scan.tangential_excluded;
        slot.crossings = static_cast<long>(scan.events.size());
        slot.resamples = path.resample_count;
        slot.angles.reserve(scan.events.size());
        for (const auto& e : scan.events) {
            slot.angles.push_back(e.polar_angle);
            if (r == 0 && static_cast<long>(slot.events.size()) < cfg.max_csv_rows)
                slot.events.emplace_back(e.time, e.point);
        }
    }

    Csv csv(ctx.out / "crossings.csv", dim == 2 ? "time,x,y,angle" : "time,x,y,z,angle",
            cfg.max_csv_rows);
    for (size_t k = 0; k < slots[0].events.size(); ++k) {
        csv.line(fmt(slots[0].events[k].first) + "," +
                 point_cols(slots[0].events[k].second, dim) + "," +
                 fmt(slots[0].angles[k]));
    }

    std::vector<double> angles;
    long tangential = 0, crossings = 0, resamples = 0;
    std::vector<double> rates(R, 0.0);
    for (int r = 0; r < R; ++r) {
        angles.insert(angles.end(), slots[r].angles.begin(), slots[r].angles.end());
        tangential += slots[r].tangential;
        crossings += slots[r].crossings;
        resamples += slots[r].resamples;
        rates[r] = static_cast<double>(slots[r].crossings) / total_time;
    }

    const double expected_rate = 2.0 * surface_measure(surface) /
                                 (law_constants(dim).chord_factor *
                                  cfg.domain.measures().volume);
    const double rate =
        static_cast<double>(crossings) / (total_time * static_cast<double>(R));

    const bool cosine = cfg.law.kind() == LawKind::cosine;
    const bool rate_test = cosine && R >= 8;
    const double alpha = cfg.alpha / ((cosine ? 1 : 0) + (rate_test ? 1 : 0) + 1e-12);
    if (cosine) {
        const ReflectionLaw& law = cfg.law;
        ctx.tests.push_back(named(
            stats::ks_test(
                angles, [&law](double a) { return law.angle_cdf(a); }, alpha),
            "crossing_angle_law"));
    }
    if (rate_test) {
        double m = 0.0, v = 0.0;
        for (double x : rates) m += x;
        m /= R;
        for (double x : rates) v += (x - m) * (x - m);
        v /= (R - 1);
        ctx.tests.push_back(z_test("crossing_rate_matches_flux", m,
                                   std::sqrt(v / R), expected_rate, crossings, alpha));
    }

    put_estimate(ctx, "crossing_rate", rate, 0.0, crossings);
    put_estimate(ctx, "expected_crossing_rate", expected_rate, 0.0, 0);
    ctx.counters["crossings"] = crossings;
    ctx.counters["tangential_excluded"] = tangential;
    ctx.counters["resamples"] = resamples;
}

void run_kernel_solve(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int panels = cfg.params.at("panels").get<int>();
    const double row_tol = cfg.params.at("row_sum_tolerance").get<double>();
    const double power_tol = cfg.params.at("power_tol").get<double>();
    const int doblin_n0 = cfg.params.at("doblin_n0").get<int>();
    const long walk_n = cfg.params.at("walk_check_n").get<long>();
    const int bins = cfg.params.at("bins").get<int>();
    const int dim = cfg.domain.dim();

    const kernel::PanelMesh mesh = kernel::build_mesh(cfg.domain, panels);
    const kernel::KernelSystem sys = kernel::assemble(cfg.domain, cfg.law, mesh, row_tol);
    const kernel::InvariantDensity inv = kernel::invariant_density(sys, power_tol);
    const double doblin = kernel::doblin_check(sys, doblin_n0);
    const double lambda2 = kernel::subdominant_eigenvalue(
        sys, cfg.params.at("subdominant_iterations").get<int>());

    double row_dev = 0.0;
    int row_count = 0;
    for (int i = 0; i < sys.size; ++i) {
        if (mesh.panels[i].corner_adjacent) continue;
        row_dev += std::abs(sys.raw_row_sums[i] - 1.0);
        ++row_count;
    }
    row_dev /= std::max(row_count, 1);

    {
        Csv csv(ctx.out / "psi.csv",
                dim == 2 ? "panel,x,y,coord,measure,psi,corner_adjacent"
                         : "panel,x,y,z,coord,measure,psi,corner_adjacent",
                cfg.max_csv_rows);
        for (int i = 0; i < sys.size; ++i) {
            const auto& p = mesh.panels[i];
            csv.line(std::to_string(i) + "," + point_cols(p.midpoint.position, dim) +
                     "," + fmt(cfg.domain.boundary_coord(p.midpoint)) + "," +
                     fmt(p.measure) + "," + fmt(inv.psi[i]) + "," +
                     (p.corner_adjacent ? "1" : "0"));
        }
    }
    if (cfg.params.at("dump_matrix").get<bool>()) {
        Csv csv(ctx.out / "matrix.csv", "row,entries", cfg.max_csv_rows);
        for (int i = 0; i < sys.size; ++i) {
            std::string row = std::to_string(i);
            for (int j = 0; j < sys.size; ++j)
                row += "," + fmt(sys.transition[static_cast<size_t>(i) * sys.size + j]);
            csv.line(row);
        }
    }

    std::vector<TestResult> checks;
    checks.push_back(bound_test("balance_residual", inv.residual,
                                cfg.params.at("residual_tolerance").get<double>(),
                                sys.size, cfg.alpha));
    if (cfg.law.kind() == LawKind::cosine) {
        const double uniform_value = 1.0 / cfg.domain.boundary_measure();
        double dev = 0.0;
        for (int i = 0; i < sys.size; ++i) {
            if (mesh.panels[i].corner_adjacent) continue;
            dev = std::max(dev, std::abs(inv.psi[i] / uniform_value - 1.0));
        }
        checks.push_back(bound_test("psi_uniform_relative_deviation", dev,
                                    cfg.params.at("psi_tolerance").get<double>(),
                                    sys.size, cfg.alpha));
        put_estimate(ctx, "psi_max_relative_deviation", dev, 0.0, sys.size);
    }
    {
        TestResult r;
        r.test = "doblin_minimum_positive";
        r.statistic = doblin;
        r.p_value = doblin > 0.0 ? 1.0 : 0.0;
        r.n = sys.size;
        r.alpha = cfg.alpha;
        r.pass = r.p_value > cfg.alpha;
        checks.push_back(r);
    }
    checks.push_back(bound_test("subdominant_eigenvalue_below_one", lambda2,
                                1.0 - 1e-9, sys.size, cfg.alpha));

    if (walk_n > 0) {
        const long burn = cfg.params.at("walk_burn_in").get<long>();
        Rng rng(cfg.seed, 0);
        const BoundaryPoint start = cfg.domain.sample_boundary_uniform(rng);
        std::vector<double> walk_hist(bins, 0.0);
        run_visit(cfg.domain, cfg.law, start, walk_n, rng, [&](const WalkState& s) {
            if (s.step_index > burn)
                walk_hist[bin_of(cfg.domain.boundary_coord(s.position), bins)] += 1.0;
        });
        std::vector<double> kernel_hist(bins, 0.0);
        for (int i = 0; i < sys.size; ++i) {
            const double u = cfg.domain.boundary_coord(mesh.panels[i].midpoint);
            kernel_hist[bin_of(u, bins)] += inv.psi[i] * mesh.panels[i].measure;
        }
        const double tv = stats::tv_distance(walk_hist, kernel_hist);
        checks.push_back(bound_test("kernel_walk_tv", tv,
                                    cfg.params.at("tv_tolerance").get<double>(),
                                    walk_n - burn, cfg.alpha));
        put_estimate(ctx, "kernel_walk_tv", tv, 0.0, walk_n - burn);
    }

    for (auto& c : checks) ctx.tests.push_back(c);
    put_estimate(ctx, "balance_residual", inv.residual, 0.0, sys.size);
    put_estimate(ctx, "doblin_minimum", doblin, 0.0, sys.size);
    put_estimate(ctx, "subdominant_eigenvalue", lambda2, 0.0, sys.size);
    put_estimate(ctx, "row_sum_mean_abs_deviation", row_dev, 0.0, row_count);
    ctx.counters["power_iterations"] = inv.iterations;
    ctx.counters["panels"] = sys.size;
}

void run_clt(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int batches = cfg.params.at("batches").get<int>();
    const long burn = cfg.params.at("burn_in").get<long>();
    const double lo = cfg.params.at("coord_lo").get<double>();
    const double hi = cfg.params.at("coord_hi").get<double>();
    const int R = cfg.replicas;

    const long batch_len = cfg.n / batches;
    const long kept = batch_len * batches;

    std::vector<std::vector<double>> series(R);
    std::vector<long> resamples(R, 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < R; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        const BoundaryPoint start = cfg.domain.sample_boundary_uniform(rng);
        std::vector<double>& s = series[r];
        s.reserve(kept);
        resamples[r] = run_visit(
            cfg.domain, cfg.law, start, burn + kept, rng, [&](const WalkState& st) {
                if (st.step_index > burn && static_cast<long>(s.size()) < kept) {
                    const double u = cfg.domain.boundary_coord(st.position);
                    s.push_back(u >= lo && u < hi ? 1.0 : 0.0);
                }
            });
    }

    std::vector<double> all;
    all.reserve(static_cast<size_t>(kept) * R);
    for (int r = 0; r < R; ++r)
        all.insert(all.end(), series[r].begin(), series[r].end());

    const double alpha = cfg.alpha / 3.0;
    const stats::BatchMeans bm = stats::batch_means(all, batches * R, alpha);

    {
        Csv csv(ctx.out / "batch_means.csv", "batch,mean", cfg.max_csv_rows);
        for (int b = 0; b < bm.n_batches; ++b) {
            double m = 0.0;
            for (long k = 0; k < bm.batch_length; ++k)
                m += all[static_cast<size_t>(b) * bm.batch_length + k];
            csv.line(std::to_string(b) + "," + fmt(m / bm.batch_length));
        }
    }

    ctx.tests.push_back(named(bm.normality, "clt_batch_normality"));
    {
        TestResult r;
        r.test = "asymptotic_variance_positive";
        r.statistic = bm.asymptotic_variance;
        r.p_value = bm.asymptotic_variance > 0.0 ? 1.0 : 0.0;
        r.n = bm.n_batches;
        r.alpha = alpha;
        r.pass = r.p_value > alpha;
        ctx.tests.push_back(r);
    }
    ctx.tests.push_back(z_test("occupation_matches_measure", bm.mean,
                               bm.batch_sd / std::sqrt(double(bm.n_batches)), hi - lo,
                               kept * R, alpha));

    put_estimate(ctx, "occupation_mean", bm.mean,
                 bm.batch_sd / std::sqrt(double(bm.n_batches)), kept * R);
    put_estimate(ctx, "expected_fraction", hi - lo, 0.0, 0);
    put_estimate(ctx, "asymptotic_variance", bm.asymptotic_variance, 0.0,
                 bm.n_batches);
    ctx.counters["resamples"] = std::accumulate(resamples.begin(), resamples.end(), 0L);
    ctx.counters["batches"] = bm.n_batches;
}

void run_ergodicity_decay(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int panels = cfg.params.at("panels").get<int>();
    const int bins = cfg.params.at("bins").get<int>();
    const std::vector<int> steps = cfg.params.at("steps").get<std::vector<int>>();
    const double row_tol = cfg.params.at("row_sum_tolerance").get<double>();
    const double power_tol = cfg.params.at("power_tol").get<double>();

    const kernel::PanelMesh mesh = kernel::build_mesh(cfg.domain, panels);
    const kernel::KernelSystem sys = kernel::assemble(cfg.domain, cfg.law, mesh, row_tol);
    const kernel::InvariantDensity inv = kernel::invariant_density(sys, power_tol);

    int start = cfg.params.at("start_panel").get<int>();
    if (start < 0) {
        start = 0;
        for (int i = 0; i < sys.size; ++i)
            if (mesh.panels[i].corner_adjacent) {
                start = i;
                break;
            }
    }
    if (start >= sys.size) fail("params.start_panel", "index out of range");

    const auto bin_panel_masses = [&](const std::vector<double>& mass) {
        std::vector<double> h(bins, 0.0);
        for (int i = 0; i < sys.size; ++i) {
            const double u = cfg.domain.boundary_coord(mesh.panels[i].midpoint);
            h[bin_of(u, bins)] += mass[i];
        }
        return h;
    };
    std::vector<double> uniform_mass(sys.size), invariant_mass(sys.size);
    double total_measure = 0.0;
    for (const auto& p : mesh.panels) total_measure += p.measure;
    for (int i = 0; i < sys.size; ++i) {
        uniform_mass[i] = mesh.panels[i].measure / total_measure;
        invariant_mass[i] = inv.psi[i] * mesh.panels[i].measure;
    }
    const std::vector<double> uniform_bins = bin_panel_masses(uniform_mass);
    const std::vector<double> invariant_bins = bin_panel_masses(invariant_mass);

    std::vector<double> mass(sys.size, 0.0);
    mass[start] = 1.0;
    int done = 0;
    std::vector<double> tv_uniform, tv_invariant, ns;
    for (int target : steps) {
        mass = kernel::propagate(sys, std::move(mass), target - done);
        done = target;
        const std::vector<double> h = bin_panel_masses(mass);
        tv_uniform.push_back(stats::tv_distance(h, uniform_bins));
        tv_invariant.push_back(stats::tv_distance(h, invariant_bins));
        ns.push_back(static_cast<double>(target));
    }

    {
        Csv csv(ctx.out / "decay.csv", "steps,tv_uniform,tv_invariant",
                cfg.max_csv_rows);
        for (size_t k = 0; k < ns.size(); ++k)
            csv.line(std::to_string(steps[k]) + "," + fmt(tv_uniform[k]) + "," +
                     fmt(tv_invariant[k]));
    }

    double worst_ratio = 0.0;
    bool decreasing = true;
    for (size_t k = 1; k < tv_uniform.size(); ++k) {
        if (tv_uniform[k] >= tv_uniform[k - 1]) decreasing = false;
        if (tv_uniform[k - 1] > 0.0)
            worst_ratio = std::max(worst_ratio, tv_uniform[k] / tv_uniform[k - 1]);
    }
    std::vector<double> log_tv;
    for (double tv : tv_uniform) log_tv.push_back(std::log(std::max(tv, 1e-300)));
    const double slope = stats::linear_slope(ns, log_tv);

    const double alpha = cfg.alpha / 2.0;
    {
        TestResult r;
        r.test = "tv_strictly_decreasing";
        r.statistic = worst_ratio;
        r.p_value = decreasing ? 1.0 : 0.0;
        r.n = static_cast<long>(steps.size());
        r.alpha = alpha;
        r.pass = r.p_value > alpha;
        ctx.tests.push_back(r);
    }
    {
        TestResult r;
        r.test = "log_tv_slope_negative";
        r.statistic = slope;
        r.p_value = slope < 0.0 ? 1.0 : 0.0;
        r.n = static_cast<long>(steps.size());
        r.alpha = alpha;
        r.pass = r.p_value > alpha;
        ctx.tests.push_back(r);
    }

    put_estimate(ctx, "log_tv_slope", slope, 0.0, static_cast<long>(steps.size()));
    put_estimate(ctx, "final_tv_to_uniform", tv_uniform.back(), 0.0,
                 static_cast<long>(steps.size()));
    ctx.counters["start_panel"] = start;
    ctx.counters["panels"] = sys.size;
}

void run_reversal(Ctx& ctx) {
    const auto& cfg = ctx.cfg;
    const int bins = cfg.params.at("bins").get<int>();
    const long burn = cfg.params.at("burn_in").get<long>();
    const int vbins = cfg.params.at("velocity_bins").get<int>();
    const long vsamples = cfg.params.at("velocity_samples").get<long>();
    double spacing = cfg.params.at("spacing").get<double>();
    if (spacing <= 0.0) spacing = 2.0 * expected_mean_chord(cfg.domain);
    const int R = cfg.replicas;
    const int dim = cfg.domain.dim();

    std::vector<std::vector<std::vector<double>>> trans(
        R, std::vector<std::vector<double>>(bins, std::vector<double>(bins, 0.0)));
    std::vector<std::vector<double>> vel(R, std::vector<double>(vbins, 0.0));
    const std::vector<long> vel_quota = chunk_sizes(vsamples, R);

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < R; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        const BoundaryPoint start = cfg.domain.sample_boundary_uniform(rng);
        int prev = -1;
        run_visit(cfg.domain, cfg.law, start, cfg.n, rng, [&](const WalkState& s) {
            const int b = bin_of(cfg.domain.boundary_coord(s.position), bins);
            if (s.step_index > burn && prev >= 0) trans[r][prev][b] += 1.0;
            prev = b;
        });
        const double total_time = spacing * static_cast<double>(vel_quota[r] + 1);
        const BilliardPath path =
            make_path_stationary(cfg.domain, cfg.law, total_time, rng);
        for (long k = 1; k <= vel_quota[r]; ++k) {
            const PathState st = state_at(path, spacing * static_cast<double>(k));
            vel[r][bin_of(velocity_coordinate(st.velocity, dim), vbins)] += 1.0;
        }
    }

    std::vector<std::vector<double>> pair_counts(bins, std::vector<double>(bins, 0.0));
    std::vector<double> vel_counts(vbins, 0.0);
    for (int r = 0; r < R; ++r) {
        for (int i = 0; i < bins; ++i)
            for (int j = 0; j < bins; ++j) pair_counts[i][j] += trans[r][i][j];
        for (int j = 0; j < vbins; ++j) vel_counts[j] += vel[r][j];
    }

    {
        Csv csv(ctx.out / "transitions.csv", "from,to,count", cfg.max_csv_rows);
        for (int i = 0; i < bins; ++i)
            for (int j = 0; j < bins; ++j)
                csv.line(std::to_string(i) + "," + std::to_string(j) + "," +
                         fmt(pair_counts[i][j]));
    }

    const double alpha = cfg.alpha / 2.0;
    ctx.tests.push_back(
        named(stats::chi_square_symmetry(pair_counts, alpha), "pair_swap_symmetry"));

    // antipodal velocity pairing: v and -v land in opposite cells
    double statistic = 0.0;
    int dof = 0;
    long vn = 0;
    for (int b = 0; b < vbins / 2; ++b) {
        const int m = dim == 2 ? (b + vbins / 2) % vbins : vbins - 1 - b;
        const double a = vel_counts[b], c = vel_counts[m];
        vn += static_cast<long>(a + c);
        if (a + c > 0.0) {
            statistic += (a - c) * (a - c) / (a + c);
            ++dof;
        }
    }
    {
        TestResult r;
        r.test = "velocity_sign_symmetry";
        r.statistic = statistic;
        r.p_value = dof > 0 ? stats::chi_square_sf(statistic, dof) : 1.0;
        r.n = vn;
        r.alpha = alpha;
        r.pass = r.p_value > alpha;
        ctx.tests.push_back(r);
    }
    ctx.counters["transitions"] = (cfg.n - burn) * R;
    ctx.counters["velocity_samples"] = vsamples;
}

// ------------------------------------------------------------- validation

long int_param(const json& src, json& dst, const std::string& key, long def,
               long min_value, const std::string& where) {
    long v = def;
    if (src.contains(key)) {
        if (!src.at(key).is_number_integer()) fail(where + "." + key, "expected an integer");
        v = src.at(key).get<long>();
    }
    if (v < min_value)
        fail(where + "." + key, "must be at least " + std::to_string(min_value));
    dst[key] = v;
    return v;
}

double num_param(const json& src, json& dst, const std::string& key, double def,
                 double min_value, const std::string& where) {
    double v = def;
    if (src.contains(key)) {
        if (!src.at(key).is_number()) fail(where + "." + key, "expected a number");
        v = src.at(key).get<double>();
    }
    if (v < min_value) fail(where + "." + key, "must be at least " + fmt(min_value));
    dst[key] = v;
    return v;
}

void require_cosine(const ReflectionLaw& law, const std::string& experiment) {
    if (law.kind() != LawKind::cosine)
        fail("law", experiment + " is defined for the cosine law");
}

json validate_params(const std::string& experiment, const json& raw, long n,
                     const Domain& domain, const ReflectionLaw& law) {
    const std::string where = "params";
    json p = json::object();
    const json& src = raw.is_null() ? json::object() : raw;
    if (!src.is_object()) fail(where, "expected an object");

    if (experiment == "walk-stationarity") {
        reject_unknown_keys(src, {"bins", "burn_in"}, where);
        const long bins = int_param(src, p, "bins", 50, 2, where);
        const long burn = int_param(src, p, "burn_in", 10000, 0, where);
        if (n < burn + 20 * bins)
            fail("n", "need at least burn_in + 20*bins = " +
                          std::to_string(burn + 20 * bins) + " steps");
    } else if (experiment == "billiard-stationarity") {
        reject_unknown_keys(src, {"position_bins", "velocity_bins", "spacing"}, where);
        const long pb = int_param(src, p, "position_bins", 8, 2, where);
        const long vb = int_param(src, p, "velocity_bins", 8, 2, where);
        num_param(src, p, "spacing", 0.0, 0.0, where);
        if (n < 20 * pb * vb)
            fail("n", "need at least 20*position_bins*velocity_bins = " +
                          std::to_string(20 * pb * vb) + " samples");
    } else if (experiment == "mean-chord") {
        reject_unknown_keys(src, {}, where);
        if (n < 100) fail("n", "need at least 100 chords");
    } else if (experiment == "bertrand") {
        reject_unknown_keys(src, {"ks_samples"}, where);
        int_param(src, p, "ks_samples", 200000, 1000, where);
        if (n < 1000) fail("n", "need at least 1000 draws per method");
        if (!std::holds_alternative<Disk>(domain.spec()))
            fail("domain", "bertrand is defined on a disk");
        require_cosine(law, experiment);
    } else if (experiment == "induced-chords") {
        reject_unknown_keys(src, {"subdomain", "max_piece_samples"}, where);
        if (!src.contains("subdomain")) fail("params.subdomain", "missing required field");
        const Domain sub = domain_from_json(src.at("subdomain"));
        if (sub.dim() != domain.dim())
            fail("params.subdomain", "dimension does not match the domain");
        p["subdomain"] = shape_to_json(sub);
        int_param(src, p, "max_piece_samples", 200000, 1000, where);
        if (n < 1000) fail("n", "need at least 1000 chords");
        require_cosine(law, experiment);
        // quick containment probe so schema validation already rejects
        // subdomains sticking out of the domain
        Rng probe(12345, 67890);
        for (int k = 0; k < 256; ++k) {
            const BoundaryPoint q = sub.sample_boundary_uniform(probe);
            if (!domain.contains(q.position))
                throw GeometryError("subdomain boundary leaves the domain");
        }
    } else if (experiment == "crossings") {
        reject_unknown_keys(src, {"surface"}, where);
        if (!src.contains("surface")) fail("params.surface", "missing required field");
        const InternalSurface s = surface_from_json(src.at("surface"), domain.dim());
        validate_internal_surface(s, domain);
        p["surface"] = src.at("surface");
        if (n < 1000) fail("n", "need at least 1000 flights");
    } else if (experiment == "kernel-solve") {
        reject_unknown_keys(src,
                            {"panels", "row_sum_tolerance", "power_tol", "doblin_n0",
                             "walk_check_n", "walk_burn_in", "bins", "tv_tolerance",
                             "psi_tolerance", "residual_tolerance", "dump_matrix",
                             "subdominant_iterations"},
                            where);
        int_param(src, p, "panels", 400, 16, where);
        num_param(src, p, "row_sum_tolerance", 0.02, 1e-12, where);
        num_param(src, p, "power_tol", 1e-13, 0.0, where);
        int_param(src, p, "doblin_n0", 2, 1, where);
        const long wn = int_param(src, p, "walk_check_n", 0, 0, where);
        const long wb = int_param(src, p, "walk_burn_in", 10000, 0, where);
        const long bins = int_param(src, p, "bins", 50, 2, where);
        int_param(src, p, "subdominant_iterations", 300, 10, where);
        num_param(src, p, "tv_tolerance", 0.02, 0.0, where);
        // Quadrature error near polygon corners converges first order in the
        // panel count; at the default 400 panels the worst interior panel on a
        // square sits near 2e-3, so the default bound leaves a 3x margin.
        num_param(src, p, "psi_tolerance", 5e-3, 0.0, where);
        num_param(src, p, "residual_tolerance", 1e-10, 0.0, where);
        p["dump_matrix"] = src.value("dump_matrix", false);
        if (wn > 0 && wn < wb + 20 * bins)
            fail("params.walk_check_n", "too short for the requested binning");
    } else if (experiment == "clt") {
        reject_unknown_keys(src, {"batches", "burn_in", "coord_lo", "coord_hi"}, where);
        const long batches = int_param(src, p, "batches", 200, 10, where);
        int_param(src, p, "burn_in", 10000, 0, where);
        const double lo = num_param(src, p, "coord_lo", 0.0, 0.0, where);
        const double hi = num_param(src, p, "coord_hi", 0.5, 0.0, where);
        if (!(lo < hi) || hi > 1.0)
            fail("params.coord_hi", "need 0 <= coord_lo < coord_hi <= 1");
        if (lo == 0.0 && hi == 1.0)
            fail("params.coord_hi", "the full boundary has zero asymptotic variance");
        if (n < 100 * batches)
            fail("n", "need at least 100*batches = " + std::to_string(100 * batches) +
                          " steps");
    } else if (experiment == "ergodicity-decay") {
        reject_unknown_keys(src,
                            {"panels", "bins", "steps", "start_panel",
                             "row_sum_tolerance", "power_tol"},
                            where);
        int_param(src, p, "panels", 400, 16, where);
        int_param(src, p, "bins", 50, 2, where);
        num_param(src, p, "row_sum_tolerance", 0.02, 1e-12, where);
        num_param(src, p, "power_tol", 1e-13, 0.0, where);
        if (src.contains("start_panel")) {
            if (!src.at("start_panel").is_number_integer())
                fail("params.start_panel", "expected an integer");
            p["start_panel"] = src.at("start_panel").get<int>();
        } else {
            p["start_panel"] = -1;
        }
        std::vector<int> steps{1, 2, 4, 8, 16};
        if (src.contains("steps")) {
            if (!src.at("steps").is_array() || src.at("steps").empty())
                fail("params.steps", "expected a non-empty integer array");
            steps = src.at("steps").get<std::vector<int>>();
        }
        for (size_t k = 0; k < steps.size(); ++k) {
            if (steps[k] < 1) fail("params.steps", "entries must be >= 1");
            if (k > 0 && steps[k] <= steps[k - 1])
                fail("params.steps", "entries must be strictly increasing");
        }
        p["steps"] = steps;
        require_cosine(law, experiment);
    } else if (experiment == "reversal") {
        reject_unknown_keys(
            src, {"bins", "burn_in", "velocity_bins", "velocity_samples", "spacing"},
            where);
        const long bins = int_param(src, p, "bins", 16, 2, where);
        const long burn = int_param(src, p, "burn_in", 10000, 0, where);
        const long vbins = int_param(src, p, "velocity_bins", 16, 2, where);
        if (vbins % 2 != 0) fail("params.velocity_bins", "must be even");
        int_param(src, p, "velocity_samples", 20000, 20 * vbins, where);
        num_param(src, p, "spacing", 0.0, 0.0, where);
        if (n < burn + 20 * bins * bins)
            fail("n", "need at least burn_in + 20*bins^2 = " +
                          std::to_string(burn + 20 * bins * bins) + " steps");
        require_cosine(law, experiment);
    }
    return p;
}

using Runner = void (*)(Ctx&);
const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> table = {
        {"walk-stationarity", run_walk_stationarity},
        {"billiard-stationarity", run_billiard_stationarity},
        {"mean-chord", run_mean_chord},
        {"bertrand", run_bertrand},
        {"induced-chords", run_induced_chords},
        {"crossings", run_crossings},
        {"kernel-solve", run_kernel_solve},
        {"clt", run_clt},
        {"ergodicity-decay", run_ergodicity_decay},
        {"reversal", run_reversal},
    };
    return table;
}

}  // namespace

std::vector<std::string> builtin_domain_names() {
    return {"unit-disk",   "unit-square", "ellipse-2x1", "l-shape",
            "annulus-1-2", "unit-sphere", "unit-cube"};
}

nlohmann::json builtin_domain_json(const std::string& name) {
    return make_builtin(name);
}

Domain domain_from_json(const json& spec) {
    return Domain(shape_from_json(resolve_domain_json(spec, 0)));
}

ReflectionLaw law_from_json(const json& spec, int dim) {
    std::string kind;
    const json* obj = nullptr;
    if (spec.is_string()) {
        kind = spec.get<std::string>();
    } else if (spec.is_object()) {
        obj = &spec;
        kind = need(spec, "law", "law").get<std::string>();
    } else {
        fail("law", "expected a string or an object");
    }
    if (kind == "cosine") {
        if (obj) reject_unknown_keys(*obj, {"law"}, "law");
        return ReflectionLaw::cosine(dim);
    }
    if (kind == "uniform") {
        if (obj) reject_unknown_keys(*obj, {"law"}, "law");
        return ReflectionLaw::uniform_hemisphere(dim);
    }
    if (kind == "custom") {
        if (!obj) fail("law", "custom law needs a 'custom_pdf' knot table");
        reject_unknown_keys(*obj, {"law", "custom_pdf"}, "law");
        const json& knots_json = need(*obj, "custom_pdf", "law");
        if (!knots_json.is_array() || knots_json.size() < 2)
            fail("law.custom_pdf", "expected at least 2 [angle, value] knots");
        std::vector<std::pair<double, double>> knots;
        for (const auto& kv : knots_json) {
            if (!kv.is_array() || kv.size() != 2 || !kv[0].is_number() ||
                !kv[1].is_number())
                fail("law.custom_pdf", "expected [angle, value] pairs");
            knots.emplace_back(kv[0].get<double>(), kv[1].get<double>());
        }
        try {
            return ReflectionLaw::custom(dim, knots);
        } catch (const std::invalid_argument& e) {
            fail("law.custom_pdf", e.what());
        }
    }
    fail("law", "unknown law '" + kind + "'");
}

ExperimentConfig resolve_config(const json& raw, const CliOverrides& overrides) {
    if (!raw.is_object()) fail("config", "expected a JSON object");
    reject_unknown_keys(raw,
                        {"experiment", "domain", "law", "n", "seed", "replicas", "out",
                         "alpha", "max_csv_rows", "params"},
                        "config");

    const std::string experiment = need(raw, "experiment", "config").get<std::string>();
    if (std::find(std::begin(kExperiments), std::end(kExperiments), experiment) ==
        std::end(kExperiments))
        fail("experiment", "unknown experiment '" + experiment + "'");

    Domain domain = domain_from_json(need(raw, "domain", "config"));
    ReflectionLaw law =
        law_from_json(raw.contains("law") ? raw.at("law") : json("cosine"),
                      domain.dim());

    long n = 0;
    const bool needs_n =
        experiment != "kernel-solve" && experiment != "ergodicity-decay";
    if (raw.contains("n")) {
        if (!raw.at("n").is_number_integer()) fail("n", "expected an integer");
        n = raw.at("n").get<long>();
        if (n < 0) fail("n", "must be non-negative");
    } else if (needs_n) {
        fail("n", "missing required field");
    }

    std::uint64_t seed = 1;
    if (raw.contains("seed")) {
        if (!raw.at("seed").is_number_integer() || raw.at("seed").get<long long>() < 0)
            fail("seed", "expected a non-negative integer");
        seed = raw.at("seed").get<std::uint64_t>();
    }
    if (overrides.seed) seed = *overrides.seed;

    int replicas = 1;
    if (raw.contains("replicas")) {
        if (!raw.at("replicas").is_number_integer())
            fail("replicas", "expected an integer");
        replicas = raw.at("replicas").get<int>();
    }
    if (overrides.replicas) replicas = *overrides.replicas;
    if (replicas < 1 || replicas > 4096) fail("replicas", "must be in [1, 4096]");

    std::string out_dir = raw.value("out", "out");
    if (overrides.out_dir) out_dir = *overrides.out_dir;

    double alpha = 0.001;
    if (raw.contains("alpha")) {
        if (!raw.at("alpha").is_number()) fail("alpha", "expected a number");
        alpha = raw.at("alpha").get<double>();
        if (!(alpha > 0.0 && alpha <= 0.5)) fail("alpha", "must be in (0, 0.5]");
    }

    long max_csv_rows = 100000;
    if (raw.contains("max_csv_rows")) {
        if (!raw.at("max_csv_rows").is_number_integer())
            fail("max_csv_rows", "expected an integer");
        max_csv_rows = raw.at("max_csv_rows").get<long>();
        if (max_csv_rows < 0) fail("max_csv_rows", "must be non-negative");
    }

    json params = validate_params(experiment,
                                  raw.contains("params") ? raw.at("params") : json(),
                                  n, domain, law);

    ojson echo;
    echo["experiment"] = experiment;
    echo["domain"] = shape_to_json(domain);
    echo["law"] = law_to_json(law);
    echo["n"] = n;
    echo["seed"] = seed;
    echo["replicas"] = replicas;
    echo["out"] = out_dir;
    echo["alpha"] = alpha;
    echo["max_csv_rows"] = max_csv_rows;
    echo["params"] = params;

    return ExperimentConfig{experiment, std::move(domain),    std::move(law),
                            seed,       replicas,             n,
                            alpha,      std::move(out_dir),   max_csv_rows,
                            std::move(params),                std::move(echo)};
}

ExperimentConfig load_config(const std::string& path, const CliOverrides& overrides) {
    std::ifstream in(path);
    if (!in) fail("config", "cannot read file '" + path + "'");
    json raw;
    try {
        raw = json::parse(in);
    } catch (const json::parse_error& e) {
        fail("config", std::string("invalid JSON: ") + e.what());
    }
    return resolve_config(raw, overrides);
}

RunReport run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(config.out_dir);

    Ctx ctx{config, fs::path(config.out_dir), {}, ojson::object(), ojson::object()};
    runners().at(config.experiment)(ctx);

    bool all_pass = true;
    ojson tests = ojson::array();
    for (const auto& t : ctx.tests) {
        ojson e;
        e["test"] = t.test;
        e["statistic"] = t.statistic;
        e["p_value"] = t.p_value;
        e["n"] = t.n;
        e["alpha"] = t.alpha;
        e["pass"] = t.pass;
        tests.push_back(e);
        all_pass = all_pass && t.pass;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ojson doc;
    doc["experiment"] = config.experiment;
    doc["config"] = config.echo;
    doc["tests"] = tests;
    doc["estimates"] = ctx.estimates;
    doc["counters"] = ctx.counters;
    doc["wall_clock_seconds"] = elapsed;
    doc["pass"] = all_pass;

    std::ofstream out(fs::path(config.out_dir) / "report.json", std::ios::binary);
    out << doc.dump(2) << '\n';

    return RunReport{std::move(doc), all_pass};
}

}  // namespace billiards::experiments
