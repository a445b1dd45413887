#include "billiards/chords.hpp"

#include <algorithm>
#include <cmath>

namespace billiards {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool position_less(const Vec& a, const Vec& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

Estimate mean_of(double sum, double sum_sq, long n) {
    Estimate e;
    e.n = n;
    e.value = sum / n;
    const double var = std::max(0.0, sum_sq / n - e.value * e.value);
    e.std_error = std::sqrt(var / n);
    return e;
}

double disk_radius(const Domain& domain) {
    if (const auto* d = std::get_if<Disk>(&domain.spec())) return d->radius;
    throw GeometryError("bertrand: construction defined on a disk");
}

}  // namespace

Chord make_chord(const BoundaryPoint& p, const BoundaryPoint& q) {
    Chord c;
    if (position_less(q.position, p.position)) {
        c.a = q;
        c.b = p;
    } else {
        c.a = p;
        c.b = q;
    }
    c.length = distance(c.a.position, c.b.position);
    return c;
}

Chord sample_chord(const Domain& domain, const ReflectionLaw& law, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        const BoundaryPoint start = domain.sample_boundary_uniform(rng);
        if (!start.is_regular) continue;
        const Vec dir = law.sample_direction(start, rng);
        try {
            const HitResult hit = domain.ray_cast(start.position, dir);
            return make_chord(start, hit.point);
        } catch (const NoHitError&) {
            continue;  // grazing draw
        }
    }
    throw StuckAtCornerError("sample_chord: repeated degenerate draws");
}

Estimate mean_chord(const Domain& domain, const ReflectionLaw& law, long n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("mean_chord: n < 1");
    double sum = 0.0, sum_sq = 0.0;
    for (long k = 0; k < n; ++k) {
        const double len = sample_chord(domain, law, rng).length;
        sum += len;
        sum_sq += len * len;
    }
    return mean_of(sum, sum_sq, n);
}

Estimate volume_to_surface(const Estimate& mean_chord_estimate, int dim) {
    const double kappa = law_constants(dim).chord_factor;
    Estimate e = mean_chord_estimate;
    e.value /= kappa;
    e.std_error /= kappa;
    return e;
}

Estimate mean_chord_occupation(const Domain& domain, const ReflectionLaw& law,
                               const std::vector<ChordRegionBall>& regions, long n,
                               Rng& rng) {
    if (n < 1) throw std::invalid_argument("mean_chord_occupation: n < 1");
    double sum = 0.0, sum_sq = 0.0;
    for (long k = 0; k < n; ++k) {
        const Chord c = sample_chord(domain, law, rng);
        const Vec d = c.b.position - c.a.position;
        const double len = c.length;
        const Vec v = d / len;
        double inside = 0.0;
        for (const auto& ball : regions) {
            const Vec w = c.a.position - ball.center;
            const double b = v.dot(w);
            const double disc = b * b - (w.norm2() - ball.radius * ball.radius);
            if (disc <= 0.0) continue;
            const double sq = std::sqrt(disc);
            const double s0 = std::max(0.0, -b - sq);
            const double s1 = std::min(len, -b + sq);
            inside += std::max(0.0, s1 - s0);
        }
        sum += inside;
        sum_sq += inside * inside;
    }
    return mean_of(sum, sum_sq, n);
}

InducedChordSet induced_chords(const Chord& chord, const Domain& subdomain) {
    InducedChordSet out;
    const Vec a = chord.a.position;
    const Vec b = chord.b.position;
    const std::vector<SegmentHit> hits = subdomain.segment_hits(a, b);
    if (hits.size() < 2) return out;
    for (size_t i = 0; i + 1 < hits.size(); ++i) {
        const double mid_t = 0.5 * (hits[i].t + hits[i + 1].t);
        if (!subdomain.contains(a + (b - a) * mid_t)) continue;
        out.pieces.push_back(make_chord(hits[i].point, hits[i + 1].point));
    }
    out.count = static_cast<int>(out.pieces.size());
    return out;
}

InducedChordStats induced_chord_statistics(const Domain& domain,
                                           const ReflectionLaw& law,
                                           const Domain& subdomain, long n, Rng& rng,
                                           long max_piece_samples) {
    if (n < 1) throw std::invalid_argument("induced_chord_statistics: n < 1");
    // Containment guard: the subdomain boundary must sit inside the domain.
    {
        Rng probe(12345, 67890);
        for (int k = 0; k < 1000; ++k) {
            const BoundaryPoint bp = subdomain.sample_boundary_uniform(probe);
            if (!domain.contains(bp.position))
                throw GeometryError(
                    "induced_chord_statistics: subdomain not inside the domain");
        }
    }
    double hit_sum = 0.0;
    double count_sum = 0.0, count_sq = 0.0;
    InducedChordStats out;
    for (long k = 0; k < n; ++k) {
        const Chord c = sample_chord(domain, law, rng);
        const InducedChordSet set = induced_chords(c, subdomain);
        hit_sum += set.count > 0 ? 1.0 : 0.0;
        count_sum += set.count;
        count_sq += static_cast<double>(set.count) * set.count;
        if (static_cast<long>(out.piece_lengths.size()) < max_piece_samples)
            for (const auto& piece : set.pieces)
                out.piece_lengths.push_back(piece.length);
    }
    out.n = n;
    out.hit_probability = mean_of(hit_sum, hit_sum, n);  // indicator: x^2 == x
    out.mean_piece_count = mean_of(count_sum, count_sq, n);
    return out;
}

double bertrand_exact(int method) {
    switch (method) {
        case 1: return 1.0 / 3.0;
        case 2: return 1.0 / 2.0;
        case 3: return 1.0 / 4.0;
    }
    throw std::invalid_argument("bertrand: method must be 1, 2 or 3");
}

double bertrand_length_sample(int method, double radius, Rng& rng) {
    switch (method) {
        case 1: {
            const double delta = 2.0 * kPi * rng.uniform();
            return 2.0 * radius * std::abs(std::sin(0.5 * delta));
        }
        case 2: {
            const double d = radius * rng.uniform();
            return 2.0 * std::sqrt(radius * radius - d * d);
        }
        case 3: {
            // Uniform midpoint in the disk: radius sqrt(u) at a uniform angle.
            const double d = radius * std::sqrt(rng.uniform());
            return 2.0 * std::sqrt(radius * radius - d * d);
        }
    }
    throw std::invalid_argument("bertrand: method must be 1, 2 or 3");
}

Estimate bertrand_probability(const Domain& disk, int method, long n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("bertrand_probability: n < 1");
    const double r = disk_radius(disk);
    const double cutoff = std::sqrt(3.0) * r;
    double sum = 0.0;
    for (long k = 0; k < n; ++k)
        if (bertrand_length_sample(method, r, rng) > cutoff) sum += 1.0;
    return mean_of(sum, sum, n);
}

double radius_method_length_cdf(double length, double radius) {
    if (length <= 0.0) return 0.0;
    if (length >= 2.0 * radius) return 1.0;
    const double half = 0.5 * length / radius;
    return 1.0 - std::sqrt(1.0 - half * half);
}

std::vector<double> interior_construction_length_hist(const Domain& domain, int bins,
                                                      double max_len, long n,
                                                      Rng& rng) {
    if (domain.dim() != 2)
        throw UnsupportedDimensionError(
            "interior_construction_length_hist: 2-D check only");
    std::vector<double> weighted(bins, 0.0);
    for (long k = 0; k < n; ++k) {
        const Vec x = domain.sample_interior_uniform(rng);
        const double a = 2.0 * kPi * rng.uniform();
        const Vec v{std::cos(a), std::sin(a)};
        double len = 0.0;
        try {
            const HitResult fwd = domain.ray_cast(x, v);
            const HitResult bwd = domain.ray_cast(x, -v);
            len = distance(fwd.point.position, bwd.point.position);
        } catch (const GeometryError&) {
            continue;
        }
        if (len <= 0.0) continue;
        int cell = static_cast<int>(len / max_len * bins);
        cell = std::clamp(cell, 0, bins - 1);
        // (x, v) falls on a chord with probability proportional to its
        // length; 1/len undoes the length bias, self-normalized later.
        weighted[cell] += 1.0 / len;
    }
    return weighted;
}

}  // namespace billiards
