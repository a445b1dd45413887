#include "billiards/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace billiards {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 0.5 * kPi;

// Fritsch-Carlson monotone cubic Hermite interpolation on a uniform grid
// over [0, 1]; used for the inverse-CDF sampling table.
struct MonotoneCubic {
    std::vector<double> y;
    std::vector<double> m;

    void build() {
        const int n = static_cast<int>(y.size());
        const double h = 1.0 / (n - 1);
        std::vector<double> d(n - 1);
        for (int i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / h;
        m.assign(n, 0.0);
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for (int i = 1; i + 1 < n; ++i)
            m[i] = (d[i - 1] * d[i] > 0.0) ? 0.5 * (d[i - 1] + d[i]) : 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            if (d[i] == 0.0) {
                m[i] = m[i + 1] = 0.0;
                continue;
            }
            const double a = m[i] / d[i];
            const double b = m[i + 1] / d[i];
            const double s = a * a + b * b;
            if (s > 9.0) {
                const double tau = 3.0 / std::sqrt(s);
                m[i] = tau * a * d[i];
                m[i + 1] = tau * b * d[i];
            }
        }
    }

    double eval(double u) const {
        const int n = static_cast<int>(y.size());
        u = std::clamp(u, 0.0, 1.0);
        const double pos = u * (n - 1);
        const int k = std::min(n - 2, static_cast<int>(pos));
        const double t = pos - k;
        const double h = 1.0 / (n - 1);
        const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        const double h10 = t * (1.0 - t) * (1.0 - t);
        const double h01 = t * t * (3.0 - 2.0 * t);
        const double h11 = t * t * (t - 1.0);
        return h00 * y[k] + h10 * h * m[k] + h01 * y[k + 1] + h11 * h * m[k + 1];
    }
};

double gl16_integrate(double a, double b, const auto& f) {
    static const double xs[8] = {0.0950125098376374, 0.2816035507792589,
                                 0.4580167776572274, 0.6178762444026438,
                                 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double ws[8] = {0.1894506104550685, 0.1826034150449236,
                                 0.1691565193950025, 0.1495959888165767,
                                 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i)
        sum += ws[i] * (f(c - hw * xs[i]) + f(c + hw * xs[i]));
    return hw * sum;
}

}  // namespace

LawConstants law_constants(int dim) {
    if (dim == 2) return {0.5, kPi};
    if (dim == 3) return {1.0 / kPi, 4.0};
    throw UnsupportedDimensionError("law_constants: only dimensions 2 and 3");
}

Mat3 build_frame(const BoundaryPoint& p, int dim) {
    if (!p.is_regular)
        throw NonRegularPointError("build_frame: no normal at a non-regular point");
    const Vec n = p.normal;
    Mat3 frame;
    frame.col[0] = n;
    if (dim == 2) {
        frame.col[1] = perp(n);
        frame.col[2] = {0.0, 0.0, 1.0};
        return frame;
    }
    if (dim != 3) throw UnsupportedDimensionError("build_frame: only dimensions 2 and 3");
    // Deterministic completion: cross with the axis least aligned with n.
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    Vec h{1.0, 0.0, 0.0};
    if (ay <= ax && ay <= az)
        h = {0.0, 1.0, 0.0};
    else if (az <= ax && az <= ay)
        h = {0.0, 0.0, 1.0};
    const Vec t1 = n.cross(h).normalized();
    frame.col[1] = t1;
    frame.col[2] = n.cross(t1);
    return frame;
}

struct ReflectionLaw::CustomTables {
    std::vector<double> knot_angle;
    std::vector<double> knot_value;  // normalized density values
    std::vector<double> cdf_angle;   // fine grid on [0, pi/2]
    std::vector<double> cdf_value;   // polar-angle CDF on the grid
    MonotoneCubic quantile;          // angle as a function of cumulative prob

    double raw(double a) const {
        if (a <= knot_angle.front()) return knot_value.front();
        if (a >= knot_angle.back()) return knot_value.back();
        const auto it = std::upper_bound(knot_angle.begin(), knot_angle.end(), a);
        const size_t k = static_cast<size_t>(it - knot_angle.begin()) - 1;
        const double t = (a - knot_angle[k]) / (knot_angle[k + 1] - knot_angle[k]);
        return knot_value[k] + t * (knot_value[k + 1] - knot_value[k]);
    }
};

ReflectionLaw ReflectionLaw::cosine(int dim) {
    law_constants(dim);
    return ReflectionLaw(dim, LawKind::cosine);
}

ReflectionLaw ReflectionLaw::uniform_hemisphere(int dim) {
    law_constants(dim);
    return ReflectionLaw(dim, LawKind::uniform_hemisphere);
}

ReflectionLaw ReflectionLaw::custom(int dim,
                                    const std::vector<std::pair<double, double>>& knots) {
    law_constants(dim);
    if (knots.size() < 2)
        throw std::invalid_argument("custom law: need at least two knots");
    auto tables = std::make_shared<CustomTables>();
    for (const auto& [a, v] : knots) {
        if (!std::isfinite(a) || !std::isfinite(v))
            throw std::invalid_argument("custom law: non-finite knot");
        if (a < 0.0 || a >= kHalfPi)
            throw std::invalid_argument("custom law: knot angle outside [0, pi/2)");
        if (v <= 0.0)
            throw std::invalid_argument(
                "custom law: density must be strictly positive on [0, pi/2)");
        if (!tables->knot_angle.empty() && a <= tables->knot_angle.back())
            throw std::invalid_argument("custom law: knot angles must increase");
        tables->knot_angle.push_back(a);
        tables->knot_value.push_back(v);
    }
    if (tables->knot_angle.front() > 1e-12)
        throw std::invalid_argument("custom law: first knot must sit at angle 0");

    // Angular weight of the half-sphere surface element.
    const auto weight = [dim](double a) {
        return dim == 2 ? 2.0 : 2.0 * kPi * std::sin(a);
    };
    const auto density = [&](double a) { return tables->raw(a) * weight(a); };

    // Normalize: exact piecewise integration (knot intervals plus the
    // constant tail up to pi/2).
    std::vector<double> cuts = tables->knot_angle;
    cuts.push_back(kHalfPi);
    double total = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k)
        total += gl16_integrate(cuts[k], cuts[k + 1], density);
    if (!(total > 0.0)) throw std::invalid_argument("custom law: zero total mass");
    for (double& v : tables->knot_value) v /= total;

    // Fine CDF grid (Simpson per step keeps local error ~h^5).
    const int grid = 1 << 13;
    tables->cdf_angle.resize(grid + 1);
    tables->cdf_value.resize(grid + 1);
    tables->cdf_value[0] = 0.0;
    for (int k = 0; k <= grid; ++k) tables->cdf_angle[k] = kHalfPi * k / grid;
    for (int k = 1; k <= grid; ++k) {
        const double a = tables->cdf_angle[k - 1];
        const double b = tables->cdf_angle[k];
        const double mid = 0.5 * (a + b);
        tables->cdf_value[k] =
            tables->cdf_value[k - 1] +
            (b - a) / 6.0 * (density(a) + 4.0 * density(mid) + density(b));
    }
    // Construction-time invariant: the normalized law integrates to 1 over
    // the half-sphere within 1e-9, re-checked with an independent rule.
    const double scale = tables->cdf_value[grid];
    if (std::abs(scale - 1.0) > 1e-9)
        throw std::invalid_argument("custom law: half-sphere normalization check failed");
    for (double& v : tables->cdf_value) v /= scale;

    // Inverse-CDF sampling table, 4096 quantiles.
    const int qn = 4096;
    tables->quantile.y.resize(qn);
    int cursor = 0;
    for (int j = 0; j < qn; ++j) {
        const double u = static_cast<double>(j) / (qn - 1);
        while (cursor + 1 < grid && tables->cdf_value[cursor + 1] < u) ++cursor;
        const double c0 = tables->cdf_value[cursor];
        const double c1 = tables->cdf_value[cursor + 1];
        const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
        tables->quantile.y[j] =
            tables->cdf_angle[cursor] +
            t * (tables->cdf_angle[cursor + 1] - tables->cdf_angle[cursor]);
    }
    tables->quantile.y.front() = 0.0;
    tables->quantile.y.back() = tables->cdf_angle.back();
    tables->quantile.build();

    ReflectionLaw law(dim, LawKind::custom_angular);
    law.tables_ = std::move(tables);
    return law;
}

double ReflectionLaw::pdf(double angle) const {
    if (angle < 0.0 || angle >= kHalfPi)
        throw OutOfRangeError("pdf: polar angle outside [0, pi/2)");
    switch (kind_) {
        case LawKind::cosine:
            return law_constants(dim_).cosine_normalizer * std::cos(angle);
        case LawKind::uniform_hemisphere:
            return dim_ == 2 ? 1.0 / kPi : 1.0 / (2.0 * kPi);
        case LawKind::custom_angular:
            return tables_->raw(angle);
    }
    return 0.0;
}

double ReflectionLaw::angle_cdf(double angle) const {
    const auto magnitude_cdf = [&](double a) {
        a = std::clamp(a, 0.0, kHalfPi);
        switch (kind_) {
            case LawKind::cosine:
                return dim_ == 2 ? std::sin(a) : std::sin(a) * std::sin(a);
            case LawKind::uniform_hemisphere:
                return dim_ == 2 ? a / kHalfPi : 1.0 - std::cos(a);
            case LawKind::custom_angular: {
                const auto& ca = tables_->cdf_angle;
                const auto it = std::upper_bound(ca.begin(), ca.end(), a);
                const size_t k =
                    std::min(ca.size() - 1,
                             static_cast<size_t>(std::max<std::ptrdiff_t>(
                                 1, it - ca.begin()))) - 1;
                const double span = ca[k + 1] - ca[k];
                const double t = span > 0.0 ? (a - ca[k]) / span : 0.0;
                return tables_->cdf_value[k] +
                       t * (tables_->cdf_value[k + 1] - tables_->cdf_value[k]);
            }
        }
        return 0.0;
    };
    if (dim_ == 3) return magnitude_cdf(angle);
    // 2-D: signed angle, density symmetric about 0.
    if (angle >= 0.0) return 0.5 + 0.5 * magnitude_cdf(angle);
    return 0.5 - 0.5 * magnitude_cdf(-angle);
}

double ReflectionLaw::sample_angle(Rng& rng) const {
    const double u = rng.uniform();
    double magnitude = 0.0;
    switch (kind_) {
        case LawKind::cosine:
            if (dim_ == 2) return std::asin(2.0 * u - 1.0);
            magnitude = std::asin(std::sqrt(u));
            break;
        case LawKind::uniform_hemisphere:
            if (dim_ == 2) return kPi * (u - 0.5);
            magnitude = std::acos(1.0 - u);
            break;
        case LawKind::custom_angular:
            magnitude = tables_->quantile.eval(u);
            if (dim_ == 2) return rng.uniform() < 0.5 ? -magnitude : magnitude;
            break;
    }
    return magnitude;
}

Vec ReflectionLaw::sample_direction(const BoundaryPoint& at, Rng& rng) const {
    const Mat3 frame = build_frame(at, dim_);
    if (dim_ == 2) {
        const double phi = sample_angle(rng);
        return frame.col[0] * std::cos(phi) + frame.col[1] * std::sin(phi);
    }
    const double theta = sample_angle(rng);
    const double psi = 2.0 * kPi * rng.uniform();
    const double st = std::sin(theta);
    return frame.col[0] * std::cos(theta) + frame.col[1] * (st * std::cos(psi)) +
           frame.col[2] * (st * std::sin(psi));
}

}  // namespace billiards
