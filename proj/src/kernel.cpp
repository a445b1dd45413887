#include "billiards/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "billiards/errors.hpp"

namespace billiards::kernel {

namespace {

// Entries with cos(angle) at either endpoint below this floor are dropped:
// they are grazing pairs (same facet up to rounding, or tangential slivers)
// whose contribution is below quadrature resolution, and acos would
// round their polar angle onto pi/2 where the law density is undefined.
constexpr double kCosFloor = 1e-12;

// mu' = mu P, column dots in a fixed inner order so the result does not
// depend on how rows of the j-loop are scheduled.
void apply_left(const std::vector<double>& transition, int n,
                const std::vector<double>& mu, std::vector<double>& out,
                ExecPolicy policy) {
#pragma omp parallel for schedule(static) if (policy == ExecPolicy::parallel)
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += mu[i] * transition[i * n + j];
        out[j] = acc;
    }
}

// C = A B with a fixed per-row accumulation order.
void multiply(const std::vector<double>& a, const std::vector<double>& b, int n,
              std::vector<double>& c, ExecPolicy policy) {
#pragma omp parallel for schedule(static) if (policy == ExecPolicy::parallel)
    for (int i = 0; i < n; ++i) {
        double* row = &c[i * n];
        std::fill(row, row + n, 0.0);
        for (int k = 0; k < n; ++k) {
            const double aik = a[i * n + k];
            if (aik == 0.0) continue;
            const double* bk = &b[k * n];
            for (int j = 0; j < n; ++j) row[j] += aik * bk[j];
        }
    }
}

}  // namespace

PanelMesh build_mesh(const Domain& domain, int panel_count) {
    if (panel_count < 16) {
        throw ConfigError("panel count must be at least 16, got " +
                          std::to_string(panel_count));
    }
    PanelMesh mesh;
    mesh.panels = domain.panelize(panel_count);
    mesh.size = static_cast<int>(mesh.panels.size());
    return mesh;
}

KernelSystem assemble(const Domain& domain, const ReflectionLaw& law,
                      const PanelMesh& mesh, double row_sum_tolerance,
                      ExecPolicy policy) {
    const int n = mesh.size;
    const int dim = domain.dim();
    const LawConstants c = law_constants(dim);
    const bool plain_cosine = law.kind() == LawKind::cosine;

    KernelSystem sys;
    sys.mesh = mesh;
    sys.size = n;
    sys.transition.assign(static_cast<size_t>(n) * n, 0.0);
    sys.raw_row_sums.assign(n, 0.0);

#pragma omp parallel for schedule(static) if (policy == ExecPolicy::parallel)
    for (int i = 0; i < n; ++i) {
        const BoundaryPoint& x = mesh.panels[i].midpoint;
        double* row = &sys.transition[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const BoundaryPoint& y = mesh.panels[j].midpoint;
            const Vec d = y.position - x.position;
            const double r2 = d.dot(d);
            const double r = std::sqrt(r2);
            const double tx = d.dot(x.normal);
            const double ty = (x.position - y.position).dot(y.normal);
            if (tx <= kCosFloor * r || ty <= kCosFloor * r) continue;
            if (!domain.visible(x.position, y.position)) continue;
            const double cos_x = std::min(tx / r, 1.0);
            const double cos_y = std::min(ty / r, 1.0);
            const double density =
                plain_cosine ? c.cosine_normalizer * cos_x : law.pdf(std::acos(cos_x));
            const double jac = dim == 2 ? cos_y / r : cos_y / r2;
            row[j] = density * jac * mesh.panels[j].measure;
        }
        sys.raw_row_sums[i] =
            std::accumulate(row, row + n, 0.0);
    }

    for (int i = 0; i < n; ++i) {
        const double s = sys.raw_row_sums[i];
        if (s <= 0.0) {
            throw RowSumOutOfToleranceError("panel " + std::to_string(i) +
                                            " sees no boundary mass");
        }
        if (!mesh.panels[i].corner_adjacent &&
            std::abs(s - 1.0) > row_sum_tolerance) {
            std::ostringstream msg;
            msg << "raw row sum " << s << " at panel " << i
                << " deviates from 1 by more than " << row_sum_tolerance
                << "; refine the mesh";
            throw RowSumOutOfToleranceError(msg.str());
        }
    }

#pragma omp parallel for schedule(static) if (policy == ExecPolicy::parallel)
    for (int i = 0; i < n; ++i) {
        double* row = &sys.transition[static_cast<size_t>(i) * n];
        const double inv = 1.0 / sys.raw_row_sums[i];
        for (int j = 0; j < n; ++j) row[j] *= inv;
    }
    return sys;
}

std::vector<double> cosine_density_matrix(const Domain& domain, const PanelMesh& mesh) {
    const int n = mesh.size;
    const int dim = domain.dim();
    const double gamma = law_constants(dim).cosine_normalizer;
    std::vector<double> k(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        const BoundaryPoint& x = mesh.panels[i].midpoint;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const BoundaryPoint& y = mesh.panels[j].midpoint;
            const Vec d = y.position - x.position;
            const double r2 = d.dot(d);
            const double tx = d.dot(x.normal);
            const double ty = (x.position - y.position).dot(y.normal);
            if (tx <= 0.0 || ty <= 0.0) continue;
            if (!domain.visible(x.position, y.position)) continue;
            // tx * ty and r2 are invariant under swapping i and j bit for
            // bit, so the matrix is exactly symmetric.
            const double denom = dim == 2 ? r2 * std::sqrt(r2) : r2 * r2;
            k[static_cast<size_t>(i) * n + j] = gamma * ((tx * ty) / denom);
        }
    }
    return k;
}

InvariantDensity invariant_density(const KernelSystem& system, double tol,
                                   long max_iterations, ExecPolicy policy) {
    const int n = system.size;
    double total_measure = 0.0;
    for (const auto& p : system.mesh.panels) total_measure += p.measure;

    std::vector<double> mu(n), next(n);
    for (int i = 0; i < n; ++i) mu[i] = system.mesh.panels[i].measure / total_measure;

    long iter = 0;
    for (; iter < max_iterations; ++iter) {
        apply_left(system.transition, n, mu, next, policy);
        double delta = 0.0;
        for (int j = 0; j < n; ++j) delta = std::max(delta, std::abs(next[j] - mu[j]));
        mu.swap(next);
        if (delta <= tol) break;
    }
    if (iter == max_iterations) {
        throw NoConvergenceError("power iteration still moving after " +
                                 std::to_string(max_iterations) + " sweeps");
    }

    double mass = std::accumulate(mu.begin(), mu.end(), 0.0);
    for (int j = 0; j < n; ++j) mu[j] /= mass;

    apply_left(system.transition, n, mu, next, policy);
    double residual = 0.0;
    for (int j = 0; j < n; ++j) residual = std::max(residual, std::abs(next[j] - mu[j]));

    InvariantDensity out;
    out.psi.resize(n);
    for (int j = 0; j < n; ++j) out.psi[j] = mu[j] / system.mesh.panels[j].measure;
    out.residual = residual;
    out.iterations = iter + 1;
    return out;
}

std::vector<double> propagate(const KernelSystem& system, std::vector<double> mass,
                              int steps, ExecPolicy policy) {
    if (static_cast<int>(mass.size()) != system.size) {
        throw BinMismatchError("mass vector length " + std::to_string(mass.size()) +
                               " does not match panel count " +
                               std::to_string(system.size));
    }
    std::vector<double> next(system.size);
    for (int s = 0; s < steps; ++s) {
        apply_left(system.transition, system.size, mass, next, policy);
        mass.swap(next);
    }
    return mass;
}

double doblin_check(const KernelSystem& system, int n0, ExecPolicy policy) {
    if (n0 < 1) throw ConfigError("step count for the minorization bound must be >= 1");
    const int n = system.size;
    std::vector<double> power = system.transition;
    std::vector<double> scratch(power.size());
    for (int s = 1; s < n0; ++s) {
        multiply(power, system.transition, n, scratch, policy);
        power.swap(scratch);
    }
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            lowest = std::min(lowest,
                              power[static_cast<size_t>(i) * n + j] /
                                  system.mesh.panels[j].measure);
        }
    }
    return lowest;
}

double subdominant_eigenvalue(const KernelSystem& system, int iterations,
                              ExecPolicy policy) {
    const int n = system.size;
    const InvariantDensity inv = invariant_density(system, 1e-13, 100000, policy);

    // Zero-sum start vector deflates the stationary mode. Renormalizing a
    // decaying iterate amplifies rounding noise along the mass direction by
    // 1/|lambda| per step, so the projection is re-applied every iteration.
    std::vector<double> mu(n), v(n), next(n);
    for (int j = 0; j < n; ++j) mu[j] = inv.psi[j] * system.mesh.panels[j].measure;
    for (int j = 0; j < n; ++j) v[j] = (j == 0 ? 1.0 : 0.0) - mu[j];

    double log_sum = 0.0;
    int log_count = 0;
    for (int s = 0; s < iterations; ++s) {
        apply_left(system.transition, n, v, next, policy);
        double mass = 0.0;
        for (int j = 0; j < n; ++j) mass += next[j];
        for (int j = 0; j < n; ++j) next[j] -= mass * mu[j];
        double norm = 0.0;
        for (int j = 0; j < n; ++j) norm += std::abs(next[j]);
        if (norm == 0.0) return 0.0;
        for (int j = 0; j < n; ++j) next[j] /= norm;
        v.swap(next);
        if (s >= iterations / 2) {
            log_sum += std::log(norm);
            ++log_count;
        }
    }
    return log_count > 0 ? std::exp(log_sum / log_count) : 0.0;
}

}  // namespace billiards::kernel
