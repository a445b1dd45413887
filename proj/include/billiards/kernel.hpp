#pragma once

#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/reflection.hpp"

namespace billiards::kernel {

// Row-parallel kernels accept an execution policy; `serial` is the
// reference path used by the consistency tests and the benchmark.
enum class ExecPolicy { serial, parallel };

struct PanelMesh {
    std::vector<BoundaryPanel> panels;
    int size = 0;
};

// Equal-measure boundary mesh; panel_count >= 16.
PanelMesh build_mesh(const Domain& domain, int panel_count);

// One-step transition matrix of the boundary chain on the mesh:
// row i holds the probabilities panel i -> panel j from midpoint-rule
// quadrature of the transition density, renormalized to row sum 1.
// Raw row sums are kept for diagnostics; a raw sum farther than
// row_sum_tolerance from 1 on a row whose midpoint is not corner-adjacent
// throws RowSumOutOfToleranceError (an under-resolved mesh).
struct KernelSystem {
    PanelMesh mesh;
    std::vector<double> transition;    // row-major size x size, row-stochastic
    std::vector<double> raw_row_sums;
    int size = 0;
};

KernelSystem assemble(const Domain& domain, const ReflectionLaw& law,
                      const PanelMesh& mesh, double row_sum_tolerance = 0.02,
                      ExecPolicy policy = ExecPolicy::parallel);

// Unweighted symmetric-density values K~(x_i, x_j) for the cosine law;
// exactly transpose-symmetric by construction (test oracle).
std::vector<double> cosine_density_matrix(const Domain& domain, const PanelMesh& mesh);

// Stationary density of the panel chain by left power iteration.
// psi is the density w.r.t. the boundary measure: sum_i psi_i w_i = 1.
// residual is the sup-norm balance defect of the final iterate.
struct InvariantDensity {
    std::vector<double> psi;
    double residual = 0.0;
    long iterations = 0;
};
InvariantDensity invariant_density(const KernelSystem& system, double tol = 1e-13,
                                   long max_iterations = 100000,
                                   ExecPolicy policy = ExecPolicy::parallel);

// Push a panel mass vector through n steps of the chain.
std::vector<double> propagate(const KernelSystem& system, std::vector<double> mass,
                              int steps, ExecPolicy policy = ExecPolicy::parallel);

// Minimum of the n0-step transition *density* (matrix power divided by the
// arrival panel measure): a positive value is a discrete minorization
// constant witnessing geometric ergodicity.
double doblin_check(const KernelSystem& system, int n0,
                    ExecPolicy policy = ExecPolicy::parallel);

// Modulus bound for the second-largest eigenvalue via power iteration on
// the stationarity-deflated operator (spectral-gap proxy).
double subdominant_eigenvalue(const KernelSystem& system, int iterations = 500,
                              ExecPolicy policy = ExecPolicy::parallel);

}  // namespace billiards::kernel
