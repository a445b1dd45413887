#pragma once

#include <functional>
#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/reflection.hpp"
#include "billiards/rng.hpp"
#include "billiards/stats.hpp"

namespace billiards {

// Boundary chain state after step_index hops; local_time accumulates the
// flight lengths, which is also the elapsed time of the unit-speed flow.
struct WalkState {
    BoundaryPoint position;
    long step_index = 0;
    double local_time = 0.0;
};

struct WalkRecord {
    std::vector<WalkState> states;  // every thin-th state, starting at the start state
    long n_steps = 0;
    long resample_count = 0;
    int thin = 1;
};

struct StepOutcome {
    BoundaryPoint next;
    Vec direction;
    double flight_length = 0.0;
    int resamples = 0;
};

// One hop: draw a law direction at `from`, cast to the boundary, and
// re-draw (up to 100 times) if the hit lands on the non-smooth set.
// Throws StuckAtCorner when every attempt fails.
StepOutcome step(const BoundaryPoint& from, const ReflectionLaw& law,
                 const Domain& domain, Rng& rng);

// Deterministic variant used by tests: hop along a forced direction.
StepOutcome step_along(const BoundaryPoint& from, const Vec& direction,
                       const Domain& domain);

// Run n_steps hops from `start`, recording every thin-th state (the start
// state always included, so thin == 1 keeps n_steps + 1 states).
WalkRecord run(const Domain& domain, const ReflectionLaw& law, BoundaryPoint start,
               long n_steps, Rng& rng, int thin = 1);

// Streaming variant: invokes visit(state) for every state including the
// start, storing nothing. Returns the resample count.
long run_visit(const Domain& domain, const ReflectionLaw& law, BoundaryPoint start,
               long n_steps, Rng& rng,
               const std::function<void(const WalkState&)>& visit);

// Occupation histogram over equal-measure boundary cells with Wilson
// confidence intervals per cell.
struct BoundaryHistogram {
    stats::BinnedMeasure histogram;
    std::vector<stats::Interval> wilson;  // 99% intervals for cell frequencies
};
BoundaryHistogram empirical_boundary_density(const WalkRecord& record,
                                             const Domain& domain, int bins);

}  // namespace billiards
