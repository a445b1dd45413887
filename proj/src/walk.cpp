#include "billiards/walk.hpp"

namespace billiards {

namespace {
constexpr int kMaxResamples = 100;
}

StepOutcome step(const BoundaryPoint& from, const ReflectionLaw& law,
                 const Domain& domain, Rng& rng) {
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        const Vec dir = law.sample_direction(from, rng);
        HitResult hit;
        try {
            hit = domain.ray_cast(from.position, dir);
        } catch (const NoHitError&) {
            continue;  // grazing draw, measure-zero; treat like a corner hit
        }
        if (!hit.point.is_regular) continue;
        StepOutcome out;
        out.next = hit.point;
        out.direction = dir;
        out.flight_length = hit.distance;
        out.resamples = attempt;
        return out;
    }
    throw StuckAtCornerError("step: 100 direction draws all hit the non-smooth set");
}

StepOutcome step_along(const BoundaryPoint& from, const Vec& direction,
                       const Domain& domain) {
    const HitResult hit = domain.ray_cast(from.position, direction);
    StepOutcome out;
    out.next = hit.point;
    out.direction = direction;
    out.flight_length = hit.distance;
    out.resamples = 0;
    return out;
}

long run_visit(const Domain& domain, const ReflectionLaw& law, BoundaryPoint start,
               long n_steps, Rng& rng,
               const std::function<void(const WalkState&)>& visit) {
    WalkState state{start, 0, 0.0};
    visit(state);
    long resamples = 0;
    for (long k = 1; k <= n_steps; ++k) {
        const StepOutcome hop = step(state.position, law, domain, rng);
        resamples += hop.resamples;
        state.position = hop.next;
        state.step_index = k;
        state.local_time += hop.flight_length;
        visit(state);
    }
    return resamples;
}

WalkRecord run(const Domain& domain, const ReflectionLaw& law, BoundaryPoint start,
               long n_steps, Rng& rng, int thin) {
    if (thin < 1) thin = 1;
    WalkRecord record;
    record.n_steps = n_steps;
    record.thin = thin;
    record.states.reserve(static_cast<size_t>(n_steps / thin) + 2);
    record.resample_count =
        run_visit(domain, law, std::move(start), n_steps, rng,
                  [&](const WalkState& s) {
                      if (s.step_index % thin == 0) record.states.push_back(s);
                  });
    return record;
}

BoundaryHistogram empirical_boundary_density(const WalkRecord& record,
                                             const Domain& domain, int bins) {
    BoundaryHistogram out{stats::BinnedMeasure(bins), {}};
    for (const auto& s : record.states)
        out.histogram.add(domain.boundary_coord(s.position));
    const double n = out.histogram.total();
    // 99% two-sided Wilson intervals per cell.
    for (double c : out.histogram.counts())
        out.wilson.push_back(stats::wilson_interval(c, n, 2.5758293035489004));
    return out;
}

}  // namespace billiards
