#pragma once

#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/reflection.hpp"
#include "billiards/rng.hpp"

namespace billiards {

// Unordered boundary-to-boundary segment; endpoints stored in a canonical
// (lexicographic) order so equal chords compare equal.
struct Chord {
    BoundaryPoint a;
    BoundaryPoint b;
    double length = 0.0;
};

Chord make_chord(const BoundaryPoint& p, const BoundaryPoint& q);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    long n = 0;
};

// Random chord: uniform boundary point plus a reflection-law direction.
// With the cosine law the unordered pair has the symmetric chord density.
Chord sample_chord(const Domain& domain, const ReflectionLaw& law, Rng& rng);

// Monte Carlo mean chord length.
Estimate mean_chord(const Domain& domain, const ReflectionLaw& law, long n, Rng& rng);

// Volume-to-surface ratio implied by a mean-chord estimate.
Estimate volume_to_surface(const Estimate& mean_chord_estimate, int dim);

// Mean length of chord intersections with a region union (occupation form
// of the chord identity).
struct ChordRegionBall {
    Vec center;
    double radius = 1.0;
};
Estimate mean_chord_occupation(const Domain& domain, const ReflectionLaw& law,
                               const std::vector<ChordRegionBall>& regions, long n,
                               Rng& rng);

// Trace of a chord of the outer domain on a subdomain: the ordered visits.
struct InducedChordSet {
    std::vector<Chord> pieces;
    int count = 0;
};
InducedChordSet induced_chords(const Chord& chord, const Domain& subdomain);

struct InducedChordStats {
    Estimate hit_probability;   // P(chord meets the subdomain)
    Estimate mean_piece_count;  // E[number of pieces]
    std::vector<double> piece_lengths;
    long n = 0;
};
// Samples n chords of `domain` and accumulates the induced statistics on
// `subdomain` (which must lie inside `domain`); keeps at most
// max_piece_samples piece lengths for distribution tests.
InducedChordStats induced_chord_statistics(const Domain& domain,
                                           const ReflectionLaw& law,
                                           const Domain& subdomain, long n, Rng& rng,
                                           long max_piece_samples = 200000);

// The three classical random-chord constructions on a disk, reported as
// P(length > sqrt(3) r): 1 = uniform endpoint pair, 2 = uniform point on a
// random radius (chord perpendicular to it), 3 = uniform interior midpoint.
double bertrand_exact(int method);
double bertrand_length_sample(int method, double radius, Rng& rng);
Estimate bertrand_probability(const Domain& disk, int method, long n, Rng& rng);

// CDF of the method-2 chord length on a disk of the given radius; the
// boundary-plus-cosine construction has the same length law.
double radius_method_length_cdf(double length, double radius);

// Length histogram of chords under the interior (position, direction)
// construction, importance-weighted back to the chord law: draws (x, v)
// uniform on domain x sphere and weights each chord by 1/length,
// self-normalized. Cells partition [0, max_len).
std::vector<double> interior_construction_length_hist(const Domain& domain, int bins,
                                                      double max_len, long n,
                                                      Rng& rng);

}  // namespace billiards
