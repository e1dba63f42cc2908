#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rwalk/heat_kernel.hpp"
#include "rwalk/lattice.hpp"
#include "rwalk/rng.hpp"

namespace rwalk {

struct Trajectory {
    WalkKind kind = WalkKind::biased;
    std::vector<LatticePoint> points;  // length = steps + 1
    std::uint64_t seed = 0;
};

// One walk, one stream. Reflected trajectories record the coordinate-wise
// absolute value of a biased walk, so they live in the closed first orthant.
Trajectory simulate(WalkKind kind, const Lattice& lat, double lambda, long steps,
                    const LatticePoint& start, std::uint64_t seed);

// A biased and a drifted walk driven by the same uniform stream. They take
// identical steps until the biased walk first touches the axial set.
std::pair<Trajectory, Trajectory> simulate_coupled(const Lattice& lat, double lambda, long steps,
                                                   const LatticePoint& start, std::uint64_t seed);

struct EstimatorReport {
    double estimate = 0;
    double std_error = 0;                 // sample standard deviation / sqrt(trials)
    std::vector<double> coord_estimate;   // empty for scalar estimators
    std::vector<double> coord_std_error;
    long trials = 0;
    long horizon = 0;
    std::uint64_t master_seed = 0;
};

// |X_n|/n against (1-lambda)/(1+lambda), with the per-coordinate vector
// |X_n^i|/n against (1-lambda)/(d(1+lambda)).
EstimatorReport speed_estimate(const Lattice& lat, double lambda, long steps, long trials,
                               std::uint64_t master_seed);

struct VisitSummary {
    std::map<long, long> histogram;  // axial-visit count -> number of trials
    double saturation = 0;           // trials whose last visit falls in the first half
    long trials = 0;
    long horizon = 0;
    std::uint64_t master_seed = 0;
};

VisitSummary axial_visit_stats(const Lattice& lat, double lambda, long horizon, long trials,
                               std::uint64_t master_seed);
VisitSummary axial_visit_stats(const Lattice& lat, double lambda, long horizon, long trials,
                               std::uint64_t master_seed, const LatticePoint& start);

// Total-variation distance between two normalized count histograms.
double total_variation(const std::map<long, long>& a, const std::map<long, long>& b);

enum class IntersectionCount {
    shared_points,      // distinct lattice points visited by both walks
    coincidence_pairs,  // number of time pairs (m, n) with equal positions
};

struct IntersectionSummary {
    std::vector<long> per_trial;  // sorted ascending
    double median = 0;
    long trials = 0;
    long horizon = 0;
    std::uint64_t master_seed = 0;
};

IntersectionSummary intersection_stats(WalkKind kind, const Lattice& lat, double lambda, long horizon,
                                       long trials, const std::pair<LatticePoint, LatticePoint>& starts,
                                       std::uint64_t master_seed,
                                       IntersectionCount counting = IntersectionCount::shared_points);

// Probability that k independent biased walks have pairwise-disjoint ranges
// up to the horizon. Always an upper bound for the infinite-horizon value,
// and nonincreasing in the horizon for a fixed master seed.
EstimatorReport alpha_estimate(const Lattice& lat, double lambda, int k, long horizon, long trials,
                               const std::vector<LatticePoint>& starts, std::uint64_t master_seed);

// Orthant-center placement used by the tree-count scan: the first 2^d starts
// sit at the orthant centers at l1 distance about `distance`; later starts
// reuse orthants at doubled distance.
std::vector<LatticePoint> default_alpha_starts(int d, int k, long distance);

// Fraction of walks back at the start after n steps; cross-checks the DP.
EstimatorReport empirical_return(const Lattice& lat, double lambda, long n, long trials,
                                 std::uint64_t master_seed);

} // namespace rwalk
