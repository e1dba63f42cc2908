#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rwalk/lattice.hpp"

namespace rwalk {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(long n, long k);

// Catalan number C_l = binom(2l, l) / (l + 1), exact.
BigInt catalan(int ell);

// Partial sum of C_l / 4^(l+1) for l = 0..terms; increases strictly to 1/2.
double catalan_tail(int terms);

enum class BridgeCountMode { brute, excursion };

// Number of length-2n +-1 bridges that return to zero exactly k times after
// the start (so the bridge holds k+1 zeros counting its endpoint). The brute
// mode enumerates all 4^n step sequences; the excursion mode multiplies
// signed-excursion counts over compositions of n, which agrees exactly.
BigInt count_bridges(int n, int k, BridgeCountMode mode, int max_brute_n = 11);

// Full table B[n][k] for n <= n_max via the excursion decomposition.
std::vector<std::vector<BigInt>> bridge_count_table(int n_max);

// Brute-force row B[n][0..n] by enumerating the 4^n step sequences.
std::vector<BigInt> bridge_counts_brute(int n, int max_brute_n = 11);

// Smallest c with |B(n,k)| <= c k^(5/2) 4^n / n^(3/2) over 1 <= k <= n <= n_max.
double bnk_bound_constant(int n_max);
double bnk_bound_constant(const std::vector<std::vector<BigInt>>& table);

using LatticePath = std::vector<LatticePoint>;

struct PathProbability {
    double probability = 0;            // product of one-step kernel factors
    long axial_hits = 0;               // visits to the axial set after time 0
    std::vector<long> projected_hits;  // per coordinate, zero-hits of the reduced path
};

// Walk probability of a concrete path under the biased kernel, plus the
// axial-hit counts of the path and of its per-coordinate reductions
// (projections with null moves deleted).
PathProbability path_probability(const Lattice& lat, const LatticePath& path, double lambda);

} // namespace rwalk
