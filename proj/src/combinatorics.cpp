#include "rwalk/combinatorics.hpp"

#include <cmath>
#include <string>

#include "rwalk/parallel.hpp"

namespace rwalk {

BigInt binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigInt catalan(int ell) {
    if (ell < 0) throw DomainError("catalan: index must be >= 0");
    return binomial(2L * ell, ell) / (ell + 1);
}

double catalan_tail(int terms) {
    if (terms < 0) throw DomainError("catalan_tail: terms must be >= 0");
    // term recurrence: t_0 = 1/4, t_{l+1} = t_l * (2(2l+1)) / (4(l+2))
    double term = 0.25;
    double sum = term;
    for (int l = 0; l < terms; ++l) {
        term *= (2.0 * (2 * l + 1)) / (4.0 * (l + 2));
        sum += term;
    }
    return sum;
}

std::vector<BigInt> bridge_counts_brute(int n, int max_brute_n) {
    if (n < 0) throw DomainError("bridge_counts_brute: n must be >= 0");
    if (n > max_brute_n) {
        throw BudgetError("bridge_counts_brute: n=" + std::to_string(n) + " exceeds the brute budget of " +
                          std::to_string(max_brute_n) + " (4^n sequences)");
    }
    const int len = 2 * n;
    std::vector<BigInt> counts(static_cast<std::size_t>(n) + 1, 0);
    if (n == 0) return counts;  // the empty path has no zeros after time 0

    const std::uint64_t total = 1ULL << len;
    const int nthreads = std::max(1, max_workers());
    std::vector<std::vector<long>> shard(static_cast<std::size_t>(nthreads),
                                         std::vector<long>(static_cast<std::size_t>(n) + 1, 0));
    #pragma omp parallel num_threads(nthreads)
    {
        auto& local = shard[static_cast<std::size_t>(omp_get_thread_num())];
        #pragma omp for schedule(static)
        for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(total); ++mask) {
            int h = 0;
            int zeros = 0;
            for (int i = 0; i < len; ++i) {
                h += (mask >> i) & 1 ? 1 : -1;
                zeros += (h == 0);
            }
            // k = number of returns to zero after time 0 (the endpoint included)
            if (h == 0) ++local[static_cast<std::size_t>(zeros)];
        }
    }
    for (const auto& local : shard) {
        for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) counts[k] += local[k];
    }
    return counts;
}

std::vector<std::vector<BigInt>> bridge_count_table(int n_max) {
    if (n_max < 0) throw DomainError("bridge_count_table: n_max must be >= 0");
    // B[n][k] = sum over the first excursion length 2m of 2 C_{m-1} B[n-m][k-1]
    std::vector<BigInt> cat(static_cast<std::size_t>(n_max) + 1);
    for (int m = 0; m <= n_max; ++m) cat[static_cast<std::size_t>(m)] = catalan(m);

    std::vector<std::vector<BigInt>> table(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) table[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) + 1, 0);
    table[0][0] = 1;
    for (int n = 1; n <= n_max; ++n) {
        for (int k = 1; k <= n; ++k) {
            BigInt acc = 0;
            for (int m = 1; m <= n - (k - 1); ++m) {
                const BigInt& rest = table[static_cast<std::size_t>(n - m)][static_cast<std::size_t>(k - 1)];
                if (rest != 0) acc += 2 * cat[static_cast<std::size_t>(m - 1)] * rest;
            }
            table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = std::move(acc);
        }
    }
    return table;
}

BigInt count_bridges(int n, int k, BridgeCountMode mode, int max_brute_n) {
    if (n < 0 || k < 0 || k > n) throw DomainError("count_bridges: need 0 <= k <= n");
    if (mode == BridgeCountMode::brute) {
        return bridge_counts_brute(n, max_brute_n)[static_cast<std::size_t>(k)];
    }
    return bridge_count_table(n)[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

double bnk_bound_constant(const std::vector<std::vector<BigInt>>& table) {
    double c_min = 0.0;
    for (std::size_t n = 1; n < table.size(); ++n) {
        const double denom_n = std::pow(4.0, static_cast<double>(n));
        const double n32 = std::pow(static_cast<double>(n), 1.5);
        for (std::size_t k = 1; k <= n; ++k) {
            const double count = table[n][k].convert_to<double>();
            if (count == 0.0) continue;
            const double ratio = count * n32 / (std::pow(static_cast<double>(k), 2.5) * denom_n);
            if (ratio > c_min) c_min = ratio;
        }
    }
    return c_min;
}

double bnk_bound_constant(int n_max) {
    if (n_max < 1) throw DomainError("bnk_bound_constant: n_max must be >= 1");
    if (n_max > 250) throw BudgetError("bnk_bound_constant: n_max > 250 overflows the double ratio");
    return bnk_bound_constant(bridge_count_table(n_max));
}

PathProbability path_probability(const Lattice& lat, const LatticePath& path, double lambda) {
    if (path.empty()) throw DomainError("path_probability: path must be nonempty");
    lat.require_point(path.front());
    if (path.front().norm1() != 0) throw DomainError("path_probability: path must start at the origin");

    const int d = lat.dim();
    PathProbability out;
    out.probability = 1.0;
    out.projected_hits.assign(static_cast<std::size_t>(d), 0);

    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
        const LatticePoint& x = path[t];
        const LatticePoint& y = path[t + 1];
        lat.require_point(y);
        if (!lat.adjacent(x, y)) {
            throw DomainError("path_probability: vertices " + x.to_string() + " and " + y.to_string() +
                              " are not adjacent");
        }
        int moved = -1;
        for (int i = 0; i < d; ++i) {
            if (x[i] != y[i]) { moved = i; break; }
        }
        const int k = x.nonzero_coords();
        const double denom = 2.0 * d + (lambda - 1.0) * k;
        const bool inward = std::labs(static_cast<long>(y[moved])) < std::labs(static_cast<long>(x[moved]));
        out.probability *= (inward ? lambda : 1.0) / denom;
        if (y[moved] == 0) ++out.projected_hits[static_cast<std::size_t>(moved)];
        if (y.nonzero_coords() < d) ++out.axial_hits;
    }
    return out;
}

} // namespace rwalk
