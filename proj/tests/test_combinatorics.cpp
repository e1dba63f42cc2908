#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwalk/combinatorics.hpp"
#include "rwalk/heat_kernel.hpp"
#include "rwalk/rng.hpp"

using namespace rwalk;

TEST_CASE("catalan numbers: closed form vs convolution recurrence") {
    CHECK(catalan(0) == 1);
    CHECK(catalan(3) == 5);
    CHECK(catalan(10) == 16796);

    std::vector<BigInt> rec{1};
    for (int l = 0; l < 36; ++l) {
        BigInt next = 0;
        for (int i = 0; i <= l; ++i) next += rec[static_cast<std::size_t>(i)] * rec[static_cast<std::size_t>(l - i)];
        rec.push_back(next);
        CHECK(catalan(l + 1) == next);
    }
    // the 64-bit range is long gone by l = 36
    CHECK(rec.back() > BigInt("18446744073709551615"));
}

TEST_CASE("catalan tail sum: worked values, monotone below one half") {
    CHECK(catalan_tail(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(catalan_tail(1) == doctest::Approx(0.3125).epsilon(1e-15));
    double prev = 0;
    for (int L = 0; L <= 120; ++L) {
        const double v = catalan_tail(L);
        CHECK(v > prev);
        CHECK(v < 0.5);
        prev = v;
    }
    CHECK(catalan_tail(100) > 0.45);
}

TEST_CASE("bridge counts: worked examples") {
    CHECK(count_bridges(1, 1, BridgeCountMode::brute) == 2);
    CHECK(count_bridges(1, 1, BridgeCountMode::excursion) == 2);
    CHECK(count_bridges(2, 2, BridgeCountMode::brute) == 4);
    CHECK(count_bridges(2, 2, BridgeCountMode::excursion) == 4);
    CHECK(count_bridges(1, 0, BridgeCountMode::brute) == 0);
    CHECK(count_bridges(1, 0, BridgeCountMode::excursion) == 0);
    CHECK_THROWS_AS(count_bridges(12, 3, BridgeCountMode::brute), BudgetError);
    CHECK_THROWS_AS(count_bridges(3, 4, BridgeCountMode::excursion), DomainError);
}

TEST_CASE("bridge counts: brute enumeration equals the excursion decomposition") {
    const auto table = bridge_count_table(9);
    for (int n = 0; n <= 9; ++n) {
        const auto brute = bridge_counts_brute(n);
        BigInt row_total = 0;
        for (int k = 0; k <= n; ++k) {
            CHECK(brute[static_cast<std::size_t>(k)] == table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
            row_total += brute[static_cast<std::size_t>(k)];
        }
        if (n >= 1) CHECK(row_total == binomial(2 * n, n));
    }
}

TEST_CASE("bridge counts: single-excursion row and big-n row sums") {
    const auto table = bridge_count_table(80);
    for (int n = 1; n <= 80; ++n) {
        CHECK(table[static_cast<std::size_t>(n)][1] == 2 * catalan(n - 1));
        BigInt row_total = 0;
        for (int k = 0; k <= n; ++k) row_total += table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
        CHECK(row_total == binomial(2 * n, n));
    }
}

TEST_CASE("bound constant: single data point and stability under larger sweeps") {
    CHECK(bnk_bound_constant(1) == doctest::Approx(0.5).epsilon(1e-15));
    const double c9 = bnk_bound_constant(9);
    CHECK(c9 >= 0.5);
    const double c60 = bnk_bound_constant(60);
    // once the early rows fix the constant, longer sweeps cannot lower it
    CHECK(c60 >= c9 - 1e-12);
    CHECK(std::isfinite(c60));
}

TEST_CASE("path probability: worked examples") {
    Lattice l2(2);
    const LatticePath two_step{origin(2), {1, 0}, origin(2)};
    const auto r = path_probability(l2, two_step, 0.5);
    CHECK(r.probability == doctest::Approx(1.0 / 28).epsilon(1e-14));
    CHECK(r.axial_hits == 2);  // both (1,0) and the final origin lie on the axial set
    CHECK(r.projected_hits == std::vector<long>{1, 0});

    const LatticePath one_step{origin(2), {1, 0}};
    const auto s = path_probability(l2, one_step, 0.7);
    CHECK(s.probability == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(s.projected_hits == std::vector<long>{0, 0});

    CHECK_THROWS_AS(path_probability(l2, {origin(2), {1, 1}}, 0.5), DomainError);
    CHECK_THROWS_AS(path_probability(l2, {{1, 0}, {0, 0}}, 0.5), DomainError);  // must start at o
    CHECK_THROWS_AS(path_probability(l2, {}, 0.5), DomainError);
}

namespace {

// Builds a closed path of length 2n by shuffling balanced per-coordinate
// moves; all such paths return to the origin.
LatticePath random_closed_path(CounterRng& rng, int d, int n) {
    std::vector<std::pair<int, int>> moves;  // (axis, sign)
    int placed = 0;
    for (int i = 0; i < d; ++i) {
        int pairs = (i == d - 1) ? n - placed : static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - placed) + 1));
        placed += pairs;
        for (int p = 0; p < pairs; ++p) {
            moves.emplace_back(i, +1);
            moves.emplace_back(i, -1);
        }
    }
    for (std::size_t i = moves.size(); i > 1; --i) {
        std::swap(moves[i - 1], moves[rng.next_below(i)]);
    }
    LatticePath path{origin(d)};
    for (const auto& [axis, sign] : moves) {
        LatticePoint next = path.back();
        next[axis] = static_cast<std::int32_t>(next[axis] + sign);
        path.push_back(std::move(next));
    }
    return path;
}

} // namespace

TEST_CASE("path probability: projected-hit inequality and the closed-path bound") {
    CounterRng rng(303);
    for (int d = 2; d <= 3; ++d) {
        Lattice lat(d);
        for (double lambda : {0.3, 0.6}) {
            const double eta = lat.derive_constants(lambda).axial_factor;
            const double step_scale = std::sqrt(lambda) / (d * (1.0 + lambda));
            for (int rep = 0; rep < 150; ++rep) {
                const int n = 1 + static_cast<int>(rng.next_below(8));
                const auto path = random_closed_path(rng, d, n);
                const auto r = path_probability(lat, path, lambda);
                long projected = 0;
                for (long h : r.projected_hits) projected += h;
                CHECK(r.axial_hits >= projected);
                const double bound = std::pow(eta, static_cast<double>(projected)) *
                                     std::pow(step_scale, 2.0 * n);
                CHECK(r.probability <= bound * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("exhaustive closed-path mass equals the kernel return probability") {
    // depth-first sweep over every closed path of length 2n in d=2
    Lattice l2(2);
    const double lambda = 0.5;
    for (int n = 1; n <= 4; ++n) {
        double total = 0;
        LatticePath path{origin(2)};
        std::vector<std::size_t> choice{0};
        while (!choice.empty()) {
            if (choice.size() == static_cast<std::size_t>(2 * n) + 1) {
                if (path.back() == origin(2)) total += path_probability(l2, path, lambda).probability;
                path.pop_back();
                choice.pop_back();
                if (!choice.empty()) ++choice.back();
                continue;
            }
            if (choice.back() >= 4) {
                path.pop_back();
                choice.pop_back();
                if (!choice.empty()) ++choice.back();
                continue;
            }
            const int axis = static_cast<int>(choice.back()) / 2;
            const int sign = (choice.back() % 2 == 0) ? 1 : -1;
            LatticePoint next = path.back();
            next[axis] = static_cast<std::int32_t>(next[axis] + sign);
            path.push_back(std::move(next));
            choice.push_back(0);
        }
        const auto hk = heat_kernel(WalkKind::biased, l2, lambda, 2 * n, origin(2));
        CHECK(total == doctest::Approx(hk.mass(origin(2))).epsilon(1e-10));
    }
}
