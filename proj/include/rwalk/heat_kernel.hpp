#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "rwalk/lattice.hpp"

namespace rwalk {

enum class WalkKind { biased, drifted, reflected };

const char* walk_kind_name(WalkKind kind);
WalkKind parse_walk_kind(const std::string& name);

namespace detail {
struct KernelAccess;
}

// Resource limits for the exact computations. max_states bounds the dense
// DP grid, max_ops bounds the multiply-add count of the intersection series.
struct DpBudget {
    std::size_t max_states = 20'000'000;
    double max_ops = 4e9;
};

// Exact n-step distribution of a walk, held on the dense box
// [start - n, start + n]^d. There is no truncation: one step changes the
// l1 norm by one, so the box contains all of the mass.
class HeatKernel {
public:
    WalkKind kind() const { return kind_; }
    int dim() const { return d_; }
    double lambda() const { return lambda_; }
    int steps() const { return steps_; }
    const LatticePoint& start() const { return start_; }

    double mass(const LatticePoint& x) const;  // 0 outside the box
    double total_mass() const;
    double max_mass() const;

    // Visits every site with nonzero mass.
    void for_each_mass(const std::function<void(const LatticePoint&, double)>& fn) const;

    const std::vector<double>& cells() const { return cells_; }
    int box_radius() const { return steps_; }

private:
    friend struct detail::KernelAccess;

    WalkKind kind_ = WalkKind::biased;
    int d_ = 0;
    double lambda_ = 0;
    int steps_ = 0;
    LatticePoint start_;
    std::vector<std::int32_t> lo_;  // lowest coordinate per axis
    int width_ = 0;                 // cells per axis
    std::vector<double> cells_;
};

// Forward DP, OpenMP-parallel gather over destination sites. Deterministic
// regardless of worker count.
HeatKernel heat_kernel(WalkKind kind, const Lattice& lat, double lambda, int steps,
                       const LatticePoint& start, const DpBudget& budget = {});

// Serial scatter implementation kept as the reference for testing and for
// the benchmark target.
HeatKernel heat_kernel_reference(WalkKind kind, const Lattice& lat, double lambda, int steps,
                                 const LatticePoint& start, const DpBudget& budget = {});

// P(X_t = start) for t = 0..steps in one DP sweep.
std::vector<double> return_probabilities(WalkKind kind, const Lattice& lat, double lambda, int steps,
                                         const LatticePoint& start, const DpBudget& budget = {});

// Diagnostics for the return-probability decay of the biased walk from o.
struct RhoDiagRow {
    int n = 0;
    double p2n = 0;              // 2n-step return probability
    double root_estimate = 0;    // p2n^(1/2n)
    double corrected_ratio = 0;  // (p^(2n+2)/p^(2n)) ((n+1)/n)^(3d/2)
    double hk_ratio = 0;         // p2n rho^(-2n) n^(3d/2)
};

std::vector<RhoDiagRow> rho_diagnostics(int d, double lambda, int n_max, const DpBudget& budget = {});

// Exact values of sum_x p^(m)(o,x) p^(n)(o,x) for the drifted walk, for all
// m, n <= t_max. Computed by splitting the walk into its per-coordinate
// one-dimensional components (the coordinate choice is uniform, so the
// allocation of steps to coordinates is multinomial); this stays exact in
// any dimension without touching a d-dimensional grid.
class IntersectionSeries {
public:
    IntersectionSeries(int d, double lambda, int t_max, const DpBudget& budget = {});

    int t_max() const { return t_max_; }
    double pair_mass(int m, int n) const;    // sum_x p^(m)(o,x) p^(n)(o,x)
    double partial_sum(int m_max, int n_max) const;  // inclusive double sum

private:
    double& f2(int m, int n) { return table_[static_cast<std::size_t>(m) * (t_max_ + 1) + n]; }
    double f2v(int m, int n) const { return table_[static_cast<std::size_t>(m) * (t_max_ + 1) + n]; }

    int t_max_;
    std::vector<double> table_;
    std::vector<double> prefix_;
};

// Partial sum of the expected-intersection series, m <= M and n <= N.
double expected_intersections(int d, double lambda, int M, int N, const DpBudget& budget = {});

// Membership predicate for the concentration box (strict inequalities) and
// the CLT window (non-strict), both centered on the drift.
struct RegionSpec {
    enum class Kind { concentration_box, clt_window };

    Kind kind = Kind::concentration_box;
    int n = 0;
    double parameter = 0;  // eps for the box, sigma for the window
    int d = 0;
    double lambda = 0;

    double center() const;          // per-coordinate drift center
    double half_width() const;      // n^((1+eps)/2) resp. sigma sqrt(n)
    bool contains(const LatticePoint& x) const;
};

struct LltDiagnostics {
    double sup_scaled = 0;      // n^(d/2) max_x p^(n)(o,x)
    double box_min_scaled = 0;  // n^(d/2) min over admissible window points
    double tail_mass = 0;       // mass outside the concentration box
};

LltDiagnostics llt_diagnostics(int d, double lambda, int n, double sigma, double eps,
                               const DpBudget& budget = {});

} // namespace rwalk
