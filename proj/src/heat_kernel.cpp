#include "rwalk/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "rwalk/parallel.hpp"

namespace rwalk {

const char* walk_kind_name(WalkKind kind) {
    switch (kind) {
        case WalkKind::biased: return "biased";
        case WalkKind::drifted: return "drifted";
        case WalkKind::reflected: return "reflected";
    }
    return "?";
}

WalkKind parse_walk_kind(const std::string& name) {
    if (name == "biased") return WalkKind::biased;
    if (name == "drifted") return WalkKind::drifted;
    if (name == "reflected") return WalkKind::reflected;
    throw DomainError("unknown walk kind '" + name + "'");
}

namespace detail {
struct KernelAccess {
    static HeatKernel make(WalkKind kind, int d, double lambda, int steps, LatticePoint start,
                           std::vector<std::int32_t> lo, int width, std::vector<double> cells) {
        HeatKernel hk;
        hk.kind_ = kind;
        hk.d_ = d;
        hk.lambda_ = lambda;
        hk.steps_ = steps;
        hk.start_ = std::move(start);
        hk.lo_ = std::move(lo);
        hk.width_ = width;
        hk.cells_ = std::move(cells);
        return hk;
    }
};
} // namespace detail

namespace {

void validate_kernel_args(WalkKind kind, double lambda, int steps) {
    if (steps < 0) throw DomainError("heat_kernel: steps must be >= 0");
    if (kind == WalkKind::reflected) throw DomainError("heat_kernel: kind must be biased or drifted");
    if (kind == WalkKind::biased) {
        if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("heat_kernel: biased kernel needs lambda in (0,1]");
    } else {
        if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("heat_kernel: drifted kernel needs lambda in (0,1)");
    }
}

// Shared grid state for the DP sweeps.
struct Grid {
    int d;
    int width;
    std::vector<std::int32_t> lo;
    std::vector<std::size_t> stride;
    std::size_t size;

    Grid(const Lattice& lat, const LatticePoint& start, int steps, const DpBudget& budget) {
        d = lat.dim();
        width = 2 * steps + 1;
        lo.resize(static_cast<std::size_t>(d));
        stride.resize(static_cast<std::size_t>(d));
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) {
            lo[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(start[i] - steps);
            stride[static_cast<std::size_t>(i)] = total;
            if (total > budget.max_states / static_cast<std::size_t>(width) + 1) total = budget.max_states + 1;
            else total *= static_cast<std::size_t>(width);
        }
        size = total;
        if (size > budget.max_states) {
            throw BudgetError("heat_kernel: dense grid for d=" + std::to_string(d) + ", n=" +
                              std::to_string(steps) + " needs " + std::to_string(size) +
                              " states, over the budget of " + std::to_string(budget.max_states));
        }
    }

    void decode(std::size_t idx, std::int32_t* x) const {
        for (int i = 0; i < d; ++i) {
            x[i] = lo[static_cast<std::size_t>(i)] + static_cast<std::int32_t>(idx % static_cast<std::size_t>(width));
            idx /= static_cast<std::size_t>(width);
        }
    }

    std::size_t encode(const std::int32_t* x) const {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i) {
            idx += static_cast<std::size_t>(x[i] - lo[static_cast<std::size_t>(i)]) * stride[static_cast<std::size_t>(i)];
        }
        return idx;
    }
};

// One parallel gather step: dst(y) = sum over neighbors x of mass(x) p(x,y).
void step_gather(const Grid& g, WalkKind kind, double lambda, const std::vector<double>& src,
                 std::vector<double>& dst) {
    const int d = g.d;
    const int width = g.width;
    const double drift_denom = d * (1.0 + lambda);

    #pragma omp parallel
    {
        std::vector<std::int32_t> xbuf(static_cast<std::size_t>(d));
        std::int32_t* x = xbuf.data();
        #pragma omp for schedule(static)
        for (std::ptrdiff_t yi = 0; yi < static_cast<std::ptrdiff_t>(g.size); ++yi) {
            g.decode(static_cast<std::size_t>(yi), x);
            double acc = 0.0;
            // source x' = y -+ e_i; fixed axis/sign order keeps sums deterministic
            for (int i = 0; i < d; ++i) {
                const std::int32_t yc = x[i];
                const std::ptrdiff_t stride_i = static_cast<std::ptrdiff_t>(g.stride[static_cast<std::size_t>(i)]);
                for (int sgn : {+1, -1}) {
                    const std::int32_t xc = static_cast<std::int32_t>(yc - sgn);
                    if (xc < g.lo[static_cast<std::size_t>(i)] ||
                        xc >= g.lo[static_cast<std::size_t>(i)] + width) continue;
                    const std::ptrdiff_t xi_idx = yi - (sgn > 0 ? stride_i : -stride_i);
                    const double m = src[static_cast<std::size_t>(xi_idx)];
                    if (m == 0.0) continue;
                    if (kind == WalkKind::drifted) {
                        acc += m * ((sgn > 0 ? 1.0 : lambda) / drift_denom);
                    } else {
                        // nonzero count at the source, reusing y's coordinates
                        int nnz = 0;
                        for (int j = 0; j < d; ++j) nnz += ((j == i ? xc : x[j]) != 0);
                        const bool inward = std::abs(yc) < std::abs(xc);
                        const double denom = 2.0 * d + (lambda - 1.0) * nnz;
                        acc += m * ((inward ? lambda : 1.0) / denom);
                    }
                }
            }
            dst[static_cast<std::size_t>(yi)] = acc;
        }
    }
}

// Serial scatter reference: push each site's mass onto its neighbors.
void step_scatter(const Grid& g, WalkKind kind, double lambda, const std::vector<double>& src,
                  std::vector<double>& dst) {
    const int d = g.d;
    const int width = g.width;
    const double drift_denom = d * (1.0 + lambda);
    std::fill(dst.begin(), dst.end(), 0.0);

    std::vector<std::int32_t> xbuf(static_cast<std::size_t>(d));
    std::int32_t* x = xbuf.data();
    for (std::size_t xi = 0; xi < g.size; ++xi) {
        const double m = src[xi];
        if (m == 0.0) continue;
        g.decode(xi, x);
        int nnz = 0;
        for (int j = 0; j < d; ++j) nnz += (x[j] != 0);
        const double denom = kind == WalkKind::drifted ? drift_denom : 2.0 * d + (lambda - 1.0) * nnz;
        for (int i = 0; i < d; ++i) {
            for (int sgn : {+1, -1}) {
                const std::int32_t yc = static_cast<std::int32_t>(x[i] + sgn);
                if (yc < g.lo[static_cast<std::size_t>(i)] ||
                    yc >= g.lo[static_cast<std::size_t>(i)] + width) continue;
                double w;
                if (kind == WalkKind::drifted) {
                    w = (sgn > 0 ? 1.0 : lambda) / denom;
                } else {
                    const bool inward = std::abs(yc) < std::abs(x[i]);
                    w = (inward ? lambda : 1.0) / denom;
                }
                const std::ptrdiff_t yi = static_cast<std::ptrdiff_t>(xi) +
                    (sgn > 0 ? +1 : -1) * static_cast<std::ptrdiff_t>(g.stride[static_cast<std::size_t>(i)]);
                dst[static_cast<std::size_t>(yi)] += m * w;
            }
        }
    }
}

HeatKernel run_dp(WalkKind kind, const Lattice& lat, double lambda, int steps,
                  const LatticePoint& start, const DpBudget& budget, bool parallel,
                  std::vector<double>* return_series) {
    validate_kernel_args(kind, lambda, steps);
    lat.require_point(start);

    Grid g(lat, start, steps, budget);
    std::vector<double> cur(g.size, 0.0), nxt(g.size, 0.0);
    const std::size_t start_idx = g.encode(start.coords.data());
    cur[start_idx] = 1.0;
    if (return_series) {
        return_series->clear();
        return_series->push_back(1.0);
    }

    for (int t = 0; t < steps; ++t) {
        if (parallel) step_gather(g, kind, lambda, cur, nxt);
        else step_scatter(g, kind, lambda, cur, nxt);
        cur.swap(nxt);
        if (return_series) return_series->push_back(cur[start_idx]);
    }

    return detail::KernelAccess::make(kind, lat.dim(), lambda, steps, start, g.lo, g.width,
                                      std::move(cur));
}

} // namespace

double HeatKernel::mass(const LatticePoint& x) const {
    if (x.dim() != d_) throw DomainError("HeatKernel::mass: dimension mismatch");
    std::size_t idx = 0, stride = 1;
    for (int i = 0; i < d_; ++i) {
        const std::int32_t off = x[i] - lo_[static_cast<std::size_t>(i)];
        if (off < 0 || off >= width_) return 0.0;
        idx += static_cast<std::size_t>(off) * stride;
        stride *= static_cast<std::size_t>(width_);
    }
    return cells_[idx];
}

double HeatKernel::total_mass() const {
    double s = 0.0;
    for (double v : cells_) s += v;
    return s;
}

double HeatKernel::max_mass() const {
    double m = 0.0;
    for (double v : cells_) m = std::max(m, v);
    return m;
}

void HeatKernel::for_each_mass(const std::function<void(const LatticePoint&, double)>& fn) const {
    LatticePoint p = start_;
    for (std::size_t idx = 0; idx < cells_.size(); ++idx) {
        if (cells_[idx] == 0.0) continue;
        std::size_t rest = idx;
        for (int i = 0; i < d_; ++i) {
            p[i] = lo_[static_cast<std::size_t>(i)] + static_cast<std::int32_t>(rest % static_cast<std::size_t>(width_));
            rest /= static_cast<std::size_t>(width_);
        }
        fn(p, cells_[idx]);
    }
}

HeatKernel heat_kernel(WalkKind kind, const Lattice& lat, double lambda, int steps,
                       const LatticePoint& start, const DpBudget& budget) {
    return run_dp(kind, lat, lambda, steps, start, budget, true, nullptr);
}

HeatKernel heat_kernel_reference(WalkKind kind, const Lattice& lat, double lambda, int steps,
                                 const LatticePoint& start, const DpBudget& budget) {
    return run_dp(kind, lat, lambda, steps, start, budget, false, nullptr);
}

std::vector<double> return_probabilities(WalkKind kind, const Lattice& lat, double lambda, int steps,
                                         const LatticePoint& start, const DpBudget& budget) {
    std::vector<double> series;
    run_dp(kind, lat, lambda, steps, start, budget, true, &series);
    return series;
}

std::vector<RhoDiagRow> rho_diagnostics(int d, double lambda, int n_max, const DpBudget& budget) {
    if (n_max < 2) throw DomainError("rho_diagnostics: n_max must be >= 2");
    const Lattice lat(d);
    const double rho = spectral_radius(lambda);
    const auto series = return_probabilities(WalkKind::biased, lat, lambda, 2 * (n_max + 1), origin(d), budget);

    std::vector<RhoDiagRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        RhoDiagRow r;
        r.n = n;
        r.p2n = series[static_cast<std::size_t>(2 * n)];
        r.root_estimate = std::pow(r.p2n, 1.0 / (2.0 * n));
        const double next = series[static_cast<std::size_t>(2 * n + 2)];
        r.corrected_ratio = (next / r.p2n) * std::pow((n + 1.0) / n, 1.5 * d);
        r.hk_ratio = r.p2n * std::pow(rho, -2.0 * n) * std::pow(static_cast<double>(n), 1.5 * d);
        rows.push_back(r);
    }
    return rows;
}

IntersectionSeries::IntersectionSeries(int d, double lambda, int t_max, const DpBudget& budget)
    : t_max_(t_max) {
    if (d < 1) throw DomainError("IntersectionSeries: d must be >= 1");
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("IntersectionSeries: lambda must lie in (0,1)");
    if (t_max < 0) throw DomainError("IntersectionSeries: t_max must be >= 0");

    const double t1 = t_max + 1.0;
    const double ops = (d > 1 ? (d - 1) * t1 * t1 * t1 * t1 / 8.0 : t1 * t1);
    if (ops > budget.max_ops) {
        throw BudgetError("IntersectionSeries: d=" + std::to_string(d) + ", t_max=" + std::to_string(t_max) +
                          " needs about " + std::to_string(ops) + " operations, over the budget");
    }

    const int T = t_max;
    const double u = 1.0 / (1.0 + lambda);  // up-step probability of one coordinate
    const double v = lambda / (1.0 + lambda);

    // One-dimensional kernels q[k][j+k] = P(k-step +-1 walk at j).
    std::vector<std::vector<double>> q(static_cast<std::size_t>(T) + 1);
    q[0] = {1.0};
    for (int k = 1; k <= T; ++k) {
        const auto& prev = q[static_cast<std::size_t>(k - 1)];
        auto& cur = q[static_cast<std::size_t>(k)];
        cur.assign(static_cast<std::size_t>(2 * k + 1), 0.0);
        for (int j = 0; j < 2 * k - 1; ++j) {
            const double m = prev[static_cast<std::size_t>(j)];
            if (m == 0.0) continue;
            cur[static_cast<std::size_t>(j + 2)] += m * u;
            cur[static_cast<std::size_t>(j)] += m * v;
        }
    }

    // Overlaps G(k,l) = sum_j q_k(j) q_l(j); zero unless k = l mod 2.
    std::vector<double> overlap(static_cast<std::size_t>(T + 1) * (T + 1), 0.0);
    #pragma omp parallel for schedule(dynamic, 4)
    for (int k = 0; k <= T; ++k) {
        for (int l = k; l <= T; l += 2) {
            double s = 0.0;
            // positions j run over the support of the shorter walk
            for (int j = -k; j <= k; ++j) {
                if (std::abs(j) > l) continue;
                s += q[static_cast<std::size_t>(k)][static_cast<std::size_t>(j + k)] *
                     q[static_cast<std::size_t>(l)][static_cast<std::size_t>(j + l)];
            }
            overlap[static_cast<std::size_t>(k) * (T + 1) + l] = s;
            overlap[static_cast<std::size_t>(l) * (T + 1) + k] = s;
        }
    }

    // Allocation DP across coordinates. With r coordinates remaining and
    // (s, t) steps left in each walk, the first coordinate takes
    // Binomial(s, 1/r) x Binomial(t, 1/r) of them.
    std::vector<double> cur = overlap;  // r = 1
    std::vector<double> nxt(cur.size(), 0.0);
    for (int r = 2; r <= d; ++r) {
        const double p = 1.0 / r;
        // pmf rows: binom[s*(T+1)+k] = P(Bin(s, 1/r) = k)
        std::vector<double> binom(static_cast<std::size_t>(T + 1) * (T + 1), 0.0);
        for (int s = 0; s <= T; ++s) {
            double b = std::pow(1.0 - p, s);
            for (int k = 0; k <= s; ++k) {
                binom[static_cast<std::size_t>(s) * (T + 1) + k] = b;
                b *= (static_cast<double>(s - k) / (k + 1)) * (p / (1.0 - p));
            }
        }

        #pragma omp parallel for collapse(2) schedule(dynamic, 4)
        for (int s = 0; s <= T; ++s) {
            for (int t = 0; t <= T; ++t) {
                if (((s + t) & 1) != 0) { nxt[static_cast<std::size_t>(s) * (T + 1) + t] = 0.0; continue; }
                double acc = 0.0;
                const double* bs = &binom[static_cast<std::size_t>(s) * (T + 1)];
                const double* bt = &binom[static_cast<std::size_t>(t) * (T + 1)];
                for (int k = 0; k <= s; ++k) {
                    const double wk = bs[k];
                    if (wk == 0.0) continue;
                    const double* grow = &overlap[static_cast<std::size_t>(k) * (T + 1)];
                    const double* crow = &cur[static_cast<std::size_t>(s - k) * (T + 1)];
                    // parity: need k + l even given s + t even
                    double inner = 0.0;
                    for (int l = (k & 1); l <= t; l += 2) {
                        inner += bt[l] * grow[l] * crow[t - l];
                    }
                    acc += wk * inner;
                }
                nxt[static_cast<std::size_t>(s) * (T + 1) + t] = acc;
            }
        }
        cur.swap(nxt);
    }
    table_ = std::move(cur);

    // Inclusive 2-D prefix sums for partial_sum.
    prefix_.assign(static_cast<std::size_t>(T + 1) * (T + 1), 0.0);
    for (int m = 0; m <= T; ++m) {
        double row = 0.0;
        for (int n = 0; n <= T; ++n) {
            row += f2v(m, n);
            prefix_[static_cast<std::size_t>(m) * (T + 1) + n] =
                row + (m > 0 ? prefix_[static_cast<std::size_t>(m - 1) * (T + 1) + n] : 0.0);
        }
    }
}

double IntersectionSeries::pair_mass(int m, int n) const {
    if (m < 0 || n < 0 || m > t_max_ || n > t_max_) throw DomainError("pair_mass: index out of range");
    return f2v(m, n);
}

double IntersectionSeries::partial_sum(int m_max, int n_max) const {
    if (m_max < 0 || n_max < 0 || m_max > t_max_ || n_max > t_max_)
        throw DomainError("partial_sum: index out of range");
    return prefix_[static_cast<std::size_t>(m_max) * (t_max_ + 1) + n_max];
}

double expected_intersections(int d, double lambda, int M, int N, const DpBudget& budget) {
    if (M < 0 || N < 0) throw DomainError("expected_intersections: M, N must be >= 0");
    IntersectionSeries series(d, lambda, std::max(M, N), budget);
    return series.partial_sum(M, N);
}

double RegionSpec::center() const { return n * (1.0 - lambda) / (d * (1.0 + lambda)); }

double RegionSpec::half_width() const {
    if (kind == Kind::concentration_box) return std::pow(static_cast<double>(n), (1.0 + parameter) / 2.0);
    return parameter * std::sqrt(static_cast<double>(n));
}

bool RegionSpec::contains(const LatticePoint& x) const {
    if (x.dim() != d) throw DomainError("RegionSpec::contains: dimension mismatch");
    const double c = center();
    const double h = half_width();
    for (int i = 0; i < d; ++i) {
        const double dev = std::abs(x[i] - c);
        if (kind == Kind::concentration_box ? !(dev < h) : !(dev <= h)) return false;
    }
    return true;
}

LltDiagnostics llt_diagnostics(int d, double lambda, int n, double sigma, double eps,
                               const DpBudget& budget) {
    if (n < 1) throw DomainError("llt_diagnostics: n must be >= 1");
    const Lattice lat(d);
    const HeatKernel hk = heat_kernel(WalkKind::drifted, lat, lambda, n, origin(d), budget);

    const RegionSpec box{RegionSpec::Kind::concentration_box, n, eps, d, lambda};
    const RegionSpec window{RegionSpec::Kind::clt_window, n, sigma, d, lambda};
    const double scale = std::pow(static_cast<double>(n), d / 2.0);

    LltDiagnostics out;
    out.sup_scaled = scale * hk.max_mass();

    double tail = 0.0;
    double window_min = -1.0;
    hk.for_each_mass([&](const LatticePoint& x, double m) {
        if (!box.contains(x)) tail += m;
    });
    // The window is tiny; scan its integer bounding box directly so that
    // parity-admissible sites with zero mass are still considered.
    {
        const double c = window.center();
        const double h = window.half_width();
        const long lo = static_cast<long>(std::ceil(c - h));
        const long hi = static_cast<long>(std::floor(c + h));
        if (lo <= hi) {
            std::vector<long> idx(static_cast<std::size_t>(d), lo);
            while (true) {
                LatticePoint x = origin(d);
                long norm = 0;
                for (int i = 0; i < d; ++i) {
                    x[i] = static_cast<std::int32_t>(idx[static_cast<std::size_t>(i)]);
                    norm += std::labs(idx[static_cast<std::size_t>(i)]);
                }
                if ((norm + n) % 2 == 0) {
                    const double m = hk.mass(x);
                    if (window_min < 0.0 || m < window_min) window_min = m;
                }
                int axis = 0;
                while (axis < d && ++idx[static_cast<std::size_t>(axis)] > hi) {
                    idx[static_cast<std::size_t>(axis)] = lo;
                    ++axis;
                }
                if (axis == d) break;
            }
        }
    }
    if (window_min < 0.0) {
        throw EmptyRegionError("llt_diagnostics: no parity-admissible point in the window (n=" +
                               std::to_string(n) + ", sigma=" + std::to_string(sigma) + ")");
    }
    out.box_min_scaled = scale * window_min;
    out.tail_mass = tail;
    return out;
}

} // namespace rwalk
