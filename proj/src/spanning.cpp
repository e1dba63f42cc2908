#include "rwalk/spanning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rwalk/parallel.hpp"
#include "rwalk/rng.hpp"

namespace rwalk {

WeightedGraph::WeightedGraph(int vertex_count) : vertex_count_(vertex_count) {
    if (vertex_count < 1) throw DomainError("WeightedGraph: need at least one vertex");
    incident_.resize(static_cast<std::size_t>(vertex_count));
}

int WeightedGraph::add_edge(int a, int b, double conductance, std::int64_t tag) {
    if (a < 0 || a >= vertex_count_ || b < 0 || b >= vertex_count_)
        throw DomainError("add_edge: endpoint out of range");
    if (a == b) throw DomainError("add_edge: self-loops are not allowed");
    if (!(conductance > 0.0)) throw DomainError("add_edge: conductance must be positive");
    const int idx = static_cast<int>(edges_.size());
    edges_.push_back(WeightedEdge{a, b, conductance, tag < 0 ? idx : tag});
    incident_[static_cast<std::size_t>(a)].push_back(idx);
    incident_[static_cast<std::size_t>(b)].push_back(idx);
    return idx;
}

int WeightedGraph::other_endpoint(int edge, int v) const {
    const auto& e = edges_[static_cast<std::size_t>(edge)];
    return e.a == v ? e.b : e.a;
}

bool WeightedGraph::is_connected() const {
    std::vector<char> seen(static_cast<std::size_t>(vertex_count_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int e : incident(v)) {
            const int w = other_endpoint(e, v);
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == vertex_count_;
}

const char* boundary_name(Boundary b) { return b == Boundary::wired ? "wired" : "free"; }

Boundary parse_boundary(const std::string& name) {
    if (name == "wired") return Boundary::wired;
    if (name == "free") return Boundary::free_boundary;
    throw DomainError("unknown boundary '" + name + "' (expected free or wired)");
}

BoxGraph build_box(int d, int n, double lambda, Boundary boundary) {
    if (d < 1) throw DomainError("build_box: d must be >= 1");
    if (n < 1) throw DomainError("build_box: n must be >= 1");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("build_box: lambda must lie in (0,1]");

    const int width = 2 * n + 1;
    std::size_t lattice_vertices = 1;
    for (int i = 0; i < d; ++i) {
        lattice_vertices *= static_cast<std::size_t>(width);
        if (lattice_vertices > 50'000'000) throw BudgetError("build_box: box too large");
    }

    BoxGraph box;
    box.d = d;
    box.n = n;
    box.lambda = lambda;
    box.boundary = boundary;

    const bool wired = boundary == Boundary::wired;
    const int total = static_cast<int>(lattice_vertices) + (wired ? 1 : 0);
    box.graph = WeightedGraph(total);
    box.root = wired ? total - 1 : -1;

    // vertex index: mixed radix over coordinates, axis 0 fastest
    box.points.reserve(lattice_vertices);
    {
        std::vector<int> idx(static_cast<std::size_t>(d), -n);
        while (true) {
            LatticePoint p = origin(d);
            for (int i = 0; i < d; ++i) p[i] = static_cast<std::int32_t>(idx[static_cast<std::size_t>(i)]);
            box.points.push_back(std::move(p));
            int axis = 0;
            while (axis < d && ++idx[static_cast<std::size_t>(axis)] > n) {
                idx[static_cast<std::size_t>(axis)] = -n;
                ++axis;
            }
            if (axis == d) break;
        }
    }
    auto vertex_index = [&](const LatticePoint& p) {
        std::size_t idx = 0, stride = 1;
        for (int i = 0; i < d; ++i) {
            idx += static_cast<std::size_t>(p[i] + n) * stride;
            stride *= static_cast<std::size_t>(width);
        }
        return static_cast<int>(idx);
    };

    // internal edges in deterministic (vertex, axis) order
    for (std::size_t v = 0; v < lattice_vertices; ++v) {
        const LatticePoint& p = box.points[v];
        for (int i = 0; i < d; ++i) {
            if (p[i] + 1 > n) continue;
            LatticePoint q = p;
            q[i] = static_cast<std::int32_t>(q[i] + 1);
            const long edge_norm = std::min(p.norm1(), q.norm1());
            box.graph.add_edge(static_cast<int>(v), vertex_index(q),
                               std::pow(lambda, -static_cast<double>(edge_norm)));
        }
    }
    if (wired) {
        // one parallel edge per crossing edge of the lattice
        for (std::size_t v = 0; v < lattice_vertices; ++v) {
            const LatticePoint& p = box.points[v];
            for (int i = 0; i < d; ++i) {
                for (int sgn : {+1, -1}) {
                    const long next = static_cast<long>(p[i]) + sgn;
                    if (next >= -n && next <= n) continue;
                    // the neighbor outside the box has l1 norm |p| + 1
                    box.graph.add_edge(static_cast<int>(v), box.root,
                                       std::pow(lambda, -static_cast<double>(p.norm1())));
                }
            }
        }
    }
    return box;
}

namespace {

// Reusable Wilson sampler: per-vertex cumulative conductance tables.
class WilsonSampler {
public:
    explicit WilsonSampler(const WeightedGraph& g) : g_(g) {
        const int n = g.vertex_count();
        cumulative_.resize(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            const auto& inc = g.incident(v);
            auto& cum = cumulative_[static_cast<std::size_t>(v)];
            cum.reserve(inc.size());
            double acc = 0.0;
            for (int e : inc) {
                acc += g.edges()[static_cast<std::size_t>(e)].conductance;
                cum.push_back(acc);
            }
        }
    }

    ForestSample sample(int root, std::uint64_t seed) const {
        const int n = g_.vertex_count();
        if (root < 0 || root >= n) throw DomainError("wilson_ust: root out of range");
        if (!g_.is_connected()) throw DomainError("wilson_ust: graph must be connected");

        CounterRng rng(seed);
        std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
        std::vector<int> exit_edge(static_cast<std::size_t>(n), -1);
        in_tree[static_cast<std::size_t>(root)] = 1;

        ForestSample out;
        out.root = root;
        out.seed = seed;
        for (int v0 = 0; v0 < n; ++v0) {
            if (in_tree[static_cast<std::size_t>(v0)]) continue;
            int v = v0;
            while (!in_tree[static_cast<std::size_t>(v)]) {
                const auto& cum = cumulative_[static_cast<std::size_t>(v)];
                const double u = rng.next_unit() * cum.back();
                const std::size_t pick = static_cast<std::size_t>(
                    std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
                const int e = g_.incident(v)[std::min(pick, cum.size() - 1)];
                exit_edge[static_cast<std::size_t>(v)] = e;  // overwriting erases loops
                v = g_.other_endpoint(e, v);
            }
            v = v0;
            while (!in_tree[static_cast<std::size_t>(v)]) {
                in_tree[static_cast<std::size_t>(v)] = 1;
                const int e = exit_edge[static_cast<std::size_t>(v)];
                out.edge_indices.push_back(e);
                v = g_.other_endpoint(e, v);
            }
        }
        std::sort(out.edge_indices.begin(), out.edge_indices.end());
        out.tags.reserve(out.edge_indices.size());
        for (int e : out.edge_indices) out.tags.push_back(g_.edges()[static_cast<std::size_t>(e)].tag);
        std::sort(out.tags.begin(), out.tags.end());
        return out;
    }

private:
    const WeightedGraph& g_;
    std::vector<std::vector<double>> cumulative_;
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

} // namespace

ForestSample wilson_ust(const WeightedGraph& g, int root, std::uint64_t seed) {
    return WilsonSampler(g).sample(root, seed);
}

TreeDistribution ust_exact(const WeightedGraph& g) {
    const int n = g.vertex_count();
    if (n > 8) throw BudgetError("ust_exact: enumeration is limited to 8 vertices (got " +
                                 std::to_string(n) + ")");
    const int m = static_cast<int>(g.edges().size());
    const int need = n - 1;
    if (need > m) throw DomainError("ust_exact: graph cannot be spanning");

    TreeDistribution dist;
    double total = 0.0;

    std::vector<int> pick(static_cast<std::size_t>(need));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        UnionFind uf(n);
        bool acyclic = true;
        double weight = 1.0;
        for (int e : pick) {
            const auto& edge = g.edges()[static_cast<std::size_t>(e)];
            if (!uf.unite(edge.a, edge.b)) { acyclic = false; break; }
            weight *= edge.conductance;
        }
        if (acyclic) {
            std::vector<std::int64_t> tags;
            tags.reserve(pick.size());
            for (int e : pick) tags.push_back(g.edges()[static_cast<std::size_t>(e)].tag);
            std::sort(tags.begin(), tags.end());
            dist.probability[std::move(tags)] += weight;
            total += weight;
        }
        // next combination
        int i = need - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - need + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < need; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    if (total == 0.0) throw DomainError("ust_exact: graph has no spanning tree");
    for (auto& [tags, w] : dist.probability) w /= total;
    return dist;
}

double wsf_z1_exact(double lambda, long i) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("wsf_z1_exact: lambda must lie in (0,1)");
    const long e = std::min(std::labs(i), std::labs(i - 1));
    return 0.5 * (1.0 - lambda) * std::pow(lambda, static_cast<double>(e));
}

std::vector<double> wsf_z1_finite_law(double lambda, int n) {
    if (n < 1) throw DomainError("wsf_z1_finite_law: n must be >= 1");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("wsf_z1_finite_law: lambda must lie in (0,1]");
    // resistances 1/c(e); internal edges i = -(n-1)..n, then the two boundary edges
    std::vector<double> r;
    r.reserve(static_cast<std::size_t>(2 * n + 2));
    for (long i = -(n - 1); i <= n; ++i) {
        const long e = std::min(std::labs(i), std::labs(i - 1));
        r.push_back(std::pow(lambda, static_cast<double>(e)));
    }
    r.push_back(std::pow(lambda, static_cast<double>(n)));  // B-
    r.push_back(std::pow(lambda, static_cast<double>(n)));  // B+
    const double total = std::accumulate(r.begin(), r.end(), 0.0);
    for (auto& v : r) v /= total;
    return r;
}

CutDistribution wsf_z1_sample(double lambda, int n, long trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("wsf_z1_sample: trials must be >= 1");
    const BoxGraph box = build_box(1, n, lambda, Boundary::wired);
    const int edge_count = static_cast<int>(box.graph.edges().size());
    const WilsonSampler sampler(box.graph);

    // outcome of a sample = the single edge missing from the tree
    std::vector<int> missing(static_cast<std::size_t>(trials), -1);
    #pragma omp parallel for schedule(dynamic, 64)
    for (long t = 0; t < trials; ++t) {
        const ForestSample f = sampler.sample(box.root, derive_stream_key(seed, static_cast<std::uint64_t>(t)));
        std::vector<char> used(static_cast<std::size_t>(edge_count), 0);
        for (int e : f.edge_indices) used[static_cast<std::size_t>(e)] = 1;
        for (int e = 0; e < edge_count; ++e) {
            if (!used[static_cast<std::size_t>(e)]) { missing[static_cast<std::size_t>(t)] = e; break; }
        }
    }

    // map edge index -> outcome label; build_box emits internal edges first
    // (vertex order -n..n, so edge j is {j-n-1+1, ...}), then B-, B+ is not
    // guaranteed, so classify through the endpoints instead.
    std::vector<std::string> label(static_cast<std::size_t>(edge_count));
    std::vector<long> order_key(static_cast<std::size_t>(edge_count));
    for (int e = 0; e < edge_count; ++e) {
        const auto& edge = box.graph.edges()[static_cast<std::size_t>(e)];
        const bool boundary = edge.a == box.root || edge.b == box.root;
        if (!boundary) {
            const long xa = box.points[static_cast<std::size_t>(edge.a)][0];
            const long xb = box.points[static_cast<std::size_t>(edge.b)][0];
            const long i = std::max(xa, xb);
            label[static_cast<std::size_t>(e)] = std::to_string(i);
            order_key[static_cast<std::size_t>(e)] = i;
        } else {
            const int lattice_end = edge.a == box.root ? edge.b : edge.a;
            const long x = box.points[static_cast<std::size_t>(lattice_end)][0];
            label[static_cast<std::size_t>(e)] = x < 0 ? "B-" : "B+";
            order_key[static_cast<std::size_t>(e)] = x < 0 ? n + 1 : n + 2;
        }
    }

    const std::vector<double> exact = [&] {
        // align the finite law with the edge order used here
        std::vector<double> law = wsf_z1_finite_law(lambda, n);
        std::vector<double> by_edge(static_cast<std::size_t>(edge_count), 0.0);
        for (int e = 0; e < edge_count; ++e) {
            const long key = order_key[static_cast<std::size_t>(e)];
            const std::size_t law_idx = key <= n ? static_cast<std::size_t>(key + n - 1)
                                                 : static_cast<std::size_t>(2 * n + (key - n - 1));
            by_edge[static_cast<std::size_t>(e)] = law[law_idx];
        }
        return by_edge;
    }();

    std::vector<long> counts(static_cast<std::size_t>(edge_count), 0);
    for (long t = 0; t < trials; ++t) ++counts[static_cast<std::size_t>(missing[static_cast<std::size_t>(t)])];

    std::vector<int> edge_order(static_cast<std::size_t>(edge_count));
    std::iota(edge_order.begin(), edge_order.end(), 0);
    std::sort(edge_order.begin(), edge_order.end(), [&](int a, int b) {
        return order_key[static_cast<std::size_t>(a)] < order_key[static_cast<std::size_t>(b)];
    });

    CutDistribution out;
    out.n = n;
    out.trials = trials;
    out.seed = seed;
    for (int e : edge_order) {
        CutDistribution::Row row;
        row.outcome = label[static_cast<std::size_t>(e)];
        row.count = counts[static_cast<std::size_t>(e)];
        row.frequency = static_cast<double>(row.count) / static_cast<double>(trials);
        row.exact = exact[static_cast<std::size_t>(e)];
        out.rows.push_back(std::move(row));
    }
    return out;
}

ForestStats forest_stats(const WeightedGraph& g, const ForestSample& sample) {
    if (sample.root < 0) throw DomainError("forest_stats: sample has no wired root");
    const int n = g.vertex_count();
    UnionFind uf(n);
    int root_degree = 0;
    for (int e : sample.edge_indices) {
        const auto& edge = g.edges()[static_cast<std::size_t>(e)];
        if (edge.a == sample.root || edge.b == sample.root) {
            ++root_degree;
            continue;
        }
        uf.unite(edge.a, edge.b);
    }
    std::map<int, int> size_by_root;
    for (int v = 0; v < n; ++v) {
        if (v == sample.root) continue;
        ++size_by_root[uf.find(v)];
    }
    ForestStats out;
    out.component_count = root_degree;
    for (const auto& [r, s] : size_by_root) out.component_sizes.push_back(s);
    std::sort(out.component_sizes.rbegin(), out.component_sizes.rend());
    return out;
}

TreeCountReport tree_count_estimate(int d, double lambda, long horizon, long trials,
                                    std::uint64_t master_seed) {
    if (d < 2) throw DomainError("tree_count_estimate: d must be >= 2");
    const Lattice lat(d);
    const long distance = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(horizon))));
    const int k_max = (1 << d) + 1;

    TreeCountReport out;
    out.horizon = horizon;
    out.trials = trials;
    out.master_seed = master_seed;
    out.lower_bound_k = 1;
    for (int k = 2; k <= k_max; ++k) {
        const auto starts = default_alpha_starts(d, k, distance);
        EstimatorReport rep = alpha_estimate(lat, lambda, k, horizon, trials, starts,
                                             derive_stream_key(master_seed, static_cast<std::uint64_t>(k)));
        const bool positive = rep.estimate - 2.576 * rep.std_error > 0.0;
        if (positive) out.lower_bound_k = k;
        out.alpha_table.emplace(k, std::move(rep));
    }
    return out;
}

} // namespace rwalk
