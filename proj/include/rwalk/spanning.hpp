#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rwalk/lattice.hpp"
#include "rwalk/monte_carlo.hpp"

namespace rwalk {

struct WeightedEdge {
    int a = 0;
    int b = 0;
    double conductance = 1.0;
    std::int64_t tag = -1;  // identity; parallel edges carry distinct tags
};

// Finite connected multigraph with positive edge conductances.
class WeightedGraph {
public:
    explicit WeightedGraph(int vertex_count);

    // Returns the edge index; the default tag is the index itself.
    int add_edge(int a, int b, double conductance, std::int64_t tag = -1);

    int vertex_count() const { return vertex_count_; }
    const std::vector<WeightedEdge>& edges() const { return edges_; }
    const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }
    int other_endpoint(int edge, int v) const;
    bool is_connected() const;

private:
    int vertex_count_;
    std::vector<WeightedEdge> edges_;
    std::vector<std::vector<int>> incident_;
};

enum class Boundary { free_boundary, wired };

const char* boundary_name(Boundary b);
Boundary parse_boundary(const std::string& name);

// Box [-n, n]^d with conductances lambda^(-|e|), |e| = min endpoint norm.
// Wired boxes glue everything outside into one extra vertex; each crossing
// edge is kept as its own parallel edge.
struct BoxGraph {
    WeightedGraph graph{1};
    int d = 0;
    int n = 0;
    double lambda = 1.0;
    Boundary boundary = Boundary::free_boundary;
    int root = -1;                    // wired vertex index, -1 for free boxes
    std::vector<LatticePoint> points; // labels for the lattice vertices
};

BoxGraph build_box(int d, int n, double lambda, Boundary boundary);

struct ForestSample {
    std::vector<int> edge_indices;      // sorted
    std::vector<std::int64_t> tags;     // sorted
    int root = -1;
    std::uint64_t seed = 0;
};

// Spanning tree with probability proportional to the product of edge
// conductances, sampled by loop-erased random walks toward the root.
ForestSample wilson_ust(const WeightedGraph& g, int root, std::uint64_t seed);

struct TreeDistribution {
    // sorted tag list of each spanning tree -> exact probability
    std::map<std::vector<std::int64_t>, double> probability;
};

// Brute-force oracle by enumeration; limited to 8 vertices.
TreeDistribution ust_exact(const WeightedGraph& g);

// Limit law of the cut position in the wired one-dimensional forest:
// P[cut between i-1 and i] = (1-lambda) lambda^(min(|i|,|i-1|)) / 2.
double wsf_z1_exact(double lambda, long i);

struct CutDistribution {
    struct Row {
        std::string outcome;  // "i" for the edge {i-1,i}, "B-"/"B+" for boundary edges
        long count = 0;
        double frequency = 0;
        double exact = 0;     // finite-n law
    };
    std::vector<Row> rows;
    int n = 0;
    long trials = 0;
    std::uint64_t seed = 0;
};

// Exact finite-n cut law on the wired cycle, aligned with CutDistribution
// rows: internal edges i = -(n-1)..n, then B-, B+.
std::vector<double> wsf_z1_finite_law(double lambda, int n);

// Sample the wired cycle UST repeatedly and read off the deleted edge.
CutDistribution wsf_z1_sample(double lambda, int n, long trials, std::uint64_t seed);

struct ForestStats {
    int component_count = 0;
    std::vector<int> component_sizes;  // sorted descending
};

// Components of the sampled tree after removing the wired root.
ForestStats forest_stats(const WeightedGraph& g, const ForestSample& sample);

struct TreeCountReport {
    int lower_bound_k = 1;                     // largest k whose 99% CI excludes 0
    std::map<int, EstimatorReport> alpha_table;
    long horizon = 0;
    long trials = 0;
    std::uint64_t master_seed = 0;
};

// Scans k = 2 .. 2^d + 1 with orthant-center starts at distance
// ceil(sqrt(horizon)).
TreeCountReport tree_count_estimate(int d, double lambda, long horizon, long trials,
                                    std::uint64_t master_seed);

} // namespace rwalk
