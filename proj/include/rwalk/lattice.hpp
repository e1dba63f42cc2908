#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "rwalk/errors.hpp"

namespace rwalk {

// A point of Z^d. The coordinate vector fixes the dimension.
struct LatticePoint {
    std::vector<std::int32_t> coords;

    LatticePoint() = default;
    explicit LatticePoint(std::vector<std::int32_t> c) : coords(std::move(c)) {}
    LatticePoint(std::initializer_list<std::int32_t> c) : coords(c) {}

    int dim() const { return static_cast<int>(coords.size()); }
    std::int32_t operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
    std::int32_t& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }

    // Graph distance to the origin (sum of absolute coordinates).
    long norm1() const;
    int nonzero_coords() const;

    bool operator==(const LatticePoint&) const = default;
    std::string to_string() const;
};

LatticePoint origin(int d);
// The point sign * e_axis (axis is 0-based).
LatticePoint unit_point(int d, int axis, int sign = 1);

struct PointHash {
    std::size_t operator()(const LatticePoint& p) const;
    std::size_t operator()(const std::vector<std::int32_t>& c) const;
};

// Edge counts of a vertex split by the shell its neighbors live on.
struct DegreeProfile {
    int degree = 0;   // total degree, 2d on Z^d
    int inward = 0;   // edges toward the previous shell
    int lateral = 0;  // edges within the same shell (always 0 on Z^d)
    int outward = 0;  // edges toward the next shell
};

struct Geometry {
    long norm = 0;
    LatticePoint reflected;          // coordinate-wise absolute value
    bool on_axial = false;           // true iff some coordinate is zero
    std::vector<int> sign_pattern;   // -1 / 0 / +1 per coordinate
};

// One-step distribution at a point. Neighbors are listed in the canonical
// order +e_1, ..., +e_d, -e_1, ..., -e_d.
struct StepDistribution {
    std::vector<LatticePoint> neighbors;
    std::vector<double> probability;
};

// Closed-form constants of the (d, lambda) kernel family.
struct KernelConstants {
    double spectral_radius = 0;               // 2 sqrt(lambda) / (1 + lambda)
    double speed = 0;                         // (1 - lambda) / (1 + lambda)
    double axial_factor = 0;                  // d(1+l) / (d(1+l) + 1 - l)
    std::vector<double> drift;                // mean displacement per step
    std::vector<std::vector<double>> covariance;
};

// Spectral radius formula on its own; valid for lambda in (0, 1].
double spectral_radius(double lambda);

// Dimension context. Carries d once and validates every point that crosses
// a module boundary, so mixed-dimension bugs fail loudly.
class Lattice {
public:
    explicit Lattice(int d);

    int dim() const { return d_; }
    void require_point(const LatticePoint& x) const;
    bool adjacent(const LatticePoint& a, const LatticePoint& b) const;

    DegreeProfile degrees(const LatticePoint& x) const;
    Geometry geometry(const LatticePoint& x) const;

    // Eq-style biased kernel: inward steps carry weight lambda, all other
    // steps weight 1, normalized per site. lambda in (0, 1].
    StepDistribution biased_step(const LatticePoint& x, double lambda) const;

    // Homogeneous drifted kernel: +e_i with prob 1/(d(1+lambda)), -e_i with
    // prob lambda/(d(1+lambda)). lambda in (0, 1).
    StepDistribution drifted_step(double lambda) const;

    // Edge conductance lambda^(-|e|) with |e| = min of the endpoint norms.
    double conductance(const LatticePoint& a, const LatticePoint& b, double lambda) const;

    // Stationary measure (d_x^+ + lambda d_x^-) lambda^(-|x|).
    double invariant_measure(const LatticePoint& x, double lambda) const;

    KernelConstants derive_constants(double lambda) const;

private:
    int d_;
};

} // namespace rwalk
