#include "rwalk/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace rwalk {

long LatticePoint::norm1() const {
    long s = 0;
    for (auto c : coords) s += std::labs(c);
    return s;
}

int LatticePoint::nonzero_coords() const {
    int k = 0;
    for (auto c : coords) k += (c != 0);
    return k;
}

std::string LatticePoint::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim(); ++i) {
        if (i) os << ',';
        os << coords[static_cast<std::size_t>(i)];
    }
    os << ')';
    return os.str();
}

LatticePoint origin(int d) {
    if (d < 1) throw DomainError("origin: dimension must be >= 1");
    return LatticePoint(std::vector<std::int32_t>(static_cast<std::size_t>(d), 0));
}

LatticePoint unit_point(int d, int axis, int sign) {
    LatticePoint p = origin(d);
    if (axis < 0 || axis >= d) throw DomainError("unit_point: axis out of range");
    p[axis] = static_cast<std::int32_t>(sign >= 0 ? 1 : -1);
    return p;
}

std::size_t PointHash::operator()(const std::vector<std::int32_t>& c) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : c) {
        h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

std::size_t PointHash::operator()(const LatticePoint& p) const { return (*this)(p.coords); }

double spectral_radius(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("spectral_radius: lambda must lie in (0,1]");
    return 2.0 * std::sqrt(lambda) / (1.0 + lambda);
}

Lattice::Lattice(int d) : d_(d) {
    if (d < 1) throw DomainError("Lattice: dimension must be >= 1");
}

void Lattice::require_point(const LatticePoint& x) const {
    if (x.dim() != d_) {
        throw DomainError("point dimension " + std::to_string(x.dim()) +
                          " does not match lattice dimension " + std::to_string(d_));
    }
}

bool Lattice::adjacent(const LatticePoint& a, const LatticePoint& b) const {
    require_point(a);
    require_point(b);
    long dist = 0;
    for (int i = 0; i < d_; ++i) dist += std::labs(static_cast<long>(a[i]) - b[i]);
    return dist == 1;
}

DegreeProfile Lattice::degrees(const LatticePoint& x) const {
    require_point(x);
    const int k = x.nonzero_coords();
    DegreeProfile p;
    p.degree = 2 * d_;
    p.inward = k;
    p.lateral = 0;
    p.outward = 2 * d_ - k;
    return p;
}

Geometry Lattice::geometry(const LatticePoint& x) const {
    require_point(x);
    Geometry g;
    g.norm = x.norm1();
    g.reflected = x;
    g.sign_pattern.resize(static_cast<std::size_t>(d_));
    g.on_axial = false;
    for (int i = 0; i < d_; ++i) {
        const auto c = x[i];
        g.sign_pattern[static_cast<std::size_t>(i)] = (c > 0) - (c < 0);
        if (c < 0) g.reflected[i] = -c;
        if (c == 0) g.on_axial = true;
    }
    return g;
}

StepDistribution Lattice::biased_step(const LatticePoint& x, double lambda) const {
    require_point(x);
    if (!(lambda > 0.0)) throw DomainError("biased_step: lambda must be positive");
    if (lambda > 1.0) throw DomainError("biased_step: lambda > 1 (recurrent regime) is not supported");

    const int k = x.nonzero_coords();
    const double denom = 2.0 * d_ + (lambda - 1.0) * k;

    StepDistribution s;
    s.neighbors.reserve(static_cast<std::size_t>(2 * d_));
    s.probability.reserve(static_cast<std::size_t>(2 * d_));
    for (int sign : {+1, -1}) {
        for (int i = 0; i < d_; ++i) {
            LatticePoint y = x;
            y[i] = static_cast<std::int32_t>(y[i] + sign);
            const bool inward = std::labs(static_cast<long>(y[i])) < std::labs(static_cast<long>(x[i]));
            s.neighbors.push_back(std::move(y));
            s.probability.push_back((inward ? lambda : 1.0) / denom);
        }
    }
    return s;
}

StepDistribution Lattice::drifted_step(double lambda) const {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("drifted_step: lambda must lie in (0,1)");
    const double denom = d_ * (1.0 + lambda);

    StepDistribution s;
    for (int sign : {+1, -1}) {
        for (int i = 0; i < d_; ++i) {
            s.neighbors.push_back(unit_point(d_, i, sign));
            s.probability.push_back((sign > 0 ? 1.0 : lambda) / denom);
        }
    }
    return s;
}

double Lattice::conductance(const LatticePoint& a, const LatticePoint& b, double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("conductance: lambda must be positive");
    if (!adjacent(a, b)) {
        throw DomainError("conductance: endpoints " + a.to_string() + " and " + b.to_string() +
                          " are not adjacent");
    }
    const long edge_norm = std::min(a.norm1(), b.norm1());
    return std::pow(lambda, -static_cast<double>(edge_norm));
}

double Lattice::invariant_measure(const LatticePoint& x, double lambda) const {
    require_point(x);
    if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("invariant_measure: lambda must lie in (0,1]");
    const DegreeProfile p = degrees(x);
    return (p.outward + p.inward * lambda) * std::pow(lambda, -static_cast<double>(x.norm1()));
}

KernelConstants Lattice::derive_constants(double lambda) const {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("derive_constants: lambda must lie in (0,1)");
    KernelConstants k;
    k.spectral_radius = spectral_radius(lambda);
    k.speed = (1.0 - lambda) / (1.0 + lambda);
    k.axial_factor = d_ * (1.0 + lambda) / (d_ * (1.0 + lambda) + 1.0 - lambda);

    const double m = (1.0 - lambda) / (d_ * (1.0 + lambda));
    k.drift.assign(static_cast<std::size_t>(d_), m);
    k.covariance.assign(static_cast<std::size_t>(d_), std::vector<double>(static_cast<std::size_t>(d_), -m * m));
    for (int i = 0; i < d_; ++i) k.covariance[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += 1.0 / d_;
    return k;
}

} // namespace rwalk
