#include "rwalk/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "rwalk/parallel.hpp"

namespace rwalk {

namespace {

void validate_walk(WalkKind kind, double lambda) {
    if (kind == WalkKind::drifted) {
        if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("simulate: drifted walk needs lambda in (0,1)");
    } else {
        if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("simulate: lambda must lie in (0,1]");
    }
}

// One uniform per step, consumed by a CDF walk over the canonical outcome
// order +e_1..+e_d, -e_1..-e_d. Inside an open orthant the biased and the
// drifted CDFs coincide term by term, which gives the coupling property.
struct Stepper {
    int d;
    double lambda;
    bool biased;

    void advance(std::int32_t* x, CounterRng& rng) const {
        double denom;
        if (biased) {
            int nnz = 0;
            for (int i = 0; i < d; ++i) nnz += (x[i] != 0);
            denom = 2.0 * d + (lambda - 1.0) * nnz;
        } else {
            denom = d * (1.0 + lambda);
        }
        double u = rng.next_unit() * denom;
        for (int i = 0; i < d; ++i) {  // +e_i: inward iff x_i < 0 (biased)
            const double w = (biased ? (x[i] < 0 ? lambda : 1.0) : 1.0);
            if (u < w) { ++x[i]; return; }
            u -= w;
        }
        for (int i = 0; i < d; ++i) {  // -e_i: inward iff x_i > 0 (biased)
            const double w = (biased ? (x[i] > 0 ? lambda : 1.0) : lambda);
            if (u < w) { --x[i]; return; }
            u -= w;
        }
        --x[d - 1];  // unreachable up to rounding in the last weight
    }
};

// Hash set of visited lattice points. Coordinates pack into one 64-bit word
// for d <= 4 and two words for d <= 8 (the bound check picks the field width
// that the walk can actually reach), stored in an open-addressing table.
// Anything else falls back to a generic vector key.
class PointSet {
public:
    PointSet(int d, long max_abs_coord, std::size_t expected = 1024) : d_(d) {
        const int words = d <= 4 ? 1 : 2;
        bits_ = words * 64 / d;
        packed_ = d <= 8 && bits_ >= 3 && max_abs_coord < (1L << (bits_ - 2));
        wide_ = words == 2;
        if (packed_) {
            std::size_t cap = 16;
            while (cap * 5 < expected * 8) cap <<= 1;  // keep load below ~0.62
            mask_ = cap - 1;
            used_.assign(cap, 0);
            lo_.assign(cap, 0);
            if (wide_) hi_.assign(cap, 0);
        }
    }

    bool insert(const std::int32_t* x) {
        if (!packed_) return generic_.insert(std::vector<std::int32_t>(x, x + d_)).second;
        std::uint64_t lo, hi;
        pack(x, lo, hi);
        if (5 * (size_ + 1) > 3 * (mask_ + 1)) grow();
        return insert_packed(lo, hi);
    }

    bool contains(const std::int32_t* x) const {
        if (!packed_) return generic_.count(std::vector<std::int32_t>(x, x + d_)) != 0;
        std::uint64_t lo, hi;
        pack(x, lo, hi);
        std::size_t slot = static_cast<std::size_t>(detail::mix64(lo ^ (hi * 0x9e3779b97f4a7c15ULL))) & mask_;
        while (used_[slot]) {
            if (lo_[slot] == lo && (!wide_ || hi_[slot] == hi)) return true;
            slot = (slot + 1) & mask_;
        }
        return false;
    }

private:
    void pack(const std::int32_t* x, std::uint64_t& lo, std::uint64_t& hi) const {
        const std::uint64_t field_mask = (bits_ >= 64) ? ~0ULL : ((1ULL << bits_) - 1);
        lo = 0;
        hi = 0;
        for (int i = 0; i < d_; ++i) {
            const std::uint64_t f = static_cast<std::uint64_t>(static_cast<std::uint32_t>(x[i])) & field_mask;
            const int pos = i * bits_;
            if (pos < 64) {
                lo |= f << pos;
                if (pos + bits_ > 64) hi |= f >> (64 - pos);
            } else {
                hi |= f << (pos - 64);
            }
        }
    }

    bool insert_packed(std::uint64_t lo, std::uint64_t hi) {
        std::size_t slot = static_cast<std::size_t>(detail::mix64(lo ^ (hi * 0x9e3779b97f4a7c15ULL))) & mask_;
        while (used_[slot]) {
            if (lo_[slot] == lo && (!wide_ || hi_[slot] == hi)) return false;
            slot = (slot + 1) & mask_;
        }
        used_[slot] = 1;
        lo_[slot] = lo;
        if (wide_) hi_[slot] = hi;
        ++size_;
        return true;
    }

    void grow() {
        std::vector<std::uint8_t> used_old;
        used_old.swap(used_);
        std::vector<std::uint64_t> lo_old, hi_old;
        lo_old.swap(lo_);
        hi_old.swap(hi_);
        const std::size_t cap = (mask_ + 1) * 2;
        mask_ = cap - 1;
        used_.assign(cap, 0);
        lo_.assign(cap, 0);
        if (wide_) hi_.assign(cap, 0);
        size_ = 0;
        for (std::size_t i = 0; i < used_old.size(); ++i) {
            if (used_old[i]) insert_packed(lo_old[i], wide_ ? hi_old[i] : 0);
        }
    }

    int d_;
    int bits_ = 0;
    bool packed_ = false;
    bool wide_ = false;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
    std::vector<std::uint8_t> used_;
    std::vector<std::uint64_t> lo_;
    std::vector<std::uint64_t> hi_;
    std::unordered_set<std::vector<std::int32_t>, PointHash> generic_;
};

double sample_std_error(const std::vector<double>& values, double mean) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

double serial_mean(const std::vector<double>& values) {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

} // namespace

Trajectory simulate(WalkKind kind, const Lattice& lat, double lambda, long steps,
                    const LatticePoint& start, std::uint64_t seed) {
    validate_walk(kind, lambda);
    lat.require_point(start);
    if (steps < 0) throw DomainError("simulate: steps must be >= 0");

    const int d = lat.dim();
    const bool biased_path = kind != WalkKind::drifted;  // reflected walks follow a biased driver
    Stepper stepper{d, lambda, biased_path};
    CounterRng rng(seed);

    Trajectory out;
    out.kind = kind;
    out.seed = seed;
    out.points.reserve(static_cast<std::size_t>(steps) + 1);

    std::vector<std::int32_t> x = start.coords;
    auto record = [&] {
        LatticePoint p{x};
        if (kind == WalkKind::reflected) {
            for (int i = 0; i < d; ++i) p[i] = static_cast<std::int32_t>(std::abs(p[i]));
        }
        out.points.push_back(std::move(p));
    };
    record();
    for (long t = 0; t < steps; ++t) {
        stepper.advance(x.data(), rng);
        record();
    }
    return out;
}

std::pair<Trajectory, Trajectory> simulate_coupled(const Lattice& lat, double lambda, long steps,
                                                   const LatticePoint& start, std::uint64_t seed) {
    auto biased = simulate(WalkKind::biased, lat, lambda, steps, start, seed);
    auto drifted = simulate(WalkKind::drifted, lat, lambda, steps, start, seed);
    return {std::move(biased), std::move(drifted)};
}

EstimatorReport speed_estimate(const Lattice& lat, double lambda, long steps, long trials,
                               std::uint64_t master_seed) {
    if (trials < 2) throw DomainError("speed_estimate: trials must be >= 2");
    if (steps < 1) throw DomainError("speed_estimate: steps must be >= 1");
    validate_walk(WalkKind::biased, lambda);

    const int d = lat.dim();
    std::vector<double> scalar(static_cast<std::size_t>(trials));
    std::vector<std::vector<double>> coords(static_cast<std::size_t>(d),
                                            std::vector<double>(static_cast<std::size_t>(trials)));
    const Stepper stepper{d, lambda, true};

    #pragma omp parallel for schedule(dynamic, 1)
    for (long t = 0; t < trials; ++t) {
        CounterRng rng = trial_stream(master_seed, static_cast<std::uint64_t>(t));
        std::vector<std::int32_t> x(static_cast<std::size_t>(d), 0);
        for (long s = 0; s < steps; ++s) stepper.advance(x.data(), rng);
        long norm = 0;
        for (int i = 0; i < d; ++i) {
            const long a = std::labs(x[static_cast<std::size_t>(i)]);
            norm += a;
            coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] =
                static_cast<double>(a) / static_cast<double>(steps);
        }
        scalar[static_cast<std::size_t>(t)] = static_cast<double>(norm) / static_cast<double>(steps);
    }

    EstimatorReport rep;
    rep.trials = trials;
    rep.horizon = steps;
    rep.master_seed = master_seed;
    rep.estimate = serial_mean(scalar);
    rep.std_error = sample_std_error(scalar, rep.estimate);
    for (int i = 0; i < d; ++i) {
        const auto& v = coords[static_cast<std::size_t>(i)];
        const double m = serial_mean(v);
        rep.coord_estimate.push_back(m);
        rep.coord_std_error.push_back(sample_std_error(v, m));
    }
    return rep;
}

VisitSummary axial_visit_stats(const Lattice& lat, double lambda, long horizon, long trials,
                               std::uint64_t master_seed) {
    return axial_visit_stats(lat, lambda, horizon, trials, master_seed, origin(lat.dim()));
}

VisitSummary axial_visit_stats(const Lattice& lat, double lambda, long horizon, long trials,
                               std::uint64_t master_seed, const LatticePoint& start) {
    if (lat.dim() < 2) throw DomainError("axial_visit_stats: d must be >= 2");
    if (trials < 1) throw DomainError("axial_visit_stats: trials must be >= 1");
    if (horizon < 0) throw DomainError("axial_visit_stats: horizon must be >= 0");
    validate_walk(WalkKind::biased, lambda);
    lat.require_point(start);

    const int d = lat.dim();
    const Stepper stepper{d, lambda, true};
    std::vector<long> counts(static_cast<std::size_t>(trials));
    std::vector<long> last_visit(static_cast<std::size_t>(trials));

    #pragma omp parallel for schedule(dynamic, 1)
    for (long t = 0; t < trials; ++t) {
        CounterRng rng = trial_stream(master_seed, static_cast<std::uint64_t>(t));
        std::vector<std::int32_t> x = start.coords;
        long visits = 0;
        long last = -1;
        auto on_axial = [&] {
            for (int i = 0; i < d; ++i) {
                if (x[static_cast<std::size_t>(i)] == 0) return true;
            }
            return false;
        };
        if (on_axial()) { ++visits; last = 0; }
        for (long s = 1; s <= horizon; ++s) {
            stepper.advance(x.data(), rng);
            if (on_axial()) { ++visits; last = s; }
        }
        counts[static_cast<std::size_t>(t)] = visits;
        last_visit[static_cast<std::size_t>(t)] = last;
    }

    VisitSummary out;
    out.trials = trials;
    out.horizon = horizon;
    out.master_seed = master_seed;
    long saturated = 0;
    for (long t = 0; t < trials; ++t) {
        ++out.histogram[counts[static_cast<std::size_t>(t)]];
        if (last_visit[static_cast<std::size_t>(t)] * 2 <= horizon) ++saturated;
    }
    out.saturation = static_cast<double>(saturated) / static_cast<double>(trials);
    return out;
}

double total_variation(const std::map<long, long>& a, const std::map<long, long>& b) {
    double ta = 0, tb = 0;
    for (const auto& [k, v] : a) ta += static_cast<double>(v);
    for (const auto& [k, v] : b) tb += static_cast<double>(v);
    if (ta == 0 || tb == 0) throw DomainError("total_variation: empty histogram");
    double tv = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            tv += std::abs(static_cast<double>(ia->second) / ta);
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            tv += std::abs(static_cast<double>(ib->second) / tb);
            ++ib;
        } else {
            tv += std::abs(static_cast<double>(ia->second) / ta - static_cast<double>(ib->second) / tb);
            ++ia;
            ++ib;
        }
    }
    return tv / 2.0;
}

IntersectionSummary intersection_stats(WalkKind kind, const Lattice& lat, double lambda, long horizon,
                                       long trials, const std::pair<LatticePoint, LatticePoint>& starts,
                                       std::uint64_t master_seed, IntersectionCount counting) {
    if (trials < 1) throw DomainError("intersection_stats: trials must be >= 1");
    if (horizon < 0) throw DomainError("intersection_stats: horizon must be >= 0");
    validate_walk(kind, lambda);
    lat.require_point(starts.first);
    lat.require_point(starts.second);

    const int d = lat.dim();
    const bool biased_path = kind != WalkKind::drifted;
    const bool reflect = kind == WalkKind::reflected;
    const Stepper stepper{d, lambda, biased_path};
    const long reach = horizon + std::max(starts.first.norm1(), starts.second.norm1());
    std::vector<long> per_trial(static_cast<std::size_t>(trials));

    #pragma omp parallel for schedule(dynamic, 1)
    for (long t = 0; t < trials; ++t) {
        CounterRng rng_a = trial_stream(master_seed, 2 * static_cast<std::uint64_t>(t));
        CounterRng rng_b = trial_stream(master_seed, 2 * static_cast<std::uint64_t>(t) + 1);
        std::vector<std::int32_t> a = starts.first.coords;
        std::vector<std::int32_t> b = starts.second.coords;
        std::vector<std::int32_t> key(static_cast<std::size_t>(d));
        auto keyed = [&](const std::vector<std::int32_t>& x) -> const std::int32_t* {
            if (!reflect) return x.data();
            for (int i = 0; i < d; ++i) key[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(std::abs(x[static_cast<std::size_t>(i)]));
            return key.data();
        };

        long count = 0;
        if (counting == IntersectionCount::shared_points) {
            PointSet range_a(d, reach, static_cast<std::size_t>(horizon) + 1);
            PointSet range_b(d, reach, static_cast<std::size_t>(horizon) + 1);
            range_a.insert(keyed(a));
            for (long s = 0; s < horizon; ++s) {
                stepper.advance(a.data(), rng_a);
                range_a.insert(keyed(a));
            }
            if (range_b.insert(keyed(b)) && range_a.contains(keyed(b))) ++count;
            for (long s = 0; s < horizon; ++s) {
                stepper.advance(b.data(), rng_b);
                if (range_b.insert(keyed(b)) && range_a.contains(keyed(b))) ++count;
            }
        } else {
            // multiplicity of walk A at each point, then sum over walk B's path
            std::unordered_map<std::vector<std::int32_t>, long, PointHash> mult;
            auto as_vec = [&](const std::int32_t* x) {
                return std::vector<std::int32_t>(x, x + d);
            };
            ++mult[as_vec(keyed(a))];
            for (long s = 0; s < horizon; ++s) {
                stepper.advance(a.data(), rng_a);
                ++mult[as_vec(keyed(a))];
            }
            auto it = mult.find(as_vec(keyed(b)));
            if (it != mult.end()) count += it->second;
            for (long s = 0; s < horizon; ++s) {
                stepper.advance(b.data(), rng_b);
                it = mult.find(as_vec(keyed(b)));
                if (it != mult.end()) count += it->second;
            }
        }
        per_trial[static_cast<std::size_t>(t)] = count;
    }

    IntersectionSummary out;
    out.per_trial = std::move(per_trial);
    std::sort(out.per_trial.begin(), out.per_trial.end());
    const std::size_t n = out.per_trial.size();
    out.median = (n % 2 == 1) ? static_cast<double>(out.per_trial[n / 2])
                              : 0.5 * (out.per_trial[n / 2 - 1] + out.per_trial[n / 2]);
    out.trials = trials;
    out.horizon = horizon;
    out.master_seed = master_seed;
    return out;
}

EstimatorReport alpha_estimate(const Lattice& lat, double lambda, int k, long horizon, long trials,
                               const std::vector<LatticePoint>& starts, std::uint64_t master_seed) {
    if (k < 1) throw DomainError("alpha_estimate: k must be >= 1");
    if (trials < 1) throw DomainError("alpha_estimate: trials must be >= 1");
    if (static_cast<int>(starts.size()) != k) throw DomainError("alpha_estimate: need exactly k starts");
    validate_walk(WalkKind::biased, lambda);
    long max_start_norm = 0;
    for (int i = 0; i < k; ++i) {
        lat.require_point(starts[static_cast<std::size_t>(i)]);
        max_start_norm = std::max(max_start_norm, starts[static_cast<std::size_t>(i)].norm1());
        for (int j = 0; j < i; ++j) {
            if (starts[static_cast<std::size_t>(i)] == starts[static_cast<std::size_t>(j)]) {
                throw DomainError("alpha_estimate: starts must be distinct");
            }
        }
    }

    const int d = lat.dim();
    const Stepper stepper{d, lambda, true};
    const long reach = horizon + max_start_norm;
    std::vector<double> success(static_cast<std::size_t>(trials));

    #pragma omp parallel for schedule(dynamic, 1)
    for (long t = 0; t < trials; ++t) {
        // one range set per walk; a trial fails at the first pairwise hit
        std::vector<PointSet> ranges;
        ranges.reserve(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) ranges.emplace_back(d, reach, static_cast<std::size_t>(horizon) + 1);

        bool disjoint = true;
        for (int j = 0; j < k && disjoint; ++j) {
            CounterRng rng = trial_stream(master_seed,
                                          static_cast<std::uint64_t>(t) * static_cast<std::uint64_t>(k) +
                                              static_cast<std::uint64_t>(j));
            std::vector<std::int32_t> x = starts[static_cast<std::size_t>(j)].coords;
            auto check = [&]() {
                if (ranges[static_cast<std::size_t>(j)].insert(x.data())) {
                    for (int i = 0; i < j; ++i) {
                        if (ranges[static_cast<std::size_t>(i)].contains(x.data())) return false;
                    }
                }
                return true;
            };
            if (!check()) { disjoint = false; break; }
            for (long s = 0; s < horizon; ++s) {
                stepper.advance(x.data(), rng);
                if (!check()) { disjoint = false; break; }
            }
        }
        success[static_cast<std::size_t>(t)] = disjoint ? 1.0 : 0.0;
    }

    EstimatorReport rep;
    rep.trials = trials;
    rep.horizon = horizon;
    rep.master_seed = master_seed;
    rep.estimate = serial_mean(success);
    rep.std_error = sample_std_error(success, rep.estimate);
    return rep;
}

std::vector<LatticePoint> default_alpha_starts(int d, int k, long distance) {
    if (d < 1 || k < 1) throw DomainError("default_alpha_starts: need d >= 1 and k >= 1");
    const long per_coord = std::max(1L, (distance + d - 1) / d);
    std::vector<LatticePoint> starts;
    starts.reserve(static_cast<std::size_t>(k));
    const long orthants = 1L << d;
    for (int j = 0; j < k; ++j) {
        const long cell = j % orthants;
        const long scale = 1 + j / orthants;  // extras reuse orthants further out
        LatticePoint p = origin(d);
        for (int i = 0; i < d; ++i) {
            const long sign = (cell >> i) & 1 ? -1 : 1;
            p[i] = static_cast<std::int32_t>(sign * per_coord * scale);
        }
        starts.push_back(std::move(p));
    }
    return starts;
}

EstimatorReport empirical_return(const Lattice& lat, double lambda, long n, long trials,
                                 std::uint64_t master_seed) {
    if (n < 0 || n % 2 != 0) throw DomainError("empirical_return: n must be even and >= 0");
    if (trials < 1) throw DomainError("empirical_return: trials must be >= 1");
    validate_walk(WalkKind::biased, lambda);

    const int d = lat.dim();
    const Stepper stepper{d, lambda, true};
    std::vector<double> hit(static_cast<std::size_t>(trials));

    #pragma omp parallel for schedule(dynamic, 1)
    for (long t = 0; t < trials; ++t) {
        CounterRng rng = trial_stream(master_seed, static_cast<std::uint64_t>(t));
        std::vector<std::int32_t> x(static_cast<std::size_t>(d), 0);
        for (long s = 0; s < n; ++s) stepper.advance(x.data(), rng);
        bool at_origin = true;
        for (int i = 0; i < d; ++i) at_origin = at_origin && x[static_cast<std::size_t>(i)] == 0;
        hit[static_cast<std::size_t>(t)] = at_origin ? 1.0 : 0.0;
    }

    EstimatorReport rep;
    rep.trials = trials;
    rep.horizon = n;
    rep.master_seed = master_seed;
    rep.estimate = serial_mean(hit);
    rep.std_error = sample_std_error(hit, rep.estimate);
    return rep;
}

} // namespace rwalk
