#include "rwalk/exact_rational.hpp"

#include <cstdlib>
#include <string>

namespace rwalk {

std::map<std::vector<std::int32_t>, Rational> rational_heat_kernel(WalkKind kind, int d,
                                                                   RationalLambda lambda, int steps,
                                                                   const LatticePoint& start) {
    if (d < 1 || d > 2 || steps < 0 || steps > 20) {
        throw BudgetError("rational_heat_kernel: supported range is d <= 2, steps <= 20 (got d=" +
                          std::to_string(d) + ", steps=" + std::to_string(steps) + ")");
    }
    if (kind == WalkKind::reflected) throw DomainError("rational_heat_kernel: kind must be biased or drifted");
    if (lambda.num <= 0 || lambda.den <= 0 || lambda.num > lambda.den) {
        throw DomainError("rational_heat_kernel: lambda must be a rational in (0,1]");
    }
    if (kind == WalkKind::drifted && lambda.num == lambda.den) {
        throw DomainError("rational_heat_kernel: drifted kernel needs lambda < 1");
    }
    Lattice lat(d);
    lat.require_point(start);

    const Rational a(lambda.num), b(lambda.den);
    std::map<std::vector<std::int32_t>, Rational> cur;
    cur[start.coords] = 1;

    for (int t = 0; t < steps; ++t) {
        std::map<std::vector<std::int32_t>, Rational> nxt;
        for (const auto& [coords, mass] : cur) {
            int nnz = 0;
            for (auto c : coords) nnz += (c != 0);
            // denominators scaled by lambda.den so every weight is integer/integer
            const Rational denom = kind == WalkKind::drifted
                                       ? Rational(d) * (a + b)
                                       : Rational(2 * d) * b + (a - b) * nnz;
            for (int i = 0; i < d; ++i) {
                for (int sgn : {+1, -1}) {
                    auto y = coords;
                    y[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(y[static_cast<std::size_t>(i)] + sgn);
                    Rational w;
                    if (kind == WalkKind::drifted) {
                        w = (sgn > 0 ? b : a) / denom;
                    } else {
                        const bool inward = std::labs(y[static_cast<std::size_t>(i)]) <
                                            std::labs(coords[static_cast<std::size_t>(i)]);
                        w = (inward ? a : b) / denom;
                    }
                    nxt[y] += mass * w;
                }
            }
        }
        cur = std::move(nxt);
    }
    return cur;
}

} // namespace rwalk
