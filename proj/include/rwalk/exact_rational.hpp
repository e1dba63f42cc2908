#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rwalk/heat_kernel.hpp"

namespace rwalk {

using Rational = boost::multiprecision::cpp_rational;

struct RationalLambda {
    long num = 1;
    long den = 2;
};

// Exact big-fraction heat kernel, used to validate floating-point drift of
// the double DP. Restricted to d <= 2 and steps <= 20.
std::map<std::vector<std::int32_t>, Rational> rational_heat_kernel(WalkKind kind, int d,
                                                                   RationalLambda lambda, int steps,
                                                                   const LatticePoint& start);

} // namespace rwalk
