#pragma once

#include <functional>
#include <limits>

#include "modphi/special.hpp"

namespace modphi {

/// Integration domain; either end may be infinite.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct QuadratureSpec {
    Interval domain;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 2000;
};

struct QuadratureResult {
    Complex value;
    double error = 0.0;
    int subdivisions = 0;
};

using Integrand = std::function<Complex(double)>;

/// Adaptive Gauss–Kronrod (7/15) quadrature with bisection of the interval
/// carrying the largest error. Infinite ends are mapped to [0, 1) with
/// x = a + t/(1 − t). Throws BudgetError (carrying the best estimate and its
/// error) when max_subdivisions is reached before
/// error ≤ abs_tol + rel_tol·|value|.
QuadratureResult integrate(const Integrand& f, const QuadratureSpec& spec);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace modphi
