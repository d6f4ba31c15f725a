#pragma once

#include <string>
#include <vector>

#include "modphi/special.hpp"

namespace modphi {

/// Ordered finite set of real evaluation points u.
struct EvaluationGrid {
    std::vector<double> u;

    /// count evenly spaced points from a to b inclusive (count == 1 gives {a}).
    static EvaluationGrid linspace(double a, double b, int count);

    /// Parses "a:b:count". Throws DomainError on malformed input or count < 1.
    static EvaluationGrid parse(const std::string& spec);

    std::size_t size() const { return u.size(); }
};

/// max_i |a_i − b_i|; sizes must match.
double sup_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

}  // namespace modphi
