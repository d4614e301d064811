#pragma once

#include <cstddef>
#include <vector>

namespace corrsim {

// Gauss-Legendre rule mapped to [0,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Rule of the given order, computed once and cached. Thread-safe.
const QuadratureRule& gauss_legendre(int points);

} // namespace corrsim
