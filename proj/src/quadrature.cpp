#include "corrsim/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace corrsim {

namespace {

// Legendre nodes by Newton iteration from the Chebyshev initial guess.
// Nodes and weights converge to full double precision in a few steps.
QuadratureRule build_rule(int m) {
    QuadratureRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);

    for (int i = 0; i < m; ++i) {
        double x = std::cos(3.141592653589793238462643 * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Recurrence for P_m(x) and its derivative.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // Map from [-1,1] to [0,1].
        rule.nodes[m - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[m - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace

const QuadratureRule& gauss_legendre(int points) {
    if (points < 1) throw std::invalid_argument("quadrature order must be positive");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(points);
    if (it == cache.end()) it = cache.emplace(points, build_rule(points)).first;
    return it->second;
}

} // namespace corrsim
