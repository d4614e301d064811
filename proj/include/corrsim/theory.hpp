#pragma once

#include "corrsim/distributions.hpp"
#include "corrsim/errors.hpp"

namespace corrsim {

// Pointwise quadrant-dependence measure scaled so that its mean is the mixed
// coefficient: D(x,y) = 6 (F(x,y) - H(x) G(y)).
double dependence_function(const DistributionSpec& spec, double x, double y);

struct QuadratureConfig {
    int initial_points = 64;  // Gauss-Legendre points per axis at the first level
    int max_points = 2048;    // refinement cap, points per axis
    double abs_tol = 2e-5;    // grid-doubling convergence threshold

    void validate() const;  // initial_points >= 16, abs_tol > 0
};

struct IntegratedCoefficients {
    double spearman = 0.0;
    double kendall = 0.0;
    double mixed = 0.0;           // direct integral of the dependence function
    double mixed_identity = 0.0;  // (3*kendall - spearman)/2 cross-check
    int points_used = 0;
    double estimated_error = 0.0;
};

// Rank coefficients by tensor Gauss-Legendre quadrature over the unit square
// after the marginal substitution u = H(x), v = G(y). A sine-squared change
// of variables clusters nodes at the corners, where heavy-tailed copula
// densities concentrate. The grid is doubled until two consecutive levels
// agree within abs_tol, else QuadratureError.
IntegratedCoefficients integrate_coefficients(const DistributionSpec& spec,
                                              const QuadratureConfig& config = {});

// Var D(X,Y); zero exactly when the coordinates are independent.
double var_dependence(const DistributionSpec& spec,
                      const QuadratureConfig& config = {});

struct BoundsCheck {
    bool lower_applicable = false;  // kendall >= 0: spearman >= (3*kendall - 1)/2
    bool upper_applicable = false;  // kendall <= 0: spearman <= (1 + 3*kendall)/2
    double lower_margin = 0.0;      // spearman - (3*kendall - 1)/2
    double upper_margin = 0.0;      // (1 + 3*kendall)/2 - spearman
    bool mixed_in_range = false;    // |mixed| <= 1 up to rounding
    bool passed = false;
};

BoundsCheck check_bounds(const TheoreticalCoefficients& tc);

} // namespace corrsim
