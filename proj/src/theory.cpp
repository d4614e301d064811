#include "corrsim/theory.hpp"

#include <cmath>
#include <vector>

#include "corrsim/quadrature.hpp"

namespace corrsim {

double dependence_function(const DistributionSpec& spec, double x, double y) {
    return 6.0 * (joint_cdf(spec, x, y) - marginal_h(spec, x) * marginal_g(spec, y));
}

void QuadratureConfig::validate() const {
    if (initial_points < 16) throw SpecError("quadrature: need at least 16 points");
    if (max_points < initial_points)
        throw SpecError("quadrature: max_points below initial_points");
    if (!(abs_tol > 0.0)) throw SpecError("quadrature: tolerance must be positive");
}

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Copula moments of one tensor level. All expectations are taken under the
// joint law, with the copula density f/(h g) supplying the weight after the
// marginal substitution.
struct LevelMoments {
    double mean_cdf = 0.0;     // E F(X,Y)
    double mean_grades = 0.0;  // E H(X) G(Y)
    double mean_dep = 0.0;     // E D(X,Y)
    double mean_dep_sq = 0.0;  // E D(X,Y)^2
};

LevelMoments evaluate_level(const DistributionSpec& spec, int m) {
    const QuadratureRule& rule = gauss_legendre(m);

    // u = sin^2(pi s / 2) clusters nodes quadratically at both corners.
    std::vector<double> grade(m), weight(m), coord_x(m), coord_y(m), pdf_x(m), pdf_y(m);
    for (int i = 0; i < m; ++i) {
        const double s = rule.nodes[i];
        const double sn = std::sin(0.5 * kPi * s);
        grade[i] = sn * sn;
        weight[i] = rule.weights[i] * 0.5 * kPi * std::sin(kPi * s);
        coord_x[i] = marginal_h_inv(spec, grade[i]);
        coord_y[i] = marginal_g_inv(spec, grade[i]);
        pdf_x[i] = marginal_h_pdf(spec, coord_x[i]);
        pdf_y[i] = marginal_g_pdf(spec, coord_y[i]);
    }

    LevelMoments out;
    for (int i = 0; i < m; ++i) {
        const double x = coord_x[i];
        double row_cdf = 0.0, row_grades = 0.0, row_dep = 0.0, row_dep_sq = 0.0;
        for (int j = 0; j < m; ++j) {
            const double y = coord_y[j];
            const double copula_density =
                weight[j] * density(spec, x, y) / (pdf_x[i] * pdf_y[j]);
            const double cdf = joint_cdf(spec, x, y);
            const double grades = grade[i] * grade[j];
            const double dep = 6.0 * (cdf - grades);
            row_cdf += copula_density * cdf;
            row_grades += copula_density * grades;
            row_dep += copula_density * dep;
            row_dep_sq += copula_density * dep * dep;
        }
        out.mean_cdf += weight[i] * row_cdf;
        out.mean_grades += weight[i] * row_grades;
        out.mean_dep += weight[i] * row_dep;
        out.mean_dep_sq += weight[i] * row_dep_sq;
    }
    return out;
}

// Doubles the grid until consecutive levels agree on every coefficient scale.
LevelMoments converge(const DistributionSpec& spec, const QuadratureConfig& config,
                      double* estimated_error, int* points_used) {
    spec.validate();
    config.validate();

    LevelMoments prev = evaluate_level(spec, config.initial_points);
    for (int m = 2 * config.initial_points; m <= config.max_points; m *= 2) {
        const LevelMoments cur = evaluate_level(spec, m);
        const double err = std::max(
            {4.0 * std::abs(cur.mean_cdf - prev.mean_cdf),
             12.0 * std::abs(cur.mean_grades - prev.mean_grades),
             6.0 * std::abs(cur.mean_dep - prev.mean_dep),
             std::abs(cur.mean_dep_sq - prev.mean_dep_sq)});
        if (err <= config.abs_tol) {
            *estimated_error = err;
            *points_used = m;
            return cur;
        }
        prev = cur;
    }
    throw QuadratureError("grid refinement exhausted before reaching tolerance");
}

} // namespace

IntegratedCoefficients integrate_coefficients(const DistributionSpec& spec,
                                              const QuadratureConfig& config) {
    IntegratedCoefficients out;
    const LevelMoments moments =
        converge(spec, config, &out.estimated_error, &out.points_used);

    out.kendall = 4.0 * moments.mean_cdf - 1.0;
    out.spearman = 12.0 * moments.mean_grades - 3.0;
    out.mixed = moments.mean_dep;
    out.mixed_identity = (3.0 * out.kendall - out.spearman) / 2.0;
    if (std::abs(out.mixed - out.mixed_identity) > config.abs_tol)
        throw QuadratureError("direct and recombined mixed coefficients disagree");
    return out;
}

double var_dependence(const DistributionSpec& spec, const QuadratureConfig& config) {
    double err = 0.0;
    int points = 0;
    const LevelMoments moments = converge(spec, config, &err, &points);
    return moments.mean_dep_sq - moments.mean_dep * moments.mean_dep;
}

BoundsCheck check_bounds(const TheoreticalCoefficients& tc) {
    constexpr double kSlack = 1e-12;
    BoundsCheck out;
    out.lower_applicable = tc.kendall >= 0.0;
    out.upper_applicable = tc.kendall <= 0.0;
    out.lower_margin = tc.spearman - (3.0 * tc.kendall - 1.0) / 2.0;
    out.upper_margin = (1.0 + 3.0 * tc.kendall) / 2.0 - tc.spearman;
    out.mixed_in_range = std::abs(tc.mixed) <= 1.0 + kSlack;
    out.passed = out.mixed_in_range &&
                 (!out.lower_applicable || out.lower_margin >= -kSlack) &&
                 (!out.upper_applicable || out.upper_margin >= -kSlack);
    return out;
}

} // namespace corrsim
