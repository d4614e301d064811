#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "corrsim/errors.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/sample.hpp"

namespace corrsim {

enum class Family {
    normal,                  // bivariate normal, correlation t in (-1,1)
    pareto,                  // bivariate Pareto (Lomax), shape t > 0
    exp_pareto,              // exponential x Pareto with negative dependence, t > 0
    exp_pareto_transformed,  // exp_pareto with the y marginal mapped to uniform [0,1]
    fgm,                     // uncorrelated-but-dependent piecewise family, t in [-1,1]
};

const char* family_name(Family family);
std::optional<Family> family_from_name(std::string_view name);

struct DistributionSpec {
    Family family = Family::normal;
    double t = 0.0;

    // Throws SpecError when t lies outside the family's parameter domain.
    void validate() const;
};

struct TheoreticalCoefficients {
    // Empty when the second moments do not exist.
    std::optional<double> pearson;
    double spearman = 0.0;
    double kendall = 0.0;
    double mixed = 0.0;
};

// One i.i.d. draw of size n from the joint distribution. Exact conditional
// inversion everywhere except the fgm family, which uses rejection below the
// flat envelope (1+|t|)/2.
BivariateSample sample(const DistributionSpec& spec, std::size_t n, Rng& rng);

// Closed forms where they exist; the Pareto rank coefficients have none and
// are filled in by quadrature (cached per parameter).
TheoreticalCoefficients theoretical(const DistributionSpec& spec);

double joint_cdf(const DistributionSpec& spec, double x, double y);
double marginal_h(const DistributionSpec& spec, double x);
double marginal_g(const DistributionSpec& spec, double y);
double marginal_h_pdf(const DistributionSpec& spec, double x);
double marginal_g_pdf(const DistributionSpec& spec, double y);
double marginal_h_inv(const DistributionSpec& spec, double u);
double marginal_g_inv(const DistributionSpec& spec, double v);
double density(const DistributionSpec& spec, double x, double y);

// Conditional structure of the fgm family, which is uncorrelated but not
// independent for t != 0.
double fgm_mean_x_given_y(double t, double y);
double fgm_mean_y_given_x(double t, double x);

struct SemiIndependenceReport {
    double mean_y_given_x;  // identically EY = 0
    double mean_x_given_y;  // value at the median of Y: 1/2 - t/6
    bool holds;             // both conditional means equal the unconditional ones
};

// fgm only; other families raise SpecError.
SemiIndependenceReport semi_independence_check(const DistributionSpec& spec);

} // namespace corrsim
