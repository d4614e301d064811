#include "corrsim/distributions.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "corrsim/normal_math.hpp"
#include "corrsim/theory.hpp"

namespace corrsim {

namespace {
constexpr double kLn2 = 0.693147180559945309417232121458176568;
constexpr double kPi = 3.141592653589793238462643383279502884;

double fgm_density_raw(double t, double x, double y) {
    const double s = (y <= 0.0) ? (2.0 * y + 1.0) : (1.0 - 2.0 * y);
    return 0.5 * (1.0 + t * (1.0 - 2.0 * x) * s);
}
} // namespace

const char* family_name(Family family) {
    switch (family) {
        case Family::normal: return "normal";
        case Family::pareto: return "pareto";
        case Family::exp_pareto: return "exp-pareto";
        case Family::exp_pareto_transformed: return "exp-pareto-transformed";
        case Family::fgm: return "fgm";
    }
    return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
    if (name == "normal") return Family::normal;
    if (name == "pareto") return Family::pareto;
    if (name == "exp-pareto" || name == "exppareto") return Family::exp_pareto;
    if (name == "exp-pareto-transformed" || name == "exp-pareto-u")
        return Family::exp_pareto_transformed;
    if (name == "fgm") return Family::fgm;
    return std::nullopt;
}

void DistributionSpec::validate() const {
    if (family != Family::exp_pareto_transformed && !std::isfinite(t))
        throw SpecError("parameter t must be finite");
    switch (family) {
        case Family::normal:
            // |t| = 1 is a degenerate joint distribution and is rejected.
            if (!(t > -1.0 && t < 1.0))
                throw SpecError("normal: t must lie strictly inside (-1, 1)");
            break;
        case Family::pareto:
            if (!(t > 0.0)) throw SpecError("pareto: t must be positive");
            break;
        case Family::exp_pareto:
            if (!(t > 0.0)) throw SpecError("exp-pareto: t must be positive");
            break;
        case Family::exp_pareto_transformed:
            break;  // parameter-free
        case Family::fgm:
            if (!(t >= -1.0 && t <= 1.0))
                throw SpecError("fgm: t must lie in [-1, 1]");
            break;
    }
}

BivariateSample sample(const DistributionSpec& spec, std::size_t n, Rng& rng) {
    spec.validate();
    if (n < 1) throw SpecError("sample size must be positive");

    BivariateSample out;
    out.reserve(n);
    const double t = spec.t;

    switch (spec.family) {
        case Family::normal: {
            const double slope = std::sqrt(1.0 - t * t);
            for (std::size_t i = 0; i < n; ++i) {
                const double z1 = rng.normal();
                const double z2 = rng.normal();
                out.push_back(z1, t * z1 + slope * z2);
            }
            break;
        }
        case Family::pareto: {
            // X from its marginal, then Y from the conditional survival
            // ((1+x)/(1+x+y))^(t+1) by inversion.
            for (std::size_t i = 0; i < n; ++i) {
                const double x = std::pow(rng.uniform(), -1.0 / t) - 1.0;
                const double y =
                    (1.0 + x) * (std::pow(rng.uniform(), -1.0 / (t + 1.0)) - 1.0);
                out.push_back(x, y);
            }
            break;
        }
        case Family::exp_pareto: {
            // Conditional CDF of Y given X = x is 1 - exp(-x((1+y)^t - 1)).
            for (std::size_t i = 0; i < n; ++i) {
                const double x = rng.exponential();
                const double e = rng.exponential();
                const double y = std::expm1(std::log1p(e / x) / t);
                out.push_back(x, y);
            }
            break;
        }
        case Family::exp_pareto_transformed: {
            // Draw from the t = 1 member and push the y marginal to uniform;
            // the parameter cancels, v = e / (x + e).
            for (std::size_t i = 0; i < n; ++i) {
                const double x = rng.exponential();
                const double e = rng.exponential();
                const double y1 = e / x;
                out.push_back(x, y1 / (1.0 + y1));
            }
            break;
        }
        case Family::fgm: {
            // X is uniform; Y by rejection against the conditional density,
            // flat envelope (1+|t|)/2 over the proposal density 1/2.
            const double envelope = 1.0 + std::abs(t);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = rng.uniform();
                double y;
                do {
                    y = rng.uniform(-1.0, 1.0);
                } while (rng.uniform() * envelope > 2.0 * fgm_density_raw(t, x, y));
                out.push_back(x, y);
            }
            break;
        }
    }
    return out;
}

namespace {

// Pareto rank coefficients have no closed form; quadrature results are cached
// per parameter so table sweeps reuse them.
std::pair<double, double> pareto_rank_values(double t) {
    static std::map<double, std::pair<double, double>> cache;
    static std::mutex mutex;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(t);
        if (it != cache.end()) return it->second;
    }
    const DistributionSpec spec{Family::pareto, t};
    const IntegratedCoefficients ic = integrate_coefficients(spec, QuadratureConfig{});
    const double kendall = 1.0 / (2.0 * t + 1.0);
    const std::pair<double, double> value{ic.spearman,
                                          (3.0 * kendall - ic.spearman) / 2.0};
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(t, value);
    return value;
}

} // namespace

TheoreticalCoefficients theoretical(const DistributionSpec& spec) {
    spec.validate();
    const double t = spec.t;
    TheoreticalCoefficients out;

    switch (spec.family) {
        case Family::normal:
            out.pearson = t;
            out.spearman = 6.0 / kPi * std::asin(0.5 * t);
            out.kendall = 2.0 / kPi * std::asin(t);
            break;
        case Family::pareto: {
            if (t > 2.0) out.pearson = 1.0 / t;
            out.kendall = 1.0 / (2.0 * t + 1.0);
            const auto [spearman, mixed] = pareto_rank_values(t);
            out.spearman = spearman;
            out.mixed = mixed;
            return out;
        }
        case Family::exp_pareto:
            if (t > 2.0) out.pearson = -std::sqrt(t * (t - 2.0)) / (2.0 * t - 1.0);
            out.spearman = 12.0 * kLn2 - 9.0;
            out.kendall = -0.5;
            break;
        case Family::exp_pareto_transformed:
            out.pearson = -1.0 / std::sqrt(3.0);
            out.spearman = 12.0 * kLn2 - 9.0;
            out.kendall = -0.5;
            break;
        case Family::fgm:
            out.pearson = 0.0;
            out.spearman = 0.0;
            out.kendall = 0.0;
            break;
    }
    out.mixed = (3.0 * out.kendall - out.spearman) / 2.0;
    return out;
}

double marginal_h(const DistributionSpec& spec, double x) {
    switch (spec.family) {
        case Family::normal:
            return norm_cdf(x);
        case Family::pareto:
            if (x <= 0.0) return 0.0;
            return 1.0 - std::pow(1.0 + x, -spec.t);
        case Family::exp_pareto:
        case Family::exp_pareto_transformed:
            if (x <= 0.0) return 0.0;
            return -std::expm1(-x);
        case Family::fgm:
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return x;
    }
    return 0.0;
}

double marginal_g(const DistributionSpec& spec, double y) {
    switch (spec.family) {
        case Family::normal:
            return norm_cdf(y);
        case Family::pareto:
        case Family::exp_pareto:
            if (y <= 0.0) return 0.0;
            return 1.0 - std::pow(1.0 + y, -spec.t);
        case Family::exp_pareto_transformed:
            if (y <= 0.0) return 0.0;
            if (y >= 1.0) return 1.0;
            return y;
        case Family::fgm:
            if (y <= -1.0) return 0.0;
            if (y >= 1.0) return 1.0;
            return 0.5 * (y + 1.0);
    }
    return 0.0;
}

double marginal_h_pdf(const DistributionSpec& spec, double x) {
    switch (spec.family) {
        case Family::normal:
            return norm_pdf(x);
        case Family::pareto:
            if (x <= 0.0) return 0.0;
            return spec.t * std::pow(1.0 + x, -spec.t - 1.0);
        case Family::exp_pareto:
        case Family::exp_pareto_transformed:
            if (x <= 0.0) return 0.0;
            return std::exp(-x);
        case Family::fgm:
            return (x > 0.0 && x < 1.0) ? 1.0 : 0.0;
    }
    return 0.0;
}

double marginal_g_pdf(const DistributionSpec& spec, double y) {
    switch (spec.family) {
        case Family::normal:
            return norm_pdf(y);
        case Family::pareto:
        case Family::exp_pareto:
            if (y <= 0.0) return 0.0;
            return spec.t * std::pow(1.0 + y, -spec.t - 1.0);
        case Family::exp_pareto_transformed:
            return (y > 0.0 && y < 1.0) ? 1.0 : 0.0;
        case Family::fgm:
            return (y > -1.0 && y < 1.0) ? 0.5 : 0.0;
    }
    return 0.0;
}

double marginal_h_inv(const DistributionSpec& spec, double u) {
    switch (spec.family) {
        case Family::normal:
            return norm_quantile(u);
        case Family::pareto:
            return std::pow(1.0 - u, -1.0 / spec.t) - 1.0;
        case Family::exp_pareto:
        case Family::exp_pareto_transformed:
            return -std::log1p(-u);
        case Family::fgm:
            return u;
    }
    return 0.0;
}

double marginal_g_inv(const DistributionSpec& spec, double v) {
    switch (spec.family) {
        case Family::normal:
            return norm_quantile(v);
        case Family::pareto:
        case Family::exp_pareto:
            return std::pow(1.0 - v, -1.0 / spec.t) - 1.0;
        case Family::exp_pareto_transformed:
            return v;
        case Family::fgm:
            return 2.0 * v - 1.0;
    }
    return 0.0;
}

double joint_cdf(const DistributionSpec& spec, double x, double y) {
    const double t = spec.t;
    switch (spec.family) {
        case Family::normal:
            if (std::isinf(x) || std::isinf(y)) {
                if (x == -HUGE_VAL || y == -HUGE_VAL) return 0.0;
                if (x == HUGE_VAL) return norm_cdf(y);
                return norm_cdf(x);
            }
            return binorm_cdf(x, y, t);
        case Family::pareto: {
            if (x <= 0.0 || y <= 0.0) return 0.0;
            return 1.0 - std::pow(1.0 + y, -t) - std::pow(1.0 + x, -t) +
                   std::pow(1.0 + x + y, -t);
        }
        case Family::exp_pareto: {
            if (x <= 0.0 || y <= 0.0) return 0.0;
            const double gy = std::pow(1.0 + y, t);
            return 1.0 - std::exp(-x) - 1.0 / gy + std::exp(-x * gy) / gy;
        }
        case Family::exp_pareto_transformed: {
            if (x <= 0.0 || y <= 0.0) return 0.0;
            if (y >= 1.0) return -std::expm1(-x);
            return y - std::exp(-x) + (1.0 - y) * std::exp(-x / (1.0 - y));
        }
        case Family::fgm: {
            const double xc = std::fmin(std::fmax(x, 0.0), 1.0);
            const double yc = std::fmin(std::fmax(y, -1.0), 1.0);
            if (yc <= 0.0)
                return 0.5 * xc * (yc + 1.0) * (1.0 + t * (1.0 - xc) * yc);
            return 0.5 * xc + 0.5 * xc * yc * (1.0 + t * (1.0 - xc) * (1.0 - yc));
        }
    }
    return 0.0;
}

double density(const DistributionSpec& spec, double x, double y) {
    const double t = spec.t;
    switch (spec.family) {
        case Family::normal: {
            const double omt2 = 1.0 - t * t;
            return std::exp(-(x * x - 2.0 * t * x * y + y * y) / (2.0 * omt2)) /
                   (2.0 * kPi * std::sqrt(omt2));
        }
        case Family::pareto:
            if (x <= 0.0 || y <= 0.0) return 0.0;
            return t * (t + 1.0) * std::pow(1.0 + x + y, -t - 2.0);
        case Family::exp_pareto: {
            if (x <= 0.0 || y <= 0.0) return 0.0;
            const double gy = std::pow(1.0 + y, t);
            return x * t * gy / (1.0 + y) * std::exp(-x * gy);
        }
        case Family::exp_pareto_transformed: {
            if (x <= 0.0 || y <= 0.0 || y >= 1.0) return 0.0;
            const double w = 1.0 - y;
            return x / (w * w) * std::exp(-x / w);
        }
        case Family::fgm:
            if (x <= 0.0 || x >= 1.0 || y <= -1.0 || y >= 1.0) return 0.0;
            return fgm_density_raw(t, x, y);
    }
    return 0.0;
}

double fgm_mean_x_given_y(double t, double y) {
    const double s = (y <= 0.0) ? (2.0 * y + 1.0) : (1.0 - 2.0 * y);
    return 0.5 - t * s / 6.0;
}

double fgm_mean_y_given_x(double /*t*/, double /*x*/) {
    // The two halves of the conditional density cancel exactly.
    return 0.0;
}

SemiIndependenceReport semi_independence_check(const DistributionSpec& spec) {
    spec.validate();
    if (spec.family != Family::fgm)
        throw SpecError("semi-independence check applies to the fgm family");
    SemiIndependenceReport report{};
    report.mean_y_given_x = 0.0;
    report.mean_x_given_y = 0.5 - spec.t / 6.0;
    report.holds = (spec.t == 0.0);
    return report;
}

} // namespace corrsim
