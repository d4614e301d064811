#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "corrsim/distributions.hpp"
#include "corrsim/estimators.hpp"

namespace corrsim {

enum class Coefficient { pearson, spearman, kendall, mixed };
const char* coefficient_name(Coefficient c);

// Contamination rule: points displaced from the sample mean by offset_sd
// sample standard deviations, with increasing jitter so outliers never tie.
// direction +1 puts them above the data in both coordinates, -1 above in x
// and below in y; 0 picks the sign that opposes the family's theoretical
// Kendall coefficient.
struct OutlierRule {
    double offset_sd = 10.0;
    int direction = 0;
};

struct ExperimentConfig {
    Family family = Family::normal;
    std::vector<double> t_grid;
    std::size_t n = 1000;
    std::size_t reps = 1000;
    std::uint64_t master_seed = 0;
    int contaminate = 0;
    OutlierRule outlier_rule{};
    int max_attempts = 64;  // tie-redraw cap per replicate

    void validate() const;
};

struct CoefficientStats {
    double pearson = 0.0;
    double spearman = 0.0;
    double kendall = 0.0;
    double mixed = 0.0;

    double operator[](Coefficient c) const;
};

struct SummaryRow {
    double t = 0.0;
    std::size_t replicates = 0;     // successful replicates aggregated
    CoefficientStats mean;
    CoefficientStats variance;      // unbiased, divide by replicates-1
    CoefficientStats std_error;     // sqrt(variance / replicates)
    std::uint64_t redraws = 0;      // replicates redrawn after a tie
    std::uint64_t failures = 0;     // replicates abandoned after max_attempts
};

struct SummaryTable {
    ExperimentConfig config;
    std::vector<SummaryRow> rows;

    std::uint64_t failures_total() const;
    std::size_t replicates_requested() const;
};

using SamplerFn =
    std::function<BivariateSample(const DistributionSpec&, std::size_t, Rng&)>;

// Monte Carlo sweep over the parameter grid. Replicate k of grid entry g
// draws from the child stream keyed (master_seed, g, k, attempt), so results
// are bitwise identical no matter how many threads run, and a replicate hit
// by a tie is redrawn on its own next substream.
SummaryTable run_table(const ExperimentConfig& config);

// Plain-loop reference path; must produce bitwise identical tables.
SummaryTable run_table_serial(const ExperimentConfig& config);

// As run_table, with config.contaminate outliers appended to every replicate.
SummaryTable run_contaminated(const ExperimentConfig& config);

// Test seam: inject the sampler, choose the execution path.
SummaryTable run_table_with_sampler(const ExperimentConfig& config,
                                    const SamplerFn& sampler, bool parallel,
                                    bool contaminated);

// Appends rule-driven outliers to the sample in place.
void append_outliers(BivariateSample& sample, const DistributionSpec& spec,
                     int count, const OutlierRule& rule);

// ---- correlation between correlation coefficients -------------------------

struct MetaConfig {
    Family family = Family::normal;
    double t = 0.0;
    std::size_t group_size = 100;  // datasets per repetition, also dataset size
    std::size_t reps = 1000;
    std::uint64_t master_seed = 0;
};

struct MetaEstimates {
    double pearson = 0.0;
    double spearman = 0.0;
    double kendall = 0.0;
};

// Coefficients between two paired vectors. Rank ties (Kendall estimates live
// on a lattice, so equal entries do occur) are broken by pairing index, which
// keeps the result deterministic.
MetaEstimates meta_estimates(std::span<const double> a, std::span<const double> b);

struct MetaCell {
    Coefficient first;
    Coefficient second;
    MetaEstimates mean;  // averaged over repetitions
};

struct MetaCorrelationReport {
    MetaConfig config;
    std::array<MetaCell, 6> cells;  // unordered kind pairs, lexicographic

    const MetaCell& cell(Coefficient a, Coefficient b) const;
};

MetaCorrelationReport run_meta_correlation(const MetaConfig& config);

// ---- finite-sample expectations and their Monte Carlo check ---------------

// Exact mean of the Spearman estimator at sample size n.
double expected_spearman_mean(double spearman, double kendall, std::size_t n);
// Exact mean of the mixed estimator at sample size n.
double expected_mixed_mean(double spearman, double kendall, std::size_t n);

struct BiasRow {
    std::size_t n = 0;
    double spearman_mean = 0.0, spearman_expected = 0.0, spearman_se = 0.0,
           spearman_z = 0.0;
    double mixed_mean = 0.0, mixed_expected = 0.0, mixed_se = 0.0, mixed_z = 0.0;
};

struct BiasReport {
    DistributionSpec spec;
    std::size_t reps = 0;
    std::uint64_t master_seed = 0;
    std::vector<BiasRow> rows;
};

BiasReport check_bias_formulas(const DistributionSpec& spec,
                               const std::vector<std::size_t>& n_grid,
                               std::size_t reps, std::uint64_t master_seed);

// ---- Pearson extension for families without second moments ----------------

struct PearsonExtension {
    DistributionSpec spec;
    std::size_t n = 0, reps = 0;
    std::uint64_t master_seed = 0;

    double value = 0.0;  // mean Pearson coefficient across replicates
    double first_half = 0.0, second_half = 0.0;
    bool stable = false;  // half-sample means differ by less than 2 SE

    double rank_spearman = 0.0, rank_kendall = 0.0, rank_mixed = 0.0;
    double gap_spearman = 0.0, gap_kendall = 0.0, gap_mixed = 0.0;

    // Follows the trend of the rank coefficients when the extension lies
    // within their span (closest gap no larger than their spread).
    bool trend_following = false;

    std::optional<double> theoretical_pearson;  // present when rho exists
};

PearsonExtension extend_pearson(const DistributionSpec& spec, std::size_t n,
                                std::size_t reps, std::uint64_t master_seed);

} // namespace corrsim
