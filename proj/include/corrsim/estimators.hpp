#pragma once

#include <cstddef>
#include <vector>

#include "corrsim/errors.hpp"
#include "corrsim/sample.hpp"

namespace corrsim {

// The sample reordered by ascending x, with each y carried along with its x
// (the concomitant of the corresponding order statistic).
struct ConcomitantSequence {
    std::vector<double> x_sorted;
    std::vector<double> y_conc;

    std::size_t size() const noexcept { return y_conc.size(); }
};

struct RankVectors {
    // sequential[j-2] = number of concomitants among the first j-1 that are
    // <= y_conc[j-1], for j = 2..n. Values lie in [0, j-1].
    std::vector<int> sequential;
    // full[j] = rank of y_conc[j] among all n concomitants, a permutation of 1..n.
    std::vector<int> full;
};

struct CoefficientSet {
    double pearson;
    double spearman;
    double kendall;
    double mixed;
};

// The single definition of the mixed coefficient. Every code path funnels
// through here so the linear identity holds bit-for-bit.
inline double mixed_from(double kendall, double spearman) {
    return 1.5 * kendall - 0.5 * spearman;
}

// Sorts by x; duplicate x values raise TieError with the colliding original indices.
ConcomitantSequence concomitants(const BivariateSample& sample);

std::vector<int> sequential_ranks(const ConcomitantSequence& conc);
std::vector<int> full_ranks(const ConcomitantSequence& conc);
RankVectors rank_vectors(const ConcomitantSequence& conc);

// Definitional path via sequential ranks, O(n^2). Kept as the reference
// implementation for the merge-sort path.
double kendall_tau(const ConcomitantSequence& conc);

// Merge-sort inversion counting, O(n log n). Equal to kendall_tau.
double kendall_tau_fast(const ConcomitantSequence& conc);

double spearman_rho(const ConcomitantSequence& conc);

// Two-pass centered accumulation: means first, then centered products.
double pearson_rho(const BivariateSample& sample);

double mixed_coefficient(const ConcomitantSequence& conc);

// All four coefficients over one concomitant pass (fast Kendall path).
CoefficientSet coefficient_set(const BivariateSample& sample);

} // namespace corrsim
