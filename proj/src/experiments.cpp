#include "corrsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace corrsim {

namespace {

template <typename Fn>
void for_each_index(std::size_t count, bool parallel, Fn&& fn) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long long k = 0; k < static_cast<long long>(count); ++k)
            fn(static_cast<std::size_t>(k));
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t k = 0; k < count; ++k) fn(k);
}

struct ReplicateOutcome {
    CoefficientSet coeffs{};
    std::uint32_t attempts = 0;
    bool ok = false;
};

ReplicateOutcome one_replicate(const DistributionSpec& spec,
                               const ExperimentConfig& config,
                               const SamplerFn& sampler, bool contaminated,
                               std::size_t grid_index, std::size_t rep_index) {
    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
        Rng rng = substream(config.master_seed, grid_index, rep_index,
                            static_cast<std::uint64_t>(attempt));
        BivariateSample sample_data = sampler(spec, config.n, rng);
        if (contaminated && config.contaminate > 0)
            append_outliers(sample_data, spec, config.contaminate,
                            config.outlier_rule);
        try {
            return {coefficient_set(sample_data),
                    static_cast<std::uint32_t>(attempt + 1), true};
        } catch (const TieError&) {
        } catch (const DegenerateError&) {
        } catch (const SpecError&) {
            // Non-finite draw (extreme tail overflow); redraw like a tie.
        }
    }
    return {{}, static_cast<std::uint32_t>(config.max_attempts), false};
}

// Ordered fold over per-replicate results; the reduction order is fixed by
// replicate index, which is what makes the table thread-count independent.
SummaryRow aggregate_row(double t, const std::vector<ReplicateOutcome>& outcomes) {
    SummaryRow row;
    row.t = t;

    auto accumulate = [&](auto pick, double& mean, double& variance, double& se) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& outcome : outcomes) {
            if (!outcome.ok) continue;
            sum += pick(outcome.coeffs);
            ++count;
        }
        if (count == 0) return;
        mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (const auto& outcome : outcomes) {
            if (!outcome.ok) continue;
            const double d = pick(outcome.coeffs) - mean;
            ss += d * d;
        }
        variance = count > 1 ? ss / static_cast<double>(count - 1) : 0.0;
        se = std::sqrt(variance / static_cast<double>(count));
        row.replicates = count;
    };

    accumulate([](const CoefficientSet& c) { return c.pearson; }, row.mean.pearson,
               row.variance.pearson, row.std_error.pearson);
    accumulate([](const CoefficientSet& c) { return c.spearman; }, row.mean.spearman,
               row.variance.spearman, row.std_error.spearman);
    accumulate([](const CoefficientSet& c) { return c.kendall; }, row.mean.kendall,
               row.variance.kendall, row.std_error.kendall);
    accumulate([](const CoefficientSet& c) { return c.mixed; }, row.mean.mixed,
               row.variance.mixed, row.std_error.mixed);

    for (const auto& outcome : outcomes) {
        if (outcome.ok)
            row.redraws += outcome.attempts - 1;
        else
            row.failures += 1;
    }
    return row;
}

SamplerFn default_sampler() {
    return [](const DistributionSpec& spec, std::size_t n, Rng& rng) {
        return sample(spec, n, rng);
    };
}

} // namespace

const char* coefficient_name(Coefficient c) {
    switch (c) {
        case Coefficient::pearson: return "pearson";
        case Coefficient::spearman: return "spearman";
        case Coefficient::kendall: return "kendall";
        case Coefficient::mixed: return "mixed";
    }
    return "?";
}

double CoefficientStats::operator[](Coefficient c) const {
    switch (c) {
        case Coefficient::pearson: return pearson;
        case Coefficient::spearman: return spearman;
        case Coefficient::kendall: return kendall;
        case Coefficient::mixed: return mixed;
    }
    return 0.0;
}

void ExperimentConfig::validate() const {
    if (t_grid.empty()) throw SpecError("experiment: empty parameter grid");
    for (double t : t_grid) DistributionSpec{family, t}.validate();
    if (n < 2) throw SpecError("experiment: n must be at least 2");
    if (reps < 1) throw SpecError("experiment: reps must be at least 1");
    if (contaminate < 0) throw SpecError("experiment: negative outlier count");
    if (max_attempts < 1) throw SpecError("experiment: max_attempts must be positive");
}

std::uint64_t SummaryTable::failures_total() const {
    std::uint64_t total = 0;
    for (const auto& row : rows) total += row.failures;
    return total;
}

std::size_t SummaryTable::replicates_requested() const {
    return config.reps * config.t_grid.size();
}

void append_outliers(BivariateSample& sample_data, const DistributionSpec& spec,
                     int count, const OutlierRule& rule) {
    if (count <= 0) return;
    const std::size_t n = sample_data.size();

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += sample_data.x[i];
        my += sample_data.y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (sample_data.x[i] - mx) * (sample_data.x[i] - mx);
        syy += (sample_data.y[i] - my) * (sample_data.y[i] - my);
    }
    const double sx = std::sqrt(sxx / static_cast<double>(n - 1));
    const double sy = std::sqrt(syy / static_cast<double>(n - 1));

    int direction = rule.direction;
    if (direction == 0)
        direction = theoretical(spec).kendall <= 0.0 ? +1 : -1;

    for (int j = 0; j < count; ++j) {
        // Increasing jitter keeps the outliers tie-free among themselves.
        const double offset = rule.offset_sd + (j + 1) * 1e-9;
        sample_data.push_back(mx + sx * offset, my + direction * sy * offset);
    }
}

SummaryTable run_table_with_sampler(const ExperimentConfig& config,
                                    const SamplerFn& sampler, bool parallel,
                                    bool contaminated) {
    config.validate();

    SummaryTable table;
    table.config = config;
    table.rows.reserve(config.t_grid.size());

    for (std::size_t g = 0; g < config.t_grid.size(); ++g) {
        const DistributionSpec spec{config.family, config.t_grid[g]};
        std::vector<ReplicateOutcome> outcomes(config.reps);
        for_each_index(config.reps, parallel, [&](std::size_t k) {
            outcomes[k] = one_replicate(spec, config, sampler, contaminated, g, k);
        });
        table.rows.push_back(aggregate_row(config.t_grid[g], outcomes));
    }
    return table;
}

SummaryTable run_table(const ExperimentConfig& config) {
    return run_table_with_sampler(config, default_sampler(), true, false);
}

SummaryTable run_table_serial(const ExperimentConfig& config) {
    return run_table_with_sampler(config, default_sampler(), false, false);
}

SummaryTable run_contaminated(const ExperimentConfig& config) {
    return run_table_with_sampler(config, default_sampler(), true, true);
}

// ---- meta-correlation ------------------------------------------------------

namespace {

// Ranks with exact ties broken by index; deterministic for lattice-valued
// inputs such as Kendall estimates.
std::vector<int> index_broken_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return a < b;
    });
    std::vector<int> ranks(n);
    for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<int>(r) + 1;
    return ranks;
}

std::uint64_t count_inversions(std::vector<double>& work) {
    std::uint64_t inversions = 0;
    for (std::size_t i = 1; i < work.size(); ++i) {
        const double v = work[i];
        std::size_t j = i;
        while (j > 0 && work[j - 1] > v) {
            work[j] = work[j - 1];
            --j;
        }
        inversions += i - j;
        work[j] = v;
    }
    return inversions;
}

double plain_pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace

MetaEstimates meta_estimates(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (n != b.size() || n < 3) throw SpecError("meta: need paired vectors, n >= 3");

    MetaEstimates out;
    out.pearson = plain_pearson(a, b);

    const std::vector<int> ra = index_broken_ranks(a);
    const std::vector<int> rb = index_broken_ranks(b);
    std::uint64_t sum_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t d = static_cast<std::int64_t>(ra[i]) - rb[i];
        sum_sq += static_cast<std::uint64_t>(d * d);
    }
    const double nn = static_cast<double>(n);
    out.spearman = 1.0 - 6.0 * static_cast<double>(sum_sq) / (nn * nn * nn - nn);

    // Kendall from inversions of b ranks read in a-rank order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return ra[i] < ra[j]; });
    std::vector<double> b_in_a_order(n);
    for (std::size_t i = 0; i < n; ++i)
        b_in_a_order[i] = static_cast<double>(rb[order[i]]);
    const std::uint64_t inversions = count_inversions(b_in_a_order);
    out.kendall = 1.0 - 4.0 * static_cast<double>(inversions) / (nn * (nn - 1.0));
    return out;
}

const MetaCell& MetaCorrelationReport::cell(Coefficient a, Coefficient b) const {
    for (const auto& c : cells) {
        if ((c.first == a && c.second == b) || (c.first == b && c.second == a))
            return c;
    }
    throw SpecError("meta: no such coefficient pair");
}

MetaCorrelationReport run_meta_correlation(const MetaConfig& config) {
    DistributionSpec spec{config.family, config.t};
    spec.validate();
    if (config.group_size < 3) throw SpecError("meta: group_size must be >= 3");
    if (config.reps < 1) throw SpecError("meta: reps must be >= 1");

    static constexpr std::array<std::pair<Coefficient, Coefficient>, 6> kPairs{{
        {Coefficient::pearson, Coefficient::spearman},
        {Coefficient::pearson, Coefficient::kendall},
        {Coefficient::pearson, Coefficient::mixed},
        {Coefficient::spearman, Coefficient::kendall},
        {Coefficient::spearman, Coefficient::mixed},
        {Coefficient::kendall, Coefficient::mixed},
    }};
    constexpr int kMaxAttempts = 64;

    std::vector<std::array<MetaEstimates, 6>> per_rep(config.reps);
    for_each_index(config.reps, true, [&](std::size_t rep) {
        const std::size_t g = config.group_size;
        std::array<std::vector<double>, 4> vecs;
        for (auto& v : vecs) v.resize(g);

        for (std::size_t d = 0; d < g; ++d) {
            for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
                Rng rng = substream(config.master_seed, rep, d,
                                    static_cast<std::uint64_t>(attempt));
                try {
                    const CoefficientSet cs =
                        coefficient_set(sample(spec, g, rng));
                    vecs[0][d] = cs.pearson;
                    vecs[1][d] = cs.spearman;
                    vecs[2][d] = cs.kendall;
                    vecs[3][d] = cs.mixed;
                    break;
                } catch (const TieError&) {
                } catch (const DegenerateError&) {
                } catch (const SpecError&) {
                    // Non-finite draw; redraw like a tie.
                }
            }
        }
        for (std::size_t p = 0; p < kPairs.size(); ++p) {
            const auto a = static_cast<std::size_t>(kPairs[p].first);
            const auto b = static_cast<std::size_t>(kPairs[p].second);
            per_rep[rep][p] = meta_estimates(vecs[a], vecs[b]);
        }
    });

    MetaCorrelationReport report;
    report.config = config;
    for (std::size_t p = 0; p < kPairs.size(); ++p) {
        MetaCell cell{kPairs[p].first, kPairs[p].second, {}};
        for (std::size_t rep = 0; rep < config.reps; ++rep) {
            cell.mean.pearson += per_rep[rep][p].pearson;
            cell.mean.spearman += per_rep[rep][p].spearman;
            cell.mean.kendall += per_rep[rep][p].kendall;
        }
        const double m = static_cast<double>(config.reps);
        cell.mean.pearson /= m;
        cell.mean.spearman /= m;
        cell.mean.kendall /= m;
        report.cells[p] = cell;
    }
    return report;
}

// ---- bias of the rank estimators -------------------------------------------

double expected_spearman_mean(double spearman, double kendall, std::size_t n) {
    const double nn = static_cast<double>(n);
    return ((nn - 2.0) * spearman + 3.0 * kendall) / (nn + 1.0);
}

double expected_mixed_mean(double spearman, double kendall, std::size_t n) {
    const double nn = static_cast<double>(n);
    return (3.0 * nn * kendall - (nn - 2.0) * spearman) / (2.0 * (nn + 1.0));
}

BiasReport check_bias_formulas(const DistributionSpec& spec,
                               const std::vector<std::size_t>& n_grid,
                               std::size_t reps, std::uint64_t master_seed) {
    spec.validate();
    if (reps < 2) throw SpecError("bias check: reps must be >= 2");

    const TheoreticalCoefficients tc = theoretical(spec);
    BiasReport report{spec, reps, master_seed, {}};

    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::size_t n = n_grid[gi];
        if (n < 2) throw SpecError("bias check: n must be >= 2");

        std::vector<double> spearman_values(reps), mixed_values(reps);
        std::vector<char> ok(reps, 0);
        for_each_index(reps, true, [&](std::size_t k) {
            for (int attempt = 0; attempt < 64; ++attempt) {
                Rng rng = substream(master_seed, gi, k,
                                    static_cast<std::uint64_t>(attempt));
                try {
                    const ConcomitantSequence conc =
                        concomitants(sample(spec, n, rng));
                    const double kendall = kendall_tau_fast(conc);
                    const double spearman = spearman_rho(conc);
                    spearman_values[k] = spearman;
                    mixed_values[k] = mixed_from(kendall, spearman);
                    ok[k] = 1;
                    return;
                } catch (const TieError&) {
                }
            }
        });
        for (std::size_t k = 0; k < reps; ++k) {
            if (!ok[k]) throw SpecError("bias check: replicate kept tying");
        }

        auto summarize = [&](const std::vector<double>& values, double expected,
                             double& mean, double& se, double& z) {
            mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(reps);
            double ss = 0.0;
            for (double v : values) ss += (v - mean) * (v - mean);
            se = std::sqrt(ss / static_cast<double>(reps - 1) /
                           static_cast<double>(reps));
            z = (mean - expected) / se;
        };

        BiasRow row;
        row.n = n;
        row.spearman_expected = expected_spearman_mean(tc.spearman, tc.kendall, n);
        row.mixed_expected = expected_mixed_mean(tc.spearman, tc.kendall, n);
        summarize(spearman_values, row.spearman_expected, row.spearman_mean,
                  row.spearman_se, row.spearman_z);
        summarize(mixed_values, row.mixed_expected, row.mixed_mean, row.mixed_se,
                  row.mixed_z);
        report.rows.push_back(row);
    }
    return report;
}

// ---- Pearson extension -------------------------------------------------------

PearsonExtension extend_pearson(const DistributionSpec& spec, std::size_t n,
                                std::size_t reps, std::uint64_t master_seed) {
    spec.validate();
    if (reps < 4) throw SpecError("extension: reps must be >= 4");
    if (n < 2) throw SpecError("extension: n must be >= 2");

    ExperimentConfig config;
    config.family = spec.family;
    config.t_grid = {spec.t};
    config.n = n;
    config.reps = reps;
    config.master_seed = master_seed;

    // One pass over the replicates, keeping per-replicate Pearson values for
    // the split-half stability diagnostic.
    std::vector<ReplicateOutcome> outcomes(reps);
    const SamplerFn sampler = default_sampler();
    for_each_index(reps, true, [&](std::size_t k) {
        outcomes[k] = one_replicate(spec, config, sampler, false, 0, k);
    });
    const SummaryRow row = aggregate_row(spec.t, outcomes);

    PearsonExtension ext;
    ext.spec = spec;
    ext.n = n;
    ext.reps = reps;
    ext.master_seed = master_seed;
    ext.value = row.mean.pearson;
    ext.rank_spearman = row.mean.spearman;
    ext.rank_kendall = row.mean.kendall;
    ext.rank_mixed = row.mean.mixed;

    std::size_t half = 0, rest = 0;
    double sum_half = 0.0, sum_rest = 0.0;
    for (std::size_t k = 0; k < reps; ++k) {
        if (!outcomes[k].ok) continue;
        if (k < reps / 2) {
            sum_half += outcomes[k].coeffs.pearson;
            ++half;
        } else {
            sum_rest += outcomes[k].coeffs.pearson;
            ++rest;
        }
    }
    ext.first_half = half > 0 ? sum_half / static_cast<double>(half) : 0.0;
    ext.second_half = rest > 0 ? sum_rest / static_cast<double>(rest) : 0.0;
    const double se_diff =
        std::sqrt(row.variance.pearson / std::max<std::size_t>(half, 1) +
                  row.variance.pearson / std::max<std::size_t>(rest, 1));
    ext.stable = std::abs(ext.first_half - ext.second_half) < 2.0 * se_diff;

    ext.gap_spearman = std::abs(ext.value - ext.rank_spearman);
    ext.gap_kendall = std::abs(ext.value - ext.rank_kendall);
    ext.gap_mixed = std::abs(ext.value - ext.rank_mixed);

    const double lo = std::min({ext.rank_spearman, ext.rank_kendall, ext.rank_mixed});
    const double hi = std::max({ext.rank_spearman, ext.rank_kendall, ext.rank_mixed});
    const double closest = std::min({ext.gap_spearman, ext.gap_kendall, ext.gap_mixed});
    ext.trend_following = closest <= (hi - lo);

    ext.theoretical_pearson = theoretical(spec).pearson;
    return ext;
}

} // namespace corrsim
