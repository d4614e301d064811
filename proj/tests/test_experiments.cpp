#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "corrsim/experiments.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace corrsim;

namespace {

bool tables_identical(const SummaryTable& a, const SummaryTable& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const SummaryRow& ra = a.rows[i];
        const SummaryRow& rb = b.rows[i];
        if (std::memcmp(&ra.mean, &rb.mean, sizeof ra.mean) != 0) return false;
        if (std::memcmp(&ra.variance, &rb.variance, sizeof ra.variance) != 0)
            return false;
        if (std::memcmp(&ra.std_error, &rb.std_error, sizeof ra.std_error) != 0)
            return false;
        if (ra.redraws != rb.redraws || ra.failures != rb.failures) return false;
    }
    return true;
}

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.family = Family::normal;
    config.t_grid = {-0.7, 0.3};
    config.n = 60;
    config.reps = 50;
    config.master_seed = 12345;
    return config;
}

} // namespace

TEST_CASE("config validation") {
    ExperimentConfig config = small_config();
    config.t_grid.clear();
    CHECK_THROWS_AS(config.validate(), SpecError);
    config = small_config();
    config.t_grid = {1.5};  // outside the normal domain
    CHECK_THROWS_AS(config.validate(), SpecError);
    config = small_config();
    config.n = 1;
    CHECK_THROWS_AS(config.validate(), SpecError);
    config = small_config();
    config.reps = 0;
    CHECK_THROWS_AS(config.validate(), SpecError);
}

TEST_CASE("identical configs give bitwise identical tables") {
    const ExperimentConfig config = small_config();
    CHECK(tables_identical(run_table(config), run_table(config)));
}

TEST_CASE("parallel and serial paths agree bitwise") {
    const ExperimentConfig config = small_config();
    const SummaryTable serial = run_table_serial(config);
    CHECK(tables_identical(serial, run_table(config)));

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const SummaryTable one = run_table(config);
    omp_set_num_threads(saved);
    CHECK(tables_identical(serial, one));
#endif
}

TEST_CASE("run means land near theory on a quick normal run") {
    ExperimentConfig config = small_config();
    config.n = 400;
    config.reps = 300;
    config.t_grid = {0.7};
    const SummaryTable table = run_table(config);
    const SummaryRow& row = table.rows[0];
    const auto tc = theoretical({Family::normal, 0.7});

    CHECK(std::abs(row.mean.pearson - 0.7) <= 5.0 * row.std_error.pearson);
    CHECK(std::abs(row.mean.kendall - tc.kendall) <= 5.0 * row.std_error.kendall);
    const double expected_spearman =
        expected_spearman_mean(tc.spearman, tc.kendall, config.n);
    CHECK(std::abs(row.mean.spearman - expected_spearman) <=
          5.0 * row.std_error.spearman);
    CHECK(row.replicates == config.reps);
    CHECK(row.failures == 0);
    CHECK(row.variance.pearson > 0.0);
}

TEST_CASE("zero contamination reduces to the plain table") {
    ExperimentConfig config = small_config();
    config.contaminate = 0;
    CHECK(tables_identical(run_table(config), run_contaminated(config)));
}

TEST_CASE("outliers at the sample mean barely move pearson") {
    Rng rng = substream(5150, 0);
    const BivariateSample base = sample({Family::normal, 0.5}, 200, rng);
    const double clean = pearson_rho(base);

    OutlierRule at_mean;
    at_mean.offset_sd = 0.0;
    at_mean.direction = +1;
    for (int count : {1, 2, 5}) {
        BivariateSample contaminated = base;
        append_outliers(contaminated, {Family::normal, 0.5}, count, at_mean);
        CHECK(contaminated.size() == base.size() + count);
        const double shifted = pearson_rho(contaminated);
        CHECK(std::abs(shifted - clean) <= 3.0 * count / 200.0);
    }
}

TEST_CASE("opposing outliers break pearson but not the rank coefficients") {
    ExperimentConfig config;
    config.family = Family::normal;
    config.t_grid = {-0.99};
    config.n = 500;
    config.reps = 60;
    config.master_seed = 31415;
    config.contaminate = 5;
    const SummaryTable table = run_contaminated(config);
    const SummaryRow& row = table.rows[0];

    CHECK(std::abs(row.mean.pearson) < 0.65);
    CHECK(row.mean.kendall < -0.85);
    CHECK(row.mean.spearman < -0.9);
    CHECK(row.mean.mixed < -0.8);
}

TEST_CASE("tie-producing samplers are redrawn deterministically") {
    // Every first attempt yields tied x values; retries are clean.
    const SamplerFn flaky = [](const DistributionSpec& spec, std::size_t n,
                               Rng& rng) {
        BivariateSample s = sample(spec, n, rng);
        if (rng.uniform() < 0.5) s.x[1] = s.x[0];
        return s;
    };
    ExperimentConfig config = small_config();
    config.reps = 40;
    const SummaryTable a = run_table_with_sampler(config, flaky, true, false);
    const SummaryTable b = run_table_with_sampler(config, flaky, false, false);
    CHECK(tables_identical(a, b));
    CHECK(a.rows[0].redraws > 0);
    CHECK(a.rows[0].failures == 0);
    CHECK(a.rows[0].replicates == config.reps);
}

TEST_CASE("hopeless samplers exhaust their attempts") {
    const SamplerFn broken = [](const DistributionSpec& spec, std::size_t n,
                                Rng& rng) {
        BivariateSample s = sample(spec, n, rng);
        s.x[1] = s.x[0];
        return s;
    };
    ExperimentConfig config = small_config();
    config.reps = 5;
    config.max_attempts = 3;
    const SummaryTable table = run_table_with_sampler(config, broken, true, false);
    CHECK(table.rows[0].failures == 5);
    CHECK(table.failures_total() == 10);
    CHECK(table.rows[0].replicates == 0);
}

TEST_CASE("meta estimates of a vector with itself are exactly one") {
    // Duplicated entries exercise the index tie-break.
    const std::vector<double> v{0.5, -0.25, 0.5, 0.125, 0.75, -0.25, 0.0};
    const MetaEstimates self = meta_estimates(v, v);
    CHECK(self.pearson == 1.0);
    CHECK(self.spearman == 1.0);
    CHECK(self.kendall == 1.0);
}

TEST_CASE("meta estimates match the plain estimators on tie-free vectors") {
    Rng rng(2222);
    std::vector<double> a(40), b(40);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.normal();
        b[i] = 0.6 * a[i] + rng.normal();
    }
    const MetaEstimates meta = meta_estimates(a, b);
    BivariateSample s;
    s.x = a;
    s.y = b;
    const CoefficientSet cs = coefficient_set(s);
    CHECK(meta.pearson == doctest::Approx(cs.pearson).epsilon(1e-14));
    CHECK(meta.spearman == doctest::Approx(cs.spearman).epsilon(1e-14));
    CHECK(meta.kendall == doctest::Approx(cs.kendall).epsilon(1e-14));
}

TEST_CASE("kendall vectors across datasets really do contain lattice ties") {
    // Kendall estimates live on the grid {1 - 4k / (n(n-1))}, so a group of
    // datasets produces exact ties; this is what the index tie-break is for.
    DistributionSpec spec{Family::normal, -0.99};
    std::vector<double> kendalls(100);
    for (std::size_t d = 0; d < kendalls.size(); ++d) {
        Rng rng = substream(13579, d);
        kendalls[d] = coefficient_set(sample(spec, 100, rng)).kendall;
    }
    std::sort(kendalls.begin(), kendalls.end());
    bool any_tie = false;
    for (std::size_t i = 1; i < kendalls.size(); ++i)
        any_tie = any_tie || kendalls[i] == kendalls[i - 1];
    CHECK(any_tie);
    // The meta estimates stay well defined on exactly this kind of input.
    const MetaEstimates self = meta_estimates(kendalls, kendalls);
    CHECK(self.spearman == 1.0);
    CHECK(self.kendall == 1.0);
}

TEST_CASE("meta correlation runner is deterministic and sane") {
    MetaConfig config;
    config.family = Family::normal;
    config.t = -0.9;
    config.group_size = 40;
    config.reps = 60;
    config.master_seed = 777;

    const MetaCorrelationReport a = run_meta_correlation(config);
    const MetaCorrelationReport b = run_meta_correlation(config);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].mean.pearson == b.cells[i].mean.pearson);
        CHECK(a.cells[i].mean.spearman == b.cells[i].mean.spearman);
        CHECK(a.cells[i].mean.kendall == b.cells[i].mean.kendall);
    }

    // Rank coefficients computed from the same datasets co-move strongly.
    const MetaCell& cell = a.cell(Coefficient::spearman, Coefficient::kendall);
    CHECK(cell.mean.pearson > 0.8);
    const MetaCell& km = a.cell(Coefficient::kendall, Coefficient::mixed);
    CHECK(km.mean.pearson > 0.9);
}

TEST_CASE("bias formulas at small n") {
    const auto report = check_bias_formulas({Family::normal, 0.7}, {5, 10}, 20000, 99);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        INFO("n = ", row.n);
        CHECK(std::abs(row.spearman_z) <= 4.0);
        CHECK(std::abs(row.mixed_z) <= 4.0);
    }
    // Formula spot checks at n = 5: both reduce to simple fractions.
    const auto tc = theoretical({Family::normal, 0.7});
    CHECK(report.rows[0].spearman_expected ==
          doctest::Approx((3.0 * tc.spearman + 3.0 * tc.kendall) / 6.0));
    CHECK(report.rows[0].mixed_expected ==
          doctest::Approx((15.0 * tc.kendall - 3.0 * tc.spearman) / 12.0));
}

TEST_CASE("pearson extension flags") {
    const PearsonExtension following = extend_pearson({Family::pareto, 0.5}, 300, 300, 4242);
    CHECK(following.trend_following);
    CHECK(following.stable);
    CHECK(!following.theoretical_pearson.has_value());
    CHECK(following.value > 0.5);

    const PearsonExtension violating =
        extend_pearson({Family::exp_pareto, 0.1}, 300, 300, 4242);
    CHECK(!violating.trend_following);
    CHECK(std::abs(violating.value) < 0.2);
    CHECK(violating.rank_kendall < -0.4);

    const PearsonExtension defined = extend_pearson({Family::pareto, 3.0}, 200, 100, 1);
    REQUIRE(defined.theoretical_pearson.has_value());
    CHECK(*defined.theoretical_pearson == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("expected mean formulas") {
    CHECK(expected_spearman_mean(0.6, 0.4, 5) == doctest::Approx((3 * 0.6 + 3 * 0.4) / 6.0));
    CHECK(expected_mixed_mean(0.6, 0.4, 5) ==
          doctest::Approx((15.0 * 0.4 - 3.0 * 0.6) / 12.0));
    // Consistency: mixed expectation equals the blend of the component means.
    const double es = expected_spearman_mean(0.6, 0.4, 37);
    CHECK(expected_mixed_mean(0.6, 0.4, 37) ==
          doctest::Approx(1.5 * 0.4 - 0.5 * es).epsilon(1e-14));

    // Independence keeps both expectations at zero.
    CHECK(expected_spearman_mean(0.0, 0.0, 12) == 0.0);
    CHECK(expected_mixed_mean(0.0, 0.0, 12) == 0.0);

    // Asymptotic unbiasedness: the finite-sample mean approaches the limit.
    const auto tc = theoretical({Family::normal, 0.7});
    CHECK(std::abs(expected_mixed_mean(tc.spearman, tc.kendall, 2000) - tc.mixed) <
          1e-2);
    CHECK(std::abs(expected_spearman_mean(tc.spearman, tc.kendall, 2000) -
                   tc.spearman) < 1e-2);
}
