#include <cinttypes>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrsim/estimators.hpp"
#include "corrsim/experiments.hpp"
#include "corrsim/io.hpp"
#include "corrsim/theory.hpp"

namespace {

// Exit codes: 0 ok, 2 config or input, 3 ties, 4 degenerate data,
// 5 too many failed replicates.
enum ExitCode {
    kOk = 0,
    kConfigError = 2,
    kTieError = 3,
    kDegenerateError = 4,
    kReplicateFailure = 5,
};

corrsim::Family parse_family(const std::string& name) {
    if (name.empty())
        throw corrsim::SpecError("a distribution family is required "
                                 "(positional or --family)");
    const auto family = corrsim::family_from_name(name);
    if (!family) throw corrsim::SpecError("unknown family '" + name + "'");
    return *family;
}

std::vector<double> default_grid(corrsim::Family family) {
    switch (family) {
        case corrsim::Family::normal:
            return {-0.99, -0.7, -0.3, -0.1, 0.1, 0.3, 0.7, 0.99};
        case corrsim::Family::pareto:
        case corrsim::Family::exp_pareto:
            return {0.1, 0.5, 1.0, 2.1, 5.0, 10.0, 50.0, 100.0};
        case corrsim::Family::exp_pareto_transformed:
            return {0.0};
        case corrsim::Family::fgm:
            return {-1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0};
    }
    return {};
}

void emit_record(const corrsim::OutputRecord& record, const std::string& format,
                 const std::string& out_path) {
    if (out_path.empty()) return;
    const std::string content =
        format == "json" ? corrsim::to_json(record) : corrsim::to_csv(record);
    corrsim::write_text_file(out_path, content);
    std::printf("wrote %s (%s)\n", out_path.c_str(), format.c_str());
}

int cmd_analyze(const std::string& path, bool no_header) {
    corrsim::CsvOptions options;
    options.no_header = no_header;
    const corrsim::BivariateSample data = corrsim::read_xy_csv(path, options);
    const corrsim::CoefficientSet cs = corrsim::coefficient_set(data);

    std::printf("n        %zu\n", data.size());
    std::printf("pearson  %.4f\n", cs.pearson);
    std::printf("spearman %.4f\n", cs.spearman);
    std::printf("kendall  %.4f\n", cs.kendall);
    std::printf("mixed    %.4f\n", cs.mixed);
    return kOk;
}

int cmd_theory(corrsim::Family family, std::vector<double> grid,
               const std::string& format, const std::string& out_path) {
    if (grid.empty()) grid = default_grid(family);
    for (double t : grid) corrsim::DistributionSpec{family, t}.validate();

    std::printf("family=%s\n", corrsim::family_name(family));
    std::printf("%10s %10s %10s %10s %10s\n", "t", "pearson", "spearman",
                "kendall", "mixed");
    for (double t : grid) {
        const auto tc = corrsim::theoretical(corrsim::DistributionSpec{family, t});
        if (tc.pearson)
            std::printf("%10.4f %10.4f", t, *tc.pearson);
        else
            std::printf("%10.4f %10s", t, "--");
        std::printf(" %10.4f %10.4f %10.4f\n", tc.spearman, tc.kendall, tc.mixed);
    }

    emit_record(corrsim::record_from_theory(family, grid), format, out_path);
    return kOk;
}

struct SimulateOptions {
    corrsim::Family family = corrsim::Family::normal;
    std::vector<double> grid;
    std::vector<std::size_t> n_values;
    std::size_t reps = 1000;
    std::optional<std::uint64_t> seed;
    int contaminate = 0;
    std::size_t meta_group = 0;
    bool bias = false;
    bool extend = false;
    std::string format = "csv";
    std::string out_path;
};

void print_summary_table(const corrsim::SummaryTable& table) {
    using corrsim::Coefficient;
    for (const auto& row : table.rows) {
        std::printf("t=%9.4f ", row.t);
        for (Coefficient c : {Coefficient::pearson, Coefficient::spearman,
                              Coefficient::kendall, Coefficient::mixed}) {
            std::printf(" %s %8.4f (%.1e)", corrsim::coefficient_name(c),
                        row.mean[c], row.variance[c]);
        }
        if (row.redraws) std::printf(" redraws=%" PRIu64, row.redraws);
        if (row.failures) std::printf(" failures=%" PRIu64, row.failures);
        std::printf("\n");
    }
}

int cmd_simulate(const SimulateOptions& options) {
    const int modes = (options.meta_group > 0 ? 1 : 0) + (options.bias ? 1 : 0) +
                      (options.extend ? 1 : 0);
    if (modes > 1)
        throw corrsim::SpecError("choose at most one of --meta, --bias, --extend-pearson");

    std::uint64_t seed;
    if (options.seed) {
        seed = *options.seed;
    } else {
        seed = std::random_device{}();
        seed = (seed << 32) ^ std::random_device{}();
        std::printf("seed (from entropy): %" PRIu64 "\n", seed);
    }

    std::vector<double> grid = options.grid;
    if (grid.empty()) grid = default_grid(options.family);
    const std::size_t n =
        options.n_values.empty() ? 1000 : options.n_values.front();

    if (options.meta_group > 0) {
        if (grid.size() != 1)
            throw corrsim::SpecError("--meta needs a single --t value");
        corrsim::MetaConfig config;
        config.family = options.family;
        config.t = grid.front();
        config.group_size = options.meta_group;
        config.reps = options.reps;
        config.master_seed = seed;
        const auto report = corrsim::run_meta_correlation(config);
        for (const auto& cell : report.cells) {
            std::printf("(%s, %s): pearson %8.4f  spearman %8.4f  kendall %8.4f\n",
                        corrsim::coefficient_name(cell.first),
                        corrsim::coefficient_name(cell.second), cell.mean.pearson,
                        cell.mean.spearman, cell.mean.kendall);
        }
        emit_record(corrsim::record_from(report), options.format, options.out_path);
        return kOk;
    }

    if (options.bias) {
        if (grid.size() != 1)
            throw corrsim::SpecError("--bias needs a single --t value");
        std::vector<std::size_t> n_grid = options.n_values;
        if (n_grid.empty()) n_grid = {5, 10};
        const auto report = corrsim::check_bias_formulas(
            corrsim::DistributionSpec{options.family, grid.front()}, n_grid,
            options.reps, seed);
        for (const auto& row : report.rows) {
            std::printf("n=%4zu spearman %8.5f vs %8.5f (z=%+.2f)   "
                        "mixed %8.5f vs %8.5f (z=%+.2f)\n",
                        row.n, row.spearman_mean, row.spearman_expected,
                        row.spearman_z, row.mixed_mean, row.mixed_expected,
                        row.mixed_z);
        }
        emit_record(corrsim::record_from(report), options.format, options.out_path);
        return kOk;
    }

    if (options.extend) {
        if (grid.size() != 1)
            throw corrsim::SpecError("--extend-pearson needs a single --t value");
        const auto ext = corrsim::extend_pearson(
            corrsim::DistributionSpec{options.family, grid.front()}, n,
            options.reps, seed);
        std::printf("extended pearson %8.4f (%s, halves %.4f / %.4f)\n", ext.value,
                    ext.stable ? "stable" : "UNSTABLE", ext.first_half,
                    ext.second_half);
        std::printf("rank means: spearman %8.4f  kendall %8.4f  mixed %8.4f\n",
                    ext.rank_spearman, ext.rank_kendall, ext.rank_mixed);
        std::printf("%s\n", ext.trend_following ? "trend-following"
                                                : "trend-violating");
        if (ext.theoretical_pearson)
            std::printf("theoretical pearson %8.4f\n", *ext.theoretical_pearson);
        emit_record(corrsim::record_from(ext), options.format, options.out_path);
        return kOk;
    }

    corrsim::ExperimentConfig config;
    config.family = options.family;
    config.t_grid = grid;
    config.n = n;
    config.reps = options.reps;
    config.master_seed = seed;
    config.contaminate = options.contaminate;

    const corrsim::SummaryTable table = options.contaminate > 0
                                            ? corrsim::run_contaminated(config)
                                            : corrsim::run_table(config);
    print_summary_table(table);
    emit_record(corrsim::record_from(table), options.format, options.out_path);

    const auto requested = static_cast<double>(table.replicates_requested());
    const auto failed = static_cast<double>(table.failures_total());
    if (failed > 0.01 * requested) {
        std::fprintf(stderr, "error: %.0f of %.0f replicates failed\n", failed,
                     requested);
        return kReplicateFailure;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation coefficients: estimators, exact samplers and "
                 "reproducible Monte Carlo tables"};
    app.require_subcommand(1);

    // analyze
    std::string csv_path;
    bool no_header = false;
    auto* analyze = app.add_subcommand("analyze",
                                       "compute the four coefficients from a "
                                       "two-column CSV file");
    analyze->add_option("csv", csv_path, "input file")->required();
    analyze->add_flag("--no-header", no_header,
                      "first row is data (default: skip a non-numeric first row)");

    // theory
    std::string theory_family_name;
    std::vector<double> theory_grid;
    std::string theory_format = "csv";
    std::string theory_out;
    auto* theory = app.add_subcommand("theory",
                                      "theoretical coefficient values over a "
                                      "parameter grid");
    theory->add_option("FAMILY", theory_family_name,
                       "normal|pareto|exp-pareto|exp-pareto-transformed|fgm");
    theory->add_option("--family", theory_family_name, "family, as a flag");
    theory->add_option("--t", theory_grid, "parameter values (repeatable)");
    theory->add_option("--format", theory_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    theory->add_option("--out", theory_out, "write an output record here");

    // simulate
    SimulateOptions sim;
    std::string sim_family_name;
    std::uint64_t seed_value = 0;
    auto* simulate = app.add_subcommand("simulate",
                                        "Monte Carlo experiments with "
                                        "reproducible seeding");
    simulate->add_option("FAMILY", sim_family_name,
                         "normal|pareto|exp-pareto|exp-pareto-transformed|fgm");
    simulate->add_option("--family", sim_family_name, "family, as a flag");
    simulate->add_option("--t", sim.grid, "parameter values (repeatable)");
    simulate->add_option("--n", sim.n_values,
                         "sample size (repeatable for --bias)");
    simulate->add_option("--reps", sim.reps, "replicates per grid point");
    auto* seed_opt = simulate->add_option("--seed", seed_value,
                                          "master seed (omit for entropy)");
    simulate->add_option("--contaminate", sim.contaminate,
                         "append this many outliers per replicate");
    simulate->add_option("--meta", sim.meta_group,
                         "meta-correlation mode with this group size");
    simulate->add_flag("--bias", sim.bias,
                       "compare small-sample means with their exact expectations");
    simulate->add_flag("--extend-pearson", sim.extend,
                       "simulation-based Pearson extension diagnostics");
    simulate->add_option("--format", sim.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--out", sim.out_path, "write an output record here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*analyze) return cmd_analyze(csv_path, no_header);
        if (*theory)
            return cmd_theory(parse_family(theory_family_name), theory_grid,
                              theory_format, theory_out);
        sim.family = parse_family(sim_family_name);
        if (!seed_opt->empty()) sim.seed = seed_value;
        return cmd_simulate(sim);
    } catch (const corrsim::TieError& e) {
        std::fprintf(stderr, "error: %s (rows %zu and %zu)\n", e.what(),
                     e.first_index(), e.second_index());
        return kTieError;
    } catch (const corrsim::DegenerateError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kDegenerateError;
    } catch (const corrsim::SpecError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const corrsim::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const corrsim::QuadratureError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
}
