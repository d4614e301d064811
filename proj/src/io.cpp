#include "corrsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corrsim/theory.hpp"

namespace corrsim {

namespace {

bool parse_double(const std::string& field, double* out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t') ++end;
    if (*end != '\0') return false;
    *out = value;
    return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(current);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

} // namespace

BivariateSample read_xy_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    BivariateSample sample;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 2)
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": expected two comma-separated columns");

        double x = 0.0, y = 0.0;
        const bool numeric =
            parse_double(trim(fields[0]), &x) && parse_double(trim(fields[1]), &y);

        if (!numeric) {
            if (first_content_line && !options.no_header) {
                first_content_line = false;
                continue;  // header row
            }
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": non-numeric value");
        }
        first_content_line = false;
        sample.push_back(x, y);
    }

    if (sample.size() < 2)
        throw IoError(path + ": need at least two data rows");
    return sample;
}

std::string format_full(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string to_csv(const OutputRecord& record) {
    std::ostringstream out;
    out << "# " << kToolName << " " << kToolVersion << "\n";
    out << "# experiment=" << record.experiment << "\n";
    if (!record.reference_table.empty())
        out << "# reference_table=" << record.reference_table << "\n";
    for (const auto& [key, value] : record.config)
        out << "# " << key << "=" << value << "\n";
    for (const auto& note : record.notes) out << "# note: " << note << "\n";

    for (std::size_t i = 0; i < record.columns.size(); ++i) {
        if (i) out << ",";
        out << record.columns[i];
    }
    out << "\n";
    for (const auto& row : record.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_full(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

std::string to_json(const OutputRecord& record) {
    nlohmann::ordered_json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["experiment"] = record.experiment;
    j["reference_table"] = record.reference_table;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto& [key, value] : record.config) config[key] = value;
    j["config"] = config;
    j["columns"] = record.columns;
    j["rows"] = record.rows;
    j["notes"] = record.notes;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
}

namespace {

std::string reference_table_for(Family family, bool theory_mode, bool contaminated) {
    if (theory_mode) {
        switch (family) {
            case Family::normal: return "3.1";
            case Family::pareto: return "3.4";
            default: return "";
        }
    }
    if (contaminated) return "";
    switch (family) {
        case Family::normal: return "3.2-3.3";
        case Family::pareto: return "3.5-3.6";
        case Family::exp_pareto: return "3.7-3.8";
        case Family::exp_pareto_transformed: return "3.7-3.8";
        case Family::fgm: return "3.9-3.10";
    }
    return "";
}

void echo_common(OutputRecord& record, Family family, std::size_t n,
                 std::size_t reps, std::uint64_t seed) {
    record.config.emplace_back("family", family_name(family));
    record.config.emplace_back("n", std::to_string(n));
    record.config.emplace_back("reps", std::to_string(reps));
    record.config.emplace_back("seed", std::to_string(seed));
}

} // namespace

OutputRecord record_from(const SummaryTable& table) {
    OutputRecord record;
    record.experiment = "table";
    record.reference_table = reference_table_for(table.config.family, false,
                                                 table.config.contaminate > 0);
    echo_common(record, table.config.family, table.config.n, table.config.reps,
                table.config.master_seed);
    std::string grid;
    for (double t : table.config.t_grid) {
        if (!grid.empty()) grid += " ";
        grid += format_full(t);
    }
    record.config.emplace_back("t_grid", grid);
    record.config.emplace_back("contaminate", std::to_string(table.config.contaminate));
    if (table.config.contaminate > 0) {
        record.config.emplace_back("outlier_offset_sd",
                                   format_full(table.config.outlier_rule.offset_sd));
        record.config.emplace_back("outlier_direction",
                                   std::to_string(table.config.outlier_rule.direction));
    }

    record.columns = {"t"};
    for (Coefficient c : {Coefficient::pearson, Coefficient::spearman,
                          Coefficient::kendall, Coefficient::mixed}) {
        const std::string base = coefficient_name(c);
        record.columns.push_back(base + "_mean");
        record.columns.push_back(base + "_var");
        record.columns.push_back(base + "_se");
    }
    record.columns.push_back("redraws");
    record.columns.push_back("failures");

    for (const auto& row : table.rows) {
        std::vector<double> cells{row.t};
        for (Coefficient c : {Coefficient::pearson, Coefficient::spearman,
                              Coefficient::kendall, Coefficient::mixed}) {
            cells.push_back(row.mean[c]);
            cells.push_back(row.variance[c]);
            cells.push_back(row.std_error[c]);
        }
        cells.push_back(static_cast<double>(row.redraws));
        cells.push_back(static_cast<double>(row.failures));
        record.rows.push_back(std::move(cells));
    }

    const std::uint64_t failures = table.failures_total();
    if (failures > 0)
        record.notes.push_back(std::to_string(failures) + " replicates failed");
    return record;
}

OutputRecord record_from(const MetaCorrelationReport& report) {
    OutputRecord record;
    record.experiment = "meta";
    echo_common(record, report.config.family, report.config.group_size,
                report.config.reps, report.config.master_seed);
    record.config.emplace_back("t", format_full(report.config.t));
    record.config.emplace_back("group_size", std::to_string(report.config.group_size));

    record.columns = {"first", "second", "meta_pearson", "meta_spearman",
                      "meta_kendall"};
    for (const auto& cell : report.cells) {
        record.rows.push_back({static_cast<double>(static_cast<int>(cell.first)),
                               static_cast<double>(static_cast<int>(cell.second)),
                               cell.mean.pearson, cell.mean.spearman,
                               cell.mean.kendall});
    }
    record.notes.push_back(
        "coefficient codes: 0=pearson 1=spearman 2=kendall 3=mixed");
    return record;
}

OutputRecord record_from(const BiasReport& report) {
    OutputRecord record;
    record.experiment = "bias";
    record.config.emplace_back("family", family_name(report.spec.family));
    record.config.emplace_back("t", format_full(report.spec.t));
    record.config.emplace_back("reps", std::to_string(report.reps));
    record.config.emplace_back("seed", std::to_string(report.master_seed));

    record.columns = {"n",
                      "spearman_mean",
                      "spearman_expected",
                      "spearman_se",
                      "spearman_z",
                      "mixed_mean",
                      "mixed_expected",
                      "mixed_se",
                      "mixed_z"};
    for (const auto& row : report.rows) {
        record.rows.push_back({static_cast<double>(row.n), row.spearman_mean,
                               row.spearman_expected, row.spearman_se,
                               row.spearman_z, row.mixed_mean, row.mixed_expected,
                               row.mixed_se, row.mixed_z});
    }
    return record;
}

OutputRecord record_from(const PearsonExtension& extension) {
    OutputRecord record;
    record.experiment = "extend-pearson";
    record.config.emplace_back("family", family_name(extension.spec.family));
    record.config.emplace_back("t", format_full(extension.spec.t));
    record.config.emplace_back("n", std::to_string(extension.n));
    record.config.emplace_back("reps", std::to_string(extension.reps));
    record.config.emplace_back("seed", std::to_string(extension.master_seed));

    record.columns = {"extended_pearson", "first_half",   "second_half",
                      "stable",           "rank_spearman", "rank_kendall",
                      "rank_mixed",       "gap_spearman",  "gap_kendall",
                      "gap_mixed",        "trend_following"};
    record.rows.push_back({extension.value, extension.first_half,
                           extension.second_half, extension.stable ? 1.0 : 0.0,
                           extension.rank_spearman, extension.rank_kendall,
                           extension.rank_mixed, extension.gap_spearman,
                           extension.gap_kendall, extension.gap_mixed,
                           extension.trend_following ? 1.0 : 0.0});
    record.notes.push_back(extension.trend_following
                               ? "extension follows the rank-coefficient trend"
                               : "extension violates the rank-coefficient trend");
    if (extension.theoretical_pearson)
        record.notes.push_back("theoretical pearson " +
                               format_full(*extension.theoretical_pearson));
    return record;
}

OutputRecord record_from_theory(Family family, const std::vector<double>& t_grid) {
    OutputRecord record;
    record.experiment = "theory";
    record.reference_table = reference_table_for(family, true, false);
    record.config.emplace_back("family", family_name(family));

    record.columns = {"t", "pearson", "pearson_defined", "spearman", "kendall",
                      "mixed"};
    for (double t : t_grid) {
        const TheoreticalCoefficients tc = theoretical(DistributionSpec{family, t});
        record.rows.push_back({t, tc.pearson.value_or(0.0),
                               tc.pearson.has_value() ? 1.0 : 0.0, tc.spearman,
                               tc.kendall, tc.mixed});
    }
    return record;
}

} // namespace corrsim
