#pragma once

#include <string>
#include <utility>
#include <vector>

#include "corrsim/experiments.hpp"
#include "corrsim/sample.hpp"

namespace corrsim {

inline constexpr const char* kToolName = "corrsim";
inline constexpr const char* kToolVersion = "0.1.0";

struct CsvOptions {
    // When set the first row must be data. Otherwise a non-numeric first row
    // is skipped as a header.
    bool no_header = false;
};

// Two numeric comma-separated columns, LF or CRLF line endings.
BivariateSample read_xy_csv(const std::string& path, const CsvOptions& options = {});

// One serialized experiment: a config echo sufficient to reproduce the run
// bit for bit, a numeric table, and free-form notes.
struct OutputRecord {
    std::string experiment;       // "table", "meta", "bias", "extend-pearson", "theory"
    std::string reference_table;  // label of the reference table this layout mirrors
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> notes;
};

// Full-precision decimal rendering (17 significant digits round-trips doubles).
std::string format_full(double value);

// Config echo as leading '#' comments, then a header row and %.17g cells.
std::string to_csv(const OutputRecord& record);

// Stable key order throughout.
std::string to_json(const OutputRecord& record);

void write_text_file(const std::string& path, const std::string& content);

OutputRecord record_from(const SummaryTable& table);
OutputRecord record_from(const MetaCorrelationReport& report);
OutputRecord record_from(const BiasReport& report);
OutputRecord record_from(const PearsonExtension& extension);
OutputRecord record_from_theory(Family family, const std::vector<double>& t_grid);

} // namespace corrsim
