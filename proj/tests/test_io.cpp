#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "corrsim/io.hpp"

using namespace corrsim;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("/tmp/corrsim_test_") + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int exit_code;
    std::string output;
};

// Runs the CLI, capturing stdout+stderr.
RunResult run_cli(const std::string& args) {
    const std::string out_path = temp_path("cli_output.txt");
    const std::string command =
        std::string(CORRSIM_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = read_file(out_path);
    return result;
}

} // namespace

TEST_CASE("csv reader handles headers, CRLF and blank lines") {
    const std::string path = temp_path("basic.csv");
    write_file(path, "x,y\r\n1,2\r\n2,4\r\n\r\n3,6\r\n");
    const BivariateSample s = read_xy_csv(path);
    REQUIRE(s.size() == 3);
    CHECK(s.x[2] == 3.0);
    CHECK(s.y[2] == 6.0);
}

TEST_CASE("csv reader with no_header treats the first row as data") {
    const std::string path = temp_path("no_header.csv");
    write_file(path, "1,2\n2,4\n");
    CsvOptions options;
    options.no_header = true;
    CHECK(read_xy_csv(path, options).size() == 2);

    write_file(path, "x,y\n1,2\n2,4\n");
    CHECK_THROWS_AS(read_xy_csv(path, options), IoError);
}

TEST_CASE("csv reader rejects malformed files") {
    const std::string path = temp_path("bad.csv");
    write_file(path, "1,2,3\n4,5,6\n");
    CHECK_THROWS_AS(read_xy_csv(path), IoError);
    write_file(path, "1,2\nfoo,bar\n");
    CHECK_THROWS_AS(read_xy_csv(path), IoError);
    write_file(path, "1,2\n");
    CHECK_THROWS_AS(read_xy_csv(path), IoError);
    CHECK_THROWS_AS(read_xy_csv(temp_path("missing_file.csv")), IoError);
}

TEST_CASE("csv output round-trips doubles bit for bit") {
    OutputRecord record;
    record.experiment = "table";
    record.columns = {"a", "b", "c"};
    record.rows = {{1.0 / 3.0, -1e-17, 0.1},
                   {6.02214076e23, -0.9999999999999999, 2.5e-308}};
    const std::string csv = to_csv(record);

    std::istringstream in(csv);
    std::string line;
    std::vector<std::vector<double>> parsed;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'a') continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(std::strtod(field.c_str(), nullptr));
        parsed.push_back(row);
    }
    REQUIRE(parsed.size() == record.rows.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        REQUIRE(parsed[i].size() == record.rows[i].size());
        for (std::size_t j = 0; j < parsed[i].size(); ++j)
            CHECK(parsed[i][j] == record.rows[i][j]);
    }
}

TEST_CASE("json record has the expected stable shape") {
    OutputRecord record;
    record.experiment = "theory";
    record.reference_table = "3.1";
    record.config = {{"family", "normal"}, {"n", "100"}};
    record.columns = {"t", "kendall"};
    record.rows = {{0.3, 0.1940}};
    record.notes = {"example"};

    const auto j = nlohmann::json::parse(to_json(record));
    CHECK(j["tool"]["name"] == "corrsim");
    CHECK(j["experiment"] == "theory");
    CHECK(j["reference_table"] == "3.1");
    CHECK(j["config"]["family"] == "normal");
    CHECK(j["columns"].size() == 2);
    CHECK(j["rows"][0][1] == doctest::Approx(0.1940));
    CHECK(j["notes"][0] == "example");

    // Top-level key order is stable.
    const std::string text = to_json(record);
    CHECK(text.find("\"tool\"") < text.find("\"experiment\""));
    CHECK(text.find("\"experiment\"") < text.find("\"config\""));
    CHECK(text.find("\"config\"") < text.find("\"columns\""));
    CHECK(text.find("\"columns\"") < text.find("\"rows\""));
}

TEST_CASE("cli analyze on exact lines") {
    const std::string path = temp_path("line.csv");
    write_file(path, "1,1\n2,2\n3,3\n4,4\n");
    RunResult r = run_cli("analyze " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("pearson  1.0000") != std::string::npos);
    CHECK(r.output.find("kendall  1.0000") != std::string::npos);

    write_file(path, "1,4\n2,3\n3,2\n4,1\n");
    r = run_cli("analyze " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("pearson  -1.0000") != std::string::npos);
    CHECK(r.output.find("mixed    -1.0000") != std::string::npos);
}

TEST_CASE("cli analyze on the four-point sample") {
    const std::string path = temp_path("four.csv");
    write_file(path, "x,y\n1,3\n2,1\n3,2\n4,4\n");
    const RunResult r = run_cli("analyze " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n        4") != std::string::npos);
    CHECK(r.output.find("kendall  0.3333") != std::string::npos);
    CHECK(r.output.find("spearman 0.4000") != std::string::npos);
    CHECK(r.output.find("mixed    0.3000") != std::string::npos);
}

TEST_CASE("cli exit codes follow the contract") {
    const std::string path = temp_path("codes.csv");

    CHECK(run_cli("analyze " + temp_path("nonexistent.csv")).exit_code == 2);

    write_file(path, "1,5\n1,6\n2,7\n");
    CHECK(run_cli("analyze " + path).exit_code == 3);

    write_file(path, "1,5\n2,5\n3,5\n");
    CHECK(run_cli("analyze " + path).exit_code == 4);

    CHECK(run_cli("theory cauchy").exit_code == 2);
    CHECK(run_cli("theory").exit_code == 2);
    CHECK(run_cli("theory normal --t 1.5").exit_code == 2);
    CHECK(run_cli("simulate normal --t 0.5 --reps 10 --n 50 --seed 1 --meta 10 --bias")
              .exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("cli theory prints the tabulated normal row") {
    const RunResult flagged = run_cli("theory --family normal --t 0.1");
    CHECK(flagged.exit_code == 0);
    const RunResult r = run_cli("theory normal --t 0.1");
    CHECK(r.exit_code == 0);
    CHECK(flagged.output == r.output);
    CHECK(r.output.find("0.1000") != std::string::npos);
    CHECK(r.output.find("0.0955") != std::string::npos);
    CHECK(r.output.find("0.0638") != std::string::npos);
    CHECK(r.output.find("0.0479") != std::string::npos);
}

TEST_CASE("cli simulate writes byte-identical files for a fixed seed") {
    const std::string out1 = temp_path("sim1.csv");
    const std::string out2 = temp_path("sim2.csv");
    const std::string args =
        "simulate normal --t -0.3 --n 80 --reps 40 --seed 42 --out ";
    CHECK(run_cli(args + out1).exit_code == 0);
    CHECK(run_cli(args + out2).exit_code == 0);
    const std::string a = read_file(out1);
    CHECK(!a.empty());
    CHECK(a == read_file(out2));
    CHECK(a.find("# seed=42") != std::string::npos);

    // JSON variant parses and carries the same seed.
    const std::string out3 = temp_path("sim3.json");
    CHECK(run_cli("simulate normal --t -0.3 --n 80 --reps 40 --seed 42 "
                  "--format json --out " + out3).exit_code == 0);
    const auto j = nlohmann::json::parse(read_file(out3));
    CHECK(j["config"]["seed"] == "42");
}

TEST_CASE("cli simulate without a seed reports the one it drew") {
    const RunResult r = run_cli("simulate normal --t 0.3 --n 50 --reps 10");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("seed (from entropy):") != std::string::npos);
}
