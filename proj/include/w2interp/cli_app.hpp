#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "w2interp/interpolator.hpp"

namespace w2interp::cli {

enum class Command { coeffs, interp, norm, study, selftest };
enum class OutputFormat { csv, json };

struct RunConfig {
    Command command = Command::selftest;
    int m = 1;
    int n = 5;
    std::optional<double> z;
    std::optional<int> zgrid;
    std::optional<std::string> function;
    std::optional<std::string> samples_path;
    OutputFormat output_format = OutputFormat::csv;
    std::optional<std::string> out_path;
};

// Column-oriented result table; CSV gets '# ...' trailer lines for the
// summary block, JSON is a flat array of records.
struct Table {
    using Value = std::variant<long long, double, std::string>;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
    std::vector<std::string> comments;
};

// Shortest decimal representation that round-trips to the same binary64.
std::string format_double(double v);

void write_csv(const Table& t, std::ostream& out);
void write_json(const Table& t, std::ostream& out);

// Sample file: header "x,value", one row per node, x strictly increasing
// and equal to h*beta within 1e-12. Throws std::invalid_argument naming
// the offending line.
SampleSet load_samples(const GridSpec& grid, const std::string& path);

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

// Full invariant suite behind the selftest command: operator identities,
// node reproduction, quadrature reduction, route agreement.
std::vector<CheckResult> run_selftest();

// Exit codes: 0 success, 1 a tolerance gate failed, 2 usage/validation,
// 3 numerical failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace w2interp::cli
