#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "w2interp/cli_app.hpp"
#include "w2interp/explicit_coeffs.hpp"

using namespace w2interp;
using namespace w2interp::cli;

namespace {

std::string run_to_string(const RunConfig& cfg, int& code) {
    std::ostringstream out, err;
    code = run(cfg, out, err);
    return out.str();
}

struct TempFile {
    explicit TempFile(const std::string& contents) : path("/tmp/w2interp_test_samples.csv") {
        std::ofstream f(path);
        f << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
    std::string path;
};

}  // namespace

TEST_CASE("format_double round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, 12345.6789, 0.005, -2.5e300, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("coeffs command: node evaluation gives a shifted unit row, exit 0") {
    RunConfig cfg;
    cfg.command = Command::coeffs;
    cfg.m = 1;
    cfg.n = 5;
    cfg.z = 0.2;
    int code = -1;
    const std::string out = run_to_string(cfg, code);
    CHECK(code == 0);
    std::istringstream lines(out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "beta,c_explicit,c_direct,abs_diff");
    std::getline(lines, line);  // beta 0
    std::getline(lines, line);  // beta 1 -> the node
    CHECK(line.substr(0, 4) == "1,1,");
}

TEST_CASE("coeffs CSV round-trips: parsed values re-evaluate bit-for-bit") {
    RunConfig cfg;
    cfg.command = Command::coeffs;
    cfg.m = 2;
    cfg.n = 5;
    cfg.z = 0.37;
    int code = -1;
    const std::string out = run_to_string(cfg, code);
    CHECK(code == 0);

    const GridSpec grid(SpaceOrder{2}, 5);
    const auto op = build_operator(grid.m, grid.n);
    const auto cv = optimal_coeffs(op, grid, 0.37);
    const SampleSet samples = sample_builtin(grid, "sin");

    CoefficientVector parsed = cv;
    std::istringstream lines(out);
    std::string line;
    std::getline(lines, line);  // header
    for (int beta = 0; beta <= 5; ++beta) {
        REQUIRE(std::getline(lines, line));
        const size_t a = line.find(','), b = line.find(',', a + 1);
        parsed.coeffs[beta] = std::stod(line.substr(a + 1, b - a - 1));
        CHECK(parsed.coeffs[beta] == cv.coeffs[beta]);  // bitwise
    }
    CHECK(interpolate(samples, parsed) == interpolate(samples, cv));
}

TEST_CASE("json output is a flat array of records") {
    RunConfig cfg;
    cfg.command = Command::norm;
    cfg.m = 1;
    cfg.n = 5;
    cfg.zgrid = 11;
    cfg.output_format = OutputFormat::json;
    int code = -1;
    const std::string out = run_to_string(cfg, code);
    CHECK(code == 0);
    const auto parsed = nlohmann::json::parse(out);
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 11);
    CHECK(parsed[0].contains("z"));
    CHECK(parsed[0].contains("norm"));
    // zeros at the nodes of the 11-point grid that coincide with x_beta
    CHECK(parsed[0]["norm"].get<double>() < 1e-6);
    CHECK(parsed[10]["norm"].get<double>() < 1e-6);
}

TEST_CASE("norm command emits zeros at nodes") {
    RunConfig cfg;
    cfg.command = Command::norm;
    cfg.m = 1;
    cfg.n = 5;
    cfg.zgrid = 11;
    int code = -1;
    const std::string out = run_to_string(cfg, code);
    CHECK(code == 0);
    std::istringstream lines(out);
    std::string line;
    std::getline(lines, line);
    int rows = 0, node_like = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        ++rows;
        const double v = std::stod(line.substr(line.find(',') + 1));
        if (v < 1e-6) ++node_like;
    }
    CHECK(rows == 11);
    CHECK(node_like == 6);  // the 11-point grid hits all 6 nodes of N=5
}

TEST_CASE("interp command with sample file and single z") {
    TempFile f("x,value\n0,1\n0.2,2\n0.4,3\n0.6,4\n0.8,5\n1,6\n");
    RunConfig cfg;
    cfg.command = Command::interp;
    cfg.m = 1;
    cfg.n = 5;
    cfg.z = 0.4;  // node x_2 -> exact sample value
    cfg.samples_path = f.path;
    int code = -1;
    const std::string out = run_to_string(cfg, code);
    CHECK(code == 0);
    std::istringstream lines(out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "z,value");
    std::getline(lines, line);
    CHECK(std::stod(line.substr(line.find(',') + 1)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("load_samples validates header, nodes and row count") {
    const GridSpec grid(SpaceOrder{1}, 2);
    {
        TempFile f("x,value\n0,1\n0.5,2\n1,3\n");
        const SampleSet s = load_samples(grid, f.path);
        CHECK(s.values == std::vector<double>{1.0, 2.0, 3.0});
        CHECK(s.source == SampleSet::Source::file);
    }
    {
        TempFile f("wrong,header\n0,1\n");
        CHECK_THROWS_AS(load_samples(grid, f.path), std::invalid_argument);
    }
    {
        TempFile f("x,value\n0,1\n0.4,2\n1,3\n");  // 0.4 is not a node of N=2
        CHECK_THROWS_WITH_AS(load_samples(grid, f.path), doctest::Contains("line 3"), std::invalid_argument);
    }
    {
        TempFile f("x,value\n0,1\n0.5,2\n");
        CHECK_THROWS_AS(load_samples(grid, f.path), std::invalid_argument);
    }
    CHECK_THROWS_AS(load_samples(grid, "/nonexistent/file.csv"), std::invalid_argument);
}

TEST_CASE("exit codes: validation 2, tolerance gate 0/1, numerical 3 path") {
    std::ostringstream out, err;

    RunConfig bad;
    bad.command = Command::coeffs;
    bad.m = 4;
    bad.n = 2;
    bad.z = 0.5;
    CHECK(run(bad, out, err) == 2);

    RunConfig no_z;
    no_z.command = Command::coeffs;
    CHECK(run(no_z, out, err) == 2);

    RunConfig both;
    both.command = Command::interp;
    both.m = 1;
    both.n = 5;
    both.z = 0.5;
    both.function = "sin";
    both.samples_path = "/tmp/nope.csv";
    CHECK(run(both, out, err) == 2);

    RunConfig z_range;
    z_range.command = Command::norm;
    z_range.m = 1;
    z_range.n = 5;
    z_range.z = 1.5;
    CHECK(run(z_range, out, err) == 2);
}

TEST_CASE("study output is deterministic and carries the expected shape") {
    RunConfig cfg;
    cfg.command = Command::study;
    cfg.zgrid = 21;  // smaller grid, same code path
    int code_a = -1, code_b = -1;
    const std::string a = run_to_string(cfg, code_a);
    const std::string b = run_to_string(cfg, code_b);
    CHECK(code_a == 0);
    CHECK(a == b);

    std::istringstream lines(a);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "m,N,function,z,abs_error,norm");
    int rows = 0, comments = 0;
    while (std::getline(lines, line)) {
        if (!line.empty() && line[0] == '#')
            ++comments;
        else if (!line.empty())
            ++rows;
    }
    CHECK(rows == 3 * 2 * 3 * 21);
    CHECK(comments == 18);  // one max_error line per (m, N, function)
}

TEST_CASE("out path writes the same bytes as stdout") {
    RunConfig cfg;
    cfg.command = Command::norm;
    cfg.m = 1;
    cfg.n = 5;
    cfg.zgrid = 5;
    int code = -1;
    const std::string direct = run_to_string(cfg, code);
    CHECK(code == 0);

    cfg.out_path = "/tmp/w2interp_test_out.csv";
    std::ostringstream out, err;
    CHECK(run(cfg, out, err) == 0);
    CHECK(out.str().empty());
    std::ifstream f(*cfg.out_path);
    std::stringstream content;
    content << f.rdbuf();
    CHECK(content.str() == direct);
    std::remove(cfg.out_path->c_str());
}
