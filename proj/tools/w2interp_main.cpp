#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "w2interp/cli_app.hpp"

int main(int argc, char** argv) {
    using w2interp::cli::Command;
    using w2interp::cli::OutputFormat;
    using w2interp::cli::RunConfig;

    CLI::App app{"Optimal interpolation on [0,1] with equally spaced nodes"};
    app.require_subcommand(1);

    RunConfig cfg;
    double z = 0.0;
    int zgrid = 0;
    std::string function, samples, output = "csv", out_path;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output", output, "output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "write output to this file instead of stdout");
        return sub;
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--m", cfg.m, "space order m (>= 1)");
        sub->add_option("--n", cfg.n, "number of subintervals N (nodes are 0..N)");
        return add_output(sub);
    };

    auto* c_coeffs = add_grid(app.add_subcommand("coeffs", "optimal coefficients by both routes"));
    c_coeffs->add_option("--z", z, "evaluation point in [0,1]")->required();

    auto* c_interp = add_grid(app.add_subcommand("interp", "evaluate the interpolant"));
    c_interp->add_option("--z", z, "evaluation point in [0,1]");
    c_interp->add_option("--zgrid", zgrid, "number of equispaced evaluation points");
    c_interp->add_option("--function", function, "builtin sample source: sq, exp2 or sin")
        ->check(CLI::IsMember({"sq", "exp2", "sin"}));
    c_interp->add_option("--samples", samples, "CSV sample file with header x,value");

    auto* c_norm = add_grid(app.add_subcommand("norm", "error-functional norm"));
    c_norm->add_option("--z", z, "evaluation point in [0,1]");
    c_norm->add_option("--zgrid", zgrid, "number of equispaced evaluation points");

    auto* c_study = add_output(app.add_subcommand("study", "error sweep over m in {1,2,3}, N in {5,10}, all builtins"));
    c_study->add_option("--zgrid", zgrid, "points per sweep (default 201)");

    add_output(app.add_subcommand("selftest", "run the invariant suite"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "coeffs") cfg.command = Command::coeffs;
    if (name == "interp") cfg.command = Command::interp;
    if (name == "norm") cfg.command = Command::norm;
    if (name == "study") cfg.command = Command::study;
    if (name == "selftest") cfg.command = Command::selftest;

    const auto* opt_z = sub->get_option_no_throw("--z");
    const auto* opt_zgrid = sub->get_option_no_throw("--zgrid");
    if (opt_z && opt_z->count()) cfg.z = z;
    if (opt_zgrid && opt_zgrid->count()) cfg.zgrid = zgrid;
    if (!function.empty()) cfg.function = function;
    if (!samples.empty()) cfg.samples_path = samples;
    if (!out_path.empty()) cfg.out_path = out_path;
    cfg.output_format = output == "json" ? OutputFormat::json : OutputFormat::csv;

    return w2interp::cli::run(cfg, std::cout, std::cerr);
}
