#include "optocirc/app.hpp"
#include "optocirc/kernels/dispatch.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
    using namespace optocirc;

    CLI::App app{"Nonreciprocal optomechanical circulator simulator"};
    app.set_help_flag("-h,--help", "Show usage and exit");

    std::string subcommand;
    std::string config_path;
    std::string output_path;
    std::string grid_spec;
    std::string kernel = "auto";

    std::string names;
    for (const auto& n : subcommand_names()) names += (names.empty() ? "" : " | ") + n;
    app.add_option("subcommand", subcommand, names)->required();
    app.add_option("-c,--config", config_path, "Configuration file")->required();
    app.add_option("-o,--output", output_path, "Output CSV path (default: [output] path, else stdout)");
    app.add_option("-g,--grid", grid_spec, "Frequency grid omega_min:omega_max:N");
    app.add_option("--kernel", kernel, "Numeric kernel: auto | scalar | avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (kernel == "scalar") kernels::force_isa(kernels::Isa::scalar);
        else if (kernel == "avx2") kernels::force_isa(kernels::Isa::avx2);

        const RunConfig cfg = load_config(config_path);
        RunOptions opts;
        if (!grid_spec.empty()) opts.grid = parse_grid_spec(grid_spec);
        std::string path = output_path;
        if (path.empty() && cfg.output) path = cfg.output->path;

        const RunResult res = run_subcommand(subcommand, cfg, opts);
        const std::string text = emit_tables(res, path);
        if (path.empty()) std::cout << text << std::flush;
        for (const std::string& note : res.notes) std::cerr << note << '\n';
        return exit_ok;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (e.kind() == ErrorKind::iteration_failure)
            std::cerr << "last residual: " << static_cast<const IterationError&>(e).last_residual() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_other;
    }
}
