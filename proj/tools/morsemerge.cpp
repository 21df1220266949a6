#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dmt/cli.hpp"

int main(int argc, char** argv) {
    dmt::cli::RunConfig cfg;
    CLI::App app{"Discrete gradient vector fields on grayscale images and trees,\n"
                 "computed on patches and merged exactly against the whole-complex run."};
    app.add_option("--mode", cfg.mode, "what to run")
        ->required()
        ->check(CLI::IsMember({"oracle", "naive", "merge-general", "merge-intersection",
                               "merge-antithetic", "merge-2d", "distributed", "tree"}));
    app.add_option("--input", cfg.input, "PGM image (or edge-list file for --mode tree)");
    app.add_option("--random", cfg.random_size, "generate a WxH random image instead of --input");
    app.add_option("--seed", cfg.seed, "seed for generated data");
    app.add_option("--patches", cfg.patches, "patch grid MxL (two-set modes: 2x1 or 1x2)");
    app.add_option("--k", cfg.k, "locality override for the merge formulas");
    app.add_option("--radius", cfg.radius, "jet cover radius for tree mode (> 1)");
    app.add_flag("--verify", cfg.verify, "compare against the whole-complex run");
    app.add_option("--report", cfg.report_path, "write the report to this file");
    app.add_option("--bench", cfg.bench_path, "write size/time CSV to this file");
    CLI11_PARSE(app, argc, argv);

    try {
        dmt::cli::Outcome out = dmt::cli::execute(cfg);
        std::string text = dmt::emit_report(out.report);
        std::fputs(text.c_str(), stdout);
        if (!cfg.report_path.empty()) dmt::write_report(out.report, cfg.report_path);
        if (!cfg.bench_path.empty()) {
            std::ofstream bench(cfg.bench_path);
            if (!bench) throw std::runtime_error("cannot write " + cfg.bench_path);
            bench << "label,size,micros\n" << out.bench_csv;
        }
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "morsemerge: " << e.what() << "\n";
        return 1;
    }
}
