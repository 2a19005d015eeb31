#include <iostream>

#include "CLI11.hpp"
#include "qbc/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"boundary-condition workbench: spectra, reductions, deformations, folding"};
    qbc::RunOptions opt;
    app.add_option("--config", opt.config_path, "experiment config (JSON)")->required();
    app.add_option("--out", opt.out_dir, "output directory; overrides the config's \"out\"");
    app.add_option("--seed", opt.seed, "seed for random-state property checks");
    app.add_option("--tol-scale", opt.tol_scale, "multiplier applied to every runtime tolerance");
    CLI11_PARSE(app, argc, argv);
    return qbc::run_experiment(opt, std::cout, std::cerr);
}
