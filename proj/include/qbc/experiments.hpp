#pragma once

#include <iosfwd>
#include <string>

#include "qbc/deformation.hpp"
#include "qbc/folding.hpp"
#include "qbc/oracles.hpp"
#include "qbc/reduction.hpp"

namespace qbc {

// Process-level knobs; the physics lives in the config document.
struct RunOptions {
    std::string config_path;
    std::string out_dir;     // overrides the config's "out" entry when set
    unsigned seed = 1;       // random-state property checks in verify
    double tol_scale = 1.0;  // multiplies every runtime tolerance uniformly
};

// Executes one experiment command: parses the JSON config, runs the requested
// study, and writes result CSVs plus a meta.json sidecar into the output
// directory. Output bytes depend only on config, seed, and tol-scale.
// Returns 0 on success, 1 on numerical rejection or failed verification,
// 2 on config problems.
int run_experiment(const RunOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace qbc
