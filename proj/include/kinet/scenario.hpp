#ifndef KINET_SCENARIO_HPP
#define KINET_SCENARIO_HPP

#include <map>
#include <string>

#include "kinet/config.hpp"

namespace kinet {

struct RunOptions {
    std::string out_dir = "out";
    unsigned long seed = 0;  // 0: use the config's [scenario] seed
    int threads = 1;
    bool force = false;  // overrides resource guards
};

struct ScenarioResult {
    bool checks_passed = true;
    std::string report_json;                 // deterministic report content
    std::map<std::string, double> metrics;   // scalar metrics, same values as the report
};

// Dispatches on [scenario] kind: homogeneous-relaxation | bkw-verification |
// sod-kinetic | kernel-mode-build | convergence-study | ap-sweep.  Writes
// report.json, CSV series, and final states under out_dir; wall-clock numbers
// go to timings.json so report.json stays bit-reproducible for identical
// (config, seed).
ScenarioResult run_scenario(const ConfigMap& cfg, const RunOptions& opt);

} // namespace kinet

#endif
