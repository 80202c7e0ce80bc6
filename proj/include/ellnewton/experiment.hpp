#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellnewton/cmap.hpp"
#include "ellnewton/flow.hpp"

namespace ellnewton {

/// Grid for splitting a triple zero into v1 (at radius r, phase theta1 from
/// the symmetry axis) and the pair v2, v3 placed diametrically at distance
/// inner_ratio * r around v1' = at - r e^{i theta1} / 2.
struct ExperimentConfig {
    std::string base = "nuclear3";    // "nuclear3" or a divisor file
    std::optional<cplx> at;           // zero to split; default: the triple zero
    std::optional<double> axis;       // turns; default: towards the nearest pole
    std::vector<double> radii = {0.02, 0.04};
    int phase_steps = 24;
    double inner_ratio = 0.25;
    int inner_steps = 6;              // phases of the pair over half a turn
    bool stop_when_complete = false;  // stop once all three classes occurred
    IntegrateOptions integrate;
    std::string output;               // if set, first map of each class goes here
};

/// `key = value` lines; keys as in ExperimentConfig (radii comma-separated,
/// at as `t1,t2` lattice coordinates, rtol/atol for the integrator).
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

struct SplitSample {
    double radius = 0, phase = 0, inner_phase = 0;  // phases in turns
    std::vector<cplx> deltas;
    std::string outcome;  // catalog name, "unknown", or "failed: <reason>"
    bool pseudo_checks = false;  // V=3, E=4, F=1, cellular
};

struct SplitResult {
    std::vector<SplitSample> samples;
    std::map<std::string, int> realized;  // outcome -> count (successful ones)
    std::map<std::string, CombinatorialMap> first_map;
    bool all_realized = false;            // gcheck3.a, .b and .c all occurred
};

SplitResult run_split3(const ExperimentConfig& cfg);

/// `key=value` report with one `sample.<k>=...` line per grid point.
void write_split_report(std::ostream& out, const SplitResult& res);

}  // namespace ellnewton
