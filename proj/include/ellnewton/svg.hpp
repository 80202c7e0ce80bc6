#pragma once

#include <iosfwd>
#include <vector>

#include "ellnewton/extraction.hpp"
#include "ellnewton/flow.hpp"

namespace ellnewton {

struct PortraitOptions {
    int seeds = 6;          // seeds x seeds grid of extra trajectories
    bool separatrices = true;
    double size = 600.0;    // pixels, longer side
    IntegrateOptions integrate;
};

/// Phase portrait on the period parallelogram: trajectories as polylines
/// (wrapped into the cell), attractors as filled circles, repellors as open
/// squares, saddles as crosses.
void write_portrait_svg(std::ostream& out, const FlowField& F, const PortraitOptions& opt = {});

/// The extracted graph drawn from its separatrix polylines, with vertices
/// and the saddles on the edges marked.
void write_graph_svg(std::ostream& out, const FlowField& F, const ExtractedGraph& g, double size = 600.0);

}  // namespace ellnewton
