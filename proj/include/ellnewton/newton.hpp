#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ellnewton/cmap.hpp"

namespace ellnewton {

struct HallResult {
    bool holds = true;
    std::vector<int> violating;  // J with |J| >= |V(G(J))|, empty if holds
};

/// |J| < |V(G(J))| for every nonempty proper face subset J.  Subsets are
/// scanned by increasing size, lexicographically; the first failure is kept.
HallResult hall_A_check(const CombinatorialMap& m);

/// Equal-denominator weights, one per sector.  Sector d is the corner between
/// d and sigma(d); it lies at vertex_of(d) and in face_of(sigma(d)).
struct SectorWeights {
    std::vector<long> numerator;
    long denominator = 1;
};

/// Exact flow-based decision of the A-property, independent of the subset
/// scan: for every face f and vertex v, the faces other than f can be
/// matched into distinct vertices other than v along sector incidences.
bool angle_feasibility(const CombinatorialMap& m);

/// Strictly positive sector weights summing to 1 at every vertex and at every
/// face, or nullopt if none exist.  Requires V = F.
std::optional<SectorWeights> angle_witness(const CombinatorialMap& m);

struct EulerResult {
    bool holds = true;
    int edge = -1;  // smaller dart of an edge with one face on both sides
};
EulerResult euler_E_check(const CombinatorialMap& m);

struct PropertyReport {
    int order = 0;
    bool cellular = false;
    bool loopless = false;
    bool counts = false;  // V = r, E = 2r, F = r
    HallResult a;
    EulerResult e;
    bool newtonian = false;
};

/// Full Newton graph check of order r (r = 0: use the vertex count).
PropertyReport is_newton_graph(const CombinatorialMap& m, int r = 0);

/// `key=value` lines.
void write_report(std::ostream& out, const PropertyReport& rep);

}  // namespace ellnewton
