#pragma once

#include <string>
#include <vector>

#include "ellnewton/cmap.hpp"

namespace ellnewton {

struct EnumConstraints {
    int faces = -1;          // -1: any face count compatible with the torus
    bool loopless = false;
    int min_degree = 1;
    bool newtonian = false;  // keep only Newton graphs of order V
    long budget = 50'000'000;  // candidate (sigma, alpha) pairs examined
};

/// All connected maps cellular on the torus with V vertices and E edges,
/// one canonical representative per equivalence class, sorted by canonical
/// code.  Throws UnsupportedConfiguration if the budget is exceeded.
std::vector<CombinatorialMap> enumerate_maps(int V, int E, const EnumConstraints& c = {});

enum class ReduceStrategy { first, all };

struct ReductionTrace {
    CombinatorialMap start;
    std::vector<int> deleted;  // dart of each deleted edge, in the map of that step
    std::vector<int> pruned;   // pruned vertex indices, in the map of that step
    CombinatorialMap gcheck;   // after the merge phase: V = r, E = r+1, F = 1
    CombinatorialMap ghat;     // after pruning: min degree >= 2
    int rho = 0;
    int L = 0;
};

/// Merge phase (r-1 deletions of an edge between the merged face and a face
/// not yet merged) followed by pruning of degree-1 vertices.  `first` takes
/// face 0 and the smallest eligible dart at each step; `all` runs every start
/// face and choice sequence and keeps one trace per distinct gcheck class.
/// The input must be a Newton graph (PropertyViolation otherwise).
std::vector<ReductionTrace> reduce(const CombinatorialMap& m, ReduceStrategy strategy = ReduceStrategy::first);

enum class HatCase { a1, a2 };

struct HatClassification {
    HatCase kind = HatCase::a1;
    std::vector<int> degrees;                  // sorted descending
    FacialWalk walk;                           // starts at a branch vertex
    std::vector<std::vector<int>> subwalks;    // consecutive pieces of walk
    std::vector<int> inverse;                  // index of the reversed subwalk
};

/// Degree dichotomy and walk decomposition of a single-face map with
/// E = V + 1, min degree >= 2 and no loops.  InvalidInput if these
/// preconditions fail, PropertyViolation if the structure does not hold.
HatClassification classify_hat(const CombinatorialMap& m);

struct CatalogEntry {
    std::string name;
    std::string note;
    CombinatorialMap map;
};
/// Regenerates the catalog by enumeration: newton2, one representative of
/// each order-3 Newton graph class up to duality and orientation reversal
/// (newton3.i, newton3.ii, ...), ghat2, ghat3.a1/a2, gcheck3.a/b/c, nuclear.
std::vector<CatalogEntry> build_catalog();
/// Writes `<dir>/<name>.cmap` for every entry.
void write_catalog(const std::string& dir, const std::vector<CatalogEntry>& entries);

/// Names of the stored maps, in a fixed order.
std::vector<std::string> catalog_names();
/// Loads `<data dir>/catalog/<name>.cmap`; the data directory comes from
/// ELLNEWTON_DATA_DIR or the build-time default.  InvalidInput for an
/// unknown name.
CombinatorialMap catalog(const std::string& name);
std::string data_directory();
/// Names whose map is a Newton graph of the given order.
std::vector<std::string> catalog_newton(int r);

struct TwoFaceGraph {
    CombinatorialMap map;
    bool has_pendant;        // a vertex of degree 1
    bool edgewise_distinct;  // every edge between two distinct faces
    std::vector<int> shared; // common boundary runs of the two merged faces in the Newton graph
};

/// Single-edge deletions of an order-3 Newton graph (V=3, E=5, F=2), up to
/// equivalence.
std::vector<TwoFaceGraph> merged_two_face_graphs(const CombinatorialMap& m);

}  // namespace ellnewton
