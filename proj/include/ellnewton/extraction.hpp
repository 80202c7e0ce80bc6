#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ellnewton/cmap.hpp"
#include "ellnewton/flow.hpp"

namespace ellnewton {

struct ExtractOptions {
    IntegrateOptions integrate;
    /// push one sample per sector backward and check that every face is the
    /// basin of exactly one pole
    bool validate_faces = true;
};

/// Embedded graph of a flow.  Edge k is the pair of unstable separatrices of
/// the k-th saddle, with darts 2k (branch +) and 2k+1 (branch -); each dart
/// is based at the attractor its separatrix reaches.
struct ExtractedGraph {
    CombinatorialMap map;
    Lattice lattice;
    std::vector<int> vertex_equilibrium;   // map vertex -> attractor index
    std::vector<int> edge_equilibrium;     // edge -> saddle index
    std::vector<int> face_equilibrium;     // map face -> repellor index (-1 if not validated)
    std::vector<double> dart_direction;    // arrival direction at the vertex, turns
    std::vector<std::vector<cplx>> dart_path;  // lifted polyline, saddle to vertex
    std::vector<double> edge_argf;         // constant arg f along the edge, turns
};

/// PropertyViolation if a saddle connection exists (extraction refused),
/// UnsupportedConfiguration for a non-simple saddle, NonConvergence when a
/// separatrix or validation sample does not settle.
ExtractedGraph extract_graph(const FlowField& F, const ExtractOptions& opt = {});

/// Graph of the reciprocal flow with its orientation reversed, so that its
/// map is equivalent to dual(extract_graph(F).map).  Vertices are poles.
ExtractedGraph extract_dual(const FlowField& F, const ExtractOptions& opt = {});

struct Wrap {
    long p = 0, q = 0;
    double residual = 0.0;
};

/// Homology class of a loop edge (vertex -> saddle -> vertex) in the basis
/// (omega1, omega2) of the flow's lattice, mapped through `chart`, which
/// sends omega1 to p1 + p2 i and omega2 to q1 + q2 i on the canonical torus.
/// InvalidInput for a non-loop edge; NonConvergence if the lifted
/// displacement is 0.01 or more away from a lattice vector.
Wrap wrap_numbers(const ExtractedGraph& g, int edge, const UnimodularMatrix& chart = UnimodularMatrix::identity());

struct Identification {
    std::string name;       // catalog name or "unknown"
    std::string canonical;  // canonical .cmap text of the input
};
/// First catalog entry (by name) equivalent to m; degree multisets filter.
Identification identify(const CombinatorialMap& m);

/// Number of canonical regions of the phase portrait: grid samples are
/// classified by the sector through which they reach their attractor and
/// the one through which they leave their repellor.
int count_regions(const FlowField& F, int grid = 16);

/// `.geom` sidecar: for each dart a line `dart <k>` (1-based) followed by
/// `re im` lines of its polyline, blocks separated by a blank line.
void write_geom(std::ostream& out, const ExtractedGraph& g);

}  // namespace ellnewton
