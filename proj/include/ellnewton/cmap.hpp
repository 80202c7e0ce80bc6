#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ellnewton {

/// Rotation system of a connected multigraph on an oriented surface.
///
/// Darts are 0..2E-1.  alpha pairs the two darts of each edge; sigma sends a
/// dart to the next dart anticlockwise around its vertex.  The face
/// permutation phi = sigma . alpha walks each face clockwise.  Loops and
/// multiple edges are allowed.
class CombinatorialMap {
public:
    /// Throws InvalidInput unless alpha is a fixed-point-free involution,
    /// sigma a permutation of the same darts, and the map connected.
    CombinatorialMap(std::vector<int> alpha, std::vector<int> sigma, std::string name = {});

    const std::string& name() const { return name_; }
    CombinatorialMap renamed(std::string name) const;

    int darts() const { return int(alpha_.size()); }
    int edges() const { return darts() / 2; }
    int vertices() const { return int(vertex_cycles_.size()); }
    int face_count() const { return int(face_cycles_.size()); }

    const std::vector<int>& alpha() const { return alpha_; }
    const std::vector<int>& sigma() const { return sigma_; }
    int alpha(int d) const { return alpha_[d]; }
    int sigma(int d) const { return sigma_[d]; }
    int phi(int d) const { return sigma_[alpha_[d]]; }
    int sigma_inv(int d) const { return sigma_inv_[d]; }

    /// Index of the sigma-cycle (vertex) / phi-cycle (face) containing d.
    int vertex_of(int d) const { return vertex_of_[d]; }
    int face_of(int d) const { return face_of_[d]; }
    const std::vector<std::vector<int>>& vertex_cycles() const { return vertex_cycles_; }
    const std::vector<std::vector<int>>& face_cycles() const { return face_cycles_; }
    int degree(int v) const { return int(vertex_cycles_[v].size()); }
    std::vector<int> degrees() const;

    int euler_characteristic() const { return vertices() - edges() + face_count(); }
    bool has_loop() const;
    /// some edge has the same face on both sides
    bool has_one_sided_edge() const;

    bool operator==(const CombinatorialMap& o) const { return alpha_ == o.alpha_ && sigma_ == o.sigma_; }

private:
    std::vector<int> alpha_, sigma_, sigma_inv_;
    std::vector<int> vertex_of_, face_of_;
    std::vector<std::vector<int>> vertex_cycles_, face_cycles_;
    std::string name_;
};

using FacialWalk = std::vector<int>;

/// Facial walks (cycles of phi), each starting at its smallest dart.
std::vector<FacialWalk> faces(const CombinatorialMap& m);
/// Vertex sequence visited by a facial walk.
std::vector<int> walk_vertices(const CombinatorialMap& m, const FacialWalk& w);

int genus(const CombinatorialMap& m);
bool is_cellular_torus(const CombinatorialMap& m);

/// alpha and sigma relabelled by d -> perm[d].
CombinatorialMap relabel(const CombinatorialMap& m, const std::vector<int>& perm);
/// Geometric dual: faces become vertices with rotation phi, same edges.
/// dual(dual(m)) == m.  Throws PropertyViolation unless m is cellular on T.
CombinatorialMap dual(const CombinatorialMap& m);
/// Orientation reversal (sigma inverted).
CombinatorialMap mirror(const CombinatorialMap& m);

/// Canonical code: lexicographically smallest breadth-first encoding over
/// all starting darts.  Equal codes <=> orientation-preserving isomorphic.
struct CanonicalForm {
    std::vector<int> code;
    std::vector<int> labels;  // dart -> canonical label for the minimising start
    bool operator==(const CanonicalForm& o) const { return code == o.code; }
};
CanonicalForm canonical_form(const CombinatorialMap& m);
CombinatorialMap canonical_map(const CombinatorialMap& m);

/// Dart bijection commuting with alpha and sigma.
struct MapMatch {
    std::vector<int> dart_map;
};
std::optional<MapMatch> is_equivalent(const CombinatorialMap& a, const CombinatorialMap& b);
bool verify_match(const CombinatorialMap& a, const CombinatorialMap& b, const MapMatch& m);

enum class DeleteMode { pipeline, unrestricted };

/// Removes the edge of dart d.  In pipeline mode the two sides must be
/// different faces (PropertyViolation otherwise).  Throws PropertyViolation
/// if the result would be disconnected.  Darts above the removed ones shift
/// down by one or two.
CombinatorialMap delete_edge(const CombinatorialMap& m, int d, DeleteMode mode = DeleteMode::pipeline);
/// Removes a degree-1 vertex and its edge.
CombinatorialMap delete_deg1_vertex(const CombinatorialMap& m, int v);
/// Adds an edge whose darts follow `after1` and `after2` anticlockwise at
/// their vertices; the new darts get labels darts() and darts()+1.  If
/// after2 == -1 the second dart follows the first one (both at the vertex of
/// after1).
CombinatorialMap insert_edge(const CombinatorialMap& m, int after1, int after2);

struct FaceSubgraph {
    std::vector<int> faces;     // J
    std::vector<int> darts;     // darts of edges incident with a face of J
    std::vector<int> vertices;  // V(G(J))
    std::vector<int> exterior;  // Ext(G(J)): vertices also on a face outside J
};
/// InvalidInput unless J is a nonempty proper subset of the faces.
FaceSubgraph face_subgraph(const CombinatorialMap& m, const std::vector<int>& J);

/// Map G ^ G*: vertices, face centres and one crossing per edge; each edge
/// and dual edge is split at its crossing.  PropertyViolation naming the edge
/// if some edge has the same face on both sides.
///
/// Labels: for a dart d of m, 4d is the half at vertex(d), 4d+1 its partner
/// at the crossing, 4d+2 the dual half at the face of d, 4d+3 its partner.
CombinatorialMap distinguished_graph(const CombinatorialMap& m);

/// `.cmap` text format with 1-based darts.
CombinatorialMap parse_cmap(std::istream& in);
CombinatorialMap parse_cmap(const std::string& text);
CombinatorialMap load_cmap(const std::string& path);
/// Writes the canonical form of m.
std::string serialize_cmap(const CombinatorialMap& m);
/// Writes m with its current labels.
std::string serialize_cmap_raw(const CombinatorialMap& m);

}  // namespace ellnewton
