#include "ellnewton/newton.hpp"

#include <bit>
#include <cstdint>
#include <ostream>

#include "ellnewton/errors.hpp"
#include "maxflow.hpp"

namespace ellnewton {

namespace {

// vertex set of each face as a bit mask
std::vector<std::uint64_t> face_vertex_masks(const CombinatorialMap& m) {
    if (m.vertices() > 64) throw UnsupportedConfiguration("Hall check: more than 64 vertices");
    std::vector<std::uint64_t> mask(m.face_count(), 0);
    for (int d = 0; d < m.darts(); ++d) mask[m.face_of(d)] |= std::uint64_t(1) << m.vertex_of(d);
    return mask;
}

bool next_combination(std::vector<int>& c, int n) {
    int k = int(c.size());
    for (int i = k - 1; i >= 0; --i)
        if (c[i] < n - k + i) {
            ++c[i];
            for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    return false;
}

}  // namespace

HallResult hall_A_check(const CombinatorialMap& m) {
    const int F = m.face_count();
    if (F > 24) throw UnsupportedConfiguration("Hall check: too many faces for the subset scan");
    const auto mask = face_vertex_masks(m);
    for (int k = 1; k < F; ++k) {
        std::vector<int> J(k);
        for (int i = 0; i < k; ++i) J[i] = i;
        do {
            std::uint64_t u = 0;
            for (int f : J) u |= mask[f];
            if (std::popcount(u) <= k) return {false, J};
        } while (next_combination(J, F));
    }
    return {};
}

bool angle_feasibility(const CombinatorialMap& m) {
    const int V = m.vertices(), F = m.face_count();
    if (F == 1) return true;
    std::vector<std::vector<char>> inc(F, std::vector<char>(V, 0));
    for (int d = 0; d < m.darts(); ++d) inc[m.face_of(m.sigma(d))][m.vertex_of(d)] = 1;
    // nodes: 0 source, 1 sink, 2.. faces, 2+F.. vertices
    for (int f0 = 0; f0 < F; ++f0)
        for (int v0 = 0; v0 < V; ++v0) {
            detail::MaxFlow net(2 + F + V);
            for (int f = 0; f < F; ++f) {
                if (f == f0) continue;
                net.add_edge(0, 2 + f, 1);
                for (int v = 0; v < V; ++v)
                    if (v != v0 && inc[f][v]) net.add_edge(2 + f, 2 + F + v, 1);
            }
            for (int v = 0; v < V; ++v)
                if (v != v0) net.add_edge(2 + F + v, 1, 1);
            if (net.run(0, 1) < F - 1) return false;
        }
    return true;
}

std::optional<SectorWeights> angle_witness(const CombinatorialMap& m) {
    const int V = m.vertices(), F = m.face_count(), K = m.darts();
    if (V != F) throw InvalidInput("angle_witness: needs as many faces as vertices");
    // Sector weights w_d >= 1 with sums K per vertex and per face, i.e. a
    // circulation with lower bounds.  Vertices of the unscaled polytope are
    // 0/1, so a positive solution exists iff one with w >= 1/K does.
    const int S = 0, T = 1, SS = 2, TT = 3, v0 = 4, f0 = 4 + V;
    detail::MaxFlow net(4 + V + F);
    std::vector<long> excess(4 + V + F, 0);
    std::vector<int> edge(K);
    for (int d = 0; d < K; ++d) {
        const int v = v0 + m.vertex_of(d), f = f0 + m.face_of(m.sigma(d));
        edge[d] = net.add_edge(v, f, K - 1);
        excess[f] += 1;
        excess[v] -= 1;
    }
    for (int v = 0; v < V; ++v) {
        excess[v0 + v] += K;
        excess[S] -= K;
    }
    for (int f = 0; f < F; ++f) {
        excess[T] += K;
        excess[f0 + f] -= K;
    }
    net.add_edge(T, S, long(K) * V);
    long need = 0;
    for (int n = 0; n < int(excess.size()); ++n) {
        if (excess[n] > 0) {
            net.add_edge(SS, n, excess[n]);
            need += excess[n];
        } else if (excess[n] < 0) {
            net.add_edge(n, TT, -excess[n]);
        }
    }
    if (net.run(SS, TT) != need) return std::nullopt;
    SectorWeights w;
    w.denominator = K;
    for (int d = 0; d < K; ++d) w.numerator.push_back(1 + net.flow(edge[d]));
    return w;
}

EulerResult euler_E_check(const CombinatorialMap& m) {
    for (int d = 0; d < m.darts(); ++d)
        if (d < m.alpha(d) && m.face_of(d) == m.face_of(m.alpha(d))) return {false, d};
    return {};
}

PropertyReport is_newton_graph(const CombinatorialMap& m, int r) {
    PropertyReport rep;
    rep.order = r > 0 ? r : m.vertices();
    rep.cellular = is_cellular_torus(m);
    rep.loopless = !m.has_loop();
    rep.counts = m.vertices() == rep.order && m.edges() == 2 * rep.order && m.face_count() == rep.order;
    rep.a = hall_A_check(m);
    rep.e = euler_E_check(m);
    rep.newtonian = rep.cellular && rep.loopless && rep.counts && rep.a.holds && rep.e.holds;
    return rep;
}

void write_report(std::ostream& out, const PropertyReport& rep) {
    out << "order=" << rep.order << '\n'
        << "cellular=" << rep.cellular << '\n'
        << "loopless=" << rep.loopless << '\n'
        << "counts=" << rep.counts << '\n'
        << "a_property=" << rep.a.holds << '\n';
    if (!rep.a.holds) {
        out << "a_witness=";
        for (std::size_t i = 0; i < rep.a.violating.size(); ++i) out << (i ? "," : "") << rep.a.violating[i] + 1;
        out << '\n';
    }
    out << "e_property=" << rep.e.holds << '\n';
    if (!rep.e.holds) out << "e_witness=" << rep.e.edge + 1 << '\n';
    out << "newtonian=" << rep.newtonian << '\n';
}

}  // namespace ellnewton
