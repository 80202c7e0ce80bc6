#include "ellnewton/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <set>

#include "ellnewton/errors.hpp"
#include "ellnewton/pseudo.hpp"

namespace ellnewton {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_turn(double t) { return t - std::floor(t); }

// index i of the sector (dirs[i], dirs[i+1]) containing theta; -1 on a ray
int sector_of(const std::vector<double>& dirs, double theta, double tol) {
    const int n = int(dirs.size());
    for (int i = 0; i < n; ++i) {
        const double width = (i + 1 < n ? dirs[i + 1] : dirs[0] + 1.0) - dirs[i];
        const double t = wrap_turn(theta - dirs[i]);
        if (t >= width) continue;
        return t < tol || width - t < tol ? -1 : i;
    }
    return -1;
}

}  // namespace

ExtractedGraph extract_graph(const FlowField& F, const ExtractOptions& opt) {
    const auto& eqs = F.equilibria();
    for (const auto& e : eqs)
        if (e.kind == EquilibriumKind::saddle && !e.simple)
            throw UnsupportedConfiguration("extraction needs simple saddles");
    const auto conn = saddle_connection_check(F);
    if (conn.found) {
        throw PropertyViolation("saddle connection from saddle " + std::to_string(conn.from) + " to saddle " +
                                std::to_string(conn.to) + "; extraction refused");
    }
    const Lattice& lat = F.function().lattice();
    const Portrait portrait = trace_portrait(F, opt.integrate);
    const int E = int(portrait.saddles.size());
    if (E == 0) throw PropertyViolation("flow has no saddles");

    std::vector<int> dart_attractor(2 * E);
    std::vector<double> dir(2 * E);
    std::vector<std::vector<cplx>> path(2 * E);
    std::vector<double> argf(E);
    std::map<int, cplx> coeff;
    for (int k = 0; k < E; ++k) {
        argf[k] = portrait.separatrices[k][0].argf;
        for (int b = 0; b < 2; ++b) {
            const Separatrix& sp = portrait.separatrices[k][b];
            const int a = sp.endpoint;
            if (a < 0 || eqs[a].kind != EquilibriumKind::attractor) {
                throw NonConvergence("unstable separatrix did not reach an attractor",
                                     {sp.path.samples.back().z});
            }
            if (!coeff.count(a)) coeff[a] = leading_coefficient(F, a);
            const int d = 2 * k + b;
            dart_attractor[d] = a;
            dir[d] = arrival_direction(F, a, sp.path, sp.argf, coeff[a]);
            for (const auto& s : sp.path.samples) path[d].push_back(s.z);
            path[d].push_back(lat.nearest_lift(eqs[a].location, sp.path.samples.back().z));
        }
    }

    // sigma: anticlockwise order of arrival directions at each attractor
    std::vector<int> alpha(2 * E), sigma(2 * E);
    for (int d = 0; d < 2 * E; ++d) alpha[d] = d ^ 1;
    std::map<int, std::vector<int>> at;
    for (int d = 0; d < 2 * E; ++d) at[dart_attractor[d]].push_back(d);
    const double tie = 1e-6 / kTwoPi;
    for (auto& [a, ds] : at) {
        std::sort(ds.begin(), ds.end(), [&](int x, int y) { return dir[x] < dir[y]; });
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const int next = ds[(i + 1) % ds.size()];
            const double gap = wrap_turn(dir[next] - dir[ds[i]]);
            if (ds.size() > 1 && (gap < tie || 1.0 - gap < tie))
                throw PropertyViolation("arrival directions tie at attractor " + std::to_string(a));
            sigma[ds[i]] = next;
        }
    }
    CombinatorialMap m(alpha, sigma);

    ExtractedGraph g{m, lat, std::vector<int>(m.vertices()), portrait.saddles,
                     std::vector<int>(m.face_count(), -1), dir, path, argf};
    for (int d = 0; d < 2 * E; ++d) g.vertex_equilibrium[m.vertex_of(d)] = dart_attractor[d];

    if (opt.validate_faces) {
        const FlowField back = F.reversed();
        const double unit = std::abs(F.function().reduced_lattice().omega1());
        for (int d = 0; d < 2 * E; ++d) {
            const int a = dart_attractor[d];
            const int next = m.sigma(d);
            double gap = wrap_turn(dir[next] - dir[d]);
            if (next == d) gap = 1.0;
            double rho = 1e-2 * unit;
            for (std::size_t i = 0; i < eqs.size(); ++i)
                if (int(i) != a) rho = std::min(rho, 0.2 * lat.torus_distance(eqs[i].location, eqs[a].location));
            const cplx z0 = eqs[a].location + std::polar(rho, kTwoPi * (dir[d] + 0.5 * gap));
            const auto tr = integrate(back, z0, opt.integrate);
            if (tr.terminal < 0 || eqs[tr.terminal].kind != EquilibriumKind::repellor)
                throw NonConvergence("face sample did not reach a pole", {z0});
            int& fe = g.face_equilibrium[m.face_of(next)];
            if (fe >= 0 && fe != tr.terminal)
                throw PropertyViolation("face " + std::to_string(m.face_of(next)) + " reaches two different poles");
            fe = tr.terminal;
        }
        std::set<int> poles(g.face_equilibrium.begin(), g.face_equilibrium.end());
        int n_poles = 0;
        for (const auto& e : eqs) n_poles += e.kind == EquilibriumKind::repellor;
        if (int(poles.size()) != m.face_count() || m.face_count() != n_poles)
            throw PropertyViolation("faces and poles are not in bijection");
    }
    return g;
}

ExtractedGraph extract_dual(const FlowField& F, const ExtractOptions& opt) {
    ExtractedGraph g = extract_graph(F.reversed(), opt);
    // the orientation-reversed map has the same vertices, edges and faces
    g.map = mirror(g.map);
    return g;
}

Wrap wrap_numbers(const ExtractedGraph& g, int edge, const UnimodularMatrix& chart) {
    if (edge < 0 || edge >= g.map.edges()) throw InvalidInput("edge index out of range");
    const int d0 = 2 * edge, d1 = 2 * edge + 1;
    if (g.map.vertex_of(d0) != g.map.vertex_of(d1)) throw InvalidInput("edge " + std::to_string(edge) + " is not a loop");
    const cplx delta = g.dart_path[d0].back() - g.dart_path[d1].back();
    const auto c = g.lattice.coords(delta);
    const long m = std::lround(c[0]), n = std::lround(c[1]);
    Wrap w;
    w.residual = std::max(std::abs(c[0] - double(m)), std::abs(c[1] - double(n)));
    if (w.residual >= 0.01) throw NonConvergence("lifted edge is not closed on the torus", {delta});
    w.p = m * chart.p1 + n * chart.q1;
    w.q = m * chart.p2 + n * chart.q2;
    return w;
}

Identification identify(const CombinatorialMap& m) {
    Identification id{"unknown", serialize_cmap(m)};
    auto degs = m.degrees();
    std::sort(degs.begin(), degs.end());
    for (const auto& name : catalog_names()) {
        const auto c = catalog(name);
        if (c.darts() != m.darts() || c.vertices() != m.vertices() || c.face_count() != m.face_count()) continue;
        auto cd = c.degrees();
        std::sort(cd.begin(), cd.end());
        if (cd != degs) continue;
        if (is_equivalent(c, m)) {
            id.name = name;
            break;
        }
    }
    return id;
}

int count_regions(const FlowField& F, int grid) {
    const auto& eqs = F.equilibria();
    const FlowField back = F.reversed();
    const Portrait fwd = trace_portrait(F), bwd = trace_portrait(back);
    std::map<int, std::vector<double>> rays_f, rays_b;
    std::map<int, cplx> cf, cb;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (eqs[i].kind == EquilibriumKind::attractor) {
            for (const auto& s : measure_sector_angles(F, int(i), fwd)) rays_f[int(i)].push_back(s.direction);
            cf[int(i)] = leading_coefficient(F, int(i));
        } else if (eqs[i].kind == EquilibriumKind::repellor) {
            for (const auto& s : measure_sector_angles(back, int(i), bwd)) rays_b[int(i)].push_back(s.direction);
            cb[int(i)] = leading_coefficient(back, int(i));
        }
    }
    const Lattice& lat = F.function().lattice();
    std::set<std::array<int, 4>> keys;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const cplx z0 = lat.point((i + 0.37) / grid, (j + 0.61) / grid);
            bool near = false;
            for (const auto& e : eqs) near = near || lat.torus_distance(e.location, z0) < 1e-3;
            if (near) continue;
            const auto tf = integrate(F, z0), tb = integrate(back, z0);
            if (tf.terminal < 0 || tb.terminal < 0) continue;
            if (eqs[tf.terminal].kind != EquilibriumKind::attractor || eqs[tb.terminal].kind != EquilibriumKind::repellor)
                continue;  // on a separatrix
            const double df = arrival_direction(F, tf.terminal, tf, tf.argf, cf[tf.terminal]);
            const double db = arrival_direction(back, tb.terminal, tb, tb.argf, cb[tb.terminal]);
            const int sf = sector_of(rays_f[tf.terminal], df, 1e-9), sb = sector_of(rays_b[tb.terminal], db, 1e-9);
            if (sf < 0 || sb < 0) continue;
            keys.insert({tf.terminal, sf, tb.terminal, sb});
        }
    return int(keys.size());
}

void write_geom(std::ostream& out, const ExtractedGraph& g) {
    const auto old = out.precision(12);
    for (std::size_t d = 0; d < g.dart_path.size(); ++d) {
        if (d) out << '\n';
        out << "dart " << d + 1 << '\n';
        for (const cplx& z : g.dart_path[d]) out << z.real() << ' ' << z.imag() << '\n';
    }
    out.precision(old);
}

}  // namespace ellnewton
