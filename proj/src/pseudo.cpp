#include "ellnewton/pseudo.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "ellnewton/errors.hpp"
#include "ellnewton/newton.hpp"

namespace ellnewton {

namespace {

void partitions(int total, int parts, int max_part, int min_part, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
    if (parts == 0) {
        if (total == 0) out.push_back(cur);
        return;
    }
    for (int p = std::min(max_part, total - min_part * (parts - 1)); p >= min_part; --p) {
        cur.push_back(p);
        partitions(total - p, parts - 1, p, min_part, cur, out);
        cur.pop_back();
    }
}

// faces and connectivity of (alpha, sigma) without building a map
struct QuickCheck {
    std::vector<char> seen;
    std::vector<int> stack;

    int face_count(const std::vector<int>& a, const std::vector<int>& s) {
        const int n = int(a.size());
        seen.assign(n, 0);
        int F = 0;
        for (int d = 0; d < n; ++d) {
            if (seen[d]) continue;
            ++F;
            for (int x = d; !seen[x]; x = s[a[x]]) seen[x] = 1;
        }
        return F;
    }

    bool connected(const std::vector<int>& a, const std::vector<int>& s) {
        const int n = int(a.size());
        seen.assign(n, 0);
        stack.assign(1, 0);
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : {a[x], s[x]})
                if (!seen[y]) {
                    seen[y] = 1;
                    ++count;
                    stack.push_back(y);
                }
        }
        return count == n;
    }
};

int relabel_after_delete(int x, int d1, int d2) { return x - (x > d1) - (x > d2); }

}  // namespace

std::vector<CombinatorialMap> enumerate_maps(int V, int E, const EnumConstraints& c) {
    if (V < 1 || E < 1) throw InvalidInput("enumerate_maps: need V >= 1 and E >= 1");
    const int F = E - V;  // V - E + F = 0
    if (F < 1 || (c.faces >= 0 && c.faces != F)) return {};
    const int n = 2 * E;
    std::vector<std::vector<int>> degs;
    std::vector<int> cur;
    partitions(n, V, n, std::max(1, c.min_degree), cur, degs);

    std::map<std::vector<int>, CombinatorialMap> classes;
    long examined = 0;
    QuickCheck qc;
    for (const auto& deg : degs) {
        std::vector<int> sigma(n), vertex(n);
        for (int v = 0, start = 0; v < V; start += deg[v], ++v)
            for (int k = 0; k < deg[v]; ++k) {
                sigma[start + k] = start + (k + 1) % deg[v];
                vertex[start + k] = v;
            }
        std::vector<int> alpha(n, -1);
        std::function<void()> rec = [&] {
            int d = 0;
            while (d < n && alpha[d] >= 0) ++d;
            if (d == n) {
                if (++examined > c.budget)
                    throw UnsupportedConfiguration("enumerate_maps: budget of " + std::to_string(c.budget) +
                                                   " candidates exceeded (V=" + std::to_string(V) +
                                                   ", E=" + std::to_string(E) + ")");
                if (qc.face_count(alpha, sigma) != F || !qc.connected(alpha, sigma)) return;
                CombinatorialMap m(alpha, sigma);
                if (c.newtonian && !is_newton_graph(m, V).newtonian) return;
                auto cf = canonical_form(m);
                if (!classes.count(cf.code)) classes.emplace(cf.code, relabel(m, cf.labels));
                return;
            }
            for (int e = d + 1; e < n; ++e) {
                if (alpha[e] >= 0 || (c.loopless && vertex[e] == vertex[d])) continue;
                alpha[d] = e;
                alpha[e] = d;
                rec();
                alpha[d] = alpha[e] = -1;
            }
        };
        rec();
    }
    std::vector<CombinatorialMap> out;
    for (auto& [code, m] : classes) out.push_back(m);
    return out;
}

namespace {

CombinatorialMap prune(const CombinatorialMap& m, std::vector<int>& pruned) {
    CombinatorialMap cur = m;
    for (;;) {
        int v = -1;
        for (int u = 0; u < cur.vertices() && v < 0; ++u)
            if (cur.degree(u) == 1) v = u;
        if (v < 0 || cur.vertices() == 1) return cur;
        pruned.push_back(v);
        cur = delete_deg1_vertex(cur, v);
    }
}

}  // namespace

std::vector<ReductionTrace> reduce(const CombinatorialMap& m, ReduceStrategy strategy) {
    const auto rep = is_newton_graph(m);
    if (!rep.newtonian) throw PropertyViolation("reduce: input is not a Newton graph");
    const int r = rep.order;
    std::vector<ReductionTrace> out;
    std::set<std::vector<int>> seen;

    std::vector<int> deleted;
    std::function<void(const CombinatorialMap&, int)> rec = [&](const CombinatorialMap& cur, int marker) {
        const int k = int(deleted.size());
        if (cur.vertices() != r || cur.edges() != 2 * r - k || cur.face_count() != r - k)
            throw PropertyViolation("reduce: count identity broken after " + std::to_string(k) + " merges");
        if (cur.face_count() == 1) {
            auto code = canonical_form(cur).code;
            if (!seen.insert(code).second) return;
            ReductionTrace t{m, deleted, {}, cur, cur, 0, 0};
            t.ghat = prune(cur, t.pruned);
            t.L = int(t.pruned.size());
            t.rho = t.ghat.vertices();
            out.push_back(std::move(t));
            return;
        }
        const int fm = cur.face_of(marker);
        std::vector<int> eligible;
        for (int d : cur.face_cycles()[fm])
            if (cur.face_of(cur.alpha(d)) != fm) eligible.push_back(d);
        std::sort(eligible.begin(), eligible.end());
        if (eligible.empty()) throw PropertyViolation("reduce: merged face has no edge to another face");
        if (strategy == ReduceStrategy::first) eligible.resize(1);
        for (int d : eligible) {
            const int d2 = cur.alpha(d);
            int keep = -1;
            for (int x : cur.face_cycles()[fm])
                if (x != d && x != d2) keep = x;
            if (keep < 0) throw PropertyViolation("reduce: merged face consists of one edge");
            auto next = delete_edge(cur, d);
            deleted.push_back(d);
            rec(next, relabel_after_delete(keep, d, d2));
            deleted.pop_back();
            if (strategy == ReduceStrategy::first && !out.empty()) return;
        }
    };
    const int starts = strategy == ReduceStrategy::first ? 1 : m.face_count();
    for (int f = 0; f < starts; ++f) rec(m, m.face_cycles()[f][0]);
    return out;
}

HatClassification classify_hat(const CombinatorialMap& m) {
    if (m.face_count() != 1 || m.edges() != m.vertices() + 1 || !is_cellular_torus(m))
        throw InvalidInput("classify_hat: need a single-face torus map with E = V + 1");
    if (m.has_loop()) throw InvalidInput("classify_hat: map has a loop");
    HatClassification h;
    h.degrees = m.degrees();
    std::sort(h.degrees.rbegin(), h.degrees.rend());
    if (h.degrees.back() < 2) throw InvalidInput("classify_hat: vertex of degree < 2");
    const int rest = int(std::count(h.degrees.begin(), h.degrees.end(), 2));
    const int V = m.vertices();
    if (h.degrees[0] == 3 && V >= 2 && h.degrees[1] == 3 && rest == V - 2)
        h.kind = HatCase::a1;
    else if (h.degrees[0] == 4 && rest == V - 1)
        h.kind = HatCase::a2;
    else
        throw PropertyViolation("classify_hat: degree multiset is neither {3,3,2,..} nor {4,2,..}");

    auto branch = [&](int x) { return m.degree(m.vertex_of(x)) > 2; };
    FacialWalk w = faces(m)[0];
    auto it = std::find_if(w.begin(), w.end(), branch);
    std::rotate(w.begin(), it, w.end());
    h.walk = w;
    if (int(w.size()) != 2 * (V + 1)) throw PropertyViolation("classify_hat: walk length is not 2(rho+1)");
    for (int x : w) {
        if (branch(x)) h.subwalks.emplace_back();
        h.subwalks.back().push_back(x);
    }
    const int n = int(h.subwalks.size());
    h.inverse.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        std::vector<int> inv;
        for (auto x = h.subwalks[i].rbegin(); x != h.subwalks[i].rend(); ++x) inv.push_back(m.alpha(*x));
        for (int j = 0; j < n; ++j)
            if (h.subwalks[j] == inv) h.inverse[i] = j;
        if (h.inverse[i] < 0) throw PropertyViolation("classify_hat: subwalk without inverse");
        if (h.inverse[i] == (i + 1) % n || h.inverse[(i + 1) % n] == i)
            throw PropertyViolation("classify_hat: subwalk adjacent to its inverse");
    }
    const int pieces = h.kind == HatCase::a1 ? 6 : 4;
    if (n != pieces) throw PropertyViolation("classify_hat: wrong number of subwalks");
    for (int i = 0; i < n; ++i) {
        if (h.inverse[i] != (i + n / 2) % n) throw PropertyViolation("classify_hat: subwalks not in W W^-1 order");
        const auto& s = h.subwalks[i];
        const int tail = m.vertex_of(s.front()), head = m.vertex_of(m.alpha(s.back()));
        if (h.kind == HatCase::a1 && tail == head)
            throw PropertyViolation("classify_hat: a1 subwalk is closed");
        if (h.kind == HatCase::a2 && s.size() < 2)
            throw PropertyViolation("classify_hat: a2 subwalk without a degree-2 vertex");
    }
    return h;
}

std::string data_directory() {
    if (const char* env = std::getenv("ELLNEWTON_DATA_DIR"); env && *env) return env;
    return ELLNEWTON_DEFAULT_DATA_DIR;
}

std::vector<std::string> catalog_names() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(data_directory()) / "catalog";
    std::vector<std::string> names;
    if (!fs::is_directory(dir)) throw InvalidInput("catalog directory not found: " + dir.string());
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".cmap") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

namespace {

void gate(const std::string& name, const CombinatorialMap& m) {
    auto fail = [&](const std::string& why) { throw PropertyViolation("catalog " + name + ": " + why); };
    auto degs = m.degrees();
    std::sort(degs.begin(), degs.end());
    if (name.rfind("newton", 0) == 0) {
        const int r = name == "newton2" ? 2 : 3;
        if (!is_newton_graph(m, r).newtonian) fail("not a Newton graph of order " + std::to_string(r));
    } else if (name.rfind("ghat", 0) == 0) {
        classify_hat(m);
    } else if (name.rfind("gcheck3", 0) == 0) {
        if (m.vertices() != 3 || m.edges() != 4 || m.face_count() != 1 || m.has_loop() || !is_cellular_torus(m))
            fail("not a loopless single-face map with V=3, E=4");
        const std::map<std::string, std::vector<int>> expect = {
            {"gcheck3.a", {1, 3, 4}}, {"gcheck3.b", {2, 3, 3}}, {"gcheck3.c", {2, 2, 4}}};
        if (auto it = expect.find(name); it != expect.end() && it->second != degs) fail("degree multiset");
    } else if (name == "nuclear") {
        if (m.vertices() != 1 || m.edges() != 2 || m.face_count() != 1) fail("not one vertex, two edges, one face");
    }
}

}  // namespace

CombinatorialMap catalog(const std::string& name) {
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw InvalidInput("unknown catalog entry: " + name);
    auto m = load_cmap((std::filesystem::path(data_directory()) / "catalog" / (name + ".cmap")).string());
    gate(name, m);
    return m.renamed(name);
}

std::vector<std::string> catalog_newton(int r) {
    std::vector<std::string> out;
    for (const auto& n : catalog_names())
        if (n.rfind("newton", 0) == 0 && is_newton_graph(catalog(n), r).newtonian) out.push_back(n);
    return out;
}

namespace {

std::string roman(int k) {
    static const char* r[] = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii",
                              "xiii", "xiv", "xv", "xvi", "xvii", "xviii", "xix", "xx"};
    return k < 20 ? r[k] : std::to_string(k + 1);
}

}  // namespace

std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> out;
    EnumConstraints newton;
    newton.loopless = true;
    newton.newtonian = true;
    out.push_back({"newton2", "unique Newton graph of order 2", enumerate_maps(2, 4, newton).at(0)});

    const auto n3 = enumerate_maps(3, 6, newton);
    std::vector<int> orbit(n3.size(), -1);
    int k = 0;
    for (std::size_t i = 0; i < n3.size(); ++i) {
        if (orbit[i] >= 0) continue;
        for (const auto& img : {n3[i], mirror(n3[i]), dual(n3[i]), mirror(dual(n3[i]))})
            for (std::size_t j = 0; j < n3.size(); ++j)
                if (orbit[j] < 0 && is_equivalent(img, n3[j])) orbit[j] = k;
        std::string members;
        for (std::size_t j = 0; j < n3.size(); ++j)
            if (orbit[j] == k) members += (members.empty() ? "" : " ") + std::to_string(j + 1);
        out.push_back({"newton3." + roman(k),
                       "order-3 Newton graph; dual/mirror orbit of enumerated classes " + members + " of " +
                           std::to_string(n3.size()),
                       n3[i]});
        ++k;
    }

    EnumConstraints single;
    single.loopless = true;
    single.faces = 1;
    single.min_degree = 2;
    out.push_back({"ghat2", "Ghat_2, case a1", enumerate_maps(2, 3, single).at(0)});
    single.min_degree = 1;
    for (const auto& m : enumerate_maps(3, 4, single)) {
        auto d = m.degrees();
        std::sort(d.begin(), d.end());
        if (d == std::vector<int>{1, 3, 4}) {
            out.push_back({"gcheck3.a", "Gcheck_3 with a pendant vertex, degrees {1,3,4}", m});
        } else if (d == std::vector<int>{2, 3, 3}) {
            out.push_back({"gcheck3.b", "Gcheck_3 = Ghat_3, degrees {2,3,3}", m});
            out.push_back({"ghat3.a1", "Ghat_3, case a1", m});
        } else if (d == std::vector<int>{2, 2, 4}) {
            out.push_back({"gcheck3.c", "Gcheck_3 = Ghat_3, degrees {2,2,4}", m});
            out.push_back({"ghat3.a2", "Ghat_3, case a2", m});
        }
    }
    out.push_back({"nuclear", "one vertex, two loops, one face",
                   CombinatorialMap({2, 3, 0, 1}, {1, 2, 3, 0})});
    for (auto& e : out) e.map = e.map.renamed(e.name);
    return out;
}

void write_catalog(const std::string& dir, const std::vector<CatalogEntry>& entries) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& e : entries) {
        std::ofstream out(fs::path(dir) / (e.name + ".cmap"));
        if (!out) throw InvalidInput("cannot write catalog entry " + e.name + " in " + dir);
        out << "# " << e.note << '\n' << serialize_cmap(e.map);
    }
}

std::vector<TwoFaceGraph> merged_two_face_graphs(const CombinatorialMap& m) {
    if (!is_newton_graph(m, 3).newtonian) throw PropertyViolation("merged_two_face_graphs: not an order-3 Newton graph");
    std::vector<TwoFaceGraph> out;
    std::set<std::vector<int>> seen;
    for (int d = 0; d < m.darts(); ++d) {
        if (d > m.alpha(d)) continue;
        auto g = delete_edge(m, d);
        if (!seen.insert(canonical_form(g).code).second) continue;
        TwoFaceGraph t{g, false, !g.has_one_sided_edge(), {}};
        for (int v = 0; v < g.vertices(); ++v) t.has_pendant |= g.degree(v) == 1;
        // maximal common subwalks of the two merged faces: consecutive
        // darts x, phi(x) of the first face continue a common piece when the
        // second face runs through them in reverse
        const int fa = m.face_of(d), fb = m.face_of(m.alpha(d));
        auto across = [&](int x) { return m.face_of(m.alpha(x)) == fb; };
        auto joined = [&](int x) { return across(x) && across(m.phi(x)) && m.phi(m.alpha(m.phi(x))) == m.alpha(x); };
        const auto& walk = m.face_cycles()[fa];
        for (int x : walk) {
            if (!across(x)) continue;
            // start of a piece: predecessor does not join into x
            int prev = walk[(std::find(walk.begin(), walk.end(), x) - walk.begin() + walk.size() - 1) % walk.size()];
            if (joined(prev) && m.phi(prev) == x) continue;
            int len = 1;
            for (int y = x; joined(y) && len < int(walk.size()); y = m.phi(y)) ++len;
            t.shared.push_back(len);
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace ellnewton
