#include "ellnewton/cmap.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ellnewton/errors.hpp"

namespace ellnewton {

namespace {

bool is_permutation_of(const std::vector<int>& p, int n) {
    std::vector<char> seen(n, 0);
    for (int x : p) {
        if (x < 0 || x >= n || seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}

bool connected(const std::vector<int>& alpha, const std::vector<int>& sigma) {
    const int n = int(alpha.size());
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int d = stack.back();
        stack.pop_back();
        for (int e : {alpha[d], sigma[d]}) {
            if (!seen[e]) {
                seen[e] = 1;
                ++count;
                stack.push_back(e);
            }
        }
    }
    return count == n;
}

std::vector<std::vector<int>> cycles(const std::vector<int>& perm, std::vector<int>& owner) {
    const int n = int(perm.size());
    owner.assign(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (owner[s] >= 0) continue;
        std::vector<int> c;
        for (int d = s; owner[d] < 0; d = perm[d]) {
            owner[d] = int(out.size());
            c.push_back(d);
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

CombinatorialMap::CombinatorialMap(std::vector<int> alpha, std::vector<int> sigma, std::string name)
    : alpha_(std::move(alpha)), sigma_(std::move(sigma)), name_(std::move(name)) {
    const int n = int(alpha_.size());
    if (n == 0 || n % 2 != 0) throw InvalidInput("a map needs a positive even number of darts");
    if (int(sigma_.size()) != n) throw InvalidInput("alpha and sigma act on different dart sets");
    if (!is_permutation_of(alpha_, n) || !is_permutation_of(sigma_, n)) {
        throw InvalidInput("alpha and sigma must be permutations of the darts");
    }
    for (int d = 0; d < n; ++d) {
        if (alpha_[d] == d || alpha_[alpha_[d]] != d) throw InvalidInput("alpha must be a fixed-point-free involution");
    }
    if (!connected(alpha_, sigma_)) throw InvalidInput("map is not connected");
    sigma_inv_.assign(n, 0);
    for (int d = 0; d < n; ++d) sigma_inv_[sigma_[d]] = d;
    vertex_cycles_ = cycles(sigma_, vertex_of_);
    std::vector<int> phi(n);
    for (int d = 0; d < n; ++d) phi[d] = sigma_[alpha_[d]];
    face_cycles_ = cycles(phi, face_of_);
}

CombinatorialMap CombinatorialMap::renamed(std::string name) const {
    CombinatorialMap m = *this;
    m.name_ = std::move(name);
    return m;
}

std::vector<int> CombinatorialMap::degrees() const {
    std::vector<int> out;
    for (const auto& c : vertex_cycles_) out.push_back(int(c.size()));
    return out;
}

bool CombinatorialMap::has_loop() const {
    for (int d = 0; d < darts(); ++d)
        if (vertex_of_[d] == vertex_of_[alpha_[d]]) return true;
    return false;
}

bool CombinatorialMap::has_one_sided_edge() const {
    for (int d = 0; d < darts(); ++d)
        if (face_of_[d] == face_of_[alpha_[d]]) return true;
    return false;
}

std::vector<FacialWalk> faces(const CombinatorialMap& m) { return m.face_cycles(); }

std::vector<int> walk_vertices(const CombinatorialMap& m, const FacialWalk& w) {
    std::vector<int> out;
    for (int d : w) out.push_back(m.vertex_of(d));
    return out;
}

int genus(const CombinatorialMap& m) { return (2 - m.euler_characteristic()) / 2; }

bool is_cellular_torus(const CombinatorialMap& m) { return m.euler_characteristic() == 0; }

CombinatorialMap relabel(const CombinatorialMap& m, const std::vector<int>& perm) {
    const int n = m.darts();
    if (int(perm.size()) != n || !is_permutation_of(perm, n)) throw InvalidInput("relabelling is not a permutation");
    std::vector<int> a(n), s(n);
    for (int d = 0; d < n; ++d) {
        a[perm[d]] = perm[m.alpha(d)];
        s[perm[d]] = perm[m.sigma(d)];
    }
    return CombinatorialMap(std::move(a), std::move(s), m.name());
}

CombinatorialMap dual(const CombinatorialMap& m) {
    if (!is_cellular_torus(m)) throw PropertyViolation("dual requires a map cellularly embedded in the torus");
    std::vector<int> phi(m.darts());
    for (int d = 0; d < m.darts(); ++d) phi[d] = m.phi(d);
    return CombinatorialMap(m.alpha(), std::move(phi), m.name().empty() ? "" : m.name() + "*");
}

CombinatorialMap mirror(const CombinatorialMap& m) {
    std::vector<int> inv(m.darts());
    for (int d = 0; d < m.darts(); ++d) inv[d] = m.sigma_inv(d);
    return CombinatorialMap(m.alpha(), std::move(inv), m.name());
}

// ---------------------------------------------------------------------------
// canonical form

namespace {

// breadth-first labelling from `start`; returns false as soon as the code
// exceeds `bound` (when given)
bool bfs_code(const CombinatorialMap& m, int start, std::vector<int>& code, std::vector<int>& label,
              const std::vector<int>* bound) {
    const int n = m.darts();
    label.assign(n, -1);
    code.clear();
    std::vector<int> order{start};
    order.reserve(n);
    label[start] = 0;
    bool tied = bound != nullptr;
    for (int i = 0; i < n; ++i) {
        const int x = order[i];
        for (int y : {m.sigma(x), m.alpha(x)}) {
            if (label[y] < 0) {
                label[y] = int(order.size());
                order.push_back(y);
            }
            code.push_back(label[y]);
            if (tied) {
                const int b = (*bound)[code.size() - 1];
                if (code.back() > b) return false;
                if (code.back() < b) tied = false;
            }
        }
    }
    return true;
}

}  // namespace

CanonicalForm canonical_form(const CombinatorialMap& m) {
    CanonicalForm best;
    std::vector<int> code, label;
    for (int s = 0; s < m.darts(); ++s) {
        const bool have = !best.code.empty();
        if (!bfs_code(m, s, code, label, have ? &best.code : nullptr)) continue;
        if (!have || code < best.code) {
            best.code = code;
            best.labels = label;
        }
    }
    return best;
}

CombinatorialMap canonical_map(const CombinatorialMap& m) { return relabel(m, canonical_form(m).labels); }

std::optional<MapMatch> is_equivalent(const CombinatorialMap& a, const CombinatorialMap& b) {
    if (a.darts() != b.darts()) return std::nullopt;
    const CanonicalForm ca = canonical_form(a), cb = canonical_form(b);
    if (ca.code != cb.code) return std::nullopt;
    std::vector<int> inv_b(b.darts());
    for (int d = 0; d < b.darts(); ++d) inv_b[cb.labels[d]] = d;
    MapMatch out;
    out.dart_map.resize(a.darts());
    for (int d = 0; d < a.darts(); ++d) out.dart_map[d] = inv_b[ca.labels[d]];
    return out;
}

bool verify_match(const CombinatorialMap& a, const CombinatorialMap& b, const MapMatch& m) {
    if (a.darts() != b.darts() || int(m.dart_map.size()) != a.darts()) return false;
    if (!is_permutation_of(m.dart_map, a.darts())) return false;
    for (int d = 0; d < a.darts(); ++d) {
        if (m.dart_map[a.alpha(d)] != b.alpha(m.dart_map[d])) return false;
        if (m.dart_map[a.sigma(d)] != b.sigma(m.dart_map[d])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// edits

CombinatorialMap delete_edge(const CombinatorialMap& m, int d, DeleteMode mode) {
    const int n = m.darts();
    if (d < 0 || d >= n) throw InvalidInput("dart out of range");
    const int x = d, y = m.alpha(d);
    if (mode == DeleteMode::pipeline && m.face_of(x) == m.face_of(y)) {
        throw PropertyViolation("edge has the same face on both sides; deleting it changes the genus");
    }
    if (n == 2) throw PropertyViolation("cannot delete the only edge");
    std::vector<int> index(n, -1);
    int next = 0;
    for (int k = 0; k < n; ++k)
        if (k != x && k != y) index[k] = next++;
    std::vector<int> a(n - 2), s(n - 2);
    for (int k = 0; k < n; ++k) {
        if (index[k] < 0) continue;
        int q = m.sigma(k);
        while (q == x || q == y) q = m.sigma(q);
        a[index[k]] = index[m.alpha(k)];
        s[index[k]] = index[q];
    }
    try {
        return CombinatorialMap(std::move(a), std::move(s), m.name());
    } catch (const InvalidInput&) {
        throw PropertyViolation("deleting the edge disconnects the map");
    }
}

CombinatorialMap delete_deg1_vertex(const CombinatorialMap& m, int v) {
    if (v < 0 || v >= m.vertices()) throw InvalidInput("vertex out of range");
    if (m.degree(v) != 1) throw InvalidInput("vertex does not have degree 1");
    return delete_edge(m, m.vertex_cycles()[v][0], DeleteMode::unrestricted);
}

CombinatorialMap insert_edge(const CombinatorialMap& m, int after1, int after2) {
    const int n = m.darts();
    if (after1 < 0 || after1 >= n || after2 < -1 || after2 >= n) throw InvalidInput("dart out of range");
    std::vector<int> a = m.alpha(), s = m.sigma();
    const int x = n, y = n + 1;
    a.push_back(y);
    a.push_back(x);
    s.push_back(-1);
    s.push_back(-1);
    s[x] = s[after1];
    s[after1] = x;
    const int at = after2 < 0 ? x : after2;
    s[y] = s[at];
    s[at] = y;
    return CombinatorialMap(std::move(a), std::move(s), m.name());
}

FaceSubgraph face_subgraph(const CombinatorialMap& m, const std::vector<int>& J) {
    std::vector<char> in(m.face_count(), 0);
    for (int f : J) {
        if (f < 0 || f >= m.face_count()) throw InvalidInput("face index out of range");
        in[f] = 1;
    }
    const int k = int(std::count(in.begin(), in.end(), 1));
    if (k == 0 || k == m.face_count()) throw InvalidInput("face subset must be nonempty and proper");
    FaceSubgraph out;
    for (int f = 0; f < m.face_count(); ++f)
        if (in[f]) out.faces.push_back(f);
    std::vector<char> vin(m.vertices(), 0);
    for (int d = 0; d < m.darts(); ++d) {
        if (in[m.face_of(d)] || in[m.face_of(m.alpha(d))]) {
            out.darts.push_back(d);
            vin[m.vertex_of(d)] = 1;
        }
    }
    for (int v = 0; v < m.vertices(); ++v) {
        if (!vin[v]) continue;
        out.vertices.push_back(v);
        for (int d : m.vertex_cycles()[v]) {
            if (!in[m.face_of(d)]) {
                out.exterior.push_back(v);
                break;
            }
        }
    }
    return out;
}

CombinatorialMap distinguished_graph(const CombinatorialMap& m) {
    if (!is_cellular_torus(m)) throw PropertyViolation("distinguished graph requires a cellular toroidal map");
    const int n = m.darts();
    for (int d = 0; d < n; ++d) {
        if (m.face_of(d) == m.face_of(m.alpha(d))) {
            throw PropertyViolation("edge {" + std::to_string(d + 1) + "," + std::to_string(m.alpha(d) + 1) +
                                    "} lies on a single face");
        }
    }
    std::vector<int> a(4 * n), s(4 * n);
    for (int d = 0; d < n; ++d) {
        const int v = 4 * d, b = v + 1, c = v + 2, e = v + 3;
        const int ad = m.alpha(d);
        a[v] = b;
        a[b] = v;
        a[c] = e;
        a[e] = c;
        s[v] = 4 * m.sigma(d);
        // anticlockwise around a face centre is phi^-1 = alpha . sigma^-1
        s[c] = 4 * m.alpha(m.sigma_inv(d)) + 2;
        // crossing: b(ad) -> e(ad) -> b(d) -> e(d)
        s[b] = e;
        s[e] = 4 * ad + 1;
    }
    return CombinatorialMap(std::move(a), std::move(s), m.name().empty() ? "" : m.name() + "^");
}

// ---------------------------------------------------------------------------
// text format

namespace {

std::string strip_comment(const std::string& line) {
    const auto h = line.find('#');
    std::string s = h == std::string::npos ? line : line.substr(0, h);
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int parse_dart(const std::string& tok, int n) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &used);
    } catch (const std::exception&) {
        throw InvalidInput("bad dart '" + tok + "'");
    }
    if (used != tok.size() || v < 1 || v > n) throw InvalidInput("dart '" + tok + "' out of range 1.." + std::to_string(n));
    return v - 1;
}

}  // namespace

CombinatorialMap parse_cmap(std::istream& in) {
    std::string line, name;
    int n = -1;
    std::vector<int> alpha, sigma;
    bool have_alpha = false, have_sigma = false;
    while (std::getline(in, line)) {
        const std::string s = strip_comment(line);
        if (s.empty()) continue;
        if (n < 0) {
            std::istringstream is(s);
            std::string kw, nm, dd;
            if (!(is >> kw >> nm >> dd) || kw != "cmap" || dd.rfind("darts=", 0) != 0) {
                throw InvalidInput("expected 'cmap <name> darts=<n>' header");
            }
            name = nm;
            try {
                n = std::stoi(dd.substr(6));
            } catch (const std::exception&) {
                throw InvalidInput("bad dart count");
            }
            if (n <= 0 || n % 2) throw InvalidInput("dart count must be positive and even");
            alpha.assign(n, -1);
            sigma.assign(n, -1);
            continue;
        }
        if (s.rfind("alpha:", 0) == 0) {
            std::istringstream is(s.substr(6));
            std::string tok;
            while (is >> tok) {
                const auto dash = tok.find('-');
                if (dash == std::string::npos) throw InvalidInput("alpha pair '" + tok + "' needs the form a-b");
                const int x = parse_dart(tok.substr(0, dash), n), y = parse_dart(tok.substr(dash + 1), n);
                if (alpha[x] >= 0 || alpha[y] >= 0 || x == y) throw InvalidInput("dart paired twice in alpha");
                alpha[x] = y;
                alpha[y] = x;
            }
            have_alpha = true;
        } else if (s.rfind("sigma:", 0) == 0 || (have_sigma && s.front() == '(')) {
            std::string body = s.rfind("sigma:", 0) == 0 ? s.substr(6) : s;
            for (char& c : body)
                if (c == '(' || c == ')') c = c == '(' ? ' ' : ';';
            std::istringstream cyc(body);
            std::string part;
            while (std::getline(cyc, part, ';')) {
                std::istringstream is(part);
                std::vector<int> c;
                std::string tok;
                while (is >> tok) c.push_back(parse_dart(tok, n));
                for (std::size_t i = 0; i < c.size(); ++i) {
                    if (sigma[c[i]] >= 0) throw InvalidInput("dart appears twice in sigma");
                    sigma[c[i]] = c[(i + 1) % c.size()];
                }
            }
            have_sigma = true;
        } else {
            throw InvalidInput("unexpected line '" + s + "'");
        }
    }
    if (n < 0 || !have_alpha || !have_sigma) throw InvalidInput("incomplete cmap");
    for (int d = 0; d < n; ++d) {
        if (alpha[d] < 0) throw InvalidInput("dart " + std::to_string(d + 1) + " missing from alpha");
        if (sigma[d] < 0) throw InvalidInput("dart " + std::to_string(d + 1) + " missing from sigma");
    }
    return CombinatorialMap(std::move(alpha), std::move(sigma), name);
}

CombinatorialMap parse_cmap(const std::string& text) {
    std::istringstream is(text);
    return parse_cmap(is);
}

CombinatorialMap load_cmap(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    return parse_cmap(in);
}

std::string serialize_cmap_raw(const CombinatorialMap& m) {
    std::ostringstream os;
    os << "cmap " << (m.name().empty() ? "unnamed" : m.name()) << " darts=" << m.darts() << "\nalpha:";
    for (int d = 0; d < m.darts(); ++d)
        if (d < m.alpha(d)) os << ' ' << d + 1 << '-' << m.alpha(d) + 1;
    os << "\nsigma:";
    for (const auto& c : m.vertex_cycles()) {
        os << " (";
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i] + 1;
        os << ')';
    }
    os << '\n';
    return os.str();
}

std::string serialize_cmap(const CombinatorialMap& m) { return serialize_cmap_raw(canonical_map(m)); }

}  // namespace ellnewton
