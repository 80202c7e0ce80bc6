#include "ellnewton/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ellnewton/errors.hpp"
#include "ellnewton/extraction.hpp"

namespace ellnewton {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            out.push_back(std::stod(trim(tok)));
        } catch (const std::exception&) {
            throw InvalidInput("config: bad number '" + tok + "' for " + key);
        }
    }
    return out;
}

const std::vector<std::string> kClasses = {"gcheck3.a", "gcheck3.b", "gcheck3.c"};

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig c;
    std::string line;
    std::optional<std::array<double, 2>> at;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidInput("config: expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        auto one = [&] {
            auto v = parse_list(val, key);
            if (v.size() != 1) throw InvalidInput("config: " + key + " takes one number");
            return v[0];
        };
        if (key == "base") {
            c.base = val;
        } else if (key == "at") {
            auto v = parse_list(val, key);
            if (v.size() != 2) throw InvalidInput("config: at takes t1,t2");
            at = std::array<double, 2>{v[0], v[1]};
        } else if (key == "axis") {
            c.axis = one();
        } else if (key == "radii") {
            c.radii = parse_list(val, key);
        } else if (key == "phase_steps") {
            c.phase_steps = int(one());
        } else if (key == "inner_ratio") {
            c.inner_ratio = one();
        } else if (key == "inner_steps") {
            c.inner_steps = int(one());
        } else if (key == "stop_when_complete") {
            if (val == "true" || val == "1") c.stop_when_complete = true;
            else if (val == "false" || val == "0") c.stop_when_complete = false;
            else throw InvalidInput("config: stop_when_complete takes true or false");
        } else if (key == "rtol") {
            c.integrate.rtol = one();
        } else if (key == "atol") {
            c.integrate.atol = one();
        } else if (key == "output") {
            c.output = val;
        } else {
            throw InvalidInput("config: unknown key '" + key + "'");
        }
    }
    if (c.radii.empty() || c.phase_steps < 1 || c.inner_steps < 1 || c.inner_ratio <= 0 || c.inner_ratio >= 0.5)
        throw InvalidInput("config: need radii, phase_steps >= 1, inner_steps >= 1, 0 < inner_ratio < 1/2");
    for (double r : c.radii)
        if (r <= 0) throw InvalidInput("config: radii must be positive");
    if (at) c.at = cplx((*at)[0], (*at)[1]);  // resolved against the lattice in run_split3
    return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    return parse_experiment_config(in);
}

SplitResult run_split3(const ExperimentConfig& cfg) {
    const Divisor div = cfg.base == "nuclear3" ? nuclear_divisor(3) : load_divisor(cfg.base);
    const EllipticFunction f(div);
    const Lattice& lat = div.lattice();

    cplx at;
    if (cfg.at) {
        at = lat.point(cfg.at->real(), cfg.at->imag());
    } else {
        bool found = false;
        for (const auto& [z, m] : div.distinct_zeros())
            if (m == 3 && !found) {
                at = z;
                found = true;
            }
        if (!found) throw InvalidInput("split3: base function has no triple zero");
    }
    double axis = 0.0;
    if (cfg.axis) {
        axis = *cfg.axis;
    } else {
        double best = 1e300;
        for (const auto& [p, m] : div.distinct_poles()) {
            const cplx w = lat.nearest_lift(p, at) - at;
            if (std::abs(w) < best) {
                best = std::abs(w);
                axis = std::arg(w) / kTwoPi;
            }
        }
    }

    SplitResult res;
    for (double r : cfg.radii)
        for (int k = 0; k < cfg.phase_steps; ++k)
            for (int j = 0; j < cfg.inner_steps; ++j) {
                SplitSample s;
                s.radius = r;
                s.phase = double(k) / cfg.phase_steps;
                s.inner_phase = 0.5 * double(j) / cfg.inner_steps;
                const cplx u1 = std::polar(r, kTwoPi * (axis + s.phase));
                const cplx u2 = std::polar(cfg.inner_ratio * r, kTwoPi * (axis + s.inner_phase));
                s.deltas = {u1, -0.5 * u1 + u2, -0.5 * u1 - u2};
                try {
                    const FlowField F(split_zero(f, at, s.deltas));
                    ExtractOptions opt;
                    opt.integrate = cfg.integrate;
                    const auto g = extract_graph(F, opt);
                    s.pseudo_checks = g.map.vertices() == 3 && g.map.edges() == 4 && g.map.face_count() == 1 &&
                                      is_cellular_torus(g.map);
                    s.outcome = identify(g.map).name;
                    ++res.realized[s.outcome];
                    res.first_map.emplace(s.outcome, g.map);
                } catch (const Error& e) {
                    s.outcome = std::string("failed: ") + e.what();
                }
                res.samples.push_back(s);
                bool all = true;
                for (const auto& c : kClasses) all = all && res.realized.count(c);
                res.all_realized = all;
                if (all && cfg.stop_when_complete) goto done;
            }
done:
    if (!cfg.output.empty()) {
        std::filesystem::create_directories(cfg.output);
        for (const auto& [name, m] : res.first_map) {
            std::ofstream out(std::filesystem::path(cfg.output) / ("split3_" + name + ".cmap"));
            out << serialize_cmap(m.renamed("split3_" + name));
        }
    }
    return res;
}

void write_split_report(std::ostream& out, const SplitResult& res) {
    const auto old = out.precision(6);
    std::size_t failed = 0, checked = 0;
    for (std::size_t k = 0; k < res.samples.size(); ++k) {
        const auto& s = res.samples[k];
        failed += s.outcome.rfind("failed", 0) == 0;
        checked += s.pseudo_checks;
        out << "sample." << k + 1 << "=radius:" << s.radius << " phase:" << s.phase << " inner:" << s.inner_phase
            << " class:" << s.outcome << '\n';
    }
    out << "samples=" << res.samples.size() << '\n' << "failed=" << failed << '\n' << "pseudo_checks=" << checked << '\n';
    for (const auto& c : kClasses) out << "realized." << c << '=' << (res.realized.count(c) ? res.realized.at(c) : 0) << '\n';
    for (const auto& [name, n] : res.realized)
        if (std::find(kClasses.begin(), kClasses.end(), name) == kClasses.end()) out << "realized." << name << '=' << n << '\n';
    out << "all_realized=" << res.all_realized << '\n';
    out.precision(old);
}

}  // namespace ellnewton
