#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ellnewton/errors.hpp"
#include "ellnewton/experiment.hpp"
#include "ellnewton/extraction.hpp"
#include "ellnewton/newton.hpp"
#include "ellnewton/pseudo.hpp"
#include "ellnewton/svg.hpp"

using namespace ellnewton;

namespace {

enum Exit { ok = 0, property = 1, usage = 2, numeric = 3 };

cplx parse_complex(const std::string& s) {
    std::istringstream is(s);
    double re = 0, im = 0;
    char comma = 0;
    if (!(is >> re)) throw InvalidInput("expected re,im but got '" + s + "'");
    if (is >> comma) {
        if (comma != ',' || !(is >> im)) throw InvalidInput("expected re,im but got '" + s + "'");
    }
    return {re, im};
}

std::string fmt(cplx z) {
    std::ostringstream os;
    os.precision(12);
    os << z.real() << ',' << z.imag();
    return os.str();
}

const char* kind_name(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::attractor: return "attractor";
        case EquilibriumKind::repellor: return "repellor";
        default: return "saddle";
    }
}

void print_walks(const CombinatorialMap& m) {
    std::cout << "vertices=" << m.vertices() << "\nedges=" << m.edges() << "\nfaces=" << m.face_count()
              << "\ngenus=" << genus(m) << "\ncellular_torus=" << is_cellular_torus(m) << '\n';
    int k = 0;
    for (const auto& w : faces(m)) {
        std::cout << "face." << ++k << '=';
        for (std::size_t i = 0; i < w.size(); ++i) std::cout << (i ? " " : "") << w[i] + 1;
        std::cout << '\n';
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
}

struct Tolerances {
    double rtol = 1e-9, atol = 1e-12;
    IntegrateOptions options() const {
        IntegrateOptions o;
        o.rtol = rtol;
        o.atol = atol;
        return o;
    }
};

void add_tol(CLI::App* app, Tolerances& t) {
    app->add_option("--rtol", t.rtol, "relative integration tolerance");
    app->add_option("--atol", t.atol, "absolute integration tolerance");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elliptic Newton flows and their embedded toroidal graphs"};
    app.require_subcommand(1);
    int status = ok;

    // lattice
    auto* lat = app.add_subcommand("lattice", "period lattices")->require_subcommand(1);
    auto* lat_reduce = lat->add_subcommand("reduce", "reduce a period pair");
    std::string w1s, w2s;
    lat_reduce->add_option("omega1", w1s, "re,im")->required();
    lat_reduce->add_option("omega2", w2s, "re,im")->required();
    lat_reduce->callback([&] {
        auto [red, M] = reduce_periods(Lattice(parse_complex(w1s), parse_complex(w2s)));
        std::cout << "omega1=" << fmt(red.omega1()) << "\nomega2=" << fmt(red.omega2()) << "\nmatrix=" << M.p1 << ','
                  << M.p2 << ',' << M.q1 << ',' << M.q2 << "\ntau=" << fmt(red.tau()) << '\n';
    });

    // graph
    auto* graph = app.add_subcommand("graph", "combinatorial maps")->require_subcommand(1);
    std::vector<std::string> files;
    std::string out_path;
    int order = 0;
    auto* g_faces = graph->add_subcommand("faces", "facial walks and counts");
    g_faces->add_option("file", files, ".cmap file")->required()->expected(1);
    g_faces->callback([&] { print_walks(load_cmap(files[0])); });
    auto* g_dual = graph->add_subcommand("dual", "geometric dual");
    g_dual->add_option("file", files, ".cmap file")->required()->expected(1);
    g_dual->add_option("-o,--out", out_path, "output .cmap");
    g_dual->callback([&] {
        const auto m = load_cmap(files[0]);
        const auto text = serialize_cmap(dual(m).renamed(m.name() + "_dual"));
        out_path.empty() ? void(std::cout << text) : write_file(out_path, text);
    });
    auto* g_dist = graph->add_subcommand("distinguished", "distinguished graph");
    g_dist->add_option("file", files, ".cmap file")->required()->expected(1);
    g_dist->add_option("-o,--out", out_path, "output .cmap");
    g_dist->callback([&] {
        const auto m = load_cmap(files[0]);
        const auto d = distinguished_graph(m).renamed(m.name() + "_distinguished");
        const auto text = serialize_cmap_raw(d);
        std::cout << "vertices=" << d.vertices() << "\nedges=" << d.edges() << "\nfaces=" << d.face_count() << '\n';
        out_path.empty() ? void(std::cout << text) : write_file(out_path, text);
    });
    auto* g_verify = graph->add_subcommand("verify", "Newton graph properties");
    g_verify->add_option("file", files, ".cmap file")->required()->expected(1);
    g_verify->add_option("-r,--order", order, "expected order (default: vertex count)");
    g_verify->callback([&] {
        const auto rep = is_newton_graph(load_cmap(files[0]), order);
        write_report(std::cout, rep);
        if (!rep.newtonian) status = property;
    });
    auto* g_equiv = graph->add_subcommand("equiv", "orientation-preserving equivalence");
    g_equiv->add_option("files", files, "two .cmap files")->required()->expected(2);
    g_equiv->callback([&] {
        const auto a = load_cmap(files[0]), b = load_cmap(files[1]);
        const auto m = is_equivalent(a, b);
        std::cout << "equivalent=" << bool(m) << '\n';
        if (m) {
            std::cout << "dart_map=";
            for (std::size_t d = 0; d < m->dart_map.size(); ++d) std::cout << (d ? " " : "") << d + 1 << "->" << m->dart_map[d] + 1;
            std::cout << '\n';
        } else {
            status = property;
        }
    });

    // pseudo
    auto* pseudo = app.add_subcommand("pseudo", "pseudo Newton graphs")->require_subcommand(1);
    bool all = false;
    auto* p_reduce = pseudo->add_subcommand("reduce", "merge faces and prune pendant vertices");
    p_reduce->add_option("file", files, ".cmap of a Newton graph")->required()->expected(1);
    p_reduce->add_flag("--all", all, "every choice sequence, distinct outcomes");
    p_reduce->callback([&] {
        const auto traces = reduce(load_cmap(files[0]), all ? ReduceStrategy::all : ReduceStrategy::first);
        std::cout << "traces=" << traces.size() << '\n';
        int k = 0;
        for (const auto& t : traces) {
            ++k;
            std::cout << "trace." << k << ".deleted=";
            for (std::size_t i = 0; i < t.deleted.size(); ++i) std::cout << (i ? " " : "") << t.deleted[i] + 1;
            std::cout << "\ntrace." << k << ".rho=" << t.rho << "\ntrace." << k << ".L=" << t.L << "\ntrace." << k
                      << ".gcheck=" << identify(t.gcheck).name << "\ntrace." << k << ".ghat=" << identify(t.ghat).name
                      << '\n';
        }
    });
    auto* p_classify = pseudo->add_subcommand("classify", "degree case and walk decomposition");
    p_classify->add_option("file", files, ".cmap of a single-face map")->required()->expected(1);
    p_classify->callback([&] {
        const auto h = classify_hat(load_cmap(files[0]));
        std::cout << "case=" << (h.kind == HatCase::a1 ? "a1" : "a2") << "\ndegrees=";
        for (std::size_t i = 0; i < h.degrees.size(); ++i) std::cout << (i ? "," : "") << h.degrees[i];
        std::cout << "\nwalk_length=" << h.walk.size() << "\nsubwalks=" << h.subwalks.size() << '\n';
        for (std::size_t i = 0; i < h.subwalks.size(); ++i) {
            std::cout << "subwalk." << i + 1 << '=';
            for (std::size_t j = 0; j < h.subwalks[i].size(); ++j) std::cout << (j ? " " : "") << h.subwalks[i][j] + 1;
            std::cout << " inverse:" << h.inverse[i] + 1 << '\n';
        }
    });
    auto* p_enum = pseudo->add_subcommand("enumerate", "equivalence classes of torus maps");
    int ev = 0, ee = 0, ef = -1, min_deg = 1;
    bool loopless = false, newtonian = false;
    std::string out_dir;
    p_enum->add_option("--v", ev, "vertices")->required();
    p_enum->add_option("--e", ee, "edges")->required();
    p_enum->add_option("--f", ef, "faces");
    p_enum->add_flag("--loopless", loopless, "no loops");
    p_enum->add_option("--min-deg", min_deg, "minimum vertex degree");
    p_enum->add_flag("--newtonian", newtonian, "Newton graphs only");
    p_enum->add_option("-o,--out", out_dir, "directory for one .cmap per class");
    p_enum->callback([&] {
        EnumConstraints c;
        c.faces = ef;
        c.loopless = loopless;
        c.min_degree = min_deg;
        c.newtonian = newtonian;
        const auto maps = enumerate_maps(ev, ee, c);
        std::cout << "classes=" << maps.size() << '\n';
        for (std::size_t i = 0; i < maps.size(); ++i) {
            const auto named = maps[i].renamed("class" + std::to_string(i + 1));
            const auto text = serialize_cmap(named);
            if (out_dir.empty()) {
                std::cout << text;
            } else {
                std::filesystem::create_directories(out_dir);
                write_file((std::filesystem::path(out_dir) / (named.name() + ".cmap")).string(), text);
            }
        }
    });

    // flow
    auto* flow = app.add_subcommand("flow", "Newton flows of elliptic functions")->require_subcommand(1);
    Tolerances tol;
    std::string div_file, z0s;
    double t_max = 50.0;
    bool reverse = false, damped = false;
    auto flow_of = [&] {
        return FlowField(EllipticFunction(load_divisor(div_file)), damped ? FlowKind::damped : FlowKind::desingularized);
    };
    auto* f_eq = flow->add_subcommand("equilibria", "zeros, poles and saddles");
    f_eq->add_option("divisor", div_file, "divisor file")->required();
    f_eq->add_flag("--damped", damped, "damped field");
    f_eq->callback([&] {
        const auto F = flow_of();
        const auto& eqs = F.equilibria();
        int counts[3] = {0, 0, 0};
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            const auto& e = eqs[i];
            ++counts[int(e.kind)];
            std::cout << "equilibrium." << i + 1 << '=' << kind_name(e.kind) << ' ' << fmt(e.location)
                      << " multiplicity:" << e.multiplicity << " simple:" << e.simple << '\n';
        }
        std::cout << "attractors=" << counts[0] << "\nrepellors=" << counts[1] << "\nsaddles=" << counts[2] << '\n';
    });
    auto* f_int = flow->add_subcommand("integrate", "trajectory dump `t re im argf absf`");
    f_int->add_option("divisor", div_file, "divisor file")->required();
    f_int->add_option("--z", z0s, "start point re,im")->required();
    f_int->add_option("--t-max", t_max, "maximal arc length");
    f_int->add_flag("--reverse", reverse, "flow of 1/f");
    f_int->add_flag("--damped", damped, "damped field");
    add_tol(f_int, tol);
    f_int->callback([&] {
        const auto F = flow_of();
        auto opt = tol.options();
        opt.t_max = t_max;
        const auto tr = integrate(reverse ? F.reversed() : F, parse_complex(z0s), opt);
        write_trajectory(std::cout, tr);
        std::cerr << "terminal=" << tr.terminal + 1 << '\n';
    });
    auto* f_port = flow->add_subcommand("portrait", "SVG phase portrait");
    int seeds = 6;
    f_port->add_option("divisor", div_file, "divisor file")->required();
    f_port->add_option("-o,--out", out_path, "output .svg")->required();
    f_port->add_option("--seeds", seeds, "seed grid size");
    f_port->add_flag("--damped", damped, "damped field");
    add_tol(f_port, tol);
    f_port->callback([&] {
        PortraitOptions po;
        po.seeds = seeds;
        po.integrate = tol.options();
        std::ofstream out(out_path);
        if (!out) throw InvalidInput("cannot write " + out_path);
        write_portrait_svg(out, flow_of(), po);
    });

    // extract
    auto* ext = app.add_subcommand("extract", "embedded graph of a flow");
    bool want_dual = false;
    std::string chart_s, svg_path;
    ext->add_option("divisor", div_file, "divisor file")->required();
    ext->add_flag("--dual", want_dual, "graph of the reciprocal flow, orientation reversed");
    ext->add_option("-o,--out", out_path, "prefix for .cmap and .geom");
    ext->add_option("--chart", chart_s, "p1,p2,q1,q2: omega1 -> p1+p2 i, omega2 -> q1+q2 i on the canonical torus");
    ext->add_option("--svg", svg_path, "draw the graph");
    add_tol(ext, tol);
    ext->callback([&] {
        const auto F = flow_of();
        ExtractOptions opt;
        opt.integrate = tol.options();
        const auto g = want_dual ? extract_dual(F, opt) : extract_graph(F, opt);
        UnimodularMatrix chart;
        if (!chart_s.empty()) {
            std::vector<long> v;
            std::istringstream is(chart_s);
            std::string tok;
            while (std::getline(is, tok, ',')) v.push_back(std::stol(tok));
            if (v.size() != 4) throw InvalidInput("--chart takes p1,p2,q1,q2");
            chart = {v[0], v[1], v[2], v[3]};
            if (std::abs(chart.determinant()) != 1) throw InvalidInput("--chart must be unimodular");
        }
        const auto id = identify(g.map);
        std::cout << "vertices=" << g.map.vertices() << "\nedges=" << g.map.edges() << "\nfaces=" << g.map.face_count()
                  << "\nidentified=" << id.name << '\n';
        for (int e = 0; e < g.map.edges(); ++e) {
            if (g.map.vertex_of(2 * e) != g.map.vertex_of(2 * e + 1)) continue;
            const auto w = wrap_numbers(g, e, chart);
            std::cout << "wrap." << e + 1 << '=' << w.p << ',' << w.q << '\n';
        }
        const auto named = g.map.renamed(want_dual ? "extracted_dual" : "extracted");
        if (out_path.empty()) {
            std::cout << serialize_cmap_raw(named);
        } else {
            write_file(out_path + ".cmap", serialize_cmap_raw(named));
            std::ofstream geom(out_path + ".geom");
            write_geom(geom, g);
        }
        if (!svg_path.empty()) {
            std::ofstream svg(svg_path);
            write_graph_svg(svg, want_dual ? F.reversed() : F, g);
        }
    });

    // experiment
    auto* exp = app.add_subcommand("experiment", "experiment drivers")->require_subcommand(1);
    auto* e_split = exp->add_subcommand("split3", "split the triple zero and collect the single-face classes");
    std::string cfg_file;
    e_split->add_option("config", cfg_file, "config file")->required();
    e_split->callback([&] {
        const auto res = run_split3(load_experiment_config(cfg_file));
        write_split_report(std::cout, res);
        if (!res.all_realized) status = property;
    });

    // catalog
    auto* cat = app.add_subcommand("catalog", "stored maps")->require_subcommand(1);
    cat->add_subcommand("list", "names, counts and property flags")->callback([&] {
        for (const auto& n : catalog_names()) {
            const auto m = catalog(n);
            std::cout << n << " V=" << m.vertices() << " E=" << m.edges() << " F=" << m.face_count()
                      << " newtonian=" << is_newton_graph(m).newtonian << " A=" << hall_A_check(m).holds
                      << " E_property=" << euler_E_check(m).holds << '\n';
        }
    });
    std::string name;
    auto* c_show = cat->add_subcommand("show", "print one entry");
    c_show->add_option("name", name, "catalog name")->required();
    c_show->callback([&] { std::cout << serialize_cmap_raw(catalog(name)); });
    auto* c_build = cat->add_subcommand("build", "regenerate the catalog by enumeration");
    c_build->add_option("dir", out_dir, "output directory")->required();
    c_build->callback([&] {
        const auto entries = build_catalog();
        write_catalog(out_dir, entries);
        std::cout << "entries=" << entries.size() << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return numeric;
    } catch (const DivisorProximity& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        return numeric;
    } catch (const Error& e) {
        std::cerr << "property failure: " << e.what() << '\n';
        return property;
    }
    return status;
}
