#include "ellnewton/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ellnewton/errors.hpp"

namespace ellnewton {

namespace {

class Canvas {
public:
    Canvas(std::ostream& out, const Lattice& lat, double size) : out_(out), lat_(lat) {
        const cplx c[4] = {0.0, lat.omega1(), lat.omega1() + lat.omega2(), lat.omega2()};
        lo_ = hi_ = c[0];
        for (const cplx& z : c) {
            lo_ = {std::min(lo_.real(), z.real()), std::min(lo_.imag(), z.imag())};
            hi_ = {std::max(hi_.real(), z.real()), std::max(hi_.imag(), z.imag())};
        }
        scale_ = size / std::max(hi_.real() - lo_.real(), hi_.imag() - lo_.imag());
        w_ = (hi_.real() - lo_.real()) * scale_ + 2 * margin_;
        h_ = (hi_.imag() - lo_.imag()) * scale_ + 2 * margin_;
        out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
             << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
             << "\" viewBox=\"0 0 " << w_ << ' ' << h_ << "\">\n"
             << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<polygon points=\"";
        for (const cplx& z : c) out_ << x(z) << ',' << y(z) << ' ';
        out_ << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    ~Canvas() { out_ << "</svg>\n"; }

    double x(cplx z) const { return margin_ + (z.real() - lo_.real()) * scale_; }
    double y(cplx z) const { return margin_ + (hi_.imag() - z.imag()) * scale_; }

    // polyline in lifted coordinates, cut where its reduction jumps
    void path(const std::vector<cplx>& pts, const char* color, double width) {
        std::vector<cplx> run;
        cplx shift = 0.0;
        auto flush = [&] {
            if (run.size() >= 2) {
                out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\" points=\"";
                for (const cplx& z : run) out_ << x(z) << ',' << y(z) << ' ';
                out_ << "\"/>\n";
            }
            run.clear();
        };
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const cplx r = lat_.reduce(pts[i]);
            const cplx s = pts[i] - r;
            if (i > 0 && std::abs(s - shift) > 1e-9) {
                run.push_back(pts[i] - shift);  // finish at the cell edge
                flush();
                run.push_back(pts[i - 1] - s);
            }
            shift = s;
            run.push_back(r);
        }
        flush();
    }

    void attractor(cplx z) { out_ << "<circle cx=\"" << x(z) << "\" cy=\"" << y(z) << "\" r=\"5\" fill=\"black\"/>\n"; }
    void repellor(cplx z) {
        out_ << "<rect x=\"" << x(z) - 5 << "\" y=\"" << y(z) - 5
             << "\" width=\"10\" height=\"10\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    void saddle(cplx z) {
        const double a = x(z), b = y(z);
        out_ << "<path d=\"M" << a - 5 << ',' << b - 5 << " L" << a + 5 << ',' << b + 5 << " M" << a - 5 << ','
             << b + 5 << " L" << a + 5 << ',' << b - 5 << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }

    // all translates of z that fall in the closed cell
    std::vector<cplx> copies(cplx z) const {
        std::vector<cplx> out;
        const cplx r = lat_.reduce(z);
        const auto t = lat_.coords(r);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                if ((i && t[0] > 1e-9) || (j && t[1] > 1e-9)) continue;
                out.push_back(r + double(i) * lat_.omega1() + double(j) * lat_.omega2());
            }
        return out;
    }

    void markers(const std::vector<Equilibrium>& eqs) {
        for (const auto& e : eqs)
            for (const cplx& z : copies(e.location)) {
                if (e.kind == EquilibriumKind::attractor) attractor(z);
                else if (e.kind == EquilibriumKind::repellor) repellor(z);
                else saddle(z);
            }
    }

private:
    std::ostream& out_;
    const Lattice& lat_;
    cplx lo_, hi_;
    double scale_ = 1, w_ = 0, h_ = 0, margin_ = 20;
};

std::vector<cplx> points(const Trajectory& tr) {
    std::vector<cplx> p;
    for (const auto& s : tr.samples) p.push_back(s.z);
    return p;
}

}  // namespace

void write_portrait_svg(std::ostream& out, const FlowField& F, const PortraitOptions& opt) {
    const Lattice& lat = F.function().lattice();
    const auto& eqs = F.equilibria();
    Canvas c(out, lat, opt.size);
    const FlowField back = F.reversed();
    for (int i = 0; i < opt.seeds; ++i)
        for (int j = 0; j < opt.seeds; ++j) {
            const cplx z0 = lat.point((i + 0.5) / opt.seeds, (j + 0.5) / opt.seeds);
            bool near = false;
            for (const auto& e : eqs) near = near || lat.torus_distance(e.location, z0) < 1e-3;
            if (near) continue;
            for (const FlowField* G : {&F, &back}) {
                try {
                    c.path(points(integrate(*G, z0, opt.integrate)), "#7a9cc6", 0.8);
                } catch (const Error&) {
                    // a seed on a degenerate orbit is skipped
                }
            }
        }
    if (opt.separatrices) {
        bool simple = true;
        for (const auto& e : eqs) simple = simple && (e.kind != EquilibriumKind::saddle || e.simple);
        if (simple) {
            const Portrait p = trace_portrait(F, opt.integrate);
            for (const auto& seps : p.separatrices)
                for (int k = 0; k < 4; ++k) c.path(points(seps[k].path), k < 2 ? "#c0392b" : "#27ae60", 1.6);
        }
    }
    c.markers(eqs);
}

void write_graph_svg(std::ostream& out, const FlowField& F, const ExtractedGraph& g, double size) {
    Canvas c(out, g.lattice, size);
    for (const auto& p : g.dart_path) c.path(p, "#c0392b", 2.0);
    c.markers(F.equilibria());
}

}  // namespace ellnewton
