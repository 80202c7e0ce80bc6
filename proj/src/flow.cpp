#include "ellnewton/flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>

#include "ellnewton/errors.hpp"

namespace ellnewton {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double binomial(double n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b *= (n - k + j) / j;
    return b;
}

// |w|^-p for integer p given |w|^2
double inv_pow(double norm2, int p) {
    double base = 1.0 / norm2, out = 1.0;
    for (int half = p / 2; half > 0; half >>= 1) {
        if (half & 1) out *= base;
        base *= base;
    }
    return out;
}

struct Moments {
    double s0 = 0, s2 = 0;
    cplx q = 0;
};

// sums over N < max(|m|,|n|) <= M
Moments ring_sums(const Lattice& lat, int p, int N, int M) {
    Moments out;
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            if (std::max(std::abs(m), std::abs(n)) <= N) continue;
            const cplx w = lat.point(m, n);
            const double n2 = std::norm(w);
            const double t = inv_pow(n2, p);
            out.s0 += t;
            out.s2 += t / n2;
            out.q += t / (w * w);
        }
    }
    return out;
}

}  // namespace

Psi::Psi(const Lattice& lattice, cplx a, int r, int shells)
    : lat_(reduce_periods(lattice).first), a_(a), r_(r), p_(4.0 * r - 4.0) {
    if (r < 2) throw InvalidInput("psi needs r >= 2");
    const int p = 4 * r - 4;
    const double w1 = std::abs(lat_.omega1()), w2 = std::abs(lat_.omega2());
    const double area = lat_.cell_area();
    const double hmin = area / std::max(w1, w2);
    const double rho = 0.5 * std::max(std::abs(lat_.omega1() + lat_.omega2()), std::abs(lat_.omega1() - lat_.omega2()));
    // remainder after the second-order tail correction is bounded by the
    // fourth-order term of |1 - u|^-p summed outside the box
    const double c4 = binomial(p + 3.0, 4);
    n_ = std::max(shells, 1);
    for (;; ++n_) {
        const double R = (n_ + 1) * hmin;
        const double bound = c4 * std::pow(rho, 4) * kTwoPi * std::pow(R, -(p + 2.0)) / ((p + 2.0) * area);
        if (bound < 1e-10 * std::pow(rho, -double(p)) || n_ > 2000) break;
    }
    // outside-box moments; Richardson on the two leading tail exponents
    const int M = std::max(8 * n_, 200);
    const Moments in1 = ring_sums(lat_, p, n_, M);
    const Moments in2 = [&] {
        Moments extra = ring_sums(lat_, p, M, 2 * M);
        extra.s0 += in1.s0;
        extra.s2 += in1.s2;
        extra.q += in1.q;
        return extra;
    }();
    auto extrapolate = [](auto s1, auto s2, double k) { return s2 + (s2 - s1) / (std::pow(2.0, k) - 1.0); };
    tail0_ = extrapolate(in1.s0, in2.s0, p - 2.0);
    tail2_ = extrapolate(in1.s2, in2.s2, double(p));
    tail_q_ = extrapolate(in1.q, in2.q, double(p));
}

double Psi::operator()(cplx z) const {
    const int p = 4 * r_ - 4;
    const cplx u = lat_.reduce_centered(z - a_);
    if (lat_.torus_distance(u, 0.0) < 1e-300 || std::norm(u) == 0.0) {
        throw DivisorProximity("psi evaluated at its centre", a_);
    }
    double s = 0.0;
    for (int m = -n_; m <= n_; ++m) {
        for (int n = -n_; n <= n_; ++n) {
            const double d2 = std::norm(u - lat_.point(m, n));
            if (d2 == 0.0) throw DivisorProximity("psi evaluated at its centre", a_);
            s += inv_pow(d2, p);
        }
    }
    const double half = p / 2.0;
    const double c2 = half * (half + 1.0) / 2.0;
    s += tail0_ + 2.0 * c2 * std::real(u * u * tail_q_) + half * half * std::norm(u) * tail2_;
    return std::sqrt(s);
}

double psi(const Lattice& lattice, cplx a, int r, cplx z) { return Psi(lattice, a, r)(z); }

// ---------------------------------------------------------------------------

struct FlowField::Cache {
    std::once_flag once;
    std::vector<Equilibrium> equilibria;
};

FlowField::FlowField(EllipticFunction f, FlowKind kind)
    : f_(std::move(f)), kind_(kind), cache_(std::make_shared<Cache>()) {
    if (kind_ == FlowKind::damped) {
        auto add = [&](const std::vector<std::pair<cplx, int>>& pts) {
            for (const auto& [p, m] : pts) {
                if (m >= 2) psi_.emplace_back(f_.lattice(), p, m, f_.policy().shells);
            }
        };
        add(f_.divisor().distinct_zeros());
        add(f_.divisor().distinct_poles());
    }
}

double FlowField::damping(cplx z) const {
    double d = 1.0;
    for (const auto& p : psi_) d *= p(z);
    return d;
}

cplx FlowField::velocity(cplx z) const {
    try {
        const auto [lg, L] = f_.log_jet(z);
        // |f|^2 / (1 + |f|^4), written to stay finite for huge or tiny |f|
        const double x = std::abs(2.0 * lg.real());
        const double e = std::exp(-x);
        const double weight = e / (1.0 + e * e);
        cplx v = -std::conj(L) * weight;
        if (kind_ == FlowKind::damped) v *= damping(z);
        return v;
    } catch (const DivisorProximity&) {
        // the field tends to 0 at zeros and poles
        return 0.0;
    }
}

cplx field_eval(const FlowField& F, cplx z) { return F.velocity(z); }

FlowField FlowField::reversed() const {
    const Divisor& d = f_.divisor();
    FlowField r(EllipticFunction(Divisor(d.lattice(), d.poles(), d.zeros()), 1.0 / f_.scale(), f_.policy()), kind_);
    const auto& eq = equilibria();
    std::call_once(r.cache_->once, [&] {
        for (Equilibrium e : eq) {
            if (e.kind == EquilibriumKind::attractor) {
                e.kind = EquilibriumKind::repellor;
            } else if (e.kind == EquilibriumKind::repellor) {
                e.kind = EquilibriumKind::attractor;
            } else {
                std::swap(e.axes[0], e.axes[1]);
                e.eigenvalues = {-e.eigenvalues[1], -e.eigenvalues[0]};
                r.cache_->equilibria.push_back(e);
                continue;
            }
            e.eigenvalues = {-e.eigenvalues[0], -e.eigenvalues[1]};
            r.cache_->equilibria.push_back(e);
        }
    });
    return r;
}

const std::vector<Equilibrium>& FlowField::equilibria() const {
    std::call_once(cache_->once, [this] { cache_->equilibria = classify_equilibria(*this); });
    return cache_->equilibria;
}

std::array<std::array<double, 2>, 2> field_jacobian(const FlowField& F, cplx z, double h) {
    const cplx dx = (F.velocity(z + h) - F.velocity(z - h)) / (2.0 * h);
    const cplx dy = (F.velocity(z + cplx(0, h)) - F.velocity(z - cplx(0, h))) / (2.0 * h);
    return {{{dx.real(), dy.real()}, {dx.imag(), dy.imag()}}};
}

namespace {

struct Eigen2 {
    bool real = false;
    double l1 = 0, l2 = 0;  // l1 >= l2 when real; real parts otherwise
    cplx v1, v2;
};

Eigen2 eigen(const std::array<std::array<double, 2>, 2>& J) {
    const double a = J[0][0], b = J[0][1], c = J[1][0], d = J[1][1];
    const double tr = a + d, det = a * d - b * c;
    const double disc = tr * tr / 4.0 - det;
    Eigen2 out;
    if (disc < 0) {
        out.l1 = out.l2 = tr / 2.0;
        return out;
    }
    out.real = true;
    const double s = std::sqrt(disc);
    out.l1 = tr / 2.0 + s;
    out.l2 = tr / 2.0 - s;
    auto vec = [&](double l) {
        const cplx p(b, l - a), q(l - d, c);
        cplx v = std::norm(p) > std::norm(q) ? p : q;
        if (std::abs(v) == 0.0) v = (std::abs(b) + std::abs(c) == 0.0 && l == a) ? cplx(1, 0) : cplx(0, 1);
        return v / std::abs(v);
    };
    out.v1 = vec(out.l1);
    out.v2 = vec(out.l2);
    return out;
}

}  // namespace

std::vector<Equilibrium> classify_equilibria(const FlowField& F) {
    const EllipticFunction& f = F.function();
    const Lattice& lat = f.lattice();
    std::vector<Equilibrium> out;
    auto linearise = [&](Equilibrium& e) {
        const Eigen2 ev = eigen(field_jacobian(F, e.location));
        e.eigenvalues = {ev.l1, ev.l2};
        if (e.kind == EquilibriumKind::saddle && e.simple) {
            if (!ev.real || !(ev.l1 > 0 && ev.l2 < 0)) {
                throw NonConvergence("linearisation at a simple saddle is not hyperbolic", {e.location});
            }
            e.axes = {ev.v1, ev.v2};
        }
    };
    for (const auto& [p, m] : f.divisor().distinct_zeros()) {
        Equilibrium e{lat.reduce(p), EquilibriumKind::attractor, m, m == 1};
        linearise(e);
        out.push_back(e);
    }
    for (const auto& [p, m] : f.divisor().distinct_poles()) {
        Equilibrium e{lat.reduce(p), EquilibriumKind::repellor, m, m == 1};
        linearise(e);
        out.push_back(e);
    }
    for (const auto& c : critical_points(f)) {
        Equilibrium e{c.point, EquilibriumKind::saddle, c.multiplicity, c.multiplicity == 1};
        linearise(e);
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// integration

namespace {

// Dormand-Prince 5(4)
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

cplx direction(const EllipticFunction& f, cplx z) {
    const cplx L = f.log_derivative(z);
    const double n = std::abs(L);
    if (n == 0.0) return 0.0;
    return -std::conj(L) / n;
}

}  // namespace

Trajectory integrate(const FlowField& F, cplx z0, IntegrateOptions opt) {
    const EllipticFunction& f = F.function();
    const Lattice& lat = f.lattice();
    const auto& eqs = F.equilibria();
    const double unit = std::abs(f.reduced_lattice().omega1());

    Trajectory tr;
    tr.terminal = -1;
    cplx z = z0;
    double s = 0.0;
    auto [lg0, L0] = f.log_jet(z);
    (void)L0;
    const double arg0 = lg0.imag();
    double arg_unwrapped = arg0, last_raw_arg = arg0;
    double a0 = arg0 / kTwoPi;
    tr.argf = a0 - std::floor(a0);
    tr.samples.push_back({0.0, z, arg0 / kTwoPi, lg0.real()});
    double last_recorded_logabs = lg0.real();
    double last_recorded_s = 0.0;
    bool left = opt.exclude < 0;

    double h = 1e-3 * unit;
    cplx k1 = direction(f, z);
    for (;;) {
        // capture and step cap
        double cap = 0.1 * unit, near = unit;
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            const double d = lat.torus_distance(z, eqs[i].location);
            near = std::min(near, d);
            if (int(i) == opt.exclude && !left) {
                if (d > opt.exclude_radius) left = true;
            } else if (d < opt.eq_radius) {
                tr.terminal = int(i);
                break;
            }
            cap = std::min(cap, 0.5 * d);
        }
        if (tr.terminal >= 0 || s >= opt.t_max) break;
        h = std::min({h, cap, opt.t_max - s});
        if (h < 1e-14 * unit) {
            throw NonConvergence("step size underflow during integration", {z});
        }

        cplx z_new, k7;
        double err;
        try {
            const cplx k2 = direction(f, z + h * (a21 * k1));
            const cplx k3 = direction(f, z + h * (a31 * k1 + a32 * k2));
            const cplx k4 = direction(f, z + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const cplx k5 = direction(f, z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const cplx k6 = direction(f, z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            z_new = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            k7 = direction(f, z_new);
            const cplx e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            // relative to the local feature size: arg f resolves angles
            // around a multiple zero
            const double sc = opt.atol + opt.rtol * std::min(near, std::max(std::abs(z), std::abs(z_new)));
            err = std::abs(e) / sc;
        } catch (const DivisorProximity&) {
            h *= 0.25;
            continue;
        }
        if (!(err <= 1.0)) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            continue;
        }

        z = z_new;
        s += h;
        k1 = k7;
        h *= std::min(5.0, std::max(0.2, err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0));

        auto lg = f.log_value(z);
        const double raw = lg.imag();
        arg_unwrapped += std::remainder(raw - last_raw_arg, kTwoPi);
        last_raw_arg = raw;
        tr.max_drift = std::max(tr.max_drift, std::abs(arg_unwrapped - arg0));
        if (lg.real() < last_recorded_logabs) {
            tr.samples.push_back({s, z, arg_unwrapped / kTwoPi, lg.real()});
            last_recorded_logabs = lg.real();
            last_recorded_s = s;
        } else if (s - last_recorded_s > 1e-2 * unit) {
            throw PropertyViolation("|f| not decreasing along the trajectory");
        }
    }
    if (tr.max_drift > opt.max_drift_rate * std::max(1.0, s)) {
        throw PropertyViolation("arg f drift exceeds tolerance along the trajectory");
    }
    return tr;
}

// ---------------------------------------------------------------------------
// separatrices

std::array<Separatrix, 4> trace_separatrices(const FlowField& F, int saddle, IntegrateOptions opt) {
    const auto& eqs = F.equilibria();
    if (saddle < 0 || saddle >= int(eqs.size()) || eqs[saddle].kind != EquilibriumKind::saddle) {
        throw InvalidInput("not a saddle index");
    }
    const Equilibrium& s = eqs[saddle];
    if (!s.simple) throw UnsupportedConfiguration("separatrices of a non-simple saddle");
    opt.exclude = saddle;
    const double seed = 1e-7;
    const double argf = [&] {
        const double a = F.function().log_value(s.location).imag() / kTwoPi;
        return a - std::floor(a);
    }();

    std::array<Separatrix, 4> out;
    for (int k = 0; k < 2; ++k) {
        const int branch = k == 0 ? +1 : -1;
        Separatrix& u = out[k];
        u.saddle = saddle;
        u.stability = Stability::unstable;
        u.branch = branch;
        u.path = integrate(F, s.location + double(branch) * seed * s.axes[0], opt);
        u.endpoint = u.path.terminal;
        u.argf = argf;
    }
    const FlowField back = F.reversed();
    for (int k = 0; k < 2; ++k) {
        const int branch = k == 0 ? +1 : -1;
        Separatrix& st = out[2 + k];
        st.saddle = saddle;
        st.stability = Stability::stable;
        st.branch = branch;
        st.path = integrate(back, s.location + double(branch) * seed * s.axes[1], opt);
        for (auto& smp : st.path.samples) {
            smp.argf = -smp.argf;
            smp.log_abs_f = -smp.log_abs_f;
        }
        st.path.argf = argf;
        st.endpoint = st.path.terminal;
        st.argf = argf;
    }
    return out;
}

namespace {

double turn_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}

}  // namespace

SaddleConnection saddle_connection_check(const FlowField& F) {
    const auto& eqs = F.equilibria();
    const EllipticFunction& f = F.function();
    std::vector<int> saddles;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (eqs[i].kind != EquilibriumKind::saddle) continue;
        if (!eqs[i].simple) throw UnsupportedConfiguration("saddle connection check needs simple saddles");
        saddles.push_back(int(i));
    }
    SaddleConnection out;
    for (int i : saddles) {
        const cplx li = f.log_value(eqs[i].location);
        bool candidate = false;
        for (int j : saddles) {
            if (j == i) continue;
            const cplx lj = f.log_value(eqs[j].location);
            if (turn_distance(li.imag() / kTwoPi, lj.imag() / kTwoPi) < 1e-5 && li.real() > lj.real()) {
                candidate = true;
            }
        }
        if (!candidate) continue;
        auto seps = trace_separatrices(F, i);
        for (int k = 0; k < 2; ++k) {
            const int e = seps[k].endpoint;
            if (e >= 0 && eqs[e].kind == EquilibriumKind::saddle) {
                out.found = true;
                out.from = i;
                out.to = e;
                out.witness = seps[k];
                return out;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// sector angles

cplx leading_coefficient(const FlowField& F, int equilibrium) {
    const auto& eqs = F.equilibria();
    if (equilibrium < 0 || equilibrium >= int(eqs.size()) || eqs[equilibrium].kind != EquilibriumKind::attractor) {
        throw InvalidInput("not an attractor index");
    }
    const EllipticFunction& f = F.function();
    const Lattice& lat = f.lattice();
    const cplx a = eqs[equilibrium].location;
    const int m = eqs[equilibrium].multiplicity;
    double rho = 0.1 * std::abs(f.reduced_lattice().omega1());
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (int(i) != equilibrium && eqs[i].kind != EquilibriumKind::saddle) {
            rho = std::min(rho, 0.25 * lat.torus_distance(eqs[i].location, a));
        }
    }
    cplx c = 0.0;
    const int nc = 64;
    for (int k = 0; k < nc; ++k) {
        const cplx d = std::polar(rho, kTwoPi * (k + 0.5) / nc);
        c += std::exp(f.log_value(a + d) - double(m) * std::log(d));
    }
    return c / double(nc);
}

double arrival_direction(const FlowField& F, int attractor, const Trajectory& path, double argf, cplx c) {
    const auto& eqs = F.equilibria();
    const Lattice& lat = F.function().lattice();
    const int m = eqs[attractor].multiplicity;
    const auto& smp = path.samples;
    const cplx end = smp.back().z;
    const cplx alift = lat.nearest_lift(eqs[attractor].location, end);
    // a sample about 1e-3 away from the attractor
    std::size_t j = smp.size() - 1;
    while (j > 0 && std::abs(smp[j].z - alift) < 1e-3) --j;
    const double est = std::arg(smp[j].z - alift) / kTwoPi;
    const double argc = std::arg(c) / kTwoPi;
    double best = 0.0, best_d = 2.0;
    for (int q = 0; q < m; ++q) {
        double ray = (argf - argc) / m + double(q) / m;
        ray -= std::floor(ray);
        const double d = turn_distance(ray, est);
        if (d < best_d) {
            best_d = d;
            best = ray;
        }
    }
    if (best_d > 0.25 / m) throw NonConvergence("arrival direction does not match a ray", {end});
    return best;
}

double arrival_direction(const FlowField& F, int attractor, const Trajectory& path, double argf) {
    return arrival_direction(F, attractor, path, argf, leading_coefficient(F, attractor));
}

Portrait trace_portrait(const FlowField& F, IntegrateOptions opt) {
    Portrait p;
    const auto& eqs = F.equilibria();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (eqs[i].kind != EquilibriumKind::saddle) continue;
        p.saddles.push_back(int(i));
        p.separatrices.push_back(trace_separatrices(F, int(i), opt));
    }
    return p;
}

std::vector<SectorEntry> measure_sector_angles(const FlowField& F, int attractor, const Portrait& portrait) {
    const cplx c = leading_coefficient(F, attractor);
    std::vector<SectorEntry> out;
    for (const auto& seps : portrait.separatrices) {
        for (int k = 0; k < 2; ++k) {
            const Separatrix& sp = seps[k];
            if (sp.endpoint != attractor) continue;
            out.push_back({sp.saddle, sp.branch, arrival_direction(F, attractor, sp.path, sp.argf, c), 0.0, sp.argf});
        }
    }
    if (out.size() < 2) throw PropertyViolation("fewer than two separatrices arrive at the attractor");
    std::sort(out.begin(), out.end(), [](const SectorEntry& x, const SectorEntry& y) { return x.direction < y.direction; });
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double next = i + 1 < out.size() ? out[i + 1].direction : out[0].direction + 1.0;
        out[i].gap = next - out[i].direction;
    }
    return out;
}

std::vector<SectorEntry> measure_sector_angles(const FlowField& F, int attractor) {
    const auto& eqs = F.equilibria();
    if (attractor < 0 || attractor >= int(eqs.size()) || eqs[attractor].kind != EquilibriumKind::attractor) {
        throw InvalidInput("not an attractor index");
    }
    return measure_sector_angles(F, attractor, trace_portrait(F));
}

NuclearAngles nuclear_sector_angles(const FlowField& F) {
    const auto& eqs = F.equilibria();
    int zero = -1, pole = -1;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (eqs[i].kind == EquilibriumKind::attractor) zero = zero < 0 ? int(i) : -2;
        if (eqs[i].kind == EquilibriumKind::repellor) pole = pole < 0 ? int(i) : -2;
    }
    if (zero < 0 || pole < 0) throw InvalidInput("not a nuclear flow: needs one zero and one pole");
    NuclearAngles out;
    out.entries = measure_sector_angles(F, zero);
    const auto& e = out.entries;
    if (e.size() != 4) return out;
    const Lattice& lat = F.function().lattice();
    const cplx a = eqs[zero].location;
    double axis = std::arg(lat.nearest_lift(eqs[pole].location, a) - a) / kTwoPi;
    axis -= std::floor(axis);
    auto containing = [&](double ray) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            double off = ray - e[i].direction;
            off -= std::floor(off);
            if (off < e[i].gap) return int(i);
        }
        return -1;
    };
    const int i1 = containing(axis), i2 = containing(axis + 0.5 - std::floor(axis + 0.5));
    if (i1 < 0 || i2 < 0 || (i1 + 2) % 4 != i2) return out;
    const double g1 = e[(i1 + 1) % 4].gap, g2 = e[(i1 + 3) % 4].gap;
    out.alpha = 0.5 * std::min(e[i1].gap, e[i2].gap);
    out.beta = 0.5 * std::max(e[i1].gap, e[i2].gap);
    out.gamma = 0.5 * (g1 + g2);
    out.pattern = std::abs(g1 - g2) < 1e-6;
    return out;
}

void write_trajectory(std::ostream& out, const Trajectory& tr) {
    const auto old = out.precision(12);
    for (const auto& s : tr.samples) {
        out << s.t << ' ' << s.z.real() << ' ' << s.z.imag() << ' ' << s.argf << ' ' << std::exp(s.log_abs_f) << '\n';
    }
    out.precision(old);
}

}  // namespace ellnewton
