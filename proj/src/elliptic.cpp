#include "ellnewton/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "ellnewton/errors.hpp"
#include "theta.hpp"

namespace ellnewton {

using std::numbers::pi;

namespace {

constexpr double kProximity = 1e-12;

bool same_torus_point(const Lattice& lat, std::array<double, 2> a, std::array<double, 2> b,
                      double tol = 1e-12) {
    auto frac_close = [tol](double x, double y) {
        const double d = x - y;
        return std::abs(d - std::round(d)) <= tol;
    };
    (void)lat;
    return frac_close(a[0], b[0]) && frac_close(a[1], b[1]);
}

std::array<double, 2> wrap01(std::array<double, 2> t) {
    for (double& x : t) {
        x -= std::floor(x);
        if (x >= 1.0) x = 0.0;
        if (std::abs(x) < 1e-15) x = 0.0;
    }
    return t;
}

std::vector<std::pair<cplx, int>> distinct(const Lattice& lat, const std::vector<DivisorPoint>& pts) {
    std::vector<std::pair<std::array<double, 2>, int>> acc;
    for (const auto& p : pts) {
        auto t = wrap01(p.t);
        bool merged = false;
        for (auto& [q, m] : acc) {
            if (same_torus_point(lat, q, t, 1e-9)) {
                m += p.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) acc.push_back({t, p.multiplicity});
    }
    std::vector<std::pair<cplx, int>> out;
    for (auto& [t, m] : acc) out.push_back({lat.point(t), m});
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Divisor

Divisor::Divisor(Lattice lattice, std::vector<DivisorPoint> zeros, std::vector<DivisorPoint> poles)
    : lattice_(lattice), zeros_(std::move(zeros)), poles_(std::move(poles)) {
    int nz = 0, np = 0;
    for (const auto& z : zeros_) {
        if (z.multiplicity < 1) throw InvalidInput("zero multiplicity must be positive");
        nz += z.multiplicity;
    }
    for (const auto& p : poles_) {
        if (p.multiplicity < 1) throw InvalidInput("pole multiplicity must be positive");
        np += p.multiplicity;
    }
    if (nz != np) throw InvalidInput("zero and pole multiplicities differ");
    if (nz < 2) throw InvalidInput("an elliptic function has order at least 2");
    for (const auto& z : zeros_) {
        for (const auto& p : poles_) {
            if (same_torus_point(lattice_, z.t, p.t)) {
                throw InvalidInput("a zero coincides with a pole modulo the lattice");
            }
        }
    }
}

int Divisor::order() const {
    int n = 0;
    for (const auto& z : zeros_) n += z.multiplicity;
    return n;
}

cplx Divisor::lambda0() const {
    cplx s = 0.0;
    for (const auto& z : zeros_) s += double(z.multiplicity) * lattice_.point(z.t);
    for (const auto& p : poles_) s -= double(p.multiplicity) * lattice_.point(p.t);
    return s;
}

Divisor Divisor::canonical() const {
    auto conv = [this](const std::vector<std::pair<cplx, int>>& pts) {
        std::vector<DivisorPoint> out;
        for (auto& [z, m] : pts) out.push_back({wrap01(lattice_.coords(z)), m});
        return out;
    };
    return Divisor(lattice_, conv(distinct_zeros()), conv(distinct_poles()));
}

std::vector<std::pair<cplx, int>> Divisor::distinct_zeros() const { return distinct(lattice_, zeros_); }
std::vector<std::pair<cplx, int>> Divisor::distinct_poles() const { return distinct(lattice_, poles_); }

Divisor abel_normalize(const Divisor& div) {
    const Lattice& lat = div.lattice();
    const auto s = lat.coords(div.lambda0());
    const double l1 = std::round(s[0]), l2 = std::round(s[1]);
    if (std::abs(s[0] - l1) > 1e-9 || std::abs(s[1] - l2) > 1e-9) {
        throw InvalidInput("sum(zeros) - sum(poles) is not a lattice point");
    }
    if (l1 == 0.0 && l2 == 0.0) return div;

    std::vector<DivisorPoint> zeros = div.zeros();
    std::size_t k = 0;
    for (std::size_t i = 1; i < zeros.size(); ++i) {
        if (zeros[i].t < zeros[k].t) k = i;
    }
    DivisorPoint shifted{{zeros[k].t[0] - l1, zeros[k].t[1] - l2}, 1};
    if (zeros[k].multiplicity == 1) {
        zeros[k] = shifted;
    } else {
        zeros[k].multiplicity -= 1;
        zeros.insert(zeros.begin() + long(k) + 1, shifted);
    }
    return Divisor(lat, std::move(zeros), div.poles());
}

// ---------------------------------------------------------------------------
// EllipticFunction

namespace {

detail::Theta make_theta(const Lattice& reduced, double tol) {
    return detail::Theta(reduced.omega1(), reduced.omega2(), tol);
}

}  // namespace

EllipticFunction::EllipticFunction(const Divisor& div, cplx scale, TruncationPolicy policy)
    : original_(div),
      divisor_(abel_normalize(div)),
      reduced_(reduce_periods(div.lattice()).first),
      scale_(scale),
      policy_(policy) {
    if (scale == 0.0) throw InvalidInput("scale must be nonzero");
    for (const auto& z : divisor_.zeros())
        for (int k = 0; k < z.multiplicity; ++k) zero_reps_.push_back(lattice().point(z.t));
    for (const auto& p : divisor_.poles())
        for (int k = 0; k < p.multiplicity; ++k) pole_reps_.push_back(lattice().point(p.t));

    // sigma(u) = (w1/pi) exp(eta u^2 / w1) theta(u) / theta_1'(0); with equal
    // representative sums only the constant exp(eta/w1 (sum a^2 - sum b^2))
    // survives from the Gaussian factors.
    const auto theta = make_theta(reduced_, policy_.tolerance);
    cplx sq = 0.0;
    for (cplx a : zero_reps_) sq += a * a;
    for (cplx b : pole_reps_) sq -= b * b;
    log_constant_ = std::log(scale_) + theta.eta() / reduced_.omega1() * sq;
}

std::pair<double, cplx> EllipticFunction::nearest_divisor_point(cplx z) const {
    double best = std::numeric_limits<double>::infinity();
    cplx where = 0.0;
    for (const auto* reps : {&zero_reps_, &pole_reps_}) {
        for (cplx a : *reps) {
            const double d = lattice().torus_distance(z, a);
            if (d < best) {
                best = d;
                where = a;
            }
        }
    }
    return {best, where};
}

std::pair<double, cplx> EllipticFunction::nearest_pole(cplx z) const {
    double best = std::numeric_limits<double>::infinity();
    cplx where = 0.0;
    for (cplx b : pole_reps_) {
        const double d = lattice().torus_distance(z, b);
        if (d < best) {
            best = d;
            where = b;
        }
    }
    return {best, where};
}

cplx EllipticFunction::log_value(cplx z) const {
    auto [d, where] = nearest_divisor_point(z);
    if (d < kProximity) throw DivisorProximity("log f evaluated at the divisor", where);
    // f is exactly periodic after normalisation: move z into the cell first
    const cplx zr = reduced_.reduce_centered(z);
    const auto theta = make_theta(reduced_, policy_.tolerance);
    cplx s = log_constant_;
    for (cplx a : zero_reps_) s += theta.log(zr - a);
    for (cplx b : pole_reps_) s -= theta.log(zr - b);
    return s;
}

cplx EllipticFunction::value(cplx z) const {
    auto [d, where] = nearest_pole(z);
    if (d < kProximity) throw DivisorProximity("f evaluated at a pole", where);
    for (cplx a : zero_reps_) {
        if (lattice().torus_distance(z, a) < kProximity) return 0.0;
    }
    return std::exp(log_value(z));
}

cplx EllipticFunction::log_derivative(cplx z) const {
    auto [d, where] = nearest_divisor_point(z);
    if (d < kProximity) throw DivisorProximity("f'/f evaluated at the divisor", where);
    const cplx zr = reduced_.reduce_centered(z);
    const auto theta = make_theta(reduced_, policy_.tolerance);
    cplx s = 0.0;
    for (cplx a : zero_reps_) s += theta.dlog(zr - a);
    for (cplx b : pole_reps_) s -= theta.dlog(zr - b);
    return s;
}

std::pair<cplx, cplx> EllipticFunction::log_jet(cplx z) const {
    auto [d, where] = nearest_divisor_point(z);
    if (d < kProximity) throw DivisorProximity("f evaluated at the divisor", where);
    const cplx zr = reduced_.reduce_centered(z);
    const auto theta = make_theta(reduced_, policy_.tolerance);
    cplx s = log_constant_, l = 0.0;
    for (cplx a : zero_reps_) {
        auto [lg, dl] = theta.log_and_dlog(zr - a);
        s += lg;
        l += dl;
    }
    for (cplx b : pole_reps_) {
        auto [lg, dl] = theta.log_and_dlog(zr - b);
        s -= lg;
        l -= dl;
    }
    return {s, l};
}

cplx EllipticFunction::derivative(cplx z) const { return value(z) * log_derivative(z); }

cplx EllipticFunction::log_derivative_prime(cplx z) const {
    auto [d, where] = nearest_divisor_point(z);
    if (d < kProximity) throw DivisorProximity("(f'/f)' evaluated at the divisor", where);
    const cplx zr = reduced_.reduce_centered(z);
    const auto theta = make_theta(reduced_, policy_.tolerance);
    cplx s = 0.0;
    for (cplx a : zero_reps_) s += theta.d2log(zr - a);
    for (cplx b : pole_reps_) s -= theta.d2log(zr - b);
    return s;
}

namespace {

// 2*eta(w) with zeta(z + w) = zeta(z) + 2*eta(w) for a period w
cplx zeta_quasi_period(const Lattice& lat, cplx w, double tolerance) {
    const Lattice red = reduce_periods(lat).first;
    const cplx e1 = detail::Theta(red.omega1(), red.omega2(), tolerance).eta();
    // Legendre relation
    const cplx e2 = (e1 * red.omega2() - cplx(0.0, std::numbers::pi)) / red.omega1();
    const auto k = red.integer_coords(w, 1e-7);
    return 2.0 * (double(k[0]) * e1 + double(k[1]) * e2);
}

}  // namespace

cplx weierstrass_eta1(const Lattice& lat, double tolerance) {
    return 0.5 * zeta_quasi_period(lat, lat.omega1(), tolerance);
}

cplx weierstrass_p(const Lattice& lat, cplx z, double tolerance) {
    const Lattice red = reduce_periods(lat).first;
    const detail::Theta theta(red.omega1(), red.omega2(), tolerance);
    if (red.contains(z, 1e-13)) throw DivisorProximity("wp evaluated at a lattice point", 0.0);
    return -2.0 * theta.eta() / red.omega1() - theta.d2log(z);
}

// ---------------------------------------------------------------------------
// critical points

int expected_critical_count(const Divisor& div) {
    return int(div.distinct_zeros().size() + div.distinct_poles().size());
}

namespace {

// winding number of g along a circle, by argument accumulation
template <class G>
int circle_winding(G&& g, cplx centre, double radius, int samples = 128) {
    double total = 0.0;
    cplx prev = g(centre + radius);
    for (int k = 1; k <= samples; ++k) {
        const cplx cur = g(centre + std::polar(radius, 2.0 * pi * k / samples));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return int(std::lround(total / (2.0 * pi)));
}

}  // namespace

std::vector<CriticalPoint> critical_points(const EllipticFunction& f, CriticalPointOptions opt) {
    const Lattice& lat = f.lattice();
    const Lattice& red = f.reduced_lattice();
    const double scale = std::abs(red.omega1());
    const double max_step = 0.1 * scale;

    // grid starts, plus local starts around clustered divisor points where
    // critical points can hide below the grid spacing
    std::vector<cplx> starts;
    for (int i = 0; i < opt.grid; ++i) {
        for (int j = 0; j < opt.grid; ++j) starts.push_back(lat.point((i + 0.5) / opt.grid, (j + 0.5) / opt.grid));
    }
    std::vector<cplx> features;
    for (const auto& [p, m] : f.divisor().distinct_zeros()) features.push_back(p);
    for (const auto& [p, m] : f.divisor().distinct_poles()) features.push_back(p);
    const double cell = 1.0 / opt.grid * scale;
    for (std::size_t a = 0; a < features.size(); ++a) {
        double d = 0.25 * scale;
        for (std::size_t b = 0; b < features.size(); ++b) {
            if (b != a) d = std::min(d, lat.torus_distance(features[a], features[b]));
        }
        for (double rho : {0.3, 0.6}) {
            for (int k = 0; k < 8; ++k) starts.push_back(features[a] + std::polar(rho * d, (k + 0.5) * std::numbers::pi / 4));
        }
        for (std::size_t b = a + 1; b < features.size(); ++b) {
            const cplx q = lat.nearest_lift(features[b], features[a]);
            if (std::abs(q - features[a]) > 2 * cell) continue;
            starts.push_back(0.5 * (features[a] + q));
            for (std::size_t c = b + 1; c < features.size(); ++c) {
                const cplx w = lat.nearest_lift(features[c], features[a]);
                if (std::abs(w - features[a]) <= 2 * cell) starts.push_back((features[a] + q + w) / 3.0);
            }
        }
    }

    std::vector<cplx> roots;
    std::vector<cplx> unresolved;
    for (const cplx start : starts) {
        cplx z = start;
        bool ok = false;
        try {
            for (int it = 0; it < opt.max_iterations; ++it) {
                const cplx L = f.log_derivative(z);
                const cplx dL = f.log_derivative_prime(z);
                cplx step = L / dL;
                if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
                const double cap = std::min(max_step, 0.5 * f.nearest_divisor_point(z).first);
                if (std::abs(step) > cap) step *= cap / std::abs(step);
                z -= step;
                if (std::abs(step) < 1e-15 * scale) break;
            }
            const cplx L = f.log_derivative(z);
            ok = std::abs(L) * scale < opt.residual_tolerance;
        } catch (const DivisorProximity&) {
            ok = false;
        }
        if (ok) {
            roots.push_back(lat.reduce(z));
        } else {
            unresolved.push_back(start);
        }
    }

    // deduplicate modulo the lattice
    std::vector<cplx> distinct_roots;
    for (cplx z : roots) {
        bool seen = false;
        for (cplx w : distinct_roots) {
            if (lat.torus_distance(z, w) < opt.dedup_radius) {
                seen = true;
                break;
            }
        }
        if (!seen) distinct_roots.push_back(z);
    }

    std::vector<CriticalPoint> out;
    int total = 0;
    for (cplx c : distinct_roots) {
        double radius = opt.contour_radius;
        for (cplx w : distinct_roots) {
            if (w != c) radius = std::min(radius, 0.3 * lat.torus_distance(c, w));
        }
        radius = std::min(radius, 0.3 * f.nearest_divisor_point(c).first);
        const int m = circle_winding([&f](cplx z) { return f.log_derivative(z); }, c, radius);
        if (m <= 0) continue;
        out.push_back({c, m});
        total += m;
    }
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (std::abs(a.point.real() - b.point.real()) > 1e-9) return a.point.real() < b.point.real();
        return a.point.imag() < b.point.imag();
    });

    const int expected = expected_critical_count(f.divisor());
    if (total != expected) {
        throw NonConvergence("critical point search found " + std::to_string(total) + " of " +
                                 std::to_string(expected) + " critical points",
                             unresolved);
    }
    return out;
}

// ---------------------------------------------------------------------------
// winding numbers

namespace {

// argument change of f along the segment a -> b, refined until every
// sample-to-sample jump is below pi/4
double arg_change(const EllipticFunction& f, cplx a, cplx b, int depth = 0) {
    const int n = 256;
    double total = 0.0;
    cplx prev_log = f.log_value(a);
    for (int k = 1; k <= n; ++k) {
        const cplx z = a + (b - a) * (double(k) / n);
        const cplx cur_log = f.log_value(z);
        double jump = std::remainder(cur_log.imag() - prev_log.imag(), 2.0 * pi);
        if (std::abs(jump) > pi / 4) {
            if (depth > 12) throw NonConvergence("argument jump not resolved on segment");
            jump = arg_change(f, a + (b - a) * (double(k - 1) / n), z, depth + 1);
        }
        total += jump;
        prev_log = cur_log;
    }
    return total;
}

}  // namespace

WindingNumbers winding_numbers(const EllipticFunction& f, cplx corner) {
    const Lattice& lat = f.lattice();
    const cplx w1 = lat.omega1(), w2 = lat.omega2();
    // every divisor point must be clear of the four sides
    cplx lambda = 0.0;
    auto place = [&](const std::vector<DivisorPoint>& pts, double sign) {
        for (const auto& p : pts) {
            auto t = lat.coords(lat.point(p.t) - corner);
            for (double& x : t) {
                x -= std::floor(x);
                const double side = std::min(x, 1.0 - x);
                if (side * std::min(std::abs(w1), std::abs(w2)) < 1e-6) {
                    throw InvalidInput("divisor point within 1e-6 of a parallelogram side");
                }
            }
            lambda += sign * double(p.multiplicity) * (corner + lat.point(t));
        }
    };
    place(f.divisor().zeros(), 1.0);
    place(f.divisor().poles(), -1.0);

    WindingNumbers out;
    out.corner = corner;
    out.lambda0 = lambda;
    const double a1 = arg_change(f, corner, corner + w1) / (2.0 * pi);
    const double a2 = arg_change(f, corner, corner + w2) / (2.0 * pi);
    out.eta1 = std::lround(a1);
    out.eta2 = std::lround(a2);
    const cplx predicted = w1 * double(out.eta2) - w2 * double(out.eta1);
    out.consistent = std::abs(a1 - double(out.eta1)) < 1e-6 && std::abs(a2 - double(out.eta2)) < 1e-6 &&
                     std::abs(predicted - lambda) < 1e-9 * (std::abs(w1) + std::abs(w2));
    return out;
}

WindingNumbers winding_numbers(const EllipticFunction& f) {
    const Lattice& lat = f.lattice();
    // prefer a parallelogram holding the given representatives, so that the
    // reported lambda0 is the one the divisor was written with
    const Divisor& d = f.original_divisor();
    double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
    auto widen = [&](const DivisorPoint& p) {
        for (int k = 0; k < 2; ++k) {
            lo[k] = std::min(lo[k], p.t[k]);
            hi[k] = std::max(hi[k], p.t[k]);
        }
    };
    for (const auto& p : d.zeros()) widen(p);
    for (const auto& p : d.poles()) widen(p);
    if (hi[0] - lo[0] < 0.99 && hi[1] - lo[1] < 0.99) {
        try {
            return winding_numbers(f, lat.point(lo[0] - 0.37 * (1 - hi[0] + lo[0]),
                                                lo[1] - 0.41 * (1 - hi[1] + lo[1])));
        } catch (const InvalidInput&) {
        }
    }
    // try a few irrational-looking offsets until the sides miss the divisor
    const double offsets[][2] = {{-0.1234567, -0.0765432}, {-0.3141593, -0.2718282},
                                 {-0.0412311, -0.4472136}, {-0.2236068, -0.1414214}};
    for (const auto& o : offsets) {
        try {
            return winding_numbers(f, lat.point(o[0], o[1]));
        } catch (const InvalidInput&) {
        }
    }
    throw InvalidInput("no parallelogram offset clears the divisor");
}

// ---------------------------------------------------------------------------
// configurations and edits

Divisor nuclear_divisor(int r) {
    if (r < 2) throw InvalidInput("nuclear order must be at least 2");
    return Divisor(Lattice::square(), {{{0.0, 0.0}, r}}, {{{1.0 / r, 1.0 / r}, r}});
}

Divisor wp_square_divisor() {
    return Divisor(Lattice::square(), {{{0.5, 0.5}, 2}}, {{{0.0, 0.0}, 2}});
}

std::vector<NuclearConfiguration> nuclear_configurations(int r) {
    if (r < 2) throw InvalidInput("nuclear order must be at least 2");
    std::vector<NuclearConfiguration> out;
    for (int m = -1; m <= 1; ++m) {
        for (int n = -1; n <= 1; ++n) {
            if (m == 0 && n == 0) continue;
            const cplx b(double(m) / r, double(n) / r);
            Divisor div(Lattice::square(), {{{0.0, 0.0}, r}}, {{{double(m) / r, double(n) / r}, r}});
            const NuclearClass cls = (m == 0 || n == 0) ? NuclearClass::side : NuclearClass::diagonal;
            out.push_back({std::move(div), b, cls, -cplx(m, n)});
        }
    }
    return out;
}

EllipticFunction split_zero(const EllipticFunction& f, cplx at, const std::vector<cplx>& deltas) {
    const Lattice& lat = f.lattice();
    if (deltas.size() < 2) throw InvalidInput("split needs at least two offsets");
    cplx sum = 0.0;
    for (cplx d : deltas) sum += d;
    if (std::abs(sum) > 1e-12) throw InvalidInput("split offsets must sum to zero");
    const double min_norm = std::min(std::abs(f.reduced_lattice().omega1()), std::abs(f.reduced_lattice().omega2()));
    for (cplx d : deltas) {
        if (std::abs(d) > 0.05 * min_norm) throw InvalidInput("split offsets too large");
    }

    std::vector<cplx> hit, keep;
    for (cplx a : f.zero_reps()) {
        (lat.torus_distance(a, at) < 1e-9 ? hit : keep).push_back(a);
    }
    if (hit.size() != deltas.size()) {
        throw InvalidInput("no zero of multiplicity " + std::to_string(deltas.size()) + " at the given point");
    }
    const cplx base = lat.nearest_lift(hit.front(), at);
    cplx lattice_shift = 0.0;
    for (cplx a : hit) lattice_shift += a - base;

    std::vector<cplx> fresh;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        fresh.push_back(base + deltas[i] + (i == 0 ? lattice_shift : cplx(0.0)));
    }
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (lat.torus_distance(fresh[i], fresh[j]) < 1e-12) throw InvalidInput("split produces coincident zeros");
        }
        for (cplx a : keep) {
            if (lat.torus_distance(fresh[i], a) < 1e-12) throw InvalidInput("split zero coincides with another zero");
        }
        for (cplx b : f.pole_reps()) {
            if (lat.torus_distance(fresh[i], b) < 1e-12) throw InvalidInput("split zero coincides with a pole");
        }
    }

    std::vector<DivisorPoint> zeros;
    // untouched zeros keep their grouping
    for (const auto& z : f.divisor().zeros()) {
        if (lat.torus_distance(lat.point(z.t), at) >= 1e-9) zeros.push_back(z);
    }
    for (cplx z : fresh) zeros.push_back({lat.coords(z), 1});
    // sigma(z - d - s) = -exp(-2 eta(s) (z - d - s/2)) sigma(z - d): undo the
    // d-dependent constant so the split tends to f as the offsets shrink
    cplx scale = f.scale();
    if (lattice_shift != cplx(0.0)) {
        scale *= std::exp(-zeta_quasi_period(lat, lattice_shift, 1e-14) * deltas[0]);
    }
    return EllipticFunction(Divisor(lat, std::move(zeros), f.divisor().poles()), scale, f.policy());
}

// ---------------------------------------------------------------------------
// text format

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& line) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw InvalidInput("expected 'x,y' in: " + line);
    try {
        std::size_t used = 0;
        const std::string a = trim(text.substr(0, comma)), b = trim(text.substr(comma + 1));
        const double x = std::stod(a, &used);
        if (used != a.size()) throw InvalidInput("bad number in: " + line);
        const double y = std::stod(b, &used);
        if (used != b.size()) throw InvalidInput("bad number in: " + line);
        return {x, y};
    } catch (const std::logic_error&) {
        throw InvalidInput("bad number in: " + line);
    }
}

DivisorPoint parse_point(const std::string& text, const std::string& line) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw InvalidInput("expected '<t1>,<t2> x <mult>' in: " + line);
    auto [t1, t2] = parse_pair(text.substr(0, x), line);
    const std::string m = trim(text.substr(x + 1));
    try {
        std::size_t used = 0;
        const int mult = std::stoi(m, &used);
        if (used != m.size()) throw InvalidInput("bad multiplicity in: " + line);
        return {{t1, t2}, mult};
    } catch (const std::logic_error&) {
        throw InvalidInput("bad multiplicity in: " + line);
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

Divisor parse_divisor(std::istream& in) {
    std::optional<Lattice> lat;
    std::vector<DivisorPoint> zeros, poles;
    std::string raw;
    while (std::getline(in, raw)) {
        std::string line = raw;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidInput("expected 'key = value' in: " + raw);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "lattice") {
            const auto semi = value.find(';');
            if (semi == std::string::npos) throw InvalidInput("expected two periods in: " + raw);
            auto [a, b] = parse_pair(value.substr(0, semi), raw);
            auto [c, d] = parse_pair(value.substr(semi + 1), raw);
            lat = Lattice(cplx(a, b), cplx(c, d));
        } else if (key == "zero") {
            zeros.push_back(parse_point(value, raw));
        } else if (key == "pole") {
            poles.push_back(parse_point(value, raw));
        } else {
            throw InvalidInput("unknown key '" + key + "'");
        }
    }
    if (!lat) throw InvalidInput("divisor file lacks a lattice line");
    return Divisor(*lat, std::move(zeros), std::move(poles));
}

Divisor parse_divisor(const std::string& text) {
    std::istringstream in(text);
    return parse_divisor(in);
}

Divisor load_divisor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open divisor file " + path);
    return parse_divisor(in);
}

std::string serialize_divisor(const Divisor& div) {
    std::ostringstream os;
    const Lattice& lat = div.lattice();
    os << "lattice = " << fmt(lat.omega1().real()) << "," << fmt(lat.omega1().imag()) << " ; "
       << fmt(lat.omega2().real()) << "," << fmt(lat.omega2().imag()) << "\n";
    for (const auto& z : div.zeros()) os << "zero = " << fmt(z.t[0]) << "," << fmt(z.t[1]) << " x " << z.multiplicity << "\n";
    for (const auto& p : div.poles()) os << "pole = " << fmt(p.t[0]) << "," << fmt(p.t[1]) << " x " << p.multiplicity << "\n";
    return os.str();
}

}  // namespace ellnewton
