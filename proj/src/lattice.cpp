#include "ellnewton/lattice.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ellnewton/errors.hpp"

namespace ellnewton {

UnimodularMatrix UnimodularMatrix::compose(const UnimodularMatrix& inner) const {
    // rows of `this` express the new basis in terms of inner's result.
    return {p1 * inner.p1 + p2 * inner.q1, p1 * inner.p2 + p2 * inner.q2,
            q1 * inner.p1 + q2 * inner.q1, q1 * inner.p2 + q2 * inner.q2};
}

Lattice::Lattice(cplx omega1, cplx omega2) : omega1_(omega1), omega2_(omega2) {
    if (std::abs(omega1) == 0.0 || !(std::imag(omega2 / omega1) > 0.0)) {
        throw InvalidInput("degenerate period pair: Im(omega2/omega1) must be positive");
    }
    const double a = omega1.real(), b = omega2.real(), c = omega1.imag(), d = omega2.imag();
    const double det = a * d - b * c;
    inv_[0][0] = d / det;
    inv_[0][1] = -b / det;
    inv_[1][0] = -c / det;
    inv_[1][1] = a / det;
}

double Lattice::cell_area() const { return std::abs(std::imag(std::conj(omega1_) * omega2_)); }

std::array<double, 2> Lattice::coords(cplx z) const {
    return {inv_[0][0] * z.real() + inv_[0][1] * z.imag(),
            inv_[1][0] * z.real() + inv_[1][1] * z.imag()};
}

bool Lattice::contains(cplx z, double tol) const {
    auto t = coords(z);
    return std::abs(t[0] - std::round(t[0])) <= tol && std::abs(t[1] - std::round(t[1])) <= tol;
}

std::array<long, 2> Lattice::integer_coords(cplx z, double tol) const {
    if (!contains(z, tol)) throw InvalidInput("point is not a lattice element");
    auto t = coords(z);
    return {std::lround(t[0]), std::lround(t[1])};
}

cplx Lattice::reduce(cplx z) const {
    auto t = coords(z);
    double t1 = t[0] - std::floor(t[0]);
    double t2 = t[1] - std::floor(t[1]);
    if (t1 >= 1.0) t1 = 0.0;
    if (t2 >= 1.0) t2 = 0.0;
    return point(t1, t2);
}

cplx Lattice::reduce_centered(cplx z) const {
    auto t = coords(z);
    return z - point(std::floor(t[0] + 0.5), std::floor(t[1] + 0.5));
}

cplx Lattice::nearest_lift(cplx w, cplx z) const {
    // centred reduction in a skewed basis is not always the nearest point;
    // scan the neighbouring translates.
    cplx base = z + reduce_centered(w - z);
    cplx best = base;
    double best_d = std::abs(base - z);
    for (int m = -1; m <= 1; ++m) {
        for (int n = -1; n <= 1; ++n) {
            cplx c = base + point(m, n);
            double d = std::abs(c - z);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
    }
    return best;
}

double Lattice::torus_distance(cplx a, cplx b) const { return std::abs(nearest_lift(a, b) - b); }

namespace {

std::pair<cplx, cplx> apply(const UnimodularMatrix& m, cplx w1, cplx w2) {
    return {double(m.p1) * w1 + double(m.p2) * w2, double(m.q1) * w1 + double(m.q2) * w2};
}

}  // namespace

std::pair<Lattice, UnimodularMatrix> reduce_periods(const Lattice& lat) {
    const cplx W1 = lat.omega1(), W2 = lat.omega2();
    cplx w1 = W1, w2 = W2;
    UnimodularMatrix m;
    const double eps = 1e-12;

    for (int iter = 0; iter < 10000; ++iter) {
        const long k = std::lround(std::real(w2 / w1));
        if (k != 0) {
            w2 -= double(k) * w1;
            m.q1 -= k * m.p1;
            m.q2 -= k * m.p2;
        }
        if (std::abs(w2) < std::abs(w1) * (1.0 - eps)) {
            // (w1, w2) -> (w2, -w1) keeps the orientation
            const cplx t = w1;
            w1 = w2;
            w2 = -t;
            m = UnimodularMatrix{m.q1, m.q2, -m.p1, -m.p2};
        } else {
            break;
        }
    }

    // boundary conventions of the fundamental domain for tau
    cplx tau = w2 / w1;
    if (std::real(tau) >= 0.5 - eps) {
        w2 -= w1;
        m.q1 -= m.p1;
        m.q2 -= m.p2;
        tau = w2 / w1;
    }
    if (std::abs(std::abs(tau) - 1.0) <= eps && std::real(tau) > eps) {
        const cplx t = w1;
        w1 = w2;
        w2 = -t;
        m = UnimodularMatrix{m.q1, m.q2, -m.p1, -m.p2};
    }

    // among unit multiples that preserve the lattice, prefer the smallest
    // argument of w1 in [0, 2pi)
    const Lattice original = lat;
    auto arg0 = [](cplx z) {
        double a = std::arg(z);
        if (a < -1e-12) a += 2.0 * std::numbers::pi;
        if (a < 0.0) a = 0.0;
        return a;
    };
    cplx best1 = w1, best2 = w2;
    double best_arg = arg0(w1);
    for (int k = 1; k < 12; ++k) {
        const cplx u = std::polar(1.0, k * std::numbers::pi / 6.0);
        const cplx c1 = u * w1, c2 = u * w2;
        if (!original.contains(c1, 1e-9) || !original.contains(c2, 1e-9)) continue;
        const double a = arg0(c1);
        if (a < best_arg - 1e-12) {
            best_arg = a;
            best1 = c1;
            best2 = c2;
        }
    }
    if (best1 != w1) {
        auto a = original.integer_coords(best1);
        auto b = original.integer_coords(best2);
        m = UnimodularMatrix{a[0], a[1], b[0], b[1]};
    }
    // rebuild from integers so the result is exact
    auto [r1, r2] = apply(m, W1, W2);
    return {Lattice(r1, r2), m};
}

}  // namespace ellnewton
