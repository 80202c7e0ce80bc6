#pragma once

// Jacobi theta_1 on a reduced basis, with quasi-periodic argument reduction.

#include <cmath>
#include <complex>
#include <numbers>

#include "ellnewton/lattice.hpp"

namespace ellnewton::detail {

struct ThetaValues {
    cplx th, d1, d2;  // theta_1(v), theta_1'(v), theta_1''(v)
};

/// theta(u) := theta_1(pi u / w1 | tau) for a basis (w1, w2), tau = w2/w1.
///
///   theta(u + w1) = -theta(u)
///   theta(u + w2) = -q^{-1} exp(-2 pi i u / w1) theta(u),   q = exp(i pi tau)
class Theta {
public:
    Theta(cplx w1, cplx w2, double tolerance)
        : lat_(w1, w2), w1_(w1), tau_(w2 / w1), tol_(tolerance) {}

    const Lattice& lattice() const { return lat_; }
    cplx w1() const { return w1_; }
    cplx tau() const { return tau_; }

    ThetaValues series(cplx v) const {
        using std::numbers::pi;
        const cplx ipt(0.0, pi);
        ThetaValues out{0.0, 0.0, 0.0};
        const double grow = std::abs(v.imag());
        for (int n = 0; n < 64; ++n) {
            const double k = 2.0 * n + 1.0;
            const double h = n + 0.5;
            const cplx qn = std::exp(ipt * tau_ * (h * h));
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            const cplx s = std::sin(k * v), c = std::cos(k * v);
            out.th += sign * qn * s;
            out.d1 += sign * qn * k * c;
            out.d2 -= sign * qn * k * k * s;
            const double bound = std::abs(qn) * std::exp(k * grow) * k * k;
            if (n >= 2 && bound < tol_ * 1e-6 * (std::abs(out.th) + 1e-300)) break;
        }
        out.th *= 2.0;
        out.d1 *= 2.0;
        out.d2 *= 2.0;
        return out;
    }

    /// theta_1'(0) and theta_1'''(0)
    std::pair<cplx, cplx> derivatives_at_zero() const {
        using std::numbers::pi;
        const cplx ipt(0.0, pi);
        cplx d1 = 0.0, d3 = 0.0;
        for (int n = 0; n < 64; ++n) {
            const double k = 2.0 * n + 1.0;
            const double h = n + 0.5;
            const cplx qn = std::exp(ipt * tau_ * (h * h));
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            d1 += sign * qn * k;
            d3 -= sign * qn * k * k * k;
            if (n >= 2 && std::abs(qn) * k * k * k < 1e-18 * std::abs(d1)) break;
        }
        return {2.0 * d1, 2.0 * d3};
    }

    /// eta = zeta(w1/2)
    cplx eta() const {
        using std::numbers::pi;
        auto [d1, d3] = derivatives_at_zero();
        return -pi * pi * d3 / (6.0 * w1_ * d1);
    }

    struct Reduced {
        cplx u;     // centred representative
        long m, n;  // u_original = u + m w1 + n w2
    };

    Reduced reduce(cplx u) const {
        auto t = lat_.coords(u);
        const long m = static_cast<long>(std::floor(t[0] + 0.5));
        const long n = static_cast<long>(std::floor(t[1] + 0.5));
        return {u - lat_.point(double(m), double(n)), m, n};
    }

    /// log theta(u) (branch arbitrary but consistent with the multipliers)
    cplx log(cplx u) const {
        using std::numbers::pi;
        const cplx i(0.0, 1.0);
        const Reduced r = reduce(u);
        const ThetaValues tv = series(pi * r.u / w1_);
        const double n = double(r.n);
        return std::log(tv.th) + i * pi * double(r.m + r.n) - i * pi * tau_ * n * n -
               2.0 * i * pi * n * r.u / w1_;
    }

    /// d/du log theta(u)
    cplx dlog(cplx u) const {
        using std::numbers::pi;
        const cplx i(0.0, 1.0);
        const Reduced r = reduce(u);
        const ThetaValues tv = series(pi * r.u / w1_);
        return (pi / w1_) * tv.d1 / tv.th - 2.0 * i * pi * double(r.n) / w1_;
    }

    /// log theta(u) and its derivative from one series evaluation
    std::pair<cplx, cplx> log_and_dlog(cplx u) const {
        using std::numbers::pi;
        const cplx i(0.0, 1.0);
        const Reduced r = reduce(u);
        const ThetaValues tv = series(pi * r.u / w1_);
        const double n = double(r.n);
        const cplx lg = std::log(tv.th) + i * pi * double(r.m + r.n) - i * pi * tau_ * n * n -
                        2.0 * i * pi * n * r.u / w1_;
        return {lg, (pi / w1_) * tv.d1 / tv.th - 2.0 * i * pi * n / w1_};
    }

    /// d^2/du^2 log theta(u); periodic
    cplx d2log(cplx u) const {
        using std::numbers::pi;
        const Reduced r = reduce(u);
        const ThetaValues tv = series(pi * r.u / w1_);
        const cplx ratio = tv.d1 / tv.th;
        return (pi / w1_) * (pi / w1_) * (tv.d2 / tv.th - ratio * ratio);
    }

private:
    Lattice lat_;
    cplx w1_, tau_;
    double tol_;
};

}  // namespace ellnewton::detail
