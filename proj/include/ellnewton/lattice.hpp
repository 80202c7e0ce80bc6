#pragma once

#include <array>
#include <complex>
#include <utility>

namespace ellnewton {

using cplx = std::complex<double>;

/// Integer basis change with determinant +1.
///
/// The new basis is (p1*w1 + p2*w2, q1*w1 + q2*w2) in terms of the old
/// basis (w1, w2); for the canonical basis (1, i) this reads
/// w1' = p1 + p2 i, w2' = q1 + q2 i.
struct UnimodularMatrix {
    long p1 = 1, p2 = 0, q1 = 0, q2 = 1;

    long determinant() const { return p1 * q2 - p2 * q1; }
    static UnimodularMatrix identity() { return {}; }
    /// this applied after `inner`
    UnimodularMatrix compose(const UnimodularMatrix& inner) const;
    bool operator==(const UnimodularMatrix&) const = default;
};

/// Period pair spanning a rank-2 lattice, Im(omega2/omega1) > 0.
class Lattice {
public:
    /// Throws InvalidInput if Im(omega2/omega1) <= 0.
    Lattice(cplx omega1, cplx omega2);

    static Lattice square() { return {1.0, cplx(0.0, 1.0)}; }

    cplx omega1() const { return omega1_; }
    cplx omega2() const { return omega2_; }
    cplx tau() const { return omega2_ / omega1_; }
    double cell_area() const;

    /// t1*omega1 + t2*omega2
    cplx point(double t1, double t2) const { return t1 * omega1_ + t2 * omega2_; }
    cplx point(std::array<double, 2> t) const { return point(t[0], t[1]); }
    /// Real coordinates of z in the basis.
    std::array<double, 2> coords(cplx z) const;

    /// True if z is a lattice point up to `tol` in lattice coordinates.
    bool contains(cplx z, double tol = 1e-9) const;
    /// Integer coordinates of a lattice point; throws InvalidInput otherwise.
    std::array<long, 2> integer_coords(cplx z, double tol = 1e-9) const;

    /// Representative of z with coordinates in [0,1)^2.
    cplx reduce(cplx z) const;
    /// Representative of z with coordinates in [-1/2,1/2)^2.
    cplx reduce_centered(cplx z) const;
    /// Distance on the torus C / Lattice.
    double torus_distance(cplx a, cplx b) const;
    /// The lattice translate of w nearest to z.
    cplx nearest_lift(cplx w, cplx z) const;

private:
    cplx omega1_, omega2_;
    // inverse of the real 2x2 basis matrix
    double inv_[2][2];
};

/// Gauss reduction to a reduced period pair: |w1| minimal in the lattice,
/// |w2| minimal among periods with Im(w/w1) > 0, normalised so that
/// tau = w2/w1 lies in the standard fundamental domain.  Among bases with the
/// same tau the one whose w1 has smallest argument in [0, 2pi) is chosen.
std::pair<Lattice, UnimodularMatrix> reduce_periods(const Lattice& lat);

}  // namespace ellnewton
