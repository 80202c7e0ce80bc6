#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "ellnewton/lattice.hpp"

namespace ellnewton {

/// A zero or pole: lattice coordinates of one representative plus multiplicity.
struct DivisorPoint {
    std::array<double, 2> t{0.0, 0.0};
    int multiplicity = 1;
};

/// Zeros and poles of an elliptic function on the torus C / lattice.
///
/// Representatives are kept exactly as given; `canonical()` moves them into
/// [0,1)^2.  Construction checks that zero and pole multiplicities agree,
/// that the order is at least 2 and that no zero sits on a pole.  The
/// congruence sum(zeros) - sum(poles) in the lattice is checked by
/// abel_normalize().
class Divisor {
public:
    Divisor(Lattice lattice, std::vector<DivisorPoint> zeros, std::vector<DivisorPoint> poles);

    const Lattice& lattice() const { return lattice_; }
    const std::vector<DivisorPoint>& zeros() const { return zeros_; }
    const std::vector<DivisorPoint>& poles() const { return poles_; }

    int order() const;
    /// sum of zero representatives minus sum of pole representatives
    cplx lambda0() const;
    cplx zero_point(std::size_t i) const { return lattice_.point(zeros_[i].t); }
    cplx pole_point(std::size_t i) const { return lattice_.point(poles_[i].t); }

    /// Same divisor with every representative in [0,1)^2 and coincident
    /// points merged.
    Divisor canonical() const;

    /// Distinct torus points of zeros (resp. poles) with total multiplicity.
    std::vector<std::pair<cplx, int>> distinct_zeros() const;
    std::vector<std::pair<cplx, int>> distinct_poles() const;

private:
    Lattice lattice_;
    std::vector<DivisorPoint> zeros_, poles_;
};

/// Translate the lexicographically smallest zero representative by -lambda0
/// so that the zero and pole representatives have equal sums in C.
/// Throws InvalidInput if sum(zeros) - sum(poles) is not a lattice point.
Divisor abel_normalize(const Divisor& div);

/// Series cut-off policy.  `tolerance` bounds the relative size of the first
/// neglected theta-series term; `shells` is the minimum number of lattice
/// shells summed by direct lattice sums (psi).
struct TruncationPolicy {
    double tolerance = 1e-10;
    int shells = 24;
};

/// f(z) = scale * prod sigma(z - a_i) / prod sigma(z - b_j) over the
/// abel-normalised divisor.
///
/// Sigma is evaluated through the Jacobi theta function of a reduced basis of
/// the lattice, with quasi-periodicity used to move every argument into the
/// centred fundamental cell before the series is summed.  The function value
/// is carried in logarithmic form so that |f| never overflows near poles.
class EllipticFunction {
public:
    explicit EllipticFunction(const Divisor& div, cplx scale = 1.0, TruncationPolicy policy = {});

    const Divisor& divisor() const { return divisor_; }       // abel-normalised
    const Divisor& original_divisor() const { return original_; }
    const Lattice& lattice() const { return divisor_.lattice(); }
    const Lattice& reduced_lattice() const { return reduced_; }
    cplx scale() const { return scale_; }
    int order() const { return divisor_.order(); }
    const TruncationPolicy& policy() const { return policy_; }

    /// Expanded representatives (one entry per unit of multiplicity).
    const std::vector<cplx>& zero_reps() const { return zero_reps_; }
    const std::vector<cplx>& pole_reps() const { return pole_reps_; }

    /// log f(z) on an arbitrary branch.  Throws DivisorProximity within 1e-12
    /// of any zero or pole.
    cplx log_value(cplx z) const;
    /// f(z); throws DivisorProximity within 1e-12 of a pole.
    cplx value(cplx z) const;
    /// f'(z)/f(z) = sum zeta(z - a_i) - sum zeta(z - b_j)
    cplx log_derivative(cplx z) const;
    /// f'(z); throws DivisorProximity within 1e-12 of the divisor.
    cplx derivative(cplx z) const;
    /// log f(z) and f'/f(z) together (same conditions as log_value).
    std::pair<cplx, cplx> log_jet(cplx z) const;
    /// d/dz (f'/f) = sum wp(z - b_j) - sum wp(z - a_i)
    cplx log_derivative_prime(cplx z) const;

    /// Torus distance to the nearest zero/pole, and that point.
    std::pair<double, cplx> nearest_divisor_point(cplx z) const;
    std::pair<double, cplx> nearest_pole(cplx z) const;

private:
    Divisor original_;
    Divisor divisor_;
    Lattice reduced_;
    cplx scale_;
    TruncationPolicy policy_;
    std::vector<cplx> zero_reps_, pole_reps_;
    cplx log_constant_;
};

/// Weierstrass p-function of the lattice (theta-series evaluation).
cplx weierstrass_p(const Lattice& lat, cplx z, double tolerance = 1e-14);
/// Quasi-period eta = zeta(omega1/2) for the lattice's own omega1.
cplx weierstrass_eta1(const Lattice& lat, double tolerance = 1e-14);

struct CriticalPoint {
    cplx point;  // representative in [0,1)^2
    int multiplicity = 1;
};

struct CriticalPointOptions {
    int grid = 32;
    int max_iterations = 200;
    double residual_tolerance = 1e-9;
    double dedup_radius = 1e-6;
    double contour_radius = 1e-3;
};

/// Solutions of f' = 0 with f != 0, found by multi-start damped Newton on the
/// logarithmic derivative.  The expected count with multiplicity is
/// (#distinct zeros + #distinct poles); NonConvergence is thrown when the
/// search falls short.
std::vector<CriticalPoint> critical_points(const EllipticFunction& f, CriticalPointOptions opt = {});

/// Expected number of critical points counted with multiplicity.
int expected_critical_count(const Divisor& div);

struct WindingNumbers {
    long eta1 = 0, eta2 = 0;   // winding of f along the sides spanned by omega1, omega2
    cplx corner;               // lower-left corner of the parallelogram used
    cplx lambda0;              // sum zeros - sum poles of representatives in that parallelogram
    /// lambda0 == omega1*eta2 - omega2*eta1
    bool consistent = false;
};

/// Winding numbers by argument accumulation along the parallelogram sides.
/// The parallelogram is translated away from the divisor; InvalidInput if the
/// requested corner puts a divisor point within 1e-6 of a side.
WindingNumbers winding_numbers(const EllipticFunction& f);
WindingNumbers winding_numbers(const EllipticFunction& f, cplx corner);

enum class NuclearClass { side = 1, diagonal = 2 };

struct NuclearConfiguration {
    Divisor divisor;        // zero of order r at 0, pole of order r at `pole`
    cplx pole;              // literal representative (m + n i)/r
    NuclearClass cls;
    cplx lambda0;           // -(m + n i)
};

/// The eight a-priori nuclear configurations on the square lattice.
std::vector<NuclearConfiguration> nuclear_configurations(int r);

/// Nuclear divisor: zero of order r at 0, pole of order r at (1+i)/r.
Divisor nuclear_divisor(int r);
/// Divisor of wp on the square lattice: double pole at 0, double zero at (1+i)/2.
Divisor wp_square_divisor();

/// Replace the zero of multiplicity deltas.size() at `at` by simple zeros at
/// at + deltas[i].  Poles and the representative sum are unchanged.
EllipticFunction split_zero(const EllipticFunction& f, cplx at, const std::vector<cplx>& deltas);

/// Text format: `lattice = re1,im1 ; re2,im2`, `zero = t1,t2 x m`,
/// `pole = t1,t2 x m`, `#` comments.
Divisor parse_divisor(std::istream& in);
Divisor parse_divisor(const std::string& text);
Divisor load_divisor(const std::string& path);
std::string serialize_divisor(const Divisor& div);

}  // namespace ellnewton
