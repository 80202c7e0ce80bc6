#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "ellnewton/elliptic.hpp"

namespace ellnewton {

enum class FlowKind { desingularized, damped };

enum class EquilibriumKind { attractor, repellor, saddle };

struct Equilibrium {
    cplx location;  // representative in [0,1)^2
    EquilibriumKind kind;
    int multiplicity = 1;
    bool simple = true;
    /// Unit eigen-axes of the linearisation for simple saddles:
    /// axes[0] unstable, axes[1] stable.
    std::array<cplx, 2> axes{};
    std::array<double, 2> eigenvalues{};
};

/// sqrt(sum over the lattice of |z - a - w|^-(4r-4)).
///
/// The finite box sum is supplemented by the first two even moments of the
/// omitted tail, which are precomputed per lattice and exponent.
class Psi {
public:
    Psi(const Lattice& lattice, cplx a, int r, int shells = 24);
    /// Throws DivisorProximity at a lattice translate of a.
    double operator()(cplx z) const;
    int order() const { return r_; }

private:
    Lattice lat_;
    cplx a_;
    int r_, n_;
    double p_;
    double tail0_, tail2_;  // sum |w|^-p,  sum |w|^-(p+2)
    cplx tail_q_;           // sum w^-2 |w|^-p
};

/// Newton vector field of an elliptic function,
///   v(z) = -(1 + |f|^4)^-1 conj(f'(z)) f(z),
/// optionally damped by Psi factors at the multiple zeros and poles.
class FlowField {
public:
    explicit FlowField(EllipticFunction f, FlowKind kind = FlowKind::desingularized);

    const EllipticFunction& function() const { return f_; }
    FlowKind kind() const { return kind_; }

    /// Velocity; 0 at the divisor and at critical points.
    cplx velocity(cplx z) const;
    /// Product of the Psi factors (1 for the desingularized kind).
    double damping(cplx z) const;

    /// Flow of 1/f, which is the time reversal of this flow.
    FlowField reversed() const;

    /// Zeros, poles and critical points; computed once on first use.
    const std::vector<Equilibrium>& equilibria() const;

private:
    EllipticFunction f_;
    FlowKind kind_;
    std::vector<Psi> psi_;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

/// Velocity at z (free-function form).
cplx field_eval(const FlowField& F, cplx z);
double psi(const Lattice& lattice, cplx a, int r, cplx z);

/// Real 2x2 Jacobian of the velocity by central differences.
std::array<std::array<double, 2>, 2> field_jacobian(const FlowField& F, cplx z, double h = 1e-6);

std::vector<Equilibrium> classify_equilibria(const FlowField& F);

struct TrajectorySample {
    double t;          // arc length from the start
    cplx z;            // lifted (continuous) position
    double argf;       // arg f in turns, unwrapped
    double log_abs_f;  // log |f|
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double argf = 0.0;    // value of arg f at the start, turns in [0,1)
    int terminal = -1;    // index into FlowField::equilibria(), -1 on timeout
    double max_drift = 0; // max |arg f - argf| in radians over the path
};

struct IntegrateOptions {
    double t_max = 50.0;
    double eq_radius = 1e-6;
    double rtol = 1e-9;
    double atol = 1e-12;
    /// equilibrium not taken as terminal until the path has left its
    /// exclusion radius once
    int exclude = -1;
    double exclude_radius = 1e-3;
    /// accepted arg f drift, radians per unit arc length
    double max_drift_rate = 1e-6;
};

/// Integrates the orbit of z0 with an embedded Dormand-Prince 5(4) scheme on
/// the unit-speed direction field v/|v| (same orbits, t = arc length).
/// Throws NonConvergence on step-size underflow and PropertyViolation if the
/// arg f drift exceeds 1e-6 rad per unit arc length.
Trajectory integrate(const FlowField& F, cplx z0, IntegrateOptions opt = {});

enum class Stability { stable, unstable };

struct Separatrix {
    int saddle = -1;
    Stability stability = Stability::unstable;
    int branch = +1;
    Trajectory path;   // stable ones are traced backward, i.e. from the saddle
    int endpoint = -1; // equilibrium index
    double argf = 0.0; // arg f (turns)
};

/// The four separatrices of a simple saddle (unstable +, unstable -,
/// stable +, stable -).  Seeds at 1e-7 along the eigen-axes.
std::array<Separatrix, 4> trace_separatrices(const FlowField& F, int saddle, IntegrateOptions opt = {});

struct SaddleConnection {
    bool found = false;
    int from = -1, to = -1;  // saddle indices
    std::optional<Separatrix> witness;
};

/// Looks for a separatrix joining two saddles.  Candidate pairs must share
/// arg f within 1e-5 turns and have |f(from)| > |f(to)|; candidates are
/// confirmed by tracing.  UnsupportedConfiguration for a non-simple saddle.
SaddleConnection saddle_connection_check(const FlowField& F);

struct SectorEntry {
    int saddle;       // saddle the incident separatrix comes from
    int branch;
    double direction; // arrival direction, turns in [0,1)
    double gap;       // turns to the next entry anticlockwise
    double argf;      // turns
};

/// All four separatrices of every saddle, traced once.
struct Portrait {
    std::vector<int> saddles;  // equilibrium indices
    std::vector<std::array<Separatrix, 4>> separatrices;
};
/// UnsupportedConfiguration if some saddle is not simple.
Portrait trace_portrait(const FlowField& F, IntegrateOptions opt = {});

/// c in f ~ c (z - a)^m at an attractor a of multiplicity m (Cauchy mean).
cplx leading_coefficient(const FlowField& F, int attractor);
/// Direction (turns) from which a path of constant arg f reaches the
/// attractor: the ray (argf - arg c)/m + k/m closest to the sampled approach.
double arrival_direction(const FlowField& F, int attractor, const Trajectory& path, double argf);
double arrival_direction(const FlowField& F, int attractor, const Trajectory& path, double argf, cplx c);

/// Directions of the unstable separatrices arriving at an attractor, sorted
/// anticlockwise, with the angular gaps between consecutive ones.
/// PropertyViolation if fewer than two separatrices arrive.
std::vector<SectorEntry> measure_sector_angles(const FlowField& F, int attractor);
std::vector<SectorEntry> measure_sector_angles(const FlowField& F, int attractor, const Portrait& portrait);

/// Sector angles at the zero of a nuclear flow (one zero and one pole, both
/// of order r).  The incident separatrices cut the full turn into gaps
/// (2 alpha, gamma, 2 beta, gamma), where the 2 alpha and 2 beta gaps contain
/// the two rays of the symmetry axis through zero and pole; alpha <= beta.
struct NuclearAngles {
    double alpha = 0, beta = 0, gamma = 0;
    /// four gaps, axis rays in opposite gaps, the other two gaps equal
    bool pattern = false;
    std::vector<SectorEntry> entries;
};
NuclearAngles nuclear_sector_angles(const FlowField& F);

/// Lines `t re im argf absf`.
void write_trajectory(std::ostream& out, const Trajectory& tr);

}  // namespace ellnewton
