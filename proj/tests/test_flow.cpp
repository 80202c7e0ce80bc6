#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "ellnewton/errors.hpp"
#include "ellnewton/flow.hpp"

using namespace ellnewton;

namespace {

std::vector<cplx> random_points(const Lattice& lat, int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i) out.push_back(lat.point(u(gen), u(gen)));
    return out;
}

// brute-force box sum of |z - w|^-p, Richardson on the N^(2-p) tail
double psi_oracle(const Lattice& lat, cplx z, int p) {
    auto box = [&](int N) {
        double s = 0;
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n) s += std::pow(std::abs(z - lat.point(m, n)), -p);
        return s;
    };
    const double s1 = box(300), s2 = box(600);
    const double k = std::pow(2.0, p - 2);
    return std::sqrt(s2 + (s2 - s1) / (k - 1));
}

const FlowField& wp_flow() {
    static const FlowField F{EllipticFunction(wp_square_divisor())};
    return F;
}

const FlowField& nuclear3_flow() {
    static const FlowField F{EllipticFunction(nuclear_divisor(3))};
    return F;
}

int count(const FlowField& F, EquilibriumKind k) {
    int n = 0;
    for (const auto& e : F.equilibria())
        if (e.kind == k) n += e.multiplicity;
    return n;
}

}  // namespace

TEST_CASE("velocity vanishes at zeros, poles and critical points") {
    const FlowField& F = wp_flow();
    CHECK(F.velocity(cplx(0.5, 0.5)) == cplx(0.0));
    CHECK(F.velocity(0.0) == cplx(0.0));
    CHECK(std::abs(F.velocity(0.5)) < 1e-15);
    CHECK(std::abs(F.velocity(cplx(0, 0.5))) < 1e-15);
    // double zero and pole: |v| ~ dist^3; simple saddles: |v| ~ dist
    CHECK(std::abs(F.velocity(cplx(0.5, 0.5 + 1e-8))) < 1e-10);
    CHECK(std::abs(F.velocity(cplx(1e-8, 0))) < 1e-10);
    CHECK(std::abs(F.velocity(cplx(0.5 + 1e-8, 0))) < 1e-7);
}

TEST_CASE("duality: the field of 1/f is the negated field") {
    for (const FlowField* F : {&wp_flow(), &nuclear3_flow()}) {
        const FlowField R = F->reversed();
        for (cplx z : random_points(F->function().lattice(), 20, 7)) {
            const cplx v = F->velocity(z), w = R.velocity(z);
            CHECK(std::abs(v + w) < 1e-12 * std::max(1.0, std::abs(v)));
        }
    }
}

TEST_CASE("velocity is a positive multiple of -f/f'") {
    const FlowField& F = nuclear3_flow();
    const auto& f = F.function();
    for (cplx z : random_points(f.lattice(), 40, 9)) {
        if (f.nearest_divisor_point(z).first < 1e-3) continue;
        const cplx v = F.velocity(z);
        const cplx n = -f.value(z) / f.derivative(z);
        CHECK(std::abs(v / std::abs(v) - n / std::abs(n)) < 1e-9);
    }
}

TEST_CASE("psi") {
    const Lattice sq = Lattice::square();
    const Psi p2(sq, 0.0, 2), p3(sq, cplx(0.2, 0.1), 3);
    for (cplx z : random_points(sq, 10, 13)) {
        CHECK(p2(z) > 0);
        CHECK(std::abs(p2(z + 1.0) - p2(z)) < 1e-10 * p2(z));
        CHECK(std::abs(p3(z + cplx(0, 1)) - p3(z)) < 1e-10 * p3(z));
    }
    for (double d : {1e-2, 1e-3}) CHECK(std::abs(p2(d) * d * d - 1.0) < 0.01);
    const cplx z(0.31, 0.47);
    CHECK(std::abs(p2(z) - psi_oracle(sq, z, 4)) < 1e-9 * p2(z));
    const Lattice skew(1.0, cplx(0.3, 1.1));
    const Psi ps(skew, 0.0, 2);
    CHECK(std::abs(ps(z) - psi_oracle(skew, z, 4)) < 1e-9 * ps(z));
    CHECK_THROWS_AS(p2(cplx(1, 1)), DivisorProximity);
}

TEST_CASE("damped nuclear field is hyperbolic at the zero and the pole") {
    const FlowField D(EllipticFunction(nuclear_divisor(2)), FlowKind::damped);
    for (const auto& e : D.equilibria()) {
        if (e.kind == EquilibriumKind::saddle) continue;
        CHECK(std::abs(e.eigenvalues[0] - e.eigenvalues[1]) < 1e-4 * std::abs(e.eigenvalues[0]));
        CHECK(std::abs(e.eigenvalues[0]) > 1e-2);
        const bool sign_ok = e.kind == EquilibriumKind::attractor ? e.eigenvalues[0] < 0 : e.eigenvalues[0] > 0;
        CHECK(sign_ok);
    }
    // same orbits as the undamped field
    const FlowField U(EllipticFunction(nuclear_divisor(2)));
    for (cplx z : random_points(Lattice::square(), 10, 17)) {
        const cplx a = D.velocity(z), b = U.velocity(z);
        CHECK(std::abs(a / std::abs(a) - b / std::abs(b)) < 1e-12);
    }
}

TEST_CASE("classify_equilibria") {
    SUBCASE("nuclear r = 2") {
        const auto& eq = wp_flow().equilibria();
        CHECK(count(wp_flow(), EquilibriumKind::attractor) == 2);
        CHECK(count(wp_flow(), EquilibriumKind::repellor) == 2);
        std::vector<cplx> saddles;
        for (const auto& e : eq) {
            if (e.kind == EquilibriumKind::saddle) {
                CHECK(e.simple);
                saddles.push_back(e.location);
                // orthogonal axes
                CHECK(std::abs(std::real(e.axes[0] * std::conj(e.axes[1]))) < 1e-4);
            }
        }
        REQUIRE(saddles.size() == 2);
        CHECK(std::abs(saddles[0] - cplx(0, 0.5)) < 1e-6);
        CHECK(std::abs(saddles[1] - 0.5) < 1e-6);
    }
    SUBCASE("E^1_3 member") {
        const EllipticFunction f(nuclear_divisor(3));
        const cplx w = std::polar(1.0, 2 * M_PI / 3);
        const FlowField F(split_zero(f, 0.0, {0.03, 0.03 * w, 0.03 * w * w}));
        int attractors = 0;
        for (const auto& e : F.equilibria()) {
            if (e.kind == EquilibriumKind::attractor) ++attractors;
            if (e.kind == EquilibriumKind::saddle && e.simple)
                CHECK(std::abs(std::real(e.axes[0] * std::conj(e.axes[1]))) < 1e-4);
        }
        CHECK(attractors == 3);
        CHECK(count(F, EquilibriumKind::repellor) == 3);
        CHECK(count(F, EquilibriumKind::saddle) == 4);
    }
}

TEST_CASE("integrate") {
    const FlowField& F = nuclear3_flow();
    const auto& eq = F.equilibria();
    SUBCASE("start near a zero") {
        auto tr = integrate(F, cplx(1e-3, 0.0));
        REQUIRE(tr.terminal >= 0);
        CHECK(eq[tr.terminal].kind == EquilibriumKind::attractor);
        CHECK(std::abs(eq[tr.terminal].location) < 1e-12);
    }
    SUBCASE("generic start: |f| decreasing, arg f conserved") {
        for (cplx z : random_points(Lattice::square(), 10, 21)) {
            if (F.function().nearest_divisor_point(z).first < 1e-2) continue;
            auto tr = integrate(F, z);
            CHECK(tr.terminal >= 0);
            for (std::size_t i = 1; i < tr.samples.size(); ++i)
                CHECK(tr.samples[i].log_abs_f < tr.samples[i - 1].log_abs_f);
            CHECK(tr.max_drift < 1e-6 * std::max(1.0, tr.samples.back().t));
        }
    }
    SUBCASE("reversed time leaves the pole's neighbourhood toward it") {
        const FlowField R = F.reversed();
        auto tr = integrate(R, cplx(1.0 / 3 + 1e-3, 1.0 / 3));
        REQUIRE(tr.terminal >= 0);
        CHECK(eq[tr.terminal].kind == EquilibriumKind::repellor);
    }
    SUBCASE("dump format") {
        auto tr = integrate(F, cplx(0.2, 0.05));
        std::ostringstream os;
        write_trajectory(os, tr);
        std::istringstream is(os.str());
        double t, x, y, a, m;
        const bool parsed = bool(is >> t >> x >> y >> a >> m);
        REQUIRE(parsed);
        CHECK(t == 0.0);
        CHECK(x == doctest::Approx(0.2));
        CHECK(m > 0);
    }
}

TEST_CASE("separatrices of the wp flow") {
    const FlowField& F = wp_flow();
    const auto& eq = F.equilibria();
    for (std::size_t i = 0; i < eq.size(); ++i) {
        if (eq[i].kind != EquilibriumKind::saddle) continue;
        auto s = trace_separatrices(F, int(i));
        for (int k = 0; k < 2; ++k) {
            REQUIRE(s[k].endpoint >= 0);
            CHECK(std::abs(eq[s[k].endpoint].location - cplx(0.5, 0.5)) < 1e-12);
            REQUIRE(s[2 + k].endpoint >= 0);
            CHECK(eq[s[2 + k].endpoint].kind == EquilibriumKind::repellor);
        }
        const double a0 = s[0].argf, a1 = s[1].argf;
        CHECK(std::abs(a0 - a1) < 1e-9);
        const double drift = s[0].path.samples.back().argf - s[0].path.samples.front().argf;
        CHECK(std::abs(drift) < 1e-7);
    }
}

TEST_CASE("saddle connections") {
    SUBCASE("class 2, r = 2: none") {
        for (const auto& cfg : nuclear_configurations(2)) {
            if (cfg.cls != NuclearClass::diagonal) continue;
            const FlowField F{EllipticFunction(cfg.divisor)};
            CHECK_FALSE(saddle_connection_check(F).found);
        }
    }
    SUBCASE("class 1 (0, 1/2), r = 2: connection along Im z = 1/2") {
        const FlowField F{EllipticFunction(Divisor(Lattice::square(), {{{0, 0}, 2}}, {{{0.5, 0}, 2}}))};
        auto c = saddle_connection_check(F);
        REQUIRE(c.found);
        const auto& eq = F.equilibria();
        CHECK(std::abs(eq[c.from].location.imag() - 0.5) < 1e-9);
        CHECK(std::abs(eq[c.to].location.imag() - 0.5) < 1e-9);
        REQUIRE(c.witness);
        for (const auto& s : c.witness->path.samples) CHECK(std::abs(s.z.imag() - 0.5) < 1e-6);
    }
    SUBCASE("generic split of the r = 3 function: none") {
        const EllipticFunction f(nuclear_divisor(3));
        const cplx u = std::polar(0.02, 0.3);
        const FlowField F(split_zero(f, 0.0, {2.0 * u, -u + 0.25 * u * cplx(0, 1), -u - 0.25 * u * cplx(0, 1)}));
        CHECK_FALSE(saddle_connection_check(F).found);
    }
}

TEST_CASE("sector angles") {
    SUBCASE("r = 2") {
        auto a = nuclear_sector_angles(wp_flow());
        REQUIRE(a.pattern);
        CHECK(std::abs(a.alpha - 0.125) < 1e-3);
        CHECK(std::abs(a.beta - 0.125) < 1e-3);
        CHECK(std::abs(a.gamma - 0.25) < 1e-3);
    }
    SUBCASE("r = 3") {
        auto a = nuclear_sector_angles(nuclear3_flow());
        REQUIRE(a.pattern);
        CHECK(a.alpha > 0);
        CHECK(a.alpha < 1.0 / 6);
        CHECK(std::abs(a.beta - (0.5 + a.alpha - 1.0 / 3)) < 1e-3);
        CHECK(std::abs(a.gamma - (1.0 / 3 - 2 * a.alpha)) < 1e-3);
    }
    SUBCASE("gaps sum to one turn") {
        for (const FlowField* F : {&wp_flow(), &nuclear3_flow()}) {
            for (std::size_t i = 0; i < F->equilibria().size(); ++i) {
                if (F->equilibria()[i].kind != EquilibriumKind::attractor) continue;
                double sum = 0;
                for (const auto& e : measure_sector_angles(*F, int(i))) sum += e.gap;
                CHECK(std::abs(sum - 1.0) < 1e-9);
            }
        }
    }
}
