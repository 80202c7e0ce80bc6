#include "doctest.h"

#include <cmath>
#include <optional>
#include <random>

#include "ellnewton/elliptic.hpp"
#include "ellnewton/errors.hpp"

using namespace ellnewton;

namespace {

// Direct truncated lattice sum for wp over a symmetric box of half-width n.
cplx wp_box_sum(const Lattice& lat, cplx z, int n) {
    cplx s = 1.0 / (z * z);
    for (int a = -n; a <= n; ++a) {
        for (int b = -n; b <= n; ++b) {
            if (a == 0 && b == 0) continue;
            const cplx w = lat.point(a, b);
            s += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
        }
    }
    return s;
}

// The box-sum tail behaves like c/n^2; one Richardson step removes it.
cplx wp_oracle(const Lattice& lat, cplx z) {
    const cplx s1 = wp_box_sum(lat, z, 400), s2 = wp_box_sum(lat, z, 800);
    return (4.0 * s2 - s1) / 3.0;
}

std::vector<cplx> random_points(const Lattice& lat, int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i) out.push_back(lat.point(u(gen), u(gen)));
    return out;
}

}  // namespace

TEST_CASE("wp matches an independent lattice sum") {
    const Lattice sq = Lattice::square();
    const cplx oracle = wp_oracle(sq, 0.5);
    const cplx theta = weierstrass_p(sq, 0.5);
    CHECK(std::abs(theta - oracle) < 1e-8);
    CHECK(std::abs(theta.imag()) < 1e-12);
    // also off the symmetry lines and on a skew lattice
    const Lattice skew(cplx(1, 0), cplx(0.3, 1.1));
    const cplx z(0.21, 0.37);
    CHECK(std::abs(weierstrass_p(skew, z) - wp_oracle(skew, z)) < 1e-7);
}

TEST_CASE("wp is even and (1+i)/2 is its zero on the square lattice") {
    const Lattice sq = Lattice::square();
    for (cplx z : random_points(sq, 10, 3)) {
        if (std::abs(sq.reduce_centered(z)) < 0.05) continue;
        CHECK(std::abs(weierstrass_p(sq, z) - weierstrass_p(sq, -z)) < 1e-10 * std::abs(weierstrass_p(sq, z)));
    }
    CHECK(std::abs(weierstrass_p(sq, cplx(0.5, 0.5))) < 1e-12);
}

TEST_CASE("abel_normalize") {
    const Lattice sq = Lattice::square();
    {
        Divisor d(sq, {{{0, 0}, 3}}, {{{1.0 / 3, 1.0 / 3}, 3}});
        CHECK(std::abs(d.lambda0() - cplx(-1, -1)) < 1e-12);
        Divisor n = abel_normalize(d);
        CHECK(std::abs(n.lambda0()) < 1e-12);
        REQUIRE(n.zeros().size() == 2);
        CHECK(n.zeros()[0].multiplicity == 2);
        CHECK(std::abs(n.zero_point(1) - cplx(1, 1)) < 1e-12);
        CHECK(n.distinct_zeros().size() == 1);
        CHECK(n.distinct_zeros()[0].second == 3);
    }
    {
        Divisor d(sq, {{{0, 0}, 2}}, {{{0.5, 0.5}, 2}});
        Divisor n = abel_normalize(d);
        CHECK(std::abs(n.zero_point(1) - cplx(1, 1)) < 1e-12);
    }
    {
        Divisor d(sq, {{{0.1, 0}, 1}, {{0.7, 0}, 1}}, {{{0.3, 0}, 1}, {{0.5, 0}, 1}});
        Divisor n = abel_normalize(d);
        CHECK(n.zeros()[0].t == d.zeros()[0].t);
        CHECK(n.zeros()[1].t == d.zeros()[1].t);
    }
    {
        Divisor bad(sq, {{{0.1, 0}, 1}, {{0.2, 0}, 1}}, {{{0.3, 0}, 1}, {{0.5, 0}, 1}});
        CHECK_THROWS_AS(abel_normalize(bad), InvalidInput);
    }
    CHECK_THROWS_AS(Divisor(sq, {{{0, 0}, 2}}, {{{1, 0}, 2}}), InvalidInput);
    CHECK_THROWS_AS(Divisor(sq, {{{0, 0}, 1}}, {{{0.5, 0}, 1}}), InvalidInput);
    CHECK_THROWS_AS(Divisor(sq, {{{0, 0}, 2}}, {{{0.5, 0}, 1}}), InvalidInput);
}

TEST_CASE("evaluation: periodicity and derivative") {
    const Lattice sq = Lattice::square();
    const std::vector<Divisor> divisors = {
        wp_square_divisor(), nuclear_divisor(2), nuclear_divisor(3),
        Divisor(Lattice(cplx(3, 1), cplx(2, 1)), {{{0.5, 0.5}, 2}}, {{{0, 0}, 2}}),
        Divisor(Lattice(cplx(1, 0), cplx(0.2, 1.3)), {{{0.1, 0.2}, 1}, {{0.6, 0.5}, 1}, {{0.4, 0.9}, 1}},
                {{{0.35, 0.4}, 1}, {{0.75, 0.2}, 1}, {{0.0, 0.0}, 1}})};
    unsigned seed = 11;
    for (const auto& d : divisors) {
        const std::optional<EllipticFunction> f(std::in_place, d);
        const Lattice& lat = f->lattice();
        for (cplx z : random_points(lat, 50, seed++)) {
            if (f->nearest_divisor_point(z).first < 0.05) continue;
            const cplx v = f->value(z);
            CHECK(std::abs(f->value(z + lat.omega1()) - v) < 1e-9 * std::max(1.0, std::abs(v)));
            CHECK(std::abs(f->value(z + lat.omega2()) - v) < 1e-9 * std::max(1.0, std::abs(v)));
            const double h = 1e-5;
            const cplx fd = (f->value(z + h) - f->value(z - h)) / (2 * h);
            const cplx an = f->derivative(z);
            CHECK(std::abs(fd - an) < 1e-5 * std::max(1.0, std::abs(an)));
            const cplx fdl = (f->log_derivative(z + h) - f->log_derivative(z - h)) / (2 * h);
            CHECK(std::abs(fdl - f->log_derivative_prime(z)) < 1e-5 * std::max(1.0, std::abs(fdl)));
        }
    }
}

TEST_CASE("the wp divisor reproduces wp up to a constant") {
    const EllipticFunction f(wp_square_divisor());
    const Lattice sq = Lattice::square();
    const cplx c = weierstrass_p(sq, cplx(0.2, 0.1)) / f.value(cplx(0.2, 0.1));
    for (cplx z : random_points(sq, 20, 5)) {
        if (f.nearest_divisor_point(z).first < 0.05) continue;
        const cplx wp = weierstrass_p(sq, z);
        CHECK(std::abs(c * f.value(z) - wp) < 1e-9 * std::abs(wp));
    }
}

TEST_CASE("proximity signals") {
    const EllipticFunction f(nuclear_divisor(2));
    CHECK_THROWS_AS(f.value(cplx(0.5, 0.5)), DivisorProximity);
    CHECK_THROWS_AS(f.log_derivative(cplx(1, 0)), DivisorProximity);
    CHECK(f.value(0.0) == cplx(0.0));
    try {
        f.value(cplx(0.5, 0.5 + 1e-14));
    } catch (const DivisorProximity& e) {
        CHECK(f.lattice().torus_distance(e.nearest(), cplx(0.5, 0.5)) < 1e-12);
    }
}

TEST_CASE("critical points") {
    SUBCASE("wp: half periods 1/2 and i/2") {
        const EllipticFunction f(wp_square_divisor());
        auto cps = critical_points(f);
        REQUIRE(cps.size() == 2);
        CHECK(std::abs(cps[0].point - cplx(0, 0.5)) < 1e-8);
        CHECK(std::abs(cps[1].point - cplx(0.5, 0)) < 1e-8);
        CHECK(cps[0].multiplicity == 1);
        CHECK(cps[1].multiplicity == 1);
    }
    SUBCASE("nuclear r = 2, 3, 4: two critical points") {
        for (int r = 2; r <= 4; ++r) {
            const EllipticFunction f(nuclear_divisor(r));
            int total = 0;
            for (auto& c : critical_points(f)) total += c.multiplicity;
            CHECK(total == 2);
        }
    }
    SUBCASE("E^1_3 member: four critical points") {
        const EllipticFunction f(nuclear_divisor(3));
        const double d = 0.02;
        const cplx w = std::polar(1.0, 2 * M_PI / 3);
        auto g = split_zero(f, 0.0, {d, d * w, d * w * w});
        int total = 0;
        for (auto& c : critical_points(g)) total += c.multiplicity;
        CHECK(total == 4);
    }
}

TEST_CASE("winding numbers") {
    for (int r = 2; r <= 4; ++r) {
        for (const auto& cfg : nuclear_configurations(r)) {
            const EllipticFunction f(cfg.divisor);
            auto w = winding_numbers(f);
            CHECK(w.consistent);
            CHECK(!(w.eta1 == 0 && w.eta2 == 0));
            CHECK(std::abs(w.eta1) <= 1);
            CHECK(std::abs(w.eta2) <= 1);
        }
    }
    // the nuclear (0, (1+i)/r) configuration, with lambda0 read in the
    // standard cell [0,1)^2: lambda0 = -(1+i)
    const EllipticFunction f(nuclear_divisor(3));
    auto w = winding_numbers(f, cplx(-0.25, -0.25));
    REQUIRE(w.consistent);
    CHECK(std::abs(w.lambda0 - cplx(-1, -1)) < 1e-12);
    CHECK(w.eta1 == 1);
    CHECK(w.eta2 == -1);
    CHECK_THROWS_AS(winding_numbers(f, cplx(0, -0.25)), InvalidInput);
}

TEST_CASE("nuclear configurations") {
    auto c2 = nuclear_configurations(2);
    REQUIRE(c2.size() == 8);
    int diag = 0;
    bool has_centre = false;
    for (auto& c : c2) {
        if (c.cls == NuclearClass::diagonal) {
            ++diag;
            if (std::abs(c.pole - cplx(0.5, 0.5)) < 1e-12) has_centre = true;
        }
    }
    CHECK(diag == 4);
    CHECK(has_centre);
    auto c3 = nuclear_configurations(3);
    bool has_third = false;
    for (auto& c : c3) {
        if (c.cls == NuclearClass::side && std::abs(c.pole - 1.0 / 3) < 1e-12) has_third = true;
        const cplx l = c.divisor.lambda0();
        CHECK(std::abs(l - c.lambda0) < 1e-12);
        const bool unit_step = std::abs(std::abs(l.real()) - 1) + std::abs(l.imag()) < 1e-12 ||
                               std::abs(l.real()) + std::abs(std::abs(l.imag()) - 1) < 1e-12 ||
                               std::abs(std::abs(l.real()) - 1) + std::abs(std::abs(l.imag()) - 1) < 1e-12;
        CHECK(unit_step);
        CHECK_NOTHROW(abel_normalize(c.divisor));
    }
    CHECK(has_third);
}

TEST_CASE("split_zero") {
    const EllipticFunction f3(nuclear_divisor(3));
    const cplx w = std::polar(1.0, 2 * M_PI / 3);
    auto g = split_zero(f3, 0.0, {0.01, 0.01 * w, 0.01 * w * w});
    CHECK(g.divisor().distinct_zeros().size() == 3);
    CHECK(g.divisor().distinct_poles().size() == 1);
    CHECK(std::abs(g.divisor().lambda0()) < 1e-12);

    const EllipticFunction f2(nuclear_divisor(2));
    auto h = split_zero(f2, 0.0, {0.01, -0.01});
    CHECK(h.divisor().distinct_zeros().size() == 2);

    // convergence to f as the split shrinks
    const cplx probes[] = {cplx(0.3, 0.1), cplx(0.7, 0.55), cplx(0.15, 0.8)};
    double prev = 1e300;
    for (double d : {1e-2, 1e-3, 1e-4}) {
        auto s = split_zero(f3, 0.0, {d, d * w, d * w * w});
        double err = 0;
        for (cplx z : probes) err = std::max(err, std::abs(s.value(z) - f3.value(z)) / std::abs(f3.value(z)));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-6);

    CHECK_THROWS_AS(split_zero(f3, 0.0, {0.01, 0.01, 0.0}), InvalidInput);
    CHECK_THROWS_AS(split_zero(f3, 0.0, {0.01, -0.01}), InvalidInput);
    CHECK_THROWS_AS(split_zero(f3, 0.0, {0.01, -0.005, -0.005}), InvalidInput);
}

TEST_CASE("divisor text format") {
    const std::string text =
        "# nuclear, r = 3\n"
        "  lattice =1,0 ;  0 , 1 \n"
        "zero = 0,0 x 3   # the zero\n"
        "pole=0.33333333333333331,0.33333333333333331 x 3\n";
    Divisor d = parse_divisor(text);
    CHECK(d.order() == 3);
    CHECK(serialize_divisor(d) ==
          "lattice = 1,0 ; 0,1\nzero = 0,0 x 3\npole = 0.33333333333333331,0.33333333333333331 x 3\n");
    Divisor again = parse_divisor(serialize_divisor(d));
    CHECK(again.poles()[0].t == d.poles()[0].t);
    CHECK_THROWS_AS(parse_divisor("zero = 0,0 x 2\n"), InvalidInput);
    CHECK_THROWS_AS(parse_divisor("lattice = 1,0 ; 0,1\nzero = 0,0 x two\npole = 0.5,0.5 x 2\n"), InvalidInput);
    CHECK_THROWS_AS(parse_divisor("lattice = 1,0 ; 0,1\nfoo = 1\n"), InvalidInput);
}
