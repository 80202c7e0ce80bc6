#include "doctest.h"

#include "ellnewton/errors.hpp"
#include "ellnewton/lattice.hpp"

using namespace ellnewton;

TEST_CASE("reduce_periods keeps an already reduced pair") {
    auto [lat, m] = reduce_periods(Lattice::square());
    CHECK(lat.omega1() == cplx(1, 0));
    CHECK(lat.omega2() == cplx(0, 1));
    CHECK(m == UnimodularMatrix::identity());

    auto [lat2, m2] = reduce_periods(Lattice(2.0, cplx(0, 2)));
    CHECK(lat2.omega1() == cplx(2, 0));
    CHECK(lat2.omega2() == cplx(0, 2));
    CHECK(m2 == UnimodularMatrix::identity());
}

TEST_CASE("reduce_periods on (3+i, 2+i)") {
    const Lattice lat(cplx(3, 1), cplx(2, 1));
    auto [red, m] = reduce_periods(lat);
    CHECK(red.omega1() == cplx(1, 0));
    CHECK(red.omega2() == cplx(0, 1));
    CHECK(m.determinant() == 1);
    // 1 = (3+i) - (2+i), i = -2(3+i) + 3(2+i)
    CHECK(m == UnimodularMatrix{1, -1, -2, 3});
}

TEST_CASE("reduce_periods is idempotent with determinant +1") {
    const cplx pairs[][2] = {{cplx(3, 1), cplx(2, 1)},   {cplx(1, 0), cplx(7, 1)},
                             {cplx(5, 2), cplx(7, 3)},   {cplx(0.3, 0.1), cplx(-2.2, 1.7)},
                             {cplx(1, 0), cplx(0.5, 0.866025403784438)}};
    for (const auto& p : pairs) {
        const Lattice lat(p[0], p[1]);
        auto [red, m] = reduce_periods(lat);
        CHECK(m.determinant() == 1);
        // same lattice
        CHECK(lat.contains(red.omega1()));
        CHECK(lat.contains(red.omega2()));
        CHECK(red.contains(lat.omega1()));
        CHECK(red.contains(lat.omega2()));
        // matrix maps old basis to new
        CHECK(std::abs(double(m.p1) * lat.omega1() + double(m.p2) * lat.omega2() - red.omega1()) < 1e-12);
        CHECK(std::abs(double(m.q1) * lat.omega1() + double(m.q2) * lat.omega2() - red.omega2()) < 1e-12);
        // fundamental domain
        const cplx tau = red.tau();
        CHECK(tau.imag() > 0);
        CHECK(std::abs(tau) >= 1 - 1e-12);
        CHECK(tau.real() >= -0.5 - 1e-12);
        CHECK(tau.real() < 0.5);
        // minimality of |w1| over a window of lattice points
        for (int a = -6; a <= 6; ++a)
            for (int b = -6; b <= 6; ++b)
                if (a || b) CHECK(std::abs(lat.point(a, b)) >= std::abs(red.omega1()) - 1e-12);
        auto [again, m2] = reduce_periods(red);
        CHECK(again.omega1() == red.omega1());
        CHECK(again.omega2() == red.omega2());
        CHECK(m2 == UnimodularMatrix::identity());
    }
}

TEST_CASE("degenerate pairs are rejected") {
    CHECK_THROWS_AS(Lattice(cplx(0, 1), cplx(1, 0)), InvalidInput);
    CHECK_THROWS_AS(Lattice(cplx(1, 0), cplx(2, 0)), InvalidInput);
}

TEST_CASE("torus arithmetic") {
    const Lattice lat(cplx(3, 1), cplx(2, 1));
    const cplx z(0.3, 0.2);
    CHECK(lat.torus_distance(z, z + lat.omega1() - 2.0 * lat.omega2()) < 1e-12);
    auto t = lat.coords(lat.reduce(cplx(17.3, -4.1)));
    CHECK(t[0] >= 0);
    CHECK(t[0] < 1);
    CHECK(t[1] >= 0);
    CHECK(t[1] < 1);
    CHECK(lat.integer_coords(cplx(1, 0)) == std::array<long, 2>{1, -1});
}
