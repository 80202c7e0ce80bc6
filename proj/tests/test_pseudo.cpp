#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "ellnewton/errors.hpp"
#include "ellnewton/newton.hpp"
#include "ellnewton/pseudo.hpp"

using namespace ellnewton;

namespace {

std::vector<int> sorted_degrees(const CombinatorialMap& m) {
    auto d = m.degrees();
    std::sort(d.begin(), d.end());
    return d;
}

EnumConstraints single_face(int min_degree) {
    EnumConstraints c;
    c.faces = 1;
    c.loopless = true;
    c.min_degree = min_degree;
    return c;
}

}  // namespace

TEST_CASE("enumeration counts") {
    EnumConstraints newton;
    newton.loopless = true;
    newton.newtonian = true;
    CHECK(enumerate_maps(2, 4, newton).size() == 1);
    CHECK(enumerate_maps(2, 3, single_face(2)).size() == 1);
    CHECK(enumerate_maps(3, 4, single_face(2)).size() == 2);
    const auto gc = enumerate_maps(3, 4, single_face(1));
    REQUIRE(gc.size() == 3);
    std::set<std::vector<int>> degs;
    for (const auto& m : gc) degs.insert(sorted_degrees(m));
    CHECK(degs == std::set<std::vector<int>>{{1, 3, 4}, {2, 3, 3}, {2, 2, 4}});
    CHECK(enumerate_maps(2, 4, {.faces = 1}).empty());  // V - E + F != 0
    CHECK_THROWS_AS(enumerate_maps(3, 6, {.budget = 10}), UnsupportedConfiguration);
}

TEST_CASE("enumeration is deterministic and canonical") {
    const auto a = enumerate_maps(2, 4), b = enumerate_maps(2, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        for (std::size_t j = i + 1; j < a.size(); ++j) CHECK_FALSE(is_equivalent(a[i], a[j]));
    }
}

TEST_CASE("reduction of the order-2 graph") {
    const auto g2 = catalog("newton2");
    const auto tr = reduce(g2);
    REQUIRE(tr.size() == 1);
    CHECK(tr[0].rho == 2);
    CHECK(tr[0].L == 0);
    CHECK(tr[0].deleted.size() == 1);
    CHECK(tr[0].gcheck.face_count() == 1);
    CHECK(is_equivalent(tr[0].ghat, catalog("ghat2")).has_value());
    CHECK(reduce(g2, ReduceStrategy::all).size() == 1);
    CHECK_THROWS_AS(reduce(catalog("nuclear")), PropertyViolation);
}

TEST_CASE("reductions of order-3 graphs") {
    const auto names = catalog_newton(3);
    REQUIRE(names.size() >= 4);
    bool several = false;
    for (const auto& n : names) {
        const auto traces = reduce(catalog(n), ReduceStrategy::all);
        REQUIRE_FALSE(traces.empty());
        several = several || traces.size() >= 2;
        for (const auto& t : traces) {
            const bool ok = (t.rho == 3 && t.L == 0) || (t.rho == 2 && t.L == 1);
            CHECK(ok);
            CHECK(t.gcheck.vertices() == 3);
            CHECK(t.gcheck.edges() == 4);
            CHECK(t.gcheck.face_count() == 1);
            CHECK(t.ghat.edges() == t.rho + 1);
            const auto h = classify_hat(t.ghat);
            CHECK(int(h.walk.size()) == 2 * (t.rho + 1));
            // every Gcheck_3 is one of the three single-face forms
            bool known = false;
            for (const char* g : {"gcheck3.a", "gcheck3.b", "gcheck3.c"})
                known = known || is_equivalent(t.gcheck, catalog(g)).has_value();
            CHECK(known);
        }
    }
    CHECK(several);
}

TEST_CASE("hat classification") {
    const auto h2 = classify_hat(catalog("ghat2"));
    CHECK(h2.kind == HatCase::a1);
    REQUIRE(h2.subwalks.size() == 6);
    for (const auto& s : h2.subwalks) CHECK(s.size() == 1);

    const auto a1 = classify_hat(catalog("ghat3.a1"));
    CHECK(a1.kind == HatCase::a1);
    CHECK(a1.degrees == std::vector<int>{3, 3, 2});
    const auto a2 = classify_hat(catalog("ghat3.a2"));
    CHECK(a2.kind == HatCase::a2);
    REQUIRE(a2.subwalks.size() == 4);
    for (const auto& s : a2.subwalks) CHECK(s.size() >= 2);
    for (int i = 0; i < 4; ++i) CHECK(a2.inverse[i] == (i + 2) % 4);

    CHECK_THROWS_AS(classify_hat(catalog("gcheck3.a")), InvalidInput);
    CHECK_THROWS_AS(classify_hat(catalog("newton2")), InvalidInput);
}

TEST_CASE("catalog") {
    CHECK(is_newton_graph(catalog("newton2"), 2).newtonian);
    CHECK(sorted_degrees(catalog("gcheck3.a")) == std::vector<int>{1, 3, 4});
    CHECK(sorted_degrees(catalog("gcheck3.b")) == std::vector<int>{2, 3, 3});
    CHECK(sorted_degrees(catalog("gcheck3.c")) == std::vector<int>{2, 2, 4});
    const auto nuc = catalog("nuclear");
    CHECK(nuc.vertices() == 1);
    CHECK(nuc.edges() == 2);
    CHECK(nuc.face_count() == 1);
    CHECK_THROWS_AS(catalog("newton7"), InvalidInput);

    // stored files reproduce the generator
    for (const auto& e : build_catalog()) {
        INFO(e.name);
        CHECK(catalog(e.name) == e.map);
    }
    CHECK(catalog_names().size() == build_catalog().size());
}

TEST_CASE("catalog gate rejects a wrong file") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ellnewton_bad_catalog";
    fs::create_directories(dir / "catalog");
    std::ofstream(dir / "catalog" / "newton2.cmap") << "cmap newton2 darts=4\nalpha: 1-3 2-4\nsigma: (1 2 3 4)\n";
    const std::string old = data_directory();
    setenv("ELLNEWTON_DATA_DIR", dir.c_str(), 1);
    CHECK_THROWS_AS(catalog("newton2"), PropertyViolation);
    setenv("ELLNEWTON_DATA_DIR", old.c_str(), 1);
    fs::remove_all(dir);
    CHECK_NOTHROW(catalog("newton2"));
}

TEST_CASE("two-face merges") {
    bool pendant = false, without = false;
    for (const auto& n : catalog_newton(3)) {
        const auto merged = merged_two_face_graphs(catalog(n));
        CHECK_FALSE(merged.empty());
        for (const auto& t : merged) {
            CHECK(t.map.vertices() == 3);
            CHECK(t.map.edges() == 5);
            CHECK(t.map.face_count() == 2);
            for (int s : t.shared) CHECK((s == 1 || s == 2));
            CHECK_FALSE(t.shared.empty());
            // a pendant edge has the merged face on both sides
            if (t.has_pendant) CHECK_FALSE(t.edgewise_distinct);
            (t.has_pendant ? pendant : without) = true;
        }
    }
    CHECK(pendant);
    CHECK(without);
    CHECK_THROWS_AS(merged_two_face_graphs(catalog("newton2")), PropertyViolation);
}
