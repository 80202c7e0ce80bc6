#include <sstream>

#include "doctest.h"
#include "ellnewton/errors.hpp"
#include "ellnewton/experiment.hpp"

using namespace ellnewton;

TEST_CASE("experiment config") {
    std::istringstream in("# comment\nbase = nuclear3\nradii = 0.02, 0.03\nphase_steps = 4  # inline\n"
                          "inner_ratio = 0.3\ninner_steps = 2\nstop_when_complete = true\nrtol = 1e-10\n");
    const auto c = parse_experiment_config(in);
    CHECK(c.base == "nuclear3");
    CHECK(c.radii == std::vector<double>{0.02, 0.03});
    CHECK(c.phase_steps == 4);
    CHECK(c.inner_ratio == 0.3);
    CHECK(c.inner_steps == 2);
    CHECK(c.stop_when_complete);
    CHECK(c.integrate.rtol == 1e-10);
    CHECK_FALSE(c.at.has_value());

    std::istringstream bad1("radii = x\n"), bad2("stop_when_complete = maybe\n"), bad3("colour = 3\n"),
        bad4("no equals sign\n"), bad5("inner_ratio = 0.6\n");
    CHECK_THROWS_AS(parse_experiment_config(bad1), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_config(bad2), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_config(bad3), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_config(bad4), InvalidInput);
    CHECK_THROWS_AS(parse_experiment_config(bad5), InvalidInput);
}

TEST_CASE("small split3 grid") {
    std::istringstream in("radii = 0.02\nphase_steps = 4\ninner_steps = 2\n");
    const auto res = run_split3(parse_experiment_config(in));
    CHECK(res.samples.size() == 8);
    int extracted = 0;
    for (const auto& s : res.samples) {
        CHECK(s.deltas.size() == 3);
        const cplx sum = s.deltas[0] + s.deltas[1] + s.deltas[2];
        CHECK(std::abs(sum) < 1e-15);
        if (s.outcome.rfind("failed", 0) == 0) continue;
        ++extracted;
        CHECK(s.pseudo_checks);
        CHECK(s.outcome.rfind("gcheck3.", 0) == 0);
    }
    CHECK(extracted > 0);
    std::ostringstream os;
    write_split_report(os, res);
    CHECK(os.str().find("samples=8\n") != std::string::npos);
}
