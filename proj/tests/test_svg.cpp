#include <sstream>
#include <string>

#include "doctest.h"
#include "ellnewton/svg.hpp"

using namespace ellnewton;

namespace {

int count(const std::string& s, const std::string& needle) {
    int n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("portrait svg of wp") {
    const FlowField F{EllipticFunction(wp_square_divisor())};
    std::ostringstream os;
    PortraitOptions opt;
    opt.seeds = 3;
    write_portrait_svg(os, F, opt);
    const auto s = os.str();
    CHECK(s.rfind("<?xml", 0) == 0);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(count(s, "<svg") == 1);
    CHECK(count(s, "<circle") == 1);   // one attractor
    CHECK(count(s, "stroke=\"#c0392b\"") >= 4);  // unstable separatrices
    CHECK(s.find("nan") == std::string::npos);
}

TEST_CASE("graph svg of wp") {
    const FlowField F{EllipticFunction(wp_square_divisor())};
    const auto g = extract_graph(F);
    std::ostringstream os;
    write_graph_svg(os, F, g);
    const auto s = os.str();
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(count(s, "<polyline") >= 4);
    CHECK(s.find("nan") == std::string::npos);
}
