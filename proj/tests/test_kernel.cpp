#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgcalc/kernel.hpp"
#include "fgcalc/parse.hpp"
#include "test_support.hpp"

using namespace fgcalc;
using fgtest::cx;

namespace {
const std::map<std::string, Complex> kParams = {{"a", {0.3, 0}}, {"b", {0.2, 0}}, {"q", {0.4, 0}}};
}

TEST_CASE("five built-in pairs") {
    CHECK(pair_names().size() == 5);
    CHECK(builtin_pairs<Complex>(kParams).size() == 5);
}

TEST_CASE("difference pair telescopes exactly") {
    auto p = make_pair<Complex>("one-diff");
    PointSampler s(3);
    for (int i = 0; i < 200; ++i) {
        Complex x = s.point(0.1, 2), a = s.point(0.1, 2), b = s.point(0.1, 2), c = s.point(0.1, 2);
        // exact in floating point up to the associativity of the three sums
        CHECK(std::abs(kernel_residual(p, x, a, b, c)) <= 1e-15);
    }
}

TEST_CASE("(1-xy, x-y) kernel at a fixed point") {
    auto p = make_pair<Complex>("onexy-diff");
    CHECK(std::abs(kernel_residual(p, cx(0.3, 0.1), cx(0.7), cx(-0.2), cx(0, 0.5))) <= 1e-14);
}

TEST_CASE("broken pair leaves a residual") {
    auto p = make_pair<Complex>("broken");
    CHECK(std::abs(kernel_residual(p, cx(1), cx(1), cx(2), cx(3))) > 0.01);
    CHECK_FALSE(kernel_check(p, 100, 1, 1e-12).passed);
}

TEST_CASE("diff-diff pair has f = g") {
    auto p = make_pair<Complex>("diff-diff");
    PointSampler s(5);
    for (int i = 0; i < 100; ++i) {
        Complex x = s.point(0.1, 2), y = s.point(0.1, 2);
        CHECK(p.f(x, y) == p.g(x, y));
    }
}

TEST_CASE("algebraic pairs pass the kernel check") {
    for (auto name : {"one-diff", "diff-diff", "onexy-diff", "bibasic"}) {
        CAPTURE(name);
        auto rep = kernel_check(make_pair<Complex>(name, kParams), 1000, 42, 1e-12);
        CHECK(rep.passed);
        CHECK(rep.worst.size() == 4);
    }
}

TEST_CASE("theta pair passes the kernel check") {
    auto rep = kernel_check(make_pair<Wide>("theta", kParams), 50, 9, 1e-9, 0.5, 2.0);
    CHECK(rep.passed);
}

TEST_CASE("antisymmetry report") {
    CHECK(check_antisymmetry(make_pair<Complex>("one-diff"), 100, 1).max_residual == 0);
    auto bib = check_antisymmetry(make_pair<Complex>("bibasic", kParams), 200, 1, 1e-13);
    CHECK(bib.passed);
    // theta(y/x) = -(y/x) theta(x/y) makes y theta(xy) theta(x/y) antisymmetric after all
    auto th = check_antisymmetry(make_pair<Wide>("theta", kParams), 20, 1);
    CHECK(th.passed);
    auto p = make_pair<Complex>("theta", kParams);
    Complex x = cx(0.5), y = cx(0.7);
    CHECK(std::abs(p.g(x, y)) > 1e-4);
    CHECK(std::abs(p.g(x, y) + p.g(y, x)) <= 1e-12 * std::abs(p.g(x, y)));
}

TEST_CASE("pair parameters") {
    CHECK_THROWS_AS(make_pair<Complex>("bibasic"), FgError);
    try {
        make_pair<Complex>("theta");
    } catch (const FgError& e) {
        CHECK(e.kind() == ErrorKind::MissingParameter);
    }
    CHECK_THROWS_AS(parse_pair_spec("nope"), FgError);
    auto spec = parse_pair_spec("bibasic:a=0.2,b=0.1");
    CHECK(spec.name == "bibasic");
    CHECK(spec.params.at("b") == cx(0.1));
    CHECK(format_pair_spec(spec) == "bibasic:a=0.2,b=0.1");
}
