#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fgcalc/errors.hpp"
#include "fgcalc/identities.hpp"
#include "test_support.hpp"

using namespace fgcalc;
using fgtest::cx;

namespace {

VerifyReport run_case(const std::string& id, const std::map<std::string, Complex>& overrides = {}) {
    const auto& c = find_case(id);
    return verify(c, resolve_params(c, overrides));
}

const Check* find_check(const VerifyReport& r, const std::string& prefix) {
    for (const auto& c : r.checks)
        if (c.label.rfind(prefix, 0) == 0) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("corpus inventory") {
    CHECK(corpus().size() >= 15);
    auto list = case_ids();
    std::set<std::string> ids(list.begin(), list.end());
    CHECK(ids.size() == corpus().size());
    for (const auto& c : corpus()) {
        CHECK_FALSE(c.anchor.empty());
        CHECK(c.sweep_trials >= 20);
    }
    CHECK_THROWS_AS(find_case("no-such-case"), FgError);
}

TEST_CASE("expansion table rows") {
    std::set<std::string> linked;
    int stubs = 0;
    for (const auto& r : table_rows()) {
        if (r.implemented) {
            linked.insert(r.row);
            CHECK_NOTHROW(find_case(r.case_id));
        } else {
            ++stubs;
        }
    }
    CHECK(linked == std::set<std::string>{"II.8", "III.3", "III.4"});
    CHECK(stubs == static_cast<int>(table_rows().size()) - 3);
}

TEST_CASE("every case passes at its defaults") {
    for (const auto& c : corpus()) {
        CAPTURE(c.id);
        auto r = verify(c, c.defaults);
        CHECK(r.passed);
        CHECK_FALSE(r.divergent);
        CHECK(r.worst_rel_error <= (c.terminating ? 1e-10 : 1e-8));
    }
}

TEST_CASE("q-binomial theorem at a=0.7, z=0.25") {
    auto r = run_case("q-binomial");
    CHECK(r.worst_rel_error <= 1e-10);
}

TEST_CASE("finite q-binomial theorem at n=12") {
    auto r = run_case("finite-q-binomial");
    CHECK(r.worst_rel_error <= 1e-12);
}

TEST_CASE("Ramanujan sum inside its annulus") {
    auto r = run_case("ramanujan-1psi1");
    CHECK(r.worst_rel_error <= 1e-9);
}

TEST_CASE("Rogers 6phi5 sum") {
    auto r = run_case("rogers-6phi5");
    CHECK(r.worst_rel_error <= 1e-9);
}

TEST_CASE("Watson transformation with a terminating 4phi3") {
    auto r = run_case("watson", {{"N", cx(5)}});
    CHECK(r.passed);
    CHECK(r.worst_rel_error <= 1e-10);
}

TEST_CASE("Carlitz finite coefficient identity for n <= 10") {
    auto r = run_case("carlitz-lebesgue", {{"b", cx(0.2)}, {"x", cx(0.3)}, {"q", cx(0.5)}, {"n", cx(10)}});
    const Check* c = find_check(r, "finite coefficient identity");
    REQUIRE(c != nullptr);
    CHECK(c->rel_error <= 1e-10);
}

TEST_CASE("new bibasic identity for N <= 8, m <= 4") {
    for (int N = 0; N <= 8; ++N)
        for (int m = 0; m <= 4; ++m) {
            CAPTURE(N);
            CAPTURE(m);
            auto r = run_case("bibasic-new", {{"N", cx(N)}, {"m", cx(m)}});
            CHECK(r.passed);
            CHECK(r.worst_rel_error <= 1e-9);
        }
}

TEST_CASE("parameter overrides") {
    const auto& c = find_case("q-binomial");
    try {
        resolve_params(c, {{"zz", cx(1)}});
        FAIL("expected Usage");
    } catch (const FgError& e) {
        CHECK(e.kind() == ErrorKind::Usage);
    }
    try {
        resolve_params(c, {{"z", cx(1.5)}});
        FAIL("expected DomainViolation");
    } catch (const FgError& e) {
        CHECK(e.kind() == ErrorKind::DomainViolation);
    }
    CHECK(resolve_params(c, {{"z", cx(0.1)}}).at("z") == cx(0.1));
}

TEST_CASE("seeded sweeps") {
    SUBCASE("q-binomial, 50 trials") {
        auto s = sweep(find_case("q-binomial"), 1, 50);
        CHECK(s.passed);
        CHECK(s.trials == 50);
        CHECK(s.worst_rel_error <= 1e-8);
    }
    SUBCASE("q-Pfaff-Saalschutz, 20 trials") {
        auto s = sweep(find_case("q-pfaff-saalschutz"), 2, 20);
        CHECK(s.passed);
        CHECK(s.worst_rel_error <= 1e-10);
    }
    SUBCASE("new bibasic identity, 10 trials") {
        auto s = sweep(find_case("bibasic-new"), 3, 10);
        CHECK(s.passed);
        CHECK(s.worst_rel_error <= 1e-9);
    }
}

TEST_CASE("sweeps are reproducible") {
    auto a = sweep(find_case("heine"), 17, 10);
    auto b = sweep(find_case("heine"), 17, 10);
    CHECK(a.worst_rel_error == b.worst_rel_error);
    CHECK(a.worst_params == b.worst_params);
}

TEST_CASE("(f,g) interpretations") {
    for (const auto& c : corpus()) {
        if (!c.fg || !c.fg->implemented) continue;
        CAPTURE(c.id);
        auto r = verify_fg_interpretation(c, c.defaults);
        CHECK(r.passed);
    }
}

TEST_CASE("q-Gauss probe agreement") {
    const auto& c = find_case("q-gauss");
    auto r = verify_fg_interpretation(c, c.defaults);
    CHECK(r.value_error <= 1e-8);
}

TEST_CASE("Rogers-Fine coefficient pattern") {
    const auto& c = find_case("rogers-fine");
    auto r = verify_fg_interpretation(c, c.defaults);
    CHECK(r.max_coefficient_error <= 1e-9);
}

TEST_CASE("Gasper bibasic coefficients vanish past m") {
    const auto& c = find_case("gasper-bibasic");
    auto r = verify_fg_interpretation(c, resolve_params(c, {{"m", cx(3)}}));
    CHECK(r.coefficient_orders >= 8);
    CHECK(r.max_coefficient_error <= 1e-9);
    CHECK(r.passed);
}
