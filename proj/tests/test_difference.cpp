#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fgcalc/difference.hpp"
#include "fgcalc/functions.hpp"
#include "test_support.hpp"

using namespace fgcalc;
using fgtest::cx;
using fgtest::rel;

namespace {

const std::map<std::string, Complex> kParams = {{"a", {0.3, 0}}, {"b", {0.2, 0}}, {"q", {0.4, 0}}};

template <class C>
NodeSystem<C> geometric_system(const std::string& pair, double A = 0.3) {
    return NodeSystem<C>(make_pair<C>(pair, kParams), Sequence<C>::geometric(C(1.0, 0.0), C(0.5, 0.0)),
                         Sequence<C>::geometric(C(A, 0.0), C(0.4, 0.0)));
}

template <class C>
Fn<C> basis_function(const NodeSystem<C>& sys, int m) {
    return [sys, m](const C& x) {
        C r(1.0, 0.0);
        for (int i = 0; i < m; ++i) r *= sys.pair.g(sys.node(i), x);
        for (int i = 1; i <= m; ++i) r /= sys.pair.f(sys.param(i), x);
        return r;
    };
}

}  // namespace

TEST_CASE("order zero divides by f(x_0, b_0)") {
    auto sys = geometric_system<Complex>("onexy-diff");
    Fn<Complex> F = [](const Complex& x) { return x * x + 2.0; };
    Complex expect = F(sys.node(0)) / sys.pair.f(sys.param(0), sys.node(0));
    CHECK(rel(fg_difference(F, sys, 0).value, expect) < 1e-15);
    CHECK(rel(fg_difference_recursive(F, sys, 0).value, expect) < 1e-15);
}

TEST_CASE("constants are annihilated") {
    Fn<Complex> one = [](const Complex&) { return cx(1); };
    for (auto name : {"one-diff", "diff-diff", "onexy-diff", "bibasic"}) {
        CAPTURE(name);
        auto sys = geometric_system<Complex>(name);
        for (int n = 1; n <= 10; ++n) {
            auto d = fg_difference(one, sys, n);
            CHECK(std::abs(d.value) <= 1e-12 * d.abs_sum);
        }
    }
}

TEST_CASE("delta property on every built-in pair") {
    for (auto name : {"one-diff", "diff-diff", "onexy-diff", "bibasic"}) {
        CAPTURE(name);
        auto sys = geometric_system<Wide>(name);
        for (int m = 0; m <= 6; ++m) {
            auto F = basis_function(sys, m);
            for (int n = 0; n <= 6; ++n) {
                auto d = fg_difference(F, sys, n);
                Wide expect = n == m ? Wide(Wide(1.0, 0.0) / sys.pair.f(sys.param(m), sys.node(m))) : Wide{};
                CHECK(mag(Wide(d.value - expect)) <= 1e-10 * std::max(d.abs_sum, 1.0));
            }
        }
    }
}

TEST_CASE("delta property on the theta pair") {
    auto sys = geometric_system<ThetaWide>("theta");
    for (int m = 0; m <= 4; ++m) {
        auto F = basis_function(sys, m);
        for (int n = 0; n <= 4; ++n) {
            auto d = fg_difference(F, sys, n);
            ThetaWide expect = n == m ? ThetaWide(ThetaWide(1.0, 0.0) / sys.pair.f(sys.param(m), sys.node(m))) : ThetaWide{};
            CHECK(mag(ThetaWide(d.value - expect)) <= 1e-10 * std::max(d.abs_sum, 1.0));
        }
    }
}

TEST_CASE("sin(pi x) vanishes on integer nodes") {
    NodeSystem<Complex> sys(make_pair<Complex>("one-diff"), Sequence<Complex>::affine(cx(0), cx(1)),
                            Sequence<Complex>::affine(cx(0), cx(1)));
    auto F = make_function<Complex>("sinpi");
    for (int n = 0; n <= 10; ++n) CHECK(fg_difference(F, sys, n).value == cx(0));
}

TEST_CASE("recursive and direct methods agree") {
    auto sys = geometric_system<Wide>("onexy-diff");
    Fn<Wide> F = [](const Wide& x) { return x * x * x; };
    for (int n = 0; n <= 8; ++n) {
        auto d = fg_difference(F, sys, n);
        auto r = fg_difference_recursive(F, sys, n);
        CHECK(mag(Wide(d.value - r.value)) <= 1e-11 * std::max(mag(d.value), 1e-16 * d.abs_sum));
    }
}

TEST_CASE("f = 1 recursion is the divided-difference recursion") {
    auto sys = geometric_system<Wide>("one-diff");
    auto F = make_function<Wide>("exp");
    NodeSystem<Wide> shifted(sys.pair, Sequence<Wide>::geometric(Wide(0.5, 0.0), Wide(0.5, 0.0)), sys.x);
    for (int n = 1; n <= 6; ++n) {
        Wide lhs = fg_difference(F, sys, n + 1).value;
        Wide rhs = (fg_difference(F, sys, n).value - fg_difference(F, shifted, n).value) / sys.pair.g(sys.node(n + 1), sys.node(0));
        CHECK(rel(to_complex(lhs), to_complex(rhs)) < 1e-9);
    }
}

TEST_CASE("Leibniz rule") {
    auto sys = geometric_system<Complex>("onexy-diff");
    auto F = make_function<Complex>("inv1mcx:c=0.3");
    Fn<Complex> H = [](const Complex& x) { return 1.0 + 0.5 * x * x; };
    Fn<Complex> FH = [&](const Complex& x) { return F(x) * H(x); };
    // n = 1 two-term form
    Complex two = H(sys.node(0)) * fg_difference(F, sys, 1).value + F(sys.node(1)) * fg_difference(H, sys, 1).value;
    CHECK(rel(two, fg_difference(FH, sys, 1).value) < 1e-13);
    for (int n = 0; n <= 8; ++n) {
        auto l = fg_leibniz(F, H, sys, n);
        auto d = fg_difference(FH, sys, n);
        CHECK(std::abs(l.value - d.value) <= 1e-12 * std::max(d.abs_sum, l.abs_sum));
    }
    Fn<Complex> one = [](const Complex&) { return cx(1); };
    for (int n = 0; n <= 6; ++n)
        CHECK(std::abs(fg_leibniz(F, one, sys, n).value - fg_difference(F, sys, n).value) <= 1e-13 * fg_difference(F, sys, n).abs_sum);
}

TEST_CASE("classical divided differences") {
    Fn<Complex> sq = [](const Complex& x) { return x * x; };
    CHECK(divided_difference<Complex>(sq, {cx(4)}) == cx(16));
    CHECK(std::abs(divided_difference<Complex>(sq, {cx(1), cx(2), cx(3)}) - cx(1)) < 1e-15);
    CHECK_THROWS_AS(divided_difference<Complex>(sq, {cx(1), cx(1)}), FgError);
    // the two routes sum in different orders, so compare them where roundoff is negligible
    auto F = make_function<Wide>("exp");
    std::vector<Wide> nodes = {Wide(0.1, 0.0), Wide(0.4, 0.0), Wide(-0.3, 0.0), Wide(0.9, 0.0), Wide(0.25, 0.0)};
    Wide zero(0.0, 0.0), one(1.0, 0.0);
    for (size_t n = 0; n < nodes.size(); ++n) {
        std::vector<Wide> xs(nodes.begin(), nodes.begin() + static_cast<long>(n) + 1);
        NodeSystem<Wide> sys(make_pair<Wide>("one-diff"), Sequence<Wide>::list(xs), Sequence<Wide>::affine(zero, one));
        Wide fg = (n % 2 ? -one : one) * fg_difference(F, sys, static_cast<int>(n)).value;
        CHECK(rel(to_complex(divided_difference(F, xs)), to_complex(fg)) <= 1e-13);
    }
}

TEST_CASE("backward differences approach the Taylor coefficient") {
    auto F = make_function<Complex>("exp");
    auto rep = backward_difference_limit(F, cx(0), 2, {0.1, 0.05, 0.025, 0.0125}, cx(1));
    for (size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].error < rep.rows[i - 1].error);
    CHECK(rep.rows.back().observed_order == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rep.rows.back().error < 0.02);
    Fn<Complex> cube = [](const Complex& x) { return 2.0 * x * x * x - x; };
    auto poly = backward_difference_limit(cube, cx(0.3), 3, {0.5, 0.1}, cx(12));
    for (const auto& r : poly.rows) CHECK(r.error < 1e-12);
    Fn<Complex> sine = [](const Complex& x) { return std::sin(x); };
    auto s = backward_difference_limit(sine, cx(0), 1, {1e-3, 1e-4}, cx(1));
    CHECK(s.rows.back().error < 1e-7);
}

TEST_CASE("first q-derivative") {
    Complex q = cx(0.5), x = cx(0.7, 0.2);
    Fn<Complex> c = [](const Complex&) { return cx(3); };
    Fn<Complex> sq = [](const Complex& t) { return t * t; };
    CHECK(qdiff(c, q, x) == cx(0));
    CHECK(rel(qdiff(sq, q, x), Complex((1.0 - q * q) * x)) < 1e-15);
    NodeSystem<Complex> sys(make_pair<Complex>("one-diff"), Sequence<Complex>::geometric(x, q), Sequence<Complex>::affine(cx(0), cx(1)));
    auto F = make_function<Complex>("inv1mcx:c=0.3");
    CHECK(rel(qdiff(F, q, x), Complex((q - 1.0) * fg_difference(F, sys, 1).value)) < 1e-14);
}

TEST_CASE("explicit q-derivative powers") {
    // the explicit sum carries weights up to q^{-n^2/2}, so these run in the wide tier
    Wide q(0.5, 0.0), x(0.9, 0.0), one(1.0, 0.0), c(0.3, 0.0);
    auto F = make_function<Wide>("inv1mcx:c=0.3");
    for (int n = 0; n <= 10; ++n)
        CHECK(rel(to_complex(qdiff_n(F, q, x, n)), to_complex(qdiff_iterated(F, q, x, n))) <= 1e-12);
    Fn<Wide> cubic = [one](const Wide& t) { return one - t + Wide(4.0, 0.0) * t * t * t; };
    for (int n = 4; n <= 8; ++n) CHECK(mag(qdiff_n(cubic, q, x, n)) <= 1e-12);
    // value at x = 1 for 1/(1-cx)
    for (int n = 0; n <= 12; ++n) {
        Wide closed = ipow(c, n) * qpoch(q, q, n) / qpoch(c, q, n + 1);
        CHECK(rel(to_complex(qdiff_n(F, q, one, n)), to_complex(closed)) <= 1e-11);
    }
}

TEST_CASE("difference on a shifted geometric window") {
    Fn<Complex> sq = [](const Complex& t) { return t * t; };
    auto r = qdiff_shifted(sq, cx(0.5), cx(1), 3, 2);
    CHECK(r.relative_gap() <= 1e-13);
    auto F = make_function<Complex>("exp");
    for (int n = 0; n <= 6; ++n) {
        CHECK(qdiff_shifted(F, cx(0.5), cx(0.8), n, 0).relative_gap() <= 1e-12);
        CHECK(qdiff_shifted(F, cx(0.5), cx(0.8), n, 3).relative_gap() <= 1e-12);
    }
}

TEST_CASE("q-Leibniz rule") {
    Complex q = cx(0.5), x = cx(1);
    auto F = make_function<Complex>("inv1mcx:c=0.3");
    Fn<Complex> sq = [&](const Complex& t) { return F(t) * F(t); };
    CHECK(rel(qdiff_leibniz(F, F, q, x, 1), qdiff(sq, q, x)) <= 1e-14);
    // frozen mpmath value of the 4th q-derivative of 1/(1-0.3x)^2 at 1
    CHECK(rel(qdiff_leibniz(F, F, q, x, 4), cx(0.027535025877027696644)) <= 1e-11);
    Fn<Complex> one = [](const Complex&) { return cx(1); };
    for (int n = 0; n <= 6; ++n) CHECK(rel(qdiff_leibniz(F, one, q, x, n), qdiff_n(F, q, x, n)) <= 1e-13);
}

TEST_CASE("coincident nodes are rejected") {
    NodeSystem<Complex> sys(make_pair<Complex>("one-diff"), Sequence<Complex>::list({cx(1), cx(2), cx(1)}),
                            Sequence<Complex>::affine(cx(0), cx(1)));
    Fn<Complex> F = [](const Complex& x) { return x; };
    try {
        fg_difference(F, sys, 2);
        FAIL("expected CoincidentNodes");
    } catch (const FgError& e) {
        CHECK(e.kind() == ErrorKind::CoincidentNodes);
    }
}
