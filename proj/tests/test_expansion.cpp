#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fgcalc/expansion.hpp"
#include "fgcalc/functions.hpp"
#include "test_support.hpp"

using namespace fgcalc;
using fgtest::cx;
using fgtest::rel;

namespace {

// b_i = q^i, x_i = A p^i with the pair (1-xy, x-y)
template <class C>
NodeSystem<C> gs_system(double A = 0.2, double p = 0.4, double q = 0.5) {
    return NodeSystem<C>(make_pair<C>("onexy-diff"), Sequence<C>::geometric(C(1.0, 0.0), C(q, 0.0)),
                         Sequence<C>::geometric(C(A, 0.0), C(p, 0.0)));
}

template <class C>
Fn<C> inv1mcx(double c) {
    C cc(c, 0.0), one(1.0, 0.0);
    return [cc, one](const C& x) { return one / (one - cc * x); };
}

template <class C>
C closed_G(int n, double c = 0.3, double A = 0.2, double p = 0.4, double q = 0.5) {
    C one(1.0, 0.0), cc(c, 0.0);
    if (n == 0) return one / ((one - cc) * (one - C(A, 0.0)));
    C s = n % 2 ? C(-1.0, 0.0) : one;
    return s * ipow(cc, n) * qpoch(C(A * p / c, 0.0), C(p, 0.0), n - 1) / qpoch(cc, C(q, 0.0), n + 1);
}

}  // namespace

TEST_CASE("coefficients of 1/(1-cx) match the closed form") {
    ExpansionSpec<Wide> spec{inv1mcx<Wide>(0.3), gs_system<Wide>(), 12, {}};
    auto G = expansion_coeffs(spec);
    for (int n = 0; n <= 12; ++n) CHECK(rel(G[static_cast<size_t>(n)], closed_G<Wide>(n)) <= 1e-10);
    // frozen mpmath values
    CHECK(rel(to_complex(G[0]), cx(1.7857142857142857143)) <= 1e-15);
    CHECK(rel(to_complex(G[1]), cx(-0.50420168067226890756)) <= 1e-15);
    CHECK(rel(to_complex(G[5]), cx(-0.0029091096617725137662)) <= 1e-15);
    CHECK(rel(to_complex(G[12]), cx(6.3490631863572038605e-7)) <= 1e-14);
}

TEST_CASE("constants and basis functions") {
    auto sys = gs_system<Wide>();
    Fn<Wide> c = [](const Wide&) { return Wide(2.5, 0.0); };
    auto G = expansion_coeffs(ExpansionSpec<Wide>{c, sys, 8, {}});
    CHECK(rel(G[0], Wide(Wide(2.5, 0.0) / sys.pair.f(sys.param(0), sys.node(0)))) < 1e-40);
    for (int n = 1; n <= 8; ++n) CHECK(mag(G[static_cast<size_t>(n)]) < 1e-40);
    for (int m = 0; m <= 5; ++m) {
        Fn<Wide> basis = [&sys, m](const Wide& x) {
            Wide r(1.0, 0.0);
            for (int i = 0; i < m; ++i) r *= sys.pair.g(sys.node(i), x);
            for (int i = 1; i <= m; ++i) r /= sys.pair.f(sys.param(i), x);
            return r;
        };
        ExpansionSpec<Wide> spec{basis, sys, 8, {}};
        auto cs = expansion_coefficients(spec);
        for (int n = 0; n <= 8; ++n) {
            Wide expect = n == m ? Wide(Wide(1.0, 0.0) / sys.pair.f(sys.param(m), sys.node(m))) : Wide{};
            CHECK(mag(Wide(cs.G[static_cast<size_t>(n)] - expect)) <= 1e-30);
        }
        auto lam = lambda_ratios(cs, 8);
        for (int k = m + 1; k < 8; ++k) CHECK_FALSE(lam[static_cast<size_t>(k)].defined);
        for (const auto& r : interpolation_check(spec)) CHECK(r.residual <= 1e-40 * std::max(r.scale, 1.0));
    }
}

TEST_CASE("partial sums interpolate") {
    // nodes 0.35 q^i keep the corpus functions away from their poles at x = 1
    NodeSystem<Wide> sys(make_pair<Wide>("onexy-diff"), Sequence<Wide>::geometric(Wide(0.35, 0.0), Wide(0.5, 0.0)),
                         Sequence<Wide>::geometric(Wide(0.2, 0.0), Wide(0.4, 0.0)));
    for (auto name : {"inv1mcx:c=0.3", "power:r=3", "exp-trunc:m=12", "qbinomial-F", "rogers-fine-F"}) {
        CAPTURE(name);
        ExpansionSpec<Wide> spec{make_function<Wide>(name), sys, 14, {}};
        auto G = expansion_coeffs(spec);
        CHECK(rel(partial_sums(G, sys, 0, Wide(0.7, 0.0)).S[0], spec.F(sys.node(0))) < 1e-40);
        for (const auto& r : interpolation_check(spec)) CHECK(r.residual <= 1e-10 * std::max(r.scale, 1.0));
    }
}

TEST_CASE("truncated expansion of 1/(1-cx) at x = 0.05") {
    ExpansionSpec<Deep> spec{inv1mcx<Deep>(0.3), gs_system<Deep>(), 20, {}};
    Deep S = partial_sum(spec, 20, Deep(0.05, 0.0));
    CHECK(mag(Deep(S - spec.F(Deep(0.05, 0.0)))) <= 1e-8);
}

TEST_CASE("lambda ratios") {
    ExpansionSpec<Deep> spec{inv1mcx<Deep>(0.3), gs_system<Deep>(), 26, {}};
    auto lam = lambda_ratios(spec);
    REQUIRE(lam[25].defined);
    CHECK(std::abs(to_complex(lam[25].value) - cx(0.7)) <= 0.05);
    ExpansionSpec<Deep> steep{inv1mcx<Deep>(0.6), gs_system<Deep>(), 26, {}};
    auto ls = lambda_ratios(steep);
    REQUIRE(ls[25].defined);
    CHECK(std::abs(to_complex(ls[25].value) - cx(0.4)) <= 0.05);
}

TEST_CASE("convergence diagnostic") {
    SUBCASE("geometric family converges to F") {
        ExpansionSpec<Deep> spec{inv1mcx<Deep>(0.3), gs_system<Deep>(0.3), 50, {}};
        auto rep = ismail_diagnostic(spec, Deep(0.1, 0.0), 1e-9);
        CHECK(rep.verdict == Verdict::Converged);
        CHECK(rep.reconstruction_error <= 1e-9);
        CHECK(rep.agrees);
    }
    SUBCASE("Rogers-Fine setup") {
        Deep q(0.5, 0.0), a(0.4, 0.0), z(0.6, 0.0);
        NodeSystem<Deep> sys(make_pair<Deep>("onexy-diff"), Sequence<Deep>::geometric(Deep(a * z * q), q),
                             Sequence<Deep>::geometric(Deep(Deep(1.0, 0.0) / q), q));
        ExpansionSpec<Deep> spec{make_function<Deep>("rogers-fine-F:a=0.4,z=0.6,q=0.5"), sys, 40, {}};
        auto rep = ismail_diagnostic(spec, Deep(0.3, 0.0), 1e-8);
        for (double r : rep.ratios) CHECK(r < 1);
        CHECK(rep.reconstruction_error <= 1e-8);
    }
    SUBCASE("sin(pi x) on integer nodes") {
        NodeSystem<Deep> sys(make_pair<Deep>("one-diff"), Sequence<Deep>::affine(Deep{}, Deep(1.0, 0.0)),
                             Sequence<Deep>::affine(Deep{}, Deep(1.0, 0.0)));
        ExpansionSpec<Deep> spec{make_function<Deep>("sinpi"), sys, 20, {}};
        for (const auto& g : expansion_coeffs(spec)) CHECK(mag(g) == 0);
        auto rep = ismail_diagnostic(spec, Deep(0.5, 0.0));
        CHECK(rep.verdict == Verdict::Converged);
        CHECK_FALSE(rep.agrees);
        CHECK(std::abs(rep.reconstruction_error - 1.0) < 1e-15);
        CHECK_FALSE(rep.nodes_have_finite_limit);
        CHECK(rep.note.find("no finite limit") != std::string::npos);
    }
}

TEST_CASE("Gessel-Stanton coefficients") {
    Deep A(0.2, 0.0), p(0.4, 0.0), q(0.5, 0.0);
    auto F = inv1mcx<Deep>(0.3);
    ExpansionSpec<Deep> spec{F, gs_system<Deep>(), 12, {}};
    auto G = expansion_coeffs(spec);
    for (int n = 0; n <= 12; ++n)
        CHECK(rel(gs_coeff(F, A, p, q, n), Deep(qpoch(q, q, n) * G[static_cast<size_t>(n)])) <= 1e-10);
    std::vector<Deep> G3;
    for (int n = 0; n <= 40; ++n) G3.push_back(gs_coeff(F, A, p, q, n));
    Deep x(0.05, 0.0);
    CHECK(mag(Deep(gs_reconstruct(G3, A, p, q, x, 40) - F(x))) <= 1e-8);
}

TEST_CASE("Liu coefficients") {
    Deep a(0.2, 0.0), q(0.5, 0.0);
    auto F = inv1mcx<Deep>(0.3);
    for (int n = 0; n <= 10; ++n) CHECK(rel(liu_from_gs(F, a, q, n), liu_coeff(F, a, q, n)) <= 1e-10);
    std::vector<Deep> G4;
    for (int n = 0; n <= 40; ++n) G4.push_back(liu_coeff(F, a, q, n));
    Deep x(0.05, 0.0);
    CHECK(mag(Deep(liu_reconstruct(G4, a, q, x, 40) - F(x))) <= 1e-8);
    Fn<Deep> one = [](const Deep&) { return Deep(1.0, 0.0); };
    // (aq;q)_{-1} = 1/(1-a); the (1-a) weight in the expansion restores F = 1
    CHECK(rel(liu_coeff(one, a, q, 0), Deep(Deep(1.0, 0.0) / (Deep(1.0, 0.0) - a))) < 1e-60);
    CHECK(rel(liu_reconstruct(std::vector<Deep>{liu_coeff(one, a, q, 0)}, a, q, Deep(0.05, 0.0), 0), Deep(1.0, 0.0)) < 1e-60);
    for (int n = 1; n <= 6; ++n) CHECK(mag(liu_coeff(one, a, q, n)) < 1e-60);
}

TEST_CASE("Carlitz coefficients") {
    Deep q(0.5, 0.0);
    Fn<Deep> one = [](const Deep&) { return Deep(1.0, 0.0); };
    CHECK(mag(Deep(carlitz_coeff(one, q, 0).value - Deep(1.0, 0.0))) < 1e-40);
    for (int n = 1; n <= 5; ++n) CHECK(mag(carlitz_coeff(one, q, n).value) < 1e-40);
    // x^3: C_k = (q;q)_k times the x^{k-3} coefficient of (x;q)_{k-1}, nonzero for every k >= 3
    Fn<Deep> cube = [](const Deep& x) { return x * x * x; };
    std::vector<Deep> Cc;
    for (int n = 0; n <= 40; ++n) Cc.push_back(carlitz_coeff(cube, q, n).value);
    for (int n = 0; n < 3; ++n) CHECK(mag(Cc[static_cast<size_t>(n)]) < 1e-40);
    for (int n = 3; n <= 12; ++n) {
        Deep expect = ((n - 3) % 2 ? Deep(-1.0, 0.0) : Deep(1.0, 0.0)) * qpoch(q, q, n) * ipow(q, binom2(n - 3)) * qbinom(n - 1, n - 3, q);
        CHECK(rel(Cc[static_cast<size_t>(n)], expect) < 1e-40);
    }
    Deep x(0.7, 0.0);
    CHECK(rel(carlitz_reconstruct(Cc, q, x, 40), cube(x)) < 1e-40);

    auto F = inv1mcx<Deep>(0.3);
    std::vector<Deep> Cf;
    for (int n = 0; n <= 40; ++n) Cf.push_back(carlitz_coeff(F, q, n).value);
    Deep x1(0.1, 0.0);
    CHECK(mag(Deep(carlitz_reconstruct(Cf, q, x1, 40) - F(x1))) <= 1e-8);
    for (int n = 0; n <= 10; ++n) CHECK_FALSE(carlitz_coeff(F, q, n).unstable);
}

TEST_CASE("K_{n,k} machinery") {
    QBase<Wide> base(Wide(0.5, 0.0));
    Wide c(0.3, 0.0);
    std::function<Wide(int)> a = [c](int r) { return r < 0 ? Wide{} : ipow(c, r); };
    Wide x(0.7, 0.0);
    for (int n = 1; n <= 8; ++n)
        for (int m = 0; m <= n; ++m)
            for (int k : {-2, 0, 3}) {
                Wide lhs = K_nk(a, base, n, k, x).value;
                CHECK(rel(K_nk_iterated(a, base, n, m, k, x), lhs) <= 1e-11);
            }
    Fn<Wide> F = inv1mcx<Wide>(0.3);
    for (int n = 0; n <= 8; ++n)
        CHECK(rel(qdiff_n(F, base.q, x, n), Wide(qpoch(base.q, base.q, n) * K_nk(a, base, n, n, x).value)) <= 1e-10);
    auto gen = K_generating_check(a, F, base, 3, Wide(0.06, 0.0), Wide(0.3, 0.0), 60);
    CHECK(gen.two_sided_error <= 1e-9);
    CHECK(gen.one_sided_error > 1e-6);
    CHECK(rel(to_complex(gen.closed), cx(1.6477749271271538478)) <= 1e-15);
}

TEST_CASE("K_{n,n}/a_n limit") {
    QBase<Wide> base(Wide(0.5, 0.0));
    Wide c(0.3, 0.0);
    std::function<Wide(int)> a = [c](int r) { return r < 0 ? Wide{} : ipow(c, r); };
    auto rep = knn_limit_check(a, c, base, Wide(0.5, 0.0), 30);
    CHECK(rep.final_gap <= 1e-6);
    CHECK(rel(rep.rows.back().limit, cx(1.3722319892620689816)) <= 1e-15);
    auto at0 = knn_limit_check(a, c, base, Wide{}, 10);
    for (const auto& r : at0.rows) CHECK(std::abs(r.ratio - cx(1)) < 1e-15);
    std::function<Wide(int)> b = [c](int r) { return r < 0 ? Wide{} : Wide(ipow(c, r) / Wide(r + 1.0, 0.0)); };
    auto rb = knn_limit_check(b, c, base, Wide(0.5, 0.0), 30);
    CHECK(rb.rows.back().gap < rb.rows[5].gap);
}
