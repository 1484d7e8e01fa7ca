// Acceptance run: one PASS/FAIL line per criterion, exit 0 only if all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "fgcalc/cli.hpp"
#include "fgcalc/expansion.hpp"
#include "fgcalc/functions.hpp"
#include "fgcalc/identities.hpp"
#include "fgcalc/inversion.hpp"
#include "fgcalc/kernel.hpp"

using namespace fgcalc;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

const std::map<std::string, Complex> kParams = {{"a", {0.3, 0}}, {"b", {0.2, 0}}, {"q", {0.4, 0}}};
const char* kAlgebraic[] = {"one-diff", "diff-diff", "onexy-diff", "bibasic"};

template <class C>
NodeSystem<C> geometric(const std::string& pair, double A = 0.3, double scale = 1.0) {
    return NodeSystem<C>(make_pair<C>(pair, kParams), Sequence<C>::geometric(C(scale, 0.0), C(0.5, 0.0)),
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

template <class C>
Fn<C> inv1mcx(double c) {
    C cc(c, 0.0), one(1.0, 0.0);
    return [cc, one](const C& x) { return one / (one - cc * x); };
}

// ---- 1 ------------------------------------------------------------------------
Outcome kernel_membership() {
    double worst = 0;
    bool ok = true;
    for (auto name : kAlgebraic) {
        auto r = kernel_check(make_pair<Complex>(name, kParams), 1000, 1, 1e-12);
        worst = std::max(worst, r.max_relative);
        ok = ok && r.passed;
    }
    auto th = kernel_check(make_pair<Wide>("theta", kParams), 100, 1, 1e-8);
    return {ok && th.passed, "algebraic " + sci(worst) + ", theta " + sci(th.max_relative)};
}

// ---- 2 ------------------------------------------------------------------------
Outcome matrix_inversion() {
    double worst = 0;
    bool ok = true;
    for (auto name : kAlgebraic) {
        auto v = verify_pair(build_pair(geometric<Wide>(name), 14), 1e-9);
        worst = std::max(worst, v.max_deviation());
        ok = ok && v.passed;
    }
    auto th = verify_pair(build_pair(geometric<ThetaWide>("theta"), 14), 1e-9);
    worst = std::max(worst, th.max_deviation());
    ok = ok && th.passed;
    auto broken = verify_pair(build_pair(geometric<Wide>("broken"), 14), 1e-9);
    ok = ok && broken.max_deviation() >= 1e-3;
    return {ok, "built-in " + sci(worst) + ", broken " + sci(broken.max_deviation())};
}

// ---- 3 ------------------------------------------------------------------------
Outcome gessel_stanton() {
    Wide A(0.3, 0.0), p(0.4, 0.0), q(0.5, 0.0);
    auto v = verify_pair(gessel_stanton_pair(A, p, q, 12), 1e-9);
    auto b = gessel_stanton_bridge(A, p, q, 12);
    return {v.passed && b.max_relative() <= 1e-9, "compose " + sci(v.max_deviation()) + ", bridge " + sci(b.max_relative())};
}

// ---- 4 ------------------------------------------------------------------------
Outcome operator_equivalences() {
    using C = Complex;
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<Fn<C>> fs = {make_function<C>("inv1mcx:c=0.3"), make_function<C>("exp"), make_function<C>("power:r=3")};
    double rec = 0, leib = 0, qd = 0, annih = 0;
    for (auto name : kAlgebraic) {
        auto sys = geometric<C>(name);
        for (const auto& F : fs) {
            for (int n = 0; n <= 12; ++n) {
                auto d = fg_difference(F, sys, n);
                auto r = fg_difference_recursive(F, sys, n);
                double scale = std::max({d.abs_sum, r.abs_sum, 1e-300});
                rec = std::max(rec, std::abs(d.value - r.value) / (1e-10 * scale));
            }
            Fn<C> H = fs[1];
            Fn<C> FH = [&](const C& x) { return F(x) * H(x); };
            for (int n = 0; n <= 10; ++n) {
                auto l = fg_leibniz(F, H, sys, n);
                auto d = fg_difference(FH, sys, n);
                leib = std::max(leib, std::abs(l.value - d.value) / (1e-10 * std::max({l.abs_sum, d.abs_sum, 1e-300})));
            }
        }
    }
    // weights reach q^{-n^2/2}; doubles cannot hold 1e-12 here
    auto F = make_function<Wide>("inv1mcx:c=0.3");
    for (int n = 0; n <= 10; ++n) {
        Wide q(0.5, 0.0), x(0.9, 0.0);
        Wide e = qdiff_n(F, q, x, n), it = qdiff_iterated(F, q, x, n);
        qd = std::max(qd, mag(Wide(e - it)) / mag(it));
    }
    // polynomials of degree d are annihilated by every order above d
    NodeSystem<C> geo(make_pair<C>("one-diff"), Sequence<C>::geometric(C(1), C(0.5)), Sequence<C>::affine(C(0), C(1)));
    NodeSystem<C> aff(make_pair<C>("one-diff"), Sequence<C>::affine(C(-1), C(0.3)), Sequence<C>::affine(C(0), C(1)));
    for (int deg = 0; deg <= 8; ++deg) {
        Fn<C> P = [deg](const C& x) {
            C s = 0;
            for (int j = 0; j <= deg; ++j) s += C(1.0 + j, 0.5 * j) * std::pow(x, j);
            return s;
        };
        for (const auto* sys : {&geo, &aff})
            for (int n = deg + 1; n <= deg + 3; ++n) {
                auto d = fg_difference(P, *sys, n);
                annih = std::max(annih, std::abs(d.value) / (64 * eps * d.abs_sum));
            }
    }
    bool ok = rec <= 1 && leib <= 1 && qd <= 1e-12 && annih <= 1;
    return {ok, "recursive " + sci(rec * 1e-10) + "*cond, Leibniz " + sci(leib * 1e-10) + "*cond, q-derivative " + sci(qd) +
                    ", annihilation " + sci(annih * 64 * eps) + "*sum|terms|"};
}

// ---- 5 ------------------------------------------------------------------------
template <class C>
double delta_worst(const NodeSystem<C>& sys, int top) {
    double worst = 0;
    for (int m = 0; m <= top; ++m) {
        auto F = basis_function(sys, m);
        for (int n = 0; n <= top; ++n) {
            auto d = fg_difference(F, sys, n);
            C expect = n == m ? C(C(1.0, 0.0) / sys.pair.f(sys.param(m), sys.node(m))) : C{};
            double scale = std::max({d.abs_sum, mag(expect), 1e-300});
            worst = std::max(worst, mag(C(d.value - expect)) / scale);
        }
    }
    return worst;
}

Outcome delta_property() {
    double worst = 0;
    for (auto name : kAlgebraic) worst = std::max(worst, delta_worst(geometric<Wide>(name), 10));
    worst = std::max(worst, delta_worst(geometric<ThetaWide>("theta"), 10));
    return {worst <= 1e-10, "max " + sci(worst) + "*cond"};
}

// ---- 6 ------------------------------------------------------------------------
Outcome interpolation_invariant() {
    const char* fns[] = {"inv1mcx:c=0.3", "power:r=2.5", "exp-trunc", "qbinomial-F", "qgauss-F", "rogers-fine-F", "ramanujan-F",
                         "heine-F", "jackson-F", "rogers-6phi5-F", "carlitz-lebesgue-F", "gasper-F"};
    double worst = 0;
    for (auto pair : {"one-diff", "onexy-diff"}) {
        auto sys = geometric<Wide>(pair, 0.3, 0.35);
        for (auto name : fns) {
            ExpansionSpec<Wide> spec{make_function<Wide>(name), sys, 14, {}};
            for (const auto& r : interpolation_check(spec)) worst = std::max(worst, r.residual / std::max(r.scale, 1e-300));
        }
    }
    return {worst <= 1e-10, "max " + sci(worst) + "*cond over 12 functions"};
}

// ---- 7 ------------------------------------------------------------------------
Outcome geometric_closed_forms() {
    using C = Deep;
    C c(0.3, 0.0), q(0.5, 0.0), p(0.4, 0.0), A(0.2, 0.0), one(1.0, 0.0);
    NodeSystem<C> sys(make_pair<C>("onexy-diff"), Sequence<C>::geometric(one, q), Sequence<C>::geometric(A, p));
    ExpansionSpec<C> spec{inv1mcx<C>(0.3), sys, 26, {}};
    auto cs = expansion_coefficients(spec);
    double coef = 0;
    for (int n = 0; n <= 12; ++n) {
        C closed = n == 0 ? C(one / ((one - c) * (one - A)))
                          : C((n % 2 ? -one : one) * ipow(c, n) * qpoch(C(A * p / c), p, n - 1) / qpoch(c, q, n + 1));
        coef = std::max(coef, mag(C(cs.G[static_cast<size_t>(n)] - closed)) / mag(closed));
    }
    auto lam = lambda_ratios(cs, 26);
    double lgap = lam[25].defined ? std::abs(to_complex(lam[25].value) - Complex(0.7)) : 1.0;
    double dq = 0;
    auto F = inv1mcx<C>(0.3);
    for (int n = 0; n <= 12; ++n) {
        C closed = ipow(c, n) * qpoch(q, q, n) / qpoch(c, q, n + 1);
        dq = std::max(dq, mag(C(qdiff_n(F, q, one, n) - closed)) / mag(closed));
    }
    return {coef <= 1e-10 && lgap <= 0.05 && dq <= 1e-11,
            "coefficients " + sci(coef) + ", |lambda_25 - (1-c)| " + sci(lgap) + ", q-derivative " + sci(dq)};
}

// ---- 8 ------------------------------------------------------------------------
Outcome reconstruction() {
    using C = Deep;
    C A(0.2, 0.0), p(0.4, 0.0), q(0.5, 0.0), a(0.2, 0.0), x(0.05, 0.0);
    auto F = inv1mcx<C>(0.3);
    std::vector<C> G3, G4, Cc;
    for (int n = 0; n <= 40; ++n) {
        G3.push_back(gs_coeff(F, A, p, q, n));
        G4.push_back(liu_coeff(F, a, q, n));
        Cc.push_back(carlitz_coeff(F, q, n).value);
    }
    C target = F(x);
    double e3 = mag(C(gs_reconstruct(G3, A, p, q, x, 40) - target));
    double e4 = mag(C(liu_reconstruct(G4, a, q, x, 40) - target));
    double ec = mag(C(carlitz_reconstruct(Cc, q, x, 40) - target));
    // gs_coeff vs the difference operator, Liu vs the substitution bridge, Carlitz vs the a -> 0 limit of Liu
    NodeSystem<C> sys(make_pair<C>("onexy-diff"), Sequence<C>::geometric(C(1.0, 0.0), q), Sequence<C>::geometric(A, p));
    auto G = expansion_coeffs(ExpansionSpec<C>{F, sys, 10, {}});
    double agree = 0;
    for (int n = 0; n <= 10; ++n) {
        C viaD = qpoch(q, q, n) * G[static_cast<size_t>(n)];
        agree = std::max(agree, mag(C(viaD - G3[static_cast<size_t>(n)])) / std::max(mag(viaD), 1e-300));
        C bridge = liu_from_gs(F, a, q, n);
        agree = std::max(agree, mag(C(bridge - G4[static_cast<size_t>(n)])) / std::max(mag(bridge), 1e-300));
        auto cc = carlitz_coeff(F, q, n);
        agree = std::max(agree, cc.discrepancy);
    }
    bool ok = e3 <= 1e-8 && e4 <= 1e-8 && ec <= 1e-8 && agree <= 1e-9;
    return {ok, "errors GS " + sci(e3) + ", Liu " + sci(e4) + ", Carlitz " + sci(ec) + "; routes agree " + sci(agree)};
}

// ---- 9 ------------------------------------------------------------------------
Outcome k_machinery() {
    using C = Wide;
    QBase<C> base(C(0.5, 0.0));
    C c(0.3, 0.0);
    std::function<C(int)> a = [c](int r) { return r < 0 ? C{} : ipow(c, r); };
    double rec = 0;
    C x(0.7, 0.0);
    for (int n = 1; n <= 8; ++n)
        for (int m = 0; m <= n; ++m)
            for (int k : {-3, 0, 2, 5}) {
                C lhs = K_nk(a, base, n, k, x).value;
                rec = std::max(rec, mag(C(K_nk_iterated(a, base, n, m, k, x) - lhs)) / mag(lhs));
            }
    auto gen = K_generating_check(a, inv1mcx<C>(0.3), base, 3, C(0.06, 0.0), C(0.3, 0.0), 60);
    auto lim = knn_limit_check(a, c, base, C(0.5, 0.0), 30);
    return {rec <= 1e-11 && gen.two_sided_error <= 1e-9 && lim.final_gap <= 1e-5,
            "recursion " + sci(rec) + ", generating function " + sci(gen.two_sided_error) + ", limit gap at n=30 " + sci(lim.final_gap)};
}

// ---- 10 -----------------------------------------------------------------------
Outcome identity_corpus() {
    struct Row {
        bool ok;
        double worst;
        std::string id;
    };
    std::vector<std::future<Row>> jobs;
    for (const auto& c : corpus())
        jobs.push_back(std::async(std::launch::async, [&c] {
            auto v = verify(c, c.defaults);
            double limit = c.terminating ? 1e-10 : 1e-8;
            bool ok = v.passed && v.worst_rel_error <= limit;
            auto s = sweep(c, 1, std::max(c.sweep_trials, 20));
            ok = ok && s.passed;
            return Row{ok, std::max(v.worst_rel_error, s.worst_rel_error), c.id};
        }));
    bool ok = corpus().size() >= 15;
    double worst = 0;
    std::string failed;
    for (auto& j : jobs) {
        auto r = j.get();
        worst = std::max(worst, r.worst);
        if (!r.ok) {
            ok = false;
            failed += " " + r.id;
        }
    }
    return {ok, std::to_string(corpus().size()) + " cases with sweeps, worst " + sci(worst) + (failed.empty() ? "" : ", failing:" + failed)};
}

// ---- 11 -----------------------------------------------------------------------
Outcome carlitz_finite() {
    const auto& c = find_case("carlitz-lebesgue");
    auto v = verify(c, resolve_params(c, {{"b", {0.2, 0}}, {"x", {0.3, 0}}, {"q", {0.5, 0}}, {"n", {10, 0}}}));
    for (const auto& ch : v.checks)
        if (ch.label.rfind("finite coefficient identity", 0) == 0) return {ch.rel_error <= 1e-10, "n <= 10, worst " + sci(ch.rel_error)};
    return {false, "finite coefficient check missing"};
}

// ---- 12 -----------------------------------------------------------------------
Outcome new_bibasic() {
    const auto& c = find_case("bibasic-new");
    double worst = 0;
    bool ok = true;
    for (int N = 0; N <= 8; ++N)
        for (int m = 0; m <= 4; ++m) {
            auto v = verify(c, resolve_params(c, {{"a", {0.3, 0}}, {"b", {0.15, 0}}, {"p", {0.4, 0}}, {"q", {0.5, 0}},
                                                  {"N", {double(N), 0}}, {"m", {double(m), 0}}}));
            for (const auto& ch : v.checks) worst = std::max(worst, ch.rel_error);
            ok = ok && !v.checks.empty();
        }
    return {ok && worst <= 1e-9, "N <= 8, m <= 4, worst " + sci(worst)};
}

// ---- 13 -----------------------------------------------------------------------
Outcome counterexample() {
    using C = Deep;
    NodeSystem<C> sys(make_pair<C>("one-diff"), Sequence<C>::affine(C{}, C(1.0, 0.0)), Sequence<C>::affine(C{}, C(1.0, 0.0)));
    ExpansionSpec<C> spec{make_function<C>("sinpi"), sys, 40, {}};
    bool zeros = true;
    for (const auto& g : expansion_coeffs(spec)) zeros = zeros && mag(g) == 0;
    auto rep = ismail_diagnostic(spec, C(0.5, 0.0));
    std::ostringstream out, err;
    int code = main_entry({"expand", "--pair", "one-diff", "--nodes", "affine:u=0,h=1", "--params", "affine:u=0,h=1", "--function",
                           "sinpi", "--probe", "0.5"},
                          out, err);
    bool ok = zeros && std::abs(rep.reconstruction_error - 1.0) <= 1e-15 && !rep.agrees && !rep.note.empty() && code == 1;
    return {ok, std::string("G(n) all zero: ") + (zeros ? "yes" : "no") + ", |F - S| at 1/2 = " + sci(rep.reconstruction_error) +
                    ", exit " + std::to_string(code)};
}

// ---- 14 -----------------------------------------------------------------------
Outcome determinism() {
    std::vector<std::vector<std::string>> configs = {
        {"corpus", "--sweep", "5", "--seed", "11", "--fg", "--json", "-"},
        {"kernel-check", "--pair", "all", "--samples", "200", "--seed", "5", "--json", "-"},
        {"expand", "--pair", "onexy-diff", "--max-order", "30", "--json", "-"},
    };
    for (const auto& args : configs) {
        std::ostringstream a, b, ea, eb;
        int ca = main_entry(args, a, ea), cb = main_entry(args, b, eb);
        if (ca != cb || a.str() != b.str() || a.str().empty()) return {false, "reports differ for '" + args[0] + "'"};
    }
    return {true, std::to_string(configs.size()) + " configurations, byte-identical reports"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double budget_s;  // 0 = no runtime bound
    };
    const std::vector<Criterion> all = {
        {1, "kernel membership", kernel_membership, 5},
        {2, "matrix inversion", matrix_inversion, 2},
        {3, "Gessel-Stanton pair", gessel_stanton, 0},
        {4, "operator equivalences", operator_equivalences, 0},
        {5, "delta property", delta_property, 0},
        {6, "interpolation invariant", interpolation_invariant, 0},
        {7, "geometric closed forms", geometric_closed_forms, 0},
        {8, "expansion reconstruction", reconstruction, 0},
        {9, "K_{n,k} machinery", k_machinery, 0},
        {10, "identity corpus", identity_corpus, 60},
        {11, "Carlitz-Lebesgue finite identity", carlitz_finite, 0},
        {12, "new bibasic identity", new_bibasic, 0},
        {13, "sin(pi x) counterexample", counterexample, 0},
        {14, "determinism", determinism, 0},
    };
    int failures = 0;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = c.budget_s == 0 || secs < c.budget_s;
        bool pass = o.passed && in_time;
        if (!pass) ++failures;
        char timing[64];
        if (c.budget_s > 0) std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", secs, c.budget_s);
        else std::snprintf(timing, sizeof timing, "%.2fs", secs);
        std::printf("%s %2d  %-34s %s  [%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
    return failures == 0 ? 0 : 1;
}
