#include "fgcalc/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "fgcalc/difference.hpp"
#include "fgcalc/expansion.hpp"
#include "fgcalc/functions.hpp"
#include "fgcalc/inversion.hpp"
#include "fgcalc/kernel.hpp"
#include "fgcalc/parse.hpp"
#include "fgcalc/qcore.hpp"

namespace fgcalc {

namespace data {
extern const char corpus_json[];
}

namespace {

using Params = std::map<std::string, Complex>;

constexpr double kTerminatingTolerance = 1e-10;
constexpr double kSweepMargin = 0.8;

struct Loaded {
    std::vector<IdentityCase> cases;
    std::vector<FgDescriptor> rows;
};

const Loaded& loaded() {
    static const Loaded L = [] {
        Loaded out;
        auto j = nlohmann::json::parse(data::corpus_json);
        std::map<std::string, FgDescriptor> table;
        for (const auto& r : j.at("table_rows")) {
            FgDescriptor d;
            d.row = r.at("row").get<std::string>();
            d.name = r.at("name").get<std::string>();
            d.pair = r.at("pair").get<std::string>();
            d.x_n = r.at("x_n").get<std::string>();
            d.b_n = r.at("b_n").get<std::string>();
            d.case_id = r.value("case", std::string());
            d.implemented = !d.case_id.empty();
            out.rows.push_back(d);
        }
        for (const auto& e : j.at("cases")) {
            IdentityCase c;
            c.id = e.at("id").get<std::string>();
            c.title = e.at("title").get<std::string>();
            c.description = e.at("description").get<std::string>();
            c.anchor = e.at("anchor").get<std::string>();
            c.terminating = e.at("terminating").get<bool>();
            c.tolerance = e.at("tolerance").get<double>();
            c.truncation_eps = e.value("truncation_eps", 1e-20);
            c.max_terms = e.value("max_terms", 4000);
            c.sweep_trials = e.value("sweep_trials", 20);
            for (const auto& [k, v] : e.at("defaults").items()) c.defaults[k] = parse_complex(v.get<std::string>());
            for (const auto& [k, v] : e.at("domain").items()) {
                ParamDomain d;
                d.name = k;
                if (v.contains("int")) {
                    d.integer = true;
                    d.min = v.at("int").at(0).get<double>();
                    d.max = v.at("int").at(1).get<double>();
                } else {
                    d.min = v.at("min").get<double>();
                    d.max = v.at("max").get<double>();
                    d.phase = v.value("phase", 0.0);
                }
                c.domain.push_back(d);
            }
            if (e.contains("fg")) {
                const auto& f = e.at("fg");
                FgDescriptor d;
                d.row = f.value("row", std::string());
                d.name = f.value("name", c.title);
                d.pair = f.at("pair").get<std::string>();
                d.x_n = f.at("x_n").get<std::string>();
                d.b_n = f.at("b_n").get<std::string>();
                d.case_id = c.id;
                d.implemented = true;
                d.max_order = f.value("max_order", 40);
                c.fg = d;
            }
            out.cases.push_back(std::move(c));
        }
        return out;
    }();
    return L;
}

bool near_pole(const Complex& v, const Complex& q, int depth = 80) {
    Complex t = v;
    for (int k = 0; k < depth; ++k) {
        if (std::abs(1.0 - t) < 1e-9) return true;
        t *= q;
    }
    return false;
}

bool is_integer(const Complex& z) { return z.imag() == 0 && std::floor(z.real()) == z.real(); }

// Series checks run in Wide; finite alternating sums run in Deep because
// their terms cancel across many orders of magnitude at sweep corners.
enum class Part { Series, Finite, All };

bool series_only(const std::string& id) {
    return id == "q-binomial" || id == "q-gauss" || id == "rogers-fine" || id == "ramanujan-1psi1" || id == "carlitz-lebesgue";
}

template <class W>
struct Tier {
    struct Args {
        const Params& m;
        W operator()(const char* k) const { return from_complex<W>(m.at(k)); }
        int i(const char* k) const { return static_cast<int>(std::llround(m.at(k).real())); }
    };

    static W one() { return W(1.0, 0.0); }
    static W sgn(long long k) { return k % 2 ? W(-1.0, 0.0) : one(); }

    static double rel_error(const W& lhs, const W& rhs) {
        double d = mag(W(lhs - rhs));
        double s = mag(rhs);
        return s > 0 ? d / s : d;
    }

    static Check make_check(const std::string& label, const W& lhs, const W& rhs, double tol) {
        Check c;
        c.label = label;
        c.lhs = to_complex(lhs);
        c.rhs = to_complex(rhs);
        c.rel_error = rel_error(lhs, rhs);
        c.tolerance = tol;
        c.passed = c.rel_error <= tol;
        return c;
    }

    // Keeps the worst of several comparisons under one label.
    struct Worst {
        std::string label;
        double tol;
        Check best{};
        bool any = false;
        Worst(std::string l, double t) : label(std::move(l)), tol(t) {}
        void add(const W& lhs, const W& rhs) {
            Check c = make_check(label, lhs, rhs, tol);
            if (!any || !(c.rel_error <= best.rel_error)) best = c;
            any = true;
        }
    };

    struct Q {
        const QBase<W>& base;
        W inf(const W& a) const { return qpoch_inf(a, base).value; }
        W phi_(const std::vector<W>& up, const std::vector<W>& lo, const W& z) const { return phi(up, lo, base, z).value; }
    };

    static W snap(const W& fac) { return is_negligible(fac, RealOf<W>(1)) ? W(0.0, 0.0) : fac; }

    // Very-well-poised series with the (1 - a q^{2n})/(1 - a) factor carried by the term ratio.
    static W vwp(const W& a, const std::vector<W>& ups, const std::vector<W>& los, const W& z, const QBase<W>& base) {
        const W& q = base.q;
        W t = one(), qn = one();
        int next = 0;
        std::function<W(int)> term = [&](int i) {
            while (next < i) {
                W r = (one() - a * qn * qn * q * q) / (one() - a * qn * qn) * snap(one() - a * qn) / (one() - q * qn) * z;
                for (const auto& u : ups) r *= snap(one() - u * qn);
                for (const auto& l : los) r /= one() - l * qn;
                t *= r;
                qn *= q;
                ++next;
            }
            return t;
        };
        return sum_series(term, base).value;
    }

    template <class Fn>
    static W finite_sum(int lo, int hi, const Fn& f) {
        W s{};
        for (int k = lo; k <= hi; ++k) s += f(k);
        return s;
    }

    // ---- the corpus evaluators -------------------------------------------------

    static std::vector<Check> evaluate(const IdentityCase& ic, const Params& pm, const QBase<W>& base, double tol,
                                       double tol_finite, Part part, std::string& note) {
        const bool S = part != Part::Finite, Fi = part != Part::Series;
        std::vector<Check> out;
        if (!S && series_only(ic.id)) return out;
        Args P{pm};
        Q E{base};
        const W q = base.q;
        const std::string& id = ic.id;
        auto qb = [&](long long n, long long k) { return qbinom(n, k, q, true); };

        if (id == "q-binomial") {
            W a = P("a"), z = P("z");
            out.push_back(make_check("1phi0 series vs product", E.phi_({a}, {}, z), W(E.inf(a * z) / E.inf(z)), tol));
        } else if (id == "finite-q-binomial") {
            int n = P.i("n");
            W x = P("x");
            W l1 = finite_sum(0, n, [&](int k) { return sgn(k) * ipow(q, binom2(k)) * qb(n, k) * ipow(x, k); });
            out.push_back(make_check("finite sum vs (x;q)_n", l1, qpoch(x, q, n), tol_finite));
            W l2 = finite_sum(0, n, [&](int k) {
                return sgn(k) * ipow(q, binom2(k + 1) - static_cast<long long>(n) * k) * qb(n, k) * qpoch(x, q, k);
            });
            out.push_back(make_check("inverse form vs x^n", l2, ipow(x, n), tol_finite));
            // The same inverse pair through the difference operator on nodes q^{-i}.
            NodeSystem<W> sys(make_pair<W>("one-diff"), Sequence<W>::geometric(one(), W(one() / q)),
                              Sequence<W>::affine(W{}, one()));
            std::vector<W> X;
            for (int k = 0; k <= n; ++k) X.push_back(ipow(sys.node(k), n));
            auto Y = apply_difference_system(sys, X, n);
            Worst wc{"difference coefficients vs (-1)^k q^(k^2-nk) [n,k]", tol_finite};
            for (int k = 0; k <= n; ++k)
                wc.add(Y[static_cast<size_t>(k)], W(sgn(k) * ipow(q, static_cast<long long>(k) * k - static_cast<long long>(n) * k) * qb(n, k)));
            out.push_back(wc.best);
            auto back = invert_sum_system(sys, Y, n);
            Worst wr{"inversion round trip", tol_finite};
            for (int k = 0; k <= n; ++k) wr.add(back[static_cast<size_t>(k)], X[static_cast<size_t>(k)]);
            out.push_back(wr.best);
            out.push_back(make_check("expansion at x reproduces x^n", partial_sums(Y, sys, n, x).S.back(), ipow(x, n), tol_finite));
        } else if (id == "q-gauss") {
            W a = P("a"), b = P("b"), c = P("c"), x = P("x");
            out.push_back(make_check("2phi1 at z = c/(ab)", E.phi_({a, b}, {c}, W(c / (a * b))),
                                     W(E.inf(W(c / a)) * E.inf(W(c / b)) / (E.inf(c) * E.inf(W(c / (a * b))))), tol));
            out.push_back(make_check("2phi1 with b = 1/x", E.phi_({a, W(one() / x)}, {c}, W(c * x / a)),
                                     W(E.inf(W(c / a)) * E.inf(W(c * x)) / (E.inf(c) * E.inf(W(c * x / a)))), tol));
        } else if (id == "q-gauss-finite") {
            int n = P.i("n");
            W a = P("a"), c = P("c");
            W l1 = finite_sum(0, n, [&](int k) {
                return sgn(k) * qb(n, k) * ipow(q, binom2(n - k)) * qpoch(W(c / a), q, k) / qpoch(c, q, k);
            });
            out.push_back(make_check("terminating q-Gauss", l1, W(ipow(q, binom2(n)) * qpoch(a, q, n) * ipow(W(c / a), n) / qpoch(c, q, n)), tol_finite));
            W l2 = finite_sum(0, n, [&](int k) { return sgn(n - k) * qb(n, k) * ipow(q, binom2(n - k)) / qpoch(c, q, k); });
            out.push_back(make_check("a -> infinity limit", l2, W(ipow(q, 2 * binom2(n)) * ipow(c, n) / qpoch(c, q, n)), tol_finite));
        } else if (id == "rogers-fine") {
            W a = P("a"), x = P("x"), z = P("z");
            W lhs = E.phi_({a, q}, {x}, z);
            std::function<W(int)> term = [&](int k) {
                return (one() - a * z * ipow(q, 2 * k)) * ipow(q, 2 * binom2(k)) * qpoch(a, q, k) * qpoch(W(a * z * q / x), q, k) *
                       ipow(W(x * z), k) / (qpoch(z, q, k + 1) * qpoch(x, q, k));
            };
            out.push_back(make_check("both sides", lhs, sum_series(term, base).value, tol));
        } else if (id == "ramanujan-1psi1") {
            W a = P("a"), b = P("b"), x = P("x");
            int N = P.i("N");
            auto prod = [&](const W& y) {
                return E.inf(q) * E.inf(W(y / a)) * E.inf(W(a * x)) * E.inf(W(q / (a * x))) /
                       (E.inf(y) * E.inf(W(q / a)) * E.inf(x) * E.inf(W(y / (a * x))));
            };
            auto s = psi_bilateral_adaptive<W>({a}, {b}, base, x);
            out.push_back(make_check("bilateral sum vs product", s.total.value, prod(b), tol));
            if (!s.total.converged) note += "bilateral window reached 400 before both tails fell below the threshold; ";
            W y = ipow(q, N + 1);
            auto t = psi_bilateral_adaptive<W>({a}, {y}, base, x);
            out.push_back(make_check("b = q^(N+1) sum vs product", t.total.value, prod(y), tol));
            Check v = make_check("nonzero negative-index terms", W(static_cast<double>(t.negative_terms), 0.0),
                                 W(static_cast<double>(N), 0.0), 0.0);
            v.passed = t.negative_vanished && t.negative_terms == N;
            out.push_back(v);
        } else if (id == "carlitz-lebesgue") {
            W a = P("a"), b = P("b"), x = P("x");
            int nmax = P.i("n"), kk = P.i("k");
            W lhs = E.phi_({x}, {W(b * x)}, a);
            W t = one();
            int next = 0;
            std::function<W(int)> term = [&](int k) {
                while (next < k) {
                    W qk = ipow(q, next);
                    t *= (one() - b * qk) / ((one() - q * qk) * (one() - a * qk)) * x;
                    ++next;
                }
                return t;
            };
            W rhs = E.inf(a) * E.inf(x) / E.inf(W(b * x)) * sum_series(term, base).value;
            out.push_back(make_check("Lebesgue identity", lhs, rhs, tol));
            Fn<W> F = make_function<W>(FunctionSpec{"carlitz-lebesgue-F", {{"b", pm.at("b")}, {"x", pm.at("x")}, {"q", pm.at("q")}}});
            Worst wf{"finite coefficient identity, n <= " + std::to_string(nmax), tol_finite};
            for (int n = 0; n <= nmax; ++n) {
                W s = finite_sum(0, n, [&](int k) {
                    W bk = b * ipow(q, k);
                    return sgn(k) * ipow(q, binom2(k + 1) - static_cast<long long>(n) * k) * qb(n, k) * qpoch(bk, q, n - 1) * F(bk);
                });
                wf.add(s, W(ipow(W(b * x), n) / (one() - b * ipow(q, 2 * n - 1))));
            }
            out.push_back(wf.best);
            W bq = b * ipow(q, kk);
            W fin = finite_sum(0, kk, [&](int i) { return sgn(i) * ipow(q, binom2(i)) * qb(kk, i) * ipow(W(b * x), i) / qpoch(bq, q, i); });
            out.push_back(make_check("F(b q^k) as a finite sum", F(bq), fin, tol_finite));
        } else if (id == "q-pfaff-saalschutz") {
            int n = P.i("n");
            W a = P("a"), b = P("b"), c = P("c");
            W lhs = E.phi_({ipow(q, -n), W(a * ipow(q, n)), W(a * q / (b * c))}, {W(a * q / b), W(a * q / c)}, q);
            W rhs = ipow(W(a * q / (b * c)), n) * qpoch(b, q, n) * qpoch(c, q, n) / (qpoch(W(a * q / b), q, n) * qpoch(W(a * q / c), q, n));
            out.push_back(make_check("balanced 3phi2", lhs, rhs, tol_finite));
        } else if (id == "rogers-6phi5") {
            W a = P("a"), b = P("b"), c = P("c"), d = P("d");
            int n = P.i("n");
            W aq = a * q;
            if (S) {
                W lhs = vwp(a, {b, c, d}, {W(aq / b), W(aq / c), W(aq / d)}, W(aq / (b * c * d)), base);
                W rhs = E.inf(aq) * E.inf(W(aq / (c * d))) * E.inf(W(aq / (b * d))) * E.inf(W(aq / (b * c))) /
                        (E.inf(W(aq / b)) * E.inf(W(aq / c)) * E.inf(W(aq / d)) * E.inf(W(aq / (b * c * d))));
                out.push_back(make_check("nonterminating 6phi5", lhs, rhs, tol));
            }
            if (!Fi) return out;
            W qn = ipow(q, n);
            W l2 = vwp(a, {b, c, W(one() / qn)}, {W(aq / b), W(aq / c), W(aq * qn)}, W(aq * qn / (b * c)), base);
            W r2 = qpoch(aq, q, n) * qpoch(W(aq / (b * c)), q, n) / (qpoch(W(aq / b), q, n) * qpoch(W(aq / c), q, n));
            out.push_back(make_check("terminating 6phi5, d = q^-n", l2, r2, tol_finite));
        } else if (id == "watson") {
            W a = P("a"), b = P("b"), c = P("c"), d = P("d"), f = P("f");
            int N = P.i("N");
            W aq = a * q, e = ipow(q, -N);
            W lhs = vwp(a, {b, c, d, e, f}, {W(aq / b), W(aq / c), W(aq / d), W(aq / e), W(aq / f)},
                        W(aq * aq / (b * c * d * e * f)), base);
            W pre = E.inf(aq) * E.inf(W(aq / (e * f))) * E.inf(W(aq / (d * f))) * E.inf(W(aq / (d * e))) /
                    (E.inf(W(aq / d)) * E.inf(W(aq / e)) * E.inf(W(aq / f)) * E.inf(W(aq / (d * e * f))));
            W rhs = pre * E.phi_({W(aq / (b * c)), d, e, f}, {W(d * e * f / a), W(aq / b), W(aq / c)}, q);
            out.push_back(make_check("8phi7 with e = q^-N", lhs, rhs, tol_finite));
            // Finite form: the fifth numerator slot is q^-n, f plays the role of e.
            int n = N;
            W qn = ipow(q, n);
            W l2 = vwp(a, {b, c, d, f, W(one() / qn)}, {W(aq / b), W(aq / c), W(aq / d), W(aq / f), W(aq * qn)},
                       W(aq * aq * qn / (b * c * d * f)), base);
            W r2 = qpoch(aq, q, n) * qpoch(W(aq / (d * f)), q, n) / (qpoch(W(aq / d), q, n) * qpoch(W(aq / f), q, n)) *
                   E.phi_({W(aq / (b * c)), d, f, W(one() / qn)}, {W(aq / b), W(aq / c), W(d * f / (a * qn))}, q);
            out.push_back(make_check("finite form with q^-n", l2, r2, tol_finite));
        } else if (id == "heine") {
            W a = P("a"), b = P("b"), c = P("c"), z = P("z");
            int n = P.i("n");
            if (S) {
                W rhs = E.inf(b) * E.inf(W(a * z)) / (E.inf(c) * E.inf(z)) * E.phi_({W(c / b), z}, {W(a * z)}, b);
                out.push_back(make_check("first Heine transformation", E.phi_({a, b}, {c}, z), rhs, tol));
            }
            if (!Fi) return out;
            W l1 = finite_sum(0, n, [&](int k) { return sgn(k) * ipow(q, binom2(k)) * qb(n, k) * ipow(c, k); });
            out.push_back(make_check("finite sum vs (c;q)_n", l1, qpoch(c, q, n), tol_finite));
            W l2 = finite_sum(0, n, [&](int k) {
                return sgn(k) * ipow(q, binom2(k + 1) - static_cast<long long>(n) * k) * qb(n, k) * qpoch(c, q, k);
            });
            out.push_back(make_check("inverse form vs c^n", l2, ipow(c, n), tol_finite));
        } else if (id == "jackson") {
            W a = P("a"), b = P("b"), c = P("c"), z = P("z"), d = P("d");
            int n = P.i("n"), m = P.i("m");
            if (S) {
                W rhs = E.inf(W(a * z)) / E.inf(z) * E.phi_({a, W(c / b)}, {c, W(a * z)}, W(b * z));
                out.push_back(make_check("2phi1 to 2phi2", E.phi_({a, b}, {c}, z), rhs, tol));
            }
            if (!Fi) return out;
            W l = finite_sum(0, n, [&](int k) { return sgn(n - k) * qb(n, k) * ipow(q, binom2(k)) / qpoch(W(d * ipow(q, n - k)), q, m + 1); });
            W r = qb(m + n, m) * ipow(d, n) * ipow(q, binom2(n)) * qpoch(q, q, n) / qpoch(d, q, m + n + 1);
            out.push_back(make_check("finite identity", l, r, tol_finite));
        } else if (id == "gasper-bibasic") {
            W a = P("a"), b = P("b"), x = P("x"), p = P("p");
            int m = P.i("m");
            W l = finite_sum(0, m, [&](int k) {
                W pk = ipow(p, k), qk = ipow(q, k);
                return (one() - a * pk * qk) * (one() - b * pk / qk) / ((one() - a) * (one() - b)) * qpoch(a, p, k) * qpoch(b, p, k) *
                       qpoch(x, q, k) * qpoch(W(a / (b * x)), q, k) * qk /
                       (qpoch(q, q, k) * qpoch(W(a * q / b), q, k) * qpoch(W(a * p / x), p, k) * qpoch(W(b * p * x), p, k));
            });
            W r = qpoch(W(a * p), p, m) * qpoch(W(b * p), p, m) * qpoch(W(x * q), q, m) * qpoch(W(a * q / (b * x)), q, m) /
                  (qpoch(q, q, m) * qpoch(W(a * q / b), q, m) * qpoch(W(a * p / x), p, m) * qpoch(W(b * p * x), p, m));
            out.push_back(make_check("indefinite bibasic sum", l, r, tol_finite));
        } else if (id == "bibasic-new") {
            W a = P("a"), b = P("b"), p = P("p");
            int N = P.i("N"), m = P.i("m");
            long long m1 = m + 1;
            W pq = p * q;
            W qm1 = ipow(q, m1);
            W pref = qb(N + m1, m1);
            // Denominators cleared by prod_j (1 - a q^{m+1+j}/b), so a q^{m+1}/b = 1 is harmless.
            W l1 = pref * finite_sum(0, N, [&](int K) {
                W clear = one();
                for (int j = 0; j <= N; ++j)
                    if (j != K) clear *= one() - a * ipow(q, m1 + j) / b;
                return sgn(K) * ipow(q, binom2(K + 1)) * qb(N, K) * (one() - qm1) / (one() - qm1 * ipow(q, K)) *
                       (one() - a * ipow(q, 2 * K + 2 * m1) / b) * clear * qpoch(W(a * ipow(pq, m1) * ipow(q, K)), p, N) *
                       qpoch(W(b * ipow(W(p / q), m1) * ipow(q, -K)), p, N) / qpoch(W(a * ipow(q, 2 * m1 + K) / b), q, N + 1);
            });
            W r1 = qpoch(W(a * ipow(p, m1)), p, N) * qpoch(W(b * ipow(p, m1)), p, N);
            out.push_back(make_check("terminating bibasic identity", l1, r1, tol_finite));
            W l2 = pref * ipow(q, -N * m1) * finite_sum(0, N, [&](int K) {
                return sgn(K) * ipow(q, binom2(K + 1) - static_cast<long long>(N) * K) * qb(N, K) * (one() - qm1) /
                       (one() - qm1 * ipow(q, K)) * qpoch(W(a * ipow(pq, m1) * ipow(q, K)), p, N);
            });
            W r2 = qpoch(W(a * ipow(p, m1)), p, N);
            out.push_back(make_check("b -> 0 limit", l2, r2, tol_finite));
            Fn<W> Fd = [&](const W& t) { return qpoch(W(a * ipow(pq, m1) * t), p, N) / (one() - t * qm1); };
            W l3 = qdiff_n(Fd, q, one(), N);
            W r3 = ipow(q, N * m1) * r2 / ((one() - qm1) * pref);
            out.push_back(make_check("q-derivative form at x = 1", l3, r3, tol_finite));
            // The form before clearing denominators; singular when some a q^j/b = 1.
            int n = N + m + 1;
            bool singular = false;
            for (int j = 1; j <= 2 * n + 2; ++j)
                if (is_negligible(W(one() - a * ipow(q, j) / b), RealOf<W>(1e6))) singular = true;
            if (singular) {
                note += "uncleared form skipped: a q^j/b = 1 for some j at these parameters; ";
            } else {
                W l4 = finite_sum(m + 1, n, [&](int k) {
                    return sgn(k - m - 1) * ipow(q, binom2(k) + binom2(m + 1) - static_cast<long long>(m) * k) * qb(n, k) * qb(k - 1, m) *
                           (one() - a * ipow(q, 2 * k) / b) / (one() - a * ipow(q, k) / b) *
                           qpoch(W(a * ipow(p, m1) * ipow(q, k)), p, n - m - 1) * qpoch(W(b * ipow(p, m1) * ipow(q, -k)), p, n - m - 1) /
                           qpoch(W(a * ipow(q, m + k + 1) / b), q, n - m);
                });
                W r4 = qpoch(W(a * ipow(p, m1)), p, n - m - 1) * qpoch(W(b * ipow(p, m1)), p, n - m - 1) / qpoch(W(a * qm1 / b), q, n - m);
                out.push_back(make_check("uncleared form", l4, r4, tol_finite));
            }
        } else if (id == "geometric-family") {
            W c = P("c"), A = P("A"), p = P("p"), x = P("x");
            int n = P.i("n");
            W target = one() / (one() - c * x);
            Fn<W> F = [&](const W& y) { return one() / (one() - c * y); };
            if (S) {
                W t = one();
                int next = 0;
                // term k of the sum over k >= 1, built from its ratio
                std::function<W(int)> term = [&](int k) {
                    if (k == 0) return W{};
                    while (next < k) {
                        int j = next;  // advancing from j to j+1
                        if (j == 0) {
                            t = one();
                        } else {
                            W pj = ipow(p, j), qj = ipow(q, j);
                            t /= one() - A * pj * qj;
                        }
                        W pj1 = ipow(p, j + 1), qj1 = ipow(q, j + 1);
                        t *= (one() - A * pj1 * qj1) * (one() - A / c * ipow(p, j)) / (one() - c * qj1) * (x - ipow(q, j)) * c /
                             (one() - A * pj1 * x);
                        ++next;
                    }
                    return t;
                };
                W s = one() / (one() - c) + sum_series(term, base).value / ((one() - c) * (one() - A / c));
                out.push_back(make_check("expansion of 1/(1-cx)", s, target, tol));
                std::function<W(int)> term0 = [&](int k) {
                    W r = one();
                    for (int i = 0; i < k; ++i) r *= (x - ipow(q, i)) * c / (one() - c * ipow(q, i + 1));
                    return r;
                };
                out.push_back(make_check("A = 0 case", sum_series(term0, base).value, W((one() - c) * target), tol));
            }
            if (!Fi) return out;
            Worst wg{"Gessel-Stanton coefficients vs closed form", tol_finite};
            for (int k = 0; k <= n; ++k) {
                W closed = k == 0 ? W(one() / ((one() - c) * (one() - A)))
                                  : W(qpoch(q, q, k) * sgn(k) * ipow(c, k) * qpoch(W(A * p / c), p, k - 1) / qpoch(c, q, k + 1));
                wg.add(gs_coeff(F, A, p, q, k), closed);
            }
            out.push_back(wg.best);
            Worst wd{"D_q^n at x = 1", tol_finite};
            for (int k = 1; k <= n; ++k) wd.add(qdiff_n(F, q, one(), k), W(ipow(c, k) * qpoch(q, q, k) / qpoch(c, q, k + 1)));
            if (n >= 1) out.push_back(wd.best);
        } else {
            fail(ErrorKind::Usage, "no evaluator for case '" + id + "'");
        }
        return out;
    }

    // The value the direct route assigns to the identity at the probe.
    static W direct_value(const IdentityCase& ic, const Params& pm, const QBase<W>& base) {
        Args P{pm};
        Q E{base};
        const W q = base.q;
        const std::string& id = ic.id;
        if (id == "q-binomial") return E.phi_({P("a")}, {}, P("z"));
        if (id == "finite-q-binomial") {
            int n = P.i("n");
            W x = P("x");
            return finite_sum(0, n, [&](int k) {
                return sgn(k) * ipow(q, binom2(k + 1) - static_cast<long long>(n) * k) * qbinom(n, k, q) * qpoch(x, q, k);
            });
        }
        if (id == "q-gauss") {
            W a = P("a"), c = P("c"), x = P("x");
            return E.phi_({a, W(one() / x)}, {c}, W(c * x / a));
        }
        if (id == "rogers-fine") {
            W a = P("a"), x = P("x"), z = P("z");
            std::function<W(int)> term = [&](int k) {
                return (one() - a * z * ipow(q, 2 * k)) * ipow(q, 2 * binom2(k)) * qpoch(a, q, k) * qpoch(W(a * z * q / x), q, k) *
                       ipow(W(x * z), k) / (qpoch(z, q, k + 1) * qpoch(x, q, k));
            };
            return sum_series(term, base).value;
        }
        if (id == "carlitz-lebesgue") {
            Fn<W> F = make_function<W>(FunctionSpec{"carlitz-lebesgue-F", {{"b", pm.at("b")}, {"x", pm.at("x")}, {"q", pm.at("q")}}});
            return F(P("a"));
        }
        if (id == "rogers-6phi5") {
            W a = P("a"), b = P("b"), c = P("c"), d = P("d"), aq = a * q;
            return vwp(a, {b, c, d}, {W(aq / b), W(aq / c), W(aq / d)}, W(aq / (b * c * d)), base);
        }
        if (id == "heine") {
            W a = P("a"), b = P("b"), c = P("c"), z = P("z");
            return E.phi_({W(c / b), z}, {W(a * z)}, b);
        }
        if (id == "jackson") {
            W a = P("a"), b = P("b"), c = P("c"), z = P("z");
            return E.phi_({a, W(c / b)}, {c, W(a * z)}, W(b * z));
        }
        if (id == "gasper-bibasic") {
            W a = P("a"), b = P("b"), x = P("x"), p = P("p");
            int m = P.i("m");
            return finite_sum(0, m, [&](int k) {
                W pk = ipow(p, k), qk = ipow(q, k);
                return (one() - a * pk * qk) * (one() - b * pk / qk) / ((one() - a) * (one() - b)) * qpoch(a, p, k) * qpoch(b, p, k) *
                       qpoch(x, q, k) * qpoch(W(a / (b * x)), q, k) * qk /
                       (qpoch(q, q, k) * qpoch(W(a * q / b), q, k) * qpoch(W(a * p / x), p, k) * qpoch(W(b * p * x), p, k));
            });
        }
        if (id == "geometric-family") return one() / (one() - P("c") * P("x"));
        fail(ErrorKind::Usage, "case '" + id + "' has no (f,g) interpretation");
    }

};

// ---- admissibility ---------------------------------------------------------

// margin < 1 shrinks every |v| < 1 convergence condition; sweeps use it to
// stay away from boundaries where truncation needs thousands of terms.
std::optional<std::string> check_domain(const IdentityCase& ic, const Params& pm, double margin = 1.0) {
    auto get = [&](const char* k) { return pm.at(k); };
    auto has = [&](const char* k) { return pm.count(k) > 0; };
    for (const auto& d : ic.domain)
        if (d.integer) {
            Complex v = pm.at(d.name);
            if (!is_integer(v)) return d.name + " must be an integer";
            if (v.real() < 0) return d.name + " must be nonnegative";
        }
    for (const char* base : {"q", "p"})
        if (has(base)) {
            double m = std::abs(get(base));
            if (!(m > 0 && m < 1)) return std::string(base) + " must satisfy 0 < |" + base + "| < 1";
        }
    Complex q = has("q") ? get("q") : Complex(0.5, 0);
    auto pole = [&](Complex v, const std::string& what) -> std::optional<std::string> {
        if (near_pole(v, q)) return what + " hits q^-k";
        return std::nullopt;
    };
    auto lt1 = [&](Complex v, const std::string& what) -> std::optional<std::string> {
        if (!(std::abs(v) < margin)) return "convergence needs |" + what + "| < " + (margin < 1 ? std::to_string(margin) : "1");
        return std::nullopt;
    };
    auto nonzero = [&](Complex v, const std::string& what) -> std::optional<std::string> {
        if (std::abs(v) < 1e-12) return what + " must be nonzero";
        return std::nullopt;
    };
    std::vector<std::optional<std::string>> r;
    const std::string& id = ic.id;
    if (id == "q-binomial") {
        r = {lt1(get("z"), "z")};
    } else if (id == "finite-q-binomial") {
        r = {nonzero(get("x"), "x")};
    } else if (id == "q-gauss") {
        Complex a = get("a"), b = get("b"), c = get("c"), x = get("x");
        r = {nonzero(a, "a"), nonzero(b, "b"), nonzero(x, "x"), lt1(c / (a * b), "c/(ab)"), lt1(c * x / a, "cx/a"),
             pole(c, "c"), pole(c * x / a, "cx/a"), pole(c / (a * b), "c/(ab)")};
    } else if (id == "q-gauss-finite") {
        r = {nonzero(get("a"), "a"), pole(get("c"), "c")};
    } else if (id == "rogers-fine") {
        Complex x = get("x"), z = get("z");
        r = {nonzero(x, "x"), lt1(z, "z"), pole(x, "x"), pole(z, "z")};
    } else if (id == "ramanujan-1psi1") {
        Complex a = get("a"), b = get("b"), x = get("x");
        if (std::abs(a) < 1e-12 || std::abs(x) < 1e-12) return "a and x must be nonzero";
        if (!(std::abs(b / a) < margin * std::abs(x) && std::abs(x) < margin)) return "convergence needs |b/a| < |x| < 1";
        r = {pole(b, "b"), pole(q / a, "q/a"), pole(x, "x"), pole(b / (a * x), "b/(ax)"), pole(q / (a * x), "q/(ax)")};
    } else if (id == "carlitz-lebesgue") {
        Complex a = get("a"), b = get("b"), x = get("x");
        r = {lt1(x, "x"), lt1(a, "a"), pole(a, "a"), pole(b * x, "bx"), nonzero(b, "b")};
        for (int k = 0; k <= 2 * static_cast<int>(get("n").real()) + 2; ++k)
            if (std::abs(1.0 - b * std::pow(q, k - 1)) < 1e-9) return "b q^(2n-1) = 1 for some n";
    } else if (id == "q-pfaff-saalschutz") {
        Complex a = get("a"), b = get("b"), c = get("c");
        r = {nonzero(b, "b"), nonzero(c, "c"), pole(a * q / b, "aq/b"), pole(a * q / c, "aq/c")};
    } else if (id == "rogers-6phi5") {
        Complex a = get("a"), b = get("b"), c = get("c"), d = get("d");
        r = {nonzero(b, "b"), nonzero(c, "c"), nonzero(d, "d"), lt1(a * q / (b * c * d), "aq/(bcd)"), pole(a * q, "aq"),
             pole(a * q / b, "aq/b"), pole(a * q / c, "aq/c"), pole(a * q / d, "aq/d"), pole(a * q / (b * c * d), "aq/(bcd)")};
        if (std::abs(1.0 - a) < 1e-9) r.push_back("a must differ from 1");
    } else if (id == "watson") {
        Complex a = get("a"), b = get("b"), c = get("c"), d = get("d"), f = get("f");
        r = {nonzero(a, "a"), nonzero(b, "b"), nonzero(c, "c"), nonzero(d, "d"), nonzero(f, "f"), pole(a * q / b, "aq/b"),
             pole(a * q / c, "aq/c"), pole(a * q / d, "aq/d"), pole(a * q / f, "aq/f"), pole(a * q, "aq")};
        int N = static_cast<int>(get("N").real());
        Complex e = std::pow(q, -N);
        Complex qn = std::pow(q, N);
        for (int k = 0; k <= N; ++k) {
            Complex qk = std::pow(q, k);
            if (std::abs(1.0 - d * e * f / a * qk) < 1e-9 || std::abs(1.0 - d * f / (a * qn) * qk) < 1e-9)
                return "lower parameter of the 4phi3 hits q^-k";
        }
        r.push_back(pole(a * q / (d * e * f), "aq/(def)"));
    } else if (id == "heine") {
        Complex a = get("a"), b = get("b"), c = get("c"), z = get("z");
        r = {lt1(z, "z"), lt1(b, "b"), nonzero(b, "b"), pole(c, "c"), pole(a * z, "az"), pole(z, "z")};
    } else if (id == "jackson") {
        Complex a = get("a"), b = get("b"), c = get("c"), z = get("z");
        r = {lt1(z, "z"), nonzero(b, "b"), pole(c, "c"), pole(a * z, "az"), pole(get("d"), "d")};
    } else if (id == "gasper-bibasic") {
        Complex a = get("a"), b = get("b"), x = get("x"), p = get("p");
        r = {nonzero(b, "b"), nonzero(x, "x"), pole(a * q / b, "aq/b")};
        if (std::abs(1.0 - a) < 1e-9 || std::abs(1.0 - b) < 1e-9) return "a and b must differ from 1";
        if (near_pole(a * p / x, p) || near_pole(b * p * x, p)) return "ap/x or bpx hits p^-k";
    } else if (id == "bibasic-new") {
        Complex b = get("b");
        r = {nonzero(b, "b")};
        if (get("N").real() > 8 || get("m").real() > 4) return "N <= 8 and m <= 4";
    } else if (id == "geometric-family") {
        Complex c = get("c"), A = get("A"), x = get("x");
        r = {nonzero(c, "c"), lt1(c, "c"), lt1(c * x, "cx"), pole(c * q, "cq")};
        if (std::abs(1.0 - A / c) < 1e-9) return "A must differ from c";
        if (near_pole(A * get("p") * x, get("p"))) return "Apx hits p^-k";
    }
    for (const auto& e : r)
        if (e) return e;
    return std::nullopt;
}

// ---- (f,g) interpretation setups in the deep tier ----------------------------

template <class C>
struct FgSetup {
    NodeSystem<C> sys;
    Fn<C> F;
    std::function<C(int)> closed;
    C probe;
};

template <class C>
FgSetup<C> fg_setup(const IdentityCase& ic, const Params& pm) {
    auto P = [&](const char* k) { return from_complex<C>(pm.at(k)); };
    auto I = [&](const char* k) { return static_cast<int>(std::llround(pm.at(k).real())); };
    const C one(1.0, 0.0);
    const C q = P("q");
    auto sg = [](long long k) { return k % 2 ? C(-1.0, 0.0) : C(1.0, 0.0); };
    auto fn = [&](const std::string& name, std::initializer_list<const char*> keys) {
        FunctionSpec s{name, {}};
        for (const char* k : keys) s.params[k] = pm.at(k);
        return make_function<C>(s);
    };
    auto geo = [](const C& s, const C& r) { return Sequence<C>::geometric(s, r); };
    auto idx = Sequence<C>::affine(C{}, one);
    const std::string& id = ic.id;
    if (id == "q-binomial") {
        C z = P("z");
        return {NodeSystem<C>(make_pair<C>("one-diff"), geo(one, C(one / q)), idx), fn("qbinomial-F", {"z", "q"}),
                [=](int k) { return ipow(q, binom2(k)) * ipow(z, k) / qpoch(q, q, k); }, P("a")};
    }
    if (id == "finite-q-binomial") {
        int n = I("n");
        FunctionSpec s{"power", {{"r", Complex(n, 0)}}};
        return {NodeSystem<C>(make_pair<C>("one-diff"), geo(one, C(one / q)), idx), make_function<C>(s),
                [=](int k) {
                    return k > n ? C{} : C(sg(k) * ipow(q, static_cast<long long>(k) * k - static_cast<long long>(n) * k) * qbinom(n, k, q));
                },
                P("x")};
    }
    if (id == "q-gauss") {
        C a = P("a"), c = P("c");
        return {NodeSystem<C>(make_pair<C>("one-diff"), geo(one, q), idx), fn("qgauss-F", {"a", "c", "q"}),
                [=](int k) { return sg(k) * qpoch(a, q, k) * ipow(C(c / a), k) / (qpoch(q, q, k) * qpoch(c, q, k)); }, P("x")};
    }
    if (id == "rogers-fine") {
        C a = P("a"), z = P("z");
        return {NodeSystem<C>(make_pair<C>("onexy-diff"), geo(C(a * z * q), q), geo(C(one / q), q)), fn("rogers-fine-F", {"a", "z", "q"}),
                [=](int k) { return sg(k) * qpoch(a, q, k) * ipow(q, static_cast<long long>(k) * (k - 1)) * ipow(z, k) / qpoch(z, q, k + 1); },
                P("x")};
    }
    if (id == "carlitz-lebesgue") {
        C b = P("b"), x = P("x");
        return {NodeSystem<C>(make_pair<C>("onexy-diff"), geo(b, q), geo(C(one / q), q)), fn("carlitz-lebesgue-F", {"b", "x", "q"}),
                [=](int k) { return sg(k) * ipow(x, k) / ((one - b * ipow(q, 2 * k - 1)) * qpoch(q, q, k)); }, P("a")};
    }
    if (id == "rogers-6phi5") {
        C a = P("a"), b = P("b"), c = P("c");
        return {NodeSystem<C>(make_pair<C>("onexy-diff"), geo(one, q), geo(a, q)), fn("rogers-6phi5-F", {"a", "b", "c", "q"}),
                [=](int k) {
                    C aq = a * q;
                    return sg(k) * qpoch(a, q, k) * qpoch(b, q, k) * qpoch(c, q, k) * ipow(C(aq / (b * c)), k) /
                           (qpoch(q, q, k) * qpoch(C(aq / b), q, k) * qpoch(C(aq / c), q, k) * (one - a));
                },
                C(one / P("d"))};
    }
    if (id == "heine") {
        C a = P("a"), z = P("z");
        return {NodeSystem<C>(make_pair<C>("one-diff"), geo(P("c"), q), idx), fn("heine-F", {"a", "c", "z", "q"}),
                [=](int k) { return sg(k) * qpoch(z, q, k) / (qpoch(q, q, k) * qpoch(C(a * z), q, k)); }, P("b")};
    }
    if (id == "jackson") {
        C a = P("a"), c = P("c"), z = P("z");
        return {NodeSystem<C>(make_pair<C>("one-diff"), geo(c, q), idx), fn("jackson-F", {"a", "c", "z", "q"}),
                [=](int k) {
                    return qpoch(a, q, k) * ipow(q, binom2(k)) * ipow(z, k) / (qpoch(q, q, k) * qpoch(c, q, k) * qpoch(C(a * z), q, k));
                },
                P("b")};
    }
    if (id == "gasper-bibasic") {
        C a = P("a"), b = P("b"), p = P("p");
        int m = I("m");
        return {NodeSystem<C>(make_pair<C>("bibasic", {{"a", pm.at("a")}, {"b", pm.at("b")}}), geo(one, q), geo(one, p)),
                fn("gasper-F", {"a", "b", "p", "q", "m"}),
                [=](int k) {
                    if (k > m) return C{};
                    return qpoch(a, p, k) * qpoch(b, p, k) * ipow(C(a / b), k) * ipow(q, binom2(k + 1)) /
                           ((one - a) * (one - b) * qpoch(q, q, k) * qpoch(C(a * q / b), q, k));
                },
                C(one / P("x"))};
    }
    if (id == "geometric-family") {
        C c = P("c"), A = P("A"), p = P("p");
        return {NodeSystem<C>(make_pair<C>("onexy-diff"), geo(one, q), geo(A, p)), fn("inv1mcx", {"c"}),
                [=](int k) {
                    if (k == 0) return C(one / ((one - c) * (one - A)));
                    return sg(k) * ipow(c, k) * qpoch(C(A * p / c), p, k - 1) / qpoch(c, q, k + 1);
                },
                P("x")};
    }
    fail(ErrorKind::Usage, "case '" + id + "' has no (f,g) interpretation");
}

}  // namespace

const std::vector<IdentityCase>& corpus() { return loaded().cases; }
const std::vector<FgDescriptor>& table_rows() { return loaded().rows; }

std::vector<std::string> case_ids() {
    std::vector<std::string> v;
    for (const auto& c : corpus()) v.push_back(c.id);
    return v;
}

const IdentityCase& find_case(const std::string& id) {
    for (const auto& c : corpus())
        if (c.id == id) return c;
    std::string all;
    for (const auto& s : case_ids()) all += (all.empty() ? "" : ", ") + s;
    fail(ErrorKind::Usage, "unknown case '" + id + "'; valid cases: " + all);
}

std::optional<std::string> admissibility_problem(const IdentityCase& c, const Params& params) {
    return check_domain(c, params);
}

Params resolve_params(const IdentityCase& c, const Params& overrides) {
    Params p = c.defaults;
    for (const auto& [k, v] : overrides) {
        if (!p.count(k)) {
            std::string keys;
            for (const auto& [dk, dv] : c.defaults) keys += (keys.empty() ? "" : ", ") + dk;
            fail(ErrorKind::Usage, "case '" + c.id + "' has no parameter '" + k + "'; parameters: " + keys);
        }
        p[k] = v;
    }
    if (auto problem = check_domain(c, p)) fail(ErrorKind::DomainViolation, c.id + ": " + *problem);
    return p;
}

VerifyReport verify(const IdentityCase& c, const Params& params, double tolerance) {
    VerifyReport rep;
    rep.id = c.id;
    rep.anchor = c.anchor;
    rep.params = params;
    if (auto problem = check_domain(c, params)) fail(ErrorKind::DomainViolation, c.id + ": " + *problem);
    double tol = tolerance > 0 ? tolerance : c.tolerance;
    double tol_finite = tolerance > 0 ? tolerance : std::min(c.tolerance, kTerminatingTolerance);
    try {
        if (!c.terminating) {
            QBase<Wide> base(from_complex<Wide>(params.at("q")), RealOf<Wide>(c.truncation_eps), c.max_terms);
            rep.checks = Tier<Wide>::evaluate(c, params, base, tol, tol_finite, Part::Series, rep.message);
        }
        QBase<Deep> base(from_complex<Deep>(params.at("q")), RealOf<Deep>(c.truncation_eps), c.max_terms);
        auto finite = Tier<Deep>::evaluate(c, params, base, tol, tol_finite, c.terminating ? Part::All : Part::Finite, rep.message);
        rep.checks.insert(rep.checks.end(), finite.begin(), finite.end());
    } catch (const FgError& e) {
        if (e.kind() != ErrorKind::Divergent && e.kind() != ErrorKind::MaxTermsExceeded) throw;
        rep.divergent = true;
        rep.passed = false;
        rep.message += e.what();
        return rep;
    }
    rep.passed = !rep.checks.empty();
    for (const auto& ch : rep.checks) {
        rep.worst_rel_error = std::max(rep.worst_rel_error, ch.rel_error);
        if (!ch.passed) rep.passed = false;
    }
    return rep;
}

FgReport verify_fg_interpretation(const IdentityCase& c, const Params& params) {
    if (!c.fg) fail(ErrorKind::Usage, "case '" + c.id + "' has no (f,g) interpretation");
    if (auto problem = check_domain(c, params)) fail(ErrorKind::DomainViolation, c.id + ": " + *problem);
    using D = Deep;
    FgReport rep;
    rep.id = c.id;
    rep.row = c.fg->row;
    rep.max_order = c.fg->max_order;
    auto setup = fg_setup<D>(c, params);
    ExpansionSpec<D> spec{setup.F, setup.sys, rep.max_order, {setup.probe}};
    auto cs = expansion_coefficients(spec);
    rep.coefficient_orders = std::min(8, rep.max_order);
    for (int n = 0; n <= rep.coefficient_orders; ++n) {
        D g = cs.G[static_cast<size_t>(n)], want = setup.closed(n);
        double err = mag(want) > 0 ? mag(D(g - want)) / mag(want) : mag(g) / std::max(cs.scale[static_cast<size_t>(n)], 1e-300);
        rep.max_coefficient_error = std::max(rep.max_coefficient_error, err);
    }
    auto ps = partial_sums(cs.G, setup.sys, rep.max_order, setup.probe);
    rep.probe = to_complex(setup.probe);
    rep.expansion_value = to_complex(ps.S.back());
    using W = Wide;
    QBase<W> base(from_complex<W>(params.at("q")), RealOf<W>(c.truncation_eps), c.max_terms);
    W direct = Tier<W>::direct_value(c, params, base);
    rep.direct_value = to_complex(direct);
    rep.value_error = Tier<W>::rel_error(from_complex<W>(rep.expansion_value), direct);
    rep.passed = rep.max_coefficient_error <= rep.coefficient_tolerance && rep.value_error <= rep.value_tolerance;
    rep.note = "pair " + c.fg->pair + ", x_n = " + c.fg->x_n + ", b_n = " + c.fg->b_n;
    return rep;
}

SweepReport sweep(const IdentityCase& c, std::uint64_t seed, int trials) {
    if (trials < 1) fail(ErrorKind::Domain, "sweep needs trials >= 1");
    SweepReport rep;
    rep.id = c.id;
    rep.seed = seed;
    rep.trials = trials;
    PointSampler s(seed);
    rep.passed = true;
    for (int t = 0; t < trials; ++t) {
        Params p;
        bool ok = false;
        for (int attempt = 0; attempt < 500 && !ok; ++attempt) {
            p = c.defaults;
            for (const auto& d : c.domain) {
                if (d.integer) {
                    p[d.name] = Complex(static_cast<double>(s.integer(static_cast<std::int64_t>(d.min), static_cast<std::int64_t>(d.max))), 0);
                } else {
                    double r = s.uniform(d.min, d.max);
                    double th = d.phase > 0 ? s.uniform(-d.phase, d.phase) : 0.0;
                    p[d.name] = std::polar(r, th);
                }
            }
            ok = !check_domain(c, p, kSweepMargin).has_value();
            if (!ok) ++rep.rejected_draws;
        }
        if (!ok) fail(ErrorKind::DomainViolation, c.id + ": could not draw admissible parameters");
        auto v = verify(c, p, 0);
        if (!v.passed) {
            ++rep.failures;
            rep.passed = false;
        }
        double w = v.divergent ? std::numeric_limits<double>::infinity() : v.worst_rel_error;
        if (t == 0 || w > rep.worst_rel_error) {
            rep.worst_rel_error = w;
            rep.worst_params = p;
        }
    }
    return rep;
}

}  // namespace fgcalc
