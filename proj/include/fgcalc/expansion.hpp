#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "fgcalc/difference.hpp"
#include "fgcalc/errors.hpp"
#include "fgcalc/inversion.hpp"
#include "fgcalc/qcore.hpp"
#include "fgcalc/scalar.hpp"

namespace fgcalc {

template <class C>
struct ExpansionSpec {
    Fn<C> F;
    NodeSystem<C> sys;
    int max_order = 40;
    std::vector<C> eval_points;
};

template <class C>
struct CoefficientSet {
    std::vector<C> G;            // G(0..max_order)
    std::vector<double> scale;   // propagated sum of |terms| per order
    DifferenceTable<C> table;    // kept for the shifted windows used by lambda ratios
};

// G(n) = D^(n)[b_0..b_n; x_1..x_{n-1}]{F} for n = 0..max_order, one recursion pass.
// Samples one node past max_order so the shifted windows are available too.
template <class C>
CoefficientSet<C> expansion_coefficients(const ExpansionSpec<C>& spec) {
    if (spec.max_order < 0) fail(ErrorKind::Domain, "max_order must be nonnegative");
    CoefficientSet<C> out;
    auto vals = sample_nodes(spec.F, spec.sys, spec.max_order + 2);
    out.table = difference_table(vals, spec.sys, spec.max_order);
    auto g0 = difference_window(vals, spec.sys, 0, 0, 0);
    out.G.push_back(g0.value);
    out.scale.push_back(g0.abs_sum);
    for (int n = 1; n <= spec.max_order; ++n) {
        out.G.push_back(out.table.D[static_cast<size_t>(n)][0]);
        out.scale.push_back(out.table.M[static_cast<size_t>(n)][0]);
    }
    return out;
}

template <class C>
std::vector<C> expansion_coeffs(const ExpansionSpec<C>& spec) {
    return expansion_coefficients(spec).G;
}

// Basis values f(x_k,b_k) prod_{i<k} g(b_i,x) / prod_{i=1}^{k} f(x_i,x) for k = 0..n.
template <class C>
std::vector<C> basis_values(const NodeSystem<C>& sys, int n, const C& x) {
    std::vector<C> out;
    C run(1.0, 0.0);
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            C fk = sys.pair.f(sys.param(k), x);
            if (is_exact_zero(fk))
                fail(ErrorKind::PoleAtEvalPoint, "basis factor 1/f(x_" + std::to_string(k) + ", x) has a pole");
            run = run * sys.pair.g(sys.node(k - 1), x) / fk;
        }
        out.push_back(sys.pair.f(sys.param(k), sys.node(k)) * run);
    }
    return out;
}

template <class C>
struct PartialSums {
    std::vector<C> S;          // S_0..S_n
    std::vector<C> terms;      // G(k) * basis_k(x)
    std::vector<double> scale; // running sum of |terms|
};

template <class C>
PartialSums<C> partial_sums(const std::vector<C>& G, const NodeSystem<C>& sys, int n, const C& x) {
    if (n >= static_cast<int>(G.size())) fail(ErrorKind::OutOfRange, "partial sum order exceeds available coefficients");
    auto basis = basis_values(sys, n, x);
    PartialSums<C> out;
    C s{};
    double a = 0;
    for (int k = 0; k <= n; ++k) {
        C t = G[static_cast<size_t>(k)] * basis[static_cast<size_t>(k)];
        s += t;
        a += mag(t);
        out.terms.push_back(t);
        out.S.push_back(s);
        out.scale.push_back(a);
    }
    return out;
}

template <class C>
C partial_sum(const ExpansionSpec<C>& spec, int n, const C& x) {
    ExpansionSpec<C> s = spec;
    s.max_order = std::max(n, 0);
    auto G = expansion_coeffs(s);
    return partial_sums(G, spec.sys, n, x).S.back();
}

struct InterpolationResidual {
    int n = 0;
    double residual = 0;  // |F(b_n) - S_n(b_n)|
    double scale = 0;     // sum of |terms| in S_n(b_n), the roundoff scale
};

template <class C>
std::vector<InterpolationResidual> interpolation_check(const ExpansionSpec<C>& spec) {
    auto G = expansion_coeffs(spec);
    std::vector<InterpolationResidual> out;
    for (int n = 0; n <= spec.max_order; ++n) {
        C bn = spec.sys.node(n);
        auto ps = partial_sums(G, spec.sys, n, bn);
        InterpolationResidual r;
        r.n = n;
        C F = spec.F(bn);
        r.residual = mag(C(F - ps.S.back()));
        r.scale = std::max(ps.scale.back(), mag(F));
        out.push_back(r);
    }
    return out;
}

template <class C>
struct LambdaEntry {
    int k = 0;
    C value{};
    bool defined = false;  // false when the unshifted difference vanishes
};

// lambda_k = D^(k)[b_1..b_{k+1}]{F} / D^(k)[b_0..b_k]{F}, k = 0..max_order-1.
template <class C>
std::vector<LambdaEntry<C>> lambda_ratios(const CoefficientSet<C>& cs, int max_order) {
    std::vector<LambdaEntry<C>> out;
    const auto& D = cs.table.D;
    const auto& M = cs.table.M;
    for (int k = 0; k < max_order; ++k) {
        LambdaEntry<C> e;
        e.k = k;
        C den = D[static_cast<size_t>(k)][0];
        double floor = 1e3 * to_double(ScalarTraits<C>::machine_eps()) * M[static_cast<size_t>(k)][0];
        if (mag(den) > floor && mag(den) > 0) {
            e.value = D[static_cast<size_t>(k)][1] / den;
            e.defined = true;
        }
        out.push_back(e);
    }
    return out;
}

template <class C>
std::vector<LambdaEntry<C>> lambda_ratios(const ExpansionSpec<C>& spec) {
    return lambda_ratios(expansion_coefficients(spec), spec.max_order);
}

enum class Verdict { Converged, Diverged, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Converged: return "converged";
        case Verdict::Diverged: return "diverged";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct IsmailReport {
    Complex probe;
    int order_used = 0;
    std::vector<double> term_magnitudes;
    std::vector<double> ratios;
    double empirical_rate = 0;
    Verdict verdict = Verdict::Inconclusive;
    Complex partial_sum;
    Complex target;
    double reconstruction_error = 0;
    double tolerance = 0;
    bool agrees = false;
    bool nodes_have_finite_limit = true;
    std::string note;
};

// Ratio test on |G(k) basis_k(probe)| with a 0.02 margin over the last 10
// ratios, plus the reconstruction gap at the probe.
template <class C>
IsmailReport ismail_diagnostic(const ExpansionSpec<C>& spec, const C& probe, double tolerance = 1e-8) {
    auto cs = expansion_coefficients(spec);
    auto ps = partial_sums(cs.G, spec.sys, spec.max_order, probe);
    IsmailReport rep;
    rep.probe = to_complex(probe);
    rep.tolerance = tolerance;
    const double eps = to_double(ScalarTraits<C>::machine_eps());
    // Stop at the first coefficient that is pure roundoff or below the precision of the sum.
    int used = spec.max_order;
    for (int k = 1; k <= spec.max_order; ++k) {
        double gk = mag(cs.G[static_cast<size_t>(k)]);
        double t = mag(ps.terms[static_cast<size_t>(k)]);
        bool noise = gk != 0 && gk <= 1e3 * eps * cs.scale[static_cast<size_t>(k)];
        bool negligible = t != 0 && t < eps * mag(ps.S[static_cast<size_t>(k)]);
        if (noise || negligible) {
            used = k - 1;
            break;
        }
    }
    rep.order_used = used;
    for (int k = 0; k <= used; ++k) rep.term_magnitudes.push_back(mag(ps.terms[static_cast<size_t>(k)]));
    bool all_zero_tail = true;
    for (int k = 1; k <= used; ++k)
        if (rep.term_magnitudes[static_cast<size_t>(k)] != 0) all_zero_tail = false;
    for (int k = 0; k < used; ++k) {
        double a = rep.term_magnitudes[static_cast<size_t>(k)], b = rep.term_magnitudes[static_cast<size_t>(k) + 1];
        if (a > 0 && b > 0) rep.ratios.push_back(b / a);
    }
    if (all_zero_tail) {
        rep.verdict = Verdict::Converged;
        rep.empirical_rate = 0;
    } else if (!rep.ratios.empty()) {
        size_t w = std::min<size_t>(10, rep.ratios.size());
        double logsum = 0;
        bool below = true, above = true;
        for (size_t i = rep.ratios.size() - w; i < rep.ratios.size(); ++i) {
            logsum += std::log(rep.ratios[i]);
            if (!(rep.ratios[i] < 1 - 0.02)) below = false;
            if (!(rep.ratios[i] > 1)) above = false;
        }
        rep.empirical_rate = std::exp(logsum / static_cast<double>(w));
        if (w == 10 && below) rep.verdict = Verdict::Converged;
        else if (w == 10 && above) rep.verdict = Verdict::Diverged;
        else if (used < spec.max_order && below) rep.verdict = Verdict::Converged;  // terms hit the precision floor
    }
    C S = ps.S[static_cast<size_t>(used)];
    C target = spec.F(probe);
    rep.partial_sum = to_complex(S);
    rep.target = to_complex(target);
    rep.reconstruction_error = mag(C(S - target));
    rep.agrees = rep.reconstruction_error <= tolerance * std::max(1.0, mag(target));
    // Condition (i): the nodes must accumulate at a finite point inside the domain.
    {
        C b1 = spec.sys.node(spec.max_order - 1), b2 = spec.sys.node(spec.max_order);
        C b0 = spec.sys.node(0), b1s = spec.sys.node(1);
        double late = mag(C(b2 - b1)), early = mag(C(b1s - b0));
        rep.nodes_have_finite_limit = early == 0 || late < 0.5 * early;
    }
    if (rep.verdict == Verdict::Converged && !rep.agrees) {
        rep.note = rep.nodes_have_finite_limit
                       ? "series converges at the probe but not to F; the analyticity hypotheses fail"
                       : "series converges at the probe but not to F; the nodes b_n have no finite limit "
                         "inside the domain of F, so the uniqueness argument does not apply";
    } else if (rep.verdict == Verdict::Converged) {
        rep.note = "series converges at the probe and reproduces F";
    } else if (rep.verdict == Verdict::Diverged) {
        rep.note = "term ratios stay above 1 at the probe";
    } else {
        rep.note = "ratio test did not settle within the available orders";
    }
    return rep;
}

// Gessel-Stanton coefficient: sum_k (-1)^{n-k} q^{C(k+1,2)-nk} [n,k] (A p q^k;p)_{n-1} F(q^k)
template <class C>
C gs_coeff(const Fn<C>& F, const C& A, const C& p, const C& q, int n) {
    C sum{};
    for (int k = 0; k <= n; ++k) {
        C qk = ipow(q, k);
        C t = ipow(q, binom2(k + 1) - static_cast<long long>(n) * k) * qbinom(n, k, q) * qpoch(C(A * p * qk), p, n - 1) * F(qk);
        sum += ((n - k) % 2 ? C(-1.0, 0.0) : C(1.0, 0.0)) * t;
    }
    return sum;
}

// Liu coefficient: (aq)^{-n} sum_k (-1)^k q^{C(k+1,2)-nk} [n,k] (a q^{k+1};q)_{n-1} F(a q^{k+1})
template <class C>
C liu_coeff(const Fn<C>& F, const C& a, const C& q, int n) {
    if (is_exact_zero(a)) fail(ErrorKind::Domain, "liu_coeff needs a != 0; use carlitz_coeff for the limit");
    C sum{};
    for (int k = 0; k <= n; ++k) {
        C pt = a * ipow(q, k + 1);
        C t = ipow(q, binom2(k + 1) - static_cast<long long>(n) * k) * qbinom(n, k, q) * qpoch(pt, q, n - 1) * F(pt);
        sum += (k % 2 ? C(-1.0, 0.0) : C(1.0, 0.0)) * t;
    }
    return sum / ipow(C(a * q), n);
}

// The substitution bridge: G_4(n) = (-1)^n (aq)^{-n} G_3(n) for t -> F(a q t), p = q, A = a.
template <class C>
C liu_from_gs(const Fn<C>& F, const C& a, const C& q, int n) {
    C aq = a * q;
    Fn<C> scaled = [&](const C& t) { return F(C(aq * t)); };
    C s = n % 2 ? C(-1.0, 0.0) : C(1.0, 0.0);
    return s * gs_coeff(scaled, a, q, q, n) / ipow(aq, n);
}

template <class C>
C gs_reconstruct(const std::vector<C>& G3, const C& A, const C& p, const C& q, const C& x, int N) {
    C one(1.0, 0.0), sum{}, prod = one, qq = one, apx = one;
    for (int k = 0; k <= N; ++k) {
        if (k > 0) {
            prod *= ipow(q, k - 1) - x;
            qq *= one - ipow(q, k);
            apx *= one - A * ipow(p, k) * x;
        }
        sum += G3[static_cast<size_t>(k)] * (one - A * ipow(p, k) * ipow(q, k)) * prod / (qq * apx);
    }
    return sum;
}

template <class C>
C liu_reconstruct(const std::vector<C>& G4, const C& a, const C& q, const C& x, int N) {
    C one(1.0, 0.0), sum{};
    for (int k = 0; k <= N; ++k) {
        C t = G4[static_cast<size_t>(k)] * (one - a * ipow(q, 2 * k)) * qpoch(C(a * q / x), q, k) * ipow(x, k) /
              (qpoch(q, q, k) * qpoch(x, q, k));
        sum += t;
    }
    return sum;
}

template <class C>
C carlitz_reconstruct(const std::vector<C>& Cc, const C& q, const C& x, int N) {
    C sum{};
    for (int k = 0; k <= N; ++k)
        sum += Cc[static_cast<size_t>(k)] * ipow(x, k) / (qpoch(q, q, k) * qpoch(x, q, k));
    return sum;
}

// Taylor coefficients a_0..a_{count-1} by the trapezoid rule on |x| = radius.
template <class C>
std::vector<C> power_series_coeffs(const Fn<C>& F, int count, double radius, int points = 256) {
    using Real = RealOf<C>;
    using std::cos;
    using std::sin;
    using std::conj;
    if (points < count) points = count;
    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    std::vector<C> samples, roots;
    C rho(radius, 0.0);
    for (int j = 0; j < points; ++j) {
        Real t = two_pi * Real(j) / Real(points);
        C w(Real(cos(t)), Real(sin(t)));
        roots.push_back(w);
        samples.push_back(F(C(rho * w)));
    }
    std::vector<C> out;
    for (int r = 0; r < count; ++r) {
        C s{};
        for (int j = 0; j < points; ++j) {
            long long idx = (static_cast<long long>(j) * r) % points;
            C w = roots[static_cast<size_t>(idx)];
            s += samples[static_cast<size_t>(j)] * conj(w);
        }
        out.push_back(s / (C(static_cast<double>(points), 0.0) * ipow(rho, r)));
    }
    return out;
}

// Carlitz coefficient from Taylor coefficients:
// C_n = (q;q)_n sum_{j<n} (-1)^j q^{C(j,2)} [n-1,j] a_{n-j}, C_0 = a_0.
template <class C>
C carlitz_coeff_from_series(const std::vector<C>& a, const C& q, int n) {
    if (n == 0) return a.at(0);
    if (static_cast<int>(a.size()) < n + 1) fail(ErrorKind::OutOfRange, "need Taylor coefficients up to a_n");
    C sum{};
    for (int j = 0; j <= n - 1; ++j) {
        C t = ipow(q, binom2(j)) * qbinom(n - 1, j, q) * a[static_cast<size_t>(n - j)];
        sum += (j % 2 ? C(-1.0, 0.0) : C(1.0, 0.0)) * t;
    }
    return qpoch(q, q, n) * sum;
}

template <class C>
struct CarlitzCoefficient {
    C value{};        // Taylor-coefficient route
    C limit_value{};  // a -> 0 extrapolation of liu_coeff
    double discrepancy = 0;
    bool unstable = false;  // routes disagree beyond tolerance
};

// Polynomial extrapolation to a = 0 of liu_coeff sampled at a = h, 2h, ..., m h.
// liu_coeff cancels like h^-n while the extrapolation error shrinks like h^m,
// so the default h splits the working digits between the two.
template <class C>
C carlitz_limit(const Fn<C>& F, const C& q, int n, double h = 0, int m = 8) {
    if (h <= 0) h = std::min(0.02, std::pow(10.0, -static_cast<double>(ScalarTraits<C>::digits) / (n + m + 1)));
    std::vector<C> xs, ys;
    for (int j = 1; j <= m; ++j) {
        C a(h * j, 0.0);
        xs.push_back(a);
        ys.push_back(liu_coeff(F, a, q, n));
    }
    // Neville evaluation at 0.
    for (int level = 1; level < m; ++level)
        for (int i = 0; i + level < m; ++i) {
            C xi = xs[static_cast<size_t>(i)], xj = xs[static_cast<size_t>(i + level)];
            ys[static_cast<size_t>(i)] = (xj * ys[static_cast<size_t>(i)] - xi * ys[static_cast<size_t>(i) + 1]) / (xj - xi);
        }
    return ys[0];
}

template <class C>
CarlitzCoefficient<C> carlitz_coeff(const Fn<C>& F, const C& q, int n, double radius = 1.0, double tolerance = 1e-6) {
    CarlitzCoefficient<C> out;
    auto a = power_series_coeffs(F, n + 1, radius, std::max(256, 4 * (n + 1)));
    out.value = carlitz_coeff_from_series(a, q, n);
    out.limit_value = carlitz_limit(F, q, n);
    double scale = std::max({mag(out.value), mag(out.limit_value), 1e-300});
    out.discrepancy = mag(C(out.value - out.limit_value)) / std::max(scale, 1.0);
    out.unstable = out.discrepancy > tolerance;
    return out;
}

// Truncated K_{n,k}(x) = sum_{r >= max(0,-k)} a_{r+k} [r+n, r] x^r, with a_j = 0 for j < 0.
template <class C>
SeriesValue<C> K_nk(const std::function<C(int)>& a, const QBase<C>& base, int n, int k, const C& x) {
    using Real = RealOf<C>;
    SeriesValue<C> out;
    int r0 = std::max(0, -k);
    C sum{};
    detail::RatioWindow<Real> win;
    Real prev = -1;
    int growing = 0;
    for (int i = 0; i < base.max_terms; ++i) {
        int r = r0 + i;
        C t = a(r + k) * qbinom(r + n, r, base.q) * ipow(x, r);
        sum += t;
        Real m = abs_of(t);
        if (prev > 0) {
            Real ratio = m / prev;
            win.push(ratio);
            growing = ratio > Real(1) ? growing + 1 : 0;
            if (growing >= 50) fail(ErrorKind::Divergent, "K_{n,k} terms keep growing; x is outside the disk");
        }
        prev = m;
        if (is_exact_zero(x)) {
            out.value = sum;
            out.terms_used = i + 1;
            out.converged = true;
            return out;
        }
        Real scale = abs_of(sum);
        if (scale < 1) scale = 1;
        Real w = win.worst();
        if (i >= 4 && w < Real(1)) {
            Real tail = m * w / (Real(1) - w) / scale;
            if (m / scale < base.truncation_eps && tail < base.truncation_eps) {
                out.value = sum;
                out.terms_used = i + 1;
                out.tail_bound = tail;
                out.converged = true;
                return out;
            }
        }
    }
    fail(ErrorKind::MaxTermsExceeded, "K_{n,k} did not converge");
}

// Right side of the m-times iterated recursion:
// (q;q)_{n-m}/(q;q)_n sum_i (-1)^i q^{(n-m+1)i + C(i,2)} [m,i] K_{n-m,k}(q^i x)
template <class C>
C K_nk_iterated(const std::function<C(int)>& a, const QBase<C>& base, int n, int m, int k, const C& x) {
    const C& q = base.q;
    C sum{};
    for (int i = 0; i <= m; ++i) {
        C t = ipow(q, static_cast<long long>(n - m + 1) * i + binom2(i)) * qbinom(m, i, q) *
              K_nk(a, base, n - m, k, C(ipow(q, i) * x)).value;
        sum += (i % 2 ? C(-1.0, 0.0) : C(1.0, 0.0)) * t;
    }
    return qpoch(q, q, n - m) / qpoch(q, q, n) * sum;
}

template <class C>
struct GeneratingCheck {
    C two_sided{};  // sum over k in [-N, N]
    C one_sided{};  // sum over k in [0, N]
    C closed{};     // F(t)/(x/t;q)_{n+1}
    double two_sided_error = 0;
    double one_sided_error = 0;
};

template <class C>
GeneratingCheck<C> K_generating_check(const std::function<C(int)>& a, const Fn<C>& F, const QBase<C>& base, int n,
                                      const C& x, const C& t, int N) {
    GeneratingCheck<C> out;
    for (int k = -N; k <= N; ++k) {
        C v = K_nk(a, base, n, k, x).value * ipow(t, k);
        out.two_sided += v;
        if (k >= 0) out.one_sided += v;
    }
    out.closed = F(t) / qpoch(C(x / t), base.q, n + 1);
    double s = std::max(1.0, mag(out.closed));
    out.two_sided_error = mag(C(out.two_sided - out.closed)) / s;
    out.one_sided_error = mag(C(out.one_sided - out.closed)) / s;
    return out;
}

struct KnnLimitRow {
    int n = 0;
    Complex ratio;  // K_{n,n}(x)/a_n
    Complex limit;  // 1/(x c0;q)_inf
    double gap = 0;
};

struct KnnLimitReport {
    std::vector<KnnLimitRow> rows;
    double final_gap = 0;
};

template <class C>
KnnLimitReport knn_limit_check(const std::function<C(int)>& a, const C& c0, const QBase<C>& base, const C& x, int n_max) {
    KnnLimitReport rep;
    C limit = C(1.0, 0.0) / qpoch_inf(C(x * c0), base).value;
    for (int n = 0; n <= n_max; ++n) {
        C ratio = K_nk(a, base, n, n, x).value / a(n);
        KnnLimitRow row;
        row.n = n;
        row.ratio = to_complex(ratio);
        row.limit = to_complex(limit);
        row.gap = mag(C(ratio - limit));
        rep.rows.push_back(row);
    }
    rep.final_gap = rep.rows.empty() ? 0 : rep.rows.back().gap;
    return rep;
}

}  // namespace fgcalc
