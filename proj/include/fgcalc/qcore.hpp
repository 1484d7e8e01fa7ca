#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "fgcalc/errors.hpp"
#include "fgcalc/scalar.hpp"

namespace fgcalc {

// Process-wide cap on series/product terms; FG_MAX_TERMS overrides the default.
inline int default_max_terms() {
    static const int value = [] {
        if (const char* env = std::getenv("FG_MAX_TERMS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v >= 1 && v <= 100000000) return static_cast<int>(v);
        }
        return 10000;
    }();
    return value;
}

template <class C>
struct QBase {
    using Real = RealOf<C>;
    C q;
    Real truncation_eps;
    int max_terms;

    explicit QBase(C q_, Real eps = ScalarTraits<C>::default_eps(), int max_terms_ = default_max_terms())
        : q(q_), truncation_eps(eps), max_terms(max_terms_) {
        Real m = abs_of(q);
        if (!(m > 0 && m < 1)) fail(ErrorKind::Domain, "base q must satisfy 0 < |q| < 1");
        if (!(truncation_eps > 0)) fail(ErrorKind::Domain, "truncation_eps must be positive");
        if (max_terms < 1) fail(ErrorKind::Domain, "max_terms must be at least 1");
    }
};

template <class C>
struct SeriesValue {
    C value{};
    int terms_used = 0;
    RealOf<C> tail_bound = 0;  // absolute tail estimate divided by max(1, |value|)
    bool converged = false;
};

// (a;q)_n for any integer n. Negative n uses the finite reciprocal product.
template <class C>
C qpoch(const C& a, const C& q, long long n) {
    C one(1.0, 0.0);
    if (n >= 0) {
        C r = one, t = a;
        for (long long k = 0; k < n; ++k) {
            r *= one - t;
            t *= q;
        }
        return r;
    }
    C qi = one / q, t = a * qi, d = one;
    for (long long k = 1; k <= -n; ++k) {
        C factor = one - t;
        if (is_negligible(factor, RealOf<C>(1))) {
            fail(ErrorKind::DivisionByZero,
                 "(a;q)_n with n=" + std::to_string(n) + " has vanishing factor 1 - a q^-" + std::to_string(k));
        }
        d *= factor;
        t *= qi;
    }
    return one / d;
}

template <class C>
C qpoch(const C& a, const QBase<C>& base, long long n) {
    return qpoch(a, base.q, n);
}

// 1/(a;q)_n. For n < 0 this is a plain product, so a vanishing factor yields 0
// instead of an error (1/(q^{N+1};q)_n = 0 for every n <= -N-1).
template <class C>
C qpoch_recip(const C& a, const C& q, long long n) {
    C one(1.0, 0.0);
    if (n >= 0) {
        C r = one, t = a;
        for (long long k = 0; k < n; ++k) {
            C factor = one - t;
            if (is_negligible(factor, RealOf<C>(1))) fail(ErrorKind::DivisionByZero, "1/(a;q)_n has a vanishing factor");
            r *= factor;
            t *= q;
        }
        return one / r;
    }
    C qi = one / q, t = a * qi, r = one;
    for (long long k = 1; k <= -n; ++k) {
        C factor = one - t;
        if (is_negligible(factor, RealOf<C>(1))) return C(0.0, 0.0);
        r *= factor;
        t *= qi;
    }
    return r;
}

template <class C>
C qpoch_multi(const std::vector<C>& as, const C& q, long long n) {
    C r(1.0, 0.0);
    for (const auto& a : as) r *= qpoch(a, q, n);
    return r;
}

template <class C>
SeriesValue<C> qpoch_inf(const C& a, const QBase<C>& base) {
    using Real = RealOf<C>;
    using std::exp;
    SeriesValue<C> out;
    C one(1.0, 0.0);
    C p = one, t = a;
    Real qm = abs_of(base.q);
    Real denom = Real(1) - qm;
    Real tm = abs_of(a);  // |a q^k|, tracked as a real product to avoid a complex abs per factor
    for (int k = 0; k < base.max_terms; ++k) {
        if (is_exact_zero(t)) {
            out.value = p;
            out.terms_used = k;
            out.tail_bound = 0;
            out.converged = true;
            return out;
        }
        p *= one - t;
        t *= base.q;
        tm *= qm;
        if (is_exact_zero(p)) {
            out.value = p;
            out.terms_used = k + 1;
            out.tail_bound = 0;
            out.converged = true;
            return out;
        }
        if (tm >= base.truncation_eps) continue;
        Real s = tm / denom;
        Real tail = s < Real(0.5) ? s * (Real(1) + s) : Real(exp(s)) - Real(1);  // bounds e^s - 1
        if (tail < base.truncation_eps) {
            Real pm = abs_of(p);
            Real scale = pm < 1 ? Real(1) : pm;
            out.value = p;
            out.terms_used = k + 1;
            out.tail_bound = tail * pm / scale;
            out.converged = true;
            return out;
        }
    }
    fail(ErrorKind::MaxTermsExceeded,
         "(a;q)_inf did not reach the tail threshold within " + std::to_string(base.max_terms) + " factors");
}

template <class C>
C qpoch_inf_value(const C& a, const QBase<C>& base) {
    return qpoch_inf(a, base).value;
}

// Gaussian binomial by the product form prod_{j=1}^{k} (1-q^{n-k+j})/(1-q^j).
template <class C>
C qbinom(long long n, long long k, const C& q, bool zero_outside = false) {
    if (k < 0 || k > n) {
        if (zero_outside) return C(0.0, 0.0);
        fail(ErrorKind::OutOfRange, "q-binomial needs 0 <= k <= n, got n=" + std::to_string(n) + ", k=" + std::to_string(k));
    }
    if (k > n - k) k = n - k;
    C one(1.0, 0.0);
    C r = one;
    C qj = q, qnk = ipow(q, n - k + 1);
    for (long long j = 1; j <= k; ++j) {
        r *= (one - qnk) / (one - qj);
        qj *= q;
        qnk *= q;
    }
    return r;
}

template <class C>
C theta(const C& x, const QBase<C>& base) {
    if (is_exact_zero(x)) fail(ErrorKind::Domain, "theta(x) needs x != 0");
    auto a = qpoch_inf(x, base);
    auto b = qpoch_inf(base.q / x, base);
    return a.value * b.value;
}

namespace detail {

// Running tail estimate for a series whose term ratios settle geometrically.
template <class Real>
struct RatioWindow {
    Real ratios[4] = {0, 0, 0, 0};
    int count = 0;
    void push(Real r) { ratios[(count++) % 4] = r; }
    Real worst() const {
        Real w = 0;
        int n = count < 4 ? count : 4;
        for (int i = 0; i < n; ++i)
            if (ratios[i] > w) w = ratios[i];
        return w;
    }
};

}  // namespace detail

// r phi s. Terminates exactly when an upper parameter equals q^{-N}.
template <class C>
SeriesValue<C> phi(const std::vector<C>& upper, const std::vector<C>& lower, const QBase<C>& base, const C& z) {
    using Real = RealOf<C>;
    SeriesValue<C> out;
    C one(1.0, 0.0);
    const C& q = base.q;
    const long long expo = 1 + static_cast<long long>(lower.size()) - static_cast<long long>(upper.size());
    C term = one, sum = one, qn = one;
    detail::RatioWindow<Real> win;
    int growing = 0;
    for (int n = 0; n < base.max_terms; ++n) {
        // term_{n+1}/term_n
        bool terminated = false;
        C num = one;
        for (const auto& a : upper) {
            C fac = one - a * qn;
            if (is_negligible(fac, Real(1))) {
                terminated = true;
                break;
            }
            num *= fac;
        }
        if (terminated || is_exact_zero(z)) {
            out.value = sum;
            out.terms_used = n + 1;
            out.tail_bound = 0;
            out.converged = true;
            return out;
        }
        C den = one - qn * q;
        for (const auto& b : lower) {
            C fac = one - b * qn;
            if (is_negligible(fac, Real(1)))
                fail(ErrorKind::PoleInLowerParams, "lower parameter hits q^{-" + std::to_string(n) + "}");
            den *= fac;
        }
        C extra = ipow(C(-1.0, 0.0) * qn, expo);
        C next = term * num / den * extra * z;
        Real ratio = is_exact_zero(term) ? Real(0) : abs_of(next) / abs_of(term);
        win.push(ratio);
        sum += next;
        term = next;
        qn *= q;
        if (is_exact_zero(term)) {
            out.value = sum;
            out.terms_used = n + 2;
            out.tail_bound = 0;
            out.converged = true;
            return out;
        }
        growing = ratio > Real(1) ? growing + 1 : 0;
        if (growing >= 50) fail(ErrorKind::Divergent, "term ratio exceeded 1 for 50 consecutive terms");
        Real scale = abs_of(sum);
        if (scale < 1) scale = 1;
        Real w = win.worst();
        if (n >= 3 && w < Real(1)) {
            Real tail = abs_of(term) * w / (Real(1) - w) / scale;
            if (abs_of(term) / scale < base.truncation_eps && tail < base.truncation_eps) {
                out.value = sum;
                out.terms_used = n + 2;
                out.tail_bound = tail;
                out.converged = true;
                return out;
            }
        }
    }
    fail(ErrorKind::MaxTermsExceeded, "phi did not converge within " + std::to_string(base.max_terms) + " terms");
}

// Sums term(0) + term(1) + ... until the terms fall below truncation_eps
// relative to the sum and a geometric tail estimate agrees.
template <class C>
SeriesValue<C> sum_series(const std::function<C(int)>& term, const QBase<C>& base, int first = 0) {
    using Real = RealOf<C>;
    SeriesValue<C> out;
    C sum{};
    detail::RatioWindow<Real> win;
    Real prev = -1;
    int growing = 0, zeros = 0;
    for (int i = 0; i < base.max_terms; ++i) {
        C t = term(first + i);
        sum += t;
        Real m = abs_of(t);
        if (prev > 0 && m > 0) {
            Real ratio = m / prev;
            win.push(ratio);
            growing = ratio > Real(1) ? growing + 1 : 0;
            if (growing >= 50) fail(ErrorKind::Divergent, "series terms grew for 50 consecutive indices");
        }
        zeros = m == 0 ? zeros + 1 : 0;
        if (m > 0) prev = m;
        Real scale = abs_of(sum);
        if (scale < 1) scale = 1;
        if (zeros >= 8 && i >= 8) {
            out.value = sum;
            out.terms_used = i + 1;
            out.converged = true;
            return out;
        }
        Real w = win.worst();
        if (i >= 4 && m > 0 && w < Real(1)) {
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
    fail(ErrorKind::MaxTermsExceeded, "series did not converge within " + std::to_string(base.max_terms) + " terms");
}

enum class TailPolicy { Report, Require };

template <class C>
struct BilateralValue {
    SeriesValue<C> total;
    C positive{}, negative{};
    int positive_terms = 0, negative_terms = 0;
    RealOf<C> positive_tail = 0, negative_tail = 0;
    bool negative_vanished = false;  // zero short-circuit fired
    std::vector<RealOf<C>> positive_mags, negative_mags;  // |term| beyond index 0, in order
};

namespace detail {

// Sums one side of r psi s. Direction +1 walks n = 1, 2, ...; -1 walks n = -1, -2, ...
template <class C>
void psi_side(const std::vector<C>& upper, const std::vector<C>& lower, const QBase<C>& base, const C& z,
              int limit, bool stop_early, int dir, C& sum, int& terms, RealOf<C>& tail, bool& vanished,
              std::vector<RealOf<C>>& mags) {
    using Real = RealOf<C>;
    C one(1.0, 0.0);
    const C& q = base.q;
    const long long expo = static_cast<long long>(lower.size()) - static_cast<long long>(upper.size());
    C term = one;
    sum = C(0.0, 0.0);
    terms = 0;
    tail = 0;
    vanished = false;
    detail::RatioWindow<Real> win;
    C qi = one / q;
    C qn = one;             // q^n for the positive side (n = current index)
    C qneg = qi;            // q^{-n-1} for the negative side
    C qpos1 = q;            // q^{n+1}
    for (int n = 0; n < limit; ++n) {
        C ratio_c;
        if (dir > 0) {
            C num = one, den = one;
            bool zero = false;
            for (const auto& a : upper) {
                C fac = one - a * qn;
                if (is_negligible(fac, Real(1))) zero = true;
                num *= fac;
            }
            for (const auto& b : lower) {
                C fac = one - b * qn;
                if (is_negligible(fac, Real(1)))
                    fail(ErrorKind::PoleInLowerParams, "bilateral lower parameter pole on the positive side");
                den *= fac;
            }
            if (zero) {
                vanished = true;
                tail = 0;
                return;
            }
            ratio_c = num / den * ipow(C(-1.0, 0.0) * qn, expo) * z;
            qn *= q;
        } else {
            C num = one, den = one;
            bool zero = false;
            for (const auto& b : lower) {
                C fac = one - b * qneg;
                if (is_negligible(fac, Real(1))) zero = true;
                num *= fac;
            }
            for (const auto& a : upper) {
                C fac = one - a * qneg;
                if (is_negligible(fac, Real(1)))
                    fail(ErrorKind::DivisionByZero, "bilateral upper parameter pole on the negative side");
                den *= fac;
            }
            if (zero) {
                vanished = true;
                tail = 0;
                return;
            }
            ratio_c = num / den * ipow(C(-1.0, 0.0) * qpos1, expo) / z;
            qneg *= qi;
            qpos1 *= q;
        }
        C next = term * ratio_c;
        Real r = abs_of(ratio_c);
        win.push(r);
        sum += next;
        term = next;
        ++terms;
        mags.push_back(abs_of(term));
        Real w = win.worst();
        tail = w < Real(1) ? abs_of(term) * w / (Real(1) - w) : Real(std::numeric_limits<double>::infinity());
        if (stop_early && n >= 3 && abs_of(term) < base.truncation_eps && tail < base.truncation_eps) return;
    }
    if (limit == 0) tail = Real(std::numeric_limits<double>::infinity());
}

}  // namespace detail

// r psi s summed over [-window, window].
template <class C>
BilateralValue<C> psi_bilateral(const std::vector<C>& upper, const std::vector<C>& lower, const QBase<C>& base,
                                const C& z, int window, TailPolicy policy = TailPolicy::Report,
                                bool stop_early = false) {
    using Real = RealOf<C>;
    if (window < 0) fail(ErrorKind::Domain, "window must be nonnegative");
    if (is_exact_zero(z)) fail(ErrorKind::Domain, "bilateral series needs z != 0");
    BilateralValue<C> out;
    bool pv = false, nv = false;
    detail::psi_side(upper, lower, base, z, window, stop_early, +1, out.positive, out.positive_terms,
                     out.positive_tail, pv, out.positive_mags);
    detail::psi_side(upper, lower, base, z, window, stop_early, -1, out.negative, out.negative_terms,
                     out.negative_tail, nv, out.negative_mags);
    if (pv) out.positive_tail = 0;
    if (nv) out.negative_tail = 0;
    out.negative_vanished = nv;
    C total = C(1.0, 0.0) + out.positive + out.negative;
    Real scale = abs_of(total);
    if (scale < 1) scale = 1;
    out.total.value = total;
    out.total.terms_used = 1 + out.positive_terms + out.negative_terms;
    Real tp = out.positive_tail / scale, tn = out.negative_tail / scale;
    out.total.tail_bound = tp > tn ? tp : tn;
    out.total.converged = tp < base.truncation_eps && tn < base.truncation_eps;
    if (policy == TailPolicy::Require && !out.total.converged)
        fail(ErrorKind::WindowTooSmall, "bilateral tails exceed truncation_eps at window " + std::to_string(window));
    return out;
}

// Grows the window until both tails fall below truncation_eps or max_window is reached.
template <class C>
BilateralValue<C> psi_bilateral_adaptive(const std::vector<C>& upper, const std::vector<C>& lower,
                                         const QBase<C>& base, const C& z, int max_window = 400,
                                         TailPolicy policy = TailPolicy::Report) {
    return psi_bilateral(upper, lower, base, z, max_window, policy, true);
}

// A_k...A_m for m >= k, 1 for m = k-1, (A_{m+1}...A_{k-1})^{-1} for m <= k-2.
template <class C>
C product_over_z(const std::function<C(long long)>& factor, long long k, long long m) {
    C one(1.0, 0.0);
    if (m >= k) {
        C r = one;
        for (long long j = k; j <= m; ++j) r *= factor(j);
        return r;
    }
    if (m == k - 1) return one;
    C d = one;
    for (long long j = m + 1; j <= k - 1; ++j) d *= factor(j);
    if (is_exact_zero(d)) fail(ErrorKind::DivisionByZero, "product_over_z reciprocal branch hit a zero factor");
    return one / d;
}

}  // namespace fgcalc
