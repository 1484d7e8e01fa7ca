#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fgcalc/errors.hpp"
#include "fgcalc/kernel.hpp"
#include "fgcalc/qcore.hpp"
#include "fgcalc/scalar.hpp"

namespace fgcalc {

template <class C>
using Fn = std::function<C(const C&)>;

enum class SeqKind { Geometric, Affine, List };

// Precision-independent generator: geometric s0*s1^i, affine s0 + i*s1, or a list.
struct SequenceSpec {
    SeqKind kind = SeqKind::Geometric;
    Complex s0{1.0, 0.0};
    Complex s1{1.0, 0.0};
    std::vector<Complex> values;

    static SequenceSpec geometric(Complex scale, Complex ratio) { return {SeqKind::Geometric, scale, ratio, {}}; }
    static SequenceSpec affine(Complex u, Complex h) { return {SeqKind::Affine, u, h, {}}; }
    static SequenceSpec list(std::vector<Complex> v) { return {SeqKind::List, {}, {}, std::move(v)}; }
};

SequenceSpec parse_sequence_spec(const std::string& text);
std::string format_sequence_spec(const SequenceSpec& spec);

template <class C>
struct Sequence {
    SeqKind kind = SeqKind::Geometric;
    C s0{1.0, 0.0}, s1{1.0, 0.0};
    std::vector<C> values;

    static Sequence geometric(const C& scale, const C& ratio) { return {SeqKind::Geometric, scale, ratio, {}}; }
    static Sequence affine(const C& u, const C& h) { return {SeqKind::Affine, u, h, {}}; }
    static Sequence list(std::vector<C> v) { return {SeqKind::List, C{}, C{}, std::move(v)}; }
    static Sequence from_spec(const SequenceSpec& s) {
        std::vector<C> v;
        for (const auto& z : s.values) v.push_back(from_complex<C>(z));
        return {s.kind, from_complex<C>(s.s0), from_complex<C>(s.s1), std::move(v)};
    }

    int available() const { return kind == SeqKind::List ? static_cast<int>(values.size()) : INT_MAX; }

    C at(int i) const {
        switch (kind) {
            case SeqKind::Geometric: return s0 * ipow(s1, i);
            case SeqKind::Affine: return s0 + s1 * C(static_cast<double>(i), 0.0);
            case SeqKind::List:
                if (i < 0 || i >= static_cast<int>(values.size()))
                    fail(ErrorKind::OutOfRange, "list sequence has no index " + std::to_string(i));
                return values[static_cast<size_t>(i)];
        }
        return C{};
    }
};

// Nodes b_i, parameters x_i and the pair they feed. Immutable; every
// evaluation recomputes from the closed forms, so sharing across threads is safe.
template <class C>
class NodeSystem {
public:
    FGPair<C> pair;
    Sequence<C> b, x;

    NodeSystem(FGPair<C> p, Sequence<C> nodes, Sequence<C> params)
        : pair(std::move(p)), b(std::move(nodes)), x(std::move(params)) {}

    C node(int i) const { return b.at(i); }
    C param(int i) const { return x.at(i); }

    std::vector<C> nodes(int first, int count) const {
        std::vector<C> v;
        v.reserve(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) v.push_back(b.at(first + i));
        return v;
    }

    // Pairwise distinctness of b_first..b_last with a purely relative threshold.
    void check_distinct(int first, int last) const {
        std::vector<C> v = nodes(first, last - first + 1);
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = i + 1; j < v.size(); ++j) {
                double d = mag(C(v[i] - v[j]));
                double s = std::max(mag(v[i]), mag(v[j]));
                if (!(d > 1e-12 * s))
                    fail(ErrorKind::CoincidentNodes, "nodes b_" + std::to_string(first + static_cast<int>(i)) + " and b_" +
                                                         std::to_string(first + static_cast<int>(j)) + " coincide");
            }
    }
};

template <class C>
NodeSystem<C> make_system(const PairSpec& pair, const SequenceSpec& nodes, const SequenceSpec& params) {
    return NodeSystem<C>(make_pair<C>(pair), Sequence<C>::from_spec(nodes), Sequence<C>::from_spec(params));
}

enum class DiffMethod { Direct, Recursive, Leibniz };

inline const char* method_name(DiffMethod m) {
    switch (m) {
        case DiffMethod::Direct: return "direct";
        case DiffMethod::Recursive: return "recursive";
        case DiffMethod::Leibniz: return "leibniz";
    }
    return "direct";
}

template <class C>
struct DifferenceResult {
    C value{};
    int order = 0;
    DiffMethod method = DiffMethod::Direct;
    double abs_sum = 0;             // sum of |term|, the scale for expected-zero checks
    double condition_estimate = 1;  // abs_sum / |value|, at least 1
};

namespace detail {

template <class C>
double condition_of(double abs_sum, const C& value) {
    double v = mag(value);
    if (v == 0) return abs_sum == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return std::max(1.0, abs_sum / v);
}

template <class C>
C checked_g(const NodeSystem<C>& sys, const C& u, const C& v, int i, int k) {
    C r = sys.pair.g(u, v);
    if (is_exact_zero(r) || !std::isfinite(mag(r))) throw ZeroDenominatorError("g(b_i, b_k)", i, k);
    return r;
}

template <class C>
C checked_f(const NodeSystem<C>& sys, const C& u, const C& v, int i, int k) {
    C r = sys.pair.f(u, v);
    if (is_exact_zero(r) || !std::isfinite(mag(r))) throw ZeroDenominatorError("f(x_i, b_k)", i, k);
    return r;
}

}  // namespace detail

// Order-m difference on nodes b_s..b_{s+m} with parameters x_{p+1}..x_{p+m-1};
// order 0 is F(b_s)/f(x_p, b_s). `vals[k]` holds F(b_k) by global index.
template <class C>
DifferenceResult<C> difference_window(const std::vector<C>& vals, const NodeSystem<C>& sys, int s, int p, int m) {
    if (m < 0) fail(ErrorKind::Domain, "difference order must be nonnegative");
    DifferenceResult<C> r;
    r.order = m;
    r.method = DiffMethod::Direct;
    if (m == 0) {
        C fx = detail::checked_f(sys, sys.param(p), sys.node(s), p, s);
        r.value = vals[static_cast<size_t>(s)] / fx;
        r.abs_sum = mag(r.value);
        r.condition_estimate = 1;
        return r;
    }
    sys.check_distinct(s, s + m);
    std::vector<C> bs = sys.nodes(s, m + 1);
    std::vector<C> xs;
    for (int i = 1; i <= m - 1; ++i) xs.push_back(sys.param(p + i));
    C sum{};
    double abs_sum = 0;
    for (int k = 0; k <= m; ++k) {
        C t = vals[static_cast<size_t>(s + k)];
        for (const auto& xi : xs) t *= sys.pair.f(xi, bs[static_cast<size_t>(k)]);
        for (int i = 0; i <= m; ++i) {
            if (i == k) continue;
            t /= detail::checked_g(sys, bs[static_cast<size_t>(i)], bs[static_cast<size_t>(k)], s + i, s + k);
        }
        sum += t;
        abs_sum += mag(t);
    }
    r.value = sum;
    r.abs_sum = abs_sum;
    r.condition_estimate = detail::condition_of(abs_sum, sum);
    return r;
}

template <class C>
std::vector<C> sample_nodes(const Fn<C>& F, const NodeSystem<C>& sys, int count) {
    std::vector<C> v;
    v.reserve(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) v.push_back(F(sys.node(k)));
    return v;
}

template <class C>
DifferenceResult<C> fg_difference(const Fn<C>& F, const NodeSystem<C>& sys, int n) {
    if (n < 0) fail(ErrorKind::Domain, "difference order must be nonnegative");
    return difference_window(sample_nodes(F, sys, n + 1), sys, 0, 0, n);
}

// D[m][j] = order-m difference on b_j..b_{j+m} with parameters x_1..x_{m-1},
// filled by the two-term recursion. M holds the propagated term magnitudes.
template <class C>
struct DifferenceTable {
    int order = 0;
    std::vector<std::vector<C>> D;
    std::vector<std::vector<double>> M;
};

template <class C>
DifferenceTable<C> difference_table(const std::vector<C>& vals, const NodeSystem<C>& sys, int order) {
    if (order < 0) fail(ErrorKind::Domain, "difference order must be nonnegative");
    if (static_cast<int>(vals.size()) < order + 1)
        fail(ErrorKind::OutOfRange, "not enough samples for the difference table");
    const int width = static_cast<int>(vals.size());
    sys.check_distinct(0, width - 1);
    std::vector<C> bs = sys.nodes(0, width);
    DifferenceTable<C> t;
    t.order = order;
    t.D.resize(static_cast<size_t>(order) + 1);
    t.M.resize(static_cast<size_t>(order) + 1);
    // Level 0 needs f(x_0, b_j); failures only matter if level 0 is read.
    for (int j = 0; j < width; ++j) {
        C fx = sys.pair.f(sys.param(0), bs[static_cast<size_t>(j)]);
        C v = is_exact_zero(fx) ? C(std::numeric_limits<double>::quiet_NaN(), 0.0) : C(vals[static_cast<size_t>(j)] / fx);
        t.D[0].push_back(v);
        t.M[0].push_back(mag(v));
    }
    if (order >= 1) {
        for (int j = 0; j + 1 < width; ++j) {
            C g1 = detail::checked_g(sys, bs[static_cast<size_t>(j + 1)], bs[static_cast<size_t>(j)], j + 1, j);
            C g2 = detail::checked_g(sys, bs[static_cast<size_t>(j)], bs[static_cast<size_t>(j + 1)], j, j + 1);
            C a = vals[static_cast<size_t>(j)] / g1, b = vals[static_cast<size_t>(j + 1)] / g2;
            t.D[1].push_back(a + b);
            t.M[1].push_back(mag(a) + mag(b));
        }
    }
    for (int m = 1; m < order; ++m) {
        C xm = sys.param(m);
        const auto& prev = t.D[static_cast<size_t>(m)];
        const auto& prevM = t.M[static_cast<size_t>(m)];
        auto& cur = t.D[static_cast<size_t>(m) + 1];
        auto& curM = t.M[static_cast<size_t>(m) + 1];
        for (int j = 0; j + m + 1 < width; ++j) {
            const C& bj = bs[static_cast<size_t>(j)];
            const C& bk = bs[static_cast<size_t>(j + m + 1)];
            C w1 = sys.pair.f(xm, bj) / detail::checked_g(sys, bk, bj, j + m + 1, j);
            C w2 = sys.pair.f(xm, bk) / detail::checked_g(sys, bj, bk, j, j + m + 1);
            cur.push_back(w1 * prev[static_cast<size_t>(j)] + w2 * prev[static_cast<size_t>(j) + 1]);
            curM.push_back(mag(w1) * prevM[static_cast<size_t>(j)] + mag(w2) * prevM[static_cast<size_t>(j) + 1]);
        }
    }
    return t;
}

template <class C>
DifferenceResult<C> fg_difference_recursive(const Fn<C>& F, const NodeSystem<C>& sys, int n) {
    if (n < 0) fail(ErrorKind::Domain, "difference order must be nonnegative");
    if (n == 0) {
        auto r = difference_window(sample_nodes(F, sys, 1), sys, 0, 0, 0);
        r.method = DiffMethod::Recursive;
        return r;
    }
    auto t = difference_table(sample_nodes(F, sys, n + 1), sys, n);
    DifferenceResult<C> r;
    r.order = n;
    r.method = DiffMethod::Recursive;
    r.value = t.D[static_cast<size_t>(n)][0];
    r.abs_sum = t.M[static_cast<size_t>(n)][0];
    r.condition_estimate = detail::condition_of(r.abs_sum, r.value);
    return r;
}

// sum_k f(x_k,b_k) D^(k)[b_0..b_k]{H} D^(n-k)[b_k..b_n; x_{k+1}..]{F}
template <class C>
DifferenceResult<C> fg_leibniz(const Fn<C>& F, const Fn<C>& H, const NodeSystem<C>& sys, int n) {
    if (n < 0) fail(ErrorKind::Domain, "difference order must be nonnegative");
    auto fv = sample_nodes(F, sys, n + 1);
    auto hv = sample_nodes(H, sys, n + 1);
    C sum{};
    double abs_sum = 0;
    for (int k = 0; k <= n; ++k) {
        C fk = detail::checked_f(sys, sys.param(k), sys.node(k), k, k);
        auto dh = difference_window(hv, sys, 0, 0, k);
        auto df = difference_window(fv, sys, k, k, n - k);
        C t = fk * dh.value * df.value;
        sum += t;
        abs_sum += mag(fk) * std::max(dh.abs_sum, mag(dh.value)) * std::max(df.abs_sum, mag(df.value));
    }
    DifferenceResult<C> r;
    r.value = sum;
    r.order = n;
    r.method = DiffMethod::Leibniz;
    r.abs_sum = abs_sum;
    r.condition_estimate = detail::condition_of(abs_sum, sum);
    return r;
}

// Classical divided difference F[x_1, ..., x_{n+1}].
template <class C>
C divided_difference(const Fn<C>& F, const std::vector<C>& nodes) {
    if (nodes.empty()) fail(ErrorKind::Domain, "divided difference needs at least one node");
    for (size_t i = 0; i < nodes.size(); ++i)
        for (size_t j = i + 1; j < nodes.size(); ++j)
            if (is_exact_zero(C(nodes[i] - nodes[j])))
                fail(ErrorKind::CoincidentNodes, "nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    std::vector<C> t;
    for (const auto& z : nodes) t.push_back(F(z));
    for (size_t level = 1; level < nodes.size(); ++level)
        for (size_t i = 0; i + level < nodes.size(); ++i)
            t[i] = (t[i] - t[i + 1]) / (nodes[i] - nodes[i + level]);
    return t[0];
}

struct BackwardDifferenceRow {
    double h = 0;
    Complex value;   // (-1)^n D^(n) on [x, x+h, ..., x+nh], pair (1, x-y)
    Complex target;  // F^(n)(x)/n!
    double error = 0;
    double observed_order = 0;  // log-slope against the previous row; 0 on the first row
};

struct BackwardDifferenceReport {
    int order = 0;
    std::vector<BackwardDifferenceRow> rows;
};

template <class C>
BackwardDifferenceReport backward_difference_limit(const Fn<C>& F, const C& x, int n, const std::vector<double>& hs,
                                                   const C& nth_derivative) {
    BackwardDifferenceReport rep;
    rep.order = n;
    double fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    C target = nth_derivative / C(fact, 0.0);
    auto pair = make_pair<C>("one-diff");
    for (double h : hs) {
        NodeSystem<C> sys(pair, Sequence<C>::affine(x, C(h, 0.0)), Sequence<C>::affine(C(0.0, 0.0), C(1.0, 0.0)));
        auto d = fg_difference(F, sys, n);
        C v = (n % 2 ? C(-1.0, 0.0) : C(1.0, 0.0)) * d.value;
        BackwardDifferenceRow row;
        row.h = h;
        row.value = to_complex(v);
        row.target = to_complex(target);
        row.error = mag(C(v - target));
        if (!rep.rows.empty()) {
            const auto& prev = rep.rows.back();
            if (prev.error > 0 && row.error > 0 && prev.h != h)
                row.observed_order = std::log(prev.error / row.error) / std::log(prev.h / h);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

template <class C>
C qdiff(const Fn<C>& F, const C& q, const C& x) {
    if (is_exact_zero(x)) fail(ErrorKind::Domain, "q-derivative needs x != 0");
    return (F(x) - F(q * x)) / x;
}

// Explicit n-th power of the q-derivative.
template <class C>
C qdiff_n(const Fn<C>& F, const C& q, const C& x, int n) {
    if (is_exact_zero(x)) fail(ErrorKind::Domain, "q-derivative needs x != 0");
    if (n < 0) fail(ErrorKind::Domain, "q-derivative order must be nonnegative");
    C sum{};
    C xk = x;
    for (int k = 0; k <= n; ++k) {
        C t = qbinom(n, k, q) * ipow(q, binom2(k + 1) - static_cast<long long>(n) * k) * F(xk);
        sum += (k % 2 ? C(-1.0, 0.0) : C(1.0, 0.0)) * t;
        xk *= q;
    }
    return sum / ipow(x, n);
}

// n-fold iteration of the first q-derivative (2^n evaluations).
template <class C>
C qdiff_iterated(const Fn<C>& F, const C& q, const C& x, int n) {
    if (n == 0) return F(x);
    if (is_exact_zero(x)) fail(ErrorKind::Domain, "q-derivative needs x != 0");
    return (qdiff_iterated(F, q, x, n - 1) - qdiff_iterated(F, q, C(q * x), n - 1)) / x;
}

template <class C>
struct ShiftedQDiff {
    C lhs{};  // difference with pair (1, x-y) on [x q^m, ..., x q^{n+m}]
    C rhs{};  // (-1)^n q^{-nm}/(q;q)_n times the n-th q-derivative of t -> F(t q^m) at x
    double abs_sum = 0;
    double relative_gap() const { return mag(C(lhs - rhs)) / std::max(abs_sum, 1e-300); }
};

template <class C>
ShiftedQDiff<C> qdiff_shifted(const Fn<C>& F, const C& q, const C& x, int n, int m) {
    if (is_exact_zero(x)) fail(ErrorKind::Domain, "q-derivative needs x != 0");
    if (n < 0 || m < 0) fail(ErrorKind::Domain, "qdiff_shifted needs n, m >= 0");
    C xm = x * ipow(q, m);
    NodeSystem<C> sys(make_pair<C>("one-diff"), Sequence<C>::geometric(xm, q), Sequence<C>::affine(C{}, C(1.0, 0.0)));
    auto d = fg_difference(F, sys, n);
    Fn<C> shifted = [&](const C& t) { return F(C(t * ipow(q, m))); };
    C sign = n % 2 ? C(-1.0, 0.0) : C(1.0, 0.0);
    ShiftedQDiff<C> out;
    out.lhs = d.value;
    out.rhs = sign * ipow(q, -static_cast<long long>(n) * m) / qpoch(q, q, n) * qdiff_n(shifted, q, x, n);
    out.abs_sum = std::max(d.abs_sum, mag(out.rhs));
    return out;
}

// sum_k q^{(k-n)k} [n,k] D_q^k{F}(x) D_q^{n-k}{t -> H(q^k t)}(x)
template <class C>
C qdiff_leibniz(const Fn<C>& F, const Fn<C>& H, const C& q, const C& x, int n) {
    if (is_exact_zero(x)) fail(ErrorKind::Domain, "q-derivative needs x != 0");
    C sum{};
    for (int k = 0; k <= n; ++k) {
        C qk = ipow(q, k);
        Fn<C> Hk = [&](const C& t) { return H(C(qk * t)); };
        sum += ipow(q, static_cast<long long>(k - n) * k) * qbinom(n, k, q) * qdiff_n(F, q, x, k) * qdiff_n(Hk, q, x, n - k);
    }
    return sum;
}

}  // namespace fgcalc
