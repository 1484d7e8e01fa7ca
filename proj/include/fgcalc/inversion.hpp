#pragma once

#include <string>
#include <vector>

#include "fgcalc/difference.hpp"
#include "fgcalc/errors.hpp"
#include "fgcalc/qcore.hpp"
#include "fgcalc/scalar.hpp"

namespace fgcalc {

// Dense lower triangle; row n holds entries k = 0..n.
template <class C>
struct LowerTriangular {
    std::vector<std::vector<C>> rows;

    explicit LowerTriangular(int size = 0) {
        for (int n = 0; n < size; ++n) rows.emplace_back(static_cast<size_t>(n) + 1, C{});
    }
    int size() const { return static_cast<int>(rows.size()); }
    C at(int n, int k) const { return k > n ? C{} : rows[static_cast<size_t>(n)][static_cast<size_t>(k)]; }
    C& ref(int n, int k) { return rows[static_cast<size_t>(n)][static_cast<size_t>(k)]; }
};

template <class C>
LowerTriangular<C> multiply(const LowerTriangular<C>& A, const LowerTriangular<C>& B) {
    int N = A.size();
    LowerTriangular<C> P(N);
    for (int n = 0; n < N; ++n)
        for (int k = 0; k <= n; ++k) {
            C s{};
            for (int j = k; j <= n; ++j) s += A.at(n, j) * B.at(j, k);
            P.ref(n, k) = s;
        }
    return P;
}

template <class C>
struct TriangularPair {
    int size = 0;
    LowerTriangular<C> B, Binv;
};

// Running products over tabulated f(x_i, b_k) and g(b_i, b_k).
template <class C>
TriangularPair<C> build_pair(const NodeSystem<C>& sys, int size) {
    if (size < 1) fail(ErrorKind::Domain, "matrix size must be at least 1");
    sys.check_distinct(0, size - 1);
    std::vector<C> b = sys.nodes(0, size);
    std::vector<C> x;
    for (int i = 0; i < size; ++i) x.push_back(sys.param(i));
    std::vector<std::vector<C>> F(static_cast<size_t>(size), std::vector<C>(static_cast<size_t>(size)));
    std::vector<std::vector<C>> G(static_cast<size_t>(size), std::vector<C>(static_cast<size_t>(size)));
    for (int i = 0; i < size; ++i)
        for (int k = 0; k < size; ++k) {
            F[static_cast<size_t>(i)][static_cast<size_t>(k)] = sys.pair.f(x[static_cast<size_t>(i)], b[static_cast<size_t>(k)]);
            if (i != k) G[static_cast<size_t>(i)][static_cast<size_t>(k)] = detail::checked_g(sys, b[static_cast<size_t>(i)], b[static_cast<size_t>(k)], i, k);
        }
    auto f = [&](int i, int k) -> const C& { return F[static_cast<size_t>(i)][static_cast<size_t>(k)]; };
    auto g = [&](int i, int k) -> const C& { return G[static_cast<size_t>(i)][static_cast<size_t>(k)]; };
    for (int n = 0; n < size; ++n)
        if (is_exact_zero(f(n, n))) throw ZeroDenominatorError("f(x_n, b_n)", n, n);

    TriangularPair<C> tp;
    tp.size = size;
    tp.B = LowerTriangular<C>(size);
    tp.Binv = LowerTriangular<C>(size);
    C one(1.0, 0.0);
    for (int k = 0; k < size; ++k) {
        C v = one;
        tp.B.ref(k, k) = v;
        for (int n = k + 1; n < size; ++n) {
            v = v * f(n - 1, k) / g(n, k);
            tp.B.ref(n, k) = v;
        }
    }
    for (int n = 0; n < size; ++n) {
        C v = one;
        tp.Binv.ref(n, n) = v;
        for (int k = n - 1; k >= 0; --k) {
            v = v * (f(k, k) / f(k + 1, k + 1)) * f(k + 1, n) / g(k, n);
            tp.Binv.ref(n, k) = v;
        }
    }
    return tp;
}

struct PairVerification {
    int size = 0;
    double left_deviation = 0;   // max |(Binv B - I)[n][k]|
    double right_deviation = 0;  // max |(B Binv - I)[n][k]|
    int left_worst_n = 0, left_worst_k = 0;
    int right_worst_n = 0, right_worst_k = 0;
    double tolerance = 0;
    bool passed = false;
    double max_deviation() const { return std::max(left_deviation, right_deviation); }
};

template <class C>
PairVerification verify_pair(const TriangularPair<C>& tp, double tolerance) {
    PairVerification rep;
    rep.size = tp.size;
    rep.tolerance = tolerance;
    auto scan = [&](const LowerTriangular<C>& P, double& dev, int& wn, int& wk) {
        for (int n = 0; n < P.size(); ++n)
            for (int k = 0; k <= n; ++k) {
                C e = P.at(n, k) - (n == k ? C(1.0, 0.0) : C{});
                double d = mag(e);
                if (!(d <= dev)) {
                    dev = std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
                    wn = n;
                    wk = k;
                }
            }
    };
    scan(multiply(tp.Binv, tp.B), rep.left_deviation, rep.left_worst_n, rep.left_worst_k);
    scan(multiply(tp.B, tp.Binv), rep.right_deviation, rep.right_worst_n, rep.right_worst_k);
    rep.passed = rep.max_deviation() <= tolerance;
    return rep;
}

// X_n = sum_k Y_k f(x_k,b_k) prod_{i<k} g(b_i,b_n) / prod_{i=1}^{k} f(x_i,b_n)
template <class C>
std::vector<C> invert_sum_system(const NodeSystem<C>& sys, const std::vector<C>& Y, int n) {
    if (static_cast<int>(Y.size()) < n + 1) fail(ErrorKind::OutOfRange, "Y needs n+1 entries");
    std::vector<C> X;
    for (int m = 0; m <= n; ++m) {
        C bn = sys.node(m);
        C basis(1.0, 0.0);
        C sum{};
        for (int k = 0; k <= m; ++k) {
            if (k > 0) {
                C fk = sys.pair.f(sys.param(k), bn);
                if (is_exact_zero(fk)) throw ZeroDenominatorError("f(x_i, b_n)", k, m);
                basis = basis * sys.pair.g(sys.node(k - 1), bn) / fk;
            }
            sum += Y[static_cast<size_t>(k)] * sys.pair.f(sys.param(k), sys.node(k)) * basis;
        }
        X.push_back(sum);
    }
    return X;
}

// Y_n = the n-th difference of the sequence X, i.e. the inverse direction.
template <class C>
std::vector<C> apply_difference_system(const NodeSystem<C>& sys, const std::vector<C>& X, int n) {
    if (static_cast<int>(X.size()) < n + 1) fail(ErrorKind::OutOfRange, "X needs n+1 entries");
    std::vector<C> Y;
    for (int m = 0; m <= n; ++m) Y.push_back(difference_window(X, sys, 0, 0, m).value);
    return Y;
}

// Closed-form pair with B = (A p^k q^k;p)_{n-k} q^{-nk}/(q;q)_{n-k} and its inverse.
template <class C>
TriangularPair<C> gessel_stanton_pair(const C& A, const C& p, const C& q, int size) {
    if (size < 1) fail(ErrorKind::Domain, "matrix size must be at least 1");
    if (!(abs_of(p) < 1) || !(abs_of(q) < 1)) fail(ErrorKind::Domain, "gessel_stanton_pair needs |p|, |q| < 1");
    TriangularPair<C> tp;
    tp.size = size;
    tp.B = LowerTriangular<C>(size);
    tp.Binv = LowerTriangular<C>(size);
    C one(1.0, 0.0);
    C pinv = one / p;
    for (int n = 0; n < size; ++n)
        for (int k = 0; k <= n; ++k) {
            C qq = qpoch(q, q, n - k);
            if (is_exact_zero(qq)) throw ZeroDenominatorError("(q;q)_{n-k}", n, k);
            C apq = A * ipow(p, k) * ipow(q, k);
            tp.B.ref(n, k) = qpoch(apq, p, n - k) / qq * ipow(q, -static_cast<long long>(n) * k);
            C sign = (n - k) % 2 ? C(-1.0, 0.0) : one;
            C tail = qpoch(C(A * ipow(q, n) * ipow(p, n - 1)), pinv, n - k - 1);
            tp.Binv.ref(n, k) = sign * ipow(q, binom2(n - k + 1) + static_cast<long long>(n) * k) * (one - apq) * tail / qq;
        }
    return tp;
}

// Entrywise comparison of the closed-form pair with the (1-xy, x-y) pair on
// b_i = q^i, x_i = A p^i after the diagonal similarity
// B_gs[n][k] = (-1)^{n-k} q^{-k^2} B[n][k], Binv_gs[n][k] = (-1)^{n-k} q^{n^2} Binv[n][k].
struct BridgeReport {
    double max_relative_B = 0;
    double max_relative_Binv = 0;
    double max_relative() const { return std::max(max_relative_B, max_relative_Binv); }
};

template <class C>
BridgeReport gessel_stanton_bridge(const C& A, const C& p, const C& q, int size) {
    auto gs = gessel_stanton_pair(A, p, q, size);
    NodeSystem<C> sys(make_pair<C>("onexy-diff"), Sequence<C>::geometric(C(1.0, 0.0), q), Sequence<C>::geometric(A, p));
    auto th = build_pair(sys, size);
    BridgeReport rep;
    for (int n = 0; n < size; ++n)
        for (int k = 0; k <= n; ++k) {
            C sign = (n - k) % 2 ? C(-1.0, 0.0) : C(1.0, 0.0);
            C b = sign * ipow(q, -static_cast<long long>(k) * k) * th.B.at(n, k);
            C bi = sign * ipow(q, static_cast<long long>(n) * n) * th.Binv.at(n, k);
            auto rel = [](const C& u, const C& v) {
                double s = std::max({mag(u), mag(v), 1e-300});
                return mag(C(u - v)) / s;
            };
            rep.max_relative_B = std::max(rep.max_relative_B, rel(gs.B.at(n, k), b));
            rep.max_relative_Binv = std::max(rep.max_relative_Binv, rel(gs.Binv.at(n, k), bi));
        }
    return rep;
}

}  // namespace fgcalc
