#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "fgcalc/difference.hpp"
#include "fgcalc/errors.hpp"
#include "fgcalc/qcore.hpp"
#include "fgcalc/scalar.hpp"

namespace fgcalc {

// A closed-world function name plus its parameters, e.g. inv1mcx:c=0.3.
struct FunctionSpec {
    std::string name;
    std::map<std::string, Complex> params;
};

struct FunctionInfo {
    std::string name;
    std::string formula;
    std::map<std::string, Complex> defaults;
};

const std::vector<FunctionInfo>& function_catalog();
std::vector<std::string> function_names();
FunctionSpec parse_function_spec(const std::string& text);  // throws Usage on unknown names
std::string format_function_spec(const FunctionSpec& spec);

// sin(pi x) with the integer part removed first, so integers give exactly 0.
template <class C>
C sinpi(const C& x) {
    using std::real;
    using std::sin;
    using std::round;
    using Real = RealOf<C>;
    Real re = Real(real(x));
    Real n = round(re);
    C r = x - C(n, Real(0));
    if (is_exact_zero(r)) return C(0.0, 0.0);
    C v = sin(C(boost::math::constants::pi<Real>(), Real(0)) * r);
    long long ni = static_cast<long long>(to_double(n));
    return ni % 2 ? C(-v) : v;
}

namespace detail {

template <class C>
C param_or(const FunctionSpec& s, const std::string& key) {
    auto it = s.params.find(key);
    if (it != s.params.end()) return from_complex<C>(it->second);
    for (const auto& info : function_catalog())
        if (info.name == s.name) {
            auto d = info.defaults.find(key);
            if (d != info.defaults.end()) return from_complex<C>(d->second);
        }
    fail(ErrorKind::MissingParameter, "function " + s.name + " needs parameter " + key);
}

}  // namespace detail

template <class C>
Fn<C> make_function(const FunctionSpec& s) {
    using std::exp;
    using std::pow;
    using std::real;
    auto P = [&](const std::string& k) { return detail::param_or<C>(s, k); };
    const std::string& n = s.name;
    C one(1.0, 0.0);
    if (n == "inv1mcx") {
        C c = P("c");
        return [c, one](const C& x) { return one / (one - c * x); };
    }
    if (n == "power") {
        C r = P("r");
        double rd = to_double(real(r));
        bool integral = std::abs(rd - std::round(rd)) == 0 && mag(C(r - C(rd, 0.0))) == 0;
        long long ri = static_cast<long long>(std::llround(rd));
        if (integral) return [ri](const C& x) { return ipow(x, ri); };
        return [r](const C& x) { return C(pow(x, r)); };
    }
    if (n == "sinpi") return [](const C& x) { return sinpi(x); };
    if (n == "exp") return [](const C& x) { return C(exp(x)); };
    if (n == "exp-trunc") {
        int m = static_cast<int>(to_double(real(P("m"))));
        return [m, one](const C& x) {
            C s{}, t = one;
            for (int j = 0; j <= m; ++j) {
                s += t;
                t = t * x / C(static_cast<double>(j + 1), 0.0);
            }
            return s;
        };
    }
    if (n == "qbinomial-F") {
        C z = P("z");
        QBase<C> base(P("q"));
        return [z, base](const C& x) { return qpoch_inf(C(z * x), base).value / qpoch_inf(z, base).value; };
    }
    if (n == "qgauss-F") {
        C a = P("a"), c = P("c");
        QBase<C> base(P("q"));
        return [a, c, base](const C& x) {
            auto I = [&](const C& v) { return qpoch_inf(v, base).value; };
            return I(C(c / a)) * I(C(c * x)) / (I(c) * I(C(c * x / a)));
        };
    }
    if (n == "rogers-fine-F") {
        C a = P("a"), z = P("z");
        QBase<C> base(P("q"));
        return [a, z, base](const C& x) { return phi<C>({a, base.q}, {x}, base, z).value; };
    }
    if (n == "ramanujan-F") {
        C a = P("a"), xv = P("x");
        QBase<C> base(P("q"));
        return [a, xv, base](const C& y) {
            auto I = [&](const C& v) { return qpoch_inf(v, base).value; };
            const C& q = base.q;
            return I(q) * I(C(y / a)) * I(C(a * xv)) * I(C(q / (a * xv))) /
                   (I(y) * I(C(q / a)) * I(xv) * I(C(y / (a * xv))));
        };
    }
    if (n == "heine-F") {
        C a = P("a"), c = P("c"), z = P("z");
        QBase<C> base(P("q"));
        return [a, c, z, base](const C& x) {
            auto I = [&](const C& v) { return qpoch_inf(v, base).value; };
            return I(c) * I(z) / (I(x) * I(C(a * z))) * phi<C>({a, x}, {c}, base, z).value;
        };
    }
    if (n == "jackson-F") {
        C a = P("a"), c = P("c"), z = P("z");
        QBase<C> base(P("q"));
        return [a, c, z, base](const C& x) {
            auto I = [&](const C& v) { return qpoch_inf(v, base).value; };
            return I(z) / I(C(a * z)) * phi<C>({a, x}, {c}, base, z).value;
        };
    }
    if (n == "rogers-6phi5-F") {
        C a = P("a"), b = P("b"), c = P("c");
        QBase<C> base(P("q"));
        return [a, b, c, base](const C& x) {
            auto I = [&](const C& v) { return qpoch_inf(v, base).value; };
            const C& q = base.q;
            C aq = a * q;
            return I(aq) * I(C(aq / (b * c))) / (I(C(aq / b)) * I(C(aq / c))) * I(C(aq * x / c)) * I(C(aq * x / b)) /
                   (I(C(aq * x)) * I(C(aq * x / (b * c))));
        };
    }
    if (n == "carlitz-lebesgue-F") {
        // sum_i (-1)^i q^{C(i,2)} (b x q^i)_inf/(q)_i y^i / ((y)_inf (x y q^i)_inf), with the
        // infinite products advanced by their one-step ratios.
        C b = P("b"), xv = P("x");
        QBase<C> base(P("q"));
        return [b, xv, base, one](const C& y) {
            const C& q = base.q;
            C bx = b * xv, xy = xv * y;
            C p1 = qpoch_inf(bx, base).value;
            C p2 = qpoch_inf(xy, base).value;
            C py = qpoch_inf(y, base).value;
            C qq = one, yi = one, qi = one, qc2 = one;
            std::function<C(int)> term;
            C st_p1 = p1, st_p2 = p2, st_qq = qq, st_yi = yi, st_qi = qi, st_qc2 = qc2;
            int next = 0;
            term = [&](int i) {
                // state holds the factors for index `next`; terms are requested in order
                while (next < i) {
                    st_p1 /= one - bx * st_qi;
                    st_p2 /= one - xy * st_qi;
                    st_qq *= one - q * st_qi;
                    st_qc2 *= st_qi;
                    st_yi *= y;
                    st_qi *= q;
                    ++next;
                }
                C t = st_qc2 * st_p1 / st_qq * st_yi / st_p2;
                return i % 2 ? C(-t) : t;
            };
            return sum_series(term, base).value / py;
        };
    }
    if (n == "gasper-F") {
        C a = P("a"), b = P("b"), p = P("p"), q = P("q");
        long long m = std::llround(to_double(real(P("m"))));
        return [a, b, p, q, m](const C& x) {
            return qpoch(C(a * p), p, m) * qpoch(C(b * p), p, m) * qpoch(C(q / x), q, m) * qpoch(C(a * q * x / b), q, m) /
                   (qpoch(q, q, m) * qpoch(C(a * q / b), q, m) * qpoch(C(a * p * x), p, m) * qpoch(C(b * p / x), p, m));
        };
    }
    fail(ErrorKind::Usage, "unknown function '" + n + "'");
}

template <class C>
Fn<C> make_function(const std::string& text) {
    return make_function<C>(parse_function_spec(text));
}

}  // namespace fgcalc
