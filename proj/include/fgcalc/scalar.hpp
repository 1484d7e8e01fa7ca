#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_complex.hpp>

namespace fgcalc {

using Complex = std::complex<double>;

template <unsigned Digits>
using MpComplex = boost::multiprecision::cpp_complex<Digits>;

// Precision tiers. Wide covers most cancellation-heavy checks; Theta is sized
// for theta-pair matrices whose entries reach 1e157; Deep is for order-40
// reconstructions from sampled values.
using Wide = MpComplex<60>;
using ThetaWide = MpComplex<200>;
using Deep = MpComplex<320>;

template <class C>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
    using Real = double;
    static constexpr int digits = 16;
    static Real default_eps() { return 1e-14; }
    static Real machine_eps() { return std::numeric_limits<double>::epsilon(); }
};

template <unsigned D>
struct ScalarTraits<MpComplex<D>> {
    using Real = typename MpComplex<D>::value_type;
    static constexpr int digits = static_cast<int>(D);
    static Real default_eps() { return pow(Real(10), -static_cast<int>(D) + 2); }
    static Real machine_eps() { return std::numeric_limits<Real>::epsilon(); }
};

template <class C>
using RealOf = typename ScalarTraits<C>::Real;

template <class R>
double to_double(const R& r) {
    return static_cast<double>(r);
}

template <class C>
double mag(const C& z) {
    using std::abs;
    return static_cast<double>(abs(z));
}

template <class C>
RealOf<C> abs_of(const C& z) {
    using std::abs;
    return RealOf<C>(abs(z));
}

template <class C>
Complex to_complex(const C& z) {
    using std::real;
    using std::imag;
    return Complex(static_cast<double>(real(z)), static_cast<double>(imag(z)));
}

template <class C>
C from_complex(const Complex& z) {
    return C(z.real(), z.imag());
}

template <class C>
C from_double(double x) {
    return C(x, 0.0);
}

// Integer power by repeated squaring; negative exponents invert.
template <class C>
C ipow(C base, long long e) {
    C result(1.0, 0.0);
    bool neg = e < 0;
    unsigned long long u = neg ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    while (u) {
        if (u & 1ULL) result *= base;
        base *= base;
        u >>= 1;
    }
    return neg ? C(1.0, 0.0) / result : result;
}

template <class C>
bool is_exact_zero(const C& z) {
    using std::real;
    using std::imag;
    return real(z) == 0 && imag(z) == 0;
}

// Treat z as a vanished factor when it is within a few ulps of zero relative to `scale`.
template <class C>
bool is_negligible(const C& z, const RealOf<C>& scale) {
    return abs_of(z) <= RealOf<C>(64) * ScalarTraits<C>::machine_eps() * scale;
}

inline long long binom2(long long n) { return n * (n - 1) / 2; }

template <class C>
std::string precision_name() {
    return std::to_string(ScalarTraits<C>::digits) + " digits";
}

}  // namespace fgcalc
