"""mpmath reference values frozen into the C++ tests.

Run with `python3 tests/oracles/frozen_values.py`; every printed number is
pasted verbatim into the test that cites it.
"""
import mpmath as mp

mp.mp.dps = 50


def poch(a, q, n):
    r = mp.mpf(1)
    for i in range(n):
        r *= 1 - a * q**i
    return r


def pinf(a, q):
    r, k = mp.mpf(1), 0
    while abs(a * q**k) > mp.mpf(10) ** -55:
        r *= 1 - a * q**k
        k += 1
    return r


def qbin(n, k, q):
    return poch(q, q, n) / (poch(q, q, k) * poch(q, q, n - k))


def c2(n):
    return n * (n - 1) // 2


def show(label, v):
    print(f"{label:44s} {mp.nstr(v, 20)}")


q = mp.mpf("0.5")
show("(q;q)_3 q=0.5", poch(q, q, 3))
show("(q;q)_inf q=0.5", pinf(q, q))
show("euler pentagonal q=0.5",
     sum((-1) ** k * q ** (k * (3 * k - 1) // 2) for k in range(-40, 41)))
show("[4,2] q=0.5", qbin(4, 2, q))

q4, x = mp.mpf("0.4"), mp.mpf("0.7")
show("theta(0.7) (q;q)_inf q=0.4", pinf(x, q4) * pinf(q4 / x, q4) * pinf(q4, q4))
show("triple product sum", sum((-1) ** k * q4 ** c2(k) * x**k for k in range(-60, 61)))

a, z = mp.mpf("0.7"), mp.mpf("0.25")
show("1phi0 a=0.7 z=0.25", pinf(a * z, q) / pinf(z, q))

a, b, x = mp.mpf("0.6"), mp.mpf("0.2"), mp.mpf("0.5")
show("1psi1 closed form",
     pinf(q, q) * pinf(b / a, q) * pinf(a * x, q) * pinf(q / (a * x), q)
     / (pinf(b, q) * pinf(q / a, q) * pinf(x, q) * pinf(b / (a * x), q)))

# order-6 difference of 1/(1-cx), b_i = q^i, x_i = A p^i
c, A, p = mp.mpf("0.3"), mp.mpf("0.3"), mp.mpf("0.4")
show("diff order 6 closed form", c**6 * poch(A * p / c, p, 5) / poch(c, q, 7))

# n-th q-derivative of 1/(1-cx)^2 at x=1 by the explicit formula
F2 = lambda t: 1 / (1 - c * t) ** 2
n = 4
show("qdiff_4 of 1/(1-0.3x)^2 at 1",
     sum((-1) ** k * q ** (c2(k + 1) - n * k) * qbin(n, k, q) * F2(q**k) for k in range(n + 1)))

# limit of K_{n,n}/a_n for a_r = c^r
show("1/(0.5*0.3;q)_inf", 1 / pinf(mp.mpf("0.15"), q))

# generating function closed form F(t)/(x/t;q)_{n+1}
t, x = mp.mpf("0.3"), mp.mpf("0.06")
show("K generating closed form", 1 / (1 - c * t) / poch(x / t, q, 4))

# Gessel-Stanton closed form coefficients at c=0.3, A=0.2
A = mp.mpf("0.2")
for n in (0, 1, 5, 12):
    v = 1 / ((1 - c) * (1 - A)) if n == 0 else (-1) ** n * c**n * poch(A * p / c, p, n - 1) / poch(c, q, n + 1)
    show(f"G({n}) c=0.3 A=0.2", v)
