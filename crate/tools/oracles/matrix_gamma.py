"""Reference Gamma(A) for the test corpus at 50 significant digits.

Writes crates/matgamma/tests/fixtures/matrix_gamma.json. Matrices are
rebuilt from their exact definitions (the gallery entries are exact binary64
values), diagonalizable ones are handled through a high-precision
eigendecomposition whose residual is checked, and the defective examples
through an exact Jordan form.
"""
import json
from fractions import Fraction
from math import gcd
from pathlib import Path

import mpmath as mp
import sympy as sp

mp.mp.dps = 80
DIGITS = 30

A0 = [[2, 2, 1, 0], [0, 1, 1, 1], [-1, -1, 0, 0], [1, 1, 1, 1]]


def frank(n):
    return [[n - max(i, j) if j + 1 >= i else 0 for j in range(n)] for i in range(n)]


def scaled(f, n):
    return [[Fraction(f(i + 1, j + 1), n) for j in range(n)] for i in range(n)]


def poisson(g):
    n = g * g
    a = [[0] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            ri, rj, ci, cj = r // g, r % g, c // g, c % g
            if r == c:
                a[r][c] = 4
            elif (ri == ci and abs(rj - cj) == 1) or (rj == cj and abs(ri - ci) == 1):
                a[r][c] = -1
    return a


def to_mp(a):
    return mp.matrix([[mp.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in row] for row in a])


def gamma_diagonalizable(a, symmetric=False):
    m = to_mp(a)
    if symmetric:
        e, v = mp.eigsy(m)
        vi = v.T
    else:
        e, v = mp.eig(m)
        vi = mp.inverse(v)
    n = m.rows
    resid = mp.mnorm(m * v - v * mp.diag(e), 1)
    assert resid < mp.mpf(10) ** (-60) * (1 + mp.mnorm(m, 1)), resid
    return v * mp.diag([mp.gamma(x) for x in e]) * vi, n


def gamma_jordan(a):
    s = sp.Matrix(a)
    p, j = s.jordan_form()
    n = s.rows
    g = mp.matrix(n, n)
    i = 0
    while i < n:
        lam = j[i, i]
        k = 1
        while i + k < n and j[i + k - 1, i + k] == 1 and j[i + k, i + k] == lam:
            k += 1
        coeffs = mp.taylor(mp.gamma, mp.mpmathify(sp.N(lam, 90)), k - 1)
        for r in range(k):
            for c in range(r, k):
                g[i + r, i + c] = coeffs[c - r]
        i += k
    pm = mp.matrix([[mp.mpmathify(sp.N(x, 90)) for x in row] for row in p.tolist()])
    return pm * g * mp.inverse(pm), n


def ex2(eps):
    e = mp.mpf(eps)
    g1, g2 = mp.gamma(1), mp.gamma(1 + e)
    return mp.matrix([[g1, (g2 - g1) / e], [0, g2]]), 2


def encode(g, n):
    re = [[mp.nstr(mp.re(g[i, j]), DIGITS) for j in range(n)] for i in range(n)]
    im = [[mp.nstr(mp.im(g[i, j]), DIGITS) for j in range(n)] for i in range(n)]
    return re, im


def main():
    cases = []

    def add(name, n, param, g_n):
        re, im = encode(*g_n)
        cases.append({"gallery": name, "n": n, "param": param, "real": re, "imag": im})

    for n in (5, 7, 9):
        add("frank", n, None, gamma_diagonalizable(frank(n)))
    for n in (10, 30, 50):
        add("gcdmat", n, None, gamma_diagonalizable(scaled(gcd, n), symmetric=True))
        add("minij", n, None, gamma_diagonalizable(scaled(min, n), symmetric=True))
    for g in (3, 6):
        add("poisson", g, None, gamma_diagonalizable(poisson(g), symmetric=True))
    add("ex2", 0, 2.0 ** -48, ex2(2.0 ** -48))
    for sigma in (0.5, 1.0, 2.0):
        a = [[sp.Rational(sigma) * x for x in row] for row in A0]
        add("ex3", 0, sigma, gamma_jordan(a))
    out = Path(__file__).resolve().parents[2] / "crates/matgamma/tests/fixtures/matrix_gamma.json"
    out.write_text(json.dumps({"cases": cases}, indent=1) + "\n")


if __name__ == "__main__":
    main()
