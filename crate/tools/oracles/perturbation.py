"""Reference data for the block-level bounds.

Writes crates/core/tests/fixtures/perturbation.json with
  * `omega`: pairs (alpha, -d/dalpha gamma(alpha, 1)) for the lower
    incomplete gamma function;
  * `deltas`: random blocks lambda I + M with radius R and a member
    perturbation |Q| <= R, together with ||Gamma(lambda I + M + Q) -
    Gamma(lambda I + M)||_p for p = 1 and infinity;
  * `blocks`: random blocks (including negative real parts that need the
    argument reduction) with Gamma(lambda I + M + Q) itself.
All inputs are binary64 values stored with repr, so references are exact
for the stored data up to the printed 30 digits.
"""
import cmath
import json
import math
import random
from pathlib import Path

import mpmath as mp

DPS = 90
DIGITS = 30


def partition(p, rng, jordan):
    if not jordan:
        return [1] * p
    sizes = []
    while p > 0:
        k = rng.randint(1, p)
        sizes.append(k)
        p -= k
    return sizes


def nilpotent(sizes):
    p = sum(sizes)
    m = [[0] * p for _ in range(p)]
    start = 0
    for k in sizes:
        for i in range(k - 1):
            m[start + i][start + i + 1] = 1
        start += k
    return m


def gamma_matrix(b):
    """Gamma of a complex matrix with simple eigenvalues, checked at two precisions."""
    out = []
    for dps in (DPS, DPS + 30):
        with mp.workdps(dps):
            m = mp.matrix([[mp.mpc(*z) for z in row] for row in b])
            e, v = mp.eig(m)
            g = v * mp.diag([mp.gamma(x) for x in e]) * mp.inverse(v)
            out.append(g)
    with mp.workdps(DPS):
        diff = mp.mnorm(out[0] - out[1], 1)
        assert diff < mp.mpf(10) ** (-40) * (1 + mp.mnorm(out[1], 1)), diff
    return out[1]


def gamma_center(lam, sizes):
    p = sum(sizes)
    g = mp.matrix(p, p)
    coeffs = mp.taylor(mp.gamma, mp.mpc(lam.real, lam.imag), max(sizes) - 1)
    start = 0
    for k in sizes:
        for r in range(k):
            for c in range(r, k):
                g[start + r, start + c] = coeffs[c - r]
        start += k
    return g


def norm(a, which):
    rows, cols = a.rows, a.cols
    if which == "one":
        return max(sum(abs(a[i, j]) for i in range(rows)) for j in range(cols))
    return max(sum(abs(a[i, j]) for j in range(cols)) for i in range(rows))


def instance(rng, re_range, im_range):
    p = rng.randint(1, 4)
    jordan = rng.random() < 0.6
    sizes = partition(p, rng, jordan)
    lam = complex(rng.uniform(*re_range), rng.uniform(*im_range))
    scale = 10.0 ** rng.uniform(-9, -1.5)
    radius = [[scale * rng.uniform(0.05, 1.0) for _ in range(p)] for _ in range(p)]
    q = []
    for i in range(p):
        row = []
        for j in range(p):
            mag = 1.0 if rng.random() < 0.5 else rng.random()
            z = radius[i][j] * mag * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            # Stay inside the disc after rounding.
            while abs(z) > radius[i][j] * (1 - 2 ** -50):
                z *= 1 - 2 ** -50
            row.append(z)
        q.append(row)
    m = nilpotent(sizes)
    # Exact sums, no binary64 rounding of the member matrix.
    b = [[(mp.mpf(lam.real) * (i == j) + m[i][j] + mp.mpf(q[i][j].real), mp.mpf(lam.imag) * (i == j) + mp.mpf(q[i][j].imag)) for j in range(p)] for i in range(p)]
    data = {
        "lambda": [repr(lam.real), repr(lam.imag)],
        "sizes": sizes,
        "radius": [[repr(x) for x in row] for row in radius],
        "q": [[[repr(z.real), repr(z.imag)] for z in row] for row in q],
    }
    return data, b, lam, sizes


def shift_norm(data, sizes):
    """min(||M + R||_1, ||M + R||_inf), the bound's precondition threshold."""
    m = nilpotent(sizes)
    a = [[float(r) + m[i][j] for j, r in enumerate(row)] for i, row in enumerate(data["radius"])]
    p = len(a)
    one = max(sum(a[i][j] for i in range(p)) for j in range(p))
    inf = max(sum(row) for row in a)
    return min(one, inf)


def encode(g):
    return [[[mp.nstr(mp.re(g[i, j]), DIGITS), mp.nstr(mp.im(g[i, j]), DIGITS)] for j in range(g.cols)] for i in range(g.rows)]


def main():
    mp.mp.dps = DPS
    rng = random.Random(7001)
    omega = []
    for _ in range(100):
        alpha = 10.0 ** rng.uniform(-2, 2)
        d = -mp.diff(lambda a: mp.gammainc(a, 0, 1), alpha)
        omega.append([repr(alpha), mp.nstr(d, DIGITS)])
    deltas = []
    while len(deltas) < 1000:
        data, b, lam, sizes = instance(rng, (0.3, 10.0), (-3.0, 3.0))
        if lam.real <= shift_norm(data, sizes) + 0.05:
            continue
        diff = gamma_matrix(b) - gamma_center(lam, sizes)
        data["norm_one"] = mp.nstr(norm(diff, "one"), DIGITS)
        data["norm_inf"] = mp.nstr(norm(diff, "inf"), DIGITS)
        deltas.append(data)
    blocks = []
    while len(blocks) < 300:
        data, b, lam, sizes = instance(rng, (-3.9, 14.0), (-2.0, 2.0))
        if lam.imag ** 2 + (lam.real - round(lam.real)) ** 2 < 0.04 and lam.real < 0.5:
            continue
        data["gamma"] = encode(gamma_matrix(b))
        blocks.append(data)
    out = Path(__file__).resolve().parents[2] / "crates/core/tests/fixtures/perturbation.json"
    out.write_text(json.dumps({"omega": omega, "deltas": deltas, "blocks": blocks}) + "\n")


if __name__ == "__main__":
    main()
