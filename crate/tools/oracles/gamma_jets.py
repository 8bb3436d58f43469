"""Reference Taylor coefficients Gamma^(k)(z)/k! at 50 significant digits.

Writes crates/core/tests/fixtures/gamma_jets.json. Arguments are binary64
values, so the reference is exact for the stored inputs.
"""
import json
import random
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50
ORDER = 3
COUNT = 200


def jet(z):
    coeffs = mp.taylor(mp.gamma, z, ORDER)
    return [[mp.nstr(c.real, 25), mp.nstr(c.imag, 25)] for c in coeffs]


def main():
    rng = random.Random(20240611)
    cases = []
    for _ in range(COUNT):
        re = rng.uniform(-2.4, 20.0)
        im = rng.uniform(-10.0, 10.0)
        z = mp.mpc(re, im)
        cases.append({"re": repr(re), "im": repr(im), "jet": jet(z)})
    out = Path(__file__).resolve().parents[2] / "crates/core/tests/fixtures/gamma_jets.json"
    out.write_text(json.dumps({"order": ORDER, "cases": cases}, indent=1) + "\n")


if __name__ == "__main__":
    main()
