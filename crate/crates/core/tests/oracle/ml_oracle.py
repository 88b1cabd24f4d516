"""Reference values for the Mittag-Leffler tests, computed with mpmath.

Plain power series at 80 significant digits; run with `python3 ml_oracle.py`
and paste the printed table into tests/ml_reference.rs.
"""
import mpmath as mp

mp.mp.dps = 80


def ml(a, b, z, order=0):
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpc(z)
    s = mp.mpf(0)
    k = order
    while True:
        term = mp.ff(k, order) * z ** (k - order) * mp.rgamma(a * k + b)
        s += term
        if k > order + 10 and abs(term) < mp.mpf(10) ** -60 * (1 + abs(s)):
            return s
        k += 1


CASES = [
    # (alpha, beta, z, derivative order)
    (1.5, 1.0, mp.mpf(-50) ** 1 * mp.mpf(50) ** 0.5, 0),
    (1.5, 1.0, 40 * mp.expjpi(mp.mpf(1) / 4), 0),
    (1.5, 1.0, -1, 0),
    (1.5, 1.0, -3, 0),
    (1.5, 1.0, -40, 0),
    (1.5, 1.5, -12.5, 0),
    (1.9, 2.0, -60, 0),
    (1.1, 1.1, -24, 0),
    (1.25, 1.25, 30 * mp.expj(2.5), 0),
    (1.75, 1.0, -200, 0),
    (1.5, 2.0, -1000, 0),
    (1.5, 1.0, 200 * mp.expjpi(0.8), 0),
    (1.5, 1.0, -2, 1),
    (1.5, 1.0, -30, 1),
    (1.5, 1.5, -30, 2),
    (1.75, 2.0, mp.mpc(-20, 15), 3),
]

if __name__ == "__main__":
    for a, b, z, m in CASES:
        v = ml(a, b, z, m)
        z = mp.mpc(z)
        print(f"    ({a!r}, {b!r}, ({mp.nstr(z.real, 17)}, {mp.nstr(z.imag, 17)}), {m}, ({mp.nstr(v.real, 17)}, {mp.nstr(v.imag, 17)})),")
