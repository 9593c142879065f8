"""Generate Taylor tables for the Riemann-Siegel remainder coefficients C0..C4.

Each C_k(p) is expanded in powers of x = p - 1/2 using high-precision power
series arithmetic on Psi(1/2 + x) = -cos(2 pi x^2 - 5 pi / 8) / cos(2 pi x).
Output is a C++ header fragment written to stdout.
"""
import mpmath as mp

mp.mp.dps = 250
DEG = 96  # working degree of the Psi series
OUT = 56  # emitted degree per C_k


def series_cos_quad():
    # cos(2 pi x^2 - 5pi/8) = cos(5pi/8) cos(2pi x^2) + sin(5pi/8) sin(2pi x^2)
    c = [mp.mpf(0)] * (DEG + 1)
    a, b = mp.cos(5 * mp.pi / 8), mp.sin(5 * mp.pi / 8)
    for m in range(0, DEG // 2 + 1):
        coef = (2 * mp.pi) ** m / mp.factorial(m)
        if m % 4 == 0:
            c[2 * m] += a * coef
        elif m % 4 == 1:
            c[2 * m] += b * coef
        elif m % 4 == 2:
            c[2 * m] -= a * coef
        else:
            c[2 * m] -= b * coef
    return c


def series_cos_lin():
    c = [mp.mpf(0)] * (DEG + 1)
    for n in range(0, DEG + 1, 2):
        c[n] = (-1) ** (n // 2) * (2 * mp.pi) ** n / mp.factorial(n)
    return c


def divide(num, den):
    q = [mp.mpf(0)] * (DEG + 1)
    for n in range(DEG + 1):
        acc = num[n]
        for k in range(1, n + 1):
            acc -= den[k] * q[n - k]
        q[n] = acc / den[0]
    return q


def deriv(c, r):
    out = [mp.mpf(0)] * (DEG + 1)
    for n in range(DEG + 1 - r):
        out[n] = c[n + r] * mp.factorial(n + r) / mp.factorial(n)
    return out


psi = [-v for v in divide(series_cos_quad(), series_cos_lin())]
pi = mp.pi


def comb(terms):
    out = [mp.mpf(0)] * (DEG + 1)
    for w, r in terms:
        d = deriv(psi, r)
        for n in range(DEG + 1):
            out[n] += w * d[n]
    return out


C = [
    comb([(1, 0)]),
    comb([(-1 / (96 * pi**2), 3)]),
    comb([(1 / (64 * pi**2), 2), (1 / (18432 * pi**4), 6)]),
    comb([(-1 / (64 * pi**2), 1), (-1 / (3840 * pi**4), 5), (-1 / (5308416 * pi**6), 9)]),
    comb([(1 / (128 * pi**2), 0), (mp.mpf(19) / (24576 * pi**4), 4),
          (mp.mpf(11) / (5898240 * pi**6), 8), (1 / (2038431744 * pi**8), 12)]),
]


def direct_psi(p):
    return mp.cos(2 * pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * pi * p)


if __name__ == "__main__":
    import sys
    # sanity: series vs closed form at a few points
    for x in [mp.mpf("0.1"), mp.mpf("-0.37"), mp.mpf("0.49")]:
        s = sum(psi[n] * x**n for n in range(DEG + 1))
        assert abs(s - direct_psi(mp.mpf("0.5") + x)) < mp.mpf("1e-30"), (x, s)
    for k, ck in enumerate(C):
        tail = max(abs(ck[n]) * mp.mpf(0.5) ** n for n in range(OUT, DEG + 1))
        cond = sum(abs(ck[n]) * mp.mpf(0.5) ** n for n in range(OUT))
        sys.stderr.write(f"C{k}: tail {mp.nstr(tail, 3)}  sum|c|/2^n {mp.nstr(cond, 5)}\n")
    print("// Generated by tools/golden/rs_coefficients.py; do not edit.")
    print(f"inline constexpr int kRsCoefficientDegree = {OUT - 1};")
    print(f"inline constexpr double kRsCoefficients[5][{OUT}] = {{")
    for ck in C:
        print("    {")
        for n in range(OUT):
            print(f"        {mp.nstr(ck[n], 20, min_fixed=-1, max_fixed=0, strip_zeros=False)},")
        print("    },")
    print("};")
