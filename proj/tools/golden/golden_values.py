"""Extended-precision reference values frozen into the test suite.

Run offline; the printed numbers are pasted into tests/golden.hpp.
"""
import mpmath as mp

mp.mp.dps = 40


def show(name, v):
    print(f"{name} = {mp.nstr(v, 25)}")


show("theta(10)", mp.siegeltheta(10))
show("theta(100)", mp.siegeltheta(100))
show("theta(1000)", mp.siegeltheta(1000))
show("zeta(1/2)", mp.zeta(mp.mpf(1) / 2))
show("|zeta(1/2)|^4", mp.zeta(mp.mpf(1) / 2) ** 4)
show("first zero", mp.zetazero(1).imag)
for t in [20, 35, 50, 123.456, 1000, 5000.5, 10000]:
    z = mp.zeta(mp.mpc(0.5, t))
    print(f"zeta(1/2+{t}i) = {mp.nstr(z.real, 22)} {mp.nstr(z.imag, 22)}")
for t in [1e5, 1e6]:
    z = mp.zeta(mp.mpc(0.5, t))
    print(f"zeta(1/2+{t}i) = {mp.nstr(z.real, 22)} {mp.nstr(z.imag, 22)}")
print("rhs lemma1 example:", mp.nstr(2 * mp.pi * mp.mpf(15) / 1024, 20))
# normalising constant of the mollifier step
h = lambda u: mp.exp(-1 / (1 - u * u))
show("int_{-1}^{1} exp(-1/(1-u^2))", mp.quad(h, [-1, 0, 1]))
show("S(-0.5) partial", mp.quad(h, [-1, -0.5]) / mp.quad(h, [-1, 0, 1]))
