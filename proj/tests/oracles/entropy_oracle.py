"""Independent high-precision reference values for the entropy audit tests.

Beta entropies use the closed form
    H = ln B(a,b) - (a-1) psi(a) - (b-1) psi(b) + (a+b-2) psi(a+b).
MaxEnt quantities use adaptive mpmath quadrature of the normalized density
over (0, 1) at 30 digits.

Run: python3 tests/oracles/entropy_oracle.py
"""
import mpmath as mp

mp.mp.dps = 30


def beta_entropy(a, b):
    a, b = mp.mpf(a), mp.mpf(b)
    return (mp.log(mp.beta(a, b)) - (a - 1) * mp.digamma(a) - (b - 1) * mp.digamma(b)
            + (a + b - 2) * mp.digamma(a + b))


def beta_log_moments(a, b):
    a, b = mp.mpf(a), mp.mpf(b)
    return mp.digamma(a) - mp.digamma(a + b), mp.digamma(b) - mp.digamma(a + b)


def maxent(a, b):
    a, b = mp.mpf(a), mp.mpf(b)
    s = lambda x: mp.exp(-a / x - b / (1 - x))
    z = mp.quad(s, [0, mp.sqrt(a) / (mp.sqrt(a) + mp.sqrt(b)), 1])
    p = lambda x: s(x) / z
    h = -mp.quad(lambda x: p(x) * mp.log(p(x)) if p(x) > 0 else 0, [0, 0.5, 1])
    c2 = mp.quad(lambda x: p(x) / x, [0, 0.5, 1])
    c3 = mp.quad(lambda x: p(x) / (1 - x), [0, 0.5, 1])
    return h, c2, c3


if __name__ == "__main__":
    for a, b in [(2, 2), (3, 2), (1.5, 4)]:
        print(f"beta({a},{b}) H = {mp.nstr(beta_entropy(a, b), 17)}"
              f"  E[log x], E[log(1-x)] = {[mp.nstr(v, 17) for v in beta_log_moments(a, b)]}")
    for a, b in [(1, 1), (2, 5)]:
        h, c2, c3 = maxent(a, b)
        print(f"maxent({a},{b}) H = {mp.nstr(h, 17)}  C2 = {mp.nstr(c2, 17)}  C3 = {mp.nstr(c3, 17)}")
