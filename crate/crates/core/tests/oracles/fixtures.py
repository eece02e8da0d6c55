"""Extended-precision oracle values frozen into the Rust test suite.

Run with `python3 fixtures.py`; every printed value is pasted verbatim into
the corresponding test. Nothing here imports the Rust implementation.
"""
from mpmath import mp, mpf, gamma, loggamma, psi, besselj, log, exp, pi, sqrt, euler, quad, inf, diff, sin, cos, findroot, factorial, binomial

mp.dps = 50


def omega(n):
    return 2 * pi ** (mpf(n) / 2) / gamma(mpf(n) / 2)


def t_n(n):
    return omega(n) / (2 * pi) ** n


def a_mj(m, j):
    return 2 ** j * factorial(m) / factorial(m - j)


def alt_sum(m, n, lam):
    return sum((-1) ** (j + 1) * a_mj(m, j) / mpf(n) ** (j + 1) * lam ** (mpf(m - j) / m) for j in range(1, m + 1))


def riesz_upper(lam, m, n, vol):
    return t_n(n) * vol * exp(mpf(n) / 2 * lam ** (mpf(1) / m)) * alt_sum(m, n, lam)


def consts(n, m):
    am = mpf(n) ** (m + 1) / (2 ** m * m) * (2 * pi) ** n / omega(n)
    bm = mpf(2) ** m / mpf(n) ** m * (m - 1) ** m + 1 / mpf(n) ** m
    return am, bm, am * bm


def tau_constants(m):
    h = lambda t: (t / 3) ** (mpf(1) / (m - 1)) - log(t + mp.e)
    # bracket by scanning, then refine
    lo = mpf(1)
    hi = mpf(2)
    while h(hi) <= 0:
        lo, hi = hi, hi * 2
    tt = findroot(h, (lo, hi), solver="bisect", tol=mpf(10) ** -40)
    tm = max(mp.e, tt)
    g = lambda t: (m - 1) * log(t) + t - log(tm)
    t0 = findroot(g, (mpf("0.5"), mpf(100)), solver="bisect", tol=mpf(10) ** -40)
    return tt, tm, t0


def eig_lower_i(k, n, m, vol):
    am, bm, cm = consts(n, m)
    _, tm, t0 = tau_constants(m)
    tau = cm * k / vol
    e = mpf(m) / (m - 1)
    b1 = (cm / exp(t0)) ** e * (k / vol) ** e
    b2 = (log(tau + t0 ** (m - 1) * exp(t0)) - (m - 1) * log(log(tau + mp.e)) - log(2)) ** m
    return (mpf(2) / n) ** m * min(b1, b2) - bm, b1, b2


def ball(n, m, r0):
    l = log(2 * sqrt(n + 2)) - log(r0)
    s = sum((-1) ** (j + 1) / mpf(n) ** (j + 2) * factorial(m) / factorial(m - j) * l ** (m - j) for j in range(1, m + 1))
    return 2 ** m * l ** m - 2 ** m * (2 * sqrt(n + 2)) ** n * omega(n) ** 2 / (2 * pi) ** (2 * n) * s


def rescale(lam, r, n, m, vol):
    cm_int = omega(n) * factorial(m) / mpf(n) ** (m + 1)
    lower = lam / 2 ** m - 4 ** m * log(r) ** m - (4 ** m - 1) / (2 * pi) ** n * cm_int * vol
    upper = lam - 2 * log(r) ** m
    return lower, upper


def small_volume_curve(vol, n, m):
    am, bm, cm = consts(n, m)
    _, tm, t0 = tau_constants(m)
    x = cm / vol
    return (mpf(2) / n) ** m * log((x + t0 ** (m - 1) * exp(t0)) / (2 * log(x + mp.e) ** (m - 1))) ** m - bm


def d_m_statement(n, m):
    am, bm, cm = consts(n, m)
    _, tm, t0 = tau_constants(m)
    inner = (m - 1) ** m + mpf(1) / 2 ** m
    return max(exp(t0) / am * inner ** (mpf(m - 1) / m), (2 * exp(inner) - t0 ** (m - 1) * exp(t0)) / am)


def base_integral_n1(j, d):
    # I_j(d) = j-th s-derivative at 0 of g(s) * (2|d|^{1-2s} - |d+1|^{1-2s} - |d-1|^{1-2s})
    def f(s):
        g = gamma(1 + 2 * s) * sin(pi * s) / (2 * pi * s * (2 * s - 1)) if s != 0 else mpf(-1) / 2
        def p(a):
            return mpf(0) if a == 0 else abs(mpf(a)) ** (1 - 2 * s)
        return g * (2 * p(d) - p(d + 1) - p(d - 1))
    return diff(f, 0, j)


def base_integral_n1_quad(j, d):
    # direct quadrature of (1/pi) int_0^inf (2 log u)^j sinc^2(u/2) cos(u d) du:
    # full integrand on [0, 1], then the cosine decomposition
    # 2 cos(du) - cos((d+1)u) - cos((d-1)u) over u^2 on [1, inf)
    f = lambda u: (2 * log(u)) ** j * (sin(u / 2) / (u / 2)) ** 2 * cos(u * d)
    head = quad(f, [0, mpf(1) / 4, mpf(1) / 2, 1])

    def piece(a):
        if a == 0:
            return quad(lambda u: (2 * log(u)) ** j / u ** 2, [1, inf])
        return mp.quadosc(lambda u: (2 * log(u)) ** j * cos(a * u) / u ** 2, [1, inf], omega=a)

    body = 2 * piece(abs(d)) - piece(abs(d + 1)) - piece(abs(d - 1))
    return (head + body) / pi


if __name__ == "__main__":
    print("bessel J0(2.404825557) 50-term series:",
          sum((-1) ** k / (factorial(k) * gamma(k + 1)) * (mpf("2.404825557") / 2) ** (2 * k) for k in range(50)))
    k2 = lambda s, n: 2 ** (-2 * s) * gamma((n - 2 * s) / 2) / (gamma(mpf(n) / 2) * gamma(1 + s))
    k1 = lambda s, n: 2 ** (-2 * s) * pi ** (-mpf(n) / 2) * gamma((n - 2 * s) / 2) / gamma(1 + s)
    print("kappa2'(0) N=2:", diff(lambda s: k2(s, 2), 0, 1), " -2ln2+2gamma:", -2 * log(2) + 2 * euler)
    print("kappa1''(0)/2 N=1:", diff(lambda s: k1(s, 1), 0, 2) / 2)
    print("riesz_upper m=2 N=2 vol=1 lam=4:", riesz_upper(mpf(4), 2, 2, 1))
    print("riesz_upper m=1 N=1 lam=4:", riesz_upper(mpf(4), 1, 1, 1), 2 * exp(2) / pi)
    print("counting_upper m=2 N=1 lam=4 eta=9:", riesz_upper(mpf(9), 2, 1, 1) / 5)
    for m in range(2, 7):
        print("tau m=%d:" % m, tau_constants(m))
    v, b1, b2 = eig_lower_i(1, 1, 2, 1)
    print("eig_lower m=2 N=1 vol=1 k=1:", v, "branches", b1, b2)
    print("ball N=2 m=3 r0=1/2:", ball(2, 3, mpf("0.5")))
    print("rescale m=3 N=2 lam=10 R=2:", rescale(mpf(10), mpf(2), 2, 3, 1))
    print("small volume curve m=3 N=2 vol=1:", small_volume_curve(mpf(1), 2, 3))
    dm = d_m_statement(2, 3)
    am, bm, cm = consts(2, 3)
    print("d_m statement m=3 N=2:", dm, " linear bound vol=1:", bm - dm)
    print("gaussian L1 N=1 x=0:", -(euler + log(2)))
    print("gaussian L2 N=2 x=0:", (euler - log(2)) ** 2 + pi ** 2 / 6)
    for j, d in [(1, 0), (1, 3), (2, 0), (2, 1), (3, 2)]:
        print("I_%d(%d) N=1 closed:" % (j, d), base_integral_n1(j, d))
    for j, d in [(1, 0), (1, 3)]:
        print("I_%d(%d) N=1 quad:" % (j, d), base_integral_n1_quad(j, d))
