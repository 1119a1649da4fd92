"""Recompute the frozen reference values used by the test suite.

Everything here runs on mpmath at 30 digits and never imports the package,
so the numbers stay independent of the code they check.
"""

import mpmath as mp

mp.mp.dps = 30
PI = mp.pi


def q(x):
    return mp.erfc(mp.mpf(x) / mp.sqrt(2)) / 2


def branch(s, n, snr, coeff):
    base = 1 - s * n * (4 - PI) * snr / 4
    lam = n**2 * PI * snr / coeff
    return base ** mp.mpf(-0.5) * mp.exp(s * lam / base)


def printed_branch(s, n, snr):
    base = 1 - s * n * (4 - PI) * snr / 4
    return base ** mp.mpf(-0.5) * mp.exp(-s * n**2 * PI * snr / 8 / base)


def relay_integrand(w, g, cfg, coeff):
    ps1, ps2, n0, n1, n2 = cfg
    s = -g / (2 * mp.sin(w) ** 2)
    return branch(s, n1, ps1 / n0, coeff) * branch(s, n2, ps2 / n0, coeff)


def power_factors(ps1, ps2):
    hi, lo = max(ps1, ps2), min(ps1, ps2)
    return lo, (2 * mp.sqrt(hi) + mp.sqrt(lo)) ** 2, (2 * mp.sqrt(hi) - mp.sqrt(lo)) ** 2


def relay_approx(cfg, coeff=8):
    g = min(cfg[0], cfg[1])
    return mp.quad(lambda w: relay_integrand(w, g, cfg, coeff), [0, PI / 4, PI / 2]) / PI


def relay_exact(cfg, coeff=8):
    pg = power_factors(cfg[0], cfg[1])
    f = lambda w: sum((-1) ** i * relay_integrand(w, g, cfg, coeff) for i, g in enumerate(pg))
    return mp.quad(f, [0, PI / 4, PI / 2]) / PI


def link_factor(w, na, p, n0):
    base = 1 + na * (4 - PI) * p / (2 * n0 * mp.sin(w) ** 2)
    return base ** mp.mpf(-0.5) * mp.exp(-(na**2 * PI * p / (4 * n0 * mp.sin(w) ** 2)) / base)


def link_bound(na, p, n0):
    return link_factor(PI / 2, na, p, n0) / 2


def link_integral(na, p, n0):
    return mp.quad(lambda w: link_factor(w, na, p, n0), [0, PI / 4, PI / 2]) / PI


if __name__ == "__main__":
    r2 = mp.sqrt(2)
    print("Q(1)", q(1))
    print("Q(8)", q(8))
    print("pi*Q(1)", PI * q(1))
    print("outer 2,1", q(1) - q(2 * r2 + 1))
    print("outer 1,1", q(1) - q(3))
    print("inner 2,1", q(1) + q(2 * r2 - 1))
    print("inner 1,1", 2 * q(1))
    print("exact 2,1", q(1) - q(2 * r2 + 1) / 2 + q(2 * r2 - 1) / 2)
    print("exact 1,1", 1.5 * q(1) - 0.5 * q(3))
    print("Q(3)", q(3))
    print("mgf corrected branch n8 snr1 s-0.1", branch(-0.1, 8, 1, 8))
    print("mgf corrected n8 n8", branch(-0.1, 8, 1, 8) ** 2)
    print("mgf printed n8 n8", printed_branch(-0.1, 8, 1) ** 2)
    for s in (-0.01, -0.1, -1):
        print("mgf derived branch n8 snr1 s", s, branch(s, 8, 1, 16))
    cfg = (2, 1, 1, 8, 8)
    print("integrand pi/2", relay_integrand(PI / 2, 1, cfg, 8))
    print("bound", relay_integrand(PI / 2, 1, cfg, 8) / 2)
    print("approx corrected v8", relay_approx(cfg))
    print("approx corrected v16", relay_approx((2, 1, 1, 16, 16)))
    print("approx derived v8", relay_approx(cfg, 16))
    print("exact corrected", relay_exact(cfg))
    print("exact derived", relay_exact(cfg, 16))
    hs = (2, 1, mp.mpf("1e-3"), 8, 8)
    print("high snr exact/approx", relay_exact(hs) / relay_approx(hs))
    pg = power_factors(2, 1)
    print("asymptotic ratio", 1 + pg[0] / pg[2] - pg[0] / pg[1])
    print("link bound N4 P2", link_bound(4, 2, 1))
    print("link integral N4 P2", link_integral(4, 2, 1))
    # overall D1 at (ps1=2, ps2=1, pr=2, n0=1, N=8): direct N=4,P=2; relay-dest N=4,P=2
    pe_r = relay_exact(cfg)
    print("overall D1 integral", link_integral(4, 2, 1) + pe_r * link_integral(4, 2, 1))
    print("overall D2 integral", link_integral(4, 1, 1) + pe_r * link_integral(4, 2, 1))
    # Rayleigh-MGF oracle check for mgf_ber
    gbar = mp.mpf(3)
    f = lambda w: 1 / (1 + 2 / (2 * mp.sin(w) ** 2) * gbar)
    print("rayleigh mgf avg", mp.quad(f, [0, PI / 2]) / PI, (1 - mp.sqrt(gbar / (1 + gbar))) / 2)
