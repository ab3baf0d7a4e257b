"""Independent derivation of the regression constants frozen in the C++ tests.

Run with: python3 tests/oracles/derive_constants.py
Uses mpmath / numpy only; nothing here calls the library.
"""
import itertools

import mpmath as mp
import numpy as np

mp.mp.dps = 40


def bump(x):
    x = mp.mpf(x)
    if abs(x) >= 2:
        return mp.mpf(0)
    return mp.e ** (mp.mpf(1) / 3 - 1 / (4 - x * x))


def phi_hat(xi):
    # real and even: 2 * int_0^2 phi(x) cos(2 pi x xi) dx
    xi = mp.mpf(xi)
    pts = mp.linspace(0, 2, int(8 * max(1, xi)) + 2)
    return 2 * mp.quad(lambda x: bump(x) * mp.cos(2 * mp.pi * x * xi), pts)


def brute_windowed(d, s, n, zero, wpow, h):
    halves = np.array(list(itertools.product(range(1, n + 1), repeat=s)), dtype=np.int64)
    sums = {i: (halves ** i).sum(axis=1) for i in set(zero) | {wpow}}
    ok = np.ones((len(halves), len(halves)), dtype=bool)
    for i in zero:
        ok &= sums[i][:, None] == sums[i][None, :]
    ok &= np.abs(sums[wpow][:, None] - sums[wpow][None, :]) <= h
    return int(ok.sum())


def weyl_reference(coeffs_desc, n):
    # coefficients are the exact binary values of the doubles
    alphas = [mp.mpf(float(c)) for c in coeffs_desc]
    d = len(alphas)
    total = mp.mpc(0)
    for k in range(1, n + 1):
        ph = sum(alphas[d - i] * mp.mpf(k) ** i for i in range(1, d + 1))
        ph = ph - mp.floor(ph)
        total += mp.expjpi(2 * ph)
    return total


if __name__ == "__main__":
    print("phi(0)        =", mp.nstr(bump(0), 20))
    print("phi(-0.1)     =", mp.nstr(bump(-0.1), 20))
    p0 = phi_hat(0)
    print("phi_hat(0)    =", mp.nstr(p0, 20))
    print("phi_hat(50)/phi_hat(0)  =", mp.nstr(phi_hat(50) / p0, 12))
    print("phi_hat(200)/phi_hat(0) =", mp.nstr(phi_hat(200) / p0, 12))
    print("window count d=3 s=5 N=4 zero{1,3} |s2|<=4:", brute_windowed(3, 5, 4, [1, 3], 2, 4))
    for n in range(1, 9):
        c = brute_windowed(2, 2, n, [1, 2], 1, 10**9)
        assert c == 2 * n * n - n, (n, c)
    print("d=2 s=2 closed form 2N^2-N verified for N<=8")
    mp.mp.dps = 80
    ref = weyl_reference([0.137, 0.421, 0.905], 1000)
    print("f_3((0.137,0.421,0.905);1000) =", mp.nstr(ref.real, 25), mp.nstr(ref.imag, 25))
