"""Closed-form reference spectra: rectangles and disks.

Neumann eigenvalues of the disk of radius R are (j'_{p,q} / R)^2 where
j'_{p,q} is the q-th positive zero of the derivative of the Bessel
function J_p (for p = 0 the nontrivial zeros of J_0' = -J_1 are used);
modes with p >= 1 are double.  Rectangle eigenvalues are
pi^2 (m^2/a^2 + n^2/b^2).

Bessel roots are computed from the defining power series with a sign
scan plus bisection.  Beyond the argument range where the float series
is accurate the same series is evaluated in arbitrary precision.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from mpmath import mp, mpf

from .errors import UnsupportedParameter

# float64 series keeps ~9 significant digits up to here; beyond it the
# alternating terms cancel too strongly
_FLOAT_SERIES_MAX_X = 20.0
_MAX_ORDER = 40
_MAX_INDEX = 40


def bessel_j(p: int, x: float) -> float:
    """J_p(x) by direct series summation (float path)."""
    if p < 0:
        val = bessel_j(-p, x)
        return -val if (-p) % 2 else val
    half = 0.5 * x
    term = half**p / float(math.factorial(p)) if p < 20 else _mp_term0(p, half)
    total = term
    for i in range(1, 250):
        term *= -(half * half) / (i * (i + p))
        total += term
        if abs(term) < 1e-18 * (abs(total) + 1e-30) and i > half:
            break
    return total


def _mp_term0(p: int, half: float) -> float:
    return float(mpf(half) ** p / mp.factorial(p))


def bessel_j_deriv(p: int, x: float) -> float:
    """J_p'(x) via the recurrence J_p' = (J_{p-1} - J_{p+1}) / 2."""
    return 0.5 * (bessel_j(p - 1, x) - bessel_j(p + 1, x))


def _bessel_j_mp(p: int, x) -> mpf:
    half = mpf(x) / 2
    term = half**p / mp.factorial(p)
    total = term
    i = 1
    while True:
        term *= -(half * half) / (i * (i + p))
        total += term
        if abs(term) < mpf(10) ** (-mp.dps) and i > float(half):
            break
        i += 1
        if i > 4000:
            break
    return total


def _bessel_j_deriv_mp(p: int, x) -> mpf:
    if p == 0:
        return -_bessel_j_mp(1, x)
    return (_bessel_j_mp(p - 1, x) - _bessel_j_mp(p + 1, x)) / 2


def _bisect(func, lo: float, hi: float) -> float:
    flo = func(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if (flo < 0) == (fmid < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _qth_sign_change(func, lo: float, q: int, step: float = 0.19634954084936207):
    """Bracket the q-th sign change of func on [lo, inf)."""
    x = lo
    fx = func(x)
    found = 0
    for _ in range(100000):
        y = x + step
        fy = func(y)
        if fx == 0.0:
            fx = fy
            x = y
            continue
        if (fx < 0) != (fy < 0):
            found += 1
            if found == q:
                return x, y
        x, fx = y, fy
    raise UnsupportedParameter("sign scan failed to bracket the requested root")


def _root(kind: str, p: int, q: int) -> float:
    """kind 'zero' for J_p, 'deriv' for J_p'."""
    if kind == "zero":
        f_float = lambda x: bessel_j(p, x)
        f_mp = lambda x: _bessel_j_mp(p, x)
    else:
        f_float = lambda x: bessel_j_deriv(p, x)
        f_mp = lambda x: _bessel_j_deriv_mp(p, x)
    lo = max(p * 0.999, 1e-3)
    # coarse bracket with the cheap float series; it keeps the correct
    # sign pattern well past its accuracy range, but switch to high
    # precision once the bracket is beyond the trusted range
    a, b = _qth_sign_change(f_float, lo, q)
    if b <= _FLOAT_SERIES_MAX_X:
        return _bisect(f_float, a, b)
    old_dps = mp.dps
    try:
        mp.dps = 40 + int(b)
        a2, b2 = _qth_sign_change(f_mp, lo, q)
        root = _bisect(f_mp, float(a2), float(b2))
    finally:
        mp.dps = old_dps
    return float(root)


def _check_indices(p: int, q: int):
    if not (isinstance(p, (int, np.integer)) and isinstance(q, (int, np.integer))):
        raise UnsupportedParameter("bessel indices must be integers")
    if p < 0 or q < 1:
        raise UnsupportedParameter("need order p >= 0 and index q >= 1")
    if p > _MAX_ORDER or q > _MAX_INDEX:
        raise UnsupportedParameter(
            f"bessel root indices supported up to p={_MAX_ORDER}, q={_MAX_INDEX}"
        )


@lru_cache(maxsize=None)
def bessel_zero(p: int, q: int) -> float:
    """q-th positive zero of J_p."""
    _check_indices(p, q)
    return _root("zero", p, q)


@lru_cache(maxsize=None)
def bessel_deriv_zero(p: int, q: int) -> float:
    """q-th positive zero of J_p'; for p = 0 the nontrivial zeros
    (those of J_1) are returned."""
    _check_indices(p, q)
    if p == 0:
        return bessel_zero(1, q)
    return _root("deriv", p, q)


def bessel_root(p: int, q: int, kind: str = "zero") -> float:
    """Dispatch to bessel_zero / bessel_deriv_zero by kind."""
    if kind in ("zero", "j"):
        return bessel_zero(p, q)
    if kind in ("deriv", "derivative", "jprime"):
        return bessel_deriv_zero(p, q)
    raise UnsupportedParameter(f"unknown bessel root kind {kind!r}")


def disk_neumann_spectrum(radius: float, kmax: int) -> np.ndarray:
    """mu_0..mu_kmax of the Neumann Laplacian on a disk."""
    if radius <= 0:
        raise UnsupportedParameter("disk radius must be positive")
    if kmax < 0:
        raise UnsupportedParameter("kmax must be nonnegative")
    values = [0.0]
    if kmax == 0:
        return np.array(values)
    cap = 2.0 * (kmax + 1)
    while True:
        roots = []
        p = 0
        while True:
            if bessel_deriv_zero(p, 1) > cap:
                break
            q = 1
            while True:
                r = bessel_deriv_zero(p, q)
                if r > cap:
                    break
                roots.extend([r] if p == 0 else [r, r])
                q += 1
            p += 1
        if len(roots) >= kmax:
            break
        cap *= 1.5
    vals = np.sort(np.array(roots)) ** 2 / radius**2
    return np.concatenate([[0.0], vals[:kmax]])


def rectangle_neumann_spectrum(a: float, b: float, kmax: int) -> np.ndarray:
    """mu_0..mu_kmax of the Neumann Laplacian on an a x b rectangle."""
    if a <= 0 or b <= 0:
        raise UnsupportedParameter("rectangle sides must be positive")
    if kmax < 0:
        raise UnsupportedParameter("kmax must be nonnegative")
    # grow the search window until enough modes lie inside
    cap = np.pi**2 * (kmax + 1) * 4.0 / (a * b) + np.pi**2 * (1.0 / a**2 + 1.0 / b**2)
    while True:
        mmax = int(np.ceil(a * np.sqrt(cap) / np.pi)) + 1
        nmax = int(np.ceil(b * np.sqrt(cap) / np.pi)) + 1
        m = np.arange(mmax + 1)
        n = np.arange(nmax + 1)
        vals = (np.pi**2 * (m[:, None] ** 2 / a**2 + n[None, :] ** 2 / b**2)).ravel()
        vals = np.sort(vals[vals <= cap])
        if len(vals) >= kmax + 1:
            return vals[: kmax + 1]
        cap *= 2.0


def square_neumann_spectrum(side: float, kmax: int) -> np.ndarray:
    return rectangle_neumann_spectrum(side, side, kmax)
