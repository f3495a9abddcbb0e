"""Oscillatory-integral oracle, the modified Fresnel function, derivative-test
bounds, and the explicit one-sided stationary-phase expansion.

The integrator is deliberately plain: panels are pre-split so the phase
advances at most one cycle per panel (the phase derivative is monotone for
all models here, so the per-panel slope bound is exact), each panel gets a
15-point Gauss rule with a 7-point rule embedded for the error estimate, and
the worst panel is bisected until the summed estimate clears the tolerance.
No Filon/Levin machinery; this is an oracle, not a production integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .phase import ConditionMProfile, PhaseAmplitudeModel, invert_fprime

_NODES15, _WEIGHTS15 = np.polynomial.legendre.leggauss(15)
_NODES7, _WEIGHTS7 = np.polynomial.legendre.leggauss(7)

DEFAULT_PANEL_CAP = 200_000


@dataclass
class QuadResult:
    value: complex
    abs_error_estimate: float
    panels: int
    converged: bool


def _eval_panels(gfun, phase, los: np.ndarray, his: np.ndarray):
    """(Gauss-15 values, |G15 - G7| estimates) for a batch of panels."""
    mid = 0.5 * (los + his)
    half = 0.5 * (his - los)
    x15 = mid[:, None] + half[:, None] * _NODES15[None, :]
    x7 = mid[:, None] + half[:, None] * _NODES7[None, :]

    def integrand(x):
        ph = np.mod(np.asarray(phase(x), dtype=float), 1.0)
        return np.asarray(gfun(x), dtype=float) * np.exp(2j * np.pi * ph)

    v15 = (integrand(x15) @ _WEIGHTS15) * half
    v7 = (integrand(x7) @ _WEIGHTS7) * half
    return v15, np.abs(v15 - v7)


def _presplit(phase_slope, lo: float, hi: float, splits: list, depth: int = 0):
    """Bisect until width * max|phase'| <= 1 on each piece (slope monotone)."""
    slope = max(abs(phase_slope(lo)), abs(phase_slope(hi)))
    if (hi - lo) * slope <= 1.0 or depth >= 48:
        splits.append((lo, hi))
        return
    mid = 0.5 * (lo + hi)
    _presplit(phase_slope, lo, mid, splits, depth + 1)
    _presplit(phase_slope, mid, hi, splits, depth + 1)


def oscillatory_integral_raw(gfun: Callable, phase: Callable, phase_slope: Callable,
                             alpha: float, beta: float, tol: float,
                             stationary: Optional[float] = None,
                             panel_cap: int = DEFAULT_PANEL_CAP) -> QuadResult:
    """integral of gfun(x) e(phase(x)) over [alpha, beta] by adaptive panels.

    ``phase_slope`` must be monotone on the interval; ``stationary`` names its
    zero when one lies inside, so the pre-split starts there.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if beta <= alpha:
        return QuadResult(0j, 0.0, 0, True)
    pieces = []
    if stationary is not None and alpha < stationary < beta:
        _presplit(phase_slope, alpha, stationary, pieces)
        _presplit(phase_slope, stationary, beta, pieces)
    else:
        _presplit(phase_slope, alpha, beta, pieces)
    los = np.array([p[0] for p in pieces])
    his = np.array([p[1] for p in pieces])
    vals, errs = _eval_panels(gfun, phase, los, his)

    # sweep refinement: bisect the panels carrying the bulk of the error
    # estimate, all in one vectorized batch per sweep; stop when refinement
    # stalls (the estimate has hit the floating phase-noise floor)
    prev_total = math.inf
    while errs.sum() > tol and los.size < panel_cap:
        total = float(errs.sum())
        if total > 0.8 * prev_total:
            break
        prev_total = total
        order = np.argsort(errs)[::-1]
        csum = np.cumsum(errs[order])
        k = int(np.searchsorted(csum, 0.95 * csum[-1])) + 1
        mask = np.zeros(los.size, dtype=bool)
        mask[order[:k]] = True
        keep_lo, keep_hi = los[~mask], his[~mask]
        keep_v, keep_e = vals[~mask], errs[~mask]
        mids = 0.5 * (los[mask] + his[mask])
        new_lo = np.concatenate([los[mask], mids])
        new_hi = np.concatenate([mids, his[mask]])
        new_v, new_e = _eval_panels(gfun, phase, new_lo, new_hi)
        los = np.concatenate([keep_lo, new_lo])
        his = np.concatenate([keep_hi, new_hi])
        vals = np.concatenate([keep_v, new_v])
        errs = np.concatenate([keep_e, new_e])

    order = np.argsort(los, kind="stable")
    value = complex(np.sum(vals[order][np.argsort(np.abs(vals[order]), kind="stable")]))
    total_err = float(errs.sum())
    return QuadResult(value, total_err, int(los.size), total_err <= tol)


def oscillatory_integral(model: PhaseAmplitudeModel, r: float,
                         alpha: float, beta: float, tol: float = 1e-10,
                         panel_cap: int = DEFAULT_PANEL_CAP) -> QuadResult:
    """integral of g(x) e(f(x) - r x) over [alpha, beta]."""
    phase = lambda x: np.asarray(model.f(x), dtype=float) - r * np.asarray(x, dtype=float)
    slope = lambda x: float(model.f1(x)) - r
    stationary = None
    fa, fb = slope(alpha), slope(beta)
    if fa < 0 < fb:
        stationary = invert_fprime(model, r)
    return oscillatory_integral_raw(model.g, phase, slope, alpha, beta, tol,
                                    stationary=stationary, panel_cap=panel_cap)


# ---------------------------------------------------------------------------
# modified Fresnel integral F(u) = int_0^u e(x^2/2) dx
# ---------------------------------------------------------------------------

_FRESNEL_SERIES_CUT = 1.5


def fresnel_modified(u: float) -> complex:
    """F(u) = int_0^u e(x^2/2) dx.

    Power series inside |u| <= 1.5 (the alternating terms stay small enough
    for full double accuracy there), panel quadrature beyond.  F is odd; the
    large-u limit is e(1/8)/2.
    """
    if not math.isfinite(u):
        raise ValueError(f"non-finite input {u!r}")
    if u == 0.0:
        return 0j
    if u < 0.0:
        return -fresnel_modified(-u)
    if u <= _FRESNEL_SERIES_CUT:
        # int_0^u sum_k (i pi)^k x^(2k) / k! dx, term-by-term
        z = 1j * math.pi * u * u
        total = complex(u)
        term = complex(u)
        k = 0
        while True:
            k += 1
            term *= z / k
            inc = term / (2 * k + 1)
            total += inc
            if abs(inc) < 1e-18 * max(1.0, abs(total)):
                return total
    base = fresnel_modified(_FRESNEL_SERIES_CUT)
    res = oscillatory_integral_raw(
        lambda x: np.ones_like(np.asarray(x, dtype=float)),
        lambda x: 0.5 * np.asarray(x, dtype=float) ** 2,
        lambda x: float(x),
        _FRESNEL_SERIES_CUT, u, tol=1e-13)
    return base + res.value


# ---------------------------------------------------------------------------
# derivative tests
# ---------------------------------------------------------------------------

def derivative_test_bounds(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                           alpha: float, beta: float, r: float,
                           samples: int = 512) -> Tuple[float, float]:
    """(first-derivative bound V/(pi kappa), second-derivative bound 4V/sqrt(pi lambda)).

    V is the amplitude's maximum modulus plus total variation on the interval,
    kappa = min |f' - r| (infinite first bound when the slope vanishes inside),
    lambda = min f''.  Callers take the min of the pair.
    """
    xs = np.linspace(alpha, beta, samples)
    g = np.asarray(model.g(xs), dtype=float)
    g1 = np.asarray(model.g1(xs), dtype=float)
    variation = float(np.trapezoid(np.abs(g1), xs))
    V = float(np.max(np.abs(g))) + variation
    sa = float(model.f1(alpha)) - r
    sb = float(model.f1(beta)) - r
    if sa == 0.0 or sb == 0.0 or (sa < 0) != (sb < 0):
        first = math.inf
    else:
        first = V / (math.pi * min(abs(sa), abs(sb)))
    lam = float(np.min(np.asarray(model.f2(xs), dtype=float)))
    second = 4.0 * V / math.sqrt(math.pi * lam) if lam > 0 else math.inf
    return first, second


# ---------------------------------------------------------------------------
# explicit one-sided stationary phase expansion
# ---------------------------------------------------------------------------

def stationary_phase_estimate(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                              r: float, side: str, mu: float,
                              ) -> Tuple[complex, float]:
    """Explicit terms of the one-sided stationary-phase integral and its bound.

    For side='left' this approximates the integral of g(x) e(f(x) - r x) from
    mu up to the stationary point x_r (x_r to mu for side='right'):

        g(c) e(phi(c) + 1/8) / (2 sqrt(f''(c)))
        -/+ g(c) f'''(c) e(phi(c)) / (6 pi i f''(c)^2)
        +/- g'(c) e(phi(c)) / (2 pi i f''(c))
        -/+ g(mu) e(phi(mu)) / (2 pi i (f'(mu) - r))

    with c = x_r, phi = f - r x.  The returned bound is
    U/(f''^2 |mu - x_r|^3) + U/(f''^(3/2) M^2) with implicit constant 1; the
    cubic piece is dropped when mu sits exactly at distance M(x_r).
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    c = invert_fprime(model, r)
    lo, hi = model.domain
    if not (lo <= c <= hi):
        raise ValueError(f"stationary point {c} outside domain")
    d = mu - c
    if side == "left" and d >= 0:
        raise ValueError(f"mu={mu} is not left of x_r={c}")
    if side == "right" and d <= 0:
        raise ValueError(f"mu={mu} is not right of x_r={c}")
    M = float(profile.M(c))
    if abs(d) > M * (1 + 1e-9):
        raise ValueError(f"|mu - x_r| = {abs(d)} exceeds M(x_r) = {M}")
    sgn = +1.0 if side == "right" else -1.0
    fpp = float(model.f2(c))
    fppp = float(model.f3(c))
    g_c = float(model.g(c))
    g1_c = float(model.g1(c))
    phi_c = float(model.f(c)) - r * c
    if model.rhs_phase is not None and r == int(r):
        phi_c = model.rhs_phase(r, c)
    e_c = np.exp(2j * np.pi * (phi_c % 1.0))
    e_c8 = np.exp(2j * np.pi * ((phi_c + 0.125) % 1.0))
    phi_mu = (float(model.f(mu)) - r * mu) % 1.0
    e_mu = np.exp(2j * np.pi * phi_mu)
    slope_mu = float(model.f1(mu)) - r

    val = g_c * e_c8 / (2.0 * math.sqrt(fpp))
    val += sgn * g_c * fppp * e_c / (6j * math.pi * fpp ** 2)
    val -= sgn * g1_c * e_c / (2j * math.pi * fpp)
    val += sgn * float(model.g(mu)) * e_mu / (2j * math.pi * slope_mu)

    U = float(profile.U(c))
    bound = U / (fpp ** 1.5 * M ** 2)
    if abs(abs(d) - M) > 1e-12 * M:
        bound += U / (fpp ** 2 * abs(d) ** 3)
    return complex(val), bound
