"""Local-regularity verification and the complete transform error budget.

The budget of the main estimate splits into:

    Delta1(a), Delta1(b)   stationary point adjacent to an endpoint
    Delta2(a), Delta2(b)   second-order endpoint contributions
    Delta3(a), Delta3(b)   tail integrals from abar/bbar outward
    Delta4                 smooth global variation integral, the K
                           functionals over the critical-point partition,
                           and the isolated amplitude-zero sum

All big-O terms are evaluated with implicit constant 1 and reported as
magnitudes; experiment code fits empirical constants separately and never
folds them in here.

The partition of the extended interval J classifies where the second
integration by parts has interior critical points: J_pm collects intervals
where G != 0 and H^2 - G >= 0 (two real branches), J_0 where g'' vanishes
identically but g and H do not (single branch), and J_null the isolated
amplitude zeros with g' and g'' nonzero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .numutil import is_integer_like, sawtooth_s
from .phase import ConditionMProfile, PhaseAmplitudeModel, invert_fprime


# ---------------------------------------------------------------------------
# condition (M) verification
# ---------------------------------------------------------------------------

_INEQUALITIES = (
    "f2_upper", "f2_lower", "f3", "f4", "g0", "g1", "g2",
)


@dataclass
class ConditionMReport:
    passed: bool
    part1_ok: bool
    part2_ok: bool
    part3_ok: bool
    worst_ratios: dict
    violations: List[dict]
    interval: Tuple[float, float]
    extended_interval: Tuple[float, float]
    grid: int

    def to_json(self) -> dict:
        return {
            "schema": "condition-m-report/1",
            "passed": self.passed,
            "parts": {"I": self.part1_ok, "II": self.part2_ok, "III": self.part3_ok},
            "worstRatios": self.worst_ratios,
            "violations": self.violations,
            "interval": list(self.interval),
            "extendedInterval": list(self.extended_interval),
            "grid": self.grid,
        }


def fprime_nearest(model: PhaseAmplitudeModel, x: float) -> Tuple[int, float, float]:
    """(nearest integer to f'(x), signed offset, distance), family-exact
    integer detection when the model provides it."""
    v = float(model.f1(x))
    if model.fprime_integer is not None:
        r = model.fprime_integer(x)
        if r is not None:
            return r, 0.0, 0.0
    n = math.floor(v + 0.5)
    off = v - n
    if is_integer_like(v):
        return round(v), 0.0, 0.0
    return n, off, abs(off)


def m_count(model: PhaseAmplitudeModel, mu: float) -> int:
    """Number of integers in the open interval (f'-f'', f'+f'') minus f' itself."""
    fp = float(model.f1(mu))
    fpp = float(model.f2(mu))
    lo, hi = fp - fpp, fp + fpp
    count = math.ceil(hi) - math.floor(lo) - 1
    if count < 0:
        count = 0
    _, _, dist = fprime_nearest(model, mu)
    if dist == 0.0 and lo < fp < hi:
        count -= 1
    return max(count, 0)


def condition_m_domain(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                       a: float, b: float) -> Tuple[float, float]:
    """The extended interval J = [a - c(a) M(a), b + c(b) M(b)], clipped to the
    model's smoothness domain."""
    ca = 1.0 if m_count(model, a) >= 1 else 0.0
    cb = 1.0 if m_count(model, b) >= 1 else 0.0
    lo = a - ca * float(profile.M(a))
    hi = b + cb * float(profile.M(b))
    dlo, dhi = model.domain
    return max(lo, dlo), min(hi, dhi)


def check_condition_M(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                      a: float, b: float, grid: int = 32) -> ConditionMReport:
    """Sweep the regularity inequalities on Chebyshev nodes of [a, b].

    For each node x, 64 points z of I_x = [x - M(x), x + M(x)] cut to J are
    tested against the f'' sandwich, the f''' and f'''' decay bounds, and the
    three amplitude bounds.  Worst ratios (value / allowance) and the located
    violations are reported; the report never raises.
    """
    if grid < 16:
        raise ValueError("grid must be at least 16")
    part1 = max(float(profile.M(a)), float(profile.M(b))) <= (b - a) * (1 + 1e-12)
    part2 = profile.delta < 1.0 and profile.eta < 2.0
    jlo, jhi = condition_m_domain(model, profile, a, b)
    dlo, dhi = model.domain
    ca = 1.0 if m_count(model, a) >= 1 else 0.0
    cb = 1.0 if m_count(model, b) >= 1 else 0.0
    part3 = (a - ca * float(profile.M(a)) >= dlo - 1e-12) and \
            (b + cb * float(profile.M(b)) <= dhi + 1e-12)

    k = np.arange(grid)
    xs = 0.5 * (a + b) + 0.5 * (b - a) * np.cos((2 * k + 1) * np.pi / (2 * grid))
    worst = {name: 0.0 for name in _INEQUALITIES}
    violations: List[dict] = []
    eta = profile.eta
    for x in xs:
        x = float(x)
        Mx = float(profile.M(x))
        Ux = float(profile.U(x))
        fppx = float(model.f2(x))
        zlo, zhi = max(x - Mx, jlo), min(x + Mx, jhi)
        zs = np.linspace(zlo, zhi, 64)
        f2z = np.asarray(model.f2(zs), dtype=float)
        f3z = np.abs(np.asarray(model.f3(zs), dtype=float))
        f4z = np.abs(np.asarray(model.f4(zs), dtype=float))
        g0z = np.abs(np.asarray(model.g(zs), dtype=float))
        g1z = np.abs(np.asarray(model.g1(zs), dtype=float))
        g2z = np.abs(np.asarray(model.g2(zs), dtype=float))
        checks = (
            ("f2_upper", f2z / (profile.C2 * fppx)),
            ("f2_lower", fppx / (profile.C2_minus * f2z)),
            ("f3", f3z * Mx / (eta * fppx)),
            ("f4", f4z * Mx * Mx / (eta * eta * profile.C4 * fppx)),
            ("g0", g0z / (profile.D0 * Ux)),
            ("g1", g1z * Mx / (profile.D1 * Ux)),
            ("g2", g2z * Mx * Mx / (profile.D2 * Ux)),
        )
        for name, ratios in checks:
            i = int(np.argmax(ratios))
            rmax = float(ratios[i])
            if rmax > worst[name]:
                worst[name] = rmax
            if rmax > 1.0 + 1e-12:
                violations.append({"inequality": name, "x": x, "z": float(zs[i]), "ratio": rmax})
    passed = part1 and part2 and part3 and not violations
    return ConditionMReport(passed, part1, part2, part3, worst, violations,
                            (a, b), (jlo, jhi), grid)


# ---------------------------------------------------------------------------
# critical-point functions H, G, W, r and their derivatives
# ---------------------------------------------------------------------------

@dataclass
class WRFunctions:
    """H, G, the branch functions W_pm / r_pm, W_0 / r_0, and derivatives.

    Branches take sigma = +1 or -1.  All of them assume the point is inside
    the region where the branch is defined (g'' != 0 for the pm pair, H != 0
    for the 0 pair); no masking is done here.
    """

    model: PhaseAmplitudeModel

    def H(self, x):
        m = self.model
        return m.g(x) * m.f3(x) + 3.0 * m.g1(x) * m.f2(x)

    def H_prime(self, x):
        m = self.model
        return 4.0 * m.g1(x) * m.f3(x) + 3.0 * m.g2(x) * m.f2(x) + m.g(x) * m.f4(x)

    def G(self, x):
        m = self.model
        return 12.0 * m.g(x) * m.g2(x) * m.f2(x) ** 2

    def G_prime(self, x):
        m = self.model
        return 12.0 * (m.g1(x) * m.g2(x) * m.f2(x) ** 2
                       + m.g(x) * m.g3(x) * m.f2(x) ** 2
                       + 2.0 * m.g(x) * m.g2(x) * m.f2(x) * m.f3(x))

    def discriminant(self, x):
        return self.H(x) ** 2 - self.G(x)

    # --- pm branches ---------------------------------------------------

    def _P(self, x, sigma):
        return self.H(x) + sigma * np.sqrt(self.discriminant(x))

    def _P_prime(self, x, sigma):
        S = np.sqrt(self.discriminant(x))
        return self.H_prime(x) + sigma * (2.0 * self.H(x) * self.H_prime(x)
                                          - self.G_prime(x)) / (2.0 * S)

    def r_branch(self, x, sigma):
        m = self.model
        return m.f1(x) - self._P(x, sigma) / (2.0 * m.g2(x))

    def r_branch_prime(self, x, sigma):
        m = self.model
        P, Pp = self._P(x, sigma), self._P_prime(x, sigma)
        g2, g3 = m.g2(x), m.g3(x)
        return m.f2(x) - (Pp / (2.0 * g2) - P * g3 / (2.0 * g2 ** 2))

    def W_branch(self, x, sigma):
        m = self.model
        P = self._P(x, sigma)
        g1, g2 = m.g1(x), m.g2(x)
        return (2.0 * g2) ** 2 * g1 / P ** 2 - (2.0 * g2) ** 3 * m.f2(x) * m.g(x) / P ** 3

    def W_branch_prime(self, x, sigma):
        m = self.model
        P, Pp = self._P(x, sigma), self._P_prime(x, sigma)
        g, g1, g2, g3 = m.g(x), m.g1(x), m.g2(x), m.g3(x)
        f2, f3 = m.f2(x), m.f3(x)
        A_p = (8.0 * g2 * g3 * g1 + 4.0 * g2 ** 3) / P ** 2 \
            - 8.0 * g2 ** 2 * g1 * Pp / P ** 3
        B_p = 8.0 * (3.0 * g2 ** 2 * g3 * f2 * g + g2 ** 3 * f3 * g + g2 ** 3 * f2 * g1) / P ** 3 \
            - 24.0 * g2 ** 3 * f2 * g * Pp / P ** 4
        return A_p - B_p

    # --- zero branch (g'' identically zero) -----------------------------

    def r0(self, x):
        m = self.model
        return m.f1(x) - 3.0 * m.g(x) * m.f2(x) ** 2 / self.H(x)

    def r0_prime(self, x):
        m = self.model
        H, Hp = self.H(x), self.H_prime(x)
        g, g1 = m.g(x), m.g1(x)
        f2, f3 = m.f2(x), m.f3(x)
        num = (g1 * f2 ** 2 + 2.0 * g * f2 * f3) * H - g * f2 ** 2 * Hp
        return f2 - 3.0 * num / H ** 2

    def W0(self, x):
        m = self.model
        return -self.H(x) ** 2 * m.f3(x) / (27.0 * m.g(x) * m.f2(x) ** 5)

    def W0_prime(self, x):
        m = self.model
        H, Hp = self.H(x), self.H_prime(x)
        g, g1 = m.g(x), m.g1(x)
        f2, f3, f4 = m.f2(x), m.f3(x), m.f4(x)
        return (-(2.0 * H * Hp * f3 + H ** 2 * f4) / (27.0 * g * f2 ** 5)
                + H ** 2 * f3 * (g1 * f2 + 5.0 * g * f3) / (27.0 * g ** 2 * f2 ** 6))


# ---------------------------------------------------------------------------
# partition of the extended interval
# ---------------------------------------------------------------------------

@dataclass
class AssumptionPartition:
    jpm: List[Tuple[float, float]]
    j0: List[Tuple[float, float]]
    jnull: List[float]
    jpm_isolated: List[float]
    j0_isolated: List[float]
    boundary_pm: List[float]
    boundary_0: List[float]
    extended_interval: Tuple[float, float]
    flags: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": "assumption-partition/1",
            "jpm": [list(t) for t in self.jpm],
            "j0": [list(t) for t in self.j0],
            "jnull": self.jnull,
            "jpmIsolated": self.jpm_isolated,
            "j0Isolated": self.j0_isolated,
            "boundaryPm": self.boundary_pm,
            "boundary0": self.boundary_0,
            "extendedInterval": list(self.extended_interval),
            "flags": self.flags,
        }


def _bisect_root(fn: Callable[[float], float], lo: float, hi: float) -> float:
    flo = fn(lo)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (flo < 0) != (fm < 0):
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo <= 1e-10 * max(1.0, abs(lo)):
            break
    return 0.5 * (lo + hi)


def _sign_change_roots(fn: Callable[[float], float], xs: np.ndarray,
                       vals: np.ndarray) -> List[float]:
    roots = []
    for i in range(len(xs) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 == 0.0:
            continue
        if (v0 < 0) != (v1 < 0) and v1 != 0.0:
            roots.append(_bisect_root(fn, float(xs[i]), float(xs[i + 1])))
    return roots


def partition_assumptions(model: PhaseAmplitudeModel, a: float, b: float,
                          samples: int = 4096,
                          profile: Optional[ConditionMProfile] = None,
                          ) -> AssumptionPartition:
    """Partition the (extended) interval by the sign pattern of G, H^2-G, g''.

    With a profile the partition covers J; without one it covers [a, b].
    Sign changes are located by a scan of ``samples`` points refined by
    bisection; tangential (double) roots below the scan resolution are
    flagged, not found.
    """
    if samples < 256:
        raise ValueError("samples must be at least 256")
    wr = WRFunctions(model)
    if profile is not None:
        lo, hi = condition_m_domain(model, profile, a, b)
    else:
        lo, hi = a, b
    xs = np.linspace(lo, hi, samples)
    G = np.asarray(wr.G(xs), dtype=float)
    D = np.asarray(wr.discriminant(xs), dtype=float)
    H = np.asarray(wr.H(xs), dtype=float)
    g = np.asarray(model.g(xs), dtype=float)
    g1 = np.asarray(model.g1(xs), dtype=float)
    g2 = np.asarray(model.g2(xs), dtype=float)
    flags: List[str] = []

    g_zero_everywhere = bool(np.all(g == 0.0))
    if g_zero_everywhere:
        flags.append("amplitude identically zero")
        return AssumptionPartition([], [], [], [], [], [], [], (lo, hi), flags)

    gpp_identically_zero = bool(np.all(g2 == 0.0))

    # breakpoints where any governing sign can flip
    cuts = {lo, hi}
    fG = lambda t: float(wr.G(t))
    fD = lambda t: float(wr.discriminant(t))
    fH = lambda t: float(wr.H(t))
    fg = lambda t: float(model.g(t))
    fg2 = lambda t: float(model.g2(t))
    cuts.update(_sign_change_roots(fG, xs, G))
    cuts.update(_sign_change_roots(fD, xs, D))
    cuts.update(_sign_change_roots(fH, xs, H))
    g_roots = _sign_change_roots(fg, xs, g)
    cuts.update(g_roots)
    g2_roots = [] if gpp_identically_zero else _sign_change_roots(fg2, xs, g2)
    cuts.update(g2_roots)
    # samples landing exactly on a zero are boundaries in their own right
    for vals in (G, D, H, g, g2 if not gpp_identically_zero else np.ones(1)):
        hits = np.nonzero(vals == 0.0)[0]
        if 0 < hits.size < vals.size:
            cuts.update(float(xs[i]) for i in hits if i < xs.size)
    pts = sorted(cuts)

    jpm: List[Tuple[float, float]] = []
    j0: List[Tuple[float, float]] = []
    for x0, x1 in zip(pts[:-1], pts[1:]):
        if x1 - x0 <= 1e-12 * max(1.0, abs(x0)):
            continue
        mids = np.linspace(x0 + (x1 - x0) * 1e-3, x1 - (x1 - x0) * 1e-3, 7)
        Gm = np.asarray(wr.G(mids), dtype=float)
        Dm = np.asarray(wr.discriminant(mids), dtype=float)
        Hm = np.asarray(wr.H(mids), dtype=float)
        gm = np.asarray(model.g(mids), dtype=float)
        g2m = np.asarray(model.g2(mids), dtype=float)
        if np.all(Gm != 0.0) and np.all(Dm >= 0.0):
            jpm.append((x0, x1))
        elif np.all(g2m == 0.0) and np.all(gm != 0.0) and np.all(Hm != 0.0):
            j0.append((x0, x1))

    def merge(intervals):
        out = []
        for seg in intervals:
            if out and abs(out[-1][1] - seg[0]) <= 1e-12 * max(1.0, abs(seg[0])):
                out[-1] = (out[-1][0], seg[1])
            else:
                out.append(seg)
        return out

    # adjacent pieces separated by a transversal g''-root stay distinct
    # J_pm intervals only if the branch data stays finite; a g'' root makes
    # G vanish there, so those cuts are genuine boundaries and not merged.
    jpm = [tuple(map(float, t)) for t in jpm]
    j0 = merge([tuple(map(float, t)) for t in j0])

    # isolated points; "nonzero" is judged against the sampled scale so that
    # bisection residue at a root does not masquerade as a nonzero value
    g_scale = float(np.max(np.abs(g))) or 1.0
    g1_scale = float(np.max(np.abs(g1))) or 1.0
    g2_scale = float(np.max(np.abs(g2))) or 1.0
    H_scale = float(np.max(np.abs(H))) or 1.0
    nonzero = lambda v, scale: abs(v) > 1e-6 * scale
    j0_isolated = [r for r in g2_roots
                   if nonzero(fg(r), g_scale) and nonzero(fH(r), H_scale)]
    jpm_isolated: List[float] = []
    # tangential zeros of H^2 - G inside negative regions: local maxima near 0
    neg = D < 0.0
    for i in range(1, samples - 1):
        if neg[i - 1] and neg[i + 1] and D[i] == 0.0:
            jpm_isolated.append(float(xs[i]))
    scale_D = float(np.max(np.abs(D))) or 1.0
    for i in range(1, samples - 1):
        if neg[i - 1] and neg[i] and neg[i + 1]:
            if D[i] >= D[i - 1] and D[i] >= D[i + 1] and abs(D[i]) <= 1e-9 * scale_D:
                flags.append(f"possible tangential zero of H^2-G near x={xs[i]:.6g}")

    # isolated amplitude zeros with g', g'' nonzero
    jnull = [r for r in g_roots
             if nonzero(float(model.g1(r)), g1_scale) and nonzero(fg2(r), g2_scale)]

    boundary_pm = sorted({p for seg in jpm for p in seg})
    boundary_0 = sorted({p for seg in j0 for p in seg})

    # final degeneracy assumption: branch denominators must not vanish at
    # interval endpoints
    for x0, x1 in jpm:
        w = (x1 - x0) * 1e-6
        for p in (x0 + w, x1 - w):
            if fD(p) != 0.0 and abs(fD(p)) < 1e-12 * scale_D:
                flags.append(f"H^2-G tends to 0 at J_pm endpoint {p:.6g}")
    for x0, x1 in j0:
        w = (x1 - x0) * 1e-6
        for p in (x0 + w, x1 - w):
            if abs(fg(p)) < 1e-12 * max(1.0, float(np.max(np.abs(g)))):
                flags.append(f"g tends to 0 at J_0 endpoint {p:.6g}")

    return AssumptionPartition(jpm, j0, jnull, jpm_isolated, j0_isolated,
                               boundary_pm, boundary_0, (lo, hi), flags)


# ---------------------------------------------------------------------------
# the K variation functional
# ---------------------------------------------------------------------------

def _quad_single(fn, lo, hi, points=None) -> Tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fn, lo, hi, limit=300,
                                      points=points if points else None)
        except Exception:
            return math.inf, math.inf
    return float(val), float(err)


def _quad(fn, lo, hi, points=None) -> Tuple[float, bool]:
    """Adaptive quadrature that splits huge positive ranges geometrically so
    mass concentrated near the lower limit is never lost."""
    if hi <= lo:
        return 0.0, True
    if lo > 0 and hi / lo > 16.0:
        total = 0.0
        err = 0.0
        seg_lo = lo
        while seg_lo < hi:
            seg_hi = min(seg_lo * 4.0, hi)
            inner = [p for p in (points or []) if seg_lo < p < seg_hi]
            v, e = _quad_single(fn, seg_lo, seg_hi, inner or None)
            total += v
            err += e
            seg_lo = seg_hi
        return total, err <= 1e-6 * max(1.0, abs(total)) + 1e-9
    val, err = _quad_single(fn, lo, hi, points)
    return val, err <= 1e-6 * max(1.0, abs(val)) + 1e-9


def kappa_functional(W: Callable[[float], float], W_prime: Callable[[float], float],
                     r_prime: Callable[[float], float],
                     intervals: Sequence[Tuple[float, float]],
                     isolated: Sequence[float],
                     boundaries: Sequence[float],
                     scan: int = 4096) -> float:
    """K(I, W, r): variation integral plus isolated-point and boundary terms.

    Sign changes of r' are located by scanning each interval and bisecting;
    each contributes |s(x) W(x)|, as does each interval boundary.
    """
    total = 0.0
    sign_changes: List[float] = []
    for x0, x1 in intervals:
        pad = (x1 - x0) * 1e-9
        xs = np.linspace(x0 + pad, x1 - pad, scan)
        rp = np.asarray(r_prime(xs), dtype=float)
        roots = _sign_change_roots(lambda t: float(r_prime(t)), xs, rp)
        sign_changes.extend(roots)
        integrand = lambda t: abs(W(t)) * abs(r_prime(t)) + abs(W_prime(t))
        val, _ = _quad(integrand, x0 + pad, x1 - pad, points=roots or None)
        total += val
    for x in isolated:
        total += abs(W(x))
    for x in list(sign_changes) + list(boundaries):
        total += abs(sawtooth_s(x) * W(x))
    return total


# ---------------------------------------------------------------------------
# the Delta terms
# ---------------------------------------------------------------------------

def abar_bbar(model: PhaseAmplitudeModel, a: float, b: float,
              profile: ConditionMProfile) -> Tuple[Optional[float], Optional[float]]:
    """Innermost points of [a, b] (offset by min(M, 1/C2)) where f' is integral.

    Returns (abar, bbar); a side is None when no integer value of f' exists
    in its window, in which case the corresponding Delta3 vanishes.
    """
    abar = bbar = None
    lo = a + min(float(profile.M(a)), 1.0 / profile.C2)
    if lo <= b:
        v = float(model.f1(lo))
        r = round(v) if is_integer_like(v) else math.ceil(v)
        if r <= float(model.f1(b)) + 1e-12:
            abar = invert_fprime(model, float(r))
            abar = max(abar, lo)
    hi = b - min(float(profile.M(b)), 1.0 / profile.C2)
    if hi >= a:
        v = float(model.f1(hi))
        r = round(v) if is_integer_like(v) else math.floor(v)
        if r >= float(model.f1(a)) - 1e-12:
            bbar = invert_fprime(model, float(r))
            bbar = min(bbar, hi)
    return abar, bbar


def endpoint_deltas(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                    a: float, b: float, which: str) -> Tuple[float, float]:
    """(Delta1, Delta2) at the endpoint named by ``which`` ('a' or 'b')."""
    mu = a if which == "a" else b
    U = float(profile.U(mu))
    M = float(profile.M(mu))
    fpp = float(model.f2(mu))
    _, _, dist = fprime_nearest(model, mu)
    m = m_count(model, mu)

    if dist == 0.0:
        d1 = U / (fpp ** 2 * (b - a) ** 3)
    elif m >= 1:
        d1 = min(U / math.sqrt(fpp), U / dist)
    else:
        d1 = 0.0

    d2 = U / (fpp ** 2 * M ** 3) * (1.0 + math.sqrt(fpp) * M) * (1.0 + fpp)
    d2 += U * m / (fpp * M)
    if dist == 0.0 or m >= 1:
        d2 += (U / M) * min(1.0, 1.0 / fpp) + U * min(fpp, 1.0 / fpp)
    else:
        d2 += U / (M * dist ** 2) + U * fpp / dist ** 3
    return d1, d2


def _delta3_integrand(model, profile, origin):
    def fn(x):
        U = float(profile.U(x))
        fpp = float(model.f2(x))
        M = float(profile.M(x))
        d = abs(x - origin)
        return U / (fpp * d ** 3) * (1.0 + 1.0 / (fpp * M) + 1.0 / (fpp * d))
    return fn


def tail_deltas(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                a: float, b: float,
                abar: Optional[float] = None, bbar: Optional[float] = None,
                ) -> Tuple[float, float]:
    """(Delta3(a), Delta3(b)): tail integrals plus their boundary terms."""
    if abar is None and bbar is None:
        abar, bbar = abar_bbar(model, a, b, profile)
    d3a = 0.0
    if abar is not None:
        val, ok = _quad(_delta3_integrand(model, profile, a), abar, b)
        if not ok:
            warnings.warn("Delta3(a) integral did not converge cleanly")
        d3a = val \
            + float(profile.U(abar)) / (float(model.f2(abar)) ** 2 * (abar - a) ** 3) \
            + float(profile.U(b)) / (float(model.f2(b)) ** 2 * (b - a) ** 3)
    d3b = 0.0
    if bbar is not None:
        val, ok = _quad(_delta3_integrand(model, profile, b), a, bbar)
        if not ok:
            warnings.warn("Delta3(b) integral did not converge cleanly")
        d3b = val \
            + float(profile.U(bbar)) / (float(model.f2(bbar)) ** 2 * (b - bbar) ** 3) \
            + float(profile.U(a)) / (float(model.f2(a)) ** 2 * (b - a) ** 3)
    return d3a, d3b


def _delta4_smooth_integrand(model, profile):
    def fn(x):
        U = float(profile.U(x))
        fpp = float(model.f2(x))
        M = float(profile.M(x))
        Mp = abs(float(profile.M_prime(x)))
        return U / (fpp * M ** 3) * (1.0 + math.sqrt(fpp) * M) \
            * (1.0 + (1.0 + Mp) / (fpp * M))
    return fn


class PartitionDegeneracyError(RuntimeError):
    """A branch denominator vanishes at a partition endpoint."""


def alternate4_applies(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                       a: float, b: float, samples: int = 257) -> bool:
    """True when M(x) >= max(b-x, x-a) on [a, b] and m_a = m_b = 0, in which
    case Delta4 reduces to the smooth integral alone."""
    xs = np.linspace(a, b, samples)
    M = np.asarray(profile.M(xs), dtype=float)
    need = np.maximum(b - xs, xs - a)
    if not np.all(M >= need - 1e-12 * max(1.0, b - a)):
        return False
    return m_count(model, a) == 0 and m_count(model, b) == 0


@dataclass
class Delta4Breakdown:
    smooth_integral: float
    kappa_j0: float
    kappa_plus: float
    kappa_minus: float
    jnull_sum: float
    simplified: bool  # smooth integral only (wide-M, zero-m regime)

    @property
    def total(self) -> float:
        return (self.smooth_integral + self.kappa_j0 + self.kappa_plus
                + self.kappa_minus + self.jnull_sum)


def global_delta4(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                  partition: Optional[AssumptionPartition],
                  a: float, b: float) -> Delta4Breakdown:
    """Delta4 = smooth variation integral + K functionals + amplitude-zero sum."""
    smooth, ok = _quad(_delta4_smooth_integrand(model, profile), a, b)
    if not ok:
        warnings.warn("Delta4 smooth integral did not converge cleanly")
    if alternate4_applies(model, profile, a, b):
        return Delta4Breakdown(smooth, 0.0, 0.0, 0.0, 0.0, True)
    if partition is None:
        partition = partition_assumptions(model, a, b, profile=profile)
    for fl in partition.flags:
        if "tends to 0" in fl:
            raise PartitionDegeneracyError(fl)
    wr = WRFunctions(model)
    k0 = kappa_functional(wr.W0, wr.W0_prime, wr.r0_prime,
                          partition.j0, partition.j0_isolated, partition.boundary_0)
    kp = kappa_functional(lambda x: wr.W_branch(x, +1), lambda x: wr.W_branch_prime(x, +1),
                          lambda x: wr.r_branch_prime(x, +1),
                          partition.jpm, partition.jpm_isolated, partition.boundary_pm)
    km = kappa_functional(lambda x: wr.W_branch(x, -1), lambda x: wr.W_branch_prime(x, -1),
                          lambda x: wr.r_branch_prime(x, -1),
                          partition.jpm, partition.jpm_isolated, partition.boundary_pm)
    jn = 0.0
    for x in partition.jnull:
        jn += abs(float(model.g2(x)) ** 2 / (float(model.g1(x)) * float(model.f2(x)) ** 2))
    return Delta4Breakdown(smooth, k0, kp, km, jn, False)


# ---------------------------------------------------------------------------
# the full budget
# ---------------------------------------------------------------------------

@dataclass
class ErrorBudget:
    delta1_a: float
    delta1_b: float
    delta2_a: float
    delta2_b: float
    delta3_a: float
    delta3_b: float
    delta4: Delta4Breakdown
    m_a: int
    m_b: int
    abar: Optional[float]
    bbar: Optional[float]

    @property
    def total(self) -> float:
        return (self.delta1_a + self.delta1_b + self.delta2_a + self.delta2_b
                + self.delta3_a + self.delta3_b + self.delta4.total)

    def to_json(self) -> dict:
        return {
            "schema": "error-budget/1",
            "delta1": {"a": self.delta1_a, "b": self.delta1_b},
            "delta2": {"a": self.delta2_a, "b": self.delta2_b},
            "delta3": {"a": self.delta3_a, "b": self.delta3_b},
            "delta4": {
                "smoothIntegral": self.delta4.smooth_integral,
                "kappaJ0": self.delta4.kappa_j0,
                "kappaPlus": self.delta4.kappa_plus,
                "kappaMinus": self.delta4.kappa_minus,
                "jnullSum": self.delta4.jnull_sum,
                "simplified": self.delta4.simplified,
                "total": self.delta4.total,
            },
            "mCounts": {"a": self.m_a, "b": self.m_b},
            "abar": self.abar,
            "bbar": self.bbar,
            "total": self.total,
        }


def compute_budget(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                   a: float, b: float,
                   partition: Optional[AssumptionPartition] = None) -> ErrorBudget:
    abar, bbar = abar_bbar(model, a, b, profile)
    d1a, d2a = endpoint_deltas(model, profile, a, b, "a")
    d1b, d2b = endpoint_deltas(model, profile, a, b, "b")
    d3a, d3b = tail_deltas(model, profile, a, b, abar, bbar)
    d4 = global_delta4(model, profile, partition, a, b)
    return ErrorBudget(d1a, d1b, d2a, d2b, d3a, d3b, d4,
                       m_count(model, a), m_count(model, b), abar, bbar)


# ---------------------------------------------------------------------------
# the to-infinity variants
# ---------------------------------------------------------------------------

def _locate_kb(profile: ConditionMProfile, a: float, b: float) -> float:
    """Left edge of K_b = {x in [a,b] : x + M(x) > b} for nondecreasing M."""
    if a + float(profile.M(a)) > b:
        return a
    lo, hi = a, b
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid + float(profile.M(mid)) > b:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * max(1.0, abs(b)):
            break
    return 0.5 * (lo + hi)


def _monotone_horizon(fn: Callable[[float], float], b: float) -> float:
    """Doubling horizon where the integrand falls below 1e-16 of its start,
    verified decreasing along the probes."""
    f0 = abs(fn(b + 1.0)) or 1.0
    h = max(2.0 * b, b + 16.0)
    prev = abs(fn(h))
    while abs(fn(h)) > 1e-16 * f0 and h < 1e15:
        h *= 2.0
        cur = abs(fn(h))
        if cur > prev * 1.0000001:
            warnings.warn("integrand not monotone on the truncation tail")
            break
        prev = cur
    return h


def toinfinity_deltas(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                      a: float, b: float) -> Tuple[float, float, float]:
    """(Delta3'(b), Delta4'(b), Delta5) for the fixed-a, growing-b estimate."""
    U, fpp, M = (lambda x: float(profile.U(x)),
                 lambda x: float(model.f2(x)),
                 lambda x: float(profile.M(x)))

    d3p = U(b) / (fpp(b) ** 2 * (b - a) ** 3) \
        + U(b) / (fpp(b) ** 2 * M(b) ** 3) * (1.0 + math.sqrt(fpp(b)) * M(b))

    k_lo = _locate_kb(profile, a, b)
    _, bbar = abar_bbar(model, a, b, profile)

    d4p = 0.0
    if bbar is not None and k_lo < bbar:
        def near_b(x):
            return U(x) / (fpp(x) * (b - x) ** 3) * (
                1.0 + 1.0 / (fpp(x) * M(x)) + 1.0 / (M(x) * (b - x)))
        val, _ = _quad(near_b, k_lo, bbar)
        d4p += val
        for x in (k_lo, bbar):
            d4p += U(x) / (fpp(x) ** 2 * (b - x) ** 3)
    _, d2b = endpoint_deltas(model, profile, a, b, "b")
    d4p += d2b
    smooth = _delta4_smooth_integrand(model, profile)
    val, _ = _quad(smooth, k_lo, b)
    d4p += val
    for x in (k_lo, b):
        d4p += U(x) / (fpp(x) ** 2 * M(x) ** 3) * (1.0 + math.sqrt(fpp(x)) * M(x))

    # Delta5: integral tails past b plus the K terms over [b, infinity)
    tail3 = _delta3_integrand(model, profile, a)
    h3 = _monotone_horizon(tail3, b)
    v3, _ = _quad(tail3, b, h3)
    h4 = _monotone_horizon(smooth, b)
    v4, _ = _quad(smooth, b, h4)
    d5 = v3 + v4

    horizon = max(h3, h4)
    part = partition_assumptions(model, b, horizon, samples=2048)
    wr = WRFunctions(model)
    d5 += kappa_functional(wr.W0, wr.W0_prime, wr.r0_prime,
                           part.j0, part.j0_isolated, part.boundary_0)
    d5 += kappa_functional(lambda x: wr.W_branch(x, +1), lambda x: wr.W_branch_prime(x, +1),
                           lambda x: wr.r_branch_prime(x, +1),
                           part.jpm, part.jpm_isolated, part.boundary_pm)
    d5 += kappa_functional(lambda x: wr.W_branch(x, -1), lambda x: wr.W_branch_prime(x, -1),
                           lambda x: wr.r_branch_prime(x, -1),
                           part.jpm, part.jpm_isolated, part.boundary_pm)
    for x in part.jnull:
        d5 += abs(float(model.g2(x)) ** 2 / (float(model.g1(x)) * float(model.f2(x)) ** 2))
    return d3p, d4p, d5
