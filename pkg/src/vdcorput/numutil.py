"""Nearest-integer arithmetic, sawtooth functions, and compensated summation.

The sawtooth ladder used throughout the package:

    {x}        fractional part, in [0, 1)
    s(x)       {x} - 1/2
    psi(x)     s(x) for non-integer x, 0 at integers
    psi(x, e)  the modified sawtooth, a conditionally convergent bilateral
               series -(1/2 pi i) sum_{0<|r|<R} e(rx)/(r+e) as R -> oo

plus the nearest-integer quadruple (nearest, signed fractional part,
distance to nearest, starred distance) as a small value type.

psi(x, e) is evaluated as a genuine partial sum at a truncation R chosen
from the tail bound ``TAIL_CONSTANT * min(1, 1/(R ||x||*))``.  Terms r and
-r are paired before accumulation; the pairing collapses the conditional
convergence into an absolutely summable real part plus an O(1/R) imaginary
part.  For large R the partial sum is still produced exactly (to floating
precision) by summing directly up to a modest index and expressing the two
remaining tail segments in closed form via repeated Abel summation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.special import digamma

TWO_PI = 2.0 * math.pi

# Measured worst case of |partial(R) - limit| / min(1, 1/(R ||x||*)) over a
# random grid of (x, eps, R); see tests/test_numutil.py::test_tail_constant.
# Truncation logic doubles it for safety.
TAIL_CONSTANT = 0.32
TRUNCATION_CONSTANT = 2.0 * TAIL_CONSTANT

DEFAULT_MAX_R = 1 << 34


class TailAccuracyError(RuntimeError):
    """Requested tolerance needs a truncation beyond the configured cap.

    Carries the truncation that would be needed and the tail bound actually
    achievable at the cap.
    """

    def __init__(self, r_needed: int, r_cap: int, achievable: float):
        self.r_needed = r_needed
        self.r_cap = r_cap
        self.achievable = achievable
        super().__init__(
            f"modified sawtooth needs R={r_needed} > cap {r_cap}; "
            f"tail bound achievable at cap is {achievable:.3e}"
        )


# ---------------------------------------------------------------------------
# scalar sawtooth helpers
# ---------------------------------------------------------------------------

def floor_frac(x: float) -> float:
    """Fractional part {x} in [0, 1)."""
    return x - math.floor(x)


def sawtooth_s(x: float) -> float:
    """s(x) = {x} - 1/2."""
    return floor_frac(x) - 0.5


def sawtooth_psi(x: float) -> float:
    """The smoothed sawtooth: s(x) off the integers, 0 on them."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    if x == math.floor(x):
        return 0.0
    return sawtooth_s(x)


def is_integer_like(x: float, rel: float = 1e-9) -> bool:
    """Floating integer detection: |x - round(x)| <= rel * max(1, |x|)."""
    return abs(x - round(x)) <= rel * max(1.0, abs(x))


# ---------------------------------------------------------------------------
# nearest-integer decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NearestIntDecomp:
    """Nearest integer, signed offset, distance, and starred distance of x.

    ``nearest + signed_frac == x`` up to rounding, ``dist == |signed_frac|``,
    and ``dist_star`` replaces a zero distance by 1.
    """

    nearest: int
    signed_frac: float
    dist: float
    dist_star: float


def nearest_decomp(x: float) -> NearestIntDecomp:
    """Decompose x relative to its nearest integer.

    Half-integers round toward +infinity, so 3.5 has nearest integer 4 and
    signed fractional part -1/2; the signed part always lies in [-1/2, 1/2).
    """
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    n = math.floor(x + 0.5)
    frac = x - n
    # floor(x + 0.5) can land on the wrong side when x + 0.5 rounds up to an
    # exact integer; repair so that frac stays in [-1/2, 1/2).
    if frac < -0.5:
        n -= 1
        frac = x - n
    elif frac >= 0.5:
        n += 1
        frac = x - n
    d = abs(frac)
    return NearestIntDecomp(n, frac, d, d if d != 0.0 else 1.0)


def dist_to_nearest_star(x: float) -> float:
    """||x||*: distance to the nearest integer, with 1 substituted at 0."""
    d = abs(x - math.floor(x + 0.5))
    return d if d != 0.0 else 1.0


# ---------------------------------------------------------------------------
# complex exponential with argument reduction
# ---------------------------------------------------------------------------

def e1(x: float) -> complex:
    """e(x) = exp(2 pi i x), reducing x mod 1 first to keep accuracy at large x."""
    return cmath.exp(2j * math.pi * math.fmod(x, 1.0))


def e1_arr(x: np.ndarray) -> np.ndarray:
    """Vectorized e(x) with mod-1 argument reduction."""
    return np.exp(2j * np.pi * np.mod(x, 1.0))


# ---------------------------------------------------------------------------
# compensated summation
# ---------------------------------------------------------------------------

class ComplexAccumulator:
    """Neumaier-compensated running sum of complex values."""

    __slots__ = ("_sr", "_si", "_cr", "_ci", "count")

    def __init__(self):
        self._sr = 0.0
        self._si = 0.0
        self._cr = 0.0
        self._ci = 0.0
        self.count = 0

    def add(self, z: complex) -> None:
        x = z.real
        t = self._sr + x
        if abs(self._sr) >= abs(x):
            self._cr += (self._sr - t) + x
        else:
            self._cr += (x - t) + self._sr
        self._sr = t
        y = z.imag
        t = self._si + y
        if abs(self._si) >= abs(y):
            self._ci += (self._si - t) + y
        else:
            self._ci += (y - t) + self._si
        self._si = t
        self.count += 1

    @property
    def sum(self) -> complex:
        return complex(self._sr + self._cr, self._si + self._ci)

    @property
    def compensation(self) -> complex:
        return complex(self._cr, self._ci)


def compensated_complex_sum(values: Iterable[complex]) -> complex:
    acc = ComplexAccumulator()
    for v in values:
        acc.add(v)
    return acc.sum


def starred_sum(weights: Sequence[complex], endpoint_flags: Tuple[bool, bool]) -> complex:
    """Compensated sum with first/last term halved at integer summation limits.

    ``endpoint_flags`` marks whether the lower and upper summation limits are
    integers; an empty sequence sums to zero.
    """
    n = len(weights)
    if n == 0:
        return 0j
    acc = ComplexAccumulator()
    first, last = endpoint_flags
    for i, w in enumerate(weights):
        w = complex(w)
        if i == 0 and first:
            w *= 0.5
        if i == n - 1 and last:
            w *= 0.5
        acc.add(w)
    return acc.sum


# ---------------------------------------------------------------------------
# the modified sawtooth psi(x, eps)
# ---------------------------------------------------------------------------

def psi_tail_bound(r: int, x: float) -> float:
    """Measured-constant tail bound for the partial sum truncated at r."""
    return TAIL_CONSTANT * min(1.0, 1.0 / (r * dist_to_nearest_star(x)))


def _psi_partial_direct(fx: float, eps: float, lo: int, hi: int) -> complex:
    """Paired partial sum over lo <= r <= hi, vectorized in chunks.

    fx is {x}; each pair (r, -r) contributes
    (i/2pi) * [z^r/(r+eps) - conj(z)^r/(r-eps)] with z = e(fx).
    """
    total_re = 0.0
    total_im = 0.0
    comp_re = 0.0
    comp_im = 0.0
    chunk = 1 << 18
    r0 = lo
    while r0 <= hi:
        r1 = min(r0 + chunk - 1, hi)
        r = np.arange(r0, r1 + 1, dtype=np.float64)
        ang = TWO_PI * np.mod(r * fx, 1.0)
        c = np.cos(ang)
        s = np.sin(ang)
        den = r * r - eps * eps
        # real part: -(1/pi) sum r sin / den; imag: -(eps/pi) sum cos / den
        pr = -np.sum(r * s / den) / math.pi
        pi_ = -eps * np.sum(c / den) / math.pi
        t = total_re + pr
        comp_re += (total_re - t) + pr if abs(total_re) >= abs(pr) else (pr - t) + total_re
        total_re = t
        t = total_im + pi_
        comp_im += (total_im - t) + pi_ if abs(total_im) >= abs(pi_) else (pi_ - t) + total_im
        total_im = t
        r0 = r1 + 1
    return complex(total_re + comp_re, total_im + comp_im)


def _abel_tail(fx: float, s: float, m: int, levels: int = 18) -> complex:
    """Closed form for G = sum_{r>m} z^r / (r+s) with z = e(fx), fx not in Z.

    Repeated summation by parts:
        G = sum_k (-1)^(k-1) (k-1)! z^(m+k) / [(1-z)^k prod_{t<=k}(m+s+t)]
    The terms shrink by roughly k / (m |1-z|), so callers must keep
    m |1-z| comfortably above ``levels``.  Powers z^(m+k) are rebuilt from
    (m+k) fx mod 1 so no phase accuracy is lost at large m.
    """
    one_minus = 1.0 - cmath.exp(2j * math.pi * fx)
    acc = 0j
    term_coef = 1.0 / one_minus  # (-1)^(k-1) (k-1)! / (1-z)^k, sign folded in
    prod = 1.0
    for k in range(1, levels + 1):
        prod *= m + s + k
        acc += term_coef * cmath.exp(2j * math.pi * math.fmod((m + k) * fx, 1.0)) / prod
        term_coef *= -k / one_minus
    return acc


def _psi_tail_segment(fx: float, eps: float, m: int) -> complex:
    """sum_{r>m} of the paired psi terms, in closed form (requires {x} != 0)."""
    g_plus = _abel_tail(fx, eps, m)
    g_minus = _abel_tail(-fx, -eps, m)
    return (1j / TWO_PI) * (g_plus - g_minus)


def _psi_partial_integer_x(eps: float, r: int) -> complex:
    """Partial sum at integer x: phases vanish, leaving a digamma telescope."""
    if eps == 0.0:
        return 0j
    s = (
        digamma(r + 1 - eps)
        - digamma(1 - eps)
        - digamma(r + 1 + eps)
        + digamma(1 + eps)
    ) / (2.0 * eps)
    return complex(0.0, -eps * s / math.pi)


def modified_sawtooth_partial(x: float, eps: float, r: int) -> complex:
    """The paired partial sum of psi(x, eps) truncated at |r| < R = r+1.

    Exact to floating precision for any truncation; large truncations route
    the two tail segments through the Abel closed form instead of looping.
    """
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    if abs(eps) > 0.5:
        raise ValueError(f"eps must lie in [-1/2, 1/2], got {eps}")
    if r < 1:
        return 0j
    fx = floor_frac(x)
    if fx == 0.0:
        return _psi_partial_integer_x(eps, r)
    dist = min(fx, 1.0 - fx)
    # direct up to m, then closed-form tails: partial(R) = direct(m) + T(m) - T(R)
    m = max(64, int(math.ceil(24.0 / dist)))
    if r <= 2 * m:
        return _psi_partial_direct(fx, eps, 1, r)
    direct = _psi_partial_direct(fx, eps, 1, m)
    return direct + _psi_tail_segment(fx, eps, m) - _psi_tail_segment(fx, eps, r)


def modified_sawtooth(x: float, eps: float, tol: float, max_r: int = DEFAULT_MAX_R) -> complex:
    """psi(x, eps) to within tol, as a partial sum at the bound-implied truncation.

    The truncation R satisfies TRUNCATION_CONSTANT / (R ||x||*) <= tol; if that
    R exceeds ``max_r`` a :class:`TailAccuracyError` reports the tail bound that
    the cap could achieve.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    if abs(eps) > 0.5:
        raise ValueError(f"eps must lie in [-1/2, 1/2], got {eps}")
    dstar = dist_to_nearest_star(x)
    r_needed = int(math.ceil(TRUNCATION_CONSTANT / (tol * dstar)))
    r_needed = max(r_needed, 8)
    if r_needed > max_r:
        raise TailAccuracyError(r_needed, max_r, TAIL_CONSTANT * min(1.0, 1.0 / (max_r * dstar)))
    return modified_sawtooth_partial(x, eps, r_needed)


def modified_sawtooth_grid(xs: np.ndarray, epss: np.ndarray, r: int) -> np.ndarray:
    """Partial sums at truncation r on the outer grid xs x epss (for sweeps).

    Returns an array of shape (len(xs), len(epss)).  Phases are computed once
    per x and reused across all eps, keeping the transcendental cost at
    O(len(xs) * r).
    """
    xs = np.asarray(xs, dtype=np.float64)
    epss = np.asarray(epss, dtype=np.float64)
    out = np.empty((xs.size, epss.size), dtype=np.complex128)
    rr = np.arange(1, r + 1, dtype=np.float64)
    r_sq = rr * rr
    den = r_sq[:, None] - (epss * epss)[None, :]
    for i, x in enumerate(xs):
        fx = floor_frac(float(x))
        ang = TWO_PI * np.mod(rr * fx, 1.0)
        c = np.cos(ang)
        s = np.sin(ang)
        re = -(rr * s) @ (1.0 / den) / math.pi
        im = -(c @ (1.0 / den)) * epss / math.pi
        out[i] = re + 1j * im
    return out
