"""The transformed sum (dual side) and the explicit endpoint terms.

The identity evaluated here trades the sum of g(n) e(f(n)) over integers n in
[a, b] for a sum over the integers r in [f'(a), f'(b)], with weights

    g(x_r) e(f(x_r) - r x_r + 1/8) / sqrt(f''(x_r)),     f'(x_r) = r,

plus endpoint corrections D(a), D(b) and a residual Delta controlled by the
error budget.  Endpoint corrections are explicit in the small-f'' regimes and
magnitude-only bounds otherwise; the two kinds are kept apart by a tagged
value so bounds can never leak into complex arithmetic.

Note on the explicit endpoint phase: the first-order contribution carries
e(f(x) - [[f'(x)]] x), with a minus sign on the nearest-integer multiple.
Deriving the Fourier-completion step from scratch (and brute-forcing the
bilateral sum at non-integer endpoints) confirms the minus sign; at integer
endpoints the sign is immaterial since e(k x) = 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import errbudget
from .errbudget import ConditionMReport, ErrorBudget, fprime_nearest
from .expsum import direct_starred_sum
from .numutil import (ComplexAccumulator, modified_sawtooth, sawtooth_psi)
from .phase import ConditionMProfile, PhaseAmplitudeModel, invert_fprime

TWO_PI_I = 2j * math.pi


class RefinementParameterError(ValueError):
    """(C, L) outside the admissible window of the refined endpoint estimate."""


@dataclass(frozen=True)
class EndpointTerm:
    """Endpoint correction D = D_circ + D_star as (explicit value, bound).

    ``explicit`` is exact modulo the budget; ``bound`` is the magnitude of
    whatever part of the correction is only controlled, not evaluated.
    ``regime`` records which case of the table fired.
    """

    explicit: complex
    bound: float
    regime: str

    def to_json(self) -> dict:
        return {"re": self.explicit.real, "im": self.explicit.imag,
                "bound": self.bound, "regime": self.regime}


@dataclass
class TransformResult:
    rhs_main: complex
    d_a: Optional[EndpointTerm]
    d_b: Optional[EndpointTerm]
    r_range: Tuple[int, int]
    terms: List[Tuple[int, float, complex]]
    measured_delta: Optional[complex] = None
    direct_value: Optional[complex] = None
    flags: List[str] = field(default_factory=list)
    condition_report: Optional[ConditionMReport] = None

    def to_json(self) -> dict:
        out = {
            "schema": "transform-result/1",
            "rhsMain": {"re": self.rhs_main.real, "im": self.rhs_main.imag},
            "rRange": list(self.r_range),
            "terms": [{"r": r, "xr": xr, "re": v.real, "im": v.imag}
                      for r, xr, v in self.terms],
            "flags": self.flags,
        }
        out["dA"] = self.d_a.to_json() if self.d_a else None
        out["dB"] = self.d_b.to_json() if self.d_b else None
        if self.measured_delta is not None:
            out["measuredDelta"] = {"re": self.measured_delta.real,
                                    "im": self.measured_delta.imag}
        return out


def _phase_f_minus_rx(model: PhaseAmplitudeModel, x: float, r: int) -> float:
    """(f(x) - r x) mod 1 at an integer multiplier, losing as little as the
    float format allows."""
    return (math.fmod(float(model.f(x)), 1.0) - math.fmod(float(r) * x, 1.0)) % 1.0


# ---------------------------------------------------------------------------
# main dual-side sum
# ---------------------------------------------------------------------------

def rhs_main_sum(model: PhaseAmplitudeModel, a: float, b: float,
                 conjugate: bool = False) -> TransformResult:
    """Sum the dual-side weights over integer r in [f'(a), f'(b)].

    A weight is halved when the corresponding limit f'(a) or f'(b) is an
    integer (family-exact detection when available).  Terms are accumulated
    in ascending r with compensation, so reruns are bit-identical.
    """
    fa = float(model.f1(a))
    fb = float(model.f1(b))
    ra_int, _, da = fprime_nearest(model, a)
    rb_int, _, db = fprime_nearest(model, b)
    r_lo = ra_int if da == 0.0 else math.ceil(fa)
    r_hi = rb_int if db == 0.0 else math.floor(fb)

    acc = ComplexAccumulator()
    terms: List[Tuple[int, float, complex]] = []
    flags: List[str] = []
    for r in range(r_lo, r_hi + 1):
        try:
            xr = invert_fprime(model, float(r))
        except Exception as exc:  # pragma: no cover - solver failure path
            flags.append(f"r={r}: inversion failed ({exc})")
            continue
        if model.rhs_phase is not None:
            ph = model.rhs_phase(float(r), xr)
        else:
            ph = _phase_f_minus_rx(model, xr, r)
        w = float(model.g(xr)) / math.sqrt(float(model.f2(xr)))
        val = w * np.exp(TWO_PI_I * ((ph + 0.125) % 1.0))
        if r == r_lo and da == 0.0:
            val *= 0.5
        if r == r_hi and db == 0.0:
            val *= 0.5
        val = complex(val)
        terms.append((r, xr, val))
        acc.add(val)
    rhs = acc.sum
    if conjugate:
        rhs = rhs.conjugate()
        terms = [(r, xr, v.conjugate()) for r, xr, v in terms]
    return TransformResult(rhs, None, None, (r_lo, r_hi), terms, flags=flags)


# ---------------------------------------------------------------------------
# endpoint corrections
# ---------------------------------------------------------------------------

def endpoint_term(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                  mu: float, which: str, tol: float = 1e-8) -> EndpointTerm:
    """D(mu) = D_circ(mu) + D_star(mu), case-selected on f'' against ||f'||.

    Explicit in the two small-f'' regimes and when f'(mu) is an integer;
    bound-only once f'' reaches 1 - ||f'(mu)||.  The tie f'' = ||f'|| takes
    the offset-plus-sawtooth case.
    """
    if which not in ("a", "b"):
        raise ValueError("which must be 'a' or 'b'")
    r0, eps_p, dist = fprime_nearest(model, mu)
    fpp = float(model.f2(mu))
    U = float(profile.U(mu))
    M = float(profile.M(mu))
    g_mu = float(model.g(mu))

    star = 0j
    if dist == 0.0:
        e_f = np.exp(TWO_PI_I * (math.fmod(float(model.f(mu)), 1.0)))
        star = complex(g_mu * float(model.f3(mu)) * e_f / (6j * math.pi * fpp ** 2)
                       - float(model.g1(mu)) * e_f / (TWO_PI_I * fpp))

    phase = np.exp(TWO_PI_I * _phase_f_minus_rx(model, mu, r0))
    if dist > 0.0 and fpp <= dist:
        psi = modified_sawtooth(mu, eps_p, tol)
        circ = complex(g_mu * phase * (-1.0 / (TWO_PI_I * eps_p) + psi))
        return EndpointTerm(circ + star, 0.0, "explicit-offset")
    if fpp < 1.0 - dist:
        psi = modified_sawtooth(mu, eps_p, tol)
        circ = complex(g_mu * phase * psi)
        return EndpointTerm(circ + star, 0.0, "explicit-sawtooth")
    if fpp < 1.0:
        return EndpointTerm(star, U, "bound-subunit")
    bound = U * (1.0 + 1.0 / M + 1.0 / (math.sqrt(fpp) * M))
    return EndpointTerm(star, bound, "bound-large")


def refined_endpoint_term(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                          mu: float, C: float, L: float,
                          tol: float = 1e-8) -> EndpointTerm:
    """Refined replacement for the large-f'' endpoint bound.

    Requires M(mu) >= 1 and f''(mu) >= 1 with C in [f''^-1/2, M) and L in
    [sqrt(f''), f'' min(1, C)).  Splits on eps = <mu> and eps' = <f'(mu)>:
    integral endpoint (eps = 0), integral slope (eps' = 0, explicit sawtooth
    value), and integral slope far from an integer endpoint (|eps| > C).
    """
    fpp = float(model.f2(mu))
    M = float(profile.M(mu))
    U = float(profile.U(mu))
    if M < 1.0 or fpp < 1.0:
        raise RefinementParameterError(f"needs M(mu) >= 1 and f''(mu) >= 1, got M={M}, f''={fpp}")
    if not (fpp ** -0.5 <= C < M):
        raise RefinementParameterError(f"C={C} outside [f''^-1/2, M) = [{fpp**-0.5}, {M})")
    if not (math.sqrt(fpp) <= L < fpp * min(1.0, C)):
        raise RefinementParameterError(
            f"L={L} outside [sqrt(f''), f'' min(1,C)) = [{math.sqrt(fpp)}, {fpp * min(1.0, C)})")

    r0, eps_p, dist_p = fprime_nearest(model, mu)
    eps = mu - math.floor(mu + 0.5)
    base = (U * fpp * C ** 4 * L / M + U * L / (fpp * C) + U * fpp / L ** 2
            + U / (fpp * C ** 2) + U / M)

    if dist_p == 0.0 and abs(eps) > C:
        return EndpointTerm(0j, base + U / ((abs(eps) - C) * math.sqrt(fpp)),
                            "refined-far-endpoint")
    if dist_p == 0.0:
        explicit = complex(sawtooth_psi(mu) * float(model.g(mu))
                           * np.exp(TWO_PI_I * _phase_f_minus_rx(model, mu, r0)))
        return EndpointTerm(explicit, base + U * abs(eps) * L, "refined-sawtooth")
    if eps == 0.0:
        b1 = (U * abs(eps_p) * L / fpp
              + U * abs(eps_p) * (1.0 + abs(eps_p) * C) * math.log1p(fpp) / math.sqrt(fpp)
              + U * fpp * abs(eps_p) ** 3 * C ** 4)
        return EndpointTerm(0j, base + b1, "refined-integer-endpoint")
    raise RefinementParameterError(
        "refinement cases need an integer endpoint (eps=0) or integer slope (eps'=0)")


def optimized_refinement_params(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                                mu: float) -> Tuple[float, float]:
    """(C, L) choices minimizing the refined residual when eps' = 0 and
    M(mu) <= f''(mu)^7."""
    fpp = float(model.f2(mu))
    M = float(profile.M(mu))
    _, _, dist_p = fprime_nearest(model, mu)
    if dist_p != 0.0:
        raise RefinementParameterError("optimized choices require integral f'(mu)")
    if M > fpp ** 7:
        raise RefinementParameterError("optimized choices require M(mu) <= f''(mu)^7")
    eps = abs(mu - math.floor(mu + 0.5))
    lo_cut = fpp ** -0.6 * M ** -0.2
    hi_cut = fpp ** -0.4 * M ** 0.2
    if eps <= lo_cut or eps >= hi_cut:
        return fpp ** -0.4 * M ** 0.2, fpp ** (8.0 / 15.0) * M ** (1.0 / 15.0)
    if eps <= fpp ** -0.5:
        return 1.0 / (fpp * eps), fpp ** (1.0 / 3.0) * eps ** (-1.0 / 3.0)
    return eps / 2.0, fpp ** (2.0 / 3.0) * eps ** (1.0 / 3.0)


# ---------------------------------------------------------------------------
# the assembled transform
# ---------------------------------------------------------------------------

@dataclass
class TransformOptions:
    measure: bool = True
    budget: bool = True
    psi_tol: float = 1e-8
    check_grid: int = 24
    strict: bool = False


def full_transform(model: PhaseAmplitudeModel, profile: ConditionMProfile,
                   a: float, b: float,
                   options: Optional[TransformOptions] = None,
                   ) -> Tuple[TransformResult, Optional[ErrorBudget]]:
    """Dual-side sum, endpoint corrections, budget, and the measured residual.

    measured_delta = direct - rhs_main + D(b) - D(a), using the explicit
    parts of the endpoint corrections; their bound parts are additional
    budget and are surfaced via ``budget_with_endpoints``.
    """
    opts = options or TransformOptions()
    report = errbudget.check_condition_M(model, profile, a, b, grid=opts.check_grid)
    if not report.passed:
        msg = f"regularity sweep failed on [{a}, {b}]: {len(report.violations)} violations"
        if opts.strict:
            raise RuntimeError(msg)
        warnings.warn(msg)
    result = rhs_main_sum(model, a, b)
    result.condition_report = report
    result.d_a = endpoint_term(model, profile, a, "a", tol=opts.psi_tol)
    result.d_b = endpoint_term(model, profile, b, "b", tol=opts.psi_tol)
    budget = errbudget.compute_budget(model, profile, a, b) if opts.budget else None
    if opts.measure:
        direct = direct_starred_sum(model, a, b)
        result.direct_value = direct
        result.measured_delta = (direct - result.rhs_main
                                 + result.d_b.explicit - result.d_a.explicit)
    return result, budget


def budget_with_endpoints(result: TransformResult, budget: ErrorBudget) -> float:
    """Budget total plus the bound parts of both endpoint corrections."""
    extra = 0.0
    if result.d_a is not None:
        extra += result.d_a.bound
    if result.d_b is not None:
        extra += result.d_b.bound
    return budget.total + extra
