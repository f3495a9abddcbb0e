"""Phase/amplitude models with exact derivatives and the built-in families.

A model carries the phase f with derivatives to order four and the amplitude
g with derivatives to order three, because the error budget needs f'''' (the
Taylor control of f'') and g''' (the derivatives of the critical-point
functions).  All callables accept numpy arrays as well as floats.

The built-in families mirror the classical test cases:

    power_phase   f = (x/3)^(3/2),            g = 1
    quadratic     f = omega x^2 / 2,          g = 1
    ik_monomial   f = (X/alpha)(x/N)^alpha,   g = sqrt(alpha/x)
    exponential   f = alpha beta^x,           g = 1
    zeta_log      f = -(t/2pi) log x,         g = x^(-sigma)   (conjugated
                  orientation, so that f'' > 0)
    oscillatory   f = alpha x^2 + beta sin(gamma x)/x, g = 1
    sine_amplitude f = (x/3)^(3/2),           g = sin(alpha x)

Each family ships a local-regularity profile: functions M(x) (the radius on
which f'' and g are nearly linear) and U(x) (the local amplitude scale) plus
the associated constants.  The family scale factor in M is found by a
decreasing search 1/2, 1/4, ... until the full inequality sweep passes on a
representative interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

Func = Callable[[np.ndarray], np.ndarray]


class FamilyError(ValueError):
    """Invalid family name or parameters."""


class InversionRangeError(ValueError):
    """Requested r is outside the range of f' on the model domain."""

    def __init__(self, r: float, lo: float, hi: float):
        self.r = r
        self.admissible = (lo, hi)
        super().__init__(f"r={r} outside admissible f' range [{lo}, {hi}]")


@dataclass
class PhaseAmplitudeModel:
    """Phase f (derivatives to order 4), amplitude g (to order 3), domain.

    ``fprime_inverse`` is the analytic solution of f'(x) = r when the family
    has one.  ``rhs_phase`` returns (f(x_r) - r x_r) mod 1 using whatever
    exact structure the family admits; without it callers fall back to
    floating reduction, which loses accuracy once f reaches ~1e15.
    ``fprime_integer`` reports the exact integer value of f'(x) when family
    arithmetic can decide it, None when it cannot.
    """

    f: Func
    f1: Func
    f2: Func
    f3: Func
    f4: Func
    g: Func
    g1: Func
    g2: Func
    g3: Func
    domain: Tuple[float, float]
    fprime_inverse: Optional[Callable[[float], float]] = None
    rhs_phase: Optional[Callable[[float, float], float]] = None
    fprime_integer: Optional[Callable[[float], Optional[int]]] = None
    name: str = "custom"
    params: Tuple[float, ...] = ()

    def fprime_range(self) -> Tuple[float, float]:
        a, b = self.domain
        return float(self.f1(a)), float(self.f1(b))

    def conjugate_phase(self) -> "PhaseAmplitudeModel":
        """The model for f -> -f; note f'' flips sign, so the result violates
        the positivity assumption and is only suitable for direct summation."""
        return PhaseAmplitudeModel(
            f=lambda x: -self.f(x),
            f1=lambda x: -self.f1(x),
            f2=lambda x: -self.f2(x),
            f3=lambda x: -self.f3(x),
            f4=lambda x: -self.f4(x),
            g=self.g, g1=self.g1, g2=self.g2, g3=self.g3,
            domain=self.domain,
            name=self.name + "_conj",
            params=self.params,
        )


@dataclass
class ConditionMProfile:
    """Local regularity data: M(x), U(x), and the associated constants.

    eta = 3 delta / C2_minus must stay below 2 for the Taylor control of f''
    to hold with the constants used downstream.
    """

    M: Func
    M_prime: Func
    U: Func
    C2: float = 2.0
    C2_minus: float = 2.0
    C4: float = 2.0
    D0: float = 2.0
    D1: float = 2.0
    D2: float = 2.0
    delta: float = 0.5
    epsilon: Optional[float] = None  # family scale baked into M, for reports

    def __post_init__(self):
        if not self.delta < 1.0:
            raise FamilyError(f"delta must be < 1, got {self.delta}")
        if not self.eta < 2.0:
            raise FamilyError(f"eta = 3 delta / C2_minus = {self.eta} must be < 2")

    @property
    def eta(self) -> float:
        return 3.0 * self.delta / self.C2_minus

    def scaled_amplitude(self, factor: float) -> "ConditionMProfile":
        """Same profile with U multiplied pointwise by ``factor``."""
        U = self.U
        return ConditionMProfile(
            M=self.M, M_prime=self.M_prime, U=lambda x: factor * U(x),
            C2=self.C2, C2_minus=self.C2_minus, C4=self.C4,
            D0=self.D0, D1=self.D1, D2=self.D2, delta=self.delta,
            epsilon=self.epsilon,
        )


# ---------------------------------------------------------------------------
# inversion of f'
# ---------------------------------------------------------------------------

def invert_fprime(model: PhaseAmplitudeModel, r: float, tol: float = 1e-12) -> float:
    """Solve f'(x_r) = r on the model domain to |f'(x_r) - r| <= tol max(1,|r|).

    Uses the family's analytic inverse when present, otherwise bracketed
    bisection (f' is strictly increasing) polished by a few Newton steps.
    """
    lo, hi = model.domain
    flo, fhi = model.fprime_range()
    if not (flo <= r <= fhi):
        raise InversionRangeError(r, flo, fhi)
    if model.fprime_inverse is not None:
        x = float(model.fprime_inverse(r))
        return min(max(x, lo), hi)
    a, b = lo, hi
    for _ in range(80):
        mid = 0.5 * (a + b)
        if float(model.f1(mid)) < r:
            a = mid
        else:
            b = mid
    x = 0.5 * (a + b)
    for _ in range(8):
        d = float(model.f2(x))
        if d == 0.0:
            break
        step = (float(model.f1(x)) - r) / d
        x_new = x - step
        if not (a <= x_new <= b):
            break
        x = x_new
    if abs(float(model.f1(x)) - r) > tol * max(1.0, abs(r)):
        raise RuntimeError(f"f' inversion stalled at x={x} for r={r}")
    return x


def check_derivative_consistency(model: PhaseAmplitudeModel, n: int = 100,
                                 seed: int = 0, rel: float = 1e-6,
                                 window: Optional[Tuple[float, float]] = None) -> float:
    """Worst relative mismatch between supplied derivatives and central
    differences at n random interior points.  Raises if it exceeds ``rel``.

    ``window`` restricts sampling; callers must keep the finite-difference
    step 1e-6 max(1, |x|) well below the model's oscillation length.
    """
    lo, hi = window if window is not None else model.domain
    hi = min(hi, lo + 1e6)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), n)
    worst = 0.0
    pairs = [(model.f, model.f1), (model.f1, model.f2), (model.f2, model.f3),
             (model.f3, model.f4), (model.g, model.g1), (model.g1, model.g2),
             (model.g2, model.g3)]
    for fn, dfn in pairs:
        # floor the comparison scale at a fraction of the derivative's size
        # on the window, so isolated zeros do not poison the relative check
        sup = float(np.max(np.abs(np.asarray(dfn(xs), dtype=float))))
        for x in xs:
            h = 1e-6 * max(1.0, abs(x))
            fd = (float(fn(x + h)) - float(fn(x - h))) / (2 * h)
            an = float(dfn(x))
            scale = max(abs(an), abs(fd), 1e-3 * sup, 1e-9 / h)
            worst = max(worst, abs(fd - an) / scale)
    if worst > rel:
        raise AssertionError(f"derivative mismatch {worst:.3e} exceeds {rel}")
    return worst


# ---------------------------------------------------------------------------
# built-in families
# ---------------------------------------------------------------------------

_SQRT3 = math.sqrt(3.0)


def _power_phase_model(domain) -> PhaseAmplitudeModel:
    c = 3.0 ** -1.5

    def fprime_integer(x: float) -> Optional[int]:
        # f'(x) = sqrt(x/12) is a nonnegative integer iff x = 12 k^2
        if x < 0 or x != math.floor(x):
            return None
        n = int(x)
        if n % 12:
            return None
        k = math.isqrt(n // 12)
        return k if 12 * k * k == n else None

    one = lambda x: np.ones_like(np.asarray(x, dtype=float))
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return PhaseAmplitudeModel(
        f=lambda x: c * np.asarray(x, dtype=float) ** 1.5,
        f1=lambda x: 0.5 * np.sqrt(np.asarray(x, dtype=float) / 3.0),
        f2=lambda x: 0.25 / _SQRT3 / np.sqrt(np.asarray(x, dtype=float)),
        f3=lambda x: -(0.125 / _SQRT3) * np.asarray(x, dtype=float) ** -1.5,
        f4=lambda x: (3.0 / 16.0 / _SQRT3) * np.asarray(x, dtype=float) ** -2.5,
        g=one, g1=zero, g2=zero, g3=zero,
        domain=domain or (1e-3, 1e12),
        fprime_inverse=lambda r: 12.0 * r * r,
        rhs_phase=lambda r, xr: (-4.0 * r ** 3) % 1.0 if r == int(r) else (c * xr ** 1.5 - r * xr) % 1.0,
        fprime_integer=fprime_integer,
        name="power_phase",
    )


def _quadratic_model(omega: float, domain) -> PhaseAmplitudeModel:
    if omega <= 0:
        raise FamilyError("quadratic family needs omega > 0 (conjugate for omega < 0)")
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    one = lambda x: np.ones_like(np.asarray(x, dtype=float))
    return PhaseAmplitudeModel(
        f=lambda x: 0.5 * omega * np.asarray(x, dtype=float) ** 2,
        f1=lambda x: omega * np.asarray(x, dtype=float),
        f2=lambda x: np.full_like(np.asarray(x, dtype=float), omega),
        f3=zero, f4=zero,
        g=one, g1=zero, g2=zero, g3=zero,
        domain=domain or (-1e9, 1e9),
        fprime_inverse=lambda r: r / omega,
        rhs_phase=lambda r, xr: (-0.5 * r * r / omega) % 1.0,
        name="quadratic",
        params=(omega,),
    )


def _ik_model(alpha: float, n_scale: float, x_scale: float, domain) -> PhaseAmplitudeModel:
    if alpha <= 1 or n_scale <= 0 or x_scale <= 0:
        raise FamilyError("ik_monomial needs alpha > 1, N > 0, X > 0")
    A, N, X = alpha, n_scale, x_scale
    ga = math.sqrt(A)

    def pw(x, p):
        return (np.asarray(x, dtype=float) / N) ** p

    def fprime_integer(x: float) -> Optional[int]:
        if A == 2.0 and x == math.floor(x):
            v = x * X / (N * N)
            if v == math.floor(v):
                return int(v)
        return None

    return PhaseAmplitudeModel(
        f=lambda x: (X / A) * pw(x, A),
        f1=lambda x: (X / N) * pw(x, A - 1),
        f2=lambda x: (X * (A - 1) / N ** 2) * pw(x, A - 2),
        f3=lambda x: (X * (A - 1) * (A - 2) / N ** 3) * pw(x, A - 3),
        f4=lambda x: (X * (A - 1) * (A - 2) * (A - 3) / N ** 4) * pw(x, A - 4),
        g=lambda x: ga * np.asarray(x, dtype=float) ** -0.5,
        g1=lambda x: -0.5 * ga * np.asarray(x, dtype=float) ** -1.5,
        g2=lambda x: 0.75 * ga * np.asarray(x, dtype=float) ** -2.5,
        g3=lambda x: -1.875 * ga * np.asarray(x, dtype=float) ** -3.5,
        domain=domain or (1e-3 * N, 1e9 * N),
        fprime_inverse=lambda r: N * (r * N / X) ** (1.0 / (A - 1.0)),
        rhs_phase=lambda r, xr: (-(X / (A / (A - 1.0))) * (r * N / X) ** (A / (A - 1.0))) % 1.0,
        fprime_integer=fprime_integer,
        name="ik_monomial",
        params=(alpha, n_scale, x_scale),
    )


def _exponential_model(alpha: float, beta: float, domain) -> PhaseAmplitudeModel:
    if beta <= 1 or alpha <= 0:
        raise FamilyError("exponential family needs beta > 1 and alpha > 0")
    lb = math.log(beta)
    xmax = (700.0 - math.log(alpha)) / lb  # keep beta^x inside float range
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    one = lambda x: np.ones_like(np.asarray(x, dtype=float))

    def bx(x, k):
        return alpha * lb ** k * np.exp(np.asarray(x, dtype=float) * lb)

    return PhaseAmplitudeModel(
        f=lambda x: bx(x, 0),
        f1=lambda x: bx(x, 1),
        f2=lambda x: bx(x, 2),
        f3=lambda x: bx(x, 3),
        f4=lambda x: bx(x, 4),
        g=one, g1=zero, g2=zero, g3=zero,
        domain=domain or (-xmax, xmax),
        fprime_inverse=lambda r: math.log(r / (alpha * lb)) / lb,
        rhs_phase=lambda r, xr: (r / lb - r * xr) % 1.0,
        name="exponential",
        params=(alpha, beta),
    )


def _zeta_log_model(sigma: float, t: float, domain) -> PhaseAmplitudeModel:
    # conjugated orientation: f = -(t/2pi) log x has f'' = t/(2 pi x^2) > 0
    if t <= 0:
        raise FamilyError("zeta_log family needs t > 0")
    c = t / (2.0 * math.pi)
    return PhaseAmplitudeModel(
        f=lambda x: -c * np.log(np.asarray(x, dtype=float)),
        f1=lambda x: -c / np.asarray(x, dtype=float),
        f2=lambda x: c * np.asarray(x, dtype=float) ** -2.0,
        f3=lambda x: -2.0 * c * np.asarray(x, dtype=float) ** -3.0,
        f4=lambda x: 6.0 * c * np.asarray(x, dtype=float) ** -4.0,
        g=lambda x: np.asarray(x, dtype=float) ** -sigma,
        g1=lambda x: -sigma * np.asarray(x, dtype=float) ** (-sigma - 1),
        g2=lambda x: sigma * (sigma + 1) * np.asarray(x, dtype=float) ** (-sigma - 2),
        g3=lambda x: -sigma * (sigma + 1) * (sigma + 2) * np.asarray(x, dtype=float) ** (-sigma - 3),
        domain=domain or (1e-3, 1e12),
        fprime_inverse=lambda r: -c / r,
        rhs_phase=lambda r, xr: (-c * math.log(xr) - r * xr) % 1.0,
        name="zeta_log",
        params=(sigma, t),
    )


def _oscillatory_model(alpha: float, beta: float, gamma: float, domain) -> PhaseAmplitudeModel:
    # f = alpha x^2 + beta sin(gamma x)/x; derivatives by the Leibniz rule
    if alpha <= 0:
        raise FamilyError("oscillatory family needs alpha > 0")
    dom = domain or (1.0, 1e6)
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    one = lambda x: np.ones_like(np.asarray(x, dtype=float))
    b, gm = beta, gamma

    def u(x, k):
        x = np.asarray(x, dtype=float)
        s, c = np.sin(gm * x), np.cos(gm * x)
        if k == 0:
            return s / x
        if k == 1:
            return gm * c / x - s / x ** 2
        if k == 2:
            return -gm ** 2 * s / x - 2 * gm * c / x ** 2 + 2 * s / x ** 3
        if k == 3:
            return -gm ** 3 * c / x + 3 * gm ** 2 * s / x ** 2 + 6 * gm * c / x ** 3 - 6 * s / x ** 4
        return gm ** 4 * s / x + 4 * gm ** 3 * c / x ** 2 - 12 * gm ** 2 * s / x ** 3 - 24 * gm * c / x ** 4 + 24 * s / x ** 5

    model = PhaseAmplitudeModel(
        f=lambda x: alpha * np.asarray(x, dtype=float) ** 2 + b * u(x, 0),
        f1=lambda x: 2 * alpha * np.asarray(x, dtype=float) + b * u(x, 1),
        f2=lambda x: 2 * alpha + b * u(x, 2),
        f3=lambda x: b * u(x, 3),
        f4=lambda x: b * u(x, 4),
        g=one, g1=zero, g2=zero, g3=zero,
        domain=dom,
        name="oscillatory",
        params=(alpha, beta, gamma),
    )
    worst = float(np.min(model.f2(np.linspace(dom[0], min(dom[1], dom[0] + 1e4), 4096))))
    if worst <= 0:
        raise FamilyError(f"oscillatory family has f'' <= 0 on the domain (min {worst})")
    return model


def _sine_amplitude_model(alpha: float, domain) -> PhaseAmplitudeModel:
    base = _power_phase_model(domain or (1e-3, 1e9))
    a = alpha
    return PhaseAmplitudeModel(
        f=base.f, f1=base.f1, f2=base.f2, f3=base.f3, f4=base.f4,
        g=lambda x: np.sin(a * np.asarray(x, dtype=float)),
        g1=lambda x: a * np.cos(a * np.asarray(x, dtype=float)),
        g2=lambda x: -a * a * np.sin(a * np.asarray(x, dtype=float)),
        g3=lambda x: -a ** 3 * np.cos(a * np.asarray(x, dtype=float)),
        domain=base.domain,
        fprime_inverse=base.fprime_inverse,
        name="sine_amplitude",
        params=(alpha,),
    )


# representative intervals on which the family scale factor is calibrated
_CALIBRATION_INTERVAL = {
    "power_phase": (100.0, 1200.0),
    "ik_monomial": None,   # (N, 4N), filled per params
    "exponential": None,   # centred where f'' ~ 10
    "zeta_log": (50.0, 500.0),
    "oscillatory": None,
    "sine_amplitude": (100.0, 400.0),
}

_eps_cache: dict = {}


def _search_epsilon(make_profile, model, interval, floor=2.0 ** -20) -> float:
    """Decreasing search eps in {1/2, 1/4, ...} until the inequality sweep passes."""
    from .errbudget import check_condition_M

    eps = 0.5
    while eps >= floor:
        profile = make_profile(eps)
        report = check_condition_M(model, profile, interval[0], interval[1], grid=24)
        if report.passed:
            return eps
        eps *= 0.5
    raise FamilyError("no scale factor in {1/2, 1/4, ...} satisfies the regularity sweep")


def builtin_family(name: str, params: Sequence[float] = (),
                   domain: Optional[Tuple[float, float]] = None,
                   ) -> Tuple[PhaseAmplitudeModel, ConditionMProfile]:
    """Construct a named family and its regularity profile.

    ``params`` per family: power_phase (); quadratic (omega[, span]);
    ik_monomial (alpha, N, X); exponential (alpha, beta); zeta_log (sigma, t);
    oscillatory (alpha, beta, gamma[, eps]); sine_amplitude (alpha[, eps]).
    """
    params = tuple(float(p) for p in params)
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))

    if name == "power_phase":
        model = _power_phase_model(domain)
        key = (name, params, model.domain)
        if key not in _eps_cache:
            make = lambda e: ConditionMProfile(
                M=lambda x, e=e: e * np.asarray(x, dtype=float),
                M_prime=lambda x, e=e: np.full_like(np.asarray(x, dtype=float), e),
                U=lambda x: np.ones_like(np.asarray(x, dtype=float)))
            _eps_cache[key] = _search_epsilon(make, model, _CALIBRATION_INTERVAL[name])
        e = _eps_cache[key]
        profile = ConditionMProfile(
            M=lambda x: e * np.asarray(x, dtype=float),
            M_prime=lambda x: np.full_like(np.asarray(x, dtype=float), e),
            U=lambda x: np.ones_like(np.asarray(x, dtype=float)),
            epsilon=e)
        return model, profile

    if name == "quadratic":
        if len(params) not in (1, 2):
            raise FamilyError("quadratic takes (omega[, span])")
        omega = params[0]
        model = _quadratic_model(omega, domain)
        span = params[1] if len(params) == 2 else model.domain[1] - model.domain[0]
        profile = ConditionMProfile(
            M=lambda x: np.full_like(np.asarray(x, dtype=float), span),
            M_prime=zero,
            U=lambda x: np.ones_like(np.asarray(x, dtype=float)),
            epsilon=span)
        return model, profile

    if name == "ik_monomial":
        if len(params) != 3:
            raise FamilyError("ik_monomial takes (alpha, N, X)")
        alpha, N, X = params
        model = _ik_model(alpha, N, X, domain)
        key = (name, params, model.domain)
        if key not in _eps_cache:
            make = lambda e: ConditionMProfile(
                M=lambda x, e=e: e * np.asarray(x, dtype=float),
                M_prime=lambda x, e=e: np.full_like(np.asarray(x, dtype=float), e),
                U=model.g)
            _eps_cache[key] = _search_epsilon(make, model, (N, 4.0 * N))
        e = _eps_cache[key]
        profile = ConditionMProfile(
            M=lambda x: e * np.asarray(x, dtype=float),
            M_prime=lambda x: np.full_like(np.asarray(x, dtype=float), e),
            U=model.g, epsilon=e)
        return model, profile

    if name == "exponential":
        if len(params) != 2:
            raise FamilyError("exponential takes (alpha, beta)")
        alpha, beta = params
        model = _exponential_model(alpha, beta, domain)
        # calibrate where f'' is moderate; condition shift-invariant in x
        x0 = math.log(10.0 / (alpha * math.log(beta) ** 2)) / math.log(beta)
        key = (name, params, model.domain)
        if key not in _eps_cache:
            make = lambda e: ConditionMProfile(
                M=lambda x, e=e: np.full_like(np.asarray(x, dtype=float), e),
                M_prime=zero,
                U=lambda x: np.ones_like(np.asarray(x, dtype=float)))
            _eps_cache[key] = _search_epsilon(make, model, (x0, x0 + 3.0))
        e = _eps_cache[key]
        profile = ConditionMProfile(
            M=lambda x: np.full_like(np.asarray(x, dtype=float), e),
            M_prime=zero,
            U=lambda x: np.ones_like(np.asarray(x, dtype=float)),
            epsilon=e)
        return model, profile

    if name == "zeta_log":
        if len(params) != 2:
            raise FamilyError("zeta_log takes (sigma, t)")
        sigma, t = params
        model = _zeta_log_model(sigma, t, domain)
        key = (name, params, model.domain)
        if key not in _eps_cache:
            make = lambda e: ConditionMProfile(
                M=lambda x, e=e: e * np.asarray(x, dtype=float),
                M_prime=lambda x, e=e: np.full_like(np.asarray(x, dtype=float), e),
                U=model.g)
            _eps_cache[key] = _search_epsilon(make, model, _CALIBRATION_INTERVAL[name])
        e = _eps_cache[key]
        profile = ConditionMProfile(
            M=lambda x: e * np.asarray(x, dtype=float),
            M_prime=lambda x: np.full_like(np.asarray(x, dtype=float), e),
            U=model.g, epsilon=e)
        return model, profile

    if name == "oscillatory":
        if len(params) not in (3, 4):
            raise FamilyError("oscillatory takes (alpha, beta, gamma[, eps])")
        alpha, beta, gamma = params[:3]
        model = _oscillatory_model(alpha, beta, gamma, domain)
        if len(params) == 4:
            e = params[3]
        else:
            lo = model.domain[0]
            make = lambda e: ConditionMProfile(
                M=lambda x, e=e: e * np.sqrt(np.asarray(x, dtype=float)),
                M_prime=lambda x, e=e: 0.5 * e / np.sqrt(np.asarray(x, dtype=float)),
                U=lambda x: np.ones_like(np.asarray(x, dtype=float)))
            e = _search_epsilon(make, model, (lo + 10.0, lo + 500.0))
        profile = ConditionMProfile(
            M=lambda x: e * np.sqrt(np.asarray(x, dtype=float)),
            M_prime=lambda x: 0.5 * e / np.sqrt(np.asarray(x, dtype=float)),
            U=lambda x: np.ones_like(np.asarray(x, dtype=float)),
            epsilon=e)
        return model, profile

    if name == "sine_amplitude":
        if len(params) not in (1, 2):
            raise FamilyError("sine_amplitude takes (alpha[, eps])")
        alpha = params[0]
        model = _sine_amplitude_model(alpha, domain)
        if len(params) == 2:
            e = params[1]
        else:
            key = (name, params, model.domain)
            if key not in _eps_cache:
                make = lambda ee: ConditionMProfile(
                    M=lambda x, ee=ee: np.full_like(np.asarray(x, dtype=float), ee),
                    M_prime=zero,
                    U=lambda x: np.ones_like(np.asarray(x, dtype=float)))
                _eps_cache[key] = _search_epsilon(make, model, _CALIBRATION_INTERVAL[name])
            e = _eps_cache[key]
        profile = ConditionMProfile(
            M=lambda x: np.full_like(np.asarray(x, dtype=float), e),
            M_prime=zero,
            U=lambda x: np.ones_like(np.asarray(x, dtype=float)),
            epsilon=e)
        return model, profile

    raise FamilyError(f"unknown family {name!r}")
