"""Characteristic functions and cumulants of work and channel heat.

Three independent routes to the same numbers:

1. exact enumeration -- raw/central moments of the finite joint
   distribution, converted algebraically to cumulants (the ground
   truth; no differentiation error);
2. closed forms -- the first and second cumulants transcribed from the
   analytic expressions (third and fourth have no published closed
   form and are deliberately not transcribed);
3. characteristic-function derivatives -- central finite differences of
   ln(chi) with Richardson extrapolation, kept as a cross-check.

The characteristic function of the unital cycle only ever needs
cos(x + i*beta*nu1) divided by the partition function, which collapses
to cos(x) -+ i sin(x) tanh(beta nu1); that identity is used throughout
so nothing overflows at large |beta nu1|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .qstate import ControlSpec, GeneralQubitChannel
from .trajectory import CycleParams, JointDistribution

__all__ = [
    "CumulantSet",
    "CFPoint",
    "FirstTwoCumulants",
    "CsFirstCumulants",
    "DerivativeStepError",
    "cf_unital",
    "cf_general",
    "cf_cs",
    "cumulants_from_distribution",
    "closed_form_first_second",
    "cs_first_cumulants",
    "cf_derivative_check",
]


class DerivativeStepError(ValueError):
    """Two step sizes disagree: the finite-difference step is unusable."""


@dataclass(frozen=True)
class CumulantSet:
    """First four cumulants of W and Q_M plus the mean bath heat."""

    w: tuple[float, float, float, float]
    q_m: tuple[float, float, float, float]
    qt_mean: float
    direction: str = "forward"

    def __post_init__(self):
        values = (*self.w, *self.q_m, self.qt_mean)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("cumulants must be finite")
        if self.w[1] < -1e-10 or self.q_m[1] < -1e-10:
            raise ValueError("variances must be nonnegative")

    @property
    def w_mean(self) -> float:
        return self.w[0]

    @property
    def qm_mean(self) -> float:
        return self.q_m[0]


@dataclass(frozen=True)
class FirstTwoCumulants:
    """Closed-form means and variances (second route)."""

    w_mean: float
    w_var: float
    qm_mean: float
    qm_var: float
    qt_mean: float
    direction: str = "forward"


@dataclass(frozen=True)
class CsFirstCumulants:
    """First cumulants of the coherently controlled cycle."""

    w_mean: float
    qm_mean: float
    qt_mean: float
    branch: str


@dataclass(frozen=True)
class CFPoint:
    """One evaluation of a characteristic function at real arguments."""

    gamma_w: float
    gamma_m: float
    value: complex

    def __post_init__(self):
        if abs(self.value) > 1.0 + 1e-9:
            raise ValueError(f"|chi| = {abs(self.value)} exceeds 1")


def _cos_ratio(u: float, sign: int, tanh_b: float) -> complex:
    """2 cos(u + sign * i * beta nu1) / Z without complex exponentials."""
    return complex(math.cos(u), -sign * math.sin(u) * tanh_b)


def _cf_brackets(
    params: CycleParams, gamma_w: float, gamma_m: float
) -> tuple[complex, complex]:
    """The two building blocks of the unital characteristic function.

    Returns (identity_part, channel_part): the theta-independent factor
    multiplying (1 - theta) and the factor multiplying theta.
    """
    t = params.tanh_beta_nu1
    nu1, nu2 = params.nu1, params.nu2
    d, z = params.delta, params.zeta
    s = d + z - 2.0 * d * z
    identity = 1.0 + (_cos_ratio(2.0 * gamma_w * nu1, +1, t) - 1.0) * s
    channel = (1.0 - d) * (
        z * _cos_ratio(2.0 * (gamma_w + gamma_m) * nu2, -1, t)
        + (1.0 - z)
        * _cos_ratio(2.0 * (gamma_w * (nu2 - nu1) + gamma_m * nu2), -1, t)
    ) + d * (
        (1.0 - z) * _cos_ratio(2.0 * (gamma_w + gamma_m) * nu2, +1, t)
        + z * _cos_ratio(2.0 * ((nu1 + nu2) * gamma_w + gamma_m * nu2), +1, t)
    )
    return identity, channel


def cf_unital(
    params: CycleParams, theta: float, gamma_w: float, gamma_m: float
) -> complex:
    """Forward characteristic function for a unital channel.

    Equals the discrete transform of :func:`~unital_otto.trajectory.
    enumerate_paths`; the backward variant is obtained by evaluating at
    ``params.swapped``.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    identity, channel = _cf_brackets(params, gamma_w, gamma_m)
    return (1.0 - theta) * identity + theta * channel


def cf_general(
    params: CycleParams,
    channel: GeneralQubitChannel,
    gamma_w: float,
    gamma_m: float,
) -> complex:
    """Forward characteristic function for an arbitrary qubit channel.

    The eight path groups carry the channel only through theta and
    h = sum_j <-|K_j K_j^dag|->; for unital channels (h = 1) this
    reduces to :func:`cf_unital`.
    """
    th, h = channel.theta, channel.h
    a, b = params.thermal_weights()
    nu1, nu2 = params.nu1, params.nu2
    d, z = params.delta, params.zeta
    ew = 2.0 * gamma_w
    em = 2.0 * gamma_m

    def e(x: float) -> complex:
        return cmath.exp(1j * x)

    stay, flip_down, flip_up = h - th, th, 1.0 - h + th
    chi = (1.0 - d) * (1.0 - z) * (a * stay + b * (1.0 - th))
    chi += (1.0 - d) * z * (a * e(-ew * nu1) * stay + b * e(ew * nu1) * (1.0 - th))
    chi += (1.0 - d) * z * (
        a * flip_up * e(ew * nu2 + em * nu2) + b * e(-ew * nu2 - em * nu2) * flip_down
    )
    chi += (1.0 - d) * (1.0 - z) * (
        a * flip_up * e(ew * (nu2 - nu1) + em * nu2)
        + b * e(-ew * (nu2 - nu1) - em * nu2) * flip_down
    )
    chi += d * (1.0 - z) * (
        a * e(-ew * nu2 - em * nu2) * flip_down + b * e(ew * nu2 + em * nu2) * flip_up
    )
    chi += d * z * (
        a * e(-ew * (nu1 + nu2) - em * nu2) * flip_down
        + b * e(ew * (nu1 + nu2) + em * nu2) * flip_up
    )
    chi += d * z * (a * (1.0 - th) + b * stay)
    chi += d * (1.0 - z) * (a * e(-ew * nu1) * (1.0 - th) + b * e(ew * nu1) * stay)
    return chi


def cf_cs(
    params: CycleParams,
    theta: float,
    ctrl: ControlSpec,
    gamma_w: float,
    gamma_m: float,
) -> complex:
    """Characteristic function of the coherently controlled cycle."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    identity, channel = _cf_brackets(params, gamma_w, gamma_m)
    p2 = 2.0 * ctrl.branch_probability
    return ((1.0 - theta + ctrl.sign * ctrl.coherence) * identity + theta * channel) / p2


def _marginal_cumulants(values: np.ndarray, prob: np.ndarray) -> tuple[float, ...]:
    mean = float(np.dot(prob, values))
    centred = values - mean
    c2 = float(np.dot(prob, centred**2))
    c3 = float(np.dot(prob, centred**3))
    c4 = float(np.dot(prob, centred**4))
    return (mean, c2, c3, c4 - 3.0 * c2 * c2)


def cumulants_from_distribution(dist: JointDistribution) -> CumulantSet:
    """Exact first four cumulants of both marginals of a joint distribution.

    The moment-to-cumulant identities (kappa1 = mu1, kappa2 = mu2 - mu1^2,
    kappa3 = mu3 - 3 mu2 mu1 + 2 mu1^3, kappa4 = mu4 - 4 mu3 mu1 - 3 mu2^2
    + 12 mu2 mu1^2 - 6 mu1^4) are evaluated in centred form, which is
    algebraically identical and numerically exact on a finite support.
    The mean bath heat follows from energy conservation,
    <Q_T> = <W> - <Q_M>.
    """
    kw = _marginal_cumulants(dist.w, dist.prob)
    kq = _marginal_cumulants(dist.q_m, dist.prob)
    return CumulantSet(
        w=kw, q_m=kq, qt_mean=kw[0] - kq[0], direction=dist.direction
    )


def closed_form_first_second(
    params: CycleParams, theta: float, direction: str = "forward"
) -> FirstTwoCumulants:
    """Closed-form means and variances of W and Q_M, plus the mean of Q_T.

    The backward direction applies the delta <-> zeta correspondence.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if direction == "backward":
        params = params.swapped
    elif direction != "forward":
        raise ValueError("direction must be 'forward' or 'backward'")
    t = params.tanh_beta_nu1
    nu1, nu2 = params.nu1, params.nu2
    d, z = params.delta, params.zeta
    s = d + z - 2.0 * d * z
    g = theta + (1.0 - 2.0 * theta) * s
    qm_mean = 2.0 * (1.0 - 2.0 * d) * theta * nu2 * t
    qm_var = 4.0 * theta * nu2**2 * (1.0 - (1.0 - 2.0 * d) ** 2 * theta * t * t)
    qt_mean = -2.0 * g * nu1 * t
    w_mean = qm_mean + qt_mean
    w_var = (
        4.0 * g * nu1**2
        + 8.0 * theta * (d + z - 1.0) * nu1 * nu2
        + 4.0 * theta * nu2**2
        - 4.0 * (g * nu1 + (2.0 * d - 1.0) * theta * nu2) ** 2 * t * t
    )
    return FirstTwoCumulants(
        w_mean=w_mean,
        w_var=w_var,
        qm_mean=qm_mean,
        qm_var=qm_var,
        qt_mean=qt_mean,
        direction=direction,
    )


def cs_first_cumulants(
    params: CycleParams, theta: float, ctrl: ControlSpec, direction: str = "forward"
) -> CsFirstCumulants:
    """Closed-form first cumulants of the coherently controlled cycle."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if direction == "backward":
        params = params.swapped
    elif direction != "forward":
        raise ValueError("direction must be 'forward' or 'backward'")
    t = params.tanh_beta_nu1
    nu1, nu2 = params.nu1, params.nu2
    d, z = params.delta, params.zeta
    s = d + z - 2.0 * d * z
    g = theta + (1.0 - 2.0 * theta) * s
    den = 1.0 + ctrl.sign * ctrl.coherence
    qm_mean = 2.0 * (1.0 - 2.0 * d) * theta * nu2 * t / den
    qt_mean = (
        -2.0 * g * nu1 * t - ctrl.sign * 2.0 * ctrl.coherence * s * nu1 * t
    ) / den
    return CsFirstCumulants(
        w_mean=qm_mean + qt_mean,
        qm_mean=qm_mean,
        qt_mean=qt_mean,
        branch=ctrl.branch,
    )


# 4th-derivative central stencil spanning +-4h, accurate to O(h^6).
_STENCIL4 = (
    (4, 7.0 / 240.0),
    (3, -2.0 / 5.0),
    (2, 169.0 / 60.0),
    (1, -122.0 / 15.0),
    (0, 91.0 / 8.0),
    (-1, -122.0 / 15.0),
    (-2, 169.0 / 60.0),
    (-3, -2.0 / 5.0),
    (-4, 7.0 / 240.0),
)

_DETECT_TOL = 1e-3


# ln(chi) carries an absolute rounding error of a few ulps; a stencil
# numerator this close to it is pure cancellation noise
_NOISE_FLOOR = 64.0 * 2.220446049250313e-16

_STENCILS: dict[int, tuple[tuple[int, float], ...]] = {
    1: ((1, 0.5), (-1, -0.5)),
    2: ((1, 1.0), (0, -2.0), (-1, 1.0)),
    3: ((2, 0.5), (1, -1.0), (-1, 1.0), (-2, -0.5)),
    4: _STENCIL4,
}


def _log_cf_derivative(
    log_chi: Callable[[float], complex], order: int, step: float
) -> complex:
    """d^order ln(chi) / d gamma^order at 0 by central differences.

    Each derivative is evaluated at two step sizes (h and 2h) and
    Richardson-extrapolated.  A numerator at the rounding floor of
    ln(chi), or estimates that disagree beyond 0.1%, flag a step that
    has fallen into cancellation (or gross truncation) and raise
    :class:`DerivativeStepError`.
    """
    if order not in _STENCILS:
        raise ValueError("order must be between 1 and 4")

    def stencil(h: float) -> complex:
        values = [(coeff, log_chi(offset * h)) for offset, coeff in _STENCILS[order]]
        numerator = sum(coeff * val for coeff, val in values)
        largest = max(abs(val) for _, val in values)
        noise = _NOISE_FLOOR * max(1.0, largest)
        # a sub-noise numerator is fine when the implied value is itself
        # negligible; it is fatal when rounding could masquerade as a
        # cumulant of visible size
        if 0.0 < abs(numerator) < noise and noise / h**order > 1e-6:
            raise DerivativeStepError(
                f"order-{order} stencil at step {h:g} is dominated by rounding"
            )
        return numerator / h**order

    accuracy = 6 if order == 4 else 2
    ratio = 2.0
    d_fine = stencil(step)
    d_coarse = stencil(ratio * step)
    if abs(d_fine - d_coarse) > _DETECT_TOL * max(1.0, abs(d_fine)):
        raise DerivativeStepError(
            f"order-{order} derivative estimates at steps {step:g} and "
            f"{ratio * step:g} disagree by {abs(d_fine - d_coarse):.3g}"
        )
    scale = ratio**accuracy
    return (scale * d_fine - d_coarse) / (scale - 1.0)


def cf_derivative_check(
    params: CycleParams,
    theta: float,
    ctrl: ControlSpec | None = None,
    step: float = 1e-3,
    step4: float = 2e-2,
    orders: tuple[int, ...] = (1, 2, 3, 4),
) -> CumulantSet:
    """Cumulants from numerical derivatives of ln(chi) (third route).

    Uses the unital characteristic function, or the coherently
    controlled one when ``ctrl`` is given.  Orders not requested come
    back as 0.  Defaults are tuned for cumulant magnitudes of order
    1-10; the order-4 stencil needs the larger default step to stay
    clear of roundoff.
    """
    chi: Callable[[float, float], complex]
    if ctrl is None:
        chi = lambda gw, gm: cf_unital(params, theta, gw, gm)
    else:
        chi = lambda gw, gm: cf_cs(params, theta, ctrl, gw, gm)

    def kappas(which: str) -> tuple[float, float, float, float]:
        if which == "w":
            log_chi = lambda g: cmath.log(chi(g, 0.0))
        else:
            log_chi = lambda g: cmath.log(chi(0.0, g))
        out = [0.0, 0.0, 0.0, 0.0]
        for order in orders:
            h = step4 if order == 4 else step
            deriv = _log_cf_derivative(log_chi, order, h)
            out[order - 1] = (deriv / 1j**order).real
        return tuple(out)

    kw = kappas("w")
    kq = kappas("q_m")
    return CumulantSet(w=kw, q_m=kq, qt_mean=kw[0] - kq[0])
