"""Exact two-point-measurement statistics of the unital Otto cycle.

The cycle runs A -> B -> C -> D: projective energy measurement in the
gap-nu1 basis, driving unitary U (transition probability delta),
measurement in the gap-nu2 basis, a unital channel with flip
probability theta, another measurement, compression unitary V
(transition probability zeta), and a final gap-nu1 measurement.  The
sixteen measurement records and their probabilities form the joint
distribution of the stochastic work W and channel heat Q_M; everything
downstream (cumulants, bounds, regime maps) is exact arithmetic on this
finite list.

The backward cycle follows from the forward one by swapping delta and
zeta.  The coherently controlled variant is a signed mixture of the
channel distribution and the identity-channel distribution, weighted by
the Fourier-basis branch probability of the control qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import ControlSpec, PhysicsError

__all__ = [
    "CycleParams",
    "JointDistribution",
    "MomentSummary",
    "SampleStats",
    "enumerate_paths",
    "backward_distribution",
    "cs_distribution",
    "sample",
    "distribution_to_csv",
]

_CLAMP_TOL = 1e-10
_SUM_TOL = 1e-10

# Measurement records (n, m, k, l): signs of the measured energy at the
# four cycle points, +1 for the excited state.
_PATHS = [
    (n, m, k, l)
    for n in (-1, 1)
    for m in (-1, 1)
    for k in (-1, 1)
    for l in (-1, 1)
]


@dataclass(frozen=True)
class CycleParams:
    """All scalar inputs of one Otto cycle.

    beta is the bath inverse temperature (negative values allowed), nu1
    and nu2 the two gaps, delta and zeta the non-adiabatic transition
    probabilities of the expansion and compression strokes.
    """

    beta: float
    nu1: float
    nu2: float
    delta: float
    zeta: float

    def __post_init__(self):
        for name in ("beta", "nu1", "nu2", "delta", "zeta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.nu1 <= 0.0 or self.nu2 <= 0.0:
            raise ValueError("gaps nu1, nu2 must be positive")
        if not (0.0 <= self.delta <= 1.0 and 0.0 <= self.zeta <= 1.0):
            raise ValueError("delta and zeta must lie in [0, 1]")

    @property
    def partition_function(self) -> float:
        """Z = exp(beta nu1) + exp(-beta nu1)."""
        return 2.0 * math.cosh(self.beta * self.nu1)

    @property
    def tanh_beta_nu1(self) -> float:
        return math.tanh(self.beta * self.nu1)

    def thermal_weights(self) -> tuple[float, float]:
        """(e^{+beta nu1}/Z, e^{-beta nu1}/Z): ground and excited weights."""
        t = self.tanh_beta_nu1
        return (0.5 * (1.0 + t), 0.5 * (1.0 - t))

    @property
    def swapped(self) -> "CycleParams":
        """Same cycle with delta and zeta exchanged (the backward cycle)."""
        return CycleParams(self.beta, self.nu1, self.nu2, self.zeta, self.delta)


@dataclass(frozen=True)
class JointDistribution:
    """Finite joint distribution of (W, Q_M), with merged unique outcomes."""

    w: np.ndarray
    q_m: np.ndarray
    prob: np.ndarray
    direction: str = "forward"
    control: ControlSpec | None = None

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        q = np.asarray(self.q_m, dtype=float)
        p = np.array(self.prob, dtype=float)
        if not (w.shape == q.shape == p.shape) or w.ndim != 1:
            raise ValueError("w, q_m, prob must be 1-d arrays of equal length")
        if self.direction not in ("forward", "backward"):
            raise ValueError("direction must be 'forward' or 'backward'")
        if p.min(initial=0.0) < -_CLAMP_TOL:
            raise PhysicsError(
                f"outcome probability {p.min():.3g} below -{_CLAMP_TOL:g}"
            )
        p[p < 0.0] = 0.0
        total = p.sum()
        if abs(total - 1.0) > _SUM_TOL:
            raise PhysicsError(f"probabilities sum to {total!r}, not 1")
        for arr in (w, q, p):
            arr.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "q_m", q)
        object.__setattr__(self, "prob", p)

    def __len__(self) -> int:
        return self.w.size

    def characteristic_value(self, gamma_w: float, gamma_m: float) -> complex:
        """Brute-force discrete transform sum_k p_k e^{i gw W_k + i gm Q_k}."""
        phase = np.exp(1j * (gamma_w * self.w + gamma_m * self.q_m))
        return complex(np.sum(self.prob * phase))


def _merge(
    entries, direction: str, control: ControlSpec | None = None
) -> JointDistribution:
    acc: dict[tuple[float, float], float] = {}
    for w, q, p in entries:
        key = (w, q)
        acc[key] = acc.get(key, 0.0) + p
    keys = sorted(k for k in acc if acc[k] != 0.0)
    w = np.array([k[0] for k in keys])
    q = np.array([k[1] for k in keys])
    p = np.array([acc[k] for k in keys])
    return JointDistribution(w, q, p, direction=direction, control=control)


def _path_entries(params: CycleParams, theta: float):
    """Yield (W, Q_M, prob) for the sixteen measurement records."""
    w_ground, w_excited = params.thermal_weights()
    for n, m, k, l in _PATHS:
        p = w_ground if n < 0 else w_excited
        p *= params.delta if m != n else 1.0 - params.delta
        p *= theta if k != m else 1.0 - theta
        p *= params.zeta if l != k else 1.0 - params.zeta
        w = (n - l) * params.nu1 + (k - m) * params.nu2
        q = (k - m) * params.nu2
        yield (w, q, p)


def enumerate_paths(params: CycleParams, theta: float) -> JointDistribution:
    """Exact forward joint distribution of (W, Q_M) for a unital channel.

    W takes values in {0, +-2 nu1, +-2 nu2, +-2(nu2-nu1), +-2(nu1+nu2)}
    and Q_M in {0, +-2 nu2}; rows with identical outcomes are merged.
    """
    if not math.isfinite(theta) or not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    return _merge(_path_entries(params, theta), "forward")


def backward_distribution(params: CycleParams, theta: float) -> JointDistribution:
    """Joint distribution of the backward cycle: delta and zeta swapped."""
    if not math.isfinite(theta) or not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    return _merge(_path_entries(params.swapped, theta), "backward")


def cs_distribution(
    params: CycleParams, theta: float, ctrl: ControlSpec
) -> JointDistribution:
    """Joint distribution with the channel applied under coherent control.

    The post-selected branch mixes the plain channel distribution with
    weight 1/(2 p_branch) and the identity-channel distribution (all
    heat on Q_M = 0 paths) with weight +- sqrt(alpha(1-alpha))/(2 p_branch).
    The measurement channel keeps theta <= 1/2, which guarantees the
    merged probabilities stay nonnegative; beyond that regime the minus
    branch can mix to a negative weight and :class:`PhysicsError` is
    raised.
    """
    if not math.isfinite(theta) or not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    p_branch = ctrl.branch_probability
    w_channel = 0.5 / p_branch
    w_identity = ctrl.sign * ctrl.coherence / (2.0 * p_branch)
    entries = [
        (w, q, w_channel * p) for w, q, p in _path_entries(params, theta)
    ]
    entries += [
        (w, q, w_identity * p) for w, q, p in _path_entries(params, 0.0)
    ]
    return _merge(entries, "forward", control=ctrl)


@dataclass(frozen=True)
class MomentSummary:
    """Empirical raw moments of one variable, orders 1 through 4."""

    count: int
    raw: tuple[float, float, float, float]

    @property
    def mean(self) -> float:
        return self.raw[0]

    @property
    def variance(self) -> float:
        return self.raw[1] - self.raw[0] ** 2

    def central(self, order: int) -> float:
        m1, m2, m3, m4 = self.raw
        if order == 2:
            return m2 - m1 * m1
        if order == 3:
            return m3 - 3.0 * m2 * m1 + 2.0 * m1**3
        if order == 4:
            return m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1**4
        raise ValueError("central moments implemented for orders 2-4")

    @property
    def mean_stderr(self) -> float:
        return math.sqrt(max(self.variance, 0.0) / self.count)

    @property
    def variance_stderr(self) -> float:
        # Var(s^2) ~ (mu4 - mu2^2)/n for large n
        spread = self.central(4) - self.central(2) ** 2
        return math.sqrt(max(spread, 0.0) / self.count)


@dataclass(frozen=True)
class SampleStats:
    """Moments of an i.i.d. sample drawn from a JointDistribution."""

    count: int
    seed: int
    w: MomentSummary
    q_m: MomentSummary


def sample(dist: JointDistribution, n: int, seed: int) -> SampleStats:
    """Draw n outcomes by inverse CDF with a seeded PCG64 generator.

    Deterministic for a fixed seed: two calls with identical arguments
    return equal :class:`SampleStats`.
    """
    if n < 1:
        raise ValueError("need at least one draw")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(dist.prob)
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    idx = np.minimum(idx, len(dist) - 1)

    def moments(values: np.ndarray) -> MomentSummary:
        draws = values[idx]
        raw = tuple(float(np.mean(draws**k)) for k in (1, 2, 3, 4))
        return MomentSummary(count=n, raw=raw)

    return SampleStats(count=n, seed=seed, w=moments(dist.w), q_m=moments(dist.q_m))


def distribution_to_csv(dist: JointDistribution, fileobj) -> None:
    """Write outcomes as CSV rows ``w,q_m,prob`` (17 significant digits)."""
    fileobj.write("w,q_m,prob\n")
    for w, q, p in zip(dist.w, dist.q_m, dist.prob):
        fileobj.write(f"{w:.17g},{q:.17g},{p:.17g}\n")
