"""Draw the walk's marginal probability p by inverting the lag-1 correlation law.

A uniform draw u is mapped to a target lag-1 correlation
``t(u) = 1 - (1 - u)^(1/(2-2H))`` and p is the unique root of
``n_step_correlation(p, model, 1) = t(u)`` on the branch p in (0, 1/2].
The target is only attainable up to the maximal phi coefficient
``sigma_max = (2/pi) asin(delta1) < 1``, so uniforms above the feasibility
threshold admit no solution; the policy below decides what happens then.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fgn import HurstModel
from .link import n_step_correlation, persistence_from_p, sigma_max

__all__ = [
    "InfeasiblePolicy",
    "InfeasibleUniformError",
    "InfeasibleTargetError",
    "PSample",
    "target_from_uniform",
    "feasibility_threshold",
    "solve_p",
    "solve_p_batch",
    "sample_p",
    "density_p",
    "feasible_mass",
]

P_FLOOR = 1e-8
P_TOL = 1e-12
CORR_TOL = 1e-10
# 64 halvings of [1e-8, 1/2]: far below the 1e-12 p-tolerance, and enough to
# meet CORR_TOL even where sigma1 is steepest (slope ~1e3 near the floor)
_BISECT_ITERS = 64


class InfeasiblePolicy(str, Enum):
    """What to do with a uniform whose target exceeds sigma_max."""

    RESAMPLE = "resample"
    CLAMP = "clamp"
    ERROR = "error"


class InfeasibleUniformError(ValueError):
    """Raised under policy ERROR when a uniform admits no solvable target."""

    def __init__(self, u: float, s_max: float):
        self.u = u
        self.sigma_max = s_max
        super().__init__(
            f"uniform draw u={u!r} maps to a target above sigma_max={s_max!r}; no p solves it"
        )


class InfeasibleTargetError(ValueError):
    """Raised when solve_p is handed a target above sigma_max."""


@dataclass(frozen=True)
class PSample:
    """One accepted draw of the marginal parameter."""

    u: float
    target: float
    p: float
    rho: float
    resampled_count: int = 0


def target_from_uniform(u: float, model: HurstModel) -> float:
    """Map a uniform in [0, 1) to its target correlation 1 - (1-u)^(1/(2-2H))."""
    if not 0.0 <= u < 1.0:
        raise ValueError(f"uniform must be in [0, 1), got {u}")
    return float(-np.expm1(np.log1p(-u) / (2.0 - 2.0 * model.h)))


def feasibility_threshold(model: HurstModel) -> float:
    """Largest solvable uniform, u_max = 1 - (1 - sigma_max)^(2-2H)."""
    return -float(np.expm1((2.0 - 2.0 * model.h) * np.log1p(-sigma_max(model))))


def solve_p_batch(targets: np.ndarray, model: HurstModel) -> np.ndarray:
    """Vectorised bisection for p in (0, 1/2] with sigma1(p) = target.

    The lag-1 correlation is strictly increasing on the branch, so bisection
    is unconditionally convergent; the fixed halving count leaves the bracket
    far below the 1e-12 p-tolerance and meets the 1e-10 correlation tolerance
    even on the steep small-p flank.  Targets at or below sigma1(P_FLOOR)
    collapse to the bracket floor (the walk degenerates toward a
    constant-sign path there); targets above sigma_max raise.
    """
    targets = np.asarray(targets, dtype=np.float64)
    s_max = sigma_max(model)
    if np.any(targets > s_max):
        bad = float(targets[targets > s_max][0])
        raise InfeasibleTargetError(f"target {bad!r} exceeds sigma_max {s_max!r}")
    if np.any(targets < 0.0):
        raise ValueError("targets must be nonnegative")

    lo = np.full_like(targets, P_FLOOR)
    hi = np.full_like(targets, 0.5)
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        below = np.asarray(n_step_correlation(mid, model, 1)) <= targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    p = 0.5 * (lo + hi)
    # sigma1 is quadratically flat at its maximum, so float noise makes the
    # last ~1e-8 of the bracket unresolvable; the maximal target means p = 1/2
    p = np.where(targets == s_max, 0.5, p)

    s_floor = float(n_step_correlation(P_FLOOR, model, 1))
    at_floor = targets <= s_floor
    p = np.where(at_floor, P_FLOOR, p)

    achieved = np.asarray(n_step_correlation(p, model, 1))
    bad = ~at_floor & (np.abs(achieved - targets) > CORR_TOL)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise RuntimeError(
            "bisection bracket failure: "
            f"target={targets[i]!r} achieved={achieved[i]!r} at p={p[i]!r}"
        )
    return p


def solve_p(target: float, model: HurstModel) -> float:
    """Scalar wrapper over solve_p_batch (single root-finding code path)."""
    return float(solve_p_batch(np.array([target]), model)[0])


def sample_p(
    rng: np.random.Generator,
    model: HurstModel,
    policy: InfeasiblePolicy = InfeasiblePolicy.RESAMPLE,
) -> PSample:
    """Draw one PSample from the uniform source under the given policy.

    The source is consumed one uniform per attempt; the number of rejected
    attempts is recorded so a fixed seed reproduces the sample exactly.
    """
    u, target, count = _draw_target(rng, model, policy)
    p = solve_p(target, model)
    return PSample(u=u, target=target, p=p, rho=float(persistence_from_p(p, model)), resampled_count=count)


def _draw_target(
    rng: np.random.Generator, model: HurstModel, policy: InfeasiblePolicy
) -> tuple[float, float, int]:
    """Uniform-draw phase of sample_p: returns (u, solvable target, rejections)."""
    s_max = sigma_max(model)
    count = 0
    while True:
        u = float(rng.random())
        target = float(target_from_uniform(u, model))
        if target <= s_max:
            return u, target, count
        if policy == InfeasiblePolicy.RESAMPLE:
            count += 1
            continue
        if policy == InfeasiblePolicy.CLAMP:
            return u, s_max, count
        raise InfeasibleUniformError(u, s_max)


def feasible_mass(model: HurstModel) -> float:
    """Probability mass the density places on the solvable branch.

    Equals ``1 - (1 - sigma_max)^(2-2H)`` (< 1): the nominal density does not
    integrate to one over any p-branch, which is why resampling renormalises.
    """
    return feasibility_threshold(model)


def density_p(p, model: HurstModel):
    """Nominal density of p on the increasing branch (scalar or array).

    ``g(p) = (1-H) 2^(3-2H) (1-v)^(1-2H) dv/dp`` with ``v = (sigma1(p)+1)/2``.
    The derivative is a Richardson-extrapolated central difference with base
    step 1e-6.  Negative for p > 1/2, where v(p) decreases by symmetry.
    """
    h_step = 1e-6
    scalar = np.ndim(p) == 0
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    if np.any((p <= 2.0 * h_step) | (p >= 1.0 - 2.0 * h_step)):
        raise ValueError("p outside the differentiable range")
    s1 = np.asarray(n_step_correlation(p, model, 1))
    if np.any(s1 >= 1.0):
        raise ValueError("sigma1(p) must be below 1")

    def v(q: np.ndarray) -> np.ndarray:
        return (np.asarray(n_step_correlation(q, model, 1)) + 1.0) / 2.0

    def central(step: float) -> np.ndarray:
        return (v(p + step) - v(p - step)) / (2.0 * step)

    dv = (4.0 * central(h_step / 2.0) - central(h_step)) / 3.0
    hh = model.h
    out = (1.0 - hh) * 2.0 ** (3.0 - 2.0 * hh) * (1.0 - (s1 + 1.0) / 2.0) ** (1.0 - 2.0 * hh) * dv
    return float(out[0]) if scalar else out
