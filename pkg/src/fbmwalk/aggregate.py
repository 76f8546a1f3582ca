"""Aggregate M independent trajectories into an approximate fBm path on [0, 1].

Each trajectory is standardised by its own marginal mean and variance,
summed into a single accumulator, and the sum is rescaled by
``a_H / (N^H sqrt(M))``.  Reduction follows a fixed schedule (pairwise tree
inside fixed-size blocks, blocks in index order), and every trajectory owns a
generator spawned deterministically from the master seed, so output is
byte-identical for any worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import BACKEND, kernels
from .fgn import HurstModel
from .link import n_step_correlation, persistence_from_p
from .sampling import InfeasiblePolicy, _draw_target, solve_p_batch
from .walk import Trajectory, draw_persistence

__all__ = ["AggregatedPath", "PathAccumulator", "generate_fbm"]

_BLOCK = 64  # trajectories per reduction block; fixed so results never depend on workers


@dataclass(frozen=True)
class AggregatedPath:
    """Approximate fBm sample path at t_k = k/N, k = 0..N."""

    h: float
    n_steps: int
    n_paths: int
    times: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)


def standardized_levels(levels: np.ndarray, p: float, karr: np.ndarray) -> np.ndarray:
    """Per-trajectory standardisation (X_k - k(2p-1)) / sqrt(4p(1-p))."""
    mean_step = 2.0 * p - 1.0
    scale = np.sqrt(4.0 * p * (1.0 - p))
    return (levels - karr * mean_step) / scale


@dataclass
class PathAccumulator:
    """Running sum of standardised trajectory levels of a fixed length."""

    n_steps: int
    total: np.ndarray = None  # type: ignore[assignment]
    count: int = 0
    resampled_total: int = 0
    resampled_max: int = 0

    def __post_init__(self) -> None:
        if self.total is None:
            self.total = np.zeros(self.n_steps, dtype=np.float64)
        self._karr = np.arange(1, self.n_steps + 1, dtype=np.float64)

    def add(self, trajectory: Trajectory) -> "PathAccumulator":
        if trajectory.n_steps != self.n_steps:
            raise ValueError(
                f"trajectory length {trajectory.n_steps} != accumulator length {self.n_steps}"
            )
        self.total += standardized_levels(trajectory.levels, trajectory.p, self._karr)
        self.count += 1
        if trajectory.psample is not None:
            c = trajectory.psample.resampled_count
            self.resampled_total += c
            self.resampled_max = max(self.resampled_max, c)
        return self

    def finalize(self, model: HurstModel, meta: dict | None = None) -> AggregatedPath:
        if self.count < 1:
            raise ValueError("cannot finalize an empty accumulator")
        n = self.n_steps
        values = np.empty(n + 1, dtype=np.float64)
        values[0] = 0.0
        values[1:] = model.a_h * self.total / (n**model.h * np.sqrt(self.count))
        out_meta = {
            "resample_total": self.resampled_total,
            "resample_max": self.resampled_max,
        }
        if meta:
            out_meta.update(meta)
        return AggregatedPath(
            h=model.h,
            n_steps=n,
            n_paths=self.count,
            times=np.arange(n + 1, dtype=np.float64) / n,
            values=values,
            meta=out_meta,
        )


def _walk_levels(rng: np.random.Generator, mode: str, n: int, p: float, aux: float) -> np.ndarray:
    """Step arrays drawn here, in the same order generate_trajectory uses."""
    if mode == "paper":
        gate = rng.random(n)
        val = rng.random(n)
        return kernels.paper_levels(gate, val, p, aux)
    if mode == "matched":
        u = rng.random(n)
        return kernels.matched_levels(u, p, aux)
    u = rng.random(n)
    return kernels.enriquez_levels(u, aux)


def _pairwise_sum(arrays: list[np.ndarray]) -> np.ndarray:
    while len(arrays) > 1:
        merged = [arrays[i] + arrays[i + 1] for i in range(0, len(arrays) - 1, 2)]
        if len(arrays) % 2:
            merged.append(arrays[-1])
        arrays = merged
    return arrays[0]


def generate_fbm(
    model: HurstModel,
    n_steps: int,
    n_paths: int,
    mode: str = "paper",
    policy: InfeasiblePolicy = InfeasiblePolicy.RESAMPLE,
    seed: int = 0,
    workers: int = 1,
    shared_p: bool = False,
) -> AggregatedPath:
    """Generate an approximate fBm path from n_paths aggregated trajectories.

    Parameters follow the construction: each trajectory draws its own
    marginal parameter (``shared_p=True`` forces a single draw for all of
    them, a diagnostic variant), walks n_steps, and is standardised before
    summation.  Deterministic given (all arguments except workers).
    """
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if mode not in ("paper", "matched", "enriquez"):
        raise ValueError(f"unknown mode {mode!r}")
    policy = InfeasiblePolicy(policy)

    t0 = time.perf_counter()
    root = np.random.SeedSequence(seed)
    children = root.spawn(n_paths + 1)
    rngs = [np.random.Generator(np.random.PCG64(c)) for c in children[:n_paths]]
    shared_rng = np.random.Generator(np.random.PCG64(children[n_paths]))

    # parameter-draw phase (consumes each trajectory's stream first)
    resample_total = 0
    resample_max = 0
    if mode == "enriquez":
        if shared_p:
            aux = np.full(n_paths, draw_persistence(shared_rng, model))
        else:
            aux = np.array([draw_persistence(r, model) for r in rngs])
        ps = np.full(n_paths, 0.5)
    else:
        if shared_p:
            u, target, count = _draw_target(shared_rng, model, policy)
            targets = np.full(n_paths, target)
            counts = [count]
        else:
            drawn = [_draw_target(r, model, policy) for r in rngs]
            targets = np.array([d[1] for d in drawn])
            counts = [d[2] for d in drawn]
        resample_total = int(sum(counts))
        resample_max = int(max(counts))
        ps = solve_p_batch(targets, model)
        if mode == "paper":
            aux = np.asarray(persistence_from_p(ps, model))
        else:
            aux = np.asarray(n_step_correlation(ps, model, 1))  # sigma1(p)

    karr = np.arange(1, n_steps + 1, dtype=np.float64)

    def task(i: int) -> np.ndarray:
        levels = _walk_levels(rngs[i], mode, n_steps, float(ps[i]), float(aux[i]))
        return standardized_levels(levels, float(ps[i]), karr)

    total = np.zeros(n_steps, dtype=np.float64)
    if workers <= 1:
        for start in range(0, n_paths, _BLOCK):
            block = [task(i) for i in range(start, min(start + _BLOCK, n_paths))]
            total += _pairwise_sum(block)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for start in range(0, n_paths, _BLOCK):
                idx = range(start, min(start + _BLOCK, n_paths))
                block = list(pool.map(task, idx))
                total += _pairwise_sum(block)

    values = np.empty(n_steps + 1, dtype=np.float64)
    values[0] = 0.0
    values[1:] = model.a_h * total / (n_steps**model.h * np.sqrt(n_paths))
    elapsed = time.perf_counter() - t0
    steps = n_steps * n_paths
    meta = {
        "mode": mode,
        "policy": policy.value,
        "seed": seed,
        "shared_p": shared_p,
        "workers": workers,
        "backend": BACKEND,
        "resample_total": resample_total,
        "resample_max": resample_max,
        "elapsed_s": elapsed,
        "throughput_steps_per_s": steps / elapsed if elapsed > 0 else float("inf"),
    }
    return AggregatedPath(
        h=model.h,
        n_steps=n_steps,
        n_paths=n_paths,
        times=np.arange(n_steps + 1, dtype=np.float64) / n_steps,
        values=values,
        meta=meta,
    )
