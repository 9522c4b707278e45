"""Monte Carlo machinery for the Poissonian potential at the origin.

Samples the impurity configuration in a disk, evaluates the induced
potential at the origin, and estimates the classical integrated density of
states N_c(E) = (m / 2 pi hbar^2) E[(E - V(0))_+].

Randomness is counter-based: fixed-size chunks of samples each own a Philox
substream keyed by (seed, chunk index), so results are bit-identical no
matter how chunks are distributed over workers. Partial sums (n, sum,
sum-of-squares) merge associatively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .laplace import QuadratureSpec, laplace_functional, _march_log_tail
from .potentials import LandauParams, PotentialModel

__all__ = [
    "PoissonConfig",
    "PoissonSample",
    "IdosEstimate",
    "CrosscheckPoint",
    "truncation_radius",
    "sample_field",
    "draw_v_origin",
    "estimate_Nc",
    "laplace_mc_crosscheck",
    "tail_exponent_fit",
]

CHUNK = 512  # samples per RNG substream; fixed so streams are schedule-free


@dataclass(frozen=True)
class PoissonConfig:
    rho: float
    radius: float
    seed: int
    n_samples: int

    def __post_init__(self):
        if self.rho <= 0 or self.radius <= 0:
            raise ValueError("rho and radius must be positive")
        if self.n_samples < 1:
            raise ValueError("need at least one sample")
        if not 0 <= self.seed < 2**63:
            raise ValueError("seed must fit in 63 bits")

    @property
    def mean_count(self) -> float:
        return self.rho * math.pi * self.radius**2


@dataclass(frozen=True)
class PoissonSample:
    """One realization: impurity positions and the potential at the origin."""

    points: np.ndarray  # shape (n, 2)
    v_origin: float


@dataclass(frozen=True)
class IdosEstimate:
    energies: np.ndarray
    values: np.ndarray
    stderrs: np.ndarray
    n_samples: int


@dataclass(frozen=True)
class CrosscheckPoint:
    t: float
    ratio: float
    stderr: float
    predicted: float
    skipped: bool


def truncation_radius(model: PotentialModel, rho: float, delta: float,
                      rtol: float = 1e-8) -> float:
    """Disk radius for sampling: excluded impurities contribute < delta to V(0).

    Smallest doubling-grid radius R with rho * 2 pi int_R^inf U(r) r dr
    below delta, then doubled for safety.
    """
    if rho <= 0 or delta <= 0:
        raise ValueError("rho and delta must be positive")

    def tail(R: float) -> float:
        fn = lambda s: float(model.evaluate(math.exp(s))) * math.exp(2.0 * s)
        return rho * 2.0 * math.pi * _march_log_tail(fn, math.log(R), rtol, 0.0)

    r = 1e-3 * model.length_scale()
    for _ in range(300):
        if tail(r) < delta:
            return 2.0 * r
        r *= 2.0
    raise ValueError("truncation radius search did not close (tail not integrable?)")


def _chunk_streams(seed: int, chunk_idx: int) -> tuple[np.random.Generator, np.random.Generator]:
    # two substreams per chunk: base sampling and (optional) thinning marks
    base = np.random.Generator(np.random.Philox(key=[seed, 2 * chunk_idx]))
    marks = np.random.Generator(np.random.Philox(key=[seed, 2 * chunk_idx + 1]))
    return base, marks


def _draw_chunk(config: PoissonConfig, model: PotentialModel, chunk_idx: int,
                n_in_chunk: int, keep_prob: float | None = None,
                want_points: bool = False):
    base, marks = _chunk_streams(config.seed, chunk_idx)
    counts = base.poisson(config.mean_count, n_in_chunk)
    total = int(counts.sum())
    radii = config.radius * np.sqrt(base.random(total))
    angles = 2.0 * math.pi * base.random(total)
    sample_ids = np.repeat(np.arange(n_in_chunk), counts)
    weights = np.asarray(model.evaluate(radii), dtype=float)
    if keep_prob is not None:
        keep = marks.random(total) < keep_prob
        weights = np.where(keep, weights, 0.0)
    v = np.bincount(sample_ids, weights=weights, minlength=n_in_chunk)
    if want_points:
        pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
        return counts, v, pts, sample_ids
    return counts, v


def draw_v_origin(config: PoissonConfig, model: PotentialModel,
                  keep_prob: float | None = None) -> np.ndarray:
    """V(0) for all samples; optional independent thinning with keep_prob.

    Thinning marks live in their own substream, so the thinned field is a
    pathwise subset of the full one (coupled comparison).
    """
    if keep_prob is not None and not 0.0 < keep_prob <= 1.0:
        raise ValueError("keep_prob must lie in (0, 1]")
    out = np.empty(config.n_samples)
    for chunk_idx in range(0, -(-config.n_samples // CHUNK)):
        lo = chunk_idx * CHUNK
        hi = min(lo + CHUNK, config.n_samples)
        _, v = _draw_chunk(config, model, chunk_idx, hi - lo, keep_prob)
        out[lo:hi] = v
    return out


def sample_field(config: PoissonConfig, model: PotentialModel,
                 index: int = 0) -> PoissonSample:
    """One realization, consistent with the batch stream at the same index."""
    if not 0 <= index < config.n_samples:
        raise ValueError("sample index out of range")
    chunk_idx, offset = divmod(index, CHUNK)
    lo = chunk_idx * CHUNK
    hi = min(lo + CHUNK, config.n_samples)
    counts, v, pts, sample_ids = _draw_chunk(
        config, model, chunk_idx, hi - lo, want_points=True
    )
    return PoissonSample(points=pts[sample_ids == offset], v_origin=float(v[offset]))


def estimate_Nc(config: PoissonConfig, model: PotentialModel,
                landau: LandauParams, energies,
                v: np.ndarray | None = None) -> IdosEstimate:
    """Monte Carlo N_c on an energy grid with common random numbers.

    One sample set is reused across the whole grid, which makes the
    monotonicity of N_c in E exact pathwise.
    """
    energies = np.asarray(energies, dtype=float)
    if energies.ndim != 1 or np.any(np.diff(energies) <= 0):
        raise ValueError("energy grid must be 1-D and strictly increasing")
    if v is None:
        v = draw_v_origin(config, model)
    pref = landau.mass / (2.0 * math.pi * landau.hbar**2)
    deficits = np.maximum(energies[:, None] - v[None, :], 0.0)
    values = pref * deficits.mean(axis=1)
    stderrs = pref * deficits.std(axis=1, ddof=1) / math.sqrt(len(v))
    return IdosEstimate(energies, values, stderrs, len(v))


def laplace_mc_crosscheck(config: PoissonConfig, model: PotentialModel,
                          t_grid, spec: QuadratureSpec | None = None,
                          v: np.ndarray | None = None,
                          rare_cutoff: float = 1e-6) -> list[CrosscheckPoint]:
    """mean(e^{-t V(0)}) against the exact exponential formula e^{-rho L_U(t)}.

    Two independent estimators of the same quantity; ratios sit within
    Monte Carlo error of 1. Probes where the predicted value drops below
    rare_cutoff are skipped (rare-event variance blowup).
    """
    if v is None:
        v = draw_v_origin(config, model)
    scale = model.length_scale()
    out = []
    for t in t_grid:
        if t <= 0:
            raise ValueError("t must be positive")
        L = laplace_functional(model.evaluate, t, spec, r_hint=scale).value
        predicted = math.exp(-config.rho * L)
        if predicted < rare_cutoff:
            out.append(CrosscheckPoint(t, math.nan, math.nan, predicted, True))
            continue
        w = np.exp(-t * v)
        mean = float(w.mean())
        se = float(w.std(ddof=1)) / math.sqrt(len(v))
        out.append(CrosscheckPoint(t, mean / predicted, se / predicted,
                                   predicted, False))
    return out


def tail_exponent_fit(estimate: IdosEstimate, window: tuple[float, float]):
    """Fit log(-log N_c) against log(1/E) over an energy window.

    For an algebraic impurity tail the slope estimates 2/(alpha - 2).
    Returns (slope, intercept, r_squared).
    """
    lo, hi = window
    mask = (estimate.energies >= lo) & (estimate.energies <= hi) \
        & (estimate.values > 0) & (estimate.values < 1)
    if mask.sum() < 4:
        raise ValueError("fewer than 4 usable grid points in the fit window")
    x = np.log(1.0 / estimate.energies[mask])
    y = np.log(-np.log(estimate.values[mask]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2
