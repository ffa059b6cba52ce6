"""Characteristic metrics for a single cluster of embedding vectors.

Three scalar summaries are computed from an ``m x H`` matrix of embedding
vectors:

* diversity -- geometric mean of the per-axis standard deviations, a
  generalized radius of the point cloud.
* density -- sample count divided by the dimension-normalized volume
  ``(prod sigma_j) ** (1 / sqrt(H))``.
* homogeneity -- entropy rate of a fully connected Markov chain whose edge
  weights are ``distance ** ln(H)``, normalized by the ``ln(m - 1)`` upper
  bound so the value lies in ``[0, 1]``.

All logarithms are natural. Homogeneity is provably independent of the
entropy log base (the normalization cancels it); the distance exponent base
is a fixed convention of this library and is part of its reproducibility
contract.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateCluster, TooFewSamples

__all__ = [
    "DEFAULT_STD_FLOOR",
    "ClusterStats",
    "DensityResult",
    "MarkovChainSummary",
    "MetricReport",
    "as_cluster",
    "axis_stats",
    "density",
    "diversity",
    "entropy_rate",
    "homogeneity",
    "metric_report",
    "pairwise_weight",
    "stationary_distribution",
]

# Axes whose standard deviation falls below this floor are clamped when
# computing density, so a zero-variance axis cannot blow the volume up to
# infinity. Diversity reports an honest 0 instead.
DEFAULT_STD_FLOOR = 1e-12

# Rows are processed in fixed-size blocks during the pairwise passes. The
# block grid is independent of the worker count, which keeps results stable
# when the same computation is spread over a different number of threads.
_BLOCK_ROWS = 256


def as_cluster(vectors) -> np.ndarray:
    """Validate and return a cluster as a float64 ``m x H`` array.

    Raises ValueError for empty input, wrong rank, or non-finite entries.
    """
    arr = np.asarray(vectors, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"cluster must be a 2-D matrix, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"cluster must be at least 1 x 1, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("cluster contains non-finite values")
    return arr


@dataclass(frozen=True, eq=False)
class ClusterStats:
    """Per-axis mean and population standard deviation of a cluster."""

    means: np.ndarray
    stds: np.ndarray
    count: int

    @property
    def dim(self) -> int:
        return self.means.shape[0]


class DensityResult(NamedTuple):
    value: float
    log_value: float
    floored_axes: int


@dataclass(frozen=True, eq=False)
class MarkovChainSummary:
    """Stationary distribution and entropy rate of the distance chain."""

    stationary: np.ndarray
    entropy_rate: float
    upper_bound: float


@dataclass(frozen=True)
class MetricReport:
    """All three metrics for one cluster, plus degeneracy flags.

    ``homogeneity`` is None when it cannot be computed (fewer than 3 samples,
    or a fully coincident cluster); ``homogeneity_skipped_reason`` then says
    why. ``degenerate_axes`` counts axes whose standard deviation was clamped
    to the floor inside the density computation.
    """

    diversity: float
    density: float
    density_log: float
    homogeneity: float | None
    degenerate_axes: int
    homogeneity_skipped_reason: str | None = None
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "diversity": self.diversity,
            "density": self.density,
            "density_log": self.density_log,
            "homogeneity": self.homogeneity,
            "degenerate_axes": self.degenerate_axes,
            "homogeneity_skipped_reason": self.homogeneity_skipped_reason,
            "notes": list(self.notes),
        }


def axis_stats(cluster) -> ClusterStats:
    """Mean and population standard deviation (divisor ``m``) along each axis."""
    arr = as_cluster(cluster)
    means = arr.mean(axis=0)
    stds = arr.std(axis=0)
    return ClusterStats(means=means, stds=stds, count=arr.shape[0])


def diversity(stats: ClusterStats) -> float:
    """Geometric mean of the per-axis standard deviations.

    Computed in log space, ``exp(mean(log sigma_j))``. Returns 0.0 as soon as
    any axis has zero spread, since a zero factor annihilates the product.
    """
    stds = np.asarray(stats.stds, dtype=np.float64)
    if np.any(stds == 0.0):
        return 0.0
    return float(np.exp(np.mean(np.log(stds))))


def density(stats: ClusterStats, std_floor: float = DEFAULT_STD_FLOOR) -> DensityResult:
    """Sample count over the dimension-normalized volume.

    ``density = m / (prod sigma_j') ** (1 / sqrt(H))`` with
    ``sigma_j' = max(sigma_j, std_floor)``. Evaluated in log space so that
    768-dimensional products neither overflow nor underflow. ``floored_axes``
    reports how many axes hit the floor.
    """
    stds = np.asarray(stats.stds, dtype=np.float64)
    floored = int(np.count_nonzero(stds < std_floor))
    clamped = np.maximum(stds, std_floor)
    dim = stds.shape[0]
    log_value = math.log(stats.count) - np.sum(np.log(clamped)) / math.sqrt(dim)
    return DensityResult(float(np.exp(log_value)), float(log_value), floored)


def pairwise_weight(e_i, e_j) -> float:
    """Edge weight between two vectors: Euclidean distance to the power ``ln H``.

    The exponent tempers the distance concentration of high-dimensional
    spaces. A zero distance always yields weight 0, even for ``H = 1`` where
    the exponent vanishes.
    """
    a = np.asarray(e_i, dtype=np.float64)
    b = np.asarray(e_j, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"expected two equal-length vectors, got {a.shape} and {b.shape}")
    dist = float(np.linalg.norm(a - b))
    if dist == 0.0:
        return 0.0
    return dist ** math.log(a.shape[0])


def _weight_block(arr: np.ndarray, sq_norms: np.ndarray, start: int, stop: int,
                  log_dim: float) -> np.ndarray:
    """Weights of edges from rows ``start:stop`` to every row of ``arr``.

    Squared distances come from the inner-product expansion
    ``|x|^2 + |y|^2 - 2 x.y`` so one BLAS product covers the whole block.
    Self-distances are reset to exactly zero, and near-zero entries are
    checked for bitwise row equality so genuinely coincident points get an
    exact zero weight rather than expansion roundoff.
    """
    block = arr[start:stop]
    d2 = sq_norms[start:stop, None] + sq_norms[None, :] - 2.0 * (block @ arr.T)
    np.maximum(d2, 0.0, out=d2)
    rows = np.arange(stop - start)
    d2[rows, rows + start] = 0.0

    # Roundoff in the expansion is bounded by a small multiple of the norm
    # scale; anything below that which is also bitwise-equal is a true zero.
    tol = 64.0 * np.finfo(np.float64).eps * (sq_norms[start:stop, None] + sq_norms[None, :])
    suspects = np.argwhere((d2 > 0.0) & (d2 <= tol))
    for r, c in suspects:
        if np.array_equal(block[r], arr[c]):
            d2[r, c] = 0.0

    dist = np.sqrt(d2)
    weights = np.zeros_like(dist)
    nonzero = dist > 0.0
    weights[nonzero] = dist[nonzero] ** log_dim
    return weights


def _block_ranges(m: int, block_rows: int) -> list[tuple[int, int]]:
    return [(s, min(s + block_rows, m)) for s in range(0, m, block_rows)]


def _map_blocks(fn, ranges, workers: int | None):
    """Apply ``fn`` to each row block, optionally on a thread pool.

    Results are returned in block order regardless of completion order, so
    the reduction that follows is identical for any worker count.
    """
    if workers is None or workers <= 1 or len(ranges) <= 1:
        return [fn(start, stop) for start, stop in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda rng: fn(*rng), ranges))


def _row_strengths(arr: np.ndarray, sq_norms: np.ndarray, log_dim: float,
                   workers: int | None) -> np.ndarray:
    ranges = _block_ranges(arr.shape[0], _BLOCK_ROWS)
    parts = _map_blocks(
        lambda s, t: _weight_block(arr, sq_norms, s, t, log_dim).sum(axis=1),
        ranges, workers,
    )
    strengths = np.concatenate(parts)
    if not (strengths > 0.0).all():
        # Only reachable when every weight of a row underflowed to zero.
        raise DegenerateCluster(
            "a point has zero total edge weight; distances are below the "
            "floating-point range"
        )
    return strengths


def _check_not_coincident(arr: np.ndarray) -> None:
    # A row strength can only vanish when every point equals that row, i.e.
    # the whole cluster is one repeated point. Detect that exactly instead
    # of trusting floating-point distance sums.
    if np.array_equal(arr, np.broadcast_to(arr[0], arr.shape)):
        raise DegenerateCluster(
            f"all {arr.shape[0]} points coincide; the distance chain has no edges"
        )


def stationary_distribution(cluster, workers: int | None = None) -> np.ndarray:
    """Stationary distribution of the distance-weighted chain.

    Because the weight matrix is symmetric the chain is reversible and the
    stationary probability of a point is its row strength over the total
    strength; no eigensolve is needed.
    """
    arr = as_cluster(cluster)
    if arr.shape[0] < 2:
        raise TooFewSamples("need at least 2 points for a transition chain")
    _check_not_coincident(arr)
    log_dim = math.log(arr.shape[1])
    sq_norms = np.einsum("ij,ij->i", arr, arr)
    strengths = _row_strengths(arr, sq_norms, log_dim, workers)
    return strengths / strengths.sum()


def entropy_rate(cluster, workers: int | None = None) -> MarkovChainSummary:
    """Entropy rate of the distance-weighted chain, in nats.

    Two streaming passes over row blocks: the first accumulates row
    strengths, the second per-row transition entropies, so the full ``m x m``
    matrix never exists in memory. Per-block contributions are assembled in
    block order, making the result independent of the worker count.
    """
    arr = as_cluster(cluster)
    m = arr.shape[0]
    if m < 2:
        raise TooFewSamples("need at least 2 points for a transition chain")
    _check_not_coincident(arr)
    log_dim = math.log(arr.shape[1])
    sq_norms = np.einsum("ij,ij->i", arr, arr)

    strengths = _row_strengths(arr, sq_norms, log_dim, workers)
    stationary = strengths / strengths.sum()

    def row_entropies(start: int, stop: int) -> np.ndarray:
        weights = _weight_block(arr, sq_norms, start, stop, log_dim)
        probs = weights / strengths[start:stop, None]
        contrib = np.zeros_like(probs)
        positive = probs > 0.0
        contrib[positive] = probs[positive] * np.log(probs[positive])
        return -contrib.sum(axis=1)

    ranges = _block_ranges(m, _BLOCK_ROWS)
    entropies = np.concatenate(_map_blocks(row_entropies, ranges, workers))
    rate = float(stationary @ entropies)
    return MarkovChainSummary(
        stationary=stationary,
        entropy_rate=max(rate, 0.0),
        upper_bound=math.log(m - 1),
    )


def homogeneity(cluster, workers: int | None = None) -> float:
    """Entropy rate normalized by its ``ln(m - 1)`` upper bound.

    Lies in ``[0, 1]``; equals 1 exactly when all pairwise distances are
    equal. Requires at least 3 points, otherwise the bound is zero and the
    ratio is meaningless.
    """
    arr = as_cluster(cluster)
    if arr.shape[0] < 3:
        raise TooFewSamples(
            f"homogeneity needs at least 3 points, got {arr.shape[0]}"
        )
    summary = entropy_rate(arr, workers=workers)
    # The rate provably cannot exceed the bound; roundoff in the last ulp can.
    return min(summary.entropy_rate / summary.upper_bound, 1.0)


def metric_report(cluster, std_floor: float = DEFAULT_STD_FLOOR,
                  workers: int | None = None) -> MetricReport:
    """Bundle diversity, density, and homogeneity for one cluster.

    Never raises for degenerate inputs: when homogeneity cannot be computed
    the report carries the reason instead.
    """
    arr = as_cluster(cluster)
    stats = axis_stats(arr)
    div = diversity(stats)
    den = density(stats, std_floor=std_floor)

    hom: float | None = None
    reason: str | None = None
    notes: tuple[str, ...] = ()
    if arr.shape[1] == 1:
        notes = ("homogeneity is identically 1 in one dimension: the distance "
                 "exponent ln(1) = 0 makes every edge weight equal",)
    if arr.shape[0] < 3:
        reason = f"fewer than 3 samples (m={arr.shape[0]})"
    else:
        try:
            hom = homogeneity(arr, workers=workers)
        except DegenerateCluster as exc:
            reason = str(exc)

    return MetricReport(
        diversity=div,
        density=den.value,
        density_log=den.log_value,
        homogeneity=hom,
        degenerate_axes=den.floored_axes,
        homogeneity_skipped_reason=reason,
        notes=notes,
    )
