"""Quadrature for the pushed Haar measure, anchored-box masses and star-discrepancy."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CandidateSetTooLarge, ResolutionTooCoarse
from .pushforward import push_point
from .root_system import RootSystemTables, build_tables
from .sampling import ClassSequence
from .torus_chars import TWO_PI, abs_weyl_denominator

DEFAULT_CORNER_CAP = 40_000_000
MIN_RESOLUTION = 16


def default_resolution(t: RootSystemTables) -> tuple[int, ...]:
    if t.r == 1:
        return (100_000,)
    if t.group == "G2":
        return (300, 300)
    if t.r == 2:
        return (400, 400)
    return (64,) * t.r


@dataclass(frozen=True)
class QuadratureGrid:
    """Periodic rectangle rule on the torus with Weyl-integration weights.

    ``pushed[i]`` is P(nodes[i]); ``order`` sorts the nodes by the first pushed
    coordinate and ``first_sorted`` holds that coordinate in sorted order.
    """

    group: str
    resolution: tuple[int, ...]
    nodes: np.ndarray
    weights: np.ndarray
    pushed: np.ndarray
    order: np.ndarray
    first_sorted: np.ndarray

    @property
    def mass(self) -> float:
        return math.fsum(self.weights)

    @property
    def tables(self) -> RootSystemTables:
        return build_tables(self.group)


def _clip_box(t: RootSystemTables, x: np.ndarray) -> np.ndarray:
    # roundoff only: images of P lie in [-M, M]^r
    return np.clip(x, -t.M, t.M)


def build_quadrature(t: RootSystemTables, resolution=None) -> QuadratureGrid:
    if resolution is None:
        resolution = default_resolution(t)
    elif isinstance(resolution, int):
        resolution = (resolution,) * t.r
    resolution = tuple(int(n) for n in resolution)
    if len(resolution) != t.r:
        raise ValueError(f"resolution needs {t.r} entries")
    if min(resolution) < MIN_RESOLUTION:
        raise ResolutionTooCoarse(f"resolution must be >= {MIN_RESOLUTION} per axis")
    axes = [np.arange(n) * (TWO_PI / n) for n in resolution]
    nodes = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1)
    weights = abs_weyl_denominator(t, nodes) ** 2 / (math.prod(resolution) * len(t.weyl))
    mass = math.fsum(weights)
    if abs(mass - 1.0) > 1e-2:
        raise ResolutionTooCoarse(f"quadrature mass {mass:.6f} deviates from 1 by more than 1e-2")
    pushed = _clip_box(t, push_point(t, nodes))
    order = np.argsort(pushed[:, 0], kind="stable")
    for arr in (nodes, weights, pushed, order):
        arr.setflags(write=False)
    first = pushed[order, 0]
    first.setflags(write=False)
    return QuadratureGrid(t.group, resolution, nodes, weights, pushed, order, first)


def mu_box(grid: QuadratureGrid, x) -> float | np.ndarray:
    """Grid mass of the anchored box prod [-M, x_i]; accepts one corner or a batch."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 2:
        return np.array([mu_box(grid, c) for c in x])
    stop = np.searchsorted(grid.first_sorted, x[0], side="right")
    idx = grid.order[:stop]
    inside = np.all(grid.pushed[idx, 1:] <= x[1:], axis=1)
    return math.fsum(grid.weights[idx[inside]])


def cdf_table(points: np.ndarray, weights: np.ndarray, axes: list[np.ndarray]) -> np.ndarray:
    """Table T[j_1..j_r] = sum of weights of points with p_k <= axes[k][j_k] for all k.

    Points are binned to the first axis node at or above them, then cumulative
    sums along every axis turn the histogram into the anchored-box masses.
    """
    shape = tuple(len(a) for a in axes)
    idx = [np.searchsorted(a, points[:, k], side="left") for k, a in enumerate(axes)]
    keep = np.ones(points.shape[0], dtype=bool)
    for k, i in enumerate(idx):
        keep &= i < shape[k]
    flat = np.ravel_multi_index(tuple(i[keep] for i in idx), shape)
    hist = np.bincount(flat, weights=weights[keep], minlength=math.prod(shape)).reshape(shape)
    for k in range(len(axes)):
        hist = np.cumsum(hist, axis=k)
    return hist


@dataclass(frozen=True)
class DiscrepancyReport:
    group: str
    n: int
    resolution: tuple[int, ...]
    d_star: float
    d_lower: float
    d_upper: float
    argmax_corner: tuple[float, ...]
    argmax_mode: str
    quad_error_hint: float
    corners: int

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "n": self.n,
            "resolution": list(self.resolution),
            "d_star": self.d_star,
            "d_lower": self.d_lower,
            "d_upper": self.d_upper,
            "argmax_corner": list(self.argmax_corner),
            "argmax_mode": self.argmax_mode,
            "quad_error_hint": self.quad_error_hint,
            "corners": self.corners,
        }


def push_sequence(t: RootSystemTables, seq: ClassSequence) -> np.ndarray:
    return _clip_box(t, push_point(t, seq.points))


def star_discrepancy(
    grid: QuadratureGrid,
    seq: ClassSequence,
    *,
    corner_cap: int = DEFAULT_CORNER_CAP,
) -> DiscrepancyReport:
    """Estimate D* of the pushed sequence against the grid measure.

    Candidate corners are the product of per-axis sorted sample coordinates
    together with M.  At each corner the empirical mass is taken with closed
    (<=) and open (<) comparisons independently per axis, which realises both
    one-sided limits at the jumps of the empirical distribution.
    """
    if grid.group != seq.group:
        raise ValueError(f"grid is for {grid.group} but the sequence is for {seq.group}")
    t = grid.tables
    a = push_sequence(t, seq)
    n = a.shape[0]
    axes = [np.unique(np.concatenate([a[:, k], [float(t.M)]])) for k in range(t.r)]
    corners = math.prod(len(ax) for ax in axes)
    if corners > corner_cap:
        raise CandidateSetTooLarge(
            f"{corners} candidate corners exceed the cap {corner_cap}; subsample or reduce N"
        )
    mu = cdf_table(grid.pushed, grid.weights, axes)
    emp_closed = cdf_table(a, np.ones(n), axes)

    best = np.full(mu.shape, -1.0)
    best_mode = np.zeros(mu.shape, dtype=np.int64)
    for mode, open_axes in enumerate(itertools.product((False, True), repeat=t.r)):
        emp = emp_closed
        for k, is_open in enumerate(open_axes):
            if is_open:
                pad = [(0, 0)] * t.r
                pad[k] = (1, 0)
                emp = np.pad(emp, pad)[tuple(slice(0, -1) if j == k else slice(None) for j in range(t.r))]
        dev = np.abs(mu - emp / n)
        better = dev > best
        best = np.where(better, dev, best)
        best_mode = np.where(better, mode, best_mode)
    # argmax on C-order picks the lexicographically smallest corner among ties
    flat = int(np.argmax(best))
    pos = np.unravel_index(flat, best.shape)
    d_star = float(best[pos])
    mode_bits = list(itertools.product((False, True), repeat=t.r))[int(best_mode[pos])]
    corner = tuple(float(axes[k][pos[k]]) for k in range(t.r))
    hint = abs(grid.mass - 1.0) + 1.0 / min(grid.resolution)
    return DiscrepancyReport(
        group=t.group,
        n=n,
        resolution=grid.resolution,
        d_star=d_star,
        d_lower=d_star,
        d_upper=2.0**t.r * d_star,
        argmax_corner=corner,
        argmax_mode="".join("<" if b else "<=" for b in mode_bits) if t.r == 1
        else ",".join("<" if b else "<=" for b in mode_bits),
        quad_error_hint=hint,
        corners=corners,
    )


def sweep_discrepancy_1d(grid: QuadratureGrid, seq: ClassSequence) -> float:
    """Direct sorted sweep for rank one: max_i max(|H(a_(i)) - i/N|, |H(a_(i)) - (i-1)/N|)."""
    t = grid.tables
    if t.r != 1:
        raise ValueError("the sweep oracle is one-dimensional")
    a = np.sort(push_sequence(t, seq)[:, 0])
    n = a.size
    h = np.array([mu_box(grid, [x]) for x in a])
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(h - i / n)), np.max(np.abs(h - (i - 1) / n))))
