"""Characters of irreducible representations evaluated on the maximal torus.

Torus points are angle vectors ``theta`` with ``e^{lambda}(theta) = exp(i m.theta)``
for a weight with fundamental-weight coordinates ``m``.  All evaluators accept a
single point of shape ``(r,)`` or a batch of shape ``(n, r)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonDominantWeight
from .root_system import (
    DEFAULT_FREUDENTHAL_LEVEL,
    DEFAULT_NODE_CAP,
    RootSystemTables,
    Weight,
    build_tables,
    freudenthal_multiplicities,
    is_dominant,
    weyl_dimension,
)

TWO_PI = 2.0 * math.pi
SINGULAR_EPS = 1e-8


def torus_point(theta) -> np.ndarray:
    """Canonicalize angles into [0, 2pi)."""
    th = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # mod can return exactly 2pi for tiny negative inputs
    return np.where(th >= TWO_PI, 0.0, th)


@dataclass(frozen=True)
class CharValue:
    value: complex
    method: str  # "ratio" or "weight_sum"


def weight_phase(lam: Weight, theta) -> np.ndarray | float:
    """Sum_j m_j theta_j; e^lam at theta is exp(i * phase)."""
    th = np.asarray(theta, dtype=float)
    out = th @ np.asarray(lam, dtype=float)
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=None)
def _weyl_arrays(group: str) -> tuple[np.ndarray, np.ndarray]:
    t = build_tables(group)
    mats = np.array([w.matrix for w in t.weyl], dtype=np.int64)
    signs = np.array([w.sign for w in t.weyl], dtype=float)
    return mats, signs


@lru_cache(maxsize=None)
def _root_array(group: str) -> np.ndarray:
    t = build_tables(group)
    return np.array([a.fw_coords for a in t.positive_roots], dtype=float)


def weyl_denominator(t: RootSystemTables, theta) -> np.ndarray | complex:
    """Prod over positive roots of (e^{alpha/2} - e^{-alpha/2}).

    Evaluated as ``e^rho * prod(1 - e^{-alpha})``, which is single-valued on the
    torus and equals the alternating sum over W of ``e^{w rho}``.
    """
    th = np.asarray(theta, dtype=float)
    phases = th @ _root_array(t.group).T
    out = np.exp(1j * (th @ np.asarray(t.rho, dtype=float))) * np.prod(
        1.0 - np.exp(-1j * phases), axis=-1
    )
    return complex(out) if np.ndim(out) == 0 else out


def abs_weyl_denominator(t: RootSystemTables, theta) -> np.ndarray:
    """|Delta| = prod |2 sin(alpha(theta)/2)|."""
    th = np.asarray(theta, dtype=float)
    phases = th @ _root_array(t.group).T
    return np.prod(np.abs(2.0 * np.sin(0.5 * phases)), axis=-1)


def _alternating_sum(t: RootSystemTables, weight: Weight, th: np.ndarray) -> np.ndarray:
    mats, signs = _weyl_arrays(t.group)
    images = mats @ np.asarray(weight, dtype=np.int64)  # (|W|, r), exact integers
    phases = th @ images.T.astype(float)  # (..., |W|)
    # fixed Weyl-element order; numpy's pairwise summation along the last axis
    return np.sum(signs * np.exp(1j * phases), axis=-1)


def _check_dominant(lam: Weight) -> Weight:
    lam = tuple(int(m) for m in lam)
    if not is_dominant(lam):
        raise NonDominantWeight(f"weight {lam} is not dominant")
    return lam


def character_ratio(t: RootSystemTables, lam: Weight, theta) -> np.ndarray:
    """Weyl's formula: alternating sum over W of e^{w(lam+rho)} divided by that of e^{w rho}."""
    lam = _check_dominant(lam)
    th = np.asarray(theta, dtype=float)
    shifted = tuple(m + 1 for m in lam)
    return _alternating_sum(t, shifted, th) / _alternating_sum(t, t.rho, th)


@lru_cache(maxsize=256)
def _weight_system(group: str, lam: Weight, max_level: int, node_cap: int):
    t = build_tables(group)
    mults = freudenthal_multiplicities(t, lam, max_level=max_level, node_cap=node_cap)
    keys = sorted(mults)
    return np.array(keys, dtype=float), np.array([mults[k] for k in keys], dtype=float)


def character_weight_sum(
    t: RootSystemTables,
    lam: Weight,
    theta,
    *,
    max_level: int = DEFAULT_FREUDENTHAL_LEVEL,
    node_cap: int = DEFAULT_NODE_CAP,
) -> np.ndarray:
    """Sum over the weight system of mult(mu) * e^mu, multiplicities from Freudenthal."""
    lam = _check_dominant(lam)
    weights, mults = _weight_system(t.group, lam, max_level, node_cap)
    th = np.asarray(theta, dtype=float)
    return np.sum(mults * np.exp(1j * (th @ weights.T)), axis=-1)


def character_values(
    t: RootSystemTables,
    lam: Weight,
    theta,
    eps: float = SINGULAR_EPS,
    *,
    max_level: int = DEFAULT_FREUDENTHAL_LEVEL,
    node_cap: int = DEFAULT_NODE_CAP,
) -> np.ndarray:
    """Vectorized character evaluation with the singular-set fallback.

    Points where |Delta| < eps use the weight sum; the identity itself returns
    the Weyl dimension without building a weight system.
    """
    lam = _check_dominant(lam)
    th = np.atleast_2d(np.asarray(theta, dtype=float))
    shifted = tuple(m + 1 for m in lam)
    den = _alternating_sum(t, t.rho, th)
    singular = np.abs(den) < eps
    out = np.empty(th.shape[0], dtype=complex)
    ok = ~singular
    if ok.any():
        out[ok] = _alternating_sum(t, shifted, th[ok]) / den[ok]
    if singular.any():
        at_identity = singular & np.all(np.mod(th, TWO_PI) == 0.0, axis=-1)
        if at_identity.any():
            out[at_identity] = weyl_dimension(t, lam)
        rest = singular & ~at_identity
        if rest.any():
            out[rest] = character_weight_sum(
                t, lam, th[rest], max_level=max_level, node_cap=node_cap
            )
    if np.ndim(theta) == 1:
        return out[0]
    return out


def character_value(
    t: RootSystemTables, lam: Weight, theta, eps: float = SINGULAR_EPS
) -> CharValue:
    """Scalar evaluation that also reports which route was taken."""
    lam = _check_dominant(lam)
    th = np.asarray(theta, dtype=float)
    den = _alternating_sum(t, t.rho, th)
    if abs(den) >= eps:
        shifted = tuple(m + 1 for m in lam)
        return CharValue(complex(_alternating_sum(t, shifted, th) / den), "ratio")
    if np.all(np.mod(th, TWO_PI) == 0.0):
        return CharValue(complex(weyl_dimension(t, lam)), "weight_sum")
    return CharValue(complex(character_weight_sum(t, lam, th)), "weight_sum")


def dominant_weights_up_to(
    t: RootSystemTables | int, d: int, include_trivial: bool = True
) -> list[Weight]:
    """All m >= 0 with sum(m) <= d, lexicographically sorted."""
    r = t if isinstance(t, int) else t.r
    out = [
        m
        for m in itertools.product(range(d + 1), repeat=r)
        if sum(m) <= d and (include_trivial or any(m))
    ]
    return out
