"""The fundamental-character map P, the density of the pushed Haar measure, and its Jacobian."""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericalInconsistency, SingularPoint
from .root_system import RootSystemTables
from .torus_chars import abs_weyl_denominator, character_weight_sum

FD_STEP = 1e-5
JACOBIAN_EXCLUSION = 1e-6
SELF_DUAL_IM_TOL = 1e-6


def _fundamental(t: RootSystemTables, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(t.r))


def push_point(t: RootSystemTables, theta) -> np.ndarray:
    """P(theta): real fundamental characters, then (Re, Im) of one member per dual pair.

    Fundamental characters are summed over their (small) weight systems, which
    stays well conditioned on and near the walls where Weyl's ratio is 0/0.
    Accepts ``(r,)`` or ``(n, r)``; returns the same leading shape.
    """
    th = np.asarray(theta, dtype=float)
    batch = np.atleast_2d(th)
    cols = []
    for i in t.real_indices:
        v = np.atleast_1d(character_weight_sum(t, _fundamental(t, i), batch))
        if np.max(np.abs(v.imag), initial=0.0) > SELF_DUAL_IM_TOL:
            raise NumericalInconsistency(
                f"self-dual character of node {i + 1} has imaginary part "
                f"{np.max(np.abs(v.imag)):.3g}"
            )
        cols.append(v.real)
    for i in t.pair_indices:
        v = np.atleast_1d(character_weight_sum(t, _fundamental(t, i), batch))
        cols.extend([v.real, v.imag])
    out = np.stack(cols, axis=-1)
    return out[0] if th.ndim == 1 else out


def density_F(t: RootSystemTables, theta) -> np.ndarray | float:
    """Density of the pushforward measure at P(theta): 2^r2 / (2pi)^r * |Delta(theta)|."""
    out = 2.0**t.r2 / (2.0 * math.pi) ** t.r * abs_weyl_denominator(t, theta)
    return float(out) if np.ndim(out) == 0 else out


def density_sup_bound(t: RootSystemTables) -> float:
    return 2.0 ** (t.r2 + 0.5 * (t.dim_g - 3 * t.r)) / math.pi**t.r


def numeric_jacobian(t: RootSystemTables, theta, h: float = FD_STEP) -> float:
    """|det dP/dtheta| by central differences."""
    th = np.asarray(theta, dtype=float)
    if abs_weyl_denominator(t, th) < max(JACOBIAN_EXCLUSION, 10 * h):
        raise SingularPoint(f"theta={th.tolist()} is within the singular-set exclusion radius")
    r = t.r
    steps = np.eye(r) * h
    pts = np.concatenate([th + steps, th - steps])
    vals = push_point(t, pts)
    jac = (vals[:r] - vals[r:]).T / (2.0 * h)  # jac[a, b] = dP_a / dtheta_b
    return float(abs(np.linalg.det(jac)))


def jacobian_formula(t: RootSystemTables, theta) -> np.ndarray | float:
    """The closed form 2^{-r2} |Delta(theta)|."""
    out = 2.0 ** (-t.r2) * abs_weyl_denominator(t, theta)
    return float(out) if np.ndim(out) == 0 else out
