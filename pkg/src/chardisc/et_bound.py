"""Right-hand side of the discrepancy bound and its check against measured discrepancy."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .discrepancy import QuadratureGrid, star_discrepancy
from .root_system import RootSystemTables, Weight
from .sampling import ClassSequence
from .torus_chars import character_values, dominant_weights_up_to


def constant_CG(t: RootSystemTables) -> float:
    """C_G = 600 r^2 (10M)^r 2^{r2 + (r + dim G)/2} / pi^r."""
    r = t.r
    return 600.0 * r * r * (10.0 * t.M) ** r * 2.0 ** (t.r2 + 0.5 * (r + t.dim_g)) / math.pi**r


def degree_bound(t: RootSystemTables | int, k: int) -> int:
    r = t if isinstance(t, int) else t.r
    if k < 1:
        raise ValueError("k must be a positive integer")
    return 2 * (1 + r // 2) * (k - 1) + r


def character_moment(t: RootSystemTables, lam: Weight, seq: ClassSequence) -> complex:
    vals = np.atleast_1d(character_values(t, lam, seq.points))
    return complex(math.fsum(vals.real), math.fsum(vals.imag)) / len(seq)


@dataclass(frozen=True)
class BoundReport:
    group: str
    n: int
    k: int
    degree: int
    char_count: int
    moment_sum: float
    c_g: float
    rhs: float
    d_star: float | None = None
    d_upper: float | None = None
    holds: bool | None = None
    resolution: tuple[int, ...] | None = None

    @property
    def margin(self) -> float | None:
        return None if self.d_upper is None else self.rhs - self.d_upper

    def to_dict(self) -> dict:
        out = asdict(self)
        out["resolution"] = None if self.resolution is None else list(self.resolution)
        out["margin"] = self.margin
        return out


def rhs_bound(t: RootSystemTables, seq: ClassSequence, k: int) -> BoundReport:
    """Sum |moment| over every nontrivial dominant weight up to the degree bound, once each."""
    deg = degree_bound(t, k)
    lams = dominant_weights_up_to(t, deg, include_trivial=False)
    # lexicographic weight order, compensated summation
    s = math.fsum(abs(character_moment(t, lam, seq)) for lam in lams)
    cg = constant_CG(t)
    return BoundReport(
        group=t.group,
        n=len(seq),
        k=k,
        degree=deg,
        char_count=len(lams),
        moment_sum=s,
        c_g=cg,
        rhs=cg * (1.0 / k + s),
    )


def verify(t: RootSystemTables, seq: ClassSequence, k: int, grid: QuadratureGrid) -> BoundReport:
    base = rhs_bound(t, seq, k)
    disc = star_discrepancy(grid, seq)
    return replace(
        base,
        d_star=disc.d_star,
        d_upper=disc.d_upper,
        holds=bool(disc.d_upper <= base.rhs),
        resolution=grid.resolution,
    )
