"""Root data, Weyl groups and representation dimensions in exact integer arithmetic.

Weights are integer tuples in the fundamental-weight basis.  The simple root
``alpha_i`` has fundamental-weight coordinates equal to the i-th *column* of
the Cartan matrix, so a simple reflection is the one-line update
``m_j <- m_j - m_i * C[j][i]``.  Nothing in this module touches floating point.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

from .errors import NonDominantWeight, UnsupportedGroup, WeightSystemTooLarge

Weight = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

# Cartan matrices (column convention, see module docstring) and the
# symmetrizers d_i = |alpha_i|^2 / 2 with short roots normalised to 1.
_CARTAN: dict[str, tuple[Matrix, tuple[int, ...]]] = {
    "A1": (((2,),), (1,)),
    "A2": (((2, -1), (-1, 2)), (1, 1)),
    "C2": (((2, -1), (-2, 2)), (2, 1)),
    "G2": (((2, -1), (-3, 2)), (3, 1)),
    "A3": (((2, -1, 0), (-1, 2, -1), (0, -1, 2)), (1, 1, 1)),
    "B3": (((2, -1, 0), (-1, 2, -1), (0, -2, 2)), (2, 2, 1)),
    "C3": (((2, -1, 0), (-1, 2, -2), (0, -1, 2)), (1, 1, 2)),
}

REQUIRED_GROUPS = ("A1", "A2", "C2", "G2")
RANK3_GROUPS = ("A3", "B3", "C3")
SUPPORTED_GROUPS = REQUIRED_GROUPS + RANK3_GROUPS

DEFAULT_NODE_CAP = 20_000
DEFAULT_FREUDENTHAL_LEVEL = 12


@dataclass(frozen=True)
class Root:
    simple_coords: Weight
    fw_coords: Weight


@dataclass(frozen=True)
class WeylElement:
    matrix: Matrix
    sign: int
    length: int

    def act(self, lam: Weight) -> Weight:
        return tuple(sum(row[j] * lam[j] for j in range(len(lam))) for row in self.matrix)


@dataclass(frozen=True)
class FundamentalInfo:
    dimension: int
    dual_index: int
    is_self_dual: bool


@dataclass(frozen=True)
class RootSystemTables:
    """Immutable bundle of everything the rest of the package needs about a group."""

    group: str
    cartan: Matrix
    symmetrizer: tuple[int, ...]
    positive_roots: tuple[Root, ...]
    weyl: tuple[WeylElement, ...]
    w0: WeylElement
    rho: Weight
    fundamental: tuple[FundamentalInfo, ...]
    r: int
    r1: int
    r2: int
    M: int
    dim_g: int

    @property
    def real_indices(self) -> tuple[int, ...]:
        """Self-dual fundamental nodes, in node order (0-based)."""
        return tuple(i for i, f in enumerate(self.fundamental) if f.is_self_dual)

    @property
    def pair_indices(self) -> tuple[int, ...]:
        """Lower-index member of each non-self-dual pair, in node order (0-based)."""
        return tuple(
            i for i, f in enumerate(self.fundamental) if not f.is_self_dual and i < f.dual_index
        )

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "rank": self.r,
            "cartan": [list(row) for row in self.cartan],
            "symmetrizer": list(self.symmetrizer),
            "positive_roots": [
                {"simple": list(a.simple_coords), "fw": list(a.fw_coords)}
                for a in self.positive_roots
            ],
            "weyl": [
                {"matrix": [list(row) for row in w.matrix], "sign": w.sign, "length": w.length}
                for w in self.weyl
            ],
            "w0": [list(row) for row in self.w0.matrix],
            "rho": list(self.rho),
            "fundamental": [
                {
                    "node": i + 1,
                    "dimension": f.dimension,
                    "dual_node": f.dual_index + 1,
                    "self_dual": f.is_self_dual,
                }
                for i, f in enumerate(self.fundamental)
            ],
            "r1": self.r1,
            "r2": self.r2,
            "M": self.M,
            "dim_g": self.dim_g,
            "weyl_order": len(self.weyl),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def simple_reflection(cartan: Matrix, i: int, w: Weight) -> Weight:
    """Reflect ``w`` in the i-th simple root (1-based ``i``)."""
    k = i - 1
    mi = w[k]
    return tuple(w[j] - mi * cartan[j][k] for j in range(len(w)))


def _reflection_matrix(cartan: Matrix, k: int) -> Matrix:
    r = len(cartan)
    return tuple(
        tuple((1 if j == c else 0) - (cartan[j][k] if c == k else 0) for c in range(r))
        for j in range(r)
    )


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _enumerate_weyl(cartan: Matrix) -> list[WeylElement]:
    r = len(cartan)
    gens = [_reflection_matrix(cartan, k) for k in range(r)]
    identity = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    seen = {identity: 0}
    order = [identity]
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = _matmul(s, g)
            if h not in seen:
                seen[h] = seen[g] + 1
                order.append(h)
                queue.append(h)
    return [WeylElement(m, (-1) ** seen[m], seen[m]) for m in order]


def _positive_roots(cartan: Matrix) -> list[Root]:
    r = len(cartan)

    def fw(n: Weight) -> Weight:
        return tuple(sum(cartan[j][i] * n[i] for i in range(r)) for j in range(r))

    simple = [tuple(int(i == k) for i in range(r)) for k in range(r)]
    found = set(simple)
    queue = deque(simple)
    while queue:
        n = queue.popleft()
        f = fw(n)
        for k in range(r):
            m = tuple(n[i] - (f[k] if i == k else 0) for i in range(r))
            if all(c >= 0 for c in m) and any(m) and m not in found:
                found.add(m)
                queue.append(m)
    ordered = sorted(found, key=lambda n: (sum(n), n))
    return [Root(n, fw(n)) for n in ordered]


def _pair(lam: Weight, root: Root, sym: tuple[int, ...]) -> int:
    # (lambda, alpha) with alpha in simple coordinates; (lambda_i, alpha_j) = d_j delta_ij.
    return sum(m * n * d for m, n, d in zip(lam, root.simple_coords, sym))


def _weyl_dimension(lam: Weight, roots: tuple[Root, ...], sym: tuple[int, ...]) -> int:
    if any(m < 0 for m in lam):
        raise NonDominantWeight(f"weight {lam} is not dominant")
    rho = (1,) * len(lam)
    shifted = tuple(m + 1 for m in lam)
    num = prod(_pair(shifted, a, sym) for a in roots)
    den = prod(_pair(rho, a, sym) for a in roots)
    value = Fraction(num, den)
    if value.denominator != 1 or value <= 0:
        raise ArithmeticError(f"Weyl dimension of {lam} is not a positive integer: {value}")
    return int(value)


@lru_cache(maxsize=None)
def build_tables(group: str) -> RootSystemTables:
    if group not in _CARTAN:
        raise UnsupportedGroup(
            f"group {group!r} is not built; supported: {', '.join(SUPPORTED_GROUPS)}"
        )
    cartan, sym = _CARTAN[group]
    r = len(cartan)
    for i in range(r):
        for j in range(r):
            if sym[j] * cartan[j][i] != sym[i] * cartan[i][j]:
                raise ArithmeticError(f"bad symmetrizer for {group}")

    roots = tuple(_positive_roots(cartan))
    weyl = tuple(_enumerate_weyl(cartan))
    rho = (1,) * r
    neg_rho = tuple(-1 for _ in range(r))
    w0 = next(w for w in weyl if w.act(rho) == neg_rho)

    fundamental = []
    for i in range(r):
        lam = tuple(int(j == i) for j in range(r))
        dual = tuple(-c for c in w0.act(lam))
        j = dual.index(1)
        fundamental.append(FundamentalInfo(_weyl_dimension(lam, roots, sym), j, j == i))
    r1 = sum(f.is_self_dual for f in fundamental)
    r2 = (r - r1) // 2

    return RootSystemTables(
        group=group,
        cartan=cartan,
        symmetrizer=sym,
        positive_roots=roots,
        weyl=weyl,
        w0=w0,
        rho=rho,
        fundamental=tuple(fundamental),
        r=r,
        r1=r1,
        r2=r2,
        M=max(f.dimension for f in fundamental),
        dim_g=r + 2 * len(roots),
    )


def weyl_dimension(t: RootSystemTables, lam: Weight) -> int:
    """Dimension of the irreducible representation with highest weight ``lam``."""
    return _weyl_dimension(tuple(lam), t.positive_roots, t.symmetrizer)


def dual_weight(t: RootSystemTables, lam: Weight) -> Weight:
    return tuple(-c for c in t.w0.act(tuple(lam)))


def is_dominant(lam: Weight) -> bool:
    return all(m >= 0 for m in lam)


def dominant_conjugate(t: RootSystemTables, lam: Weight) -> Weight:
    """Unique dominant weight in the W-orbit of ``lam``."""
    lam = tuple(lam)
    while True:
        k = next((i for i, m in enumerate(lam) if m < 0), None)
        if k is None:
            return lam
        lam = simple_reflection(t.cartan, k + 1, lam)


def weyl_orbit(t: RootSystemTables, lam: Weight) -> set[Weight]:
    return {w.act(tuple(lam)) for w in t.weyl}


@lru_cache(maxsize=None)
def _gram(group: str) -> tuple[tuple[Fraction, ...], ...]:
    """Gram matrix of the fundamental weights: (lambda_i, lambda_j) = (C^-1)_{ji} d_j."""
    t = build_tables(group)
    r = t.r
    a = [[Fraction(t.cartan[i][j]) for j in range(r)] + [Fraction(int(i == j)) for j in range(r)]
         for i in range(r)]
    for col in range(r):
        piv = next(i for i in range(col, r) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for i in range(r):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[col])]
    inv = [row[r:] for row in a]
    return tuple(tuple(inv[j][i] * t.symmetrizer[j] for j in range(r)) for i in range(r))


def inner(t: RootSystemTables, mu: Weight, nu: Weight) -> Fraction:
    g = _gram(t.group)
    return sum((g[i][j] * mu[i] * nu[j] for i in range(t.r) for j in range(t.r)), Fraction(0))


def freudenthal_multiplicities(
    t: RootSystemTables,
    lam: Weight,
    *,
    max_level: int = DEFAULT_FREUDENTHAL_LEVEL,
    node_cap: int = DEFAULT_NODE_CAP,
) -> dict[Weight, int]:
    """Full weight system of V(lam) with multiplicities, via Freudenthal's recursion.

    Dominant weights below ``lam`` are reached by subtracting positive roots
    while staying dominant (covers in the dominance order differ by a positive
    root), processed in order of increasing depth.  The full map is the union
    of their W-orbits.
    """
    lam = tuple(lam)
    if not is_dominant(lam):
        raise NonDominantWeight(f"weight {lam} is not dominant")
    if sum(lam) > max_level:
        raise WeightSystemTooLarge(
            f"weight {lam} exceeds the Freudenthal level limit {max_level}"
        )
    roots = [a.fw_coords for a in t.positive_roots]
    rho = t.rho

    depth = {lam: 0}
    queue = deque([lam])
    total_nodes = len(weyl_orbit(t, lam))
    while queue:
        mu = queue.popleft()
        for a, root in zip(roots, t.positive_roots):
            nu = tuple(m - c for m, c in zip(mu, a))
            if is_dominant(nu) and nu not in depth:
                depth[nu] = depth[mu] + sum(root.simple_coords)
                total_nodes += len(weyl_orbit(t, nu))
                if total_nodes > node_cap:
                    raise WeightSystemTooLarge(
                        f"weight system of {lam} exceeds the node cap {node_cap}"
                    )
                queue.append(nu)
    lp = tuple(m + r_ for m, r_ in zip(lam, rho))
    norm_top = inner(t, lp, lp)

    mult: dict[Weight, int] = {lam: 1}
    dominant = sorted(depth, key=lambda mu: depth[mu])
    for mu in dominant[1:]:
        acc = Fraction(0)
        for a in roots:
            k = 1
            while True:
                nu = tuple(m + k * c for m, c in zip(mu, a))
                dnu = dominant_conjugate(t, nu)
                m_nu = mult.get(dnu)
                if m_nu is None:
                    if dnu not in depth:
                        break
                    raise ArithmeticError("Freudenthal recursion visited weights out of order")
                acc += m_nu * inner(t, nu, a)
                k += 1
        mp = tuple(m + r_ for m, r_ in zip(mu, rho))
        den = norm_top - inner(t, mp, mp)
        value = 2 * acc / den
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {value} at {mu}")
        mult[mu] = int(value)

    out: dict[Weight, int] = {}
    for mu, m in mult.items():
        if m:
            for nu in weyl_orbit(t, mu):
                out[nu] = m
    return out
