"""Chebyshev concentration kernels, face-vanishing antiderivatives and the integral-operator identity.

The kernel is ``f_k(x) = (T_k(|x|)/|x|)^e`` with ``T_k(y) = cos(k arccos(y / (2M sqrt r)))``
and ``e = 2(1 + floor(r/2))``.  For odd k it is a polynomial in ``|x|^2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .discrepancy import QuadratureGrid, cdf_table, mu_box, push_sequence
from .errors import DomainExceeded
from .polynomial import MultiPoly
from .root_system import RootSystemTables
from .sampling import ClassSequence

ORIGIN_BALL = 1e-8
DOMAIN_SLACK = 1e-12


def sphere_volume(r: int) -> float:
    """Surface measure of S^{r-1}: 2, 2 pi, 4 pi for r = 1, 2, 3."""
    table = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}
    if r in table:
        return table[r]
    return 2.0 * math.pi ** (r / 2) / math.gamma(r / 2)


@dataclass(frozen=True)
class KernelParams:
    r: int
    M: float
    k: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("rank must be positive")
        if self.M <= 0:
            raise ValueError("M must be positive")
        if self.k < 1 or self.k % 2 == 0:
            raise ValueError(f"k must be an odd positive integer, got {self.k}")

    @property
    def exponent(self) -> int:
        return 2 * (1 + self.r // 2)

    @property
    def scale(self) -> float:
        """2 M sqrt(r), the half-width of the Chebyshev domain."""
        return 2.0 * self.M * math.sqrt(self.r)

    @property
    def m_sqrt_r(self) -> float:
        return self.M * math.sqrt(self.r)


def _check_domain(p: KernelParams, y: np.ndarray) -> None:
    if np.any(np.abs(y) > p.scale * (1.0 + DOMAIN_SLACK)):
        raise DomainExceeded(f"|y| exceeds 2M sqrt(r) = {p.scale:.6g}")


def chebyshev_T(p: KernelParams, y):
    y = np.asarray(y, dtype=float)
    _check_domain(p, y)
    u = np.clip(y / p.scale, -1.0, 1.0)
    # for odd k, cos(k arccos u) = (-1)^((k-1)/2) sin(k arcsin u), accurate near u = 0
    out = (-1) ** ((p.k - 1) // 2) * np.sin(p.k * np.arcsin(u))
    return float(out) if out.ndim == 0 else out


def _radial_profile(p: KernelParams, rho: np.ndarray) -> np.ndarray:
    """(T_k(rho)/rho)^e with the limit value at the origin."""
    rho = np.asarray(rho, dtype=float)
    out = np.empty_like(rho)
    small = rho < ORIGIN_BALL
    out[small] = (p.k / p.scale) ** p.exponent
    big = ~small
    out[big] = (np.asarray(chebyshev_T(p, rho[big])) / rho[big]) ** p.exponent
    return out


def kernel_fk(p: KernelParams, x):
    x = np.asarray(x, dtype=float)
    batch = np.atleast_2d(x)
    if batch.shape[-1] != p.r:
        raise ValueError(f"points need {p.r} coordinates")
    rho = np.linalg.norm(batch, axis=-1)
    _check_domain(p, rho)
    out = _radial_profile(p, rho)
    return float(out[0]) if x.ndim == 1 else out


def _radial_integral(p: KernelParams, a: float, b: float) -> float:
    """vol(S^{r-1}) * int_a^b (T_k(rho)/rho)^e rho^{r-1} d rho.

    The integrand is a polynomial of degree e(k-1)+r-1, so Gauss-Legendre with
    enough nodes is exact up to rounding.
    """
    if b <= a:
        return 0.0
    deg = p.exponent * (p.k - 1) + p.r - 1
    nodes, weights = np.polynomial.legendre.leggauss(deg // 2 + 16)
    rho = 0.5 * (b - a) * nodes + 0.5 * (b + a)
    vals = _radial_profile(p, rho) * rho ** (p.r - 1)
    return sphere_volume(p.r) * 0.5 * (b - a) * math.fsum(weights * vals)


@dataclass(frozen=True)
class KernelCheck:
    lower: float
    upper: float
    integral: float
    slack: float = 1e-6

    @property
    def holds(self) -> bool:
        tol = self.slack * abs(self.integral)
        return self.lower - tol <= self.integral <= self.upper + tol

    @property
    def lower_margin(self) -> float:
        return (self.integral - self.lower) / self.integral if self.integral else 0.0

    @property
    def upper_margin(self) -> float:
        return (self.upper - self.integral) / self.upper

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "integral": self.integral,
            "holds": self.holds,
            "lower_margin": self.lower_margin,
            "upper_margin": self.upper_margin,
        }


def kernel_mass_inner(p: KernelParams, c: float) -> KernelCheck:
    """Mass of f_k on the ball of radius c/k, with the concentration sandwich."""
    if not 0.0 < c <= 1.2 * p.m_sqrt_r * (1.0 + DOMAIN_SLACK):
        raise DomainExceeded(f"c must lie in (0, 6/5 M sqrt(r)], got {c}")
    e, r, k = p.exponent, p.r, p.k
    upper = c**r * k ** (e - r) * sphere_volume(r) / (r * p.m_sqrt_r**e)
    integral = _radial_integral(p, 0.0, c / k)
    return KernelCheck(lower=upper / 5.0**e, upper=upper, integral=integral)


@dataclass(frozen=True)
class TailCheck:
    bound: float
    integral: float
    slack: float = 1e-6

    @property
    def holds(self) -> bool:
        return self.integral <= self.bound * (1.0 + self.slack)

    @property
    def margin(self) -> float:
        return (self.bound - self.integral) / self.bound

    def to_dict(self) -> dict:
        return {"bound": self.bound, "integral": self.integral, "holds": self.holds, "margin": self.margin}


def kernel_tail(p: KernelParams, t: float) -> TailCheck:
    if not 0.0 < t <= p.scale * (1.0 + DOMAIN_SLACK):
        raise DomainExceeded(f"t must lie in (0, 2M sqrt(r)], got {t}")
    bound = 2.0 * sphere_volume(p.r) * t ** (p.r - p.exponent)
    return TailCheck(bound=bound, integral=_radial_integral(p, t, p.scale))


# exact polynomial side ----------------------------------------------------


def _chebyshev_coeffs(k: int) -> list[int]:
    """Integer coefficients of the classical T_k(u), lowest degree first."""
    prev, cur = [1], [0, 1]
    if k == 0:
        return prev
    for _ in range(k - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def kernel_poly(p: KernelParams) -> MultiPoly:
    """f_k expanded as an exact polynomial in x_1..x_r (needs rational M)."""
    M = Fraction(p.M)
    s2 = 4 * M * M * p.r  # (2 M sqrt r)^2
    coeffs = _chebyshev_coeffs(p.k)
    # T_k(rho)/rho = (1/s) * sum_j c_j (rho^2)^{(j-1)/2} / (s^2)^{(j-1)/2}, j odd
    q = [Fraction(coeffs[j]) / s2 ** ((j - 1) // 2) for j in range(1, p.k + 1, 2)]
    rho2 = sum((MultiPoly.variable(p.r, i) ** 2 for i in range(p.r)), MultiPoly(p.r))
    inner = MultiPoly(p.r)
    for c in reversed(q):
        inner = inner * rho2 + c
    return inner ** p.exponent * (Fraction(1) / s2 ** (p.exponent // 2))


def antiderivative_h(f: MultiPoly, m: int, M) -> MultiPoly:
    """h with d^m h / dx_1..dx_m = f and h vanishing whenever some x_i = M.

    Built as (-1)^m sum_J (-1)^{|J|} htilde_J, where htilde is the termwise
    antiderivative and htilde_J fixes x_i = M for every i outside J.
    """
    if f.m != m:
        raise ValueError(f"polynomial has {f.m} variables, expected {m}")
    if not isinstance(M, float):
        M = Fraction(M)
    htilde = f.integrate_monomials(range(m))
    h = MultiPoly(m)
    for size in range(m + 1):
        for J in itertools.combinations(range(m), size):
            fixed = {i: M for i in range(m) if i not in J}
            sign = (-1) ** (m + size)
            h = h + htilde.substitute(fixed) * sign
    return h


@dataclass(frozen=True)
class SupCheck:
    sup_abs_h: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.sup_abs_h <= self.bound * (1.0 + 1e-6)

    def to_dict(self) -> dict:
        return {"sup_abs_h": self.sup_abs_h, "bound": self.bound, "holds": self.holds}


def sup_h_bound(p: KernelParams) -> float:
    e, r = p.exponent, p.r
    return 3.0 * sphere_volume(r) * p.m_sqrt_r ** (r - e) * p.k ** (e - r)


def sup_h_check(p: KernelParams, v, gridpoints: int = 41) -> SupCheck:
    """Sample |h| on a uniform grid, h being the face-vanishing antiderivative of f_k(x - v).

    Evaluation is exact in rational arithmetic: the expanded coefficients are
    large and alternate in sign, so floating evaluation would cancel badly.
    """
    v = [Fraction(float(c)) for c in np.atleast_1d(v)]
    if len(v) != p.r or any(abs(c) > p.M for c in v):
        raise DomainExceeded(f"v must lie in [-M, M]^{p.r}")
    M = Fraction(p.M)
    h = antiderivative_h(kernel_poly(p).shift(v), p.r, M)
    axis = [-M + 2 * M * Fraction(j, gridpoints - 1) for j in range(gridpoints)]
    sup = max(abs(val) for val in _tensor_grid_values(h, axis))
    return SupCheck(float(sup), sup_h_bound(p))


def _tensor_grid_values(poly: MultiPoly, axis: list[Fraction]):
    """Exact values of ``poly`` on axis^m, fixing the last variable first."""
    last = poly.m - 1
    if last == 0:
        coeffs = [0] * (poly.degree + 1)
        for (p0,), c in poly.terms.items():
            coeffs[p0] = c
        for x in axis:
            acc = Fraction(0)
            for c in reversed(coeffs):
                acc = acc * x + c
            yield acc
        return
    for x in axis:
        reduced = poly.substitute({last: x})
        lower = MultiPoly(last, {e[:last]: c for e, c in reduced.terms.items()})
        yield from _tensor_grid_values(lower, axis)


# integral-operator identity ------------------------------------------------


class ResidualField:
    """R(x) = (1/N) #{a_i in I_x} - mu(I_x) for anchored boxes I_x = prod [-M, x_i]."""

    def __init__(self, grid: QuadratureGrid, seq: ClassSequence):
        self.grid = grid
        self.seq = seq
        self.points = push_sequence(grid.tables, seq)

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        emp = np.count_nonzero(np.all(self.points <= x, axis=1)) / self.points.shape[0]
        return emp - mu_box(self.grid, x)


def default_x_resolution(r: int) -> int:
    return {1: 4096, 2: 256}.get(r, 32)


@dataclass(frozen=True)
class IntopResult:
    lhs: float
    rhs: float
    x_resolution: int
    terms: str

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "x_resolution": self.x_resolution,
            "terms": self.terms,
        }


def integral_operator_residual(
    t: RootSystemTables,
    grid: QuadratureGrid,
    seq: ClassSequence,
    h: MultiPoly,
    *,
    x_resolution: int | None = None,
    full_term_only: bool = False,
) -> IntopResult:
    """Compare both sides of the integral-operator identity for a polynomial test function.

    Right side: (1/N) sum h(a_i) - int h dmu, with mu the grid measure.
    Left side: sum over nonempty J of (-1)^{|J|} int R_J(x_J) d_J h(x_J, M) dx_J,
    where R_J is R with the coordinates outside J pinned at M.  Only the full
    J term survives when h vanishes on the faces x_i = M or when r = 1;
    ``full_term_only`` keeps just that term.

    The x-integrals use the midpoint rule on a uniform partition of [-M, M]
    refined by the sample coordinates, so the empirical part is integrated
    exactly and only the smooth measure part carries discretisation error.
    """
    if grid.group != seq.group or grid.group != t.group:
        raise ValueError("grid, sequence and tables must share a group")
    if h.m != t.r:
        raise ValueError(f"h must have {t.r} variables")
    nx = x_resolution or default_x_resolution(t.r)
    M = float(t.M)
    a = push_sequence(t, seq)
    n = a.shape[0]
    hf = h.to_float()

    rhs = math.fsum(hf.evaluate(a)) / n - math.fsum(grid.weights * hf.evaluate(grid.pushed))

    mids, widths = [], []
    for k in range(t.r):
        br = np.unique(np.concatenate([np.linspace(-M, M, nx + 1), a[:, k]]))
        mids.append(0.5 * (br[1:] + br[:-1]))
        widths.append(np.diff(br))

    subsets = [tuple(range(t.r))] if full_term_only else [
        J for size in range(1, t.r + 1) for J in itertools.combinations(range(t.r), size)
    ]
    lhs_terms = []
    for J in subsets:
        axes = [mids[k] if k in J else np.array([M]) for k in range(t.r)]
        resid = cdf_table(a, np.full(n, 1.0 / n), axes) - cdf_table(grid.pushed, grid.weights, axes)
        resid = resid.reshape([len(mids[k]) for k in J])
        g = hf.mixed_partial(J).substitute({k: M for k in range(t.r) if k not in J})
        mesh = np.meshgrid(*[mids[k] for k in J], indexing="ij")
        pts = np.zeros((mesh[0].size, t.r))
        for k in range(t.r):
            pts[:, k] = M
        for col, k in enumerate(J):
            pts[:, k] = mesh[col].ravel()
        vol = np.ones(resid.shape)
        for col, k in enumerate(J):
            shape = [1] * len(J)
            shape[col] = -1
            vol = vol * widths[k].reshape(shape)
        vals = resid.ravel() * g.evaluate(pts) * vol.ravel()
        lhs_terms.append((-1) ** len(J) * math.fsum(vals))
    return IntopResult(
        lhs=math.fsum(lhs_terms),
        rhs=rhs,
        x_resolution=nx,
        terms="full" if full_term_only else "all",
    )
