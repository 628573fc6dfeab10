"""A fast battery of end-to-end checks for one group, used by ``chardisc selftest``."""

from __future__ import annotations

import numpy as np

from .discrepancy import build_quadrature
from .et_bound import verify
from .kernel_lab import KernelParams, kernel_mass_inner, kernel_tail
from .pushforward import density_F, density_sup_bound, jacobian_formula, numeric_jacobian
from .root_system import build_tables, freudenthal_multiplicities, weyl_dimension
from .sampling import sample_haar
from .torus_chars import abs_weyl_denominator, dominant_weights_up_to


def run_selftest(group: str, seed: int = 2024) -> list[tuple[str, bool, str]]:
    t = build_tables(group)
    results = []

    bad = [
        lam
        for lam in dominant_weights_up_to(t, 3)
        if sum(freudenthal_multiplicities(t, lam).values()) != weyl_dimension(t, lam)
    ]
    results.append(("weyl dimension = weight multiplicity sum", not bad, f"mismatches {bad}"))

    pts = sample_haar(t, 200, seed).points
    pts = pts[abs_weyl_denominator(t, pts) >= 1e-3][:20]
    errs = [
        abs(numeric_jacobian(t, th) - jacobian_formula(t, th)) / jacobian_formula(t, th) for th in pts
    ]
    results.append(("jacobian identity", max(errs) <= 1e-4, f"max rel err {max(errs):.2e}"))

    grid = build_quadrature(t)
    mass_ok = abs(grid.mass - 1.0) <= 1e-3
    results.append(("quadrature mass", mass_ok, f"mass {grid.mass:.9f}"))
    sup_f = float(np.max(density_F(t, grid.nodes)))
    results.append(
        ("density sup bound", sup_f <= density_sup_bound(t) + 1e-9,
         f"sup F {sup_f:.6g} <= {density_sup_bound(t):.6g}")
    )

    seq = sample_haar(t, 200, seed)
    rep = verify(t, seq, 3, grid)
    results.append(("bound holds (Haar 200, k=3)", bool(rep.holds), f"d_upper {rep.d_upper:.4g} rhs {rep.rhs:.4g}"))

    if t.r <= 2:
        p = KernelParams(t.r, t.M, 3)
        inner = kernel_mass_inner(p, p.m_sqrt_r)
        tail = kernel_tail(p, p.m_sqrt_r / 3)
        results.append(("kernel sandwich and tail", inner.holds and tail.holds,
                        f"inner {inner.integral:.4g}, tail {tail.integral:.4g} <= {tail.bound:.4g}"))
    return results
