"""Sparse multivariate polynomials with exact or floating coefficients.

Terms are stored as ``{exponent tuple: coefficient}``.  Coefficients may be
``int``, ``Fraction`` or ``float``; arithmetic keeps whatever type the inputs
carry, so rational inputs stay exact.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from numbers import Number

import numpy as np

Exps = tuple[int, ...]


class MultiPoly:
    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: dict[Exps, Number] | None = None):
        if m < 1:
            raise ValueError("a polynomial needs at least one variable")
        self.m = m
        clean: dict[Exps, Number] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != m or min(e) < 0:
                raise ValueError(f"bad exponent vector {e} for {m} variables")
            if c != 0:
                clean[e] = clean.get(e, 0) + c
                if clean[e] == 0:
                    del clean[e]
        self.terms = clean

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, m: int, c: Number) -> MultiPoly:
        return cls(m, {(0,) * m: c})

    @classmethod
    def variable(cls, m: int, i: int) -> MultiPoly:
        """x_{i+1} (0-based index)."""
        return cls(m, {tuple(int(j == i) for j in range(m)): 1})

    # structure ------------------------------------------------------------

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Number):
            other = MultiPoly.constant(self.m, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __repr__(self) -> str:
        return f"MultiPoly({self.m}, {self.terms!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"x{i + 1}" if p == 1 else f"x{i + 1}^{p}" for i, p in enumerate(e) if p
            )
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.m != self.m:
                raise ValueError("variable counts differ")
            return other
        return MultiPoly.constant(self.m, other)

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.m, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.m, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MultiPoly:
        other = self._coerce(other)
        out: dict[Exps, Number] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.m, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(self.m, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # calculus -------------------------------------------------------------

    def diff(self, i: int, times: int = 1) -> MultiPoly:
        out = {}
        for e, c in self.terms.items():
            p = e[i]
            if p < times:
                continue
            factor = 1
            for j in range(times):
                factor *= p - j
            ne = e[:i] + (p - times,) + e[i + 1 :]
            out[ne] = c * factor
        return MultiPoly(self.m, out)

    def mixed_partial(self, axes) -> MultiPoly:
        p = self
        for i in axes:
            p = p.diff(i)
        return p

    def integrate_monomials(self, axes) -> MultiPoly:
        """Termwise antiderivative in each listed variable, zero constant of integration.

        Exact (``Fraction``) unless the coefficients are floats.
        """
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i in axes:
                ne[i] += 1
                c = c / ne[i] if isinstance(c, float) else Fraction(c) / ne[i]
            out[tuple(ne)] = c
        return MultiPoly(self.m, out)

    def substitute(self, values: dict[int, Number]) -> MultiPoly:
        """Set x_i = values[i] for the given 0-based indices; the variable count is kept."""
        out: dict[Exps, Number] = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i, v in values.items():
                if ne[i]:
                    c = c * v ** ne[i]
                    ne[i] = 0
            key = tuple(ne)
            out[key] = out.get(key, 0) + c
        return MultiPoly(self.m, out)

    def shift(self, v) -> MultiPoly:
        """p(x - v), expanded."""
        result = MultiPoly(self.m)
        lin = [MultiPoly.variable(self.m, i) - v[i] for i in range(self.m)]
        cache: dict[tuple[int, int], MultiPoly] = {}
        for e, c in self.terms.items():
            term = MultiPoly.constant(self.m, c)
            for i, p in enumerate(e):
                if p:
                    if (i, p) not in cache:
                        cache[(i, p)] = lin[i] ** p
                    term = term * cache[(i, p)]
            result = result + term
        return result

    # evaluation -----------------------------------------------------------

    def __call__(self, *x):
        """Exact evaluation at one point (coefficient arithmetic type is preserved)."""
        if len(x) == 1 and not isinstance(x[0], Number):
            x = tuple(x[0])
        if len(x) != self.m:
            raise ValueError(f"expected {self.m} coordinates")
        total = 0
        for e, c in self.terms.items():
            term = c
            for xi, p in zip(x, e):
                if p:
                    term = term * xi**p
            total = total + term
        return total

    def evaluate(self, x) -> np.ndarray:
        """Floating evaluation at points of shape (n, m) or (m,)."""
        pts = np.asarray(x, dtype=float)
        batch = np.atleast_2d(pts)
        out = np.zeros(batch.shape[0])
        for e, c in self.terms.items():
            term = np.full(batch.shape[0], float(c))
            for i, p in enumerate(e):
                if p:
                    term = term * batch[:, i] ** p
            out += term
        return out[0] if pts.ndim == 1 else out

    def to_float(self) -> MultiPoly:
        return MultiPoly(self.m, {e: float(c) for e, c in self.terms.items()})


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+)|x(\d+)|(\^)|([+*\-()]))")


def parse_poly(text: str, m: int) -> MultiPoly:
    """Parse expressions such as ``"x1^2"``, ``"3*x1*x2 + 1"`` or ``"-x1 + x2^3"``.

    Grammar: sums and differences of products of constants, variables ``x1..xm``
    with optional non-negative integer powers, and parenthesised subexpressions.
    Integer and decimal constants become exact fractions.
    """
    tokens: list[tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial at column {pos + 1}: {text[pos:]!r}")
        num, var, caret, op = mt.groups()
        if num is not None:
            tokens.append(("num", num))
        elif var is not None:
            idx = int(var)
            if not 1 <= idx <= m:
                raise ValueError(f"variable x{idx} out of range for {m} variables")
            tokens.append(("var", var))
        elif caret:
            tokens.append(("^", "^"))
        else:
            tokens.append((op, op))
        pos = mt.end()
    if not tokens:
        raise ValueError("empty polynomial expression")

    i = 0

    def peek():
        return tokens[i][0] if i < len(tokens) else None

    def take(kind):
        nonlocal i
        if peek() != kind:
            found = tokens[i][1] if i < len(tokens) else "end of input"
            raise ValueError(f"expected {kind!r} but found {found!r}")
        i += 1
        return tokens[i - 1][1]

    def expr() -> MultiPoly:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take(peek()) == "-" else 1
        acc = term() * sign
        while peek() in ("+", "-"):
            op = take(peek())
            acc = acc + term() if op == "+" else acc - term()
        return acc

    def term() -> MultiPoly:
        acc = power()
        while peek() == "*":
            take("*")
            acc = acc * power()
        return acc

    def power() -> MultiPoly:
        base = atom()
        if peek() == "^":
            take("^")
            exp = take("num")
            if not exp.isdigit():
                raise ValueError(f"exponents must be non-negative integers, got {exp!r}")
            base = base ** int(exp)
        return base

    def atom() -> MultiPoly:
        kind = peek()
        if kind == "num":
            return MultiPoly.constant(m, Fraction(take("num")))
        if kind == "var":
            return MultiPoly.variable(m, int(take("var")) - 1)
        if kind == "(":
            take("(")
            inner = expr()
            take(")")
            return inner
        if kind == "-":
            take("-")
            return -atom()
        found = tokens[i][1] if i < len(tokens) else "end of input"
        raise ValueError(f"unexpected {found!r}")

    out = expr()
    if i != len(tokens):
        raise ValueError(f"trailing input after position {i}: {tokens[i][1]!r}")
    return out
