"""Integer bivariate polynomials and the generating function of weighted word counts.

The matrix generating function is ``G(x, y) = (E - x * sum_j y^j A_{s0+j})^{-1}``;
its denominator is ``H(x, y) = det(E - x * sum_j y^j A_{s0+j})`` and the
numerator matrix ``H * G`` is the adjugate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .symbolic_graph import WeightedGraph

COFACTOR_MAX_P = 8


def _trim(rows) -> tuple[tuple[int, ...], ...]:
    rows = [list(r) for r in rows]
    for r in rows:
        while r and r[-1] == 0:
            r.pop()
    while rows and not rows[-1]:
        rows.pop()
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class BivarPoly:
    """Dense integer polynomial: ``coeffs[i][j]`` multiplies ``x^i y^j``."""

    coeffs: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def constant(cls, c: int) -> "BivarPoly":
        return cls(((int(c),),))

    @classmethod
    def monomial(cls, i: int, j: int, c: int = 1) -> "BivarPoly":
        return cls.from_terms({(i, j): c})

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], int]) -> "BivarPoly":
        if not terms:
            return cls()
        nx = max(i for i, _ in terms) + 1
        ny = max(j for _, j in terms) + 1
        grid = [[0] * ny for _ in range(nx)]
        for (i, j), c in terms.items():
            grid[i][j] += int(c)
        return cls(tuple(tuple(r) for r in grid))

    def terms(self) -> dict[tuple[int, int], int]:
        return {(i, j): c for i, row in enumerate(self.coeffs) for j, c in enumerate(row) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def deg_x(self) -> int:
        return len(self.coeffs) - 1

    @property
    def deg_y(self) -> int:
        return max((len(r) for r in self.coeffs), default=0) - 1

    def __add__(self, other):
        other = _as_poly(other)
        nx = max(len(self.coeffs), len(other.coeffs))
        rows = []
        for i in range(nx):
            a = self.coeffs[i] if i < len(self.coeffs) else ()
            b = other.coeffs[i] if i < len(other.coeffs) else ()
            n = max(len(a), len(b))
            rows.append(tuple((a[j] if j < len(a) else 0) + (b[j] if j < len(b) else 0) for j in range(n)))
        return BivarPoly(tuple(rows))

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly(tuple(tuple(-c for c in r) for r in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return BivarPoly()
        nx = len(self.coeffs) + len(other.coeffs) - 1
        ny = self.deg_y + other.deg_y + 1
        grid = [[0] * ny for _ in range(nx)]
        for i, ra in enumerate(self.coeffs):
            for j, a in enumerate(ra):
                if not a:
                    continue
                for k, rb in enumerate(other.coeffs):
                    row = grid[i + k]
                    for l, b in enumerate(rb):
                        if b:
                            row[j + l] += a * b
        return BivarPoly(tuple(tuple(r) for r in grid))

    __rmul__ = __mul__

    def divexact(self, other: "BivarPoly") -> "BivarPoly":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = self.terms()
        div = other.terms()
        lead = max(div)
        lc = div[lead]
        quot: dict[tuple[int, int], int] = {}
        while rem:
            top = max(rem)
            di, dj = top[0] - lead[0], top[1] - lead[1]
            c, r = divmod(rem[top], lc)
            if di < 0 or dj < 0 or r:
                raise ArithmeticError("polynomial division is not exact")
            quot[(di, dj)] = quot.get((di, dj), 0) + c
            for (i, j), b in div.items():
                key = (i + di, j + dj)
                v = rem.get(key, 0) - c * b
                if v:
                    rem[key] = v
                else:
                    rem.pop(key, None)
        return BivarPoly.from_terms(quot)

    def __call__(self, x, y):
        """Exact evaluation (ints, Fractions) by nested Horner."""
        total = 0
        for row in reversed(self.coeffs):
            inner = 0
            for c in reversed(row):
                inner = inner * y + c
            total = total * x + inner
        return total

    def d_x(self) -> "BivarPoly":
        return BivarPoly(tuple(tuple(i * c for c in row) for i, row in enumerate(self.coeffs))[1:])

    def d_y(self) -> "BivarPoly":
        return BivarPoly(tuple(tuple(j * c for j, c in enumerate(row))[1:] for row in self.coeffs))

    def to_text(self) -> str:
        """Canonical text, terms ascending by x-degree then y-degree: ``1 - x - x^2*y``."""
        terms = sorted(self.terms().items())
        if not terms:
            return "0"
        parts = []
        for k, ((i, j), c) in enumerate(terms):
            mono = []
            if i:
                mono.append("x" if i == 1 else f"x^{i}")
            if j:
                mono.append("y" if j == 1 else f"y^{j}")
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = "*".join(mono)
            else:
                body = "*".join([str(mag)] + mono)
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.to_text()


def _as_poly(v) -> BivarPoly:
    return v if isinstance(v, BivarPoly) else BivarPoly.constant(v)


ZERO = BivarPoly()
ONE = BivarPoly.constant(1)

PolyMatrix = list  # p x p nested list of BivarPoly


def poly_matmul(A: Sequence[Sequence[BivarPoly]], B: Sequence[Sequence[BivarPoly]]) -> list[list[BivarPoly]]:
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ZERO
            for t in range(k):
                if not A[i][t].is_zero() and not B[t][j].is_zero():
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def poly_identity(p: int, scale: BivarPoly = ONE) -> list[list[BivarPoly]]:
    return [[scale if i == j else ZERO for j in range(p)] for i in range(p)]


def transfer_polymatrix(graph: WeightedGraph) -> list[list[BivarPoly]]:
    """sum_j y^j A_{s0+j} with entries x^0 y^{k_ij - s0}."""
    p, s0 = graph.p, graph.s0
    return [[ZERO if graph.K[i][j] is None else BivarPoly.monomial(0, graph.K[i][j] - s0)
             for j in range(p)] for i in range(p)]


def kernel_polymatrix(graph: WeightedGraph) -> list[list[BivarPoly]]:
    """E - x * sum_j y^j A_{s0+j}."""
    p, s0 = graph.p, graph.s0
    out = []
    for i in range(p):
        row = []
        for j in range(p):
            e = ONE if i == j else ZERO
            if graph.K[i][j] is not None:
                e = e - BivarPoly.monomial(1, graph.K[i][j] - s0)
            row.append(e)
        out.append(row)
    return out


def det_cofactor(M: Sequence[Sequence[BivarPoly]]) -> BivarPoly:
    """Laplace expansion along rows, memoised on the set of remaining columns."""
    n = len(M)
    if n == 0:
        return ONE

    @lru_cache(maxsize=None)
    def minor(mask: int) -> BivarPoly:
        row = bin(mask).count("1")
        if row == n:
            return ONE
        acc = ZERO
        sign = 1
        for c in range(n):
            if mask >> c & 1:
                continue
            entry = M[row][c]
            if not entry.is_zero():
                sub = minor(mask | (1 << c))
                if not sub.is_zero():
                    term = entry * sub
                    acc = acc + term if sign > 0 else acc - term
            sign = -sign
        return acc

    return minor(0)


def det_bareiss(M: Sequence[Sequence[BivarPoly]]) -> BivarPoly:
    """Fraction-free Gaussian elimination over Z[x, y]."""
    n = len(M)
    if n == 0:
        return ONE
    a = [list(row) for row in M]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num.divexact(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def determinant(M: Sequence[Sequence[BivarPoly]], method: str = "auto") -> BivarPoly:
    if method == "auto":
        method = "cofactor" if len(M) <= COFACTOR_MAX_P else "bareiss"
    if method == "cofactor":
        return det_cofactor(M)
    if method == "bareiss":
        return det_bareiss(M)
    raise ValueError(f"unknown determinant method {method!r}")


def adjugate(M: Sequence[Sequence[BivarPoly]], method: str = "auto") -> list[list[BivarPoly]]:
    """adj(M), so that adj(M) * M = det(M) * E."""
    n = len(M)
    if n == 1:
        return [[ONE]]
    adj = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = determinant(minor, method)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def denominator_H(graph: WeightedGraph, method: str = "auto") -> BivarPoly:
    return determinant(kernel_polymatrix(graph), method)


def numerator_matrix(graph: WeightedGraph, method: str = "auto") -> list[list[BivarPoly]]:
    return adjugate(kernel_polymatrix(graph), method)


def eval_with_partials(poly: BivarPoly, x: float, y: float) -> tuple[float, float, float, float, float, float]:
    """(value, H_x, H_y, H_xx, H_yy, H_xy) in double precision."""
    x, y = float(x), float(y)
    dx, dy = poly.d_x(), poly.d_y()
    return (
        float(poly(x, y)),
        float(dx(x, y)),
        float(dy(x, y)),
        float(dx.d_x()(x, y)),
        float(dy.d_y()(x, y)),
        float(dx.d_y()(x, y)),
    )
