"""Matrices over Q[X1..Xm]: Jacobians, determinants and adjugate inverses."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .poly import Polynomial, PolyMap, Rational, compose, format_polynomial, rational


class PolyMatrix:
    __slots__ = ("rows", "cols", "entries", "arity")

    def __init__(self, rows: int, cols: int, entries: Iterable[Polynomial], arity: int | None = None):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        if arity is None:
            if not entries:
                raise ValueError("arity required for an empty matrix")
            arity = entries[0].arity
        if any(e.arity != arity for e in entries):
            raise ValueError("matrix entries must share one arity")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self.arity = arity

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]]) -> PolyMatrix:
        n = len(rows)
        c = len(rows[0]) if n else 0
        if any(len(r) != c for r in rows):
            raise ValueError("ragged rows")
        return cls(n, c, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int, arity: int) -> PolyMatrix:
        one, zero = Polynomial.one(arity), Polynomial.zero(arity)
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)], arity)

    @classmethod
    def constant(cls, rows: Sequence[Sequence], arity: int) -> PolyMatrix:
        if not rows:
            return cls(0, 0, [], arity)
        return cls.from_rows([[Polynomial.constant(x, arity) for x in r] for r in rows])

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Polynomial]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and (self.rows, self.cols, self.arity) == (other.rows, other.cols, other.arity)
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"PolyMatrix({self.to_rows()!r})"

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        return mat_mul(self, other)

    def scale(self, c) -> PolyMatrix:
        return PolyMatrix(self.rows, self.cols, (e.scale(c) for e in self.entries), self.arity)

    def substitute(self, args: Sequence[Polynomial]) -> PolyMatrix:
        """Every entry with ``X_i -> args[i]``."""
        arity = args[0].arity if args else self.arity
        return PolyMatrix(self.rows, self.cols, (compose(e, args) for e in self.entries), arity)

    def format(self, names: Sequence[str] | None = None) -> str:
        return "\n".join(
            "[" + ", ".join(format_polynomial(e, names) for e in self.row(i)) + "]"
            for i in range(self.rows)
        )


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    if a.arity != b.arity:
        raise ValueError("arity mismatch")
    out = []
    for i in range(a.rows):
        for j in range(b.cols):
            acc = Polynomial.zero(a.arity)
            for k in range(a.cols):
                x, y = a[i, k], b[k, j]
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            out.append(acc)
    return PolyMatrix(a.rows, b.cols, out, a.arity)


def mat_vec_apply(Mx: PolyMatrix, v: Sequence[Polynomial]) -> list[Polynomial]:
    if Mx.cols != len(v):
        raise ValueError(f"{Mx.rows}x{Mx.cols} matrix cannot act on a length-{len(v)} vector")
    out = []
    for i in range(Mx.rows):
        acc = Polynomial.zero(Mx.arity)
        for a, x in zip(Mx.row(i), v):
            if not a.is_zero() and not x.is_zero():
                acc = acc + a * x
        out.append(acc)
    return out


def jacobian(F: PolyMap) -> PolyMatrix:
    """Entry (i, j) is dF_i/dX_j."""
    m = F.arity
    return PolyMatrix(m, m, [F[i].derivative(j) for i in range(m) for j in range(m)], m)


def _minor_solver(Mx: PolyMatrix):
    # Laplace expansion along the first rows, memoized on the set of columns
    # still in play.  Division-free, so exact over any commutative ring.

    @lru_cache(maxsize=None)
    def det_of(row0: int, cols: tuple[int, ...]) -> Polynomial:
        if not cols:
            return Polynomial.one(Mx.arity)
        if len(cols) == 1:
            return Mx[row0, cols[0]]
        acc = Polynomial.zero(Mx.arity)
        for pos, c in enumerate(cols):
            a = Mx[row0, c]
            if a.is_zero():
                continue
            sub = det_of(row0 + 1, cols[:pos] + cols[pos + 1:])
            if sub.is_zero():
                continue
            term = a * sub
            acc = acc - term if pos % 2 else acc + term
        return acc

    return det_of


def _require_square(Mx: PolyMatrix) -> None:
    if not Mx.is_square:
        raise ValueError(f"matrix is {Mx.rows}x{Mx.cols}, not square")


def determinant(Mx: PolyMatrix) -> Polynomial:
    _require_square(Mx)
    return _minor_solver(Mx)(0, tuple(range(Mx.cols)))


def constant_unit(p: Polynomial) -> Rational | None:
    """The value of ``p`` if it is a nonzero constant, else ``None``."""
    if p.is_constant() and not p.is_zero():
        return p.constant_term()
    return None


def _delete(Mx: PolyMatrix, row: int, col: int) -> PolyMatrix:
    n = Mx.rows
    return PolyMatrix(
        n - 1,
        n - 1,
        [Mx[i, j] for i in range(n) if i != row for j in range(n) if j != col],
        Mx.arity,
    )


def adjugate(Mx: PolyMatrix) -> PolyMatrix:
    """Transpose of the cofactor matrix, so that ``Mx @ adj = det * I``."""
    _require_square(Mx)
    n = Mx.rows
    if n == 0:
        return Mx
    if n == 1:
        return PolyMatrix.identity(1, Mx.arity)
    out = [None] * (n * n)
    for i in range(n):
        for j in range(n):
            cof = determinant(_delete(Mx, i, j))
            out[j * n + i] = -cof if (i + j) % 2 else cof
    return PolyMatrix(n, n, out, Mx.arity)


def adjugate_inverse(Mx: PolyMatrix, det_unit) -> PolyMatrix:
    """Exact inverse in M_m(Q[X]) of a matrix whose determinant is the
    nonzero constant ``det_unit``."""
    _require_square(Mx)
    d = rational(det_unit)
    if not d:
        raise ValueError("det_unit must be nonzero")
    actual = determinant(Mx)
    if actual != d:
        raise ValueError(f"determinant is {format_polynomial(actual)}, not the constant {d}")
    return adjugate(Mx).scale(1 / d)
