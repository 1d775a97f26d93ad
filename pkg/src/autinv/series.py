"""Truncated power series in ``t`` with polynomial coefficients.

A :class:`TruncSeries` of order ``N`` is an element of
``Q[X1..Xm][t] / (t^(N+1))``: dense in ``t``, sparse in the ``X``'s.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .poly import Polynomial, PolyMap, default_names, format_polynomial


class TruncSeries:
    __slots__ = ("coeffs", "arity")

    def __init__(self, coeffs: Iterable[Polynomial], arity: int | None = None):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a truncated series needs at least the t^0 coefficient")
        if arity is None:
            arity = coeffs[0].arity
        for c in coeffs:
            if c.arity != arity:
                raise ValueError("all coefficients must share one arity")
        self.coeffs = coeffs
        self.arity = arity

    @classmethod
    def zero(cls, arity: int, order: int) -> TruncSeries:
        z = Polynomial.zero(arity)
        return cls([z] * (order + 1), arity)

    @classmethod
    def constant(cls, p: Polynomial, order: int) -> TruncSeries:
        """``p`` embedded at ``t^0``."""
        z = Polynomial.zero(p.arity)
        return cls([p] + [z] * order, p.arity)

    @classmethod
    def from_polynomials(cls, coeffs: Sequence[Polynomial], order: int) -> TruncSeries:
        """Pad or cut ``coeffs`` to exactly ``order + 1`` entries."""
        arity = coeffs[0].arity
        z = Polynomial.zero(arity)
        cs = list(coeffs[: order + 1])
        cs += [z] * (order + 1 - len(cs))
        return cls(cs, arity)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, j: int) -> Polynomial:
        return self.coeffs[j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncSeries)
            and self.arity == other.arity
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"TruncSeries(order={self.order}, {format_series(self)})"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def t_degree(self) -> int:
        """Index of the last nonzero coefficient, -1 for the zero series."""
        for j in range(self.order, -1, -1):
            if not self.coeffs[j].is_zero():
                return j
        return -1

    def truncate(self, order: int) -> TruncSeries:
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} series to {order}")
        return TruncSeries(self.coeffs[: order + 1], self.arity)

    def __add__(self, other: TruncSeries) -> TruncSeries:
        return series_add(self, other)

    def __sub__(self, other: TruncSeries) -> TruncSeries:
        return series_add(self, -other)

    def __neg__(self) -> TruncSeries:
        return TruncSeries((-c for c in self.coeffs), self.arity)

    def __mul__(self, other: TruncSeries) -> TruncSeries:
        return series_mul(self, other)

    def scale(self, c) -> TruncSeries:
        return TruncSeries((p.scale(c) for p in self.coeffs), self.arity)

    def t_derivative(self) -> TruncSeries:
        """``d/dt``; the result has order one less (order 0 maps to zero)."""
        if self.order == 0:
            return TruncSeries.zero(self.arity, 0)
        return TruncSeries(
            (self.coeffs[j].scale(j) for j in range(1, self.order + 1)), self.arity
        )


def _check_pair(s: TruncSeries, r: TruncSeries) -> None:
    if s.order != r.order:
        raise ValueError(f"order mismatch: {s.order} vs {r.order}")
    if s.arity != r.arity:
        raise ValueError(f"arity mismatch: {s.arity} vs {r.arity}")


def series_add(s: TruncSeries, r: TruncSeries) -> TruncSeries:
    _check_pair(s, r)
    return TruncSeries((a + b for a, b in zip(s.coeffs, r.coeffs)), s.arity)


def series_mul(s: TruncSeries, r: TruncSeries) -> TruncSeries:
    """Cauchy product, truncated at ``t^order``."""
    _check_pair(s, r)
    n = s.order
    out = []
    for k in range(n + 1):
        acc = Polynomial.zero(s.arity)
        for i in range(k + 1):
            a, b = s.coeffs[i], r.coeffs[k - i]
            if a.is_zero() or b.is_zero():
                continue
            acc = acc + a * b
        out.append(acc)
    return TruncSeries(out, s.arity)


def eval_at_one(s: TruncSeries) -> Polynomial:
    """Sum of all t-coefficients."""
    acc = Polynomial.zero(s.arity)
    for c in s.coeffs:
        acc = acc + c
    return acc


class SeriesVec:
    """An m-tuple of truncated series sharing order and arity."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[TruncSeries]):
        comps = tuple(components)
        if not comps:
            raise ValueError("empty series vector")
        order, arity = comps[0].order, comps[0].arity
        for c in comps:
            if c.order != order or c.arity != arity:
                raise ValueError("components must share order and arity")
        self.components = comps

    @classmethod
    def constant(cls, init: PolyMap, order: int) -> SeriesVec:
        return cls(TruncSeries.constant(p, order) for p in init.components)

    @property
    def order(self) -> int:
        return self.components[0].order

    @property
    def arity(self) -> int:
        return self.components[0].arity

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> TruncSeries:
        return self.components[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, SeriesVec) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"SeriesVec(order={self.order}, [{'; '.join(map(format_series, self.components))}])"

    def truncate(self, order: int) -> SeriesVec:
        return SeriesVec(c.truncate(order) for c in self.components)

    def coefficient_tuple(self, j: int) -> tuple[Polynomial, ...]:
        """``(u_{1,j}, ..., u_{m,j})``."""
        return tuple(c.coeffs[j] for c in self.components)


def compose_poly_series(f: Polynomial, S: SeriesVec | Sequence[TruncSeries]) -> TruncSeries:
    """``f(S_1, ..., S_m)`` computed in the truncated series ring."""
    comps = tuple(S)
    if len(comps) != f.arity:
        raise ValueError(f"need {f.arity} series, got {len(comps)}")
    if not comps:
        raise ValueError("cannot infer order from zero arguments")
    order, arity = comps[0].order, comps[0].arity
    for c in comps:
        if c.order != order or c.arity != arity:
            raise ValueError("series arguments must share order and arity")

    one = TruncSeries.constant(Polynomial.one(arity), order)
    powers = [[one, s] for s in comps]
    prefix: dict = {(): one}

    def power(i: int, e: int) -> TruncSeries:
        pw = powers[i]
        while len(pw) <= e:
            pw.append(series_mul(pw[-1], pw[1]))
        return pw[e]

    def product(exps: tuple[int, ...]) -> TruncSeries:
        hit = prefix.get(exps)
        if hit is None:
            head = product(exps[:-1])
            e = exps[-1]
            if e == 0:
                hit = head
            elif head is one:
                hit = power(len(exps) - 1, e)
            else:
                hit = series_mul(head, power(len(exps) - 1, e))
            prefix[exps] = hit
        return hit

    acc = [dict() for _ in range(order + 1)]
    for exps, c in f.terms().items():
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        for j, p in enumerate(product(exps).coeffs):
            slot = acc[j]
            for k, v in p._terms.items():
                slot[k] = slot.get(k, 0) + c * v
    return TruncSeries(
        (Polynomial._raw(arity, {k: v for k, v in d.items() if v}) for d in acc), arity
    )


def format_series(s: TruncSeries, names: Sequence[str] | None = None) -> str:
    """``c0 + (c1)*t + (c2)*t^2``; zero coefficients are skipped."""
    if names is None:
        names = default_names(s.arity)
    parts = []
    for j, c in enumerate(s.coeffs):
        if c.is_zero():
            continue
        text = format_polynomial(c, names)
        if j == 0:
            parts.append(text)
        elif j == 1:
            parts.append(f"({text})*t")
        else:
            parts.append(f"({text})*t^{j}")
    return " + ".join(parts) if parts else "0"
