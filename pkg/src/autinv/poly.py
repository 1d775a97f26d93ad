"""Exact sparse multivariate polynomials over the rationals.

Monomials are stored packed into a single integer, ``_BITS`` bits per
variable, so that multiplying monomials is integer addition.  The public
surface only ever exposes exponent tuples.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

Rational = type(mpq())

#: Degree of the zero polynomial.  Kept distinct from 0, the degree of a
#: nonzero constant.
NEG_INF = -math.inf

_BITS = 16
_MASK = (1 << _BITS) - 1
MAX_EXPONENT = _MASK


def rational(value) -> Rational:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Fraction)) or isinstance(value, _RationalABC):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        f = Fraction(value.strip())
        return mpq(f.numerator, f.denominator)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def _pack(exps: Sequence[int]) -> int:
    key = 0
    shift = 0
    for e in exps:
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent {e} outside 0..{_MASK}")
        key |= e << shift
        shift += _BITS
    return key


def _unpack(key: int, arity: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(arity))


def _key_degree(key: int) -> int:
    d = 0
    while key:
        d += key & _MASK
        key >>= _BITS
    return d


def _grevlex_key(exps: tuple[int, ...]):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _mul_acc(out: dict, a: dict, b: dict) -> None:
    """``out += a*b`` on packed term dicts; may leave zero entries."""
    if len(a) > len(b):
        a, b = b, a
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb


def _mul_terms(a: dict, b: dict) -> dict:
    out: dict = {}
    _mul_acc(out, a, b)
    return {k: c for k, c in out.items() if c}


def sum_of_products(pairs: Iterable[tuple[Polynomial, Polynomial]], arity: int) -> Polynomial:
    """``sum(p * q for p, q in pairs)`` without intermediate polynomials."""
    out: dict = {}
    for p, q in pairs:
        if p._terms and q._terms:
            _mul_acc(out, p._terms, q._terms)
    return Polynomial._raw(arity, {k: c for k, c in out.items() if c})


class Polynomial:
    """Immutable element of Q[X1, ..., Xm].

    ``Polynomial(2, {(1, 0): 1, (0, 2): 3})`` is ``X + 3*Y^2``.
    """

    __slots__ = ("arity", "_terms", "_deg", "_hash")

    def __init__(self, arity: int, terms: Mapping[Sequence[int], object] | None = None):
        if arity < 0:
            raise ValueError("arity must be non-negative")
        packed: dict = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != arity:
                raise ValueError(f"monomial {exps} has length {len(exps)}, expected {arity}")
            k = _pack(exps)
            packed[k] = packed.get(k, 0) + rational(c)
        self.arity = arity
        self._terms = {k: c for k, c in packed.items() if c}
        self._deg = None
        self._hash = None

    @classmethod
    def _raw(cls, arity: int, terms: dict) -> Polynomial:
        # trusts terms: packed keys, mpq values, no zeros
        obj = object.__new__(cls)
        obj.arity = arity
        obj._terms = terms
        obj._deg = None
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, arity: int) -> Polynomial:
        return cls._raw(arity, {})

    @classmethod
    def constant(cls, value, arity: int) -> Polynomial:
        c = rational(value)
        return cls._raw(arity, {0: c} if c else {})

    @classmethod
    def one(cls, arity: int) -> Polynomial:
        return cls.constant(1, arity)

    @classmethod
    def variable(cls, index: int, arity: int) -> Polynomial:
        if not 0 <= index < arity:
            raise IndexError(f"variable index {index} out of range for arity {arity}")
        return cls._raw(arity, {1 << (_BITS * index): mpq(1)})

    @classmethod
    def variables(cls, arity: int) -> tuple[Polynomial, ...]:
        return tuple(cls.variable(i, arity) for i in range(arity))

    # -- inspection -----------------------------------------------------

    def terms(self) -> dict[tuple[int, ...], Rational]:
        """Monomial exponent tuple -> nonzero coefficient."""
        return {_unpack(k, self.arity): c for k, c in self._terms.items()}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Rational]]:
        """Terms in canonical print order: total degree ascending, and within
        one degree graded-reverse-lex descending (X before Y)."""
        items = [(_unpack(k, self.arity), c) for k, c in self._terms.items()]
        items.sort(key=lambda t: _grevlex_key(t[0]), reverse=True)
        items.sort(key=lambda t: sum(t[0]))
        return items

    def coefficient(self, exps: Sequence[int]) -> Rational:
        return self._terms.get(_pack(exps), mpq(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_term(self) -> Rational:
        return self._terms.get(0, mpq(0))

    def degree(self) -> int | float:
        """Total degree; ``NEG_INF`` for the zero polynomial."""
        if self._deg is None:
            self._deg = max((_key_degree(k) for k in self._terms), default=NEG_INF)
        return self._deg

    def degree_in(self, index: int) -> int | float:
        if not 0 <= index < self.arity:
            raise IndexError(f"variable index {index} out of range for arity {self.arity}")
        shift = _BITS * index
        return max(((k >> shift) & _MASK for k in self._terms), default=NEG_INF)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.arity != self.arity:
                raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        try:
            return Polynomial.constant(other, self.arity)
        except TypeError:
            return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self._terms) < len(other._terms):
            small, out = self._terms, dict(other._terms)
        else:
            small, out = other._terms, dict(self._terms)
        for k, c in small.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Polynomial._raw(self.arity, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.arity, {k: -c for k, c in self._terms.items()})

    def __pos__(self) -> Polynomial:
        return self

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def scale(self, c) -> Polynomial:
        c = rational(c)
        if not c:
            return Polynomial.zero(self.arity)
        return Polynomial._raw(self.arity, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if other.arity != self.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
        if not self._terms or not other._terms:
            return Polynomial.zero(self.arity)
        if self.degree() + other.degree() > MAX_EXPONENT:
            raise OverflowError("product degree exceeds the supported exponent range")
        return Polynomial._raw(self.arity, _mul_terms(self._terms, other._terms))

    __rmul__ = __mul__

    def __truediv__(self, other) -> Polynomial:
        c = rational(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / c)

    def __pow__(self, n: int) -> Polynomial:
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.arity)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self, index: int) -> Polynomial:
        if not 0 <= index < self.arity:
            raise IndexError(f"variable index {index} out of range for arity {self.arity}")
        shift = _BITS * index
        unit = 1 << shift
        out = {}
        for k, c in self._terms.items():
            e = (k >> shift) & _MASK
            if e:
                out[k - unit] = c * e
        return Polynomial._raw(self.arity, out)

    def __call__(self, *point) -> Rational:
        return evaluate(self, point)

    # -- protocol -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.arity == other.arity and self._terms == other._terms
        try:
            c = rational(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and self.constant_term() == c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.arity}, {self.terms()!r})"

    def __str__(self) -> str:
        return format_polynomial(self)


def default_names(arity: int) -> list[str]:
    if arity == 2:
        return ["X", "Y"]
    return [f"X{i + 1}" for i in range(arity)]


def _format_monomial(exps: tuple[int, ...], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, names: Sequence[str] | None = None) -> str:
    """Canonical text: ``-2*X^2 + 6*X*Y - 9/2*Y^2``; ``0`` for zero."""
    if names is None:
        names = default_names(p.arity)
    if len(names) != p.arity:
        raise ValueError("need one variable name per variable")
    out = []
    for exps, c in p.sorted_terms():
        mono = _format_monomial(exps, names)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(out) if out else "0"


# -- module-level operations ------------------------------------------------


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.arity != q.arity:
        raise ValueError(f"arity mismatch: {p.arity} vs {q.arity}")
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.arity != q.arity:
        raise ValueError(f"arity mismatch: {p.arity} vs {q.arity}")
    return p * q


def partial_derivative(p: Polynomial, var_index: int) -> Polynomial:
    return p.derivative(var_index)


def total_degree(p: Polynomial) -> int | float:
    return p.degree()


def evaluate(p: Polynomial, point: Sequence) -> Rational:
    if len(point) != p.arity:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has arity {p.arity}")
    vals = [rational(v) for v in point]
    total = mpq(0)
    for exps, c in p.terms().items():
        term = c
        for v, e in zip(vals, exps):
            if e:
                term *= v**e
        total += term
    return total


class _PowerCache:
    """Lazily extended powers of a fixed sequence of values."""

    def __init__(self, bases, one, mul):
        self._powers = [[one, b] for b in bases]
        self._mul = mul

    def get(self, index: int, exponent: int):
        pw = self._powers[index]
        while len(pw) <= exponent:
            pw.append(self._mul(pw[-1], pw[1]))
        return pw[exponent]


def compose(f: Polynomial, args: Sequence[Polynomial]) -> Polynomial:
    """``f`` with ``X_i`` replaced by ``args[i]``, fully expanded."""
    if len(args) != f.arity:
        raise ValueError(f"need {f.arity} arguments, got {len(args)}")
    if not args:
        return f
    arity = args[0].arity
    for a in args:
        if not isinstance(a, Polynomial) or a.arity != arity:
            raise ValueError("composition arguments must share one arity")
    return Polynomial._raw(arity, _compose_terms(f, args, arity))


def _compose_terms(f: Polynomial, args: Sequence[Polynomial], arity: int) -> dict:
    one = Polynomial.one(arity)
    powers = _PowerCache(args, one, lambda a, b: a * b)
    prefix: dict = {(): one}

    def product(exps):
        hit = prefix.get(exps)
        if hit is None:
            e = exps[-1]
            head = product(exps[:-1])
            pw = powers.get(len(exps) - 1, e)
            hit = head if e == 0 else (pw if head is one else head * pw)
            prefix[exps] = hit
        return hit

    acc: dict = {}
    get = acc.get
    for exps, c in f.terms().items():
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        for k, v in product(exps)._terms.items():
            acc[k] = get(k, 0) + c * v
    return {k: c for k, c in acc.items() if c}


class PolyMap:
    """The tuple ``(F1, ..., Fm)`` defining the endomorphism ``X_i -> F_i``."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[Polynomial]):
        comps = tuple(components)
        m = len(comps)
        for c in comps:
            if not isinstance(c, Polynomial):
                raise TypeError("components must be Polynomial")
            if c.arity != m:
                raise ValueError(f"component of arity {c.arity} in a map of arity {m}")
        self.components = comps

    @classmethod
    def identity(cls, arity: int) -> PolyMap:
        return cls(Polynomial.variables(arity))

    @property
    def arity(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMap) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"PolyMap({'; '.join(map(str, self.components))})"

    def degree(self) -> int:
        return map_degree(self)

    def substitute(self, inner: PolyMap) -> PolyMap:
        """Components of ``self`` with ``X_i -> inner[i]``.

        Geometrically this is ``self`` applied after ``inner``.
        """
        if inner.arity != self.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {inner.arity}")
        return PolyMap(compose(f, inner.components) for f in self.components)

    def is_identity(self) -> bool:
        return self == PolyMap.identity(self.arity)


def map_degree(F: PolyMap) -> int:
    degs = [c.degree() for c in F.components]
    if not degs or all(d == NEG_INF for d in degs):
        raise ValueError("map degree undefined for the all-zero map")
    return int(max(degs))
