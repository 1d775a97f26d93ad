"""Tame automorphisms with known inverses, for testing and benchmarks.

A recipe is a sequence of elementary steps applied in order, each a map
``x -> step(x)``.  Triangular steps add a polynomial in the other variables
to one coordinate; affine steps are ``x -> M x + b`` with ``M`` invertible.

Text format, one step per line::

    arity 3
    seed 42
    triangular 0 X2^2 - 3*X3
    affine 1 2 0 0 1 0 0 0 1 0 -1 3

``triangular i`` uses a 0-based target index; ``affine`` lists the matrix
row by row followed by the translation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .poly import Polynomial, PolyMap, Rational, default_names, format_polynomial, map_degree, rational


@dataclass(frozen=True)
class Triangular:
    target: int
    h: Polynomial

    def validate(self, m: int) -> None:
        if not 0 <= self.target < m:
            raise ValueError(f"target {self.target} out of range for arity {m}")
        if self.h.arity != m:
            raise ValueError(f"h has arity {self.h.arity}, expected {m}")
        if self.h.degree_in(self.target) > 0:
            raise ValueError("h must not involve the target variable")

    def forward(self, m: int) -> PolyMap:
        xs = list(Polynomial.variables(m))
        xs[self.target] = xs[self.target] + self.h
        return PolyMap(xs)

    def backward(self, m: int) -> PolyMap:
        xs = list(Polynomial.variables(m))
        xs[self.target] = xs[self.target] - self.h
        return PolyMap(xs)


def _matrix_inverse(rows: Sequence[Sequence[Rational]]) -> list[list[Rational]] | None:
    n = len(rows)
    aug = [[rational(x) for x in r] + [rational(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [r[n:] for r in aug]


def _affine_map(matrix, translation, m: int) -> PolyMap:
    xs = Polynomial.variables(m)
    comps = []
    for row, b in zip(matrix, translation):
        p = Polynomial.constant(b, m)
        for a, x in zip(row, xs):
            if a:
                p = p + x.scale(a)
        comps.append(p)
    return PolyMap(comps)


@dataclass(frozen=True)
class AffineUnit:
    matrix: tuple[tuple[Rational, ...], ...]
    translation: tuple[Rational, ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(rational(x) for x in r) for r in self.matrix))
        object.__setattr__(self, "translation", tuple(rational(x) for x in self.translation))

    def validate(self, m: int) -> None:
        if len(self.matrix) != m or any(len(r) != m for r in self.matrix) or len(self.translation) != m:
            raise ValueError(f"affine step needs an {m}x{m} matrix and {m} offsets")
        if _matrix_inverse(self.matrix) is None:
            raise ValueError("affine matrix is singular")

    def forward(self, m: int) -> PolyMap:
        return _affine_map(self.matrix, self.translation, m)

    def backward(self, m: int) -> PolyMap:
        inv = _matrix_inverse(self.matrix)
        if inv is None:
            raise ValueError("affine matrix is singular")
        offset = [-sum((a * b for a, b in zip(row, self.translation)), rational(0)) for row in inv]
        return _affine_map(inv, offset, m)


ElementaryStep = Union[Triangular, AffineUnit]


@dataclass(frozen=True)
class TameRecipe:
    arity: int
    steps: tuple[ElementaryStep, ...] = ()
    seed: int = 0


def realize(recipe: TameRecipe) -> tuple[PolyMap, PolyMap]:
    """``(F, A)`` with ``F`` the steps applied in order and ``A`` its inverse."""
    m = recipe.arity
    F = A = PolyMap.identity(m)
    for step in recipe.steps:
        step.validate(m)
        F = step.forward(m).substitute(F)
        A = A.substitute(step.backward(m))
    return F, A


def _random_h(rng: random.Random, m: int, target: int, max_degree: int) -> Polynomial:
    others = [i for i in range(m) if i != target]
    terms = {}
    for k in range(rng.randint(1, 3)):
        # the first term pins the degree of h
        deg = max_degree if k == 0 else rng.randint(0, max_degree)
        exps = [0] * m
        for _ in range(deg):
            exps[rng.choice(others)] += 1
        terms[tuple(exps)] = rng.choice([-3, -2, -1, 1, 2, 3])
    h = Polynomial(m, terms)
    if h.is_zero():
        # only possible through coincident monomials cancelling
        return _random_h(rng, m, target, max_degree)
    return h


def _random_affine(rng: random.Random, m: int) -> AffineUnit:
    M = [[int(i == j) for j in range(m)] for i in range(m)]
    for _ in range(rng.randint(1, 2)):
        a, b = rng.sample(range(m), 2)
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        M[a] = [x + c * y for x, y in zip(M[a], M[b])]
    if rng.random() < 0.3:
        a, b = rng.sample(range(m), 2)
        M[a], M[b] = M[b], M[a]
    shift = [rng.randint(-3, 3) for _ in range(m)]
    return AffineUnit(tuple(map(tuple, M)), tuple(shift))


def random_recipe(
    m: int,
    steps: int,
    max_h_degree: int,
    seed: int,
    max_degree: int | None = None,
    triangular_share: float = 0.7,
) -> TameRecipe:
    """Deterministic pseudo-random recipe.

    With ``max_degree`` set, a triangular step that would push the degree of
    ``F`` or of its inverse above the budget is redrawn with a lower
    ``h`` degree (falling back to degree 1, which is always affine).
    """
    if m < 2:
        raise ValueError("need at least two variables")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = random.Random(seed)
    chosen: list[ElementaryStep] = []
    F = A = PolyMap.identity(m)
    for _ in range(steps):
        if rng.random() < triangular_share:
            target = rng.randrange(m)
            cap = max_h_degree
            while True:
                step = Triangular(target, _random_h(rng, m, target, cap))
                F2 = step.forward(m).substitute(F)
                A2 = A.substitute(step.backward(m))
                if max_degree is None or cap <= 1 or max(map_degree(F2), map_degree(A2)) <= max_degree:
                    break
                cap -= 1
        else:
            step = _random_affine(rng, m)
            F2 = step.forward(m).substitute(F)
            A2 = A.substitute(step.backward(m))
        chosen.append(step)
        F, A = F2, A2
    return TameRecipe(m, tuple(chosen), seed)


def format_recipe(recipe: TameRecipe, names: Sequence[str] | None = None) -> str:
    m = recipe.arity
    names = names or default_names(m)
    lines = [f"arity {m}", f"seed {recipe.seed}"]
    for step in recipe.steps:
        if isinstance(step, Triangular):
            lines.append(f"triangular {step.target} {format_polynomial(step.h, names)}")
        else:
            nums = [x for r in step.matrix for x in r] + list(step.translation)
            lines.append("affine " + " ".join(str(x) for x in nums))
    return "\n".join(lines) + "\n"


def parse_recipe(text: str) -> TameRecipe:
    from .parsing import parse_polynomial, variable_table

    m = None
    seed = 0
    steps: list[ElementaryStep] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "arity":
            m = int(rest)
            continue
        if word == "seed":
            seed = int(rest)
            continue
        if m is None:
            raise ValueError(f"line {lineno}: 'arity' must come before any step")
        if word == "triangular":
            idx, _, poly_text = rest.partition(" ")
            step = Triangular(int(idx), parse_polynomial(poly_text, variable_table(m)))
        elif word == "affine":
            nums = [Fraction(tok) for tok in rest.split()]
            if len(nums) != m * m + m:
                raise ValueError(f"line {lineno}: affine step needs {m * m + m} numbers, got {len(nums)}")
            step = AffineUnit(
                tuple(tuple(nums[i * m:(i + 1) * m]) for i in range(m)), tuple(nums[m * m:])
            )
        else:
            raise ValueError(f"line {lineno}: unknown step kind {word!r}")
        step.validate(m)
        steps.append(step)
    if m is None:
        raise ValueError("recipe has no 'arity' line")
    return TameRecipe(m, tuple(steps), seed)
