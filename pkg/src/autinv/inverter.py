"""Deciding invertibility of polynomial maps and computing the inverse.

The inverse of ``F`` is read off from the unique power-series solution
``U(t)`` of the deformation system

    F_i(U_1(t), ..., U_m(t)) = t*X_i + (1 - t)*F_i(P),    U_i(0) = P_i

(``P`` is the identity map unless given).  With ``P`` the identity, if ``F``
is an automorphism then ``U`` is a polynomial in ``t`` of degree at most
``deg(F)^(m-1)`` and ``U(1)`` is the inverse.  Solving proceeds one order
of ``t`` at a time: the new coefficient tuple enters the ``t^n``
coefficient linearly through the Jacobian of ``F`` at ``P``, so each order
is a single matrix-vector product with the precomputed adjugate inverse.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from typing import Union

from gmpy2 import mpq

from .linalg import adjugate_inverse, constant_unit, determinant, jacobian, mat_vec_apply
from .poly import NEG_INF, Polynomial, PolyMap, compose, evaluate, map_degree, sum_of_products
from .series import SeriesVec, TruncSeries, eval_at_one

log = logging.getLogger(__name__)

#: numerators and denominators of random check points are bounded by this.
PRECHECK_BOUND = 10**6
PRECHECK_POINTS = 3


@dataclass(frozen=True)
class SolveConfig:
    max_order: int = 64
    eager_check: bool = False
    random_precheck: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be at least 1")


@dataclass(frozen=True)
class Witness:
    """A composition identity that fails.

    ``identity`` is ``"F(A)"`` for ``F_i(A) = X_i`` or ``"A(F)"`` for
    ``A_i(F) = X_i``; ``leading_term`` is the highest term of
    ``lhs - X_i``.
    """

    identity: str
    index: int
    leading_term: Polynomial


@dataclass(frozen=True)
class Invertible:
    inverse: PolyMap
    series: SeriesVec


@dataclass(frozen=True)
class NotInvertibleJacobian:
    determinant: Polynomial


@dataclass(frozen=True)
class NotInvertibleComposition:
    """The candidate built from orders ``1..order`` is not an inverse.

    This is a proof of non-invertibility only when ``order`` reached the
    degree bound; a user-capped run can land here with ``order < bound``.
    """

    witness: Witness
    order: int
    bound: int


@dataclass(frozen=True)
class BoundExceeded:
    required: int
    cap: int


Verdict = Union[Invertible, NotInvertibleJacobian, NotInvertibleComposition, BoundExceeded]


def degree_bound(F: PolyMap) -> int:
    """``deg(F) ** (m - 1)``, the largest possible degree of the inverse."""
    n = map_degree(F)
    if n < 1:
        raise ValueError("degree bound needs a map of degree at least 1")
    return n ** (F.arity - 1)


def _unit_jacobian(F: PolyMap):
    J = jacobian(F)
    det = determinant(J)
    return J, det, constant_unit(det)


class _SeriesSolver:
    """Reveals the solution one t-order at a time.

    Every monomial of every ``F_i`` is a node in a product DAG over the
    unknown series ``S_1..S_m`` (powers first, then shared prefixes across
    variables), and each node keeps its t-coefficients.  At order ``n`` the
    nodes are first evaluated with ``S_j[n] = 0``; after the linear solve
    fixes ``S_j[n]`` the correction is propagated exactly, since for a
    product ``C = A*B`` only ``A[0]*B[n] + A[n]*B[0]`` involves order ``n``.
    """

    def __init__(self, F: PolyMap, init: PolyMap | None = None):
        m = F.arity
        if init is None:
            init = PolyMap.identity(m)
        elif init.arity != m:
            raise ValueError(f"initial map has arity {init.arity}, expected {m}")
        J, det, unit = _unit_jacobian(F)
        if unit is None:
            raise ValueError(f"Jacobian determinant {det} is not a nonzero constant")
        at_init = J if init.is_identity() else J.substitute(init.components)
        self.solve_matrix = adjugate_inverse(at_init, unit)
        self.F = F
        self.init = init
        self.m = m
        self.arity = m
        self._zero = Polynomial.zero(m)
        self.order = 0

        self.coeffs: list[list[Polynomial]] = [[p] for p in init.components]
        self.muls: list[tuple[int, int, int]] = []
        self._powers: dict = {}
        self._monos: dict = {}
        self.targets = []
        for f in F.components:
            lin = []
            for exps, c in f.terms().items():
                node = self._monomial(exps)
                if node is not None:
                    lin.append((node, c))
            self.targets.append(lin)
        F_init = F.components if init.is_identity() else tuple(compose(f, init.components) for f in F.components)
        xs = Polynomial.variables(m)
        self.first_rhs = [x - f for x, f in zip(xs, F_init)]

    # -- DAG construction ---------------------------------------------

    def _new_mul(self, a: int, b: int) -> int:
        node = len(self.coeffs)
        self.coeffs.append([self.coeffs[a][0] * self.coeffs[b][0]])
        self.muls.append((node, a, b))
        return node

    def _power(self, j: int, e: int) -> int:
        if e == 1:
            return j
        node = self._powers.get((j, e))
        if node is None:
            node = self._new_mul(self._power(j, e - 1), j)
            self._powers[(j, e)] = node
        return node

    def _monomial(self, exps: tuple[int, ...]) -> int | None:
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        if not exps:
            return None
        node = self._monos.get(exps)
        if node is None:
            head = self._monomial(exps[:-1])
            pw = self._power(len(exps) - 1, exps[-1])
            node = pw if head is None else self._new_mul(head, pw)
            self._monos[exps] = node
        return node

    # -- stepping -----------------------------------------------------

    def step(self) -> tuple[Polynomial, ...]:
        """Solve for the next order; returns its coefficient tuple."""
        n = self.order + 1
        zero = self._zero
        coeffs = self.coeffs
        for j in range(self.m):
            coeffs[j].append(zero)
        for node, a, b in self.muls:
            A, B = coeffs[a], coeffs[b]
            coeffs[node].append(sum_of_products(((A[i], B[n - i]) for i in range(n + 1)), self.arity))

        residual = []
        for i, lin in enumerate(self.targets):
            terms = {}
            get = terms.get
            for node, c in lin:
                for k, v in coeffs[node][n]._terms.items():
                    terms[k] = get(k, 0) + c * v
            provisional = Polynomial._raw(self.arity, {k: v for k, v in terms.items() if v})
            target = self.first_rhs[i] if n == 1 else zero
            residual.append(target - provisional)
        new = mat_vec_apply(self.solve_matrix, residual)

        delta: dict[int, Polynomial] = {}
        for j, u in enumerate(new):
            coeffs[j][n] = u
            if u._terms:
                delta[j] = u
        for node, a, b in self.muls:
            da, db = delta.get(a), delta.get(b)
            if da is None and db is None:
                continue
            d = zero
            if db is not None:
                d = d + coeffs[a][0] * db
            if da is not None:
                d = d + da * coeffs[b][0]
            if d._terms:
                coeffs[node][n] = coeffs[node][n] + d
                delta[node] = d
        self.order = n
        return tuple(new)

    def series(self) -> SeriesVec:
        return SeriesVec(TruncSeries(self.coeffs[j], self.arity) for j in range(self.m))


def solve_series(F: PolyMap, N: int, init: PolyMap | None = None) -> SeriesVec:
    """The unique ``U`` with ``U(0) = init`` solving the deformation system
    modulo ``t^(N+1)``."""
    if N < 0:
        raise ValueError("order must be non-negative")
    solver = _SeriesSolver(F, init)
    for _ in range(N):
        solver.step()
    return solver.series()


def candidate_inverse(S: SeriesVec) -> PolyMap:
    """``tau(X_i) = U_i(1)``."""
    return PolyMap(eval_at_one(s) for s in S.components)


def _random_point(rng: random.Random, m: int) -> list:
    return [
        mpq(rng.randint(-PRECHECK_BOUND, PRECHECK_BOUND), rng.randint(1, PRECHECK_BOUND))
        for _ in range(m)
    ]


def _map_at(F: PolyMap, point) -> list:
    return [evaluate(f, point) for f in F.components]


def _leading_term(p: Polynomial) -> Polynomial:
    exps, c = p.sorted_terms()[-1]
    return Polynomial(p.arity, {exps: c})


def find_identity_failure(
    F: PolyMap, A: PolyMap, precheck: bool = True, rng: random.Random | None = None
) -> Witness | None:
    """First failing identity among ``F_i(A) = X_i`` and ``A_i(F) = X_i``."""
    if F.arity != A.arity:
        raise ValueError(f"arity mismatch: {F.arity} vs {A.arity}")
    m = F.arity
    xs = Polynomial.variables(m)
    sides = (("F(A)", F, A), ("A(F)", A, F))

    def exact(side: str, outer: PolyMap, inner: PolyMap, i: int) -> Witness | None:
        residual = compose(outer[i], inner.components) - xs[i]
        if residual.is_zero():
            return None
        return Witness(side, i, _leading_term(residual))

    if precheck:
        rng = rng or random.Random(0)
        for _ in range(PRECHECK_POINTS):
            a = _random_point(rng, m)
            for side, outer, inner in sides:
                got = _map_at(outer, _map_at(inner, a))
                for i in range(m):
                    if got[i] != a[i]:
                        w = exact(side, outer, inner, i)
                        if w is None:
                            raise AssertionError("evaluation and composition disagree")
                        return w
    for side, outer, inner in sides:
        for i in range(m):
            w = exact(side, outer, inner, i)
            if w is not None:
                return w
    return None


def verify_mutual_inverse(
    F: PolyMap, A: PolyMap, precheck: bool = True, rng: random.Random | None = None
) -> bool:
    """True iff ``F(A) = A(F) = id`` as exact polynomial identities."""
    return find_identity_failure(F, A, precheck, rng) is None


def decide_invertible(F: PolyMap, cfg: SolveConfig | None = None) -> Verdict:
    cfg = cfg or SolveConfig()
    rng = random.Random(cfg.seed)
    _, det, unit = _unit_jacobian(F)
    if unit is None or all(c.degree() in (0, NEG_INF) for c in F.components):
        return NotInvertibleJacobian(det)
    N = degree_bound(F)
    log.debug("degree bound %d for map of degree %d", N, map_degree(F))
    if N > cfg.max_order and not cfg.eager_check:
        return BoundExceeded(N, cfg.max_order)

    solver = _SeriesSolver(F)
    last = min(N, cfg.max_order)
    if cfg.eager_check:
        partial = list(Polynomial.variables(F.arity))
        for n in range(1, last + 1):
            for j, u in enumerate(solver.step()):
                partial[j] = partial[j] + u
            tau = PolyMap(partial)
            if verify_mutual_inverse(F, tau, cfg.random_precheck, rng):
                log.debug("eager check succeeded at order %d", n)
                return Invertible(tau, solver.series())
        tau = PolyMap(partial)
    else:
        for _ in range(last):
            solver.step()
        tau = candidate_inverse(solver.series())
    witness = find_identity_failure(F, tau, cfg.random_precheck, rng)
    if witness is None:
        return Invertible(tau, solver.series())
    return NotInvertibleComposition(witness, last, N)


# -- the two-variable derivative recursion, kept as an independent oracle ----


def _tmul(a: list, b: list, length: int, zero: Polynomial) -> list:
    out = []
    for k in range(length):
        acc = zero
        for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            x, y = a[i], b[k - i]
            if x._terms and y._terms:
                acc = acc + x * y
        out.append(acc)
    return out


def _tadd(a: list, b: list) -> list:
    return [x + y for x, y in zip(a, b)]


def _tderiv(a: list, length: int, zero: Polynomial) -> list:
    out = [a[j].scale(j) if j < len(a) else zero for j in range(1, length + 1)]
    return out


def higher_derivative_matrix(F: PolyMap, i: int) -> list[list[Polynomial]]:
    """Rows ``(d^i F_r / dX^(i-j) dY^j)`` for ``j = 0..i``; 2 x (i+1)."""
    if F.arity != 2:
        raise ValueError("defined for two variables only")
    rows = []
    for f in F.components:
        row = []
        for j in range(i + 1):
            p = f
            for _ in range(i - j):
                p = p.derivative(0)
            for _ in range(j):
                p = p.derivative(1)
            row.append(p)
        rows.append(row)
    return rows


def derivative_recursion_m2(F: PolyMap, N: int) -> SeriesVec:
    """Same result as ``solve_series(F, N)`` for two variables, computed by
    differentiating the system ``n`` times.

    The n-th derivative at ``t = 0`` reads

        D_1 Z_{1,n}(0) + sum_{i=2..n} D_i Z_{i,n}(0) = 0      (n >= 2)
        D_1 Z_{1,1}(0) = (X - F, Y - G)

    where ``D_i`` holds the i-th order partials and ``Z_{i,n}`` follows

        Z_{i,n} = U' [Z_{i-1,n-1}; 0] + V' [0; Z_{i-1,n-1}] + d/dt Z_{i,n-1}

    with ``Z_{i,n} = 0`` outside ``1 <= i <= n``.  ``Z_{1,n}(0)`` holds the
    n-th derivatives ``(U^(n)(0), V^(n)(0))``, i.e. ``n!`` times the series
    coefficients.
    """
    if F.arity != 2:
        raise ValueError(f"derivative recursion needs arity 2, got {F.arity}")
    J, det, unit = _unit_jacobian(F)
    if unit is None:
        raise ValueError(f"Jacobian determinant {det} is not a nonzero constant")
    d1_inv = adjugate_inverse(J, unit)
    zero = Polynomial.zero(2)
    X, Y = Polynomial.variables(2)
    D = {i: higher_derivative_matrix(F, i) for i in range(2, N + 1)}
    U, V = [X], [Y]

    for n in range(1, N + 1):
        if n == 1:
            rhs = [X - F[0], Y - F[1]]
        else:
            Up = _tderiv(U, n - 1, zero)
            Vp = _tderiv(V, n - 1, zero)
            # Z[(i, k)] needs t-coefficients 0..n-k only
            Z = {(1, 1): [Up, Vp]}
            for k in range(2, n + 1):
                length = n - k + 1
                for i in range(1, k + 1):
                    entries = []
                    prev = Z.get((i - 1, k - 1))
                    same = Z.get((i, k - 1))
                    for r in range(i + 1):
                        acc = [zero] * length
                        if prev is not None:
                            if r <= i - 1:
                                acc = _tadd(acc, _tmul(Up, prev[r], length, zero))
                            if r >= 1:
                                acc = _tadd(acc, _tmul(Vp, prev[r - 1], length, zero))
                        if same is not None:
                            acc = _tadd(acc, _tderiv(same[r], length, zero))
                        entries.append(acc)
                    Z[(i, k)] = entries
            rhs = [zero, zero]
            for i in range(2, n + 1):
                at0 = [entry[0] for entry in Z[(i, n)]]
                for r in range(2):
                    for coef, z in zip(D[i][r], at0):
                        if coef._terms and z._terms:
                            rhs[r] = rhs[r] - coef * z
        z = mat_vec_apply(d1_inv, rhs)
        scale = mpq(1, math.factorial(n))
        U.append(z[0].scale(scale))
        V.append(z[1].scale(scale))
    return SeriesVec([TruncSeries(U, 2), TruncSeries(V, 2)])
