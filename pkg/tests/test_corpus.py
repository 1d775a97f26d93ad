import pytest

from autinv import PolyMap, Polynomial, constant_unit, determinant, jacobian, verify_mutual_inverse
from autinv.corpus import (
    AffineUnit,
    TameRecipe,
    Triangular,
    format_recipe,
    parse_recipe,
    random_recipe,
    realize,
)

X, Y = Polynomial.variables(2)


def test_single_triangular_step():
    F, A = realize(TameRecipe(2, (Triangular(0, Y**2),)))
    assert F == PolyMap([X + Y**2, Y])
    assert A == PolyMap([X - Y**2, Y])


def test_empty_recipe():
    F, A = realize(TameRecipe(3))
    assert F == A == PolyMap.identity(3)


def test_two_steps():
    F, A = realize(TameRecipe(2, (Triangular(0, Y**2), Triangular(1, X**3))))
    assert F == PolyMap([X + Y**2, Y + (X + Y**2) ** 3])
    assert verify_mutual_inverse(F, A)


def test_affine_step():
    step = AffineUnit(((1, 2), (0, 1)), (1, -1))
    F, A = realize(TameRecipe(2, (step,)))
    assert F == PolyMap([X + 2 * Y + 1, Y - 1])
    # inverse matrix [[1, -2], [0, 1]], offset -M^-1 b = (-3, 1)
    assert A == PolyMap([X - 2 * Y - 3, Y + 1])


def test_affine_with_rational_inverse():
    step = AffineUnit(((2, 0), (0, 1)), (0, 0))
    F, A = realize(TameRecipe(2, (step, Triangular(1, X**2))))
    assert verify_mutual_inverse(F, A)
    assert A[0] == X / 2


def test_singular_affine_rejected():
    with pytest.raises(ValueError):
        realize(TameRecipe(2, (AffineUnit(((1, 2), (2, 4)), (0, 0)),)))


def test_h_may_not_involve_target():
    with pytest.raises(ValueError):
        realize(TameRecipe(2, (Triangular(0, X * Y),)))


def test_random_identity_pair():
    F, A = realize(random_recipe(2, 0, 3, seed=9))
    assert F == A == PolyMap.identity(2)


def test_determinism():
    a = random_recipe(3, 4, 3, seed=123)
    b = random_recipe(3, 4, 3, seed=123)
    assert a == b
    assert realize(a) == realize(b)
    assert random_recipe(3, 4, 3, seed=124) != a


def test_fixed_seed_case():
    F, A = realize(random_recipe(3, 4, 2, seed=42))
    assert verify_mutual_inverse(F, A)


def test_bad_arguments():
    with pytest.raises(ValueError):
        random_recipe(1, 2, 2, seed=0)
    with pytest.raises(ValueError):
        random_recipe(2, -1, 2, seed=0)


@pytest.mark.parametrize("seed", range(20))
def test_realized_pairs(seed):
    m = 2 + seed % 2
    recipe = random_recipe(m, 1 + seed % 4, 1 + seed % 3, seed)
    for step in recipe.steps:
        if isinstance(step, Triangular):
            assert step.h.degree_in(step.target) == 0
            assert len(step.h.terms()) <= 3 and step.h.degree() <= 1 + seed % 3
            assert all(c in {-3, -2, -1, 1, 2, 3} for c in step.h.terms().values())
    F, A = realize(recipe)
    assert verify_mutual_inverse(F, A)
    det = determinant(jacobian(F))
    assert det.is_constant() and constant_unit(det) is not None


def test_degree_budget():
    for seed in range(15):
        F, A = realize(random_recipe(2, 4, 3, seed, max_degree=6))
        assert F.degree() <= 6 and A.degree() <= 6


@pytest.mark.parametrize("seed", range(6))
def test_text_round_trip(seed):
    recipe = random_recipe(2 + seed % 2, 4, 3, seed, triangular_share=0.5)
    text = format_recipe(recipe)
    assert parse_recipe(text) == recipe
    assert format_recipe(parse_recipe(text)) == text


def test_parse_recipe_literal():
    text = "arity 2\nseed 5\n# comment\ntriangular 0 Y^2\naffine 1 1 0 1 0 2\n"
    r = parse_recipe(text)
    assert r == TameRecipe(2, (Triangular(0, Y**2), AffineUnit(((1, 1), (0, 1)), (0, 2))), 5)


@pytest.mark.parametrize(
    "text",
    [
        "triangular 0 Y\n",
        "arity 2\naffine 1 2 2 4 0 0\n",
        "arity 2\naffine 1 0 0\n",
        "arity 2\nrotate 1\n",
        "arity 2\ntriangular 1 Y\n",
        "seed 3\n",
    ],
)
def test_parse_recipe_errors(text):
    with pytest.raises(ValueError):
        parse_recipe(text)
