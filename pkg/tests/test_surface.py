"""Tests for words, representations and modules of surface groups."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flaglift.surface import (
    GModule,
    Presentation,
    RelatorError,
    SurfaceRep,
    char_module,
    crossed_value,
    dual_module,
    free_reduce,
    hom_mat,
    hom_module,
    hom_vec,
    tensor_module,
    trivial_module,
    word_inverse,
    word_mul,
)
from flaglift.zmod import RingSpec, RMatrix, vec_add


def test_relator_shape():
    assert Presentation(1).relator() == (1, 2, -1, -2)
    assert Presentation(2).relator() == (1, 2, -1, -2, 3, 4, -3, -4)
    assert Presentation(2).gen_name(3) == "x2"
    assert Presentation(2).gen_index("y2") == 4


letters = st.lists(st.integers(min_value=-4, max_value=4).filter(bool), max_size=12)


@given(letters, letters)
def test_free_reduction_is_a_monoid_action(u, v):
    w = word_mul(u, v)
    assert w == free_reduce(list(u) + list(v))
    assert word_mul(w, word_inverse(w)) == ()


def test_relator_validation_rejects_bad_tuples():
    ring = RingSpec(2, 2)
    a = RMatrix.from_rows(ring, [[1, 1], [0, 1]])
    b = RMatrix.from_rows(ring, [[1, 0], [1, 1]])
    eye = RMatrix.identity(ring, 2)
    with pytest.raises(RelatorError):
        SurfaceRep(ring, 1, (a, b))  # [a,b] != 1 over Z/4
    SurfaceRep(ring, 1, (a, eye))  # commuting pair is fine
    with pytest.raises(ValueError):
        SurfaceRep(ring, 1, (a,))
    with pytest.raises(ValueError):
        GModule(ring, 1, (a, RMatrix.zeros(ring, 2, 2)))


def commuting_pair_rep(ring, rng, n=2):
    """A genus-1 representation from a random matrix and a power of it."""
    while True:
        m = RMatrix(ring, n, n, tuple(rng.randrange(ring.modulus) for _ in range(n * n)))
        if m.is_invertible():
            return SurfaceRep(ring, 1, (m, m @ m))


def test_evaluate_words():
    ring = RingSpec(3, 2)
    rng = random.Random(11)
    rep = commuting_pair_rep(ring, rng)
    a, b = rep.mats
    assert rep.evaluate((1, 2)) == a @ b
    assert rep.evaluate((-1,)) == a.inverse()
    assert rep.evaluate(rep.presentation.relator()).is_identity()


def test_tensor_dual_hom_actions():
    ring = RingSpec(3, 2)
    rng = random.Random(23)
    a = commuting_pair_rep(ring, rng).as_module()
    c = commuting_pair_rep(ring, rng, n=3).as_module()
    t = tensor_module(c, a)
    assert t.rank == 6
    d = dual_module(c)
    for g in range(2):
        assert d.acts[g] == c.inverses[g].transpose()
    h = hom_module(c, a)
    # hom action matches g.F = act_A(g) F act_C(g)^-1 under the flattening
    f = RMatrix(ring, a.rank, c.rank, tuple(rng.randrange(9) for _ in range(6)))
    for g in (1, 2, -1, -2):
        lhs = h.act(g).apply(hom_vec(f))
        rhs = hom_vec(a.act(g) @ f @ c.act(-g))
        assert lhs == rhs, f"hom action convention broken at generator {g}"
    assert hom_mat(ring, hom_vec(f), a.rank, c.rank) == f


def test_dual_of_dual_is_original():
    ring = RingSpec(2, 3)
    rng = random.Random(37)
    m = commuting_pair_rep(ring, rng, n=3).as_module()
    assert dual_module(dual_module(m)) == m


def test_char_module_values():
    ring = RingSpec(5, 2)
    chi = char_module(ring, 2, (2, 1, 24, 7))
    with pytest.raises(ValueError):
        char_module(ring, 1, (5, 1))  # non-unit value


def test_crossed_value_cocycle_rule():
    ring = RingSpec(2, 2)
    rng = random.Random(41)
    mod = commuting_pair_rep(ring, rng).as_module()
    vals = [
        tuple(rng.randrange(4) for _ in range(mod.rank)),
        tuple(rng.randrange(4) for _ in range(mod.rank)),
    ]
    for _ in range(20):
        u = free_reduce([rng.choice([1, 2, -1, -2]) for _ in range(rng.randrange(6))])
        v = free_reduce([rng.choice([1, 2, -1, -2]) for _ in range(rng.randrange(6))])
        lhs = crossed_value(mod, vals, word_mul(u, v))
        rhs = vec_add(
            ring, crossed_value(mod, vals, u), mod.act_word(u).apply(crossed_value(mod, vals, v))
        )
        assert lhs == rhs, "crossed extension must satisfy c(uv) = c(u) + u.c(v)"
    # inverse rule makes c(s s^-1) vanish
    assert crossed_value(mod, vals, (1, -1)) == mod.zero()


def test_trivial_module_crossed_value_is_exponent_sum():
    ring = RingSpec(3, 2)
    mod = trivial_module(ring, 1, 1)
    vals = [(1,), (3,)]
    assert crossed_value(mod, vals, (1, 1, 2, -1)) == ((1 + 1 + 3 - 1) % 9,)
