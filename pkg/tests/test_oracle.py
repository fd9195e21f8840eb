"""Tests for the brute-force baselines and the seeded instance generator."""

import itertools
import random

import pytest

from flaglift.cohomology import complex_of, h_groups
from flaglift.flags import Flag, is_kummer, is_wound_kummer
from flaglift.lifting import glue, least_char_lift, lift_rep
from flaglift.oracle import (
    BudgetExceededError,
    SearchBudget,
    brute_coboundaries,
    brute_cocycles,
    brute_glue,
    brute_h1,
    brute_lift,
    gen_random_flag,
)
from flaglift.surface import GModule, RelatorError, SurfaceRep, char_module, trivial_module
from flaglift.zmod import LinearSolver, RingSpec, RMatrix


def all_unipotent_flags_d3_p2():
    ring = RingSpec(2, 1)

    def uni(t):
        a, b, c = t
        return [[1, a, b], [0, 1, c], [0, 0, 1]]

    out = []
    for ex in itertools.product(range(2), repeat=3):
        for ey in itertools.product(range(2), repeat=3):
            try:
                out.append(Flag.from_rows(ring, 1, [uni(ex), uni(ey)]))
            except (RelatorError, ValueError):
                continue
    return out


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(max_count=0)
    with pytest.raises(ValueError):
        SearchBudget(time_limit=0)
    tiny = SearchBudget(max_count=3)
    with pytest.raises(BudgetExceededError):
        brute_cocycles(trivial_module(RingSpec(2, 1), 1, 2), tiny)


def test_brute_h1_frozen_trivial_example():
    # rank-1 trivial F_2 module over genus 1: four classes, two independent lines
    shape = brute_h1(trivial_module(RingSpec(2, 1), 1, 1))
    assert shape.invariants == (1, 1)
    assert len(shape.reps) == 2


def test_brute_cocycle_count_matches_engine_kernel():
    rng = random.Random(3)
    for _ in range(10):
        p = rng.choice([2, 3])
        r = rng.choice([1, 2])
        ring = RingSpec(p, r)
        vals = [rng.choice([v for v in range(1, p**r) if v % p]) for _ in range(2)]
        mod = char_module(ring, 1, vals)
        z = brute_cocycles(mod)
        assert z.shape[0] == complex_of(mod).d1_solver.kernel_size()


def test_brute_h1_matches_engine_on_random_modules():
    rng = random.Random(17)
    checked = 0
    while checked < 25:
        p = rng.choice([2, 3])
        r = rng.choice([1, 2])
        genus = rng.choice([1, 2])
        rank = rng.choice([1, 2])
        ring = RingSpec(p, r)
        if (p**r) ** (2 * genus * rank) > (1 << 18):
            continue

        def rnd_tri():
            ent = [[0] * rank for _ in range(rank)]
            for i in range(rank):
                ent[i][i] = rng.choice([v for v in range(1, p**r) if v % p])
                for j in range(i + 1, rank):
                    ent[i][j] = rng.randrange(p**r)
            return RMatrix.from_rows(ring, ent)

        x = rnd_tri()
        if genus == 1:
            mod = GModule(ring, 1, (x, x @ x))  # powers commute
        else:
            y = rnd_tri()
            mod = GModule(ring, 2, (x, y, y, x))
        brute = brute_h1(mod)
        engine = h_groups(mod).h1
        assert brute.invariants == engine.invariants
        cx = complex_of(mod)
        for rep in brute.reps:
            assert cx.d1.apply(rep) == (0,) * cx.d1.rows
        checked += 1


def test_brute_lift_agrees_with_engine_exhaustively():
    flags = all_unipotent_flags_d3_p2()
    assert len(flags) == 40  # frozen: commuting unipotent pairs at d=3, p=2
    for f in flags:
        sols = brute_lift(f)
        out = lift_rep(f, least_char_lift(f, 2))
        assert out.lifted == (len(sols) > 0)
        if out.lifted:
            assert any(out.flag == s for s in sols)


def test_brute_lift_rejects_bad_inputs():
    ring = RingSpec(2, 2)
    f = Flag.from_rows(ring, 1, [[[1, 1], [0, 1]], [[1, 0], [0, 1]]])
    with pytest.raises(ValueError):
        brute_lift(f)  # not a mod-p flag
    ring1 = RingSpec(3, 1)
    g = Flag.from_rows(ring1, 1, [[[2, 0], [0, 1]], [[1, 0], [0, 1]]])
    with pytest.raises(ValueError):
        brute_lift(g)  # nontrivial diagonal


def test_brute_glue_agrees_with_engine():
    ring = RingSpec(2, 1)
    d2 = [
        Flag.from_rows(ring, 1, [[[1, ax], [0, 1]], [[1, ay], [0, 1]]])
        for ax in range(2)
        for ay in range(2)
    ]
    glued = obstructed = 0
    for e in d2:
        for f in d2:
            sols = brute_glue(e, f)
            out = glue(e, f)
            assert out.glued == (len(sols) > 0)
            if out.glued:
                assert any(out.flag == s for s in sols)
                glued += 1
            else:
                obstructed += 1
    assert glued == 10 and obstructed == 6  # frozen verdict counts


def test_brute_glue_rejects_overlap_mismatch():
    ring = RingSpec(2, 1)
    e = Flag.from_rows(ring, 1, [[[1, 1, 0], [0, 1, 1], [0, 0, 1]], [[1] * 1 + [0, 0], [0, 1, 0], [0, 0, 1]]])
    f = Flag.from_rows(ring, 1, [[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    if e.quotient_by_first() != f.truncate():
        with pytest.raises(ValueError):
            brute_glue(e, f)


def test_gen_random_flag_deterministic_per_seed():
    a = gen_random_flag(3, 2, 3, 1, kind="kummer", seed=5)
    b = gen_random_flag(3, 2, 3, 1, kind="kummer", seed=5)
    c = gen_random_flag(3, 2, 3, 1, kind="kummer", seed=6)
    assert a == b
    assert is_kummer(a).ok
    assert c != a or c == a  # seed 6 must at least be reproducible
    assert c == gen_random_flag(3, 2, 3, 1, kind="kummer", seed=6)


def test_gen_random_flag_kind_postconditions():
    for (p, r, d, genus) in [(2, 1, 3, 1), (3, 2, 3, 1), (2, 2, 3, 2), (3, 1, 4, 1)]:
        any_f = gen_random_flag(p, r, d, genus, kind="any", seed=1)
        assert (any_f.ring.p, any_f.ring.r, any_f.d, any_f.genus) == (p, r, d, genus)
        kf = gen_random_flag(p, r, d, genus, kind="kummer", seed=1)
        assert is_kummer(kf).ok
        wf = gen_random_flag(p, r, d, genus, kind="wound-kummer", seed=1)
        assert is_wound_kummer(wf)


def test_gen_random_flag_rejects_unknown_kind():
    with pytest.raises(ValueError):
        gen_random_flag(2, 1, 2, 1, kind="mystery", seed=0)


def test_coboundaries_form_subgroup_of_cocycles():
    mod = char_module(RingSpec(3, 1), 1, [2, 1])
    z = brute_cocycles(mod)
    b = brute_coboundaries(mod)
    zset = {tuple(int(v) for v in row) for row in z}
    for row in b:
        assert tuple(int(v) for v in row) in zset
