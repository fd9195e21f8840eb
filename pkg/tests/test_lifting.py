"""Tests for gluing, lifting, and the pinned Kummer lift engine."""

import random

import pytest

from flaglift.cohomology import (
    LiftConsistencyError,
    CohClass,
    complex_of,
    coordinate_extension,
    extension_class,
)
from flaglift.flags import Flag, is_kummer, is_wound_kummer
from flaglift.lifting import (
    baer,
    conjugate_lift_witness,
    glue,
    gluift,
    lift_h1_class,
    lift_kummer,
    lift_kummer_truncation,
    lift_rep,
    lift_wound_kummer,
    relator_defect,
    teichmuller_char_lift,
)
from flaglift.surface import SurfaceRep, RelatorError
from flaglift.zmod import LinearSolver, RingSpec, RMatrix


def flag_g1(ring, rows_x, rows_y):
    return Flag.from_rows(ring, 1, [rows_x, rows_y])


def corner_flag(ring, ax, ay):
    return flag_g1(ring, [[1, ax], [0, 1]], [[1, ay], [0, 1]])


def rand_kummer_flag(rng, p, r, d, genus):
    """Random upper-unipotent Kummer flag, or None if the search misses."""
    ring = RingSpec(p, r)
    for _ in range(4000):
        ent = [
            [
                [1 if i == j else (rng.randrange(ring.modulus) if j > i else 0) for j in range(d)]
                for i in range(d)
            ]
            for _ in range(2)
        ]
        x = RMatrix.from_rows(ring, ent[0])
        y = RMatrix.from_rows(ring, ent[1])
        mats = (x, y) if genus == 1 else (x, y, y, x)
        try:
            f = Flag(SurfaceRep(ring, genus, mats))
        except RelatorError:
            continue
        if is_kummer(f).ok:
            return f
    return None


def test_relator_defect_vanishes_on_valid_reps():
    ring = RingSpec(3, 2)
    f = flag_g1(ring, [[1, 2, 1], [0, 1, 4], [0, 0, 1]], [[1, 1, 0], [0, 1, 2], [0, 0, 1]])
    assert relator_defect(ring, 1, f.mats).to_lists() == [[0] * 3] * 3


def test_glue_obstruction_frozen_verdicts():
    ring = RingSpec(2, 1)
    res = glue(corner_flag(ring, 0, 1), corner_flag(ring, 1, 0))
    assert not res.glued and res.obstruction.vector == (1,)
    res = glue(corner_flag(ring, 1, 1), corner_flag(ring, 1, 1))
    assert res.glued
    out = res.flag
    assert out.truncate() == corner_flag(ring, 1, 1)
    assert out.quotient_by_first() == corner_flag(ring, 1, 1)
    ring3 = RingSpec(3, 1)
    res = glue(corner_flag(ring3, 0, 1), corner_flag(ring3, 1, 0))
    assert not res.glued and res.obstruction.vector == (2,)


def test_glue_rejects_overlap_mismatch():
    ring = RingSpec(2, 1)
    f3 = flag_g1(ring, [[1, 1, 0], [0, 1, 1], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        glue(f3, f3.truncate())  # dimension mismatch
    e = flag_g1(ring, [[1, 1, 0], [0, 1, 1], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    f4 = flag_g1(ring, [[1, 0, 0], [0, 1, 1], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        glue(e, f4)


def test_lift_rep_round_trip_and_characters():
    ring = RingSpec(3, 1)
    f = flag_g1(ring, [[2, 1], [0, 1]], [[2, 1], [0, 1]])
    res = lift_rep(f, teichmuller_char_lift(f, 2))
    assert res.lifted
    out = res.flag
    assert out.reduce_to(1) == f
    assert out.char(1) == (8, 8) and out.char(2) == (1, 1)
    res2 = lift_rep(f, [[2, 2], [1, 1]])  # least-residue character lift
    assert res2.lifted and res2.flag.char(1) == (2, 2)


def test_lift_rep_is_unobstructed_at_small_unipotent_sizes():
    # frozen fact: exhaustive search found no obstructed instance here,
    # matching the brute-force oracle's verdicts
    rng = random.Random(5)
    ring = RingSpec(2, 1)
    made = 0
    while made < 30:
        f = rand_kummer_flag(rng, 2, 1, 3, 1)
        res = lift_rep(f, [[1, 1]] * 3)
        assert res.lifted and res.flag.reduce_to(1) == f
        made += 1


def test_gluift_pins_both_parts():
    ring = RingSpec(2, 1)
    base = corner_flag(ring, 1, 0)
    up = RingSpec(2, 2)
    one = Flag.from_rows(up, 1, [[[1]], [[1]]])
    res = gluift(one, one, base)
    assert res.lifted
    out = res.flag
    assert out.reduce_to(1) == base
    assert out.truncate() == one and out.quotient_by_first() == one


def test_lift_wound_kummer_tower():
    ring = RingSpec(2, 1)
    f = flag_g1(ring, [[1, 1, 0], [0, 1, 1], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert is_wound_kummer(f)
    cur = f
    for r in (1, 2):
        res = lift_wound_kummer(cur)
        assert res.flag.reduce_to(r) == cur
        assert is_wound_kummer(res.flag)
        cur = res.flag


def test_lift_wound_kummer_adjustment_path():
    # first glue attempt is obstructed; the corner twist must repair it
    ring = RingSpec(3, 1)
    f = flag_g1(ring, [[1, 2, 0], [0, 1, 1], [0, 0, 1]], [[1, 1, 0], [0, 1, 2], [0, 0, 1]])
    assert is_wound_kummer(f)
    res = lift_wound_kummer(f)
    assert res.adjusted
    assert res.flag.reduce_to(1) == f and is_wound_kummer(res.flag)
    res2 = lift_wound_kummer(res.flag)
    assert not res2.adjusted and is_wound_kummer(res2.flag)


def test_lift_kummer_all_split_and_wound_shapes():
    ring = RingSpec(3, 1)
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    out = lift_kummer(flag_g1(ring, eye, eye))
    assert out.mats[0].to_lists() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    ring2 = RingSpec(2, 1)
    wound = flag_g1(ring2, [[1, 1, 0], [0, 1, 1], [0, 0, 1]], eye)
    out = lift_kummer(wound)
    assert out.reduce_to(1) == wound and is_kummer(out).ok


def test_lift_kummer_interior_split_shape():
    ring = RingSpec(3, 1)
    f = flag_g1(ring, [[1, 0, 1], [0, 1, 1], [0, 0, 1]], [[1, 0, 1], [0, 1, 2], [0, 0, 1]])
    out = lift_kummer(f)
    assert out.reduce_to(1) == f and is_kummer(out).ok
    out2 = lift_kummer(out)
    assert out2.reduce_to(2) == out and is_kummer(out2).ok


def test_lift_kummer_section_incompatible_instance():
    # pinned Kummer lifts exist but no equivariant section of the split
    # step is shared between the truncation lift and the quotient lift, so
    # any split-off-and-reassemble scheme dies here; the torsor engine must
    # handle it
    ring = RingSpec(3, 1)
    f = flag_g1(
        ring,
        [[1, 2, 1, 0], [0, 1, 0, 2], [0, 0, 1, 2], [0, 0, 0, 1]],
        [[1, 2, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]],
    )
    assert is_kummer(f).ok
    out = lift_kummer(f)
    assert out.reduce_to(1) == f and is_kummer(out).ok
    assert lift_kummer(f) == out, "engine output is deterministic"
    out2 = lift_kummer(out)
    assert out2.reduce_to(2) == out and is_kummer(out2).ok


def test_lift_kummer_pins_supplied_quotient_part():
    ring = RingSpec(2, 1)
    f = flag_g1(ring, [[1, 1, 0], [0, 1, 1], [0, 0, 1]], [[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    sharp = lift_kummer(f.quotient_by_first())
    out = lift_kummer(f, sharp)
    assert out.quotient_by_first() == sharp
    assert out.reduce_to(1) == f and is_kummer(out).ok


def test_lift_kummer_validates_inputs():
    ring = RingSpec(2, 2)
    bad = flag_g1(ring, [[1, 0, 2], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(ValueError, match="not Kummer"):
        lift_kummer(bad)
    ring1 = RingSpec(2, 1)
    f = flag_g1(ring1, [[1, 1], [0, 1]], [[1, 0], [0, 1]])
    with pytest.raises(ValueError, match="dimension"):
        lift_kummer(f, lift_kummer(f))
    nonreducing = Flag.from_rows(RingSpec(2, 2), 1, [[[1]], [[1]]])
    g = flag_g1(ring1, [[1, 1], [0, 1]], [[1, 1], [0, 1]])
    assert lift_kummer(g, nonreducing).quotient_by_first() == nonreducing


def test_lift_kummer_truncation_pins_truncation():
    ring = RingSpec(3, 1)
    f = flag_g1(ring, [[1, 1, 2], [0, 1, 1], [0, 0, 1]], [[1, 2, 2], [0, 1, 2], [0, 0, 1]])
    assert is_kummer(f).ok
    flat = lift_kummer_truncation(f.truncate())
    out = lift_kummer_truncation(f, flat)
    assert out.truncate() == flat
    assert out.reduce_to(1) == f and is_kummer(out).ok


def test_lift_kummer_modes_agree_through_duality():
    rng = random.Random(11)
    for (p, d) in ((2, 3), (3, 3), (2, 4)):
        f = rand_kummer_flag(rng, p, 1, d, 1)
        via_dual = lift_kummer(f.dual()).dual()
        direct = lift_kummer_truncation(f)
        assert via_dual == direct
        assert direct.reduce_to(1) == f and is_kummer(direct).ok


def test_lift_h1_class_zero_and_spanning_set():
    for (p, r, d) in ((2, 2, 2), (3, 2, 3), (2, 3, 3)):
        rng = random.Random(100 * p + 10 * r + d)
        f = rand_kummer_flag(rng, p, r, d, 1)
        bar = f.reduce_to(1)
        cx1 = complex_of(bar.as_module())
        zero = CohClass(cx1, 1, (0,) * (2 * d))
        assert lift_h1_class(f, zero).is_zero()
        cxr = complex_of(f.as_module())
        for vec, _ in LinearSolver(cx1.d1).kernel():
            up = lift_h1_class(f, CohClass(cx1, 1, vec))
            assert up.degree == 1
            assert cxr.d1.apply(up.vector) == (0,) * d, "output is a cocycle"
            assert tuple(v % p for v in up.vector) == vec


def test_baer_difference_splits_and_sum_adds():
    ring = RingSpec(2, 2)
    f = flag_g1(ring, [[1, 1], [0, 1]], [[1, 2], [0, 1]])
    e = coordinate_extension(f.as_module(), 1)
    diff = baer(e, e, -1)
    assert extension_class(diff).is_zero()
    twice = baer(e, e, 1)
    assert extension_class(twice) == extension_class(e) + extension_class(e)


def test_conjugate_lift_witness_frozen_pair():
    ring = RingSpec(2, 1)
    g = corner_flag(ring, 1, 0)
    o1 = lift_kummer(g)
    up = o1.ring
    t = RMatrix.from_rows(up, [[1, 2], [0, 1]])
    o2 = Flag(SurfaceRep(up, 1, tuple(t @ m @ t.inverse() for m in o1.mats)))
    w = conjugate_lift_witness(o1, o2, 1)
    assert w is not None
    # bump the second corner by 2: lands in a different conjugacy orbit
    mats = list(o1.mats)
    mats[1] = RMatrix.from_rows(up, [[1, 2], [0, 1]]) @ mats[1]
    o3 = Flag(SurfaceRep(up, 1, tuple(mats)))
    assert o3.reduce_to(1) == g
    assert conjugate_lift_witness(o1, o3, 1) is None
