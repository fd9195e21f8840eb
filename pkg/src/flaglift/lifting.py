"""Gluing and lifting engines for triangular flags.

All obstructions are computed from relator defects of explicitly assembled
candidate matrices and live in H^2 of small coefficient modules:

* ``glue``: extend two overlapping d-flags to a (d+1)-flag (same level),
* ``lift_rep``: lift a flag from Z/p^r to Z/p^(r+1) with prescribed
  diagonal characters, obstruction in the strictly-upper endomorphisms,
* ``gluift``: glue two already-lifted flags over a base one level down,
  obstruction in the rank-1 corner module mod p,
* ``lift_wound_kummer``: obstruction-free lifting of wound flags with
  Teichmuller characters, with the cup-solving corner adjustment,
* ``lift_kummer``: obstruction-free lifting of Kummer flags, pinning the
  quotient (extend-quotient) or the truncation (extend-truncation) to a
  supplied lift, exactly,
* ``lift_h1_class``: lift a mod-p degree-1 class through the tower of a
  Kummer flag,
* ``baer``: Baer sum / difference of module extensions,
* ``conjugate_lift_witness``: decide when two lifts of the same flag are
  conjugate by a matrix congruent to 1 mod p^r.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .cohomology import (
    CohClass,
    ExtensionData,
    LiftConsistencyError,
    complex_of,
    coordinate_extension,
    extension_class,
    solve_cup,
    split_section,
    stack,
    unstack,
)
from .flags import Flag, is_kummer, is_wound_kummer, segment_extension_splits
from .surface import (
    GModule,
    Presentation,
    SurfaceRep,
    char_module,
    dual_module,
    hom_mat,
    hom_module,
)
from .zmod import LinearSolver, RingSpec, RMatrix, span_coefficients, teichmuller


# ---------------------------------------------------------------------------
# relator defects of raw matrix tuples


def relator_defect(ring: RingSpec, genus: int, mats: Sequence[RMatrix]) -> RMatrix:
    """Product of the candidate matrices along the relator, minus identity."""
    n = mats[0].rows
    inv = [m.inverse() for m in mats]
    acc = RMatrix.identity(ring, n)
    for t in Presentation(genus).relator():
        acc = acc @ (mats[t - 1] if t > 0 else inv[-t - 1])
    return acc - RMatrix.identity(ring, n)


def _corner_module(ring: RingSpec, genus: int, chi_top: Sequence[int], chi_bot: Sequence[int]) -> GModule:
    """Rank-1 module with action chi_top * chi_bot^-1."""
    vals = tuple((a * ring.inv(b)) % ring.modulus for a, b in zip(chi_top, chi_bot))
    return char_module(ring, genus, vals)


def glued_mats(e: Flag, f: Flag, top: Sequence[int]) -> list[RMatrix]:
    """(d+1)-sized candidates: e on the leading block, f on the trailing one.

    Entry (0, d) of generator g is top[g]; the overlap of the two blocks is
    the caller's responsibility (checked by the engines).
    """
    ring = e.ring
    d = e.d
    out = []
    for g in range(2 * e.genus):
        em, fm = e.mats[g], f.mats[g]
        rows = []
        for i in range(d + 1):
            row = []
            for j in range(d + 1):
                if i <= d - 1 and j <= d - 1:
                    row.append(em.entry(i, j))
                elif i == 0:
                    row.append(top[g] % ring.modulus)
                elif j == d:
                    row.append(fm.entry(i - 1, d - 1))
                else:
                    row.append(0)
            rows.append(row)
        out.append(RMatrix.from_rows(ring, rows))
    return out


# ---------------------------------------------------------------------------
# glue at a fixed level


@dataclass(frozen=True)
class GlueOutcome:
    """Either a glued flag with identity overlap witness, or an obstruction."""

    flag: Flag | None
    obstruction: CohClass | None

    @property
    def glued(self) -> bool:
        return self.flag is not None


def glue(e: Flag, f: Flag) -> GlueOutcome:
    """Glue d-flags overlapping in dimension d-1 into a (d+1)-flag.

    Precondition: e.quotient_by_first() == f.truncate() as matrices.  The
    obstruction is the class of the zero-top candidate's relator corner in
    H^2 of the rank-1 module chi_1(e) * chi_last(f)^-1.
    """
    ring = e.ring
    if (f.ring, f.genus, f.d) != (ring, e.genus, e.d):
        raise ValueError("glue parts must share ring, genus and dimension")
    if e.quotient_by_first() != f.truncate():
        raise ValueError("overlap mismatch: quotient of e differs from truncation of f")
    d = e.d
    n_gens = 2 * e.genus
    chi_bot = f.char(d) if d else tuple([1] * n_gens)
    corner = _corner_module(ring, e.genus, e.char(1), chi_bot)
    cx = complex_of(corner)
    cand = glued_mats(e, f, (0,) * n_gens)
    defect = relator_defect(ring, e.genus, cand)
    for i in range(d + 1):
        for j in range(d + 1):
            if (i, j) != (0, d) and defect.entry(i, j):
                raise AssertionError("glue defect concentrated off the corner")
    delta = defect.entry(0, d)
    sol = cx.d1_solver.solve((-delta % ring.modulus,))
    if sol is None:
        return GlueOutcome(None, CohClass(cx, 2, (delta,)))
    top = tuple((sol[g] * chi_bot[g]) % ring.modulus for g in range(n_gens))
    flag = Flag(SurfaceRep(ring, e.genus, tuple(glued_mats(e, f, top))))
    if flag.truncate() != e or flag.quotient_by_first() != f:
        raise AssertionError("glued flag must contain both parts verbatim")
    return GlueOutcome(flag, None)


# ---------------------------------------------------------------------------
# one-level lift of a full flag


def upper_pairs(d: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(d) for j in range(i + 1, d)]


def strict_upper_module(bar: Flag) -> GModule:
    """Strictly upper endomorphisms mod p under conjugation by the flag."""
    ring = bar.ring
    if ring.r != 1:
        raise ValueError("the endomorphism module is built mod p")
    d = bar.d
    pairs = upper_pairs(d)
    acts = []
    for g in range(2 * bar.genus):
        m = bar.mats[g]
        minv = bar.rep.inverses[g]
        cols = []
        for (i, j) in pairs:
            # conjugate E_ij and read off the strictly upper coordinates
            img = [(m.entry(k, i) * minv.entry(j, l)) % ring.modulus for (k, l) in pairs]
            cols.append(img)
        acts.append(RMatrix.from_rows(ring, cols).transpose())
    return GModule(ring, bar.genus, tuple(acts))


def pairs_to_vec(m: RMatrix, pairs: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    return tuple(m.entry(i, j) for (i, j) in pairs)


def vec_to_pairs(ring: RingSpec, vec: Sequence[int], d: int, pairs: Sequence[tuple[int, int]]) -> RMatrix:
    ent = [[0] * d for _ in range(d)]
    for (i, j), v in zip(pairs, vec):
        ent[i][j] = v % ring.modulus
    return RMatrix.from_rows(ring, ent)


@dataclass(frozen=True)
class RepLiftOutcome:
    flag: Flag | None
    obstruction: CohClass | None  # degree 2 in the strictly-upper module mod p

    @property
    def lifted(self) -> bool:
        return self.flag is not None


def teichmuller_char_lift(f: Flag, target_r: int) -> tuple[tuple[int, ...], ...]:
    """Teichmuller lifts of the mod-p characters, one tuple per piece."""
    ring = RingSpec(f.ring.p, target_r)
    return tuple(
        tuple(teichmuller(ring, v % f.ring.p) for v in f.char(i)) for i in range(1, f.d + 1)
    )


def least_char_lift(f: Flag, target_r: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(v for v in f.char(i)) for i in range(1, f.d + 1))


def lift_rep(f: Flag, chars_next: Sequence[Sequence[int]]) -> RepLiftOutcome:
    """Lift a flag one level, keeping off-diagonal least residues as seed.

    ``chars_next`` prescribes the diagonal mod p^(r+1), one value per
    generator for each piece; each must reduce to the current character.
    The obstruction is the class of (relator defect)/p^r in H^2 of the
    strictly-upper endomorphism module mod p; when it vanishes the
    candidate is corrected by I + p^r N factors on the left.
    """
    ring = f.ring
    up = RingSpec(ring.p, ring.r + 1)
    d = f.d
    n_gens = 2 * f.genus
    if len(chars_next) != d or any(len(c) != n_gens for c in chars_next):
        raise ValueError("need one character value per piece per generator")
    for i in range(d):
        for g in range(n_gens):
            if chars_next[i][g] % ring.modulus != f.char(i + 1)[g]:
                raise ValueError(f"character lift at piece {i + 1} does not reduce correctly")
            if chars_next[i][g] % up.p == 0:
                raise ValueError("character values must be units")
    cand = []
    for g in range(n_gens):
        rows = [
            [
                (chars_next[i][g] if i == j else f.mats[g].entry(i, j)) % up.modulus
                for j in range(d)
            ]
            for i in range(d)
        ]
        cand.append(RMatrix.from_rows(up, rows))
    defect = relator_defect(up, f.genus, cand)
    pr = ring.modulus
    for i in range(d):
        for j in range(d):
            v = defect.entry(i, j)
            if v % pr:
                raise AssertionError("one-level lift defect must vanish mod p^r")
            if j <= i and v:
                raise AssertionError("defect must be strictly upper triangular")
    bar = f.reduce_to(1)
    endo = strict_upper_module(bar)
    cx = complex_of(endo)
    pairs = upper_pairs(d)
    evec = tuple((defect.entry(i, j) // pr) % ring.p for (i, j) in pairs)
    sol = cx.d1_solver.solve(tuple((-x) % ring.p for x in evec))
    if sol is None:
        return RepLiftOutcome(None, CohClass(cx, 2, evec))
    per_gen = [sol[g * len(pairs) : (g + 1) * len(pairs)] for g in range(n_gens)]
    eye = RMatrix.identity(up, d)
    out = []
    for g in range(n_gens):
        n = vec_to_pairs(up, per_gen[g], d, pairs).scale(pr)
        out.append((eye + n) @ cand[g])
    flag = Flag(SurfaceRep(up, f.genus, tuple(out)))
    if flag.reduce_to(ring.r) != f:
        raise AssertionError("lift must reduce to the input")
    for i in range(d):
        if flag.char(i + 1) != tuple(v % up.modulus for v in chars_next[i]):
            raise AssertionError("lift must carry the prescribed characters")
    return RepLiftOutcome(flag, None)


# ---------------------------------------------------------------------------
# glue one level up (gluift)


@dataclass(frozen=True)
class GluiftOutcome:
    flag: Flag | None
    obstruction: CohClass | None  # degree 2 in the mod-p corner module

    @property
    def lifted(self) -> bool:
        return self.flag is not None


def gluift(e_up: Flag, f_up: Flag, base: Flag) -> GluiftOutcome:
    """Extend lifts of truncation and quotient of ``base`` one level up.

    e_up and f_up are d-flags over Z/p^(r+1) lifting base.truncate() and
    base.quotient_by_first(); they must overlap exactly.  The corner column
    is seeded with the least residues of base's corner; the obstruction is
    (corner defect)/p^r in H^2 of the mod-p corner character module.
    """
    ring = base.ring
    up = e_up.ring
    if up != f_up.ring or (up.p, up.r) != (ring.p, ring.r + 1):
        raise ValueError("glue parts must live one level above the base")
    d = base.d - 1
    if e_up.d != d or f_up.d != d:
        raise ValueError("glue parts must have dimension one below the base")
    if e_up.reduce_to(ring.r) != base.truncate():
        raise ValueError("e_up does not lift the truncation of the base")
    if f_up.reduce_to(ring.r) != base.quotient_by_first():
        raise ValueError("f_up does not lift the quotient of the base")
    if e_up.quotient_by_first() != f_up.truncate():
        raise ValueError("overlap mismatch between the lifted parts")
    n_gens = 2 * base.genus
    top = tuple(base.mats[g].entry(0, d) for g in range(n_gens))
    cand = glued_mats(e_up, f_up, top)
    defect = relator_defect(up, base.genus, cand)
    pr = ring.modulus
    for i in range(d + 1):
        for j in range(d + 1):
            v = defect.entry(i, j)
            if (i, j) != (0, d) and v:
                raise AssertionError("gluift defect concentrated at the corner")
            if v % pr:
                raise AssertionError("gluift defect must vanish mod p^r")
    c1val = (defect.entry(0, d) // pr) % ring.p
    chi_bot = f_up.char(d) if d else (1,) * n_gens
    corner1 = _corner_module(
        RingSpec(ring.p, 1),
        base.genus,
        tuple(v % ring.p for v in e_up.char(1)) if d else (1,) * n_gens,
        tuple(v % ring.p for v in chi_bot),
    )
    cx1 = complex_of(corner1)
    sol = cx1.d1_solver.solve(((-c1val) % ring.p,))
    if sol is None:
        return GluiftOutcome(None, CohClass(cx1, 2, (c1val,)))
    top2 = tuple(
        (top[g] + pr * sol[g] * chi_bot[g]) % up.modulus for g in range(n_gens)
    )
    flag = Flag(SurfaceRep(up, base.genus, tuple(glued_mats(e_up, f_up, top2))))
    if flag.truncate() != e_up or flag.quotient_by_first() != f_up:
        raise AssertionError("gluift output must contain both parts verbatim")
    if flag.reduce_to(ring.r) != base:
        raise AssertionError("gluift output must reduce to the base")
    return GluiftOutcome(flag, None)


# ---------------------------------------------------------------------------
# Baer sums and lift comparison


def baer(ea: ExtensionData, eb: ExtensionData, sign: int = 1) -> ExtensionData:
    """Cocycle-level Baer sum (sign=+1) or difference (sign=-1)."""
    if ea.sub != eb.sub or ea.quotient != eb.quotient:
        raise ValueError("Baer sum needs matching sub and quotient modules")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    ring = ea.ring
    ca, cb = extension_class(ea), extension_class(eb)
    gamma = ca + cb if sign == 1 else ca - cb
    na, nc = ea.sub.rank, ea.quotient.rank
    acts = []
    for g in range(2 * ea.sub.genus):
        gm = hom_mat(ring, gamma.values()[g], na, nc)
        blocks_top = RMatrix.hstack([ea.sub.acts[g], gm @ ea.quotient.acts[g]])
        blocks_bot = RMatrix.hstack([RMatrix.zeros(ring, nc, na), ea.quotient.acts[g]])
        acts.append(RMatrix.vstack([blocks_top, blocks_bot]))
    total = GModule(ring, ea.sub.genus, tuple(acts))
    return coordinate_extension(total, na)


def conjugate_lift_witness(f1: Flag, f2: Flag, base_r: int) -> RMatrix | None:
    """A matrix I + p^base_r N, N upper triangular, conjugating f1 to f2.

    Both flags must agree mod p^base_r; the conjugation condition is the
    mod-p linear system N rho - rho N = (f2 - f1)/p^base_r.
    """
    ring = f1.ring
    if f2.ring != ring or f1.d != f2.d or f1.genus != f2.genus:
        raise ValueError("flags not comparable")
    if f1.reduce_to(base_r) != f2.reduce_to(base_r):
        raise ValueError("flags do not agree at the base level")
    d = f1.d
    p = ring.p
    pr = p**base_r
    pairs = [(i, j) for i in range(d) for j in range(i, d)]  # diagonal included
    bar = f1.reduce_to(1)
    rows = []
    rhs = []
    for g in range(2 * f1.genus):
        m = bar.mats[g]
        minv = bar.rep.inverses[g]
        diff = f2.mats[g] - f1.mats[g]
        for (k, l) in pairs:
            row = []
            for (i, j) in pairs:
                # coefficient of N_ij in (N rho - rho N)_kl
                val = 0
                if i == k:
                    val += m.entry(j, l)
                if j == l:
                    val -= m.entry(k, i)
                row.append(val % p)
            rows.append(row)
            v = diff.entry(k, l)
            if v % pr:
                raise AssertionError("difference must vanish mod p^base_r")
            rhs.append((v // pr) % p)
    ring1 = RingSpec(p, 1)
    system = RMatrix.from_rows(ring1, rows)
    sol = LinearSolver(system).solve(tuple(rhs))
    if sol is None:
        return None
    ent = [[0] * d for _ in range(d)]
    for (i, j), v in zip(pairs, sol):
        ent[i][j] = (v * pr) % ring.modulus
    phi = RMatrix.identity(ring, d) + RMatrix.from_rows(ring, ent)
    phi_inv = phi.inverse()
    for g in range(2 * f1.genus):
        if phi @ f1.mats[g] @ phi_inv != f2.mats[g]:
            raise AssertionError("witness conjugation is not exact")
    return phi


# ---------------------------------------------------------------------------
# obstruction-free lifting of wound flags with Teichmuller characters

# Sign of the p^r corner adjustment applied when the first glue attempt is
# obstructed; fixed by the requirement that the adjusted obstruction vanish.
CORNER_TWIST_SIGN = -1


@dataclass(frozen=True)
class WoundLiftResult:
    flag: Flag
    adjusted: bool


def _empty_flag(ring: RingSpec, genus: int) -> Flag:
    return Flag(SurfaceRep(ring, genus, tuple(RMatrix.zeros(ring, 0, 0) for _ in range(2 * genus))))


def _teich_line(ring: RingSpec, genus: int, chars_mod_p: Sequence[int]) -> Flag:
    mats = tuple(RMatrix.from_rows(ring, [[teichmuller(ring, v)]]) for v in chars_mod_p)
    return Flag(SurfaceRep(ring, genus, mats))


def lift_wound_kummer(f: Flag, flat: Flag | None = None, _verify: bool = True) -> WoundLiftResult:
    """Lift a wound flag with Teichmuller characters one level.

    When supplied, ``flat`` pins the truncation of the output; otherwise the
    truncation is lifted recursively.  If the seeded glue is obstructed the
    quotient part is twisted in its upper-right corner by p^r times a
    solution of the cup equation in the leading 2-step subquotient, after
    which the glue is guaranteed to succeed.
    """
    ring = f.ring
    up = RingSpec(ring.p, ring.r + 1)
    if _verify and not is_wound_kummer(f):
        raise ValueError("input flag is not wound with Teichmuller characters")
    d = f.d
    n_gens = 2 * f.genus
    if d == 0:
        return WoundLiftResult(_empty_flag(up, f.genus), False)
    if d == 1:
        out = _teich_line(up, f.genus, tuple(v % ring.p for v in f.char(1)))
        if out.reduce_to(ring.r) != f:
            raise AssertionError("character line must lift the input")
        return WoundLiftResult(out, False)
    if flat is None:
        flat = lift_wound_kummer(f.truncate(), None, _verify=False).flag
    elif flat.ring != up or flat.d != d - 1 or flat.reduce_to(ring.r) != f.truncate():
        raise ValueError("flat part must lift the truncation one level up")
    sharp = lift_wound_kummer(f.quotient_by_first(), flat.quotient_by_first(), _verify=False).flag
    res = gluift(flat, sharp, f)
    adjusted = False
    if res.obstruction is not None:
        if d == 2:
            raise LiftConsistencyError("rank-2 wound glue must be unobstructed")
        adjusted = True
        ring1 = RingSpec(ring.p, 1)
        seg = f.reduce_to(1).segment(0, 2)
        chi_bot = tuple(v % ring.p for v in f.char(d))
        twisted = GModule(
            ring1,
            f.genus,
            tuple(seg.mats[g].scale(ring1.inv(chi_bot[g])) for g in range(n_gens)),
        )
        ext = coordinate_extension(twisted, 1)
        if split_section(ext).splits:
            raise AssertionError("woundness should make the leading 2-step twist nonsplit")
        target = CohClass(complex_of(ext.sub), 2, res.obstruction.vector)
        eps = solve_cup(ext, target)
        pr = ring.modulus
        last = sharp.d - 1
        chi_last = sharp.char(sharp.d)
        mats = []
        for g in range(n_gens):
            bump = [[0] * sharp.d for _ in range(sharp.d)]
            bump[0][last] = (CORNER_TWIST_SIGN * pr * eps.values()[g][0] * chi_last[g]) % up.modulus
            mats.append(sharp.mats[g] + RMatrix.from_rows(up, bump))
        sharp_adj = Flag(SurfaceRep(up, f.genus, tuple(mats)))
        if sharp_adj.truncate() != flat.quotient_by_first():
            raise AssertionError("corner twist must not disturb the overlap")
        res = gluift(flat, sharp_adj, f)
        if res.obstruction is not None:
            raise LiftConsistencyError("corner twist failed to kill the glue obstruction")
    out = res.flag
    if _verify and not is_wound_kummer(out):
        raise AssertionError("lift must stay wound with Teichmuller characters")
    return WoundLiftResult(out, adjusted)


# ---------------------------------------------------------------------------
# obstruction-free lifting of Kummer flags (trivial characters)


def _require_trivial_chars(f: Flag) -> None:
    one = (1,) * (2 * f.genus)
    for i in range(1, f.d + 1):
        if f.char(i) != one:
            raise ValueError("Kummer lifting requires trivial diagonal characters")


def _pinned_torsor_module(f: Flag) -> GModule:
    """Mod-p coefficients of the first-row twists I + sum_c v[c-1] E_(0,c).

    Lifts with a pinned quotient block form a torsor under such twists at
    scale p^r, and moving inside the torsor changes the relator defect by
    p^r times the degree-1 differential of the twist vectors in this
    module, the dual of the mod-p quotient block.
    """
    return dual_module(f.quotient_by_first().reduce_to(1).as_module())


def _row_twist(up: RingSpec, d: int, vec: Sequence[int], scale: int) -> RMatrix:
    """Identity plus scale * vec spread along the first row, columns 1..d-1."""
    ent = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    for c in range(1, d):
        ent[0][c] = (scale * vec[c - 1]) % up.modulus
    return RMatrix.from_rows(up, ent)


def _pinned_relator_lift(f: Flag, sharp: Flag) -> tuple[RMatrix, ...]:
    """Some relator-exact lift of ``f`` with quotient block exactly ``sharp``.

    The candidate keeps the least residues of f's first row over the sharp
    block; its defect is supported on the first row and vanishes mod p^r,
    and a first-row twist kills it iff one mod-p cochain equation is
    solvable.  Unsolvable means no lift pins this quotient part at all.
    """
    ring = f.ring
    up = sharp.ring
    d = f.d
    n_gens = 2 * f.genus
    cand = []
    for g in range(n_gens):
        ent = [[0] * d for _ in range(d)]
        ent[0][0] = 1
        for j in range(1, d):
            ent[0][j] = f.mats[g].entry(0, j)
            for i in range(1, d):
                ent[i][j] = sharp.mats[g].entry(i - 1, j - 1)
        cand.append(RMatrix.from_rows(up, ent))
    defect = relator_defect(up, f.genus, cand)
    pr = ring.modulus
    tvec = []
    for i in range(d):
        for j in range(d):
            v = defect.entry(i, j)
            if i > 0 or j == 0:
                if v:
                    raise AssertionError("pinned candidate defect must sit on the first row")
            else:
                if v % pr:
                    raise AssertionError("pinned candidate defect must vanish mod p^r")
                tvec.append((-(v // pr)) % ring.p)
    cx = complex_of(_pinned_torsor_module(f))
    sol = cx.d1_solver.solve(tuple(tvec))
    if sol is None:
        raise LiftConsistencyError("no relator-exact lift pins the given quotient part")
    per = unstack(sol, d - 1, n_gens)
    return tuple(_row_twist(up, d, per[g], pr) @ cand[g] for g in range(n_gens))


def _row_class_matrix(bar: Flag, k: int, g: int) -> list[list[int]]:
    """First-row twist response of the (0,1,k) step cochain, mod p.

    Entry [c][m-1] is the coefficient of twist coordinate m in the movement
    of the cochain at quotient coordinate c: the twisted lift moves the
    cochain of generator g by p^r * (this matrix @ twist vector of g).
    """
    ring = bar.ring
    qinv = bar.segment(1, k).mats[g].inverse()
    rows = []
    for cp in range(k - 1):
        row = []
        for m in range(1, bar.d):
            s = 0
            for c in range(m, k):
                s += bar.mats[g].entry(m, c) * qinv.entry(c - 1, cp)
            row.append(s % ring.modulus)
        rows.append(row)
    return rows


def _splitting_grid(bar: Flag, j: int, k: int) -> tuple[RMatrix, list[tuple[tuple[int, ...], int]]]:
    """Base mod-p splitting of V_k/V_j -> V_k/V_1 plus its torsor generators."""
    ext = coordinate_extension(bar.segment(1, k).as_module(), j - 1)
    res = split_section(ext)
    if not res.splits:
        raise AssertionError("projection of a split extension must split")
    hom = hom_module(bar.segment(j, k).as_module(), bar.segment(1, j).as_module())
    gens = LinearSolver(complex_of(hom).d0).kernel()
    return res.section, gens


_SPLITTING_GRID_CAP = 2048


def _kummerize_pinned(f: Flag, sharp: Flag, o0: tuple[RMatrix, ...]) -> Flag:
    """Twist a pinned relator-exact lift until split steps stay split.

    Steps (0,1,k) split mod p: the twisted cochain must be a coboundary one
    level up; linear in the twist and the witness.  Steps (0,j,k), j >= 2,
    split mod p while (0,1,k) is not: the cochain pulled back through an
    equivariant section of V_k/V_j -> V_k/V_1 must be a coboundary; linear
    once the mod-p reduction of the section is fixed, so those reductions
    are enumerated over their torsor grid.  Remaining split steps sit
    inside the pinned quotient or are implied, so solvability at some grid
    point is equivalent to the existence of a pinned Kummer lift.
    """
    ring = f.ring
    up = sharp.ring
    d = f.d
    n_gens = 2 * f.genus
    p, pr = ring.p, ring.modulus
    bar = f.reduce_to(1)
    o0_flag = Flag(SurfaceRep(up, f.genus, tuple(o0)))
    l1 = char_module(up, f.genus, (1,) * n_gens)
    n_mu = n_gens * (d - 1)

    split1 = [k for k in range(2, d + 1) if segment_extension_splits(bar, 0, 1, k)]
    sigma_pairs = [
        (j, k)
        for k in range(3, d + 1)
        if k not in split1
        for j in range(2, k)
        if segment_extension_splits(bar, 0, j, k)
    ]

    def step_cochain(k: int) -> tuple[tuple[int, ...], ...]:
        ext = coordinate_extension(o0_flag.segment(0, k).as_module(), 1)
        return extension_class(ext).values()

    pair1 = []
    for k in split1:
        qk = sharp.segment(0, k - 1).as_module()
        pair1.append((
            k,
            step_cochain(k),
            hom_module(qk, l1).acts,
            [_row_class_matrix(bar, k, g) for g in range(n_gens)],
        ))
    pairs2 = []
    for (j, k) in sigma_pairs:
        base, gens = _splitting_grid(bar, j, k)
        pairs2.append({
            "j": j,
            "k": k,
            "phi0": step_cochain(k),
            "lmats": [_row_class_matrix(bar, k, g) for g in range(n_gens)],
            "a_mats": sharp.segment(0, k - 1).mats,
            "b_mats": sharp.segment(j - 1, k - 1).mats,
            "h_acts": hom_module(sharp.segment(j - 1, k - 1).as_module(), l1).acts,
            "base": base,
            "gens": gens,
        })

    off = n_mu
    m_off = []
    for (k, _, _, _) in pair1:
        m_off.append(off)
        off += k - 1
    tau_off = []
    mp_off = []
    for pd in pairs2:
        tau_off.append(off)
        off += (pd["j"] - 1) * (pd["k"] - pd["j"])
        mp_off.append(off)
        off += pd["k"] - pd["j"]
    n_unknowns = off

    # twists must preserve relator exactness: d1 of the twist vector is 0
    rows_static: list[tuple[list[int], int]] = []
    dmat = complex_of(_pinned_torsor_module(f)).d1
    for i in range(d - 1):
        row = [0] * n_unknowns
        for c in range(n_mu):
            row[c] = (pr * dmat.entry(i, c)) % up.modulus
        rows_static.append((row, 0))
    for idx, (k, phi0, hacts, lmats) in enumerate(pair1):
        base_col = m_off[idx]
        for g in range(n_gens):
            for cp in range(k - 1):
                row = [0] * n_unknowns
                for m in range(d - 1):
                    row[g * (d - 1) + m] = (pr * lmats[g][cp][m]) % up.modulus
                for col in range(k - 1):
                    coeff = hacts[g].entry(cp, col) - (1 if col == cp else 0)
                    row[base_col + col] = (-coeff) % up.modulus
                rows_static.append((row, (-phi0[g][cp]) % up.modulus))

    grid_truncated = False
    grids = []
    for pd in pairs2:
        exps = [e for _, e in pd["gens"]]
        full = p ** sum(exps)
        take = min(full, _SPLITTING_GRID_CAP)
        grids.append(list(itertools.islice(span_coefficients(p, exps), take)))
        grid_truncated = grid_truncated or take < full

    attempts = 0
    for combo in itertools.product(*grids):
        attempts += 1
        if attempts > _SPLITTING_GRID_CAP:
            grid_truncated = True
            break
        rows = list(rows_static)
        for pi_idx, (pd, coeffs) in enumerate(zip(pairs2, combo)):
            j, k = pd["j"], pd["k"]
            nh = (j - 1) * (k - j)
            hvec = [0] * nh
            for c_val, (gvec, _) in zip(coeffs, pd["gens"]):
                for i in range(nh):
                    hvec[i] = (hvec[i] + c_val * gvec[i]) % p
            hmat = hom_mat(bar.ring, hvec, j - 1, k - j)
            sb = pd["base"]
            sig_ent = [
                [
                    (sb.entry(a, b) + (hmat.entry(a, b) if a < j - 1 else 0)) % p
                    for b in range(k - j)
                ]
                for a in range(k - 1)
            ]
            sig0 = RMatrix.from_rows(up, sig_ent)
            t_off = tau_off[pi_idx]
            m_base = mp_off[pi_idx]
            for g in range(n_gens):
                am, bm = pd["a_mats"][g], pd["b_mats"][g]
                const = am @ sig0 - sig0 @ bm
                for a in range(k - 1):
                    for b in range(k - j):
                        row = [0] * n_unknowns
                        for ta in range(j - 1):
                            for tb in range(k - j):
                                coeff = 0
                                if tb == b:
                                    coeff += am.entry(a, ta)
                                if ta == a:
                                    coeff -= bm.entry(tb, b)
                                if coeff:
                                    row[t_off + ta * (k - j) + tb] = (p * coeff) % up.modulus
                        rows.append((row, (-const.entry(a, b)) % up.modulus))
                phi0 = pd["phi0"][g]
                lm = pd["lmats"][g]
                hg = pd["h_acts"][g]
                for b in range(k - j):
                    row = [0] * n_unknowns
                    for ta in range(j - 1):
                        row[t_off + ta * (k - j) + b] = (p * phi0[ta]) % up.modulus
                    for m in range(d - 1):
                        s = 0
                        for cp in range(k - 1):
                            s += lm[cp][m] * sig_ent[cp][b]
                        row[g * (d - 1) + m] = (pr * s) % up.modulus
                    for col in range(k - j):
                        coeff = hg.entry(b, col) - (1 if col == b else 0)
                        row[m_base + col] = (-coeff) % up.modulus
                    const0 = sum(phi0[c] * sig0.entry(c, b) for c in range(k - 1))
                    rows.append((row, (-const0) % up.modulus))
        mat = RMatrix.from_rows(up, [r for r, _ in rows])
        sol = LinearSolver(mat).solve(tuple(rhs for _, rhs in rows))
        if sol is None:
            continue
        out_mats = []
        for g in range(n_gens):
            vec = [sol[g * (d - 1) + m] for m in range(d - 1)]
            out_mats.append(_row_twist(up, d, vec, pr) @ o0[g])
        return Flag(SurfaceRep(up, f.genus, tuple(out_mats)))
    msg = "no pinned lift keeps the split steps split one level up"
    if grid_truncated:
        msg += " (splitting grid truncated at the budget)"
    raise LiftConsistencyError(msg)


def lift_kummer(f: Flag, sharp: Flag | None = None, _verify: bool = True) -> Flag:
    """Lift a Kummer flag one level, pinning the quotient-by-first part.

    Output o satisfies o.reduce_to(r) == f and o.quotient_by_first() ==
    sharp exactly, and is itself Kummer.  ``sharp`` must be a Kummer lift
    of f.quotient_by_first(); when omitted it is built recursively.

    The pinned lifts form a torsor under first-row twists at scale p^r and
    every split-stability condition on the output is linear over the torsor
    once a mod-p splitting of each relevant lower step is fixed, so the
    engine is one relator solve plus one joint solve per splitting choice.
    """
    ring = f.ring
    up = RingSpec(ring.p, ring.r + 1)
    d = f.d
    n_gens = 2 * f.genus
    _require_trivial_chars(f)
    if _verify:
        v = is_kummer(f)
        if not v.ok:
            raise ValueError(f"input flag is not Kummer: {v.reason}")
    if sharp is None:
        if d > 0:
            sharp = lift_kummer(f.quotient_by_first(), None, _verify=False)
        else:
            sharp = _empty_flag(up, f.genus)
    else:
        if sharp.ring != up or sharp.d != d - 1:
            raise ValueError("quotient part must live one level above with dimension d-1")
        if sharp.reduce_to(ring.r) != f.quotient_by_first():
            raise ValueError("quotient part must lift the quotient of the input")
        _require_trivial_chars(sharp)
        if _verify:
            vs = is_kummer(sharp)
            if not vs.ok:
                raise ValueError(f"quotient part is not Kummer: {vs.reason}")
    if d == 0:
        return _empty_flag(up, f.genus)
    if d == 1:
        return Flag(SurfaceRep(up, f.genus, tuple(RMatrix.identity(up, 1) for _ in range(n_gens))))
    out = _kummerize_pinned(f, sharp, _pinned_relator_lift(f, sharp))
    if out.reduce_to(ring.r) != f:
        raise AssertionError("Kummer lift must reduce to the input")
    if out.quotient_by_first() != sharp:
        raise AssertionError("Kummer lift must pin the quotient part exactly")
    if _verify:
        vv = is_kummer(out)
        if not vv.ok:
            raise LiftConsistencyError(f"lifted flag lost the Kummer property: {vv.reason}")
    return out


def lift_kummer_truncation(f: Flag, flat: Flag | None = None) -> Flag:
    """Lift a Kummer flag one level, pinning the truncation part exactly.

    Carried out through the duality involution: dualize, lift with the
    dual of ``flat`` as the pinned quotient part, dualize back.
    """
    dual_sharp = flat.dual() if flat is not None else None
    return lift_kummer(f.dual(), dual_sharp).dual()


def lift_h1_class(f: Flag, cls: CohClass) -> CohClass:
    """Lift a mod-p degree-1 class to the full level of a Kummer flag.

    The class is packed into the last column of a (d+1)-dimensional mod-p
    flag, which is lifted up the tower with its truncation pinned to the
    reductions of ``f``; the lifted column is the output cocycle.
    """
    ring = f.ring
    d = f.d
    n_gens = 2 * f.genus
    _require_trivial_chars(f)
    bar = f.reduce_to(1)
    if cls.degree != 1 or cls.cx.module != bar.as_module():
        raise ValueError("class must be a degree-1 class of the mod-p flag module")
    ring1 = RingSpec(ring.p, 1)
    vals = cls.values()
    mats = []
    for g in range(n_gens):
        ent = [[bar.mats[g].entry(i, j) for j in range(d)] + [vals[g][i]] for i in range(d)]
        ent.append([0] * d + [1])
        mats.append(RMatrix.from_rows(ring1, ent))
    cur = Flag(SurfaceRep(ring1, f.genus, tuple(mats)))
    for s in range(1, ring.r):
        cur = lift_kummer_truncation(cur, f.reduce_to(s + 1))
    out_vals = [tuple(cur.mats[g].entry(i, d) for i in range(d)) for g in range(n_gens)]
    for g in range(n_gens):
        if tuple(v % ring.p for v in out_vals[g]) != tuple(vals[g]):
            raise AssertionError("lifted cocycle must reduce to the input values")
    return CohClass(complex_of(f.as_module()), 1, stack(out_vals))
