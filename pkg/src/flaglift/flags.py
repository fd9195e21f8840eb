"""Triangular flags of surface group representations and their predicates.

A flag is a representation by invertible upper triangular matrices over
Z/p^r; coordinate subspaces give a full filtration with rank-1 graded
pieces (the diagonal characters).  This module provides the subquotient
calculus (segments, truncation, quotient by the first piece, duality),
splitting indices of the one-step extensions, and the three predicates:
wound, wound-Kummer, Kummer.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .cohomology import (
    ExtensionData,
    complex_of,
    coordinate_extension,
    extension_class,
    split_section,
)
from .surface import GModule, SurfaceRep, char_module
from .zmod import (
    LinearSolver,
    RingSpec,
    RMatrix,
    span_coefficients,
    teichmuller,
    vec_add,
    vec_scale,
)


class KummerInconclusive(RuntimeError):
    """Splitting enumeration exceeded the configured budget."""


@dataclass(frozen=True)
class Flag:
    """An upper triangular representation with unit diagonal characters."""

    rep: SurfaceRep

    def __post_init__(self) -> None:
        for g, m in enumerate(self.rep.mats):
            for i in range(m.rows):
                for j in range(i):
                    if m.entry(i, j):
                        raise ValueError(
                            f"generator {g + 1} is not upper triangular at ({i},{j})"
                        )

    # -- basic data ---------------------------------------------------------

    @property
    def ring(self) -> RingSpec:
        return self.rep.ring

    @property
    def genus(self) -> int:
        return self.rep.genus

    @property
    def d(self) -> int:
        return self.rep.dim

    @property
    def mats(self) -> tuple[RMatrix, ...]:
        return self.rep.mats

    @staticmethod
    def from_rows(ring: RingSpec, genus: int, mats: Sequence[Sequence[Sequence[int]]]) -> "Flag":
        return Flag(SurfaceRep(ring, genus, tuple(RMatrix.from_rows(ring, m) for m in mats)))

    def char(self, i: int) -> tuple[int, ...]:
        """Diagonal character of the i-th piece (1-based), per generator."""
        if not 1 <= i <= self.d:
            raise ValueError(f"piece index {i} out of range")
        return tuple(m.entry(i - 1, i - 1) for m in self.mats)

    def chars(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.char(i) for i in range(1, self.d + 1))

    def piece_module(self, i: int) -> GModule:
        return char_module(self.ring, self.genus, self.char(i))

    def as_module(self) -> GModule:
        return self.rep.as_module()

    # -- subquotients ---------------------------------------------------------

    def segment(self, i: int, j: int) -> "Flag":
        """The subquotient flag with pieces i+1 .. j (0 <= i <= j <= d).

        For upper triangular matrices, extracting the diagonal block with
        rows and columns i..j-1 is multiplicative, so the result is again a
        flag of the same group.
        """
        if not 0 <= i <= j <= self.d:
            raise ValueError(f"bad segment ({i}, {j}) of a {self.d}-flag")
        idx = list(range(i, j))
        return Flag(
            SurfaceRep(self.ring, self.genus, tuple(m.submatrix(idx, idx) for m in self.mats))
        )

    def truncate(self) -> "Flag":
        return self.segment(0, self.d - 1)

    def quotient_by_first(self) -> "Flag":
        return self.segment(1, self.d)

    def reduce_to(self, s: int) -> "Flag":
        return Flag(self.rep.reduce_to(s))

    def dual(self) -> "Flag":
        """Antidiagonal conjugate of the inverse transpose; an involution.

        Reverses the filtration: piece i of the dual has character
        char(d+1-i)^-1, truncation and quotient-by-first are exchanged.
        """
        d = self.d
        j = RMatrix(
            self.ring, d, d, tuple(1 if a + b == d - 1 else 0 for a in range(d) for b in range(d))
        )
        mats = tuple(j @ m.transpose() @ j for m in self.rep.inverses)
        return Flag(SurfaceRep(self.ring, self.genus, mats))

    def step_extension(self, i: int, k: int) -> ExtensionData:
        """0 -> V_(k-1)/V_i -> V_k/V_i -> L_k -> 0 as module data."""
        if not 0 <= i < k <= self.d:
            raise ValueError(f"bad step extension ({i}, {k})")
        return coordinate_extension(self.segment(i, k).as_module(), k - 1 - i)


# ---------------------------------------------------------------------------
# splitting indices


def index_of(flag: Flag, k: int) -> int:
    """Smallest i with V_k/V_i -> L_k split; i = k-1 always qualifies."""
    for i in range(k):
        if split_section(flag.step_extension(i, k)).splits:
            return i
    raise AssertionError("the rank-0 sub at i = k-1 always splits")


def splitting_indices(flag: Flag) -> tuple[int, ...]:
    """The tuple (index_of(flag, k)) for k = 1..d."""
    return tuple(index_of(flag, k) for k in range(1, flag.d + 1))


# ---------------------------------------------------------------------------
# wound flags


def is_wound(flag: Flag) -> bool:
    """All consecutive 2-step subquotients nonsplit, mod p."""
    f1 = flag.reduce_to(1)
    for i in range(1, f1.d):
        if split_section(f1.step_extension(i - 1, i + 1)).splits:
            return False
    return True


def invariant_lines(module: GModule) -> list[tuple[int, ...]]:
    """Normalized generators of the stable lines of a mod-p module."""
    ring = module.ring
    if ring.r != 1:
        raise ValueError("invariant lines are a mod-p notion")
    p, n = ring.p, module.rank
    out = []
    for v in _projective_reps(p, n):
        ok = True
        for g in range(2 * module.genus):
            w = module.acts[g].apply(v)
            # w must be a scalar multiple of v
            lead = next(i for i in range(n) if v[i])
            lam = w[lead]
            if vec_scale(ring, lam, v) != w:
                ok = False
                break
        if ok:
            out.append(v)
    return out


def _projective_reps(p: int, n: int) -> Iterator[tuple[int, ...]]:
    """One representative per line of F_p^n: first nonzero coordinate is 1."""
    for lead in range(n):
        tail = n - lead - 1
        counters = [0] * tail
        while True:
            yield (0,) * lead + (1,) + tuple(counters)
            i = tail - 1
            while i >= 0:
                counters[i] += 1
                if counters[i] < p:
                    break
                counters[i] = 0
                i -= 1
            else:
                break


def char_is_teichmuller(ring: RingSpec, values: Sequence[int]) -> bool:
    return all(v % ring.modulus == teichmuller(ring, v) for v in values)


def is_wound_kummer(flag: Flag) -> bool:
    """Wound, with every graded character a Teichmuller lift."""
    if not all(char_is_teichmuller(flag.ring, flag.char(i)) for i in range(1, flag.d + 1)):
        return False
    return is_wound(flag)


# ---------------------------------------------------------------------------
# Kummer flags


@dataclass(frozen=True)
class KummerVerdict:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def iter_equivariant_sections(flag: Flag, k: int) -> Iterator[tuple[int, ...]]:
    """Lazily enumerate equivariant sections of V_k -> L_k as length-k columns.

    Empty when the step extension (0, k) does not split; otherwise a torsor
    under Hom_Gamma(L_k, V_(k-1)), walked from an independent generator set
    starting at the base section of the canonical solver.
    """
    ring = flag.ring
    res = split_section(flag.step_extension(0, k))
    if not res.splits:
        return
    base = res.section.col(0)
    if k == 1:
        yield base
        return
    sub = flag.segment(0, k - 1).as_module()
    chi = flag.char(k)
    blocks = []
    for g in range(2 * flag.genus):
        blocks.append(sub.acts[g] - RMatrix.identity(ring, k - 1).scale(chi[g]))
    system = RMatrix.vstack(blocks)
    gens = LinearSolver(system).kernel()
    for coeffs in span_coefficients(ring.p, [e for _, e in gens]):
        f = (0,) * (k - 1)
        for c, (vec, _) in zip(coeffs, gens):
            f = vec_add(ring, f, vec_scale(ring, c, vec))
        yield vec_add(ring, base, tuple(f) + (0,))


def equivariant_sections(flag: Flag, k: int, budget: int = 4096) -> list[tuple[int, ...]]:
    """All equivariant sections of V_k -> L_k, as length-k columns.

    Raises KummerInconclusive when more than ``budget`` sections exist.
    """
    ring = flag.ring
    out = []
    for sec in iter_equivariant_sections(flag, k):
        out.append(sec)
        if len(out) > budget:
            raise KummerInconclusive(
                f"equivariant sections at step {k} exceed the budget {budget}"
            )
    return out


def quotient_by_section(flag: Flag, k: int, section: Sequence[int]) -> Flag:
    """The flag on V_d / section(L_k), in the section-adapted basis.

    ``section`` is a length-k column with last entry 1 spanning a stable
    line; the basis change U (identity with column k-1 replaced) makes it a
    coordinate line, which is then deleted.
    """
    ring = flag.ring
    d = flag.d
    if len(section) != k or section[k - 1] != 1:
        raise ValueError("section must be a length-k column with last entry 1")
    w = list(section) + [0] * (d - k)
    u = RMatrix(
        ring,
        d,
        d,
        tuple(
            w[i] if j == k - 1 else (1 if i == j else 0) for i in range(d) for j in range(d)
        ),
    )
    u_inv = u.inverse()
    chi = flag.char(k)
    keep = [i for i in range(d) if i != k - 1]
    out = []
    for g, m in enumerate(flag.mats):
        conj = u_inv @ m @ u
        col = conj.col(k - 1)
        expect = tuple(chi[g] if i == k - 1 else 0 for i in range(d))
        if col != expect:
            raise ValueError("section column is not equivariant for the flag")
        out.append(conj.submatrix(keep, keep))
    return Flag(SurfaceRep(ring, flag.genus, tuple(out)))


_KUMMER_CACHE: dict[tuple[Flag, bool], KummerVerdict] = {}


def is_kummer(flag: Flag, strict_chars: bool = True) -> KummerVerdict:
    """The Kummer predicate: splittings of subquotients survive reduction.

    Checks (a) every graded character is trivial (strict) or a Teichmuller
    lift (relaxed), and (b) for every coordinate subquotient extension
    0 -> V_j/V_i -> V_k/V_i -> V_k/V_j -> 0 with 0 <= i < j < k <= d,
    if the extension splits mod p then it splits over the full ring.
    Condition (b) specialized to j = k-1 says the splitting index table
    matches the mod-p one; the predicate is closed under segments and
    invariant under duality.  Returns the first violation found.
    """
    key = (flag, strict_chars)
    hit = _KUMMER_CACHE.get(key)
    if hit is not None:
        return hit
    verdict = _is_kummer_inner(flag, strict_chars)
    _KUMMER_CACHE[key] = verdict
    return verdict


def segment_extension_splits(flag: Flag, i: int, j: int, k: int) -> bool:
    """Whether 0 -> V_j/V_i -> V_k/V_i -> V_k/V_j -> 0 splits equivariantly."""
    ext = coordinate_extension(flag.segment(i, k).as_module(), j - i)
    return split_section(ext).splits


def _is_kummer_inner(flag: Flag, strict: bool) -> KummerVerdict:
    ring = flag.ring
    d = flag.d
    for i in range(1, d + 1):
        chi = flag.char(i)
        if strict:
            if any(v != 1 for v in chi):
                return KummerVerdict(False, f"character of piece {i} is nontrivial")
        elif not char_is_teichmuller(ring, chi):
            return KummerVerdict(False, f"character of piece {i} is not a Teichmuller lift")
    if d <= 1 or ring.r == 1:
        # one step at most, or nothing beyond the mod-p layer to compare
        return KummerVerdict(True)
    bar = flag.reduce_to(1)
    for k in range(2, d + 1):
        for j in range(k - 1, 0, -1):
            for i in range(j):
                if not segment_extension_splits(bar, i, j, k):
                    continue
                if not segment_extension_splits(flag, i, j, k):
                    return KummerVerdict(
                        False,
                        f"subquotient extension ({i},{j},{k}) splits mod p "
                        f"but not mod p^{ring.r}",
                    )
    return KummerVerdict(True)
