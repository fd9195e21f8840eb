"""Genus-g surface group words, representations and coefficient modules.

The group is presented on 2g generators x1, y1, ..., xg, yg with the single
relator [x1,y1]...[xg,yg], commutator convention [a,b] = a b a^-1 b^-1.
Words are tuples of signed 1-based generator indices (positive = generator,
negative = inverse), kept freely reduced.  Representations and coefficient
modules are tuples of invertible matrices over some Z/p^s, checked against
the relator at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .zmod import RingSpec, RMatrix, vec_add, vec_mod, vec_scale

Word = tuple[int, ...]


def free_reduce(letters: Sequence[int]) -> Word:
    out: list[int] = []
    for t in letters:
        if t == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -t:
            out.pop()
        else:
            out.append(t)
    return tuple(out)


def word_inverse(w: Sequence[int]) -> Word:
    return tuple(-t for t in reversed(w))


def word_mul(*words: Sequence[int]) -> Word:
    flat: list[int] = []
    for w in words:
        flat.extend(w)
    return free_reduce(flat)


@dataclass(frozen=True)
class Presentation:
    """The one-relator presentation of the genus-g surface group."""

    genus: int

    def __post_init__(self) -> None:
        if self.genus < 1:
            raise ValueError("genus must be >= 1")

    @property
    def n_gens(self) -> int:
        return 2 * self.genus

    def gen_name(self, index: int) -> str:
        """1-based index -> x1, y1, x2, y2, ..."""
        if not 1 <= index <= self.n_gens:
            raise ValueError(f"generator index {index} out of range")
        pair, kind = divmod(index - 1, 2)
        return f"{'xy'[kind]}{pair + 1}"

    def gen_index(self, name: str) -> int:
        kind = "xy".index(name[0])
        pair = int(name[1:]) - 1
        if not 0 <= pair < self.genus:
            raise ValueError(f"unknown generator {name}")
        return 2 * pair + kind + 1

    def relator(self) -> Word:
        letters: list[int] = []
        for i in range(self.genus):
            a, b = 2 * i + 1, 2 * i + 2
            letters.extend([a, b, -a, -b])
        return tuple(letters)


class RelatorError(ValueError):
    """Raised when generator matrices do not satisfy the surface relator."""


def _check_relator(ring: RingSpec, genus: int, mats: Sequence[RMatrix], what: str) -> None:
    if len(mats) != 2 * genus:
        raise ValueError(f"need {2 * genus} matrices, got {len(mats)}")
    n = mats[0].rows if mats else 0
    for i, m in enumerate(mats):
        if m.ring != ring:
            raise ValueError(f"matrix {i + 1} lives over {m.ring}, expected {ring}")
        if m.rows != n or m.cols != n:
            raise ValueError("generator matrices must be square of equal size")
        if n and not m.is_invertible():
            raise ValueError(f"generator matrix {i + 1} is not invertible")
    if n == 0:
        return
    rel = Presentation(genus).relator()
    inv = [m.inverse() for m in mats]
    acc = RMatrix.identity(ring, n)
    for t in rel:
        acc = acc @ (mats[t - 1] if t > 0 else inv[-t - 1])
    if not acc.is_identity():
        defect = acc - RMatrix.identity(ring, n)
        raise RelatorError(
            f"{what}: relator defect is nonzero: {defect.to_lists()}"
        )


@dataclass(frozen=True)
class SurfaceRep:
    """A representation of the surface group by invertible matrices."""

    ring: RingSpec
    genus: int
    mats: tuple[RMatrix, ...]

    def __post_init__(self) -> None:
        _check_relator(self.ring, self.genus, self.mats, "representation")

    @property
    def dim(self) -> int:
        return self.mats[0].rows

    @property
    def presentation(self) -> Presentation:
        return Presentation(self.genus)

    @cached_property
    def inverses(self) -> tuple[RMatrix, ...]:
        return tuple(m.inverse() for m in self.mats)

    def gen(self, t: int) -> RMatrix:
        """Matrix of the signed generator index t."""
        return self.mats[t - 1] if t > 0 else self.inverses[-t - 1]

    def evaluate(self, word: Sequence[int]) -> RMatrix:
        acc = RMatrix.identity(self.ring, self.dim)
        for t in word:
            acc = acc @ self.gen(t)
        return acc

    def as_module(self) -> "GModule":
        return GModule(self.ring, self.genus, self.mats)

    def reduce_to(self, s: int) -> "SurfaceRep":
        return SurfaceRep(self.ring.shrink(s), self.genus, tuple(m.reduce_to(s) for m in self.mats))


@dataclass(frozen=True)
class GModule:
    """A surface group module: (Z/p^s)^rank with an action by each generator."""

    ring: RingSpec
    genus: int
    acts: tuple[RMatrix, ...]

    def __post_init__(self) -> None:
        _check_relator(self.ring, self.genus, self.acts, "module action")

    @property
    def rank(self) -> int:
        return self.acts[0].rows if self.acts else 0

    @property
    def presentation(self) -> Presentation:
        return Presentation(self.genus)

    @cached_property
    def inverses(self) -> tuple[RMatrix, ...]:
        return tuple(m.inverse() for m in self.acts)

    def act(self, t: int) -> RMatrix:
        return self.acts[t - 1] if t > 0 else self.inverses[-t - 1]

    def act_word(self, word: Sequence[int]) -> RMatrix:
        acc = RMatrix.identity(self.ring, self.rank)
        for t in word:
            acc = acc @ self.act(t)
        return acc

    def is_trivial(self) -> bool:
        return all(m.is_identity() for m in self.acts)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce_to(self, s: int) -> "GModule":
        return GModule(self.ring.shrink(s), self.genus, tuple(m.reduce_to(s) for m in self.acts))


# -- module constructors ------------------------------------------------------


def trivial_module(ring: RingSpec, genus: int, rank: int) -> GModule:
    eye = RMatrix.identity(ring, rank)
    return GModule(ring, genus, (eye,) * (2 * genus))


def char_module(ring: RingSpec, genus: int, values: Sequence[int]) -> GModule:
    """Rank-1 module where generator i acts by the unit values[i-1]."""
    acts = tuple(RMatrix(ring, 1, 1, (v % ring.modulus,)) for v in values)
    return GModule(ring, genus, acts)


def tensor_module(a: GModule, b: GModule) -> GModule:
    if (a.ring, a.genus) != (b.ring, b.genus):
        raise ValueError("tensor factors must share ring and genus")
    return GModule(a.ring, a.genus, tuple(x.kron(y) for x, y in zip(a.acts, b.acts)))


def dual_module(a: GModule) -> GModule:
    return GModule(a.ring, a.genus, tuple(m.transpose() for m in a.inverses))


def hom_module(c: GModule, a: GModule) -> GModule:
    """Linear maps C -> A with (g.F) = act_A(g) F act_C(g)^-1.

    Flattening convention: a map F (rank_A x rank_C matrix) becomes the
    vector w with w[j * rank_A + i] = F[i][j]; see hom_vec / hom_mat.
    """
    return tensor_module(dual_module(c), a)


def hom_vec(f: RMatrix) -> tuple[int, ...]:
    """Flatten a map F: C -> A into a hom_module(C, A) vector."""
    return tuple(f.entry(i, j) for j in range(f.cols) for i in range(f.rows))


def hom_mat(ring: RingSpec, w: Sequence[int], rank_a: int, rank_c: int) -> RMatrix:
    """Inverse of hom_vec."""
    if len(w) != rank_a * rank_c:
        raise ValueError("hom vector length mismatch")
    return RMatrix(
        ring,
        rank_a,
        rank_c,
        tuple(w[j * rank_a + i] % ring.modulus for i in range(rank_a) for j in range(rank_c)),
    )


# -- crossed (twisted) cochain values ----------------------------------------


def crossed_value(
    module: GModule, values: Sequence[Sequence[int]], word: Sequence[int]
) -> tuple[int, ...]:
    """Extend generator values to a word by c(uv) = c(u) + u.c(v).

    ``values[k]`` is c(generator k+1); inverses follow from
    c(s^-1) = -s^-1.c(s).
    """
    ring = module.ring
    acc = module.zero()
    pref = RMatrix.identity(ring, module.rank)
    for t in word:
        k = abs(t) - 1
        if t > 0:
            step = vec_mod(ring, values[k])
            acc = vec_add(ring, acc, pref.apply(step))
            pref = pref @ module.acts[k]
        else:
            inv = module.inverses[k]
            step = vec_scale(ring, -1, inv.apply(values[k]))
            acc = vec_add(ring, acc, pref.apply(step))
            pref = pref @ inv
    return acc
