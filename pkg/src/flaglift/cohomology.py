"""Group cohomology of surface groups over Z/p^s coefficient modules.

Everything is computed from the presentation 2-complex of the one-relator
presentation: for a module M of rank n the cochain spaces are

    C^0 = M,   C^1 = M^(2g)  (one value per generator),   C^2 = M,

d0 sends m to the cochain g -> g.m - m, and d1 sends a cochain c to the
value of its crossed extension on the relator (a stacked matrix of Fox
derivative evaluations).  H^0 = ker d0, H^1 = ker d1 / im d0 and
H^2 = coker d1; class arithmetic, cup products, extension classes and the
connecting map of a short exact sequence of modules all reduce to the
Z/p^r solvers in zmod.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from .surface import (
    GModule,
    crossed_value,
    dual_module,
    hom_mat,
    hom_module,
    hom_vec,
    tensor_module,
    trivial_module,
)
from .zmod import (
    LinearSolver,
    RingSpec,
    RMatrix,
    SpanReducer,
    cokernel_data,
    quotient_data,
    tensor_vec,
    vec_add,
    vec_mod,
    vec_scale,
)


class LiftConsistencyError(RuntimeError):
    """An internally guaranteed linear system turned out unsolvable."""


def unstack(vec: Sequence[int], rank: int, count: int) -> list[tuple[int, ...]]:
    """Split a concatenated degree-1 cochain into per-generator values."""
    if len(vec) != rank * count:
        raise ValueError("cochain vector length mismatch")
    return [tuple(vec[i * rank : (i + 1) * rank]) for i in range(count)]


def stack(values: Sequence[Sequence[int]]) -> tuple[int, ...]:
    out: list[int] = []
    for v in values:
        out.extend(v)
    return tuple(out)


@dataclass(frozen=True)
class CochainComplex:
    """The three-term cochain complex of a surface group module."""

    module: GModule

    @property
    def ring(self) -> RingSpec:
        return self.module.ring

    @property
    def n_gens(self) -> int:
        return 2 * self.module.genus

    @cached_property
    def d0(self) -> RMatrix:
        mod = self.module
        eye = RMatrix.identity(mod.ring, mod.rank)
        return RMatrix.vstack([a - eye for a in mod.acts])

    @cached_property
    def d1(self) -> RMatrix:
        """Fox derivative blocks of the relator, one n x n block per generator."""
        mod = self.module
        n = mod.rank
        blocks = [RMatrix.zeros(mod.ring, n, n) for _ in range(self.n_gens)]
        pref = RMatrix.identity(mod.ring, n)
        for t in mod.presentation.relator():
            k = abs(t) - 1
            if t > 0:
                blocks[k] = blocks[k] + pref
                pref = pref @ mod.acts[k]
            else:
                pref = pref @ mod.inverses[k]
                blocks[k] = blocks[k] - pref
        d1 = RMatrix.hstack(blocks)
        if not (d1 @ self.d0).is_zero():
            raise AssertionError("d1 . d0 != 0; relator check should prevent this")
        return d1

    @cached_property
    def d0_solver(self) -> LinearSolver:
        return LinearSolver(self.d0)

    @cached_property
    def d1_solver(self) -> LinearSolver:
        return LinearSolver(self.d1)

    @cached_property
    def im_d0_reducer(self) -> SpanReducer:
        cols = [self.d0.col(j) for j in range(self.d0.cols)]
        return SpanReducer(self.ring, cols, width=self.d0.rows)

    @cached_property
    def im_d1_reducer(self) -> SpanReducer:
        cols = [self.d1.col(j) for j in range(self.d1.cols)]
        return SpanReducer(self.ring, cols, width=self.d1.rows)

    def is_cocycle(self, vec: Sequence[int]) -> bool:
        return all(x == 0 for x in self.d1.apply(vec))

    def evaluate_d1(self, values: Sequence[Sequence[int]]) -> tuple[int, ...]:
        return self.d1.apply(stack(values))


@lru_cache(maxsize=None)
def complex_of(module: GModule) -> CochainComplex:
    return CochainComplex(module)


class CohClass:
    """A cohomology class in degree 1 or 2, held as one cochain vector.

    Degree-1 vectors are cocycles (checked); equality and is_zero are taken
    modulo the image of the lower differential, via canonical coset
    representatives.
    """

    __slots__ = ("cx", "degree", "vector")

    def __init__(self, cx: CochainComplex, degree: int, vector: Sequence[int]):
        if degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        vec = vec_mod(cx.ring, vector)
        n = cx.module.rank
        want = n * cx.n_gens if degree == 1 else n
        if len(vec) != want:
            raise ValueError(f"degree-{degree} cochain needs length {want}, got {len(vec)}")
        if degree == 1 and not cx.is_cocycle(vec):
            raise ValueError("degree-1 vector is not a cocycle")
        self.cx = cx
        self.degree = degree
        self.vector = vec

    def canonical(self) -> tuple[int, ...]:
        red = self.cx.im_d0_reducer if self.degree == 1 else self.cx.im_d1_reducer
        return red.reduce(self.vector)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.canonical())

    def witness(self) -> tuple[int, ...] | None:
        """A cochain one degree down hitting this vector, if one exists."""
        solver = self.cx.d0_solver if self.degree == 1 else self.cx.d1_solver
        return solver.solve(self.vector)

    def values(self) -> list[tuple[int, ...]]:
        if self.degree != 1:
            raise ValueError("per-generator values only make sense in degree 1")
        return unstack(self.vector, self.cx.module.rank, self.cx.n_gens)

    def __add__(self, other: "CohClass") -> "CohClass":
        self._compat(other)
        return CohClass(self.cx, self.degree, vec_add(self.cx.ring, self.vector, other.vector))

    def __sub__(self, other: "CohClass") -> "CohClass":
        self._compat(other)
        return CohClass(
            self.cx,
            self.degree,
            vec_add(self.cx.ring, self.vector, vec_scale(self.cx.ring, -1, other.vector)),
        )

    def scale(self, c: int) -> "CohClass":
        return CohClass(self.cx, self.degree, vec_scale(self.cx.ring, c, self.vector))

    def _compat(self, other: "CohClass") -> None:
        if self.cx != other.cx or self.degree != other.degree:
            raise ValueError("classes live in different groups")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohClass):
            return NotImplemented
        return (
            self.cx == other.cx
            and self.degree == other.degree
            and self.canonical() == other.canonical()
        )

    def __hash__(self) -> int:
        return hash((self.cx.module, self.degree, self.canonical()))

    def __repr__(self) -> str:
        return f"CohClass(deg={self.degree}, vec={list(self.vector)})"


@dataclass(frozen=True)
class ModuleShape:
    """A finite abelian p-group: ascending exponents plus representatives."""

    invariants: tuple[int, ...]
    reps: tuple[tuple[int, ...], ...]

    def size_exponent(self) -> int:
        return sum(self.invariants)


@dataclass(frozen=True)
class CohomologyReport:
    module: GModule
    h0: ModuleShape
    h1: ModuleShape
    h2: ModuleShape


def h_groups(module: GModule) -> CohomologyReport:
    """Invariants and representative generators of H^0, H^1, H^2."""
    cx = complex_of(module)
    ring = module.ring
    kg0 = sorted(cx.d0_solver.kernel(), key=lambda ge: ge[1])
    h0 = ModuleShape(tuple(e for _, e in kg0), tuple(v for v, _ in kg0))
    gens1 = [vec for vec, _ in cx.d1_solver.kernel()]
    rels1 = [cx.d0.col(j) for j in range(cx.d0.cols)]
    q = quotient_data(ring, gens1, rels1)
    h1 = ModuleShape(q.invariants, q.reps)
    c = cokernel_data(cx.d1)
    h2 = ModuleShape(c.invariants, c.reps)
    return CohomologyReport(module, h0, h1, h2)


# ---------------------------------------------------------------------------
# cup products


def cup(u: CohClass, v: CohClass) -> CohClass:
    """Cup product of two degree-1 classes, valued in the tensor module.

    Chain level evaluation on the relator: walking the relator letters, each
    step contributes u(prefix) tensor prefix.v(letter), and each inverse
    letter s^-1 at prefix q additionally contributes q.(u(s) tensor v(s)).
    The extra terms are what the section-times-section expansion of the
    extension product produces on inverse letters; dropping them breaks
    antisymmetry (and the symplectic Gram matrix) already for g = 1.
    """
    if u.degree != 1 or v.degree != 1:
        raise ValueError("cup is defined on degree-1 classes")
    a, b = u.cx.module, v.cx.module
    if (a.ring, a.genus) != (b.ring, b.genus):
        raise ValueError("cup factors must share ring and genus")
    ring = a.ring
    t_mod = tensor_module(a, b)
    uvals = u.values()
    vvals = v.values()
    total = t_mod.zero()
    uacc = a.zero()
    a_acc = RMatrix.identity(ring, a.rank)
    b_acc = RMatrix.identity(ring, b.rank)
    for t in a.presentation.relator():
        k = abs(t) - 1
        if t > 0:
            vt = vvals[k]
        else:
            vt = vec_scale(ring, -1, b.inverses[k].apply(vvals[k]))
        total = vec_add(ring, total, tensor_vec(ring, uacc, b_acc.apply(vt)))
        if t > 0:
            uacc = vec_add(ring, uacc, a_acc.apply(uvals[k]))
            a_acc = a_acc @ a.acts[k]
            b_acc = b_acc @ b.acts[k]
        else:
            uacc = vec_add(
                ring, uacc, vec_scale(ring, -1, (a_acc @ a.inverses[k]).apply(uvals[k]))
            )
            a_acc = a_acc @ a.inverses[k]
            b_acc = b_acc @ b.inverses[k]
            total = vec_add(
                ring, total, tensor_vec(ring, a_acc.apply(uvals[k]), b_acc.apply(vvals[k]))
            )
    return CohClass(complex_of(t_mod), 2, total)


@dataclass(frozen=True)
class DemushkinReport:
    p: int
    genus: int
    h2_invariants: tuple[int, ...]
    gram: RMatrix
    gram_invertible: bool

    @property
    def ok(self) -> bool:
        return self.h2_invariants == (1,) and self.gram_invertible


def demushkin_report(p: int, genus: int) -> DemushkinReport:
    """One-dimensional H^2 and a nondegenerate cup pairing on H^1, mod p."""
    ring = RingSpec(p, 1)
    mod = trivial_module(ring, genus, 1)
    cx = complex_of(mod)
    n = 2 * genus
    basis = [CohClass(cx, 1, tuple(1 if i == j else 0 for j in range(n))) for i in range(n)]
    gram_rows = []
    for ui in basis:
        row = []
        for vj in basis:
            val = cup(ui, vj).canonical()
            row.append(val[0])
        gram_rows.append(row)
    gram = RMatrix.from_rows(ring, gram_rows)
    h2 = cokernel_data(cx.d1)
    return DemushkinReport(p, genus, h2.invariants, gram, gram.is_invertible())


# ---------------------------------------------------------------------------
# extensions of modules


@dataclass(frozen=True)
class ExtensionData:
    """A short exact sequence of modules 0 -> sub -> total -> quotient -> 0.

    ``iota`` and ``pi`` are equivariant, ``section`` is a linear (not
    necessarily equivariant) section of pi; exactness is certified by
    [iota | section] being invertible.
    """

    sub: GModule
    total: GModule
    quotient: GModule
    iota: RMatrix
    pi: RMatrix
    section: RMatrix

    def __post_init__(self) -> None:
        a, b, c = self.sub, self.total, self.quotient
        if not (a.ring == b.ring == c.ring and a.genus == b.genus == c.genus):
            raise ValueError("extension members must share ring and genus")
        if b.rank != a.rank + c.rank:
            raise ValueError("ranks do not add up")
        if (self.iota.rows, self.iota.cols) != (b.rank, a.rank):
            raise ValueError("iota shape mismatch")
        if (self.pi.rows, self.pi.cols) != (c.rank, b.rank):
            raise ValueError("pi shape mismatch")
        if (self.section.rows, self.section.cols) != (b.rank, c.rank):
            raise ValueError("section shape mismatch")
        if not (self.pi @ self.iota).is_zero():
            raise ValueError("pi . iota != 0")
        if self.pi @ self.section != RMatrix.identity(a.ring, c.rank):
            raise ValueError("section does not split pi")
        if a.rank and not RMatrix.hstack([self.iota, self.section]).is_invertible():
            raise ValueError("[iota | section] must be invertible (exactness)")
        for g in range(2 * a.genus):
            if b.acts[g] @ self.iota != self.iota @ a.acts[g]:
                raise ValueError(f"iota not equivariant at generator {g + 1}")
            if self.pi @ b.acts[g] != c.acts[g] @ self.pi:
                raise ValueError(f"pi not equivariant at generator {g + 1}")

    @property
    def ring(self) -> RingSpec:
        return self.sub.ring

    @cached_property
    def retraction(self) -> RMatrix:
        """The linear left inverse of iota killing the section image."""
        if self.sub.rank == 0:
            return RMatrix.zeros(self.ring, 0, self.total.rank)
        full = RMatrix.hstack([self.iota, self.section]).inverse()
        return full.submatrix(range(self.sub.rank), range(self.total.rank))


def coordinate_extension(total: GModule, n_sub: int) -> ExtensionData:
    """Extension from a block upper-triangular module, split by coordinates."""
    ring = total.ring
    n = total.rank
    if not 0 <= n_sub <= n:
        raise ValueError("sub rank out of range")
    lo = list(range(n_sub))
    hi = list(range(n_sub, n))
    for g, m in enumerate(total.acts):
        if not m.submatrix(hi, lo).is_zero():
            raise ValueError(f"generator {g + 1} does not preserve the leading block")
    sub = GModule(ring, total.genus, tuple(m.submatrix(lo, lo) for m in total.acts))
    quo = GModule(ring, total.genus, tuple(m.submatrix(hi, hi) for m in total.acts))
    eye = RMatrix.identity(ring, n)
    iota = eye.submatrix(range(n), lo)
    pi = eye.submatrix(hi, range(n))
    section = eye.submatrix(range(n), hi)
    return ExtensionData(sub, total, quo, iota, pi, section)


def extension_class(ext: ExtensionData) -> CohClass:
    """The degree-1 class of the extension in hom(quotient, sub)."""
    a, b, c = ext.sub, ext.total, ext.quotient
    hom = hom_module(c, a)
    vals = []
    for g in range(2 * b.genus):
        mg = b.acts[g] @ ext.section @ c.inverses[g] - ext.section
        if not (ext.pi @ mg).is_zero():
            raise AssertionError("section defect must land in the sub")
        x = ext.retraction @ mg
        if ext.iota @ x != mg:
            raise AssertionError("retraction postcondition failed")
        vals.append(hom_vec(x))
    return CohClass(complex_of(hom), 1, stack(vals))


@dataclass(frozen=True)
class SplitResult:
    splits: bool
    section: RMatrix | None  # equivariant when splits


def split_section(ext: ExtensionData) -> SplitResult:
    """Decide splitness; on success return an equivariant section."""
    cls = extension_class(ext)
    w = cls.witness()
    if w is None:
        return SplitResult(False, None)
    m = hom_mat(ext.ring, w, ext.sub.rank, ext.quotient.rank)
    s2 = ext.section - ext.iota @ m
    for g in range(2 * ext.sub.genus):
        if ext.total.acts[g] @ s2 != s2 @ ext.quotient.acts[g]:
            raise AssertionError("corrected section is not equivariant")
    return SplitResult(True, s2)


def connecting(ext: ExtensionData, v: CohClass) -> CohClass:
    """H^1(quotient) -> H^2(sub): lift by the section, evaluate the relator."""
    if v.degree != 1 or v.cx.module != ext.quotient:
        raise ValueError("need a degree-1 class in the quotient module")
    lifted = [ext.section.apply(val) for val in v.values()]
    w = crossed_value(ext.total, lifted, ext.total.presentation.relator())
    if not all(x == 0 for x in ext.pi.apply(w)):
        raise AssertionError("relator value must land in the sub")
    a = ext.retraction.apply(w)
    if ext.iota.apply(a) != tuple(w):
        raise AssertionError("relator value not in the image of iota")
    return CohClass(complex_of(ext.sub), 2, a)


def solve_cup(ext: ExtensionData, target: CohClass) -> CohClass:
    """Find a degree-1 class in the quotient whose connecting image is target.

    Mod-p coefficients only.  The solution is the deterministic canonical
    one of the underlying solver.  Raises LiftConsistencyError when no
    solution exists (the callers only invoke this in situations where one
    is guaranteed).
    """
    ring = ext.ring
    if ring.r != 1:
        raise ValueError("solve_cup expects mod-p coefficient modules")
    if target.degree != 2 or target.cx.module != ext.sub:
        raise ValueError("target must be a degree-2 class in the sub module")
    cx_c = complex_of(ext.quotient)
    cx_a = complex_of(ext.sub)
    kgens = [vec for vec, _ in cx_c.d1_solver.kernel()]
    cols = [connecting(ext, CohClass(cx_c, 1, vec)).vector for vec in kgens]
    im_cols = [cx_a.d1.col(j) for j in range(cx_a.d1.cols)]
    width = len(cols) + len(im_cols)
    if width == 0:
        if all(x == 0 for x in target.vector):
            return CohClass(cx_c, 1, (0,) * (ext.quotient.rank * 2 * ext.quotient.genus))
        raise LiftConsistencyError("connecting map cannot hit a nonzero target")
    mat = RMatrix.from_rows(ring, [list(col) for col in cols + im_cols]).transpose()
    sol = LinearSolver(mat).solve(target.vector)
    if sol is None:
        raise LiftConsistencyError("no cocycle maps onto the target obstruction")
    eps = [0] * (ext.quotient.rank * 2 * ext.quotient.genus)
    for lam, gen in zip(sol[: len(cols)], kgens):
        if lam:
            eps = [
                (x + lam * y) % ring.modulus for x, y in zip(eps, gen)
            ]
    return CohClass(cx_c, 1, tuple(eps))
