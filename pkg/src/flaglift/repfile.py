"""Plain-text formats for representations, modules, and cocycles.

A representation file is a key-value header followed by one row-major
integer matrix per generator, in x1, y1, x2, y2, ... order:

    p 2
    r 2
    genus 1
    dim 3
    generator x1
    1 1 0
    0 1 1
    0 0 1
    generator y1
    ...
    characters        (optional; one row per piece, one value per generator)
    1 1
    ...

Blank lines and '#' comments are ignored on load; save emits the canonical
layout so that load then save is the identity on saved documents.
"""

from __future__ import annotations

from .flags import Flag
from .surface import GModule, Presentation, SurfaceRep
from .zmod import RingSpec, RMatrix


class RepFileError(ValueError):
    """Malformed or inconsistent representation file."""


def _lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


class _Cursor:
    def __init__(self, text: str) -> None:
        self.rows = _lines(text)
        self.pos = 0

    def peek(self) -> list[str] | None:
        return self.rows[self.pos] if self.pos < len(self.rows) else None

    def take(self) -> list[str]:
        row = self.peek()
        if row is None:
            raise RepFileError("unexpected end of file")
        self.pos += 1
        return row

    def take_key(self, key: str) -> list[str]:
        row = self.take()
        if row[0] != key:
            raise RepFileError(f"expected '{key}', found '{row[0]}'")
        return row[1:]

    def take_int(self, key: str) -> int:
        vals = self.take_key(key)
        if len(vals) != 1:
            raise RepFileError(f"'{key}' takes exactly one integer")
        try:
            return int(vals[0])
        except ValueError as exc:
            raise RepFileError(f"'{key}' is not an integer: {vals[0]}") from exc


def _take_matrix(cur: _Cursor, ring: RingSpec, dim: int) -> RMatrix:
    rows = []
    for _ in range(dim):
        row = cur.take()
        try:
            vals = [int(v) for v in row]
        except ValueError as exc:
            raise RepFileError(f"non-integer matrix entry in {row}") from exc
        if len(vals) != dim:
            raise RepFileError(f"matrix row has {len(vals)} entries, expected {dim}")
        for v in vals:
            if not 0 <= v < ring.modulus:
                raise RepFileError(f"entry {v} out of range [0, {ring.modulus})")
        rows.append(vals)
    return RMatrix.from_rows(ring, rows)


def _parse_header(cur: _Cursor) -> tuple[RingSpec, int, int]:
    p = cur.take_int("p")
    r = cur.take_int("r")
    genus = cur.take_int("genus")
    dim = cur.take_int("dim")
    try:
        ring = RingSpec(p, r)
    except ValueError as exc:
        raise RepFileError(str(exc)) from exc
    if genus < 1:
        raise RepFileError("genus must be >= 1")
    if dim < 0:
        raise RepFileError("dim must be >= 0")
    return ring, genus, dim


def _parse_generators(cur: _Cursor, ring: RingSpec, genus: int, dim: int) -> list[RMatrix]:
    pres = Presentation(genus)
    mats = []
    for g in range(1, 2 * genus + 1):
        name = cur.take_key("generator")
        if name != [pres.gen_name(g)]:
            raise RepFileError(f"expected generator {pres.gen_name(g)}, found {name}")
        mats.append(_take_matrix(cur, ring, dim))
    return mats


def _parse_optional_characters(
    cur: _Cursor, genus: int, dim: int
) -> tuple[tuple[int, ...], ...] | None:
    if cur.peek() != ["characters"]:
        return None
    cur.take()
    chars = []
    for _ in range(dim):
        row = cur.take()
        if len(row) != 2 * genus:
            raise RepFileError("character row needs one value per generator")
        try:
            chars.append(tuple(int(v) for v in row))
        except ValueError as exc:
            raise RepFileError(f"non-integer character entry in {row}") from exc
    return tuple(chars)


def _finish(cur: _Cursor) -> None:
    if cur.peek() is not None:
        raise RepFileError(f"trailing content: {' '.join(cur.peek())}")


def load_rep(text: str) -> SurfaceRep:
    """Parse a representation file; validates ranges, invertibility, relator."""
    cur = _Cursor(text)
    ring, genus, dim = _parse_header(cur)
    mats = _parse_generators(cur, ring, genus, dim)
    chars = _parse_optional_characters(cur, genus, dim)
    _finish(cur)
    if chars is not None:
        diag = tuple(tuple(m.entry(i, i) for m in mats) for i in range(dim))
        if chars != diag:
            raise RepFileError("character block does not match the matrix diagonal")
    try:
        return SurfaceRep(ring, genus, tuple(mats))
    except ValueError as exc:
        raise RepFileError(str(exc)) from exc


def load_flag(text: str) -> Flag:
    """Parse as a flag; a characters block, when present, must match."""
    rep = load_rep(text)
    try:
        return Flag(rep)
    except ValueError as exc:
        raise RepFileError(str(exc)) from exc


def load_module(text: str) -> GModule:
    """Parse a coefficient module file (same layout as a representation)."""
    rep = load_rep(text)
    return rep.as_module()


def save_rep(obj: SurfaceRep | Flag, with_characters: bool | None = None) -> str:
    """Canonical text form; flags include their character table by default."""
    flag = obj if isinstance(obj, Flag) else None
    rep = obj.rep if flag is not None else obj
    if with_characters is None:
        with_characters = flag is not None
    pres = Presentation(rep.genus)
    out = [
        f"p {rep.ring.p}",
        f"r {rep.ring.r}",
        f"genus {rep.genus}",
        f"dim {rep.dim}",
    ]
    for g in range(1, 2 * rep.genus + 1):
        out.append(f"generator {pres.gen_name(g)}")
        m = rep.mats[g - 1]
        for i in range(rep.dim):
            out.append(" ".join(str(m.entry(i, j)) for j in range(rep.dim)))
    if with_characters:
        target = flag if flag is not None else Flag(rep)
        out.append("characters")
        for i in range(1, rep.dim + 1):
            out.append(" ".join(str(v) for v in target.char(i)))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# cocycle files: one value row per generator


def load_cocycle(text: str) -> tuple[RingSpec, int, int, tuple[tuple[int, ...], ...]]:
    """Parse a cocycle file: (ring, genus, dim, per-generator value rows)."""
    cur = _Cursor(text)
    ring, genus, dim = _parse_header(cur)
    pres = Presentation(genus)
    rows = []
    for g in range(1, 2 * genus + 1):
        name = cur.take_key("values")
        if name != [pres.gen_name(g)]:
            raise RepFileError(f"expected values {pres.gen_name(g)}, found {name}")
        row = cur.take()
        if len(row) != dim:
            raise RepFileError(f"value row has {len(row)} entries, expected {dim}")
        vals = tuple(int(v) for v in row)
        for v in vals:
            if not 0 <= v < ring.modulus:
                raise RepFileError(f"entry {v} out of range [0, {ring.modulus})")
        rows.append(vals)
    if cur.peek() is not None:
        raise RepFileError(f"trailing content: {' '.join(cur.peek())}")
    return ring, genus, dim, tuple(rows)


def save_cocycle(
    ring: RingSpec, genus: int, dim: int, rows: tuple[tuple[int, ...], ...]
) -> str:
    pres = Presentation(genus)
    out = [f"p {ring.p}", f"r {ring.r}", f"genus {genus}", f"dim {dim}"]
    for g, row in enumerate(rows, start=1):
        out.append(f"values {pres.gen_name(g)}")
        out.append(" ".join(str(v % ring.modulus) for v in row))
    return "\n".join(out) + "\n"
