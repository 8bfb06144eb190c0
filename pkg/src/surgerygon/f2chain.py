"""Exact linear and homological algebra over the two-element field.

Vectors are Python ints used as bitsets (bit ``c`` is coordinate ``c``) and
matrices store one such bitset per row.  Row reduction therefore XORs whole
machine words at a time.  Nothing in here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

__all__ = [
    "F2Error",
    "MatrixF2",
    "Subspace",
    "ChainComplexF2",
    "ChainMapF2",
    "FilteredComplexF2",
    "SpectralPage",
    "rank_f2",
    "homology",
    "cone",
    "is_quasi_iso",
    "induced_rank",
    "spectral_sequence",
    "associated_graded_homology",
    "kernel",
    "preimage",
    "layout",
    "scatter",
    "gather",
    "random_complex",
    "random_chain_map",
    "random_contractible",
]


class F2Error(ValueError):
    """Malformed input to an F2 construction."""


def _parity(x: int) -> int:
    return x.bit_count() & 1


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class MatrixF2:
    """Dense bit-packed matrix; ``rows[i]`` holds row ``i`` as a bitset."""

    nrows: int
    ncols: int
    rows: Tuple[int, ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise F2Error("negative matrix shape")
        if len(self.rows) != self.nrows:
            raise F2Error(f"expected {self.nrows} rows, got {len(self.rows)}")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise F2Error("row has bits outside the column range")

    # constructors
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "MatrixF2":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "MatrixF2":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_strings(cls, rows: Sequence[str], ncols: Optional[int] = None) -> "MatrixF2":
        """Parse rows like ``"0110"``; character ``c`` is column ``c``."""
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        out = []
        for s in rows:
            if len(s) != ncols or set(s) - {"0", "1"}:
                raise F2Error(f"bad row string {s!r}")
            out.append(sum(1 << c for c, ch in enumerate(s) if ch == "1"))
        return cls(len(rows), ncols, tuple(out))

    @classmethod
    def from_dense(cls, entries) -> "MatrixF2":
        """Build from a nested sequence (or 2-d array) of 0/1 values."""
        entries = [list(map(int, r)) for r in entries]
        ncols = len(entries[0]) if entries else 0
        rows = tuple(sum((v & 1) << c for c, v in enumerate(r)) for r in entries)
        return cls(len(entries), ncols, rows)

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[int]) -> "MatrixF2":
        rows = [0] * nrows
        for c, col in enumerate(cols):
            while col:
                low = col & -col
                rows[low.bit_length() - 1] |= 1 << c
                col ^= low
        return cls(nrows, len(cols), tuple(rows))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["MatrixF2"]]) -> "MatrixF2":
        """Assemble a block matrix; every block row must share heights."""
        if not blocks:
            return cls.zeros(0, 0)
        widths = [b.ncols for b in blocks[0]]
        rows: List[int] = []
        for brow in blocks:
            if [b.ncols for b in brow] != widths:
                raise F2Error("block column widths disagree")
            height = brow[0].nrows if brow else 0
            if any(b.nrows != height for b in brow):
                raise F2Error("block row heights disagree")
            for i in range(height):
                acc, off = 0, 0
                for b, w in zip(brow, widths):
                    acc |= b.rows[i] << off
                    off += w
                rows.append(acc)
        return cls(len(rows), sum(widths), tuple(rows))

    # access
    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {ij} outside shape {self.shape}")
        return (self.rows[i] >> j) & 1

    def to_strings(self) -> List[str]:
        return ["".join("1" if (r >> c) & 1 else "0" for c in range(self.ncols)) for r in self.rows]

    def to_dense(self) -> List[List[int]]:
        return [[(r >> c) & 1 for c in range(self.ncols)] for r in self.rows]

    def columns(self) -> List[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return cols

    def is_zero(self) -> bool:
        return not any(self.rows)

    # algebra
    def apply(self, v: int) -> int:
        """Image of the column vector ``v``."""
        out = 0
        for i, r in enumerate(self.rows):
            if _parity(r & v):
                out |= 1 << i
        return out

    def __add__(self, other: "MatrixF2") -> "MatrixF2":
        if self.shape != other.shape:
            raise F2Error(f"cannot add {self.shape} and {other.shape}")
        return MatrixF2(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    __sub__ = __add__

    def __matmul__(self, other: "MatrixF2") -> "MatrixF2":
        if self.ncols != other.nrows:
            raise F2Error(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= orows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return MatrixF2(self.nrows, other.ncols, tuple(out))

    def transpose(self) -> "MatrixF2":
        return MatrixF2(self.ncols, self.nrows, tuple(self.columns()))

    @property
    def T(self) -> "MatrixF2":
        return self.transpose()

    def rank(self) -> int:
        return rank_f2(self.rows)

    def power(self, k: int) -> "MatrixF2":
        if self.nrows != self.ncols:
            raise F2Error("power of a non-square matrix")
        out, base = MatrixF2.identity(self.nrows), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_nilpotent(self) -> bool:
        """True iff some power vanishes; checking the dimension-th power suffices."""
        if self.nrows != self.ncols:
            raise F2Error("nilpotency of a non-square matrix")
        return self.power(self.nrows).is_zero()

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def submatrix(self, row_off: int, nrows: int, col_off: int, ncols: int) -> "MatrixF2":
        mask = (1 << ncols) - 1
        rows = tuple((r >> col_off) & mask for r in self.rows[row_off:row_off + nrows])
        return MatrixF2(nrows, ncols, rows)


def rank_f2(rows: Iterable[int]) -> int:
    """Rank of a set of bitset vectors (pivot on the highest set bit)."""
    pivots: Dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


# ---------------------------------------------------------------------------
# subspaces


class _Echelon:
    """Incremental echelon basis whose vectors carry XOR tags."""

    __slots__ = ("piv",)

    def __init__(self):
        self.piv: Dict[int, Tuple[int, int]] = {}

    def reduce(self, v: int) -> Tuple[int, int]:
        tag = 0
        while v:
            h = v.bit_length() - 1
            p = self.piv.get(h)
            if p is None:
                break
            v ^= p[0]
            tag ^= p[1]
        return v, tag

    def reduce_full(self, v: int) -> Tuple[int, int]:
        """Reduce every pivot bit, not only the leading one."""
        tag = 0
        for h in sorted(self.piv, reverse=True):
            if (v >> h) & 1:
                vec, t = self.piv[h]
                v ^= vec
                tag ^= t
        return v, tag

    def insert(self, v: int, tag: int = 0) -> Tuple[bool, int]:
        """Insert ``v``; returns (was_independent, tag of the residual)."""
        r, t = self.reduce(v)
        t ^= tag
        if r:
            self.piv[r.bit_length() - 1] = (r, t)
            return True, t
        return False, t


@dataclass(frozen=True)
class Subspace:
    """A subspace of F2^ambient given by an echelon basis."""

    ambient: int
    basis: Tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[int], ambient: int) -> "Subspace":
        ech = _Echelon()
        for v in vectors:
            ech.insert(v)
        return cls(ambient, tuple(sorted((p[0] for p in ech.piv.values()), reverse=True)))

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls(ambient, tuple(1 << i for i in reversed(range(ambient))))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def coordinate(cls, ambient: int, coords: Iterable[int]) -> "Subspace":
        return cls.span((1 << c for c in coords), ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _echelon(self) -> _Echelon:
        ech = _Echelon()
        for v in self.basis:
            ech.insert(v)
        return ech

    def contains(self, v: int) -> bool:
        return self._echelon().reduce(v)[0] == 0

    def contains_space(self, other: "Subspace") -> bool:
        ech = self._echelon()
        return all(ech.reduce(v)[0] == 0 for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.contains_space(other)

    def __hash__(self):
        return hash((self.ambient, self.dim))

    def intersect(self, other: "Subspace") -> "Subspace":
        return preimage(None, other, self)

    def image(self, m: MatrixF2) -> "Subspace":
        return Subspace.span((m.apply(v) for v in self.basis), m.nrows)


def preimage(m: Optional[MatrixF2], target: Subspace, within: Subspace) -> Subspace:
    """``{u in within : m u in target}``; ``m=None`` means the identity."""
    tech = target._echelon()
    ech = _Echelon()
    kernel = []
    for i, u in enumerate(within.basis):
        y = u if m is None else m.apply(u)
        # full reduction gives a canonical, hence linear, residual
        r, _ = tech.reduce_full(y)
        indep, tag = ech.insert(r, 1 << i)
        if not indep:
            kernel.append(tag)
    vecs = []
    for tag in kernel:
        acc = 0
        while tag:
            low = tag & -tag
            acc ^= within.basis[low.bit_length() - 1]
            tag ^= low
        vecs.append(acc)
    return Subspace.span(vecs, within.ambient)


def kernel(m: MatrixF2) -> Subspace:
    return preimage(m, Subspace.zero(m.nrows), Subspace.whole(m.ncols))


# ---------------------------------------------------------------------------
# complexes


_GRADINGS = ("integer", "mod2")


@dataclass(frozen=True, eq=False)
class ChainComplexF2:
    """Graded F2 vector spaces with a differential lowering degree by one.

    For ``grading="mod2"`` the degrees are 0 and 1 and the differential flips
    parity, i.e. the complex is stored as a 2-periodic integer complex.
    ``diffs[q]`` is the matrix of ``d: C_q -> C_{q-1}`` (rows index the
    target).  Missing entries mean zero.
    """

    dims: Mapping[int, int]
    diffs: Mapping[int, MatrixF2] = field(default_factory=dict)
    grading: str = "integer"

    def __post_init__(self):
        if self.grading not in _GRADINGS:
            raise F2Error(f"unknown grading {self.grading!r}")
        dims = {int(q): int(n) for q, n in self.dims.items() if int(n) != 0}
        if any(n < 0 for n in dims.values()):
            raise F2Error("negative dimension")
        if self.grading == "mod2" and set(dims) - {0, 1}:
            raise F2Error("mod-2 complexes live in degrees 0 and 1")
        diffs = {}
        for q, m in self.diffs.items():
            q = int(q)
            want = (dims.get(self.tgt(q), 0), dims.get(q, 0))
            if m.shape != want:
                raise F2Error(f"differential in degree {q} has shape {m.shape}, expected {want}")
            if not m.is_zero():
                diffs[q] = m
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "diffs", diffs)
        for q in diffs:
            dd = self.d(self.tgt(q)) @ self.d(q)
            if not dd.is_zero():
                raise F2Error(f"d∘d is nonzero starting in degree {q}")

    # grading helpers
    def tgt(self, q: int) -> int:
        return q - 1 if self.grading == "integer" else (q - 1) % 2

    def src(self, q: int) -> int:
        """Degree whose differential lands in degree ``q``."""
        return q + 1 if self.grading == "integer" else (q + 1) % 2

    def shift_degree(self, q: int, k: int) -> int:
        return q + k if self.grading == "integer" else (q + k) % 2

    def dim(self, q: int) -> int:
        return self.dims.get(q, 0)

    def degrees(self) -> List[int]:
        return sorted(self.dims)

    def d(self, q: int) -> MatrixF2:
        m = self.diffs.get(q)
        if m is None:
            return MatrixF2.zeros(self.dim(self.tgt(q)), self.dim(q))
        return m

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def offsets(self) -> Dict[int, int]:
        off, out = 0, {}
        for q in self.degrees():
            out[q] = off
            off += self.dims[q]
        return out

    def total_differential(self) -> MatrixF2:
        """The differential on the direct sum of all degrees, ordered by degree."""
        n = self.total_dim
        off = self.offsets()
        rows = [0] * n
        for q, m in self.diffs.items():
            r0, c0 = off[self.tgt(q)], off[q]
            for i, r in enumerate(m.rows):
                rows[r0 + i] |= r << c0
        return MatrixF2(n, n, tuple(rows))

    def parities(self) -> List[int]:
        """Degree mod 2 of every total basis vector."""
        out = []
        for q in self.degrees():
            out.extend([q % 2] * self.dims[q])
        return out

    def homology(self) -> Dict[int, int]:
        return homology(self)

    def is_acyclic(self) -> bool:
        return all(v == 0 for v in self.homology().values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (q % 2) * n for q, n in self.dims.items())

    # constructors
    @classmethod
    def zero(cls, grading: str = "integer") -> "ChainComplexF2":
        return cls({}, {}, grading)

    @classmethod
    def ungraded(cls, D: MatrixF2) -> "ChainComplexF2":
        """Encode an ungraded complex ``(V, D)`` as the 2-periodic complex V ⇄ V.

        Each degree then carries the ungraded homology ``ker D / im D``.
        """
        n = D.nrows
        if D.ncols != n:
            raise F2Error("ungraded differential must be square")
        return cls({0: n, 1: n}, {0: D, 1: D}, "mod2")

    def shifted(self, k: int) -> "ChainComplexF2":
        """``C[k]`` with ``C[k]_q = C_{q-k}``; differentials are unchanged over F2."""
        return ChainComplexF2(
            {self.shift_degree(q, k): n for q, n in self.dims.items()},
            {self.shift_degree(q, k): m for q, m in self.diffs.items()},
            self.grading,
        )

    def direct_sum(self, other: "ChainComplexF2") -> "ChainComplexF2":
        if self.grading != other.grading:
            raise F2Error("cannot sum complexes with different gradings")
        degs = sorted(set(self.dims) | set(other.dims))
        dims = {q: self.dim(q) + other.dim(q) for q in degs}
        diffs = {}
        for q in degs:
            t = self.tgt(q)
            diffs[q] = MatrixF2.block([
                [self.d(q), MatrixF2.zeros(self.dim(t), other.dim(q))],
                [MatrixF2.zeros(other.dim(t), self.dim(q)), other.d(q)],
            ])
        return ChainComplexF2(dims, diffs, self.grading)

    def to_json(self) -> dict:
        return {
            "grading": self.grading,
            "dims": {str(q): n for q, n in sorted(self.dims.items())},
            "differentials": {str(q): m.to_strings() for q, m in sorted(self.diffs.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChainComplexF2":
        grading = obj.get("grading", "integer")
        dims = {int(q): int(n) for q, n in obj.get("dims", {}).items()}
        tgt = (lambda q: q - 1) if grading == "integer" else (lambda q: (q - 1) % 2)
        diffs = {}
        for q, rows in obj.get("differentials", {}).items():
            q = int(q)
            diffs[q] = MatrixF2.from_strings(rows, dims.get(q, 0)) if rows else MatrixF2.zeros(dims.get(tgt(q), 0), dims.get(q, 0))
        return cls(dims, diffs, grading)


def homology(C: ChainComplexF2) -> Dict[int, int]:
    """Dimensions of ker d / im d in every degree, by exact rank."""
    ranks = {q: C.d(q).rank() for q in C.degrees()}
    return {q: C.dim(q) - ranks[q] - ranks.get(C.src(q), 0) for q in C.degrees()}


@dataclass(frozen=True, eq=False)
class ChainMapF2:
    """Degree-``shift`` map; ``blocks[q]`` is the matrix ``C_q -> C'_{q+shift}``."""

    source: ChainComplexF2
    target: ChainComplexF2
    blocks: Mapping[int, MatrixF2] = field(default_factory=dict)
    shift: int = 0

    def __post_init__(self):
        if self.source.grading != self.target.grading:
            raise F2Error("source and target gradings differ")
        blocks = {}
        for q, m in self.blocks.items():
            q = int(q)
            want = (self.target.dim(self._t(q)), self.source.dim(q))
            if m.shape != want:
                raise F2Error(f"block in degree {q} has shape {m.shape}, expected {want}")
            if not m.is_zero():
                blocks[q] = m
        object.__setattr__(self, "blocks", blocks)

    def _t(self, q: int) -> int:
        return self.target.shift_degree(q, self.shift)

    def block(self, q: int) -> MatrixF2:
        m = self.blocks.get(q)
        if m is None:
            return MatrixF2.zeros(self.target.dim(self._t(q)), self.source.dim(q))
        return m

    def is_chain_map(self) -> bool:
        """d'f = f d in every degree (commuting and anticommuting agree over F2)."""
        S, T = self.source, self.target
        degs = set(S.degrees()) | {S.src(q) for q in S.degrees()}
        for q in degs:
            lhs = T.d(self._t(q)) @ self.block(q)
            rhs = self.block(S.tgt(q)) @ S.d(q)
            if lhs.rows != rhs.rows:
                return False
        return True

    def total(self) -> MatrixF2:
        so, to = self.source.offsets(), self.target.offsets()
        rows = [0] * self.target.total_dim
        for q, m in self.blocks.items():
            r0, c0 = to[self._t(q)], so[q]
            for i, r in enumerate(m.rows):
                rows[r0 + i] |= r << c0
        return MatrixF2(self.target.total_dim, self.source.total_dim, tuple(rows))

    @classmethod
    def identity(cls, C: ChainComplexF2) -> "ChainMapF2":
        return cls(C, C, {q: MatrixF2.identity(n) for q, n in C.dims.items()})

    @classmethod
    def zero(cls, S: ChainComplexF2, T: ChainComplexF2, shift: int = 0) -> "ChainMapF2":
        return cls(S, T, {}, shift)

    @classmethod
    def ungraded(cls, S: ChainComplexF2, T: ChainComplexF2, M: MatrixF2) -> "ChainMapF2":
        """Map between two doubled (see ``ChainComplexF2.ungraded``) complexes."""
        return cls(S, T, {0: M, 1: M})

    def compose(self, other: "ChainMapF2") -> "ChainMapF2":
        """``self ∘ other``."""
        blocks = {}
        for q in other.source.degrees():
            mid = other._t(q)
            blocks[q] = self.block(mid) @ other.block(q)
        return ChainMapF2(other.source, self.target, blocks, self.shift + other.shift)

    def to_json(self) -> dict:
        return {"shift": self.shift, "blocks": {str(q): m.to_strings() for q, m in sorted(self.blocks.items())}}


def cone(f: ChainMapF2) -> ChainComplexF2:
    """Mapping cone ``target ⊕ source[1]`` with differential ``d_t + d_s + f``."""
    if f.shift != 0:
        raise F2Error("cone needs a degree-0 map")
    if not f.is_chain_map():
        raise F2Error("cone input is not a chain map")
    S, T = f.source, f.target
    s = lambda q: S.shift_degree(q, -1)  # noqa: E731  source degree sitting in cone degree q
    degs = sorted(set(T.degrees()) | {S.shift_degree(q, 1) for q in S.degrees()})
    dims = {q: T.dim(q) + S.dim(s(q)) for q in degs}
    diffs = {}
    for q in degs:
        t = T.tgt(q)
        diffs[q] = MatrixF2.block([
            [T.d(q), f.block(s(q))],
            [MatrixF2.zeros(S.dim(s(t)), T.dim(q)), S.d(s(q))],
        ])
    return ChainComplexF2(dims, diffs, T.grading)


def is_quasi_iso(f: ChainMapF2) -> bool:
    """True iff the cone of ``f`` is acyclic."""
    return cone(f).is_acyclic()


def induced_rank(M: MatrixF2, D_src: MatrixF2, D_tgt: MatrixF2) -> int:
    """Rank of the map induced on homology of ungraded complexes by ``M``."""
    Z = kernel(D_src)
    B = Subspace.whole(D_tgt.ncols).image(D_tgt)
    return (Z.image(M) + B).dim - B.dim


def ungraded_homology_dim(D: MatrixF2) -> int:
    return D.nrows - 2 * D.rank()


def layout(parts: Sequence[Tuple[ChainComplexF2, int]]) -> Tuple[Dict[int, int], List[List[int]]]:
    """Total-coordinate layout of ``⊕ part[shift]``.

    Returns the dimensions of the sum and, for every part, the list of sum
    coordinates its own total coordinates land on.  Coordinates are ordered
    by degree and, inside a degree, by part.
    """
    if not parts:
        return {}, []
    grading = parts[0][0].grading
    dims: Dict[int, int] = {}
    for C, k in parts:
        for q, n in C.dims.items():
            dq = C.shift_degree(q, k)
            dims[dq] = dims.get(dq, 0) + n
    pos = {}
    off = 0
    for q in sorted(dims):
        pos[q] = off
        off += dims[q]
    index: List[List[int]] = []
    cursor = dict(pos)
    for C, k in parts:
        idx = []
        for q in C.degrees():
            dq = C.shift_degree(q, k)
            idx.extend(range(cursor[dq], cursor[dq] + C.dims[q]))
            cursor[dq] += C.dims[q]
        index.append(idx)
    if grading == "mod2" and set(dims) - {0, 1}:
        raise F2Error("layout produced degrees outside 0, 1")
    return dims, index


def scatter(M: MatrixF2, row_idx: Sequence[int], col_idx: Sequence[int], nrows: int, ncols: int,
            into: Optional[List[int]] = None) -> List[int]:
    """Add ``M`` into an ``nrows x ncols`` row list at the given positions."""
    rows = [0] * nrows if into is None else into
    for i, r in enumerate(M.rows):
        acc = 0
        while r:
            low = r & -r
            acc |= 1 << col_idx[low.bit_length() - 1]
            r ^= low
        rows[row_idx[i]] ^= acc
    return rows


def gather(M: MatrixF2, row_idx: Sequence[int], col_idx: Sequence[int]) -> MatrixF2:
    """Submatrix on the given rows and columns (in that order)."""
    rows = []
    for i in row_idx:
        r = M.rows[i]
        rows.append(sum(((r >> c) & 1) << j for j, c in enumerate(col_idx)))
    return MatrixF2(len(row_idx), len(col_idx), tuple(rows))


# ---------------------------------------------------------------------------
# random instances (for tests and demos)


def _random_invertible(rng, n: int) -> MatrixF2:
    while True:
        m = MatrixF2(n, n, tuple(rng.getrandbits(n) if n else 0 for _ in range(n)))
        if m.is_invertible():
            return m


def _inverse(m: MatrixF2) -> MatrixF2:
    n = m.nrows
    aug = [m.rows[i] | (1 << (n + i)) for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if (aug[i] >> c) & 1)
        aug[c], aug[piv] = aug[piv], aug[c]
        for i in range(n):
            if i != c and (aug[i] >> c) & 1:
                aug[i] ^= aug[c]
    # aug rows now hold [I | M^{-1}] with rows indexed by pivot column
    return MatrixF2(n, n, tuple(r >> n for r in aug))


def random_complex(rng, max_dim: int = 4, degrees: Sequence[int] = (0, 1, 2)) -> ChainComplexF2:
    """Random integer-graded complex: a random splitting conjugated by basis changes."""
    degs = sorted(degrees)
    dims = {q: rng.randint(0, max_dim) for q in degs}
    # standard form: in C_q the first r_q basis vectors hit the last r_q
    # basis vectors of C_{q-1}; needs r_q + r_{q+1} <= dim C_q
    ranks = {}
    for q in degs:
        if q - 1 not in dims:
            ranks[q] = 0
            continue
        ranks[q] = rng.randint(0, max(0, min(dims[q], dims[q - 1] - ranks[q - 1])))
    diffs = {}
    for q in degs:
        r = ranks[q]
        if not r:
            continue
        nt = dims[q - 1]
        rows = [0] * nt
        for i in range(r):
            rows[nt - r + i] = 1 << i
        diffs[q] = MatrixF2(nt, dims[q], tuple(rows))
    basis = {q: _random_invertible(rng, n) for q, n in dims.items()}
    conj = {}
    for q, m in diffs.items():
        conj[q] = basis[q - 1] @ m @ _inverse(basis[q])
    return ChainComplexF2(dims, conj)


def random_contractible(rng, max_pairs: int = 2, degrees: Sequence[int] = (0, 1, 2)) -> Tuple[ChainComplexF2, MatrixF2]:
    """Random acyclic complex with an explicit contraction ``h`` (total matrix).

    It is a sum of elementary pieces ``F2 --1--> F2`` placed in random degrees.
    """
    degs = sorted(degrees)
    pieces = [rng.choice(degs[1:]) for _ in range(rng.randint(0, max_pairs))] if len(degs) > 1 else []
    dims: Dict[int, int] = {}
    for q in pieces:
        dims[q] = dims.get(q, 0) + 1
        dims[q - 1] = dims.get(q - 1, 0) + 1
    cursor = {q: 0 for q in dims}
    place = []
    for q in pieces:
        place.append((q, cursor[q], cursor[q - 1]))
        cursor[q] += 1
        cursor[q - 1] += 1
    diffs = {}
    for q in dims:
        if q - 1 in dims:
            rows = [0] * dims[q - 1]
            for pq, i_top, i_bot in place:
                if pq == q:
                    rows[i_bot] |= 1 << i_top
            diffs[q] = MatrixF2(dims[q - 1], dims[q], tuple(rows))
    C = ChainComplexF2(dims, diffs)
    off = C.offsets()
    n = C.total_dim
    h = [0] * n
    for pq, i_top, i_bot in place:
        h[off[pq] + i_top] |= 1 << (off[pq - 1] + i_bot)
    return C, MatrixF2(n, n, tuple(h))


def random_chain_map(rng, S: ChainComplexF2, T: ChainComplexF2) -> ChainMapF2:
    """Uniformly random degree-0 chain map, sampled from the solution space of d f = f d."""
    degs = [q for q in S.degrees() if T.dim(q)]
    # unknowns: entries of every block f_q
    slots = []
    for q in degs:
        for i in range(T.dim(q)):
            for j in range(S.dim(q)):
                slots.append((q, i, j))
    nvar = len(slots)
    if nvar == 0:
        return ChainMapF2(S, T, {})
    var = {s: k for k, s in enumerate(slots)}
    # each equation (d_T f_q + f_{q-1} d_S)[i, j] = 0 is a linear form in the unknowns
    eqs = []
    for q in set(S.degrees()) | {q + 1 for q in S.degrees()}:
        dT, dS = T.d(q), S.d(q)
        for i in range(T.dim(q - 1)):
            for j in range(S.dim(q)):
                form = 0
                for m in range(T.dim(q)):
                    if dT[i, m] and (q, m, j) in var:
                        form ^= 1 << var[(q, m, j)]
                for m in range(S.dim(q - 1)):
                    if dS[m, j] and (q - 1, i, m) in var:
                        form ^= 1 << var[(q - 1, i, m)]
                if form:
                    eqs.append(form)
    E = MatrixF2(len(eqs), nvar, tuple(eqs))
    sol = kernel(E)
    pick = 0
    for b in sol.basis:
        if rng.getrandbits(1):
            pick ^= b
    blocks = {q: [0] * T.dim(q) for q in degs}
    for (q, i, j), k in var.items():
        if (pick >> k) & 1:
            blocks[q][i] |= 1 << j
    return ChainMapF2(S, T, {q: MatrixF2(T.dim(q), S.dim(q), tuple(r)) for q, r in blocks.items()})


# ---------------------------------------------------------------------------
# filtered complexes and spectral sequences


@dataclass(frozen=True, eq=False)
class FilteredComplexF2:
    """Descending filtration ``F_0 ⊇ F_1 ⊇ … ⊇ F_m`` by subcomplexes.

    Subspaces are given by spanning vectors in the total (degree-ordered)
    coordinates of ``complex``.  ``F_0`` must be the whole space and every
    ``F_p`` must be spanned by homogeneous vectors.
    """

    complex: ChainComplexF2
    filtration: Tuple[Subspace, ...]

    def __post_init__(self):
        C = self.complex
        n = C.total_dim
        spaces = tuple(
            s if isinstance(s, Subspace) else Subspace.span(s, n) for s in self.filtration
        )
        object.__setattr__(self, "filtration", spaces)
        if not spaces or spaces[0].dim != n:
            raise F2Error("F_0 must be the whole complex")
        D = C.total_differential()
        off = C.offsets()
        blocks = {q: Subspace.coordinate(n, range(off[q], off[q] + C.dim(q))) for q in C.degrees()}
        for p, F in enumerate(spaces):
            if p and not spaces[p - 1].contains_space(F):
                raise F2Error(f"F_{p} is not contained in F_{p - 1}")
            if not F.contains_space(F.image(D)):
                raise F2Error(f"F_{p} is not closed under the differential")
            if sum(F.intersect(b).dim for b in blocks.values()) != F.dim:
                raise F2Error(f"F_{p} is not spanned by homogeneous vectors")

    @property
    def length(self) -> int:
        return len(self.filtration)

    @classmethod
    def from_blocks(cls, C: ChainComplexF2, levels: Sequence[Iterable[int]]) -> "FilteredComplexF2":
        """Coordinate filtration; ``levels[p]`` lists the total coordinates in F_p."""
        n = C.total_dim
        return cls(C, tuple(Subspace.coordinate(n, lv) for lv in levels))


@dataclass(frozen=True)
class SpectralPage:
    """Page ``E_r``: dimensions per (filtration level, degree) and the differential d_r.

    ``differentials[(p, q)]`` is the matrix of ``d_r: E_r^{p,q} -> E_r^{p+r, q-1}``
    in the representative bases chosen by pivot order.
    """

    r: int
    terms: Dict[Tuple[int, int], int]
    differentials: Dict[Tuple[int, int], MatrixF2]

    def total(self) -> int:
        return sum(self.terms.values())

    def rank(self, key: Tuple[int, int]) -> int:
        m = self.differentials.get(key)
        return 0 if m is None else m.rank()


class _SSData:
    def __init__(self, F: FilteredComplexF2):
        self.C = F.complex
        self.n = self.C.total_dim
        self.D = self.C.total_differential()
        self.F = F.filtration
        self.m = len(self.F)
        off = self.C.offsets()
        self.V = {q: Subspace.coordinate(self.n, range(off[q], off[q] + self.C.dim(q))) for q in self.C.degrees()}
        self._cache: Dict[tuple, Subspace] = {}

    def Fp(self, p: int) -> Subspace:
        if p <= 0:
            return self.F[0]
        if p >= self.m:
            return Subspace.zero(self.n)
        return self.F[p]

    def Fpq(self, p: int, q: int) -> Subspace:
        key = ("F", p, q)
        if key not in self._cache:
            V = self.V.get(q, Subspace.zero(self.n))
            self._cache[key] = self.Fp(p).intersect(V)
        return self._cache[key]

    def Z(self, r: int, p: int, q: int) -> Subspace:
        key = ("Z", r, p, q)
        if key not in self._cache:
            self._cache[key] = preimage(self.D, self.Fp(p + r), self.Fpq(p, q))
        return self._cache[key]

    def B(self, r: int, p: int, q: int) -> Subspace:
        key = ("B", r, p, q)
        if key not in self._cache:
            src = self.Fpq(p - r, self.C.src(q)).image(self.D)
            self._cache[key] = src.intersect(self.Fp(p))
        return self._cache[key]

    def den(self, r: int, p: int, q: int) -> Subspace:
        return self.Z(r - 1, p + 1, q) + self.B(r - 1, p, q)


def _quotient_basis(Z: Subspace, den: Subspace) -> Tuple[_Echelon, List[int]]:
    ech = _Echelon()
    for v in den.basis:
        ech.insert(v, 0)
    reps = []
    for v in Z.basis:
        indep, _ = ech.insert(v, 1 << len(reps))
        if indep:
            reps.append(v)
    return ech, reps


def spectral_sequence(F: FilteredComplexF2, max_page: int) -> List[SpectralPage]:
    """Pages ``E_1 … E_max_page`` via the Z_r / B_r subquotients.

    ``E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q} + B_{r-1}^{p,q})`` with
    ``Z_r^p = F_p ∩ D^{-1}F_{p+r}`` and ``B_r^p = F_p ∩ D F_{p-r}``, so that
    ``E_0`` is the associated graded complex and ``E_1`` its homology.
    """
    if max_page < 1:
        raise F2Error("max_page must be at least 1")
    data = _SSData(F)
    C = data.C
    degs = C.degrees()
    pages = []
    for r in range(1, max_page + 1):
        terms, bases = {}, {}
        for p in range(data.m):
            for q in degs:
                Z = data.Z(r, p, q)
                den = data.den(r, p, q)
                ech, reps = _quotient_basis(Z, den)
                terms[(p, q)] = len(reps)
                bases[(p, q)] = (ech, reps)
        diffs = {}
        for (p, q), (_, reps) in bases.items():
            tq = C.tgt(q)
            tgt = bases.get((p + r, tq))
            if not reps or tgt is None or not tgt[1]:
                continue
            ech_t, reps_t = tgt
            cols = []
            for v in reps:
                res, tag = ech_t.reduce_full(data.D.apply(v))
                if res:
                    raise F2Error("differential left the next page; filtration inconsistent")
                cols.append(tag)
            diffs[(p, q)] = MatrixF2.from_columns(len(reps_t), cols)
        pages.append(SpectralPage(r, terms, diffs))
    return pages


def associated_graded_homology(F: FilteredComplexF2) -> Dict[Tuple[int, int], int]:
    """Dimensions of ``F_p H / F_{p+1} H`` per (p, degree): the limit page."""
    data = _SSData(F)
    C = data.C
    Zq = {q: kernel(C.d(q)) for q in C.degrees()}
    off = C.offsets()
    out = {}

    def level(p, q):
        V = data.Fpq(p, q)
        Z = _embed(Zq[q], off[q], data.n)
        Bsrc = data.V.get(C.src(q), Subspace.zero(data.n)).image(data.D)
        return V.intersect(Z).dim - V.intersect(Bsrc).dim

    for p in range(data.m):
        for q in C.degrees():
            out[(p, q)] = level(p, q) - level(p + 1, q)
    return out


def _embed(S: Subspace, offset: int, ambient: int) -> Subspace:
    return Subspace(ambient, tuple(v << offset for v in S.basis))
